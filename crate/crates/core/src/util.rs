//! Small numeric helpers shared across modules.

/// Pairwise (cascade) summation. Fixed association order, independent of
/// thread count, so every caller gets bit-identical reductions.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 64;
    if values.len() <= BASE {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Deterministic pseudo-random value in [0, 1) from an integer index
/// (splitmix64 finalizer). Used for fixed, symmetry-free start vectors.
pub fn hash01(i: u64) -> f64 {
    let mut z = i.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Least-squares straight line y = a + b x. Returns (a, b, r_squared).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let sx = pairwise_sum(x);
    let sy = pairwise_sum(y);
    let mx = sx / n;
    let my = sy / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let r2 = if sxx > 0.0 && syy > 0.0 {
        (sxy * sxy) / (sxx * syy)
    } else {
        1.0
    };
    (a, b, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (0..257).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-12);
    }

    #[test]
    fn hash01_is_in_unit_interval_and_deterministic() {
        for i in 0..1000 {
            let h = hash01(i);
            assert!((0.0..1.0).contains(&h));
            assert_eq!(h.to_bits(), hash01(i).to_bits());
        }
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&xi| 2.5 - 0.75 * xi).collect();
        let (a, b, r2) = linear_fit(&x, &y);
        assert!((a - 2.5).abs() < 1e-12);
        assert!((b + 0.75).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
