//! Cosine-transform diagnostics and beat-frequency predictions.

use super::{KernelError, RadialKernel};

/// Cosine transform of a radial kernel, k in units of k_F.
#[derive(Debug, Clone)]
pub struct SpectrumSamples {
    /// Ascending, from 0 to 3 (units of k_F).
    pub k_over_kf: Vec<f64>,
    pub amplitude: Vec<f64>,
}

impl SpectrumSamples {
    pub fn k_step(&self) -> f64 {
        self.k_over_kf[1] - self.k_over_kf[0]
    }

    /// Interior local maxima of |amplitude| with quadratic position
    /// refinement, sorted by |amplitude| descending. Returns
    /// (k/k_F, amplitude).
    pub fn dominant_peaks(&self) -> Vec<(f64, f64)> {
        let a = &self.amplitude;
        let h = self.k_step();
        let mut peaks: Vec<(f64, f64)> = (1..a.len() - 1)
            .filter(|&i| a[i].abs() > a[i - 1].abs() && a[i].abs() > a[i + 1].abs())
            .map(|i| {
                let (m0, m1, m2) = (a[i - 1].abs(), a[i].abs(), a[i + 1].abs());
                let denom = m0 - 2.0 * m1 + m2;
                let dk = if denom.abs() > 0.0 {
                    0.5 * (m0 - m2) / denom * h
                } else {
                    0.0
                };
                (self.k_over_kf[i] + dk, a[i])
            })
            .collect();
        peaks.sort_by(|p, q| q.1.abs().partial_cmp(&p.1.abs()).unwrap());
        peaks
    }
}

/// Windowed transform `F~(k) = int_{r_min}^{r_max} F(r) cos(k r) dr` by
/// the trapezoid rule on the stored samples, no windowing function. The
/// k grid runs from 0 to 3 k_F with at least 300 points.
pub fn cosine_transform(
    radial: &RadialKernel,
    r_min_kfr: f64,
    r_max_kfr: f64,
    n_k: usize,
) -> Result<SpectrumSamples, KernelError> {
    if n_k < 300 {
        return Err(KernelError::Domain(format!(
            "cosine transform needs at least 300 k samples, got {n_k}"
        )));
    }
    let first = radial.r_kfr[0];
    let last = radial.max_kfr();
    if r_min_kfr < first || r_max_kfr > last || r_min_kfr >= r_max_kfr {
        return Err(KernelError::Domain(format!(
            "transform window [{r_min_kfr}, {r_max_kfr}] outside sampled range [{first}, {last}]"
        )));
    }
    let idx: Vec<usize> = radial
        .r_kfr
        .iter()
        .enumerate()
        .filter(|(_, &r)| r >= r_min_kfr && r <= r_max_kfr)
        .map(|(i, _)| i)
        .collect();
    if idx.len() < 2 {
        return Err(KernelError::Domain(
            "transform window holds fewer than two samples".into(),
        ));
    }
    let k_over_kf: Vec<f64> = (0..n_k)
        .map(|j| 3.0 * j as f64 / (n_k as f64 - 1.0))
        .collect();
    let amplitude: Vec<f64> = k_over_kf
        .iter()
        .map(|&k| {
            let mut acc = 0.0;
            for w in idx.windows(2) {
                let (i0, i1) = (w[0], w[1]);
                let dr = radial.r_kfr[i1] - radial.r_kfr[i0];
                let g0 = radial.f[i0] * (k * radial.r_kfr[i0]).cos();
                let g1 = radial.f[i1] * (k * radial.r_kfr[i1]).cos();
                acc += 0.5 * (g0 + g1) * dr;
            }
            acc
        })
        .collect();
    Ok(SpectrumSamples {
        k_over_kf,
        amplitude,
    })
}

/// Beat frequencies of the dimensional crossover,
/// `k_n = 2 k_F [1 - n * anisotropy / N]`, in units of k_F, for
/// n = 0..=n_max with non-positive entries dropped.
pub fn predicted_beat_frequencies(anisotropy: f64, n_fermions: usize, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|n| 2.0 * (1.0 - n as f64 * anisotropy / n_fermions as f64))
        .filter(|&k| k > 0.0)
        .collect()
}
