//! Fixed-particle-number occupation basis with combinatorial indexing.

use super::{ManybodyError, MAX_SITES};

/// All length-L bit configurations with exactly n set bits, enumerated in
/// increasing binary order. Rank/unrank run in O(L) through the
/// combinatorial number system (colexicographic order of the set-bit
/// positions coincides with integer order).
#[derive(Debug, Clone)]
pub struct FixedNumberBasis {
    pub length: usize,
    pub n_bosons: usize,
    states: Vec<u64>,
    /// binomial[n][k] = C(n, k) for n, k <= MAX_SITES.
    binomial: Vec<Vec<u64>>,
}

pub fn build_basis(length: usize, n_bosons: usize) -> Result<FixedNumberBasis, ManybodyError> {
    if length > MAX_SITES {
        return Err(ManybodyError::Size { length });
    }
    if n_bosons > length {
        return Err(ManybodyError::InvalidModel(format!(
            "{n_bosons} bosons on {length} sites"
        )));
    }
    let binomial = binomial_table(MAX_SITES);
    let dim = binomial[length][n_bosons] as usize;
    let mut states = Vec::with_capacity(dim);
    if n_bosons == 0 {
        states.push(0);
    } else {
        let mut s: u64 = (1 << n_bosons) - 1;
        let top: u64 = 1 << length;
        while s < top {
            states.push(s);
            // Gosper's hack: next bit pattern with the same popcount.
            let c = s & s.wrapping_neg();
            let r = s + c;
            if r >= top || c == 0 {
                break;
            }
            s = r | (((s ^ r) >> 2) / c);
        }
    }
    debug_assert_eq!(states.len(), dim);
    Ok(FixedNumberBasis {
        length,
        n_bosons,
        states,
        binomial,
    })
}

impl FixedNumberBasis {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, index: usize) -> u64 {
        self.states[index]
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    /// Index of a configuration: sum over ascending set-bit positions c_j
    /// (j = 1..=n) of C(c_j, j).
    pub fn rank(&self, state: u64) -> usize {
        debug_assert_eq!(state.count_ones() as usize, self.n_bosons);
        let mut r = 0u64;
        let mut remaining = state;
        let mut j = 1usize;
        while remaining != 0 {
            let pos = remaining.trailing_zeros() as usize;
            r += self.binomial[pos][j];
            remaining &= remaining - 1;
            j += 1;
        }
        r as usize
    }

    /// Inverse of [`FixedNumberBasis::rank`].
    pub fn unrank(&self, index: usize) -> u64 {
        debug_assert!(index < self.dim());
        let mut r = index as u64;
        let mut state = 0u64;
        for j in (1..=self.n_bosons).rev() {
            // Largest position c with C(c, j) <= r.
            let mut c = j - 1;
            while c + 1 < 64 && self.binomial.get(c + 1).is_some_and(|row| row[j] <= r) {
                c += 1;
            }
            r -= self.binomial[c][j];
            state |= 1 << c;
        }
        state
    }
}

fn binomial_table(n_max: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; n_max + 1]; n_max + 1];
    for (n, row) in b.iter_mut().enumerate() {
        row[0] = 1;
        for k in 1..=n {
            row[k] = if k == n { 1 } else { 0 };
        }
    }
    for n in 1..=n_max {
        for k in 1..n {
            b[n][k] = b[n - 1][k - 1] + b[n - 1][k];
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_choose_two_in_binary_order() {
        let basis = build_basis(4, 2).unwrap();
        assert_eq!(basis.dim(), 6);
        assert_eq!(basis.state(0), 0b0011);
        let all: Vec<u64> = basis.states().to_vec();
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
    }

    #[test]
    fn half_filled_twelve_site_dimension() {
        let basis = build_basis(12, 6).unwrap();
        assert_eq!(basis.dim(), 924);
    }

    #[test]
    fn empty_and_full_sectors_are_single_states() {
        let basis = build_basis(6, 0).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.state(0), 0);
        let basis = build_basis(6, 6).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.state(0), 0b111111);
    }

    #[test]
    fn oversized_chain_is_rejected() {
        assert!(matches!(
            build_basis(25, 3),
            Err(ManybodyError::Size { length: 25 })
        ));
    }

    #[test]
    fn rank_inverts_enumeration_order() {
        let basis = build_basis(10, 4).unwrap();
        for i in 0..basis.dim() {
            assert_eq!(basis.rank(basis.state(i)), i);
            assert_eq!(basis.unrank(i), basis.state(i));
        }
    }

    proptest! {
        #[test]
        fn rank_unrank_roundtrip(length in 1usize..=20, seed in 0u64..1u64 << 32) {
            let n = (seed as usize) % (length + 1);
            let basis = build_basis(length, n).unwrap();
            let index = (seed as usize) % basis.dim();
            prop_assert_eq!(basis.rank(basis.unrank(index)), index);
        }
    }
}
