//! Sparse chain Hamiltonian in the fixed-number basis.

use num_complex::Complex64;

use super::{build_basis, ChainModel, FixedNumberBasis, ManybodyError};

/// Row-compressed Hamiltonian. The diagonal carries the density-density
/// couplings; off-diagonal hops all have amplitude -t, with the wrap bond
/// tagged by the direction its phase takes under a boundary twist:
/// `<row|H|col> = -t e^{i dir theta}`.
pub struct ChainHamiltonian {
    pub model: ChainModel,
    pub basis: FixedNumberBasis,
    diag: Vec<f64>,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    /// 0 for interior bonds, +-1 for the twisted wrap bond.
    phase_dir: Vec<i8>,
}

pub fn build_hamiltonian(model: &ChainModel) -> Result<ChainHamiltonian, ManybodyError> {
    let basis = build_basis(model.length, model.n_bosons)?;
    let dim = basis.dim();
    let length = model.length;
    let periodic = model.boundary.is_periodic();
    let range = model.couplings.len();

    let mut diag = Vec::with_capacity(dim);
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols: Vec<u32> = Vec::new();
    let mut phase_dir: Vec<i8> = Vec::new();
    row_ptr.push(0);

    for idx in 0..dim {
        let state = basis.state(idx);
        // Density-density diagonal.
        let mut e = 0.0;
        for s in 1..=range {
            let v = model.couplings[s - 1];
            if v == 0.0 {
                continue;
            }
            let bond_count = if periodic { length } else { length - s.min(length) };
            for j in 0..bond_count {
                let k = (j + s) % length;
                if state >> j & 1 == 1 && state >> k & 1 == 1 {
                    e += v;
                }
            }
        }
        diag.push(e);
        // Hopping: one entry per neighbor differing by a single bond move.
        let bonds = if periodic { length } else { length - 1 };
        for j in 0..bonds {
            let k = (j + 1) % length;
            let bj = state >> j & 1;
            let bk = state >> k & 1;
            if bj == bk {
                continue;
            }
            let target = state ^ ((1 << j) | (1 << k));
            cols.push(basis.rank(target) as u32);
            let dir = if periodic && k == 0 {
                // Wrap bond: phase +theta when the boson moves from site
                // L-1 to site 0, i.e. the target gained the bit at 0.
                if bj == 1 {
                    1
                } else {
                    -1
                }
            } else {
                0
            };
            phase_dir.push(dir);
        }
        row_ptr.push(cols.len());
    }
    Ok(ChainHamiltonian {
        model: model.clone(),
        basis,
        diag,
        row_ptr,
        cols,
        phase_dir,
    })
}

impl ChainHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// y = H x for a real vector. Valid only when the twist is zero.
    pub fn matvec_real(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(self.model.boundary.twist(), 0.0);
        let t = self.model.hopping;
        for i in 0..self.dim() {
            let mut acc = self.diag[i] * x[i];
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc -= t * x[self.cols[e] as usize];
            }
            y[i] = acc;
        }
    }

    /// y = H x with the wrap-bond phase taken from the model twist.
    pub fn matvec_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        let t = self.model.hopping;
        let theta = self.model.boundary.twist();
        let phase = Complex64::from_polar(1.0, theta);
        let amp = [-t * phase.conj(), Complex64::new(-t, 0.0), -t * phase];
        for i in 0..self.dim() {
            let mut acc = x[i] * self.diag[i];
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += amp[(self.phase_dir[e] + 1) as usize] * x[self.cols[e] as usize];
            }
            y[i] = acc;
        }
    }

    /// Dense matrix (test/oracle use only).
    pub fn dense_complex(&self) -> Vec<Vec<Complex64>> {
        let dim = self.dim();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        let mut x = vec![Complex64::new(0.0, 0.0); dim];
        let mut y = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            x[j] = Complex64::new(1.0, 0.0);
            self.matvec_complex(&x, &mut y);
            for i in 0..dim {
                m[i][j] = y[i];
            }
            x[j] = Complex64::new(0.0, 0.0);
        }
        m
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::Boundary;

    /// Occupied nearest-neighbor pairs of a configuration.
    fn adjacent_pairs(state: u64, length: usize, periodic: bool) -> usize {
        let bonds = if periodic { length } else { length - 1 };
        (0..bonds)
            .filter(|&j| {
                let k = (j + 1) % length;
                state >> j & 1 == 1 && state >> k & 1 == 1
            })
            .count()
    }

    fn eigenvalues_2x2(h: &ChainHamiltonian) -> Vec<f64> {
        let m = h.dense_complex();
        let (a, b, c, d) = (m[0][0].re, m[0][1].re, m[1][0].re, m[1][1].re);
        assert!((b - c).abs() < 1e-14);
        let tr = a + d;
        let det = a * d - b * c;
        let disc = (tr * tr / 4.0 - det).sqrt();
        vec![tr / 2.0 - disc, tr / 2.0 + disc]
    }

    #[test]
    fn two_site_hopping_eigenvalues() {
        let model = ChainModel::new(2, 1, 1.0, vec![], Boundary::Open).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let e = eigenvalues_2x2(&h);
        assert!((e[0] + 1.0).abs() < 1e-12);
        assert!((e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn twist_of_two_pi_equals_zero_twist() {
        let m0 = ChainModel::new(6, 3, 1.0, vec![0.7], Boundary::periodic()).unwrap();
        // 2 pi is outside [0, 2 pi) by the model contract; compare the
        // matvec at theta -> 2 pi against theta = 0 directly.
        let h0 = build_hamiltonian(&m0).unwrap();
        let m1 = m0.with_twist(2.0 * std::f64::consts::PI * (1.0 - 1e-16)).unwrap();
        let h1 = build_hamiltonian(&m1).unwrap();
        let dim = h0.dim();
        let x: Vec<Complex64> = (0..dim)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64).cos()))
            .collect();
        let mut y0 = vec![Complex64::new(0.0, 0.0); dim];
        let mut y1 = vec![Complex64::new(0.0, 0.0); dim];
        h0.matvec_complex(&x, &mut y0);
        h1.matvec_complex(&x, &mut y1);
        for i in 0..dim {
            assert!((y0[i] - y1[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn diagonal_counts_neighbor_pairs() {
        // v1 = 2 on a periodic 8-ring.
        let model = ChainModel::new(8, 4, 1.0, vec![2.0], Boundary::periodic()).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let idx_alt = h.basis.rank(0b10101010);
        assert_eq!(h.diagonal()[idx_alt], 0.0);
        let idx_block = h.basis.rank(0b11110000);
        // Three adjacent pairs inside the block; the wrap bond (7,0) is
        // unoccupied on one side.
        assert_eq!(adjacent_pairs(0b11110000, 8, true), 3);
        assert_eq!(h.diagonal()[idx_block], 6.0);
    }

    #[test]
    fn hermiticity_under_twist() {
        let model = ChainModel::new(6, 3, 1.0, vec![1.0, 0.5], Boundary::Open).unwrap();
        let model = ChainModel::new(
            model.length,
            model.n_bosons,
            model.hopping,
            model.couplings,
            Boundary::Periodic { twist: 1.234 },
        )
        .unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let m = h.dense_complex();
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                assert!((m[i][j] - m[j][i].conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn matvec_real_matches_complex_at_zero_twist() {
        let model = ChainModel::new(8, 3, 1.0, vec![0.9, -0.4], Boundary::periodic()).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let dim = h.dim();
        let xr: Vec<f64> = (0..dim).map(|i| (i as f64 * 0.7).sin()).collect();
        let xc: Vec<Complex64> = xr.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut yr = vec![0.0; dim];
        let mut yc = vec![Complex64::new(0.0, 0.0); dim];
        h.matvec_real(&xr, &mut yr);
        h.matvec_complex(&xc, &mut yc);
        for i in 0..dim {
            assert!((yr[i] - yc[i].re).abs() < 1e-13);
            assert!(yc[i].im.abs() < 1e-13);
        }
    }
}
