//! Lanczos ground-state solver with full reorthogonalization.

use num_complex::Complex64;

use super::{ChainHamiltonian, ManybodyError};
use crate::spectra::SymTridiag;
use crate::util::hash01;

/// Iteration cap; sectors needing more than this are treated as
/// non-convergent.
const MAX_ITER: usize = 600;
/// Ground-space degeneracy flag threshold on the Ritz gap.
const DEGENERACY_GAP: f64 = 1e-10;

/// Deterministic start vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartVector {
    /// Uniform amplitudes over the basis. Respects every lattice symmetry
    /// of the Hamiltonian, so Lanczos stays inside the symmetric sector.
    Uniform,
    /// Fixed hash-based amplitudes with no symmetry; sees every sector.
    Hashed,
}

/// Ground state of a chain sector.
#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub energy: f64,
    /// Real amplitudes over the occupation basis, unit norm.
    pub amplitudes: Vec<f64>,
    pub basis_dim: usize,
    /// |H x - E x| of the returned vector.
    pub residual: f64,
    /// Ritz estimate of the gap to the first excitation, within the
    /// Krylov space reachable from the start vector.
    pub gap: Option<f64>,
    /// Gap below [`DEGENERACY_GAP`]: the ground space looks degenerate and
    /// the returned vector is an arbitrary member.
    pub degenerate: bool,
}

/// Ground state with the uniform start vector.
pub fn ground_state(h: &ChainHamiltonian) -> Result<GroundStateResult, ManybodyError> {
    ground_state_with_start(h, StartVector::Uniform)
}

pub fn ground_state_with_start(
    h: &ChainHamiltonian,
    start: StartVector,
) -> Result<GroundStateResult, ManybodyError> {
    if h.model.boundary.twist() != 0.0 {
        return Err(ManybodyError::InvalidModel(
            "real ground-state path requires zero twist".into(),
        ));
    }
    let dim = h.dim();
    let start_vec: Vec<f64> = match start {
        StartVector::Uniform => vec![1.0; dim],
        StartVector::Hashed => (0..dim).map(|i| hash01(i as u64) - 0.5).collect(),
    };
    let out = lanczos_lowest(
        |x: &[f64], y: &mut [f64]| h.matvec_real(x, y),
        dim,
        start_vec,
        1,
    )?;
    let gap = (out.values.len() > 1).then(|| out.values[1] - out.values[0]);
    Ok(GroundStateResult {
        energy: out.values[0],
        amplitudes: out.vectors.into_iter().next().unwrap(),
        basis_dim: dim,
        residual: out.residuals[0],
        gap,
        degenerate: gap.is_some_and(|g| g < DEGENERACY_GAP),
    })
}

/// Lowest one or two states of a twisted ring (Berry-phase machinery).
pub(crate) fn lowest_complex(
    h: &ChainHamiltonian,
    n_vectors: usize,
) -> Result<MultiRitz<Complex64>, ManybodyError> {
    let dim = h.dim();
    // Fixed symmetry-free start: a symmetric start vector can be blind to
    // other symmetry sectors, which matters when checking gaps.
    let start: Vec<Complex64> = (0..dim)
        .map(|i| Complex64::new(hash01(i as u64) - 0.5, hash01(i as u64 ^ 0xabcdef) - 0.5))
        .collect();
    lanczos_lowest(
        |x: &[Complex64], y: &mut [Complex64]| h.matvec_complex(x, y),
        dim,
        start,
        n_vectors,
    )
}

pub(crate) trait LanczosScalar: Copy + Send + Sync {
    fn zero() -> Self;
    fn from_re(r: f64) -> Self;
    fn conj(self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, r: f64) -> Self;
    fn re(self) -> f64;
    fn norm_sq(self) -> f64;
}

impl LanczosScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_re(r: f64) -> Self {
        r
    }
    fn conj(self) -> Self {
        self
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn re(self) -> f64 {
        self
    }
    fn norm_sq(self) -> f64 {
        self * self
    }
}

impl LanczosScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_re(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn re(self) -> f64 {
        self.re
    }
    fn norm_sq(self) -> f64 {
        self.norm_sqr()
    }
}

pub(crate) struct MultiRitz<F> {
    /// Lowest Ritz values, one more than the returned vectors when the
    /// Krylov space allows it (for gap checks).
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<F>>,
    /// Per-vector residuals; for a block of near-degenerate vectors these
    /// are the invariant-subspace residual columns |H v_i - sum_j v_j M_ji|.
    pub residuals: Vec<f64>,
}

fn dot<F: LanczosScalar>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (&x, &y)| acc.add(x.conj().mul(y)))
}

fn norm<F: LanczosScalar>(v: &[F]) -> f64 {
    v.iter().map(|&x| x.norm_sq()).sum::<f64>().sqrt()
}

/// y += c * x
fn axpy<F: LanczosScalar>(y: &mut [F], c: F, x: &[F]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = yi.add(xi.mul(c));
    }
}

/// Lowest `n_vectors` Ritz pairs (1 or 2) of a Hermitian operator by
/// Lanczos with full reorthogonalization and a fixed start vector.
///
/// Near-degenerate pairs are returned as a converged invariant subspace;
/// the internal rotation within the pair is arbitrary, which is all the
/// downstream Wilson-loop determinant needs. An exactly degenerate pair
/// is invisible to a single Krylov sequence, so callers sample twist
/// grids away from exact crossings.
pub(crate) fn lanczos_lowest<F: LanczosScalar>(
    apply: impl Fn(&[F], &mut [F]),
    dim: usize,
    start: Vec<F>,
    n_vectors: usize,
) -> Result<MultiRitz<F>, ManybodyError> {
    assert!(dim >= 1);
    assert!((1..=2).contains(&n_vectors));
    assert_eq!(start.len(), dim);
    if dim == 1 {
        let mut y = vec![F::zero()];
        apply(&[F::from_re(1.0)], &mut y);
        return Ok(MultiRitz {
            values: vec![y[0].re()],
            vectors: vec![vec![F::from_re(1.0)]],
            residuals: vec![0.0],
        });
    }
    let mut v = start;
    let n0 = norm(&v);
    assert!(n0 > 0.0, "start vector must be nonzero");
    for x in v.iter_mut() {
        *x = x.scale(1.0 / n0);
    }
    let mut basis: Vec<Vec<F>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![F::zero(); dim];
    let max_iter = MAX_ITER.min(dim);
    let mut exhausted = false;
    let mut converged_streak = 0usize;

    for k in 0..max_iter {
        apply(&basis[k], &mut w);
        if k > 0 {
            axpy(&mut w, F::from_re(-betas[k - 1]), &basis[k - 1]);
        }
        let alpha = dot(&basis[k], &w).re();
        axpy(&mut w, F::from_re(-alpha), &basis[k]);
        // Full reorthogonalization, two passes.
        for _ in 0..2 {
            for u in &basis {
                let c = dot(u, &w);
                axpy(&mut w, c.scale(-1.0), u);
            }
        }
        alphas.push(alpha);
        let beta = norm(&w);
        let scale = alphas
            .iter()
            .map(|a| a.abs())
            .chain(betas.iter().map(|b| b.abs()))
            .fold(1.0f64, f64::max);

        if beta < 1e-14 * scale {
            exhausted = true;
            break;
        }

        // Ritz convergence: residual estimates beta * |last component|
        // for every requested pair.
        if k + 1 > n_vectors {
            let t = SymTridiag::new(alphas.clone(), betas.clone());
            if let Some((_, vecs)) = t.lowest_eigenpairs(n_vectors) {
                let worst = vecs
                    .iter()
                    .map(|s| beta * s[k].abs())
                    .fold(0.0f64, f64::max);
                if worst < 1e-10 * scale {
                    converged_streak += 1;
                    if converged_streak >= 2 {
                        break;
                    }
                } else {
                    converged_streak = 0;
                }
            }
        }
        if k + 1 == max_iter {
            break;
        }
        betas.push(beta);
        let mut next = w;
        for x in next.iter_mut() {
            *x = x.scale(1.0 / beta);
        }
        basis.push(next);
        w = vec![F::zero(); dim];
    }

    let steps = alphas.len();
    let t = SymTridiag::new(alphas.clone(), betas[..steps - 1].to_vec());
    let n_vec = n_vectors.min(steps);
    let n_val = (n_vectors + 1).min(steps);
    let (mut values, tvecs) = t
        .lowest_eigenpairs(n_val)
        .ok_or(ManybodyError::ConvergenceFailure {
            iterations: steps,
            residual: f64::NAN,
        })?;
    values.truncate(n_val);

    // Assemble Ritz vectors in the original space.
    let mut vectors: Vec<Vec<F>> = Vec::with_capacity(n_vec);
    for tv in tvecs.iter().take(n_vec) {
        let mut x = vec![F::zero(); dim];
        for (j, coeff) in tv.iter().enumerate() {
            axpy(&mut x, F::from_re(*coeff), &basis[j]);
        }
        let nx = norm(&x);
        for xi in x.iter_mut() {
            *xi = xi.scale(1.0 / nx);
        }
        vectors.push(x);
    }

    // Invariant-subspace residuals: R = H V - V (V^H H V).
    let hv: Vec<Vec<F>> = vectors
        .iter()
        .map(|x| {
            let mut hx = vec![F::zero(); dim];
            apply(x, &mut hx);
            hx
        })
        .collect();
    let mut residuals = Vec::with_capacity(n_vec);
    for (i, hx) in hv.iter().enumerate() {
        let mut r = hx.clone();
        for vj in &vectors {
            let c = dot(vj, hx);
            axpy(&mut r, c.scale(-1.0), vj);
        }
        residuals.push(norm(&r));
        let _ = i;
    }
    let scale = values[0].abs().max(1.0);
    let worst = residuals.iter().fold(0.0f64, |a, &b| a.max(b));
    if !exhausted && worst > 1e-8 * scale {
        return Err(ManybodyError::ConvergenceFailure {
            iterations: steps,
            residual: worst,
        });
    }
    Ok(MultiRitz {
        values,
        vectors,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::{build_hamiltonian, Boundary, ChainModel};

    #[test]
    fn single_state_sector_energy_is_the_diagonal() {
        let model = ChainModel::new(6, 0, 1.0, vec![2.0], Boundary::Open).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let gs = ground_state(&h).unwrap();
        assert_eq!(gs.basis_dim, 1);
        assert_eq!(gs.energy, 0.0);
        // Full chain: every bond occupied.
        let model = ChainModel::new(6, 6, 1.0, vec![2.0], Boundary::Open).unwrap();
        let gs = ground_state(&build_hamiltonian(&model).unwrap()).unwrap();
        assert_eq!(gs.energy, 10.0);
    }

    #[test]
    fn free_two_site_ground_state() {
        let model = ChainModel::new(2, 1, 1.0, vec![], Boundary::Open).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let gs = ground_state(&h).unwrap();
        assert!((gs.energy + 1.0).abs() < 1e-12);
        assert!((gs.amplitudes[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn amplitudes_are_normalized_and_residual_small() {
        let model =
            ChainModel::new(10, 5, 1.0, vec![1.5, 0.7, -0.3], Boundary::periodic()).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let gs = ground_state(&h).unwrap();
        let norm2: f64 = gs.amplitudes.iter().map(|a| a * a).sum();
        assert!((norm2 - 1.0).abs() < 1e-10);
        assert!(gs.residual < 1e-8);
        assert!(!gs.degenerate);
    }

    #[test]
    fn hashed_and_uniform_starts_agree_on_gapped_sector() {
        let model = ChainModel::new(9, 4, 1.0, vec![2.0, 0.3], Boundary::Open).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let a = ground_state_with_start(&h, StartVector::Uniform).unwrap();
        let b = ground_state_with_start(&h, StartVector::Hashed).unwrap();
        assert!((a.energy - b.energy).abs() < 1e-10);
    }

    #[test]
    fn complex_path_matches_real_at_zero_twist() {
        let model = ChainModel::new(8, 4, 1.0, vec![1.2], Boundary::periodic()).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let real = ground_state(&h).unwrap();
        let out = lowest_complex(&h, 2).unwrap();
        assert!((real.energy - out.values[0]).abs() < 1e-10);
        let n: f64 = out.vectors[0].iter().map(|c| c.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-10);
        // The doublet vectors are orthogonal.
        let ov: Complex64 = out.vectors[0]
            .iter()
            .zip(&out.vectors[1])
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(ov.norm() < 1e-8);
    }
}
