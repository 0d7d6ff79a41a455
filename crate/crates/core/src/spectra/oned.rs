//! Finite-difference eigenbasis of the 1D trap.

use super::{fermi_from_energies, FermiLevel, GridSpec, SpectraError, SymTridiag, TrapSpec1d};

/// Second-order central finite-difference discretization of
/// `H = -d^2/dxi^2 + xi^2/4 + (vp_ratio/4) sin^2(kp_xzp xi)` with hard
/// walls at +-half_width. Symmetric tridiagonal.
pub fn build_1d_hamiltonian(trap: &TrapSpec1d, grid: &GridSpec) -> SymTridiag {
    let h = grid.step();
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = grid.points().map(|xi| 2.0 * inv_h2 + trap.potential(xi)).collect();
    let off = vec![-inv_h2; grid.n_points - 1];
    SymTridiag::new(diag, off)
}

/// Numerical 1D eigenbasis on a grid. Wavefunctions are normalized to
/// unit L2 norm under the trapezoid rule (the walls carry zero weight)
/// and carry a fixed global sign: the first sample from the left that
/// clears 1e-8 of the state's maximum is positive.
#[derive(Debug, Clone)]
pub struct Basis1d {
    pub energies: Vec<f64>,
    /// One grid-sampled wavefunction per state, in energy order.
    pub wavefunctions: Vec<Vec<f64>>,
    pub grid: GridSpec,
    pub trap: TrapSpec1d,
}

/// Lowest `n_states` eigenpairs of the discretized operator.
///
/// Preconditions: `n_states` must fit in the grid, and half_width must be
/// at least 1.5 x the classical turning point 2 sqrt(e) of the highest
/// retained analytic harmonic level (the periodic potential only raises
/// levels, so the harmonic turning point is the binding check).
pub fn solve_eigenbasis(
    trap: &TrapSpec1d,
    grid: &GridSpec,
    n_states: usize,
) -> Result<Basis1d, SpectraError> {
    if n_states > grid.n_points {
        return Err(SpectraError::TooManyStates {
            requested: n_states,
            points: grid.n_points,
        });
    }
    let eps_top = n_states as f64 - 0.5;
    let required = 1.5 * 2.0 * eps_top.sqrt();
    if grid.half_width < required * (1.0 - 1e-12) {
        return Err(SpectraError::BoxTooSmall {
            half_width: grid.half_width,
            required,
        });
    }
    let operator = build_1d_hamiltonian(trap, grid);
    let (energies, mut vectors) =
        operator
            .lowest_eigenpairs(n_states)
            .ok_or(SpectraError::ConvergenceFailure {
                state: n_states,
                residual: f64::NAN,
            })?;
    let h = grid.step();
    let scale = 1.0 / h.sqrt();
    for v in vectors.iter_mut() {
        // Unit l2 vectors become unit trapezoid-rule L2 functions.
        let mx = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let flip = v
            .iter()
            .find(|x| x.abs() > 1e-8 * mx)
            .is_some_and(|&x| x < 0.0);
        let s = if flip { -scale } else { scale };
        for x in v.iter_mut() {
            *x *= s;
        }
    }
    Ok(Basis1d {
        energies,
        wavefunctions: vectors,
        grid: *grid,
        trap: *trap,
    })
}

impl Basis1d {
    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    /// Fermi level after filling the lowest `n_fermions` states.
    pub fn fermi_level(&self, n_fermions: usize) -> Result<FermiLevel, SpectraError> {
        fermi_from_energies(&self.energies, n_fermions, 0.0)
    }

    /// Wavefunction value at an arbitrary point by 4-point Lagrange
    /// interpolation on the uniform grid. Zero beyond the walls.
    pub fn value_at(&self, state: usize, xi: f64) -> f64 {
        let grid = &self.grid;
        let h = grid.step();
        if xi.abs() >= grid.half_width {
            return 0.0;
        }
        let psi = &self.wavefunctions[state];
        let t = (xi + grid.half_width) / h - 1.0; // fractional grid index
        let i1 = (t.floor() as isize).clamp(-1, grid.n_points as isize - 1);
        // Stencil i1-1 .. i1+2; out-of-range nodes are the zero walls.
        let sample = |i: isize| -> f64 {
            if i < 0 || i >= grid.n_points as isize {
                0.0
            } else {
                psi[i as usize]
            }
        };
        let u = t - i1 as f64;
        let (f0, f1, f2, f3) = (sample(i1 - 1), sample(i1), sample(i1 + 1), sample(i1 + 2));
        let c0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        let c1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        let c2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        let c3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3
    }

    /// Trapezoid-rule overlap of two states.
    pub fn overlap(&self, a: usize, b: usize) -> f64 {
        let h = self.grid.step();
        self.wavefunctions[a]
            .iter()
            .zip(&self.wavefunctions[b])
            .map(|(x, y)| x * y)
            .sum::<f64>()
            * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::hermite::harmonic_eigenfunction;

    fn fine_grid(n_states: usize) -> GridSpec {
        let e = n_states as f64 + 1.5;
        let half = 3.0 * e.sqrt() + 2.0;
        let n = (2.0 * half / 0.01) as usize | 1;
        GridSpec::new(half, n)
    }

    #[test]
    fn hamiltonian_entries_match_hand_values() {
        let trap = TrapSpec1d::harmonic(5);
        let grid = GridSpec::new(6.0, 11);
        let h = grid.step();
        let op = build_1d_hamiltonian(&trap, &grid);
        // Middle point sits at xi = 0 where the potential vanishes.
        assert!((op.diag[5] - 2.0 / (h * h)).abs() < 1e-12);
        assert!((op.off[0] + 1.0 / (h * h)).abs() < 1e-12);
        // Generic point: kinetic shift plus xi^2/4.
        let xi = grid.point(2);
        assert!((op.diag[2] - (2.0 / (h * h) + 0.25 * xi * xi)).abs() < 1e-12);
    }

    #[test]
    fn harmonic_energies_near_half_integers() {
        let trap = TrapSpec1d::harmonic(5);
        let basis = solve_eigenbasis(&trap, &fine_grid(8), 8).unwrap();
        for (n, &e) in basis.energies.iter().enumerate() {
            assert!(
                (e - (n as f64 + 0.5)).abs() < 1e-3,
                "state {n}: {e}"
            );
        }
    }

    #[test]
    fn wavefunctions_match_hermite_functions() {
        let trap = TrapSpec1d::harmonic(4);
        let basis = solve_eigenbasis(&trap, &fine_grid(6), 6).unwrap();
        let h = basis.grid.step();
        for n in 0..6 {
            // The left-positive sign convention flips odd states relative
            // to the textbook Hermite functions.
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let mut err2 = 0.0;
            for (i, xi) in basis.grid.points().enumerate() {
                let d = basis.wavefunctions[n][i] - sign * harmonic_eigenfunction(n, xi);
                err2 += d * d * h;
            }
            assert!(err2.sqrt() < 1e-3, "state {n}: L2 err {}", err2.sqrt());
        }
    }

    #[test]
    fn eigenfunctions_alternate_parity() {
        let trap = TrapSpec1d::new(6, 3.0, 2.7);
        let grid = fine_grid(8);
        let basis = solve_eigenbasis(&trap, &grid, 8).unwrap();
        let n_pts = grid.n_points;
        for n in 0..8 {
            let psi = &basis.wavefunctions[n];
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..n_pts {
                let d = psi[i] - sign * psi[n_pts - 1 - i];
                assert!(d.abs() < 1e-6, "state {n} point {i}: {d}");
            }
        }
    }

    #[test]
    fn basis_is_orthonormal_with_positive_leading_sign() {
        let trap = TrapSpec1d::harmonic(4);
        let basis = solve_eigenbasis(&trap, &fine_grid(6), 6).unwrap();
        for a in 0..6 {
            assert!((basis.overlap(a, a) - 1.0).abs() < 1e-6);
            for b in (a + 1)..6 {
                assert!(basis.overlap(a, b).abs() < 1e-6);
            }
            let psi = &basis.wavefunctions[a];
            let mx = psi.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            let first = psi.iter().find(|x| x.abs() > 1e-8 * mx).unwrap();
            assert!(*first > 0.0, "state {a} leading sign");
        }
    }

    #[test]
    fn refinement_halving_reduces_error_fourth() {
        let trap = TrapSpec1d::harmonic(4);
        let half = 14.0;
        let coarse = GridSpec::new(half, 701);
        let fine = GridSpec::new(half, 1403); // h/2
        let e_coarse = solve_eigenbasis(&trap, &coarse, 5).unwrap().energies;
        let e_fine = solve_eigenbasis(&trap, &fine, 5).unwrap().energies;
        for n in 0..5 {
            let exact = n as f64 + 0.5;
            let ratio = (e_coarse[n] - exact) / (e_fine[n] - exact);
            assert!((3.2..=4.8).contains(&ratio), "state {n}: ratio {ratio}");
        }
    }

    #[test]
    fn small_box_is_rejected() {
        let trap = TrapSpec1d::harmonic(4);
        let grid = GridSpec::new(3.0, 301);
        match solve_eigenbasis(&trap, &grid, 6) {
            Err(SpectraError::BoxTooSmall { .. }) => {}
            other => panic!("expected BoxTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn interpolation_reproduces_grid_and_midpoints() {
        let trap = TrapSpec1d::harmonic(4);
        let basis = solve_eigenbasis(&trap, &fine_grid(6), 6).unwrap();
        let h = basis.grid.step();
        for n in 0..4 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for i in [10usize, 200, 400] {
                let xi = basis.grid.point(i);
                assert!((basis.value_at(n, xi) - basis.wavefunctions[n][i]).abs() < 1e-10);
                let mid = xi + 0.5 * h;
                let exact = sign * harmonic_eigenfunction(n, mid);
                assert!((basis.value_at(n, mid) - exact).abs() < 2e-3);
            }
        }
    }
}
