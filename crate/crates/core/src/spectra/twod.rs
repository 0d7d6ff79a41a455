//! Analytic eigenbasis of the anisotropic 2D trap.
//!
//! Separable states psi_{nx}(xi_x) * a^(1/4) psi_{nz}(sqrt(a) xi_z) with
//! energy (nx + 1/2) + a (nz + 1/2), a = omega_z / omega_x. Ordered by
//! energy with lexicographic (nx, nz) tie-break so commensurate
//! anisotropies stay reproducible.

use super::{fermi_from_energies, FermiLevel, SpectraError, TrapSpec2d};
use crate::spectra::hermite;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State2d {
    pub nx: u32,
    pub nz: u32,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct Basis2d {
    pub anisotropy: f64,
    /// States sorted by (energy, nx, nz).
    pub states: Vec<State2d>,
    pub e_max: f64,
}

/// Number of states with energy <= e (exact counting, no allocation).
pub fn count_states_below(anisotropy: f64, e: f64) -> usize {
    let mut count = 0usize;
    let mut nz = 0u32;
    loop {
        let ez = anisotropy * (nz as f64 + 0.5) + 0.5;
        if ez > e {
            break;
        }
        count += (e - ez).floor() as usize + 1;
        nz += 1;
    }
    count
}

/// Exact energy of the N-th level (1-based) by bisection on the counting
/// function.
pub fn nth_level_energy(anisotropy: f64, n: usize) -> f64 {
    assert!(n >= 1);
    let mut lo = 0.0f64;
    let mut hi = anisotropy.max(1.0) * (n as f64 + 2.0);
    while count_states_below(anisotropy, hi) < n {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_states_below(anisotropy, mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    hi
}

/// Basis sized by an energy cutoff of `e_max_factor` times the exact
/// Fermi-level energy, with the filling completed to the nearest closed
/// shell. Returns (basis, effective filling, fermi level, adjusted flag).
pub fn auto_basis(
    trap: &TrapSpec2d,
    e_max_factor: f64,
) -> Result<(Basis2d, usize, FermiLevel, bool), SpectraError> {
    assert!(e_max_factor > 1.0);
    let eps_n = nth_level_energy(trap.anisotropy, trap.n_fermions);
    let e_max = e_max_factor * eps_n + 1.0;
    let basis = build_2d_basis(trap, e_max)?;
    let energies = basis.energies();
    let (n_eff, adjusted) = super::closed_shell_filling(&energies, trap.n_fermions);
    let fermi = basis.fermi_level(n_eff)?;
    Ok((basis, n_eff, fermi, adjusted))
}

/// All tensor-product states with energy <= e_max.
pub fn build_2d_basis(trap: &TrapSpec2d, e_max: f64) -> Result<Basis2d, SpectraError> {
    let a = trap.anisotropy;
    let mut states = Vec::new();
    let mut nz = 0u32;
    loop {
        let ez = a * (nz as f64 + 0.5);
        if ez + 0.5 > e_max {
            break;
        }
        let nx_max = (e_max - ez - 0.5).floor() as u32;
        for nx in 0..=nx_max {
            let energy = (nx as f64 + 0.5) + ez;
            if energy <= e_max {
                states.push(State2d { nx, nz, energy });
            }
        }
        nz += 1;
    }
    states.sort_by(|p, q| {
        p.energy
            .partial_cmp(&q.energy)
            .unwrap()
            .then(p.nx.cmp(&q.nx))
            .then(p.nz.cmp(&q.nz))
    });
    if states.len() < trap.n_fermions {
        return Err(SpectraError::CutoffTooSmall {
            e_max,
            available: states.len(),
            needed: trap.n_fermions,
        });
    }
    Ok(Basis2d {
        anisotropy: a,
        states,
        e_max,
    })
}

impl Basis2d {
    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    /// Fermi level with the transverse zero-point a/2 removed, so that
    /// k_f = sqrt(eps_f) is the longitudinal momentum of the lowest
    /// transverse branch. In the strongly anisotropic limit this matches
    /// the 1D Fermi momentum of the same particle number.
    pub fn fermi_level(&self, n_fermions: usize) -> Result<FermiLevel, SpectraError> {
        let energies = self.energies();
        fermi_from_energies(&energies, n_fermions, 0.5 * self.anisotropy)
    }

    /// Largest nx among the stored states.
    pub fn nx_max(&self) -> u32 {
        self.states.iter().map(|s| s.nx).max().unwrap_or(0)
    }

    /// Transverse factor of each state on the z = 0 axis:
    /// a^(1/4) psi_{nz}(0). Exactly zero for odd nz.
    pub fn axis_z_factor(&self, state: usize) -> f64 {
        let nz = self.states[state].nz as usize;
        self.anisotropy.powf(0.25) * hermite::harmonic_eigenfunction(nz, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_counting_below_two_and_half() {
        let trap = TrapSpec2d::new(1, 1.0);
        let basis = build_2d_basis(&trap, 2.5).unwrap();
        assert_eq!(basis.n_states(), 3);
        let labels: Vec<(u32, u32)> = basis.states.iter().map(|s| (s.nx, s.nz)).collect();
        assert_eq!(labels[0], (0, 0));
        // Degenerate second shell resolved lexicographically by (nx, nz).
        assert_eq!(labels[1], (0, 1));
        assert_eq!(labels[2], (1, 0));
    }

    #[test]
    fn strong_anisotropy_occupies_only_lowest_branch() {
        let trap = TrapSpec2d::new(10, 1000.0);
        let basis = build_2d_basis(&trap, 3.0 * 1000.0).unwrap();
        for s in basis.states.iter().take(10) {
            assert_eq!(s.nz, 0);
        }
    }

    #[test]
    fn commensurate_tie_breaks_lexicographically() {
        // anisotropy = 2: (2,0) and (0,1) are both at energy 3.5.
        let trap = TrapSpec2d::new(1, 2.0);
        let basis = build_2d_basis(&trap, 4.0).unwrap();
        let e20 = basis
            .states
            .iter()
            .position(|s| (s.nx, s.nz) == (2, 0))
            .unwrap();
        let e01 = basis
            .states
            .iter()
            .position(|s| (s.nx, s.nz) == (0, 1))
            .unwrap();
        assert!((basis.states[e20].energy - basis.states[e01].energy).abs() < 1e-14);
        assert!(e01 < e20, "(0,1) must order before (2,0)");
    }

    #[test]
    fn ordering_is_total_and_ascending() {
        let trap = TrapSpec2d::new(5, 0.7);
        let basis = build_2d_basis(&trap, 12.0).unwrap();
        for w in basis.states.windows(2) {
            assert!(w[0].energy <= w[1].energy + 1e-14);
            if (w[0].energy - w[1].energy).abs() < 1e-14 {
                assert!((w[0].nx, w[0].nz) < (w[1].nx, w[1].nz));
            }
        }
    }

    #[test]
    fn cutoff_too_small_is_reported() {
        let trap = TrapSpec2d::new(50, 1.0);
        match build_2d_basis(&trap, 3.0) {
            Err(SpectraError::CutoffTooSmall { available, .. }) => assert!(available < 50),
            other => panic!("expected CutoffTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn fermi_level_strips_transverse_zero_point() {
        // Isotropic, N = 3: third state at full energy 2.0; reported
        // Fermi energy drops the transverse zero-point 0.5.
        let trap = TrapSpec2d::new(3, 1.0);
        let basis = build_2d_basis(&trap, 6.0).unwrap();
        let f = basis.fermi_level(3).unwrap();
        assert!((f.eps_f - 1.5).abs() < 1e-12);
        assert!(!f.open_shell); // (1,0) closes the second shell at N = 3.
        assert!(basis.fermi_level(2).unwrap().open_shell);
        // N = 1: ground state energy 1.0 -> eps_f = 0.5.
        let f = basis.fermi_level(1).unwrap();
        assert!((f.eps_f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn counting_matches_enumeration() {
        let trap = TrapSpec2d::new(10, 0.7);
        let basis = build_2d_basis(&trap, 15.0).unwrap();
        for e in [2.0, 5.5, 9.3, 15.0] {
            let direct = basis.states.iter().filter(|s| s.energy <= e).count();
            assert_eq!(count_states_below(0.7, e), direct, "e = {e}");
        }
        // nth level energy agrees with the sorted list.
        for n in [1usize, 5, 17, 40] {
            let e = nth_level_energy(0.7, n);
            assert!((e - basis.states[n - 1].energy).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn auto_basis_closes_isotropic_shells() {
        let trap = TrapSpec2d::new(250, 1.0);
        let (basis, n_eff, fermi, adjusted) = auto_basis(&trap, 3.0).unwrap();
        assert!(adjusted);
        assert_eq!(n_eff, 253);
        // shell 21 fills at full energy 22; transverse zero-point removed.
        assert!((fermi.eps_f - 21.5).abs() < 1e-9);
        assert!(basis.n_states() >= 3 * 22 * 21);
    }

    #[test]
    fn axis_factor_vanishes_for_odd_nz() {
        let trap = TrapSpec2d::new(2, 1.5);
        let basis = build_2d_basis(&trap, 9.0).unwrap();
        for (i, s) in basis.states.iter().enumerate() {
            let f = basis.axis_z_factor(i);
            if s.nz % 2 == 1 {
                assert_eq!(f, 0.0);
            } else {
                assert!(f.abs() > 0.0);
            }
        }
    }
}
