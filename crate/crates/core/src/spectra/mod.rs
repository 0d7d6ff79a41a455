//! Single-particle eigenproblems for the fermionic mediator.
//!
//! Trap units throughout: the 1D Hamiltonian is
//! `H = -d^2/dxi^2 + xi^2/4 + (vp_ratio/4) sin^2(kp_xzp * xi)`
//! with xi = x / x_zp and energies in units of hbar omega_x. The periodic
//! part enters as `vp_ratio = V_p / V_h` with V_h = hbar omega_x / 4. The
//! anisotropic 2D trap separates into products of the same oscillator, so
//! its basis is assembled analytically from Hermite functions.

pub mod hermite;
mod oned;
mod tridiag;
mod twod;

pub use oned::{build_1d_hamiltonian, solve_eigenbasis, Basis1d};
pub use tridiag::SymTridiag;
pub use twod::{auto_basis, build_2d_basis, count_states_below, nth_level_energy, Basis2d, State2d};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("box too small: half_width {half_width} must exceed 1.5 x the classical turning point {required} of the highest retained harmonic level")]
    BoxTooSmall { half_width: f64, required: f64 },
    #[error("eigensolver failed to converge for state {state}: residual {residual}")]
    ConvergenceFailure { state: usize, residual: f64 },
    #[error("energy cutoff {e_max} holds only {available} states, need {needed}")]
    CutoffTooSmall {
        e_max: f64,
        available: usize,
        needed: usize,
    },
    #[error("basis holds {available} states, need {needed}")]
    InsufficientBasis { available: usize, needed: usize },
    #[error("requested {requested} states from a grid with {points} points")]
    TooManyStates { requested: usize, points: usize },
}

/// 1D trap parameters: harmonic confinement plus an optional periodic
/// potential `V_p sin^2(k_p x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapSpec1d {
    pub n_fermions: usize,
    /// V_p / V_h with V_h = hbar omega_x / 4.
    pub vp_ratio: f64,
    /// k_p x_zp. The hybridizing choice is sqrt(N).
    pub kp_xzp: f64,
}

impl TrapSpec1d {
    /// Periodic-potential trap with an explicit lattice wavevector.
    pub fn new(n_fermions: usize, vp_ratio: f64, kp_xzp: f64) -> Self {
        assert!(n_fermions >= 1, "need at least one fermion");
        assert!(vp_ratio >= 0.0, "vp_ratio must be non-negative");
        assert!(kp_xzp > 0.0, "kp_xzp must be positive");
        Self {
            n_fermions,
            vp_ratio,
            kp_xzp,
        }
    }

    /// Pure harmonic trap. kp_xzp defaults to sqrt(N) so a later periodic
    /// potential hybridizes with the nodes of the highest occupied state.
    pub fn harmonic(n_fermions: usize) -> Self {
        Self::new(n_fermions, 0.0, (n_fermions as f64).sqrt())
    }

    /// Potential at xi, in units of hbar omega_x.
    pub fn potential(&self, xi: f64) -> f64 {
        let s = (self.kp_xzp * xi).sin();
        0.25 * xi * xi + 0.25 * self.vp_ratio * s * s
    }
}

/// 2D trap parameters: anisotropy = omega_z / omega_x. The gas crosses
/// over from 2D (anisotropy = 1) to effectively 1D for anisotropy/N >> 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapSpec2d {
    pub n_fermions: usize,
    pub anisotropy: f64,
}

impl TrapSpec2d {
    pub fn new(n_fermions: usize, anisotropy: f64) -> Self {
        assert!(n_fermions >= 1, "need at least one fermion");
        assert!(anisotropy > 0.0, "anisotropy must be positive");
        Self {
            n_fermions,
            anisotropy,
        }
    }
}

/// Uniform grid, symmetric about xi = 0, with hard walls at +-half_width.
/// The stored points are the interior nodes; the wavefunction vanishes at
/// the walls. n_points is kept odd so xi = 0 is a grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub half_width: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, n_points: usize) -> Self {
        assert!(half_width > 0.0, "half_width must be positive");
        assert!(n_points >= 2, "need at least two grid points");
        Self {
            half_width,
            n_points,
        }
    }

    /// Grid step; walls sit one step beyond the first/last interior node.
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.n_points as f64 + 1.0)
    }

    pub fn point(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 1.0) * self.step()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// Default grid for a solve retaining `n_states` states of `trap`.
    ///
    /// half_width = 1.5 x the classical turning point 2 sqrt(e_max), with
    /// e_max bounded by the harmonic level plus the full periodic-potential
    /// amplitude. The step resolves both the local de Broglie wavelength at
    /// e_max and the lattice period pi/kp by at least `points_per_wave`
    /// samples (12 is the working default).
    pub fn for_trap(trap: &TrapSpec1d, n_states: usize, points_per_wave: usize) -> Self {
        assert!(n_states >= 1);
        let e_bound = (n_states as f64 - 0.5) + 0.25 * trap.vp_ratio;
        let half_width = 1.5 * 2.0 * e_bound.sqrt();
        let mut h = 2.0 * std::f64::consts::PI / e_bound.sqrt() / points_per_wave as f64;
        if trap.vp_ratio > 0.0 {
            h = h.min(std::f64::consts::PI / trap.kp_xzp / points_per_wave as f64);
        }
        let mut n = (2.0 * half_width / h - 1.0).ceil() as usize;
        if n % 2 == 0 {
            n += 1;
        }
        Self::new(half_width, n)
    }
}

/// Fermi level of a filled sea of `n_fermions` states.
///
/// Energies are measured so that eps_f equals the longitudinal kinetic
/// scale at the trap center: in 2D the transverse zero-point a/2 is
/// subtracted from the N-th level, which makes k_f x_zp = sqrt(eps_f) the
/// momentum that sets the 2 k_F oscillation of the mediated kernel in both
/// dimensionalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiLevel {
    /// Energy of the N-th state (transverse zero-point removed in 2D).
    pub eps_f: f64,
    /// k_F x_zp = sqrt(eps_f).
    pub k_f: f64,
    /// True when the N-th and (N+1)-th levels are degenerate, i.e. the
    /// nominal filling leaves a shell partially occupied.
    pub open_shell: bool,
}

pub(crate) fn fermi_from_energies(
    energies: &[f64],
    n_fermions: usize,
    transverse_zp: f64,
) -> Result<FermiLevel, SpectraError> {
    if energies.len() < n_fermions || n_fermions == 0 {
        return Err(SpectraError::InsufficientBasis {
            available: energies.len(),
            needed: n_fermions.max(1),
        });
    }
    let eps_n = energies[n_fermions - 1];
    let open_shell = energies
        .get(n_fermions)
        .is_some_and(|&next| next - eps_n < DEGENERACY_TOL * eps_n.abs().max(1.0));
    let eps_f = eps_n - transverse_zp;
    Ok(FermiLevel {
        eps_f,
        k_f: eps_f.max(0.0).sqrt(),
        open_shell,
    })
}

/// Relative tolerance below which two levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Largest closed-shell occupation nearest to `n_fermions`.
///
/// Scans down and up from the nominal filling until the occupation
/// boundary falls on a genuine gap, and returns the closer of the two
/// (preferring the larger sea on a tie). The boolean is true when the
/// filling was adjusted. Needed whenever a commensurate 2D anisotropy puts
/// the nominal Fermi level inside a degenerate multiplet.
pub fn closed_shell_filling(energies: &[f64], n_fermions: usize) -> (usize, bool) {
    let gap_at = |n: usize| -> bool {
        if n == 0 || n >= energies.len() {
            return true;
        }
        energies[n] - energies[n - 1] >= DEGENERACY_TOL * energies[n - 1].abs().max(1.0)
    };
    if gap_at(n_fermions) {
        return (n_fermions, false);
    }
    let mut down = n_fermions;
    while !gap_at(down) {
        down -= 1;
    }
    let mut up = n_fermions;
    while !gap_at(up) {
        up += 1;
    }
    if n_fermions - down < up - n_fermions {
        (down, true)
    } else {
        (up, true)
    }
}
