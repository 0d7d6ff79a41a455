//! Exact diagonalization of a hardcore-boson chain with long-range
//! density-density couplings.
//!
//! The chain Hamiltonian is
//!
//! ```text
//! H = -t sum_j (b+_j b_{j+1} + h.c.) + sum_{j, s <= R} v_s n_j n_{j+s}
//! ```
//!
//! in the fixed-particle-number hardcore sector (site occupations 0/1).
//! Under periodic boundaries the boundary hop carries a twist phase
//! e^{i theta}; sweeping theta through 2 pi yields the Berry phase that
//! distinguishes the bond-order-wave phase from trivial density waves.

mod basis;
mod berry;
mod hamiltonian;
mod lanczos;
mod observables;
mod scan;

pub use basis::{build_basis, FixedNumberBasis};
pub use berry::{angle_distance, berry_phase, twist_ground_states, wilson_loop_phase, GroundMultiplet};
pub use hamiltonian::{build_hamiltonian, ChainHamiltonian};
pub use lanczos::{ground_state, ground_state_with_start, GroundStateResult, StartVector};
pub use observables::{
    bond_observables, edge_profile, observable_set, structure_factor, ObservableSet,
    StructureFactor,
};
pub use scan::{phase_scan, rescale_couplings, truncation_range, PhaseCell, PhaseScanParams, PhaseScanRow};

use thiserror::Error;

/// Largest chain length the occupation-basis machinery accepts.
pub const MAX_SITES: usize = 24;

#[derive(Debug, Error)]
pub enum ManybodyError {
    #[error("chain length {length} exceeds the {MAX_SITES}-site limit")]
    Size { length: usize },
    #[error("invalid chain model: {0}")]
    InvalidModel(String),
    #[error("lanczos failed to converge within {iterations} iterations (residual {residual:.3e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },
    #[error("ground state degenerate at twist {twist:.6} (gap {gap:.3e})")]
    Degeneracy { twist: f64, gap: f64 },
}

/// Boundary condition of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Open,
    /// Periodic with a twist phase on the wrap bond, theta in [0, 2 pi).
    Periodic { twist: f64 },
}

impl Boundary {
    pub fn periodic() -> Self {
        Boundary::Periodic { twist: 0.0 }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Boundary::Periodic { .. })
    }

    pub fn twist(&self) -> f64 {
        match self {
            Boundary::Open => 0.0,
            Boundary::Periodic { twist } => *twist,
        }
    }
}

/// Hardcore-boson chain with hopping t, couplings v_1..v_R and a boundary
/// condition. Density rho = n_bosons / length.
#[derive(Debug, Clone)]
pub struct ChainModel {
    pub length: usize,
    pub n_bosons: usize,
    pub hopping: f64,
    /// v_s at site distance s = 1..=R.
    pub couplings: Vec<f64>,
    pub boundary: Boundary,
}

impl ChainModel {
    pub fn new(
        length: usize,
        n_bosons: usize,
        hopping: f64,
        couplings: Vec<f64>,
        boundary: Boundary,
    ) -> Result<Self, ManybodyError> {
        if length > MAX_SITES {
            return Err(ManybodyError::Size { length });
        }
        if length == 0 || n_bosons > length {
            return Err(ManybodyError::InvalidModel(format!(
                "{n_bosons} bosons on {length} sites"
            )));
        }
        if hopping <= 0.0 {
            return Err(ManybodyError::InvalidModel(format!(
                "hopping {hopping} must be positive"
            )));
        }
        if boundary.is_periodic() && 2 * couplings.len() >= length {
            return Err(ManybodyError::InvalidModel(format!(
                "coupling range {} must stay below length/2 = {} on a ring",
                couplings.len(),
                length / 2
            )));
        }
        let twist = boundary.twist();
        if !(0.0..2.0 * std::f64::consts::PI).contains(&twist) {
            return Err(ManybodyError::InvalidModel(format!(
                "twist {twist} outside [0, 2 pi)"
            )));
        }
        Ok(Self {
            length,
            n_bosons,
            hopping,
            couplings,
            boundary,
        })
    }

    pub fn density(&self) -> f64 {
        self.n_bosons as f64 / self.length as f64
    }

    pub fn with_twist(&self, twist: f64) -> Result<Self, ManybodyError> {
        Self::new(
            self.length,
            self.n_bosons,
            self.hopping,
            self.couplings.clone(),
            Boundary::Periodic { twist },
        )
    }
}
