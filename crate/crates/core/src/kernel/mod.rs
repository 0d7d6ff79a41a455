//! Fermion-mediated interaction kernels.
//!
//! The mediated potential between two static bosons is the second-order
//! particle-hole sum over a filled Fermi sea,
//!
//! ```text
//! F(x, x') = - sum_{n occ, m unocc} psi_n(x) psi_m(x) psi_n(x') psi_m(x') / (eps_m - eps_n)
//! ```
//!
//! computed with the overall prefactor G = 2 m g_bf^2 / (hbar^2 x_zp^4)
//! factored out and carried as metadata. Radial profiles are sampled
//! between symmetric points (-r/2, +r/2) through the trap center and
//! stored on a k_F r grid, which makes every downstream comparison
//! dimensionless.

mod analysis;
mod asymptotic;
mod pair_sum;
mod spectrum;

pub use analysis::{extract_maxima, fit_yukawa, DecayFit, ELL_UNSCREENED};
pub use asymptotic::{asymptotic_f1d, asymptotic_f2d};
pub use pair_sum::{
    mediated_kernel_1d, mediated_kernel_2d, radial_profile, uniform_kfr_grid, Kernel1d, Kernel2d,
    RadialParams, RadialProfile,
};
pub use spectrum::{cosine_transform, predicted_beat_frequencies, SpectrumSamples};

use crate::spectra::{TrapSpec1d, TrapSpec2d};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("basis holds {available} states; {needed} needed for {n_occupied} occupied plus {n_virtual} virtual")]
    InsufficientVirtualStates {
        available: usize,
        needed: usize,
        n_occupied: usize,
        n_virtual: usize,
    },
    #[error("degenerate particle-hole denominator between occupied state {occupied} and unoccupied state {unoccupied} (gap {gap:.3e}); the filling leaves an open shell")]
    DegenerateDenominator {
        occupied: usize,
        unoccupied: usize,
        gap: f64,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("yukawa fit failed: {0}")]
    FitFailure(String),
}

/// Provenance of a radial kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelMeta {
    Trap1d(TrapSpec1d),
    Trap2d(TrapSpec2d),
    Synthetic,
}

/// Mediated potential sampled on a radial grid.
///
/// Distances are stored as k_F r, values in trap units with the
/// prefactor G divided out. `f[0]` is the contact value and is negative
/// for any non-empty Fermi sea.
#[derive(Debug, Clone)]
pub struct RadialKernel {
    /// k_F r, strictly ascending, starting at 0.
    pub r_kfr: Vec<f64>,
    pub f: Vec<f64>,
    /// k_F x_zp of the originating Fermi sea.
    pub k_f: f64,
    pub meta: KernelMeta,
    /// Physical prefactor G carried alongside (1 in trap units).
    pub prefactor: f64,
}

impl RadialKernel {
    pub fn new(r_kfr: Vec<f64>, f: Vec<f64>, k_f: f64, meta: KernelMeta) -> Self {
        assert_eq!(r_kfr.len(), f.len());
        assert!(!r_kfr.is_empty());
        assert!(r_kfr[0] == 0.0, "radial grid must start at r = 0");
        assert!(
            r_kfr.windows(2).all(|w| w[0] < w[1]),
            "radial grid must be strictly ascending"
        );
        Self {
            r_kfr,
            f,
            k_f,
            meta,
            prefactor: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.r_kfr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_kfr.is_empty()
    }

    pub fn max_kfr(&self) -> f64 {
        *self.r_kfr.last().unwrap()
    }

    /// Largest |F| over the stored window.
    pub fn max_abs(&self) -> f64 {
        self.f.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    /// Linear interpolation of F at a k_F r value inside the window.
    pub fn value_at(&self, kfr: f64) -> Option<f64> {
        if kfr < self.r_kfr[0] || kfr > self.max_kfr() {
            return None;
        }
        let i = match self
            .r_kfr
            .binary_search_by(|p| p.partial_cmp(&kfr).unwrap())
        {
            Ok(i) => return Some(self.f[i]),
            Err(i) => i,
        };
        let (r0, r1) = (self.r_kfr[i - 1], self.r_kfr[i]);
        let t = (kfr - r0) / (r1 - r0);
        Some(self.f[i - 1] * (1.0 - t) + self.f[i] * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_kernel_interpolates_linearly() {
        let k = RadialKernel::new(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 2.0, 6.0],
            1.0,
            KernelMeta::Synthetic,
        );
        assert_eq!(k.value_at(0.5), Some(1.0));
        assert_eq!(k.value_at(1.5), Some(4.0));
        assert_eq!(k.value_at(2.0), Some(6.0));
        assert_eq!(k.value_at(2.1), None);
    }

    #[test]
    #[should_panic(expected = "ascending")]
    fn non_ascending_grid_is_rejected() {
        RadialKernel::new(
            vec![0.0, 1.0, 1.0],
            vec![0.0; 3],
            1.0,
            KernelMeta::Synthetic,
        );
    }
}
