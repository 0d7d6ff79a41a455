//! Tunable fermion-mediated long-range interactions for lattice bosons.
//!
//! The crate is organized as a pipeline:
//!
//! - [`spectra`]: single-particle eigenbases of the fermionic mediator,
//!   either a 1D harmonic trap with an optional periodic potential (solved
//!   by finite differences) or an anisotropic 2D harmonic trap (analytic).
//! - [`kernel`]: the mediated boson-boson interaction kernel built from the
//!   second-order particle-hole sum over the Fermi sea, together with
//!   asymptotic RKKY reference shapes, oscillation-maxima extraction,
//!   Yukawa decay-length fits and cosine-transform diagnostics.
//! - [`lattice`]: Gaussian Wannier smearing of a radial kernel into lattice
//!   coupling tables, coupling-ratio scans and kagome-geometry couplings.
//! - [`manybody`]: exact diagonalization of a hardcore-boson chain with the
//!   resulting long-range couplings, with structure factor, bond order,
//!   twisted-boundary Berry phase and edge-density observables.
//!
//! All quantities are dimensionless in trap units: hbar = omega_x = 1 and
//! lengths in x_zp = sqrt(hbar / (2 m omega_x)). The overall interaction
//! prefactor G = 2 m g_bf^2 / (hbar^2 x_zp^4) is factored out of every
//! kernel and carried as metadata; all exported ratios are independent of
//! it.

pub mod kernel;
pub mod lattice;
pub mod manybody;
pub mod spectra;
pub(crate) mod util;
