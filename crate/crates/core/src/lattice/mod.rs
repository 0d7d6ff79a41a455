//! Lattice coupling tables from radial kernels.
//!
//! Bosons sit in Gaussian Wannier orbitals of width x_width = width_ratio
//! * d. The coupling between sites at distance r is the kernel convolved
//! with a single Gaussian of variance 2 sigma^2 (the exact reduction of
//! the double convolution over both orbitals' densities), evaluated by
//! quadrature on the kernel's own grid with an even extension about r = 0.

mod kagome;
mod scan;
mod smear;

pub use kagome::{frustration_search, kagome_couplings, kagome_distances, KagomeCell};
pub use scan::{ratio_scan, RatioCell, RatioScan};
pub use smear::{SmearedKernel, SmearedKernel2d};

use super::kernel::RadialKernel;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("gaussian of width {sigma_kfr:.4} (k_F r units) spans only {samples} kernel samples, need at least {needed}")]
    Resolution {
        sigma_kfr: f64,
        samples: usize,
        needed: usize,
    },
    #[error("distance {requested:.3} (k_F r) outside kernel range {available:.3}")]
    Range { requested: f64, available: f64 },
}

/// Gaussian Wannier-density approximation: width and lattice spacing,
/// both dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WannierSpec {
    /// x_width / d, in (0, 0.5).
    pub width_ratio: f64,
    /// k_F d.
    pub spacing_kf: f64,
}

impl WannierSpec {
    pub fn new(width_ratio: f64, spacing_kf: f64) -> Self {
        assert!(
            width_ratio > 0.0 && width_ratio < 0.5,
            "width_ratio must lie in (0, 0.5)"
        );
        assert!(spacing_kf > 0.0, "spacing_kf must be positive");
        Self {
            width_ratio,
            spacing_kf,
        }
    }

    /// Orbital width sigma = width_ratio * d in k_F r units.
    pub fn sigma_kfr(&self) -> f64 {
        self.width_ratio * self.spacing_kf
    }
}

/// Couplings v_1..v_R at distances d, 2d, ..., Rd (same units as the
/// kernel, prefactor G factored out).
#[derive(Debug, Clone)]
pub struct CouplingTable {
    pub couplings: Vec<f64>,
    pub spacing_kf: f64,
}

impl CouplingTable {
    pub fn max_range(&self) -> usize {
        self.couplings.len()
    }

    /// v_s with s counted from 1.
    pub fn v(&self, s: usize) -> f64 {
        self.couplings[s - 1]
    }
}

/// Couplings on the first three kagome neighbor shells (d, sqrt(3) d, 2d).
#[derive(Debug, Clone, Copy)]
pub struct KagomeCouplings {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

/// v_s = smeared F(s d) for s = 1..=max_range.
pub fn coupling_table(
    radial: &RadialKernel,
    wannier: &WannierSpec,
    max_range: usize,
) -> Result<CouplingTable, LatticeError> {
    assert!(max_range >= 1);
    let furthest = max_range as f64 * wannier.spacing_kf;
    if furthest > radial.max_kfr() {
        return Err(LatticeError::Range {
            requested: furthest,
            available: radial.max_kfr(),
        });
    }
    let smeared = SmearedKernel::new(radial, wannier.sigma_kfr())?;
    let couplings = (1..=max_range)
        .map(|s| smeared.eval(s as f64 * wannier.spacing_kf))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(CouplingTable {
        couplings,
        spacing_kf: wannier.spacing_kf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelMeta;

    pub(crate) fn synthetic(fun: impl Fn(f64) -> f64, max: f64, step: f64) -> RadialKernel {
        let n = (max / step) as usize + 1;
        let r: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
        let f: Vec<f64> = r.iter().map(|&x| fun(x)).collect();
        RadialKernel::new(r, f, 1.0, KernelMeta::Synthetic)
    }

    #[test]
    fn inverse_distance_table_without_smearing_bias() {
        // Narrow orbitals on a fine grid: v_s = 1/(s d) up to quadrature
        // tolerance.
        let d = 2.0;
        let kernel = synthetic(|x| if x == 0.0 { 0.0 } else { 1.0 / x }, 9.0, 0.002);
        let wannier = WannierSpec::new(0.005, d);
        let table = coupling_table(&kernel, &wannier, 4).unwrap();
        for s in 1..=4usize {
            let expect = 1.0 / (s as f64 * d);
            assert!(
                (table.v(s) - expect).abs() / expect < 1e-3,
                "v_{s} = {} vs {expect}",
                table.v(s)
            );
        }
    }

    #[test]
    fn zero_kernel_gives_zero_table() {
        let kernel = synthetic(|_| 0.0, 10.0, 0.01);
        let table = coupling_table(&kernel, &WannierSpec::new(0.17, 2.0), 5).unwrap();
        assert!(table.couplings.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn out_of_range_spacing_is_rejected() {
        let kernel = synthetic(|_| 1.0, 5.0, 0.01);
        match coupling_table(&kernel, &WannierSpec::new(0.17, 2.0), 3) {
            Err(LatticeError::Range { .. }) => {}
            other => panic!("expected Range error, got {other:?}"),
        }
    }

    #[test]
    fn table_scales_linearly_with_kernel() {
        let kernel = synthetic(|x| (2.0 * x).cos(), 12.0, 0.01);
        let mut scaled = kernel.clone();
        for f in scaled.f.iter_mut() {
            *f *= 3.5;
        }
        let w = WannierSpec::new(0.17, 2.5);
        let t0 = coupling_table(&kernel, &w, 4).unwrap();
        let t1 = coupling_table(&scaled, &w, 4).unwrap();
        for s in 1..=4 {
            assert!((t1.v(s) - 3.5 * t0.v(s)).abs() < 1e-12);
            // Ratios are independent of the overall prefactor.
            if t0.v(1).abs() > 1e-12 {
                assert!((t1.v(s) / t1.v(1) - t0.v(s) / t0.v(1)).abs() < 1e-10);
            }
        }
    }
}
