//! Kagome-lattice couplings and the frustration-window search.

use super::{KagomeCouplings, LatticeError, SmearedKernel2d, WannierSpec};
use crate::kernel::RadialKernel;

/// First three inequivalent neighbor distances of a kagome lattice with
/// bond length d: (d, sqrt(3) d, 2d). Both distance-2d site pairs (across
/// a hexagon and along a line) are equivalent for a distance-only kernel.
pub fn kagome_distances(d: f64) -> (f64, f64, f64) {
    assert!(d > 0.0, "lattice spacing must be positive");
    (d, 3.0_f64.sqrt() * d, 2.0 * d)
}

/// Smeared 2D-kernel couplings at the three kagome distances, using an
/// isotropic 2D Gaussian Wannier density.
pub fn kagome_couplings(
    radial2d: &RadialKernel,
    wannier: &WannierSpec,
) -> Result<KagomeCouplings, LatticeError> {
    let (d1, d2, d3) = kagome_distances(wannier.spacing_kf);
    if d3 > radial2d.max_kfr() {
        return Err(LatticeError::Range {
            requested: d3,
            available: radial2d.max_kfr(),
        });
    }
    let smeared = SmearedKernel2d::new(radial2d, wannier.sigma_kfr())?;
    Ok(KagomeCouplings {
        v1: smeared.eval(d1)?,
        v2: smeared.eval(d2)?,
        v3: smeared.eval(d3)?,
    })
}

/// One cell of a kagome coupling scan.
#[derive(Debug, Clone, Copy)]
pub struct KagomeCell {
    pub anis_over_n: f64,
    pub spacing_kf: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

/// Cells satisfying the chiral-spin-liquid precondition: |v1| below
/// tol_v1 and |v2 - v3| below tol_23, both relative to max(|v2|, |v3|).
/// Sorted by the combined relative score, best first. Returns (index in
/// `cells`, score).
pub fn frustration_search(
    cells: &[KagomeCell],
    tol_v1: f64,
    tol_23: f64,
) -> Vec<(usize, f64)> {
    let mut hits: Vec<(usize, f64)> = cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let scale = c.v2.abs().max(c.v3.abs());
            if scale <= 0.0 {
                return None;
            }
            let s1 = c.v1.abs() / scale;
            let s23 = (c.v2 - c.v3).abs() / scale;
            if s1 < tol_v1 && s23 < tol_23 {
                Some((i, s1 + s23))
            } else {
                None
            }
        })
        .collect();
    hits.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    hits
}
