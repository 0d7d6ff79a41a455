//! Coupling-ratio scans over (vp_ratio, k_F d).

use rayon::prelude::*;

use super::{coupling_table, LatticeError, WannierSpec};
use crate::kernel::RadialKernel;

/// Relative threshold below which v_1 counts as vanishing and the ratios
/// are flagged undefined instead of divided.
const V1_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct RatioCell {
    pub vp_ratio: f64,
    pub spacing_kf: f64,
    pub v1: f64,
    pub v2_over_v1: f64,
    pub v3_over_v1: f64,
    /// v_1 below threshold: ratios are NaN and excluded from the target
    /// search. The cancellation itself is physical (it is the kagome
    /// frustration condition), so the cell stays in the output.
    pub undefined: bool,
}

#[derive(Debug, Clone)]
pub struct RatioScan {
    pub cells: Vec<RatioCell>,
    /// Cell index minimizing |v2/v1 - 0.5| subject to |v3/v1| < 0.1
    /// (the bond-order-wave target).
    pub bow_target: Option<usize>,
}

/// Scan coupling ratios over precomputed kernels (one per vp_ratio) and a
/// spacing grid. Cells are independent; the output order is row-major in
/// (kernel, spacing) and does not depend on thread count.
pub fn ratio_scan(
    kernels: &[(f64, &RadialKernel)],
    spacings_kf: &[f64],
    width_ratio: f64,
) -> Result<RatioScan, LatticeError> {
    assert!(!kernels.is_empty() && !spacings_kf.is_empty(), "empty scan grid");
    let jobs: Vec<(f64, &RadialKernel, f64)> = kernels
        .iter()
        .flat_map(|&(vp, k)| spacings_kf.iter().map(move |&d| (vp, k, d)))
        .collect();
    let cells: Vec<RatioCell> = jobs
        .par_iter()
        .map(|&(vp_ratio, kernel, spacing_kf)| {
            let wannier = WannierSpec::new(width_ratio, spacing_kf);
            let table = coupling_table(kernel, &wannier, 3)?;
            let floor = V1_FLOOR * kernel.max_abs();
            let v1 = table.v(1);
            let undefined = v1.abs() < floor;
            let (r2, r3) = if undefined {
                (f64::NAN, f64::NAN)
            } else {
                (table.v(2) / v1, table.v(3) / v1)
            };
            Ok(RatioCell {
                vp_ratio,
                spacing_kf,
                v1,
                v2_over_v1: r2,
                v3_over_v1: r3,
                undefined,
            })
        })
        .collect::<Result<Vec<_>, LatticeError>>()?;
    let bow_target = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.undefined && c.v3_over_v1.abs() < 0.1)
        .min_by(|(_, a), (_, b)| {
            let da = (a.v2_over_v1 - 0.5).abs();
            let db = (b.v2_over_v1 - 0.5).abs();
            da.partial_cmp(&db).unwrap()
        })
        .map(|(i, _)| i);
    Ok(RatioScan { cells, bow_target })
}
