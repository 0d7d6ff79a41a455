//! Phase-diagram scans over coupling tables.

use rayon::prelude::*;

use super::{
    berry_phase, build_hamiltonian, ground_state, observable_set, Boundary, ChainModel,
};

/// One input cell: a coupling table produced by the lattice pipeline.
#[derive(Debug, Clone)]
pub struct PhaseCell {
    pub vp_ratio: f64,
    pub spacing_kf: f64,
    /// Raw couplings v_1.. (at least the truncation range; extra entries
    /// are used for the tail-size check).
    pub couplings: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct PhaseScanParams {
    pub length: usize,
    pub n_bosons: usize,
    pub hopping: f64,
    /// Interaction strength the dominant coupling is rescaled to, in
    /// units of the hopping (v_1-based; falls back to max |v_s| when v_1
    /// nearly cancels).
    pub v0: f64,
    pub boundary: Boundary,
    /// Twist steps for the Berry phase; 0 disables it.
    pub berry_steps: usize,
}

#[derive(Debug, Clone)]
pub struct PhaseScanRow {
    pub vp_ratio: f64,
    pub spacing_kf: f64,
    pub q0: f64,
    pub s_max: f64,
    /// Staggered bond order B on open chains, the connected bond-bond
    /// correlator C_B on rings.
    pub bond: f64,
    pub berry: f64,
    /// Empty on success; warning or error text otherwise.
    pub flag: String,
}

/// Truncation range for chain couplings: R = min(5, L/2 - 1).
pub fn truncation_range(length: usize) -> usize {
    5.min(length / 2 - 1)
}

/// Rescale couplings so the reference coupling magnitude equals v0
/// (sign structure preserved). Returns the scaled couplings truncated to
/// `range` and a warning flag when the dropped tail is not small,
/// |v_{s>R}| > 0.05 |v_ref|.
pub fn rescale_couplings(raw: &[f64], range: usize, v0: f64) -> (Vec<f64>, bool) {
    let max_abs = raw.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if max_abs == 0.0 {
        return (vec![0.0; range.min(raw.len())], false);
    }
    let v1 = raw.first().copied().unwrap_or(0.0);
    let reference = if v1.abs() >= 0.05 * max_abs {
        v1.abs()
    } else {
        max_abs
    };
    let scale = v0 / reference;
    let kept: Vec<f64> = raw.iter().take(range).map(|&v| v * scale).collect();
    let tail_warning = raw[range.min(raw.len())..]
        .iter()
        .any(|&v| v.abs() > 0.05 * reference);
    (kept, tail_warning)
}

/// Solve every cell and emit observables. Per-cell failures are recorded
/// in the row flag; the scan itself only fails on invalid global
/// parameters. Cells are independent and the output order matches the
/// input order for any thread count.
pub fn phase_scan(cells: &[PhaseCell], params: &PhaseScanParams) -> Vec<PhaseScanRow> {
    cells
        .par_iter()
        .map(|cell| run_cell(cell, params))
        .collect()
}

fn run_cell(cell: &PhaseCell, params: &PhaseScanParams) -> PhaseScanRow {
    let range = truncation_range(params.length);
    let (couplings, tail_warning) = rescale_couplings(&cell.couplings, range, params.v0);
    let mut row = PhaseScanRow {
        vp_ratio: cell.vp_ratio,
        spacing_kf: cell.spacing_kf,
        q0: f64::NAN,
        s_max: f64::NAN,
        bond: f64::NAN,
        berry: f64::NAN,
        flag: String::new(),
    };
    let model = match ChainModel::new(
        params.length,
        params.n_bosons,
        params.hopping,
        couplings,
        params.boundary,
    ) {
        Ok(m) => m,
        Err(e) => {
            row.flag = format!("model: {e}");
            return row;
        }
    };
    let h = match build_hamiltonian(&model) {
        Ok(h) => h,
        Err(e) => {
            row.flag = format!("hamiltonian: {e}");
            return row;
        }
    };
    let gs = match ground_state(&h) {
        Ok(g) => g,
        Err(e) => {
            row.flag = format!("ground state: {e}");
            return row;
        }
    };
    let obs = observable_set(&gs, &h.basis, &model, None);
    row.q0 = obs.q0;
    row.s_max = obs.s_max;
    row.bond = if model.boundary.is_periodic() {
        obs.bond_correlator
    } else {
        obs.bond_order
    };
    let mut flags: Vec<String> = Vec::new();
    if tail_warning {
        flags.push("coupling-tail>0.05".into());
    }
    if gs.degenerate {
        flags.push("degenerate".into());
    }
    if params.berry_steps > 0 && model.boundary.is_periodic() {
        match berry_phase(&model, params.berry_steps) {
            Ok(g) => row.berry = g,
            Err(e) => flags.push(format!("berry: {e}")),
        }
    }
    row.flag = flags.join("; ");
    row
}
