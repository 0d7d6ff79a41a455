//! `rkky spectrum`: 1D trap eigenvalues.

use super::Trap1d;
use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, CsvWriter};
use crate::AppError;
use rkky_core::spectra::{solve_eigenbasis, GridSpec};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub n_fermions: usize,
    #[serde(default)]
    pub vp_ratio: f64,
    #[serde(default)]
    pub kp_xzp: Option<f64>,
    /// States to retain; defaults to n_fermions + 5 so the gap above the
    /// Fermi level is always reported.
    #[serde(default)]
    pub n_states: Option<usize>,
    #[serde(default = "super::default_points_per_wave")]
    pub points_per_wave: usize,
    #[serde(default)]
    pub half_width: Option<f64>,
    #[serde(default)]
    pub n_points: Option<usize>,
    #[serde(default)]
    pub write_wavefunctions: bool,
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    let trap1d = Trap1d::build(cfg.n_fermions, cfg.vp_ratio, cfg.kp_xzp, Some(1), cfg.points_per_wave)?;
    let n_states = cfg.n_states.unwrap_or(cfg.n_fermions + 5);
    if n_states == 0 {
        return Err(AppError::config("n_states must be at least 1"));
    }
    let grid = match (cfg.half_width, cfg.n_points) {
        (Some(w), Some(n)) => GridSpec::new(w, n),
        (None, None) => GridSpec::for_trap(&trap1d.trap, n_states, cfg.points_per_wave),
        _ => {
            return Err(AppError::config(
                "half_width and n_points must be given together",
            ))
        }
    };
    let basis = solve_eigenbasis(&trap1d.trap, &grid, n_states)
        .map_err(|e| AppError::numeric(e.to_string()))?;

    let header = config_to_toml(&cfg);
    let mut csv = CsvWriter::new("spectrum", &header);
    csv.comment(&format!(
        "grid: half_width = {}, n_points = {}",
        fmt_float(grid.half_width),
        grid.n_points
    ));
    if n_states > cfg.n_fermions {
        let gap = basis.energies[cfg.n_fermions] - basis.energies[cfg.n_fermions - 1];
        // Harmonic level spacing is the vp = 0 baseline.
        csv.comment(&format!(
            "fermi_gap = {} (baseline 1.0, flag_large_gap = {})",
            fmt_float(gap),
            gap > 10.0
        ));
    }
    csv.columns(&["n", "energy"]);
    for (n, &e) in basis.energies.iter().enumerate() {
        csv.row(&[n.to_string(), fmt_float(e)]);
    }
    csv.finish(&out.join("energies.csv"))?;

    if cfg.write_wavefunctions {
        let mut wf = CsvWriter::new("spectrum", &header);
        wf.columns(&["xi", "psi_n..."]);
        for (i, xi) in basis.grid.points().enumerate() {
            let mut row = vec![fmt_float(xi)];
            for s in 0..basis.n_states() {
                row.push(fmt_float(basis.wavefunctions[s][i]));
            }
            wf.row(&row);
        }
        wf.finish(&out.join("wavefunctions.csv"))?;
    }
    Ok(())
}
