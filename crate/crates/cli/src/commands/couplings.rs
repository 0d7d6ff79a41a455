//! `rkky couplings`: lattice coupling table from a mediated kernel.

use super::{coupling_window_kfr, Trap1d};
use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, CsvWriter};
use crate::AppError;
use rkky_core::kernel::{mediated_kernel_2d, uniform_kfr_grid};
use rkky_core::lattice::{coupling_table, WannierSpec};
use rkky_core::spectra::{auto_basis, TrapSpec2d};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_mode")]
    pub mode: String,
    pub n_fermions: usize,
    #[serde(default)]
    pub vp_ratio: f64,
    #[serde(default)]
    pub kp_xzp: Option<f64>,
    #[serde(default)]
    pub n_virtual: Option<usize>,
    #[serde(default = "super::default_points_per_wave")]
    pub points_per_wave: usize,
    #[serde(default)]
    pub anisotropy: Option<f64>,
    #[serde(default = "default_e_max_factor")]
    pub e_max_factor: f64,
    pub spacing_kfd: f64,
    #[serde(default = "super::default_width_ratio")]
    pub width_ratio: f64,
    #[serde(default = "default_max_range")]
    pub max_range: usize,
    #[serde(default = "super::default_samples_per_period")]
    pub samples_per_period: usize,
}

fn default_mode() -> String {
    "1d".into()
}

fn default_e_max_factor() -> f64 {
    3.0
}

fn default_max_range() -> usize {
    5
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    if cfg.spacing_kfd <= 0.0 {
        return Err(AppError::config("spacing_kfd must be positive"));
    }
    if cfg.max_range == 0 {
        return Err(AppError::config("max_range must be at least 1"));
    }
    if !(cfg.width_ratio > 0.0 && cfg.width_ratio < 0.5) {
        return Err(AppError::config("width_ratio must lie in (0, 0.5)"));
    }
    let max_kfr = coupling_window_kfr(cfg.max_range, cfg.spacing_kfd, cfg.width_ratio);
    let radial = match cfg.mode.as_str() {
        "1d" => {
            let t = Trap1d::build(
                cfg.n_fermions,
                cfg.vp_ratio,
                cfg.kp_xzp,
                cfg.n_virtual,
                cfg.points_per_wave,
            )?;
            let solved = t.solve()?;
            solved
                .radial(max_kfr, cfg.samples_per_period, vec![])?
                .kernel
        }
        "2d" => {
            let anisotropy = cfg
                .anisotropy
                .ok_or_else(|| AppError::config("2d mode requires anisotropy"))?;
            let trap = TrapSpec2d::new(cfg.n_fermions, anisotropy);
            let (basis, n_eff, fermi, _) = auto_basis(&trap, cfg.e_max_factor)
                .map_err(|e| AppError::numeric(e.to_string()))?;
            let grid = uniform_kfr_grid(
                max_kfr,
                std::f64::consts::PI / cfg.samples_per_period as f64,
            );
            mediated_kernel_2d(&basis, n_eff, &grid, fermi.k_f)
                .map_err(|e| AppError::numeric(e.to_string()))?
        }
        other => {
            return Err(AppError::config(format!(
                "mode must be '1d' or '2d', got '{other}'"
            )))
        }
    };
    let wannier = WannierSpec::new(cfg.width_ratio, cfg.spacing_kfd);
    let table = coupling_table(&radial, &wannier, cfg.max_range)
        .map_err(|e| AppError::numeric(e.to_string()))?;

    let mut csv = CsvWriter::new("couplings", &config_to_toml(&cfg));
    csv.comment(&format!("k_f = {}", fmt_float(radial.k_f)));
    if table.v(1).abs() > 0.0 {
        csv.comment(&format!(
            "v2_over_v1 = {}",
            fmt_float(table.v(2.min(cfg.max_range)) / table.v(1))
        ));
        if cfg.max_range >= 3 {
            csv.comment(&format!("v3_over_v1 = {}", fmt_float(table.v(3) / table.v(1))));
        }
    }
    csv.columns(&["s", "v_s"]);
    for s in 1..=cfg.max_range {
        csv.row(&[s.to_string(), fmt_float(table.v(s))]);
    }
    csv.finish(&out.join("couplings.csv"))
}
