//! `rkky kernel`: mediated kernel, oscillation maxima, Yukawa fit and
//! cosine transform, for the 1D trap or the anisotropic 2D trap.

use super::Trap1d;
use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, write_json, CsvWriter};
use crate::AppError;
use rkky_core::kernel::{
    cosine_transform, extract_maxima, fit_yukawa, mediated_kernel_2d, uniform_kfr_grid,
    RadialKernel,
};
use rkky_core::spectra::{auto_basis, TrapSpec2d};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// "1d" (harmonic + periodic potential) or "2d" (anisotropic trap).
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
    #[serde(default = "default_max_kfr")]
    pub max_kfr: f64,
    #[serde(default = "super::default_samples_per_period")]
    pub samples_per_period: usize,
    /// Transform window start; defaults to k_F r = 1 in 1D (drops the
    /// contact peak) and 4 in 2D (drops short-range leakage).
    #[serde(default)]
    pub transform_r_min: Option<f64>,
    #[serde(default = "default_transform_points")]
    pub transform_points: usize,
}

fn default_mode() -> String {
    "1d".into()
}

fn default_e_max_factor() -> f64 {
    3.0
}

fn default_max_kfr() -> f64 {
    12.0
}

fn default_transform_points() -> usize {
    301
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    if cfg.max_kfr <= 0.0 {
        return Err(AppError::config("max_kfr must be positive"));
    }
    let header = config_to_toml(&cfg);
    let (radial, residual, meta_lines) = match cfg.mode.as_str() {
        "1d" => {
            let t = Trap1d::build(
                cfg.n_fermions,
                cfg.vp_ratio,
                cfg.kp_xzp,
                cfg.n_virtual,
                cfg.points_per_wave,
            )?;
            let solved = t.solve()?;
            let profile = solved.radial(
                cfg.max_kfr,
                cfg.samples_per_period,
                vec![1.0, 2.0, 3.0, 5.0],
            )?;
            let meta = vec![
                format!(
                    "n_eff = {} (shell_adjusted = {})",
                    solved.n_eff, solved.adjusted
                ),
                format!(
                    "eps_f = {}, k_f = {}",
                    fmt_float(solved.fermi.eps_f),
                    fmt_float(solved.fermi.k_f)
                ),
                format!(
                    "translation_residual = {}",
                    fmt_float(profile.translation_residual)
                ),
            ];
            (profile.kernel, Some(profile.translation_residual), meta)
        }
        "2d" => {
            let anisotropy = cfg
                .anisotropy
                .ok_or_else(|| AppError::config("2d mode requires anisotropy"))?;
            if anisotropy <= 0.0 {
                return Err(AppError::config("anisotropy must be positive"));
            }
            let trap = TrapSpec2d::new(cfg.n_fermions, anisotropy);
            let (basis, n_eff, fermi, adjusted) = auto_basis(&trap, cfg.e_max_factor)
                .map_err(|e| AppError::numeric(e.to_string()))?;
            let grid = uniform_kfr_grid(
                cfg.max_kfr,
                std::f64::consts::PI / cfg.samples_per_period as f64,
            );
            let kernel = mediated_kernel_2d(&basis, n_eff, &grid, fermi.k_f)
                .map_err(|e| AppError::numeric(e.to_string()))?;
            let meta = vec![
                format!("n_eff = {n_eff} (shell_adjusted = {adjusted})"),
                format!(
                    "eps_f = {}, k_f = {}",
                    fmt_float(fermi.eps_f),
                    fmt_float(fermi.k_f)
                ),
                format!("basis_states = {}", basis.n_states()),
            ];
            (kernel, None, meta)
        }
        other => {
            return Err(AppError::config(format!(
                "mode must be '1d' or '2d', got '{other}'"
            )))
        }
    };

    write_kernel_products(&cfg, &header, &radial, residual, &meta_lines, out)
}

fn write_kernel_products(
    cfg: &Config,
    header: &str,
    radial: &RadialKernel,
    _residual: Option<f64>,
    meta_lines: &[String],
    out: &Path,
) -> Result<(), AppError> {
    let mut csv = CsvWriter::new("kernel", header);
    for line in meta_lines {
        csv.comment(line);
    }
    csv.columns(&["kf_r", "f"]);
    for i in 0..radial.len() {
        csv.row_floats(&[radial.r_kfr[i], radial.f[i]]);
    }
    csv.finish(&out.join("kernel.csv"))?;

    let maxima = extract_maxima(radial);
    let mut mcsv = CsvWriter::new("kernel", header);
    mcsv.columns(&["kf_r", "f"]);
    for &(r, f) in &maxima {
        mcsv.row_floats(&[r, f]);
    }
    mcsv.finish(&out.join("maxima.csv"))?;

    let fit_json = match fit_yukawa(&maxima, radial.k_f) {
        Ok(fit) => serde_json::json!({
            "ell": fit.ell,
            "amplitude": fit.amplitude,
            "residual": fit.residual,
            "n_maxima": maxima.len(),
        }),
        Err(e) => serde_json::json!({ "error": e.to_string(), "n_maxima": maxima.len() }),
    };
    write_json(&out.join("yukawa.json"), &fit_json)?;

    let r_min = cfg
        .transform_r_min
        .unwrap_or(if cfg.mode == "2d" { 4.0 } else { 1.0 });
    match cosine_transform(radial, r_min, radial.max_kfr(), cfg.transform_points) {
        Ok(spec) => {
            let mut tcsv = CsvWriter::new("kernel", header);
            tcsv.comment(&format!("transform_window = [{}, {}]", fmt_float(r_min), fmt_float(radial.max_kfr())));
            tcsv.columns(&["k_over_kf", "amplitude"]);
            for i in 0..spec.k_over_kf.len() {
                tcsv.row_floats(&[spec.k_over_kf[i], spec.amplitude[i]]);
            }
            tcsv.finish(&out.join("transform.csv"))?;
        }
        Err(e) => return Err(AppError::config(format!("transform window: {e}"))),
    }
    Ok(())
}
