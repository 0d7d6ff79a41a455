//! `rkky crossover`: dimensional-crossover kernels, cosine transforms and
//! predicted beat frequencies over a list of anisotropy/N ratios.

use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, CsvWriter};
use crate::AppError;
use rkky_core::kernel::{
    cosine_transform, mediated_kernel_2d, predicted_beat_frequencies, uniform_kfr_grid,
};
use rkky_core::spectra::{auto_basis, TrapSpec2d};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub n_fermions: usize,
    /// Anisotropy over N ratios (omega_z / (omega_x N)).
    pub anis_over_n: Vec<f64>,
    #[serde(default = "default_e_max_factor")]
    pub e_max_factor: f64,
    #[serde(default = "default_max_kfr")]
    pub max_kfr: f64,
    #[serde(default = "super::default_samples_per_period")]
    pub samples_per_period: usize,
    #[serde(default = "default_r_min")]
    pub transform_r_min: f64,
    #[serde(default = "default_transform_points")]
    pub transform_points: usize,
    #[serde(default = "default_beat_count")]
    pub beat_count: usize,
}

fn default_e_max_factor() -> f64 {
    3.0
}

fn default_max_kfr() -> f64 {
    30.0
}

fn default_r_min() -> f64 {
    4.0
}

fn default_transform_points() -> usize {
    301
}

fn default_beat_count() -> usize {
    3
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    if cfg.anis_over_n.is_empty() {
        return Err(AppError::config("anis_over_n must be nonempty"));
    }
    if cfg.transform_r_min >= cfg.max_kfr {
        return Err(AppError::config("transform_r_min must lie below max_kfr"));
    }
    let header = config_to_toml(&cfg);
    let mut kcsv = CsvWriter::new("crossover", &header);
    kcsv.columns(&["anis_over_n", "kf_r", "f"]);
    let mut scsv = CsvWriter::new("crossover", &header);
    scsv.columns(&["anis_over_n", "k_over_kf", "amplitude"]);
    let mut bcsv = CsvWriter::new("crossover", &header);
    bcsv.columns(&["anis_over_n", "n", "k_over_kf"]);
    let mut pcsv = CsvWriter::new("crossover", &header);
    pcsv.columns(&["anis_over_n", "rank", "k_over_kf", "amplitude"]);

    let grid = uniform_kfr_grid(
        cfg.max_kfr,
        std::f64::consts::PI / cfg.samples_per_period as f64,
    );

    for &ratio in &cfg.anis_over_n {
        if ratio <= 0.0 {
            return Err(AppError::config("anis_over_n entries must be positive"));
        }
        let anisotropy = ratio * cfg.n_fermions as f64;
        let trap = TrapSpec2d::new(cfg.n_fermions, anisotropy);
        let (basis, n_eff, fermi, adjusted) =
            auto_basis(&trap, cfg.e_max_factor).map_err(|e| AppError::numeric(e.to_string()))?;
        let kernel = mediated_kernel_2d(&basis, n_eff, &grid, fermi.k_f)
            .map_err(|e| AppError::numeric(e.to_string()))?;
        kcsv.comment(&format!(
            "anis_over_n = {}: anisotropy = {}, n_eff = {n_eff} (adjusted {adjusted}), k_f = {}",
            fmt_float(ratio),
            fmt_float(anisotropy),
            fmt_float(fermi.k_f)
        ));
        for i in 0..kernel.len() {
            kcsv.row_floats(&[ratio, kernel.r_kfr[i], kernel.f[i]]);
        }
        let spec = cosine_transform(
            &kernel,
            cfg.transform_r_min,
            kernel.max_kfr(),
            cfg.transform_points,
        )
        .map_err(|e| AppError::config(e.to_string()))?;
        for i in 0..spec.k_over_kf.len() {
            scsv.row_floats(&[ratio, spec.k_over_kf[i], spec.amplitude[i]]);
        }
        for (rank, &(k, a)) in spec.dominant_peaks().iter().take(4).enumerate() {
            pcsv.row(&[
                fmt_float(ratio),
                rank.to_string(),
                fmt_float(k),
                fmt_float(a),
            ]);
        }
        let beats = predicted_beat_frequencies(anisotropy, cfg.n_fermions, cfg.beat_count);
        for (n, &k) in beats.iter().enumerate() {
            bcsv.row(&[fmt_float(ratio), n.to_string(), fmt_float(k)]);
        }
    }
    kcsv.finish(&out.join("crossover_kernel.csv"))?;
    scsv.finish(&out.join("crossover_spectrum.csv"))?;
    bcsv.finish(&out.join("beats.csv"))?;
    pcsv.finish(&out.join("peaks.csv"))
}
