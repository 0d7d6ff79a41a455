//! `rkky kagome`: kagome-lattice couplings over (anisotropy/N, k_F d)
//! and the frustration-window search. Resumable per cell.

use super::{load_checkpoint, LinGrid};
use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, CsvWriter};
use crate::AppError;
use rkky_core::kernel::{mediated_kernel_2d, uniform_kfr_grid};
use rkky_core::lattice::{frustration_search, kagome_couplings, KagomeCell, WannierSpec};
use rkky_core::spectra::{auto_basis, TrapSpec2d};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub n_fermions: usize,
    pub anis_over_n: LinGrid,
    pub kfd: LinGrid,
    #[serde(default = "super::default_width_ratio")]
    pub width_ratio: f64,
    #[serde(default = "default_e_max_factor")]
    pub e_max_factor: f64,
    #[serde(default = "super::default_samples_per_period")]
    pub samples_per_period: usize,
    #[serde(default = "default_tol")]
    pub tol_v1: f64,
    #[serde(default = "default_tol")]
    pub tol_23: f64,
}

fn default_e_max_factor() -> f64 {
    3.0
}

fn default_tol() -> f64 {
    0.2
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    let ratios = cfg.anis_over_n.values()?;
    let spacings = cfg.kfd.values()?;
    let path = out.join("kagome.csv");
    let done = load_checkpoint(&path, 2);

    let kfd_max = *spacings.last().unwrap();
    // Third kagome neighbor sits at 2d; add the smearing tails.
    let max_kfr =
        2.0 * kfd_max + 8.0 * std::f64::consts::SQRT_2 * cfg.width_ratio * kfd_max + 0.5;
    let grid = uniform_kfr_grid(
        max_kfr,
        std::f64::consts::PI / cfg.samples_per_period as f64,
    );

    let mut lines: Vec<String> = Vec::new();
    let mut cells: Vec<KagomeCell> = Vec::new();
    let mut failures = 0usize;
    let mut total = 0usize;
    for &ratio in &ratios {
        let missing: Vec<f64> = spacings
            .iter()
            .copied()
            .filter(|&d| !done.contains_key(&format!("{},{}", fmt_float(ratio), fmt_float(d))))
            .collect();
        let kernel = if missing.is_empty() {
            None
        } else {
            let anisotropy = ratio * cfg.n_fermions as f64;
            let trap = TrapSpec2d::new(cfg.n_fermions, anisotropy);
            let (basis, n_eff, fermi, _) = auto_basis(&trap, cfg.e_max_factor)
                .map_err(|e| AppError::numeric(e.to_string()))?;
            Some(
                mediated_kernel_2d(&basis, n_eff, &grid, fermi.k_f)
                    .map_err(|e| AppError::numeric(e.to_string()))?,
            )
        };
        for &d in &spacings {
            total += 1;
            let key = format!("{},{}", fmt_float(ratio), fmt_float(d));
            if let Some(line) = done.get(&key) {
                lines.push(line.clone());
                if let Some(cell) = parse_cell(line) {
                    cells.push(cell);
                }
                continue;
            }
            let radial = kernel.as_ref().expect("kernel solved for missing cells");
            match kagome_couplings(radial, &WannierSpec::new(cfg.width_ratio, d)) {
                Ok(v) => {
                    let scale = v.v2.abs().max(v.v3.abs());
                    let flag = if scale > 0.0 && v.v1.abs() < cfg.tol_v1 * scale {
                        "v1~0"
                    } else {
                        ""
                    };
                    lines.push(format!(
                        "{},{},{},{},{},{}",
                        fmt_float(ratio),
                        fmt_float(d),
                        fmt_float(v.v1),
                        fmt_float(v.v2),
                        fmt_float(v.v3),
                        flag
                    ));
                    cells.push(KagomeCell {
                        anis_over_n: ratio,
                        spacing_kf: d,
                        v1: v.v1,
                        v2: v.v2,
                        v3: v.v3,
                    });
                }
                Err(e) => {
                    failures += 1;
                    lines.push(format!(
                        "{},{},nan,nan,nan,error: {}",
                        fmt_float(ratio),
                        fmt_float(d),
                        e.to_string().replace(',', ";")
                    ));
                }
            }
        }
    }
    if failures == total {
        return Err(AppError::numeric("every scan cell failed"));
    }

    let mut csv = CsvWriter::new("kagome", &config_to_toml(&cfg));
    csv.columns(&["anis_over_n", "kf_d", "v1", "v2", "v3", "flags"]);
    for line in &lines {
        csv.row(&[line.clone()]);
    }
    csv.finish(&path)?;

    let hits = frustration_search(&cells, cfg.tol_v1, cfg.tol_23);
    let mut fcsv = CsvWriter::new("kagome", &config_to_toml(&cfg));
    fcsv.columns(&["rank", "anis_over_n", "kf_d", "v1", "v2", "v3", "score"]);
    for (rank, &(idx, score)) in hits.iter().enumerate() {
        let c = cells[idx];
        fcsv.row(&[
            rank.to_string(),
            fmt_float(c.anis_over_n),
            fmt_float(c.spacing_kf),
            fmt_float(c.v1),
            fmt_float(c.v2),
            fmt_float(c.v3),
            fmt_float(score),
        ]);
    }
    fcsv.finish(&out.join("frustration.csv"))
}

fn parse_cell(line: &str) -> Option<KagomeCell> {
    let f: Vec<&str> = line.split(',').collect();
    if f.len() < 5 {
        return None;
    }
    Some(KagomeCell {
        anis_over_n: f[0].parse().ok()?,
        spacing_kf: f[1].parse().ok()?,
        v1: f[2].parse().ok()?,
        v2: f[3].parse().ok()?,
        v3: f[4].parse().ok()?,
    })
}
