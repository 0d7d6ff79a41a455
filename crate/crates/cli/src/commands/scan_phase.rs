//! `rkky scan-phase`: chain observables over coupling tables from the 1D
//! kernel pipeline, on a (vp_ratio, k_F d) grid. Resumable per cell.

use super::{coupling_window_kfr, load_checkpoint, LinGrid, Trap1d};
use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, CsvWriter};
use crate::AppError;
use rkky_core::lattice::{coupling_table, WannierSpec};
use rkky_core::manybody::{phase_scan, truncation_range, Boundary, PhaseCell, PhaseScanParams};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub n_fermions: usize,
    pub vp_list: Vec<f64>,
    #[serde(default)]
    pub kp_xzp: Option<f64>,
    #[serde(default)]
    pub n_virtual: Option<usize>,
    #[serde(default = "super::default_points_per_wave")]
    pub points_per_wave: usize,
    pub kfd: LinGrid,
    #[serde(default = "super::default_width_ratio")]
    pub width_ratio: f64,
    #[serde(default = "super::default_samples_per_period")]
    pub samples_per_period: usize,
    pub length: usize,
    pub n_bosons: usize,
    #[serde(default = "default_hopping")]
    pub hopping: f64,
    #[serde(default = "default_v0")]
    pub v0: f64,
    #[serde(default = "default_boundary")]
    pub boundary: String,
    #[serde(default)]
    pub berry_steps: usize,
}

fn default_hopping() -> f64 {
    1.0
}

fn default_v0() -> f64 {
    4.0
}

fn default_boundary() -> String {
    "periodic".into()
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    if cfg.vp_list.is_empty() {
        return Err(AppError::config("vp_list must be nonempty"));
    }
    if cfg.length > 24 {
        return Err(AppError::config("length is capped at 24 sites"));
    }
    let boundary = match cfg.boundary.as_str() {
        "open" => Boundary::Open,
        "periodic" => Boundary::periodic(),
        other => {
            return Err(AppError::config(format!(
                "boundary must be 'open' or 'periodic', got '{other}'"
            )))
        }
    };
    let spacings = cfg.kfd.values()?;
    let path = out.join("phase_scan.csv");
    let done = load_checkpoint(&path, 2);
    let range = truncation_range(cfg.length);
    // One extra neighbor for the dropped-tail certification.
    let table_range = range + 1;
    let max_kfr = coupling_window_kfr(table_range, *spacings.last().unwrap(), cfg.width_ratio);

    let params = PhaseScanParams {
        length: cfg.length,
        n_bosons: cfg.n_bosons,
        hopping: cfg.hopping,
        v0: cfg.v0 * cfg.hopping,
        boundary,
        berry_steps: cfg.berry_steps,
    };

    let mut lines: Vec<String> = Vec::new();
    let mut failures = 0usize;
    let mut total = 0usize;
    for &vp in &cfg.vp_list {
        let missing: Vec<f64> = spacings
            .iter()
            .copied()
            .filter(|&d| !done.contains_key(&format!("{},{}", fmt_float(vp), fmt_float(d))))
            .collect();
        if missing.is_empty() {
            for &d in &spacings {
                total += 1;
                lines.push(done[&format!("{},{}", fmt_float(vp), fmt_float(d))].clone());
            }
            continue;
        }
        let t = Trap1d::build(
            cfg.n_fermions,
            vp,
            cfg.kp_xzp,
            cfg.n_virtual,
            cfg.points_per_wave,
        )?;
        let solved = t.solve()?;
        let radial = solved.radial(max_kfr, cfg.samples_per_period, vec![])?.kernel;
        // Build cells for the missing spacings, then solve them in one
        // deterministic parallel scan. Cells whose coupling table already
        // fails are recorded as error rows directly.
        let mut cells = Vec::new();
        let mut fresh = std::collections::HashMap::new();
        for &d in &missing {
            let wannier = WannierSpec::new(cfg.width_ratio, d);
            match coupling_table(&radial, &wannier, table_range) {
                Ok(ct) => cells.push(PhaseCell {
                    vp_ratio: vp,
                    spacing_kf: d,
                    couplings: ct.couplings,
                }),
                Err(e) => {
                    fresh.insert(
                        fmt_float(d),
                        format!(
                            "{},{},nan,nan,nan,nan,error: {}",
                            fmt_float(vp),
                            fmt_float(d),
                            e.to_string().replace(',', ";")
                        ),
                    );
                }
            }
        }
        for row in phase_scan(&cells, &params) {
            let flag = if row.flag.is_empty() {
                String::new()
            } else {
                row.flag.replace(',', ";")
            };
            fresh.insert(
                fmt_float(row.spacing_kf),
                format!(
                    "{},{},{},{},{},{},{}",
                    fmt_float(row.vp_ratio),
                    fmt_float(row.spacing_kf),
                    fmt_float(row.q0),
                    fmt_float(row.s_max),
                    fmt_float(row.bond),
                    fmt_float(row.berry),
                    flag
                ),
            );
        }
        for &d in &spacings {
            total += 1;
            let key = format!("{},{}", fmt_float(vp), fmt_float(d));
            if let Some(line) = done.get(&key) {
                lines.push(line.clone());
            } else {
                let line = fresh[&fmt_float(d)].clone();
                if line.contains("error") {
                    failures += 1;
                }
                lines.push(line);
            }
        }
    }
    if total > 0 && failures == total {
        return Err(AppError::numeric("every scan cell failed"));
    }

    let mut csv = CsvWriter::new("scan-phase", &config_to_toml(&cfg));
    csv.columns(&[
        "vp_ratio", "kf_d", "q0", "s_max", "bond", "gamma", "flags",
    ]);
    for line in &lines {
        csv.row(&[line.clone()]);
    }
    csv.finish(&path)
}
