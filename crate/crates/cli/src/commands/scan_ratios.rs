//! `rkky scan-ratios`: v2/v1 and v3/v1 over (vp_ratio, k_F d).
//!
//! Resumable: cells already present in ratio_scan.csv are reused
//! verbatim, so a rerun over a complete file is byte-identical and a
//! partially filled file only costs the missing kernels.

use super::{coupling_window_kfr, load_checkpoint, LinGrid, Trap1d};
use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, CsvWriter};
use crate::AppError;
use rkky_core::lattice::ratio_scan;
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
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    if cfg.vp_list.is_empty() {
        return Err(AppError::config("vp_list must be nonempty"));
    }
    let spacings = cfg.kfd.values()?;
    let path = out.join("ratio_scan.csv");
    let done = load_checkpoint(&path, 2);

    let max_kfr = coupling_window_kfr(3, *spacings.last().unwrap(), cfg.width_ratio);
    // One kernel per vp_ratio, solved only when some cell is missing.
    let mut lines: Vec<String> = Vec::new();
    let mut failures = 0usize;
    let mut total = 0usize;
    for &vp in &cfg.vp_list {
        let missing: Vec<f64> = spacings
            .iter()
            .copied()
            .filter(|&d| !done.contains_key(&format!("{},{}", fmt_float(vp), fmt_float(d))))
            .collect();
        let kernel = if missing.is_empty() {
            None
        } else {
            let t = Trap1d::build(
                cfg.n_fermions,
                vp,
                cfg.kp_xzp,
                cfg.n_virtual,
                cfg.points_per_wave,
            )?;
            let solved = t.solve()?;
            Some(solved.radial(max_kfr, cfg.samples_per_period, vec![])?.kernel)
        };
        for &d in &spacings {
            total += 1;
            let key = format!("{},{}", fmt_float(vp), fmt_float(d));
            if let Some(line) = done.get(&key) {
                lines.push(line.clone());
                continue;
            }
            let radial = kernel.as_ref().expect("kernel solved for missing cells");
            match ratio_scan(&[(vp, radial)], &[d], cfg.width_ratio) {
                Ok(scan) => {
                    let c = scan.cells[0];
                    let flag = if c.undefined { "v1~0" } else { "" };
                    lines.push(format!(
                        "{},{},{},{},{}",
                        fmt_float(vp),
                        fmt_float(d),
                        fmt_float(c.v2_over_v1),
                        fmt_float(c.v3_over_v1),
                        flag
                    ));
                }
                Err(e) => {
                    failures += 1;
                    lines.push(format!(
                        "{},{},nan,nan,error: {}",
                        fmt_float(vp),
                        fmt_float(d),
                        e
                    ));
                }
            }
        }
    }
    if failures == total {
        return Err(AppError::numeric("every scan cell failed"));
    }

    // The bond-order-wave target: closest v2/v1 to 0.5 among cells with
    // small |v3/v1|.
    let mut bow: Option<(f64, f64, f64, f64)> = None;
    for line in &lines {
        let f: Vec<&str> = line.split(',').collect();
        let (Ok(vp), Ok(d), Ok(r2), Ok(r3)) = (
            f[0].parse::<f64>(),
            f[1].parse::<f64>(),
            f[2].parse::<f64>(),
            f[3].parse::<f64>(),
        ) else {
            continue;
        };
        if r2.is_nan() || r3.is_nan() || r3.abs() >= 0.1 {
            continue;
        }
        if bow.is_none() || (r2 - 0.5).abs() < (bow.unwrap().2 - 0.5).abs() {
            bow = Some((vp, d, r2, r3));
        }
    }

    let mut csv = CsvWriter::new("scan-ratios", &config_to_toml(&cfg));
    if let Some((vp, d, r2, r3)) = bow {
        csv.comment(&format!(
            "bow_target: vp_ratio = {}, kf_d = {}, v2_over_v1 = {}, v3_over_v1 = {}",
            fmt_float(vp),
            fmt_float(d),
            fmt_float(r2),
            fmt_float(r3)
        ));
    }
    csv.columns(&["vp_ratio", "kf_d", "v2_over_v1", "v3_over_v1", "flags"]);
    for line in &lines {
        csv.row(&[line.clone()]);
    }
    csv.finish(&path)
}
