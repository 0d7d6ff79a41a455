//! `rkky chain`: diagonalize one hardcore-boson chain.

use crate::config::resolve;
use crate::output::{config_to_toml, fmt_float, write_json, CsvWriter};
use crate::AppError;
use rkky_core::manybody::{
    berry_phase, build_hamiltonian, ground_state, observable_set, rescale_couplings, Boundary,
    ChainModel,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub length: usize,
    pub n_bosons: usize,
    #[serde(default = "default_hopping")]
    pub hopping: f64,
    /// Couplings v_1..v_R, in units of the hopping unless v0 is set.
    pub couplings: Vec<f64>,
    /// Rescale so the dominant coupling magnitude equals v0 * hopping.
    #[serde(default)]
    pub v0: Option<f64>,
    #[serde(default = "default_boundary")]
    pub boundary: String,
    /// Twist-loop steps for the Berry phase; 0 disables it.
    #[serde(default)]
    pub berry_steps: usize,
}

fn default_hopping() -> f64 {
    1.0
}

fn default_boundary() -> String {
    "periodic".into()
}

pub fn run(table: toml::Table, out: &Path) -> Result<(), AppError> {
    let cfg: Config = resolve(table)?;
    let boundary = match cfg.boundary.as_str() {
        "open" => Boundary::Open,
        "periodic" => Boundary::periodic(),
        other => {
            return Err(AppError::config(format!(
                "boundary must be 'open' or 'periodic', got '{other}'"
            )))
        }
    };
    let couplings = match cfg.v0 {
        Some(v0) => {
            let range = cfg.couplings.len();
            rescale_couplings(&cfg.couplings, range, v0 * cfg.hopping).0
        }
        None => cfg.couplings.clone(),
    };
    let model = ChainModel::new(cfg.length, cfg.n_bosons, cfg.hopping, couplings, boundary)
        .map_err(|e| AppError::config(e.to_string()))?;
    let h = build_hamiltonian(&model).map_err(|e| AppError::numeric(e.to_string()))?;
    let gs = ground_state(&h).map_err(|e| AppError::numeric(e.to_string()))?;
    let berry = if cfg.berry_steps > 0 && boundary.is_periodic() {
        Some(berry_phase(&model, cfg.berry_steps).map_err(|e| AppError::numeric(e.to_string()))?)
    } else {
        None
    };
    let obs = observable_set(&gs, &h.basis, &model, berry);

    let summary = serde_json::json!({
        "energy": gs.energy,
        "basis_dim": gs.basis_dim,
        "residual": gs.residual,
        "gap": gs.gap,
        "degenerate": gs.degenerate,
        "q0": obs.q0,
        "s_max": obs.s_max,
        "bond_order": obs.bond_order,
        "bond_correlator": obs.bond_correlator,
        "berry": obs.berry,
    });
    write_json(&out.join("chain.json"), &summary)?;

    let header = config_to_toml(&cfg);
    let mut sq = CsvWriter::new("chain", &header);
    sq.columns(&["q", "s_of_q"]);
    for (m, &s) in obs.s_of_q.iter().enumerate() {
        let q = 2.0 * std::f64::consts::PI * m as f64 / cfg.length as f64;
        sq.row_floats(&[q, s]);
    }
    sq.finish(&out.join("sq.csv"))?;

    let mut dens = CsvWriter::new("chain", &header);
    dens.columns(&["site", "density"]);
    for (j, &n) in obs.densities.iter().enumerate() {
        dens.row(&[j.to_string(), fmt_float(n)]);
    }
    dens.finish(&out.join("density.csv"))
}
