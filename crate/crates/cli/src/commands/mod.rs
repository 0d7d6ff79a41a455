//! Subcommand implementations.

pub mod chain;
pub mod couplings;
pub mod crossover;
pub mod kagome;
pub mod kernel;
pub mod scan_phase;
pub mod scan_ratios;
pub mod spectrum;

use crate::AppError;
use rkky_core::kernel::{mediated_kernel_1d, radial_profile, RadialParams, RadialProfile};
use rkky_core::spectra::{
    closed_shell_filling, solve_eigenbasis, Basis1d, FermiLevel, GridSpec, TrapSpec1d,
};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::Path;

pub fn default_points_per_wave() -> usize {
    12
}

pub fn default_samples_per_period() -> usize {
    24
}

pub fn default_width_ratio() -> f64 {
    0.17
}

/// Validated 1D trap parameters shared by several commands.
#[derive(Debug, Clone)]
pub struct Trap1d {
    pub trap: TrapSpec1d,
    pub n_virtual: usize,
    pub points_per_wave: usize,
}

impl Trap1d {
    pub fn build(
        n_fermions: usize,
        vp_ratio: f64,
        kp_xzp: Option<f64>,
        n_virtual: Option<usize>,
        points_per_wave: usize,
    ) -> Result<Self, AppError> {
        if n_fermions == 0 {
            return Err(AppError::config("n_fermions must be at least 1"));
        }
        if vp_ratio < 0.0 {
            return Err(AppError::config("vp_ratio must be non-negative"));
        }
        let kp = kp_xzp.unwrap_or((n_fermions as f64).sqrt());
        if kp <= 0.0 {
            return Err(AppError::config("kp_xzp must be positive"));
        }
        let n_virtual = n_virtual.unwrap_or(4 * n_fermions);
        if n_virtual == 0 {
            return Err(AppError::config("n_virtual must be at least 1"));
        }
        if points_per_wave < 4 {
            return Err(AppError::config("points_per_wave must be at least 4"));
        }
        Ok(Self {
            trap: TrapSpec1d::new(n_fermions, vp_ratio, kp),
            n_virtual,
            points_per_wave,
        })
    }

    /// Solve the eigenbasis sized for the occupied sea plus the virtual
    /// cutoff, with the filling completed to the nearest closed shell.
    pub fn solve(&self) -> Result<Solved1d, AppError> {
        let n_states = self.trap.n_fermions + self.n_virtual;
        let grid = GridSpec::for_trap(&self.trap, n_states, self.points_per_wave);
        let basis = solve_eigenbasis(&self.trap, &grid, n_states)
            .map_err(|e| AppError::numeric(e.to_string()))?;
        let (n_eff, adjusted) = closed_shell_filling(&basis.energies, self.trap.n_fermions);
        let fermi = basis
            .fermi_level(n_eff)
            .map_err(|e| AppError::numeric(e.to_string()))?;
        Ok(Solved1d {
            basis,
            n_eff,
            adjusted,
            fermi,
        })
    }
}

pub struct Solved1d {
    pub basis: Basis1d,
    pub n_eff: usize,
    pub adjusted: bool,
    pub fermi: FermiLevel,
}

impl Solved1d {
    pub fn radial(
        &self,
        max_kfr: f64,
        samples_per_period: usize,
        offsets: Vec<f64>,
    ) -> Result<RadialProfile, AppError> {
        if max_kfr <= 0.0 {
            return Err(AppError::config("max_kfr must be positive"));
        }
        let n_virtual = self.basis.n_states() - self.n_eff;
        let kernel = mediated_kernel_1d(&self.basis, self.n_eff, n_virtual)
            .map_err(|e| AppError::numeric(e.to_string()))?;
        let params = RadialParams {
            max_kfr,
            step_kfr: std::f64::consts::PI / samples_per_period as f64,
            offsets_xzp: offsets,
            residual_max_kfr: max_kfr.min(10.0),
        };
        Ok(radial_profile(&kernel, self.fermi.k_f, &params))
    }
}

/// Inclusive linear grid specification used by the scan commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl LinGrid {
    pub fn values(&self) -> Result<Vec<f64>, AppError> {
        if self.count == 0 || self.max < self.min {
            return Err(AppError::config(format!(
                "invalid grid: min {} max {} count {}",
                self.min, self.max, self.count
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        Ok((0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect())
    }
}

/// Previously computed data rows keyed by their leading columns, for
/// resumable scans. Keys are the formatted column strings, so a finished
/// cell is reused verbatim and reruns stay byte-identical.
pub fn load_checkpoint(path: &Path, key_cols: usize) -> HashMap<String, String> {
    let mut done = HashMap::new();
    let Ok(text) = std::fs::read_to_string(path) else {
        return done;
    };
    for line in text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() > key_cols {
            done.insert(fields[..key_cols].join(","), line.to_string());
        }
    }
    done
}

/// Radial window needed to form couplings up to `max_range * spacing`
/// with a Gaussian of width `width_ratio * spacing`, tails included.
pub fn coupling_window_kfr(max_range: usize, spacing_kf: f64, width_ratio: f64) -> f64 {
    max_range as f64 * spacing_kf + 8.0 * std::f64::consts::SQRT_2 * width_ratio * spacing_kf + 0.5
}
