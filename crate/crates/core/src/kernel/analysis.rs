//! Oscillation maxima and Yukawa decay-length fits.

use super::{KernelError, RadialKernel};
use crate::util::{linear_fit, pairwise_sum};

/// Sentinel decay length reported when the fitted envelope does not decay
/// (pure power-law kernels). Keeps CSV output finite.
pub const ELL_UNSCREENED: f64 = 1e9;

/// Strict local maxima of F(r) by 3-point comparison, refined by a local
/// quadratic. The r = 0 endpoint is excluded. Returns (k_F r, F) pairs.
pub fn extract_maxima(radial: &RadialKernel) -> Vec<(f64, f64)> {
    let r = &radial.r_kfr;
    let f = &radial.f;
    let mut out = Vec::new();
    for i in 1..r.len().saturating_sub(1) {
        if f[i] > f[i - 1] && f[i] > f[i + 1] {
            let denom = f[i - 1] - 2.0 * f[i] + f[i + 1];
            let (dr, df) = if denom.abs() > 0.0 {
                let t = 0.5 * (f[i - 1] - f[i + 1]) / denom;
                (
                    t * (r[i + 1] - r[i - 1]) * 0.5,
                    -0.25 * (f[i - 1] - f[i + 1]) * t,
                )
            } else {
                (0.0, 0.0)
            };
            let rm = r[i] + dr;
            if rm > 0.0 {
                out.push((rm, f[i] + df));
            }
        }
    }
    out
}

/// Yukawa envelope fit over oscillation maxima.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    /// Dimensionless decay length of exp[-k_F r / (pi ell)] / r.
    pub ell: f64,
    /// Fit prefactor.
    pub amplitude: f64,
    /// Relative RMS of the log-envelope residuals (sqrt(1 - R^2)).
    pub residual: f64,
}

/// Least-squares fit of log|F_i| = log A - log(k_F r_i) - k_F r_i / (pi ell)
/// over the supplied maxima. Requires at least three maxima spanning two
/// oscillations (2 pi in k_F r).
pub fn fit_yukawa(maxima: &[(f64, f64)], _k_f: f64) -> Result<DecayFit, KernelError> {
    let usable: Vec<(f64, f64)> = maxima
        .iter()
        .copied()
        .filter(|&(r, f)| r > 0.0 && f != 0.0)
        .collect();
    if usable.len() < 3 {
        return Err(KernelError::FitFailure(format!(
            "need at least 3 maxima, got {}",
            usable.len()
        )));
    }
    let span = usable.last().unwrap().0 - usable[0].0;
    if span < 2.0 * std::f64::consts::PI {
        return Err(KernelError::FitFailure(format!(
            "maxima span {span:.3} in k_F r, need two oscillations (2 pi)"
        )));
    }
    // y = ln|F| + ln(kfr) against x = kfr / pi: slope is -1/ell.
    let x: Vec<f64> = usable
        .iter()
        .map(|&(r, _)| r / std::f64::consts::PI)
        .collect();
    let y: Vec<f64> = usable.iter().map(|&(r, f)| f.abs().ln() + r.ln()).collect();
    let (a, b, _r2) = linear_fit(&x, &y);
    let ell = if b < -1.0 / ELL_UNSCREENED {
        (-1.0 / b).min(ELL_UNSCREENED)
    } else {
        ELL_UNSCREENED
    };
    let resid: Vec<f64> = x
        .iter()
        .zip(&y)
        .map(|(&xi, &yi)| yi - (a + b * xi))
        .collect();
    let my = pairwise_sum(&y) / y.len() as f64;
    let denom2 = y.iter().map(|&v| (v - my) * (v - my)).sum::<f64>();
    let num2 = resid.iter().map(|&v| v * v).sum::<f64>();
    let residual = if denom2 > 0.0 {
        (num2 / denom2).sqrt()
    } else {
        0.0
    };
    Ok(DecayFit {
        ell,
        amplitude: a.exp(),
        residual,
    })
}
