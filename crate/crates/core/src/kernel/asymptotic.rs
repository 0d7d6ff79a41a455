//! Homogeneous-gas RKKY shapes, used as oracles for the trapped kernels.

use super::KernelError;

/// 1D RKKY shape for k_F r >> 1, unit proportionality constant:
/// `-(1/x) [cos(2x) + sin(2x)/(2x)]` with x = k_F r.
pub fn asymptotic_f1d(kfr: f64) -> Result<f64, KernelError> {
    check_domain(kfr)?;
    Ok(-(1.0 / kfr) * ((2.0 * kfr).cos() + (2.0 * kfr).sin() / (2.0 * kfr)))
}

/// 2D RKKY shape for k_F r >> 1, unit proportionality constant:
/// `-(1/x^2) [sin(2x) - cos(2x)/(4x)]` with x = k_F r.
pub fn asymptotic_f2d(kfr: f64) -> Result<f64, KernelError> {
    check_domain(kfr)?;
    Ok(-(1.0 / (kfr * kfr)) * ((2.0 * kfr).sin() - (2.0 * kfr).cos() / (4.0 * kfr)))
}

fn check_domain(kfr: f64) -> Result<(), KernelError> {
    if kfr <= 0.0 || !kfr.is_finite() {
        return Err(KernelError::Domain(format!(
            "asymptotic RKKY form needs k_F r > 0, got {kfr}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn f1d_at_half_pi() {
        // cos(pi) = -1, sin(pi) = 0 -> 2/pi.
        let v = asymptotic_f1d(PI / 2.0).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn f2d_at_quarter_pi() {
        // sin(pi/2) = 1, cos(pi/2) = 0 -> -16/pi^2.
        let v = asymptotic_f2d(PI / 4.0).unwrap();
        assert!((v + 16.0 / (PI * PI)).abs() < 1e-14);
    }

    #[test]
    fn f1d_envelope_decays_as_inverse_kfr() {
        // Maxima near cos(2x) = -1: value approx 1/x up to the 1/(2x)^2 tail.
        for j in [5, 10, 20] {
            let x = PI / 2.0 + j as f64 * PI;
            let v = asymptotic_f1d(x).unwrap();
            assert!(v > 0.0);
            assert!((v * x - 1.0).abs() < 0.5 / x, "x = {x}");
        }
    }

    #[test]
    fn non_positive_arguments_are_domain_errors() {
        assert!(asymptotic_f1d(0.0).is_err());
        assert!(asymptotic_f2d(-1.0).is_err());
    }
}
