//! Gaussian convolution of radial kernels.

use super::LatticeError;
use crate::kernel::RadialKernel;

/// Minimum number of kernel samples the convolving Gaussian must span.
const MIN_SAMPLES: usize = 6;
/// Integration window in units of the convolution standard deviation.
const WINDOW_SIGMAS: f64 = 8.0;

/// 1D smeared kernel: F convolved with a Gaussian of variance
/// 2 sigma^2, with F extended evenly about r = 0. The quadrature weight
/// is renormalized over the available window so a constant kernel stays
/// exactly constant near the range edges.
pub struct SmearedKernel<'a> {
    radial: &'a RadialKernel,
    /// Standard deviation of the convolution kernel, sqrt(2) sigma.
    conv_sigma: f64,
}

impl<'a> SmearedKernel<'a> {
    pub fn new(radial: &'a RadialKernel, sigma_kfr: f64) -> Result<Self, LatticeError> {
        let conv_sigma = std::f64::consts::SQRT_2 * sigma_kfr;
        check_resolution(radial, sigma_kfr, conv_sigma)?;
        Ok(Self { radial, conv_sigma })
    }

    pub fn eval(&self, r_kfr: f64) -> Result<f64, LatticeError> {
        if r_kfr < 0.0 || r_kfr > self.radial.max_kfr() {
            return Err(LatticeError::Range {
                requested: r_kfr,
                available: self.radial.max_kfr(),
            });
        }
        let s = self.conv_sigma;
        let grid = &self.radial.r_kfr;
        let f = &self.radial.f;
        let n = grid.len();
        let lo = r_kfr - WINDOW_SIGMAS * s;
        let hi = r_kfr + WINDOW_SIGMAS * s;
        let mut num = 0.0;
        let mut den = 0.0;
        // Even extension: sample points at +-grid[j]; skip j = 0 once.
        for j in 0..n {
            let w = trapezoid_weight(grid, j);
            for sign in [1.0, -1.0] {
                if sign < 0.0 && grid[j] == 0.0 {
                    continue;
                }
                let x = sign * grid[j];
                if x < lo || x > hi {
                    continue;
                }
                let u = (x - r_kfr) / s;
                let g = (-0.5 * u * u).exp() * w;
                num += g * f[j];
                den += g;
            }
        }
        Ok(if den > 0.0 { num / den } else { 0.0 })
    }
}

/// Isotropic 2D smeared kernel for planar lattices. The convolution of
/// two isotropic 2D Gaussian densities reduces to a radial integral with
/// a modified-Bessel angular factor:
///
/// ```text
/// F_s(D) = int rho drho F(rho) (rho/s^2) exp(-(rho-D)^2/(2 s^2)) I0e(rho D / s^2)
/// ```
///
/// with s^2 = 2 sigma^2 per axis and I0e the scaled Bessel function
/// exp(-x) I0(x). Renormalized the same way as the 1D case.
pub struct SmearedKernel2d<'a> {
    radial: &'a RadialKernel,
    conv_sigma: f64,
}

impl<'a> SmearedKernel2d<'a> {
    pub fn new(radial: &'a RadialKernel, sigma_kfr: f64) -> Result<Self, LatticeError> {
        let conv_sigma = std::f64::consts::SQRT_2 * sigma_kfr;
        check_resolution(radial, sigma_kfr, conv_sigma)?;
        Ok(Self { radial, conv_sigma })
    }

    pub fn eval(&self, r_kfr: f64) -> Result<f64, LatticeError> {
        if r_kfr < 0.0 || r_kfr > self.radial.max_kfr() {
            return Err(LatticeError::Range {
                requested: r_kfr,
                available: self.radial.max_kfr(),
            });
        }
        let s = self.conv_sigma;
        let s2 = s * s;
        let grid = &self.radial.r_kfr;
        let f = &self.radial.f;
        let lo = (r_kfr - WINDOW_SIGMAS * s).max(0.0);
        let hi = r_kfr + WINDOW_SIGMAS * s;
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..grid.len() {
            let rho = grid[j];
            if rho < lo || rho > hi {
                continue;
            }
            let w = trapezoid_weight(grid, j);
            let u = (rho - r_kfr) / s;
            let g = rho / s2 * (-0.5 * u * u).exp() * i0_scaled(rho * r_kfr / s2) * w;
            num += g * f[j];
            den += g;
        }
        Ok(if den > 0.0 { num / den } else { 0.0 })
    }
}

fn check_resolution(
    radial: &RadialKernel,
    sigma_kfr: f64,
    conv_sigma: f64,
) -> Result<(), LatticeError> {
    if sigma_kfr <= 0.0 {
        return Err(LatticeError::Resolution {
            sigma_kfr,
            samples: 0,
            needed: MIN_SAMPLES,
        });
    }
    // Representative sample count across +-3 sigma of the convolution
    // Gaussian at the interior of the grid.
    let step = if radial.len() > 1 {
        (radial.max_kfr() - radial.r_kfr[0]) / (radial.len() - 1) as f64
    } else {
        f64::INFINITY
    };
    let samples = (6.0 * conv_sigma / step).floor() as usize;
    if samples < MIN_SAMPLES {
        return Err(LatticeError::Resolution {
            sigma_kfr,
            samples,
            needed: MIN_SAMPLES,
        });
    }
    Ok(())
}

fn trapezoid_weight(grid: &[f64], j: usize) -> f64 {
    let n = grid.len();
    if n < 2 {
        return 1.0;
    }
    if j == 0 {
        0.5 * (grid[1] - grid[0])
    } else if j == n - 1 {
        0.5 * (grid[n - 1] - grid[n - 2])
    } else {
        0.5 * (grid[j + 1] - grid[j - 1])
    }
}

/// exp(-x) I0(x) for x >= 0 (Abramowitz & Stegun 9.8.1-9.8.2).
fn i0_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 3.75 {
        let t = x / 3.75;
        let t2 = t * t;
        let i0 = 1.0
            + t2 * (3.5156229
                + t2 * (3.0899424
                    + t2 * (1.2067492 + t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))));
        i0 * (-x).exp()
    } else {
        let t = 3.75 / x;
        (0.39894228
            + t * (0.01328592
                + t * (0.00225319
                    + t * (-0.00157565
                        + t * (0.00916281
                            + t * (-0.02057706
                                + t * (0.02635537 + t * (-0.01647633 + t * 0.00392377))))))))
            / x.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{KernelMeta, RadialKernel};

    fn synthetic(fun: impl Fn(f64) -> f64, max: f64, step: f64) -> RadialKernel {
        let n = (max / step) as usize + 1;
        let r: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
        let f: Vec<f64> = r.iter().map(|&x| fun(x)).collect();
        RadialKernel::new(r, f, 1.0, KernelMeta::Synthetic)
    }

    #[test]
    fn constant_kernel_stays_constant_everywhere() {
        let kernel = synthetic(|_| 3.25, 10.0, 0.02);
        let sm = SmearedKernel::new(&kernel, 0.3).unwrap();
        for r in [0.0, 0.5, 5.0, 9.9, 10.0] {
            assert!((sm.eval(r).unwrap() - 3.25).abs() < 1e-12, "r = {r}");
        }
        let sm2 = SmearedKernel2d::new(&kernel, 0.3).unwrap();
        for r in [0.0, 0.5, 5.0, 9.0] {
            assert!((sm2.eval(r).unwrap() - 3.25).abs() < 1e-10, "2d r = {r}");
        }
    }

    #[test]
    fn narrow_width_approaches_identity() {
        let kernel = synthetic(|x| (x * 1.3).sin() + 0.2 * x, 10.0, 0.002);
        let sm = SmearedKernel::new(&kernel, 0.01).unwrap();
        for r in [1.0, 3.3, 7.7] {
            let exact = (r * 1.3_f64).sin() + 0.2 * r;
            assert!((sm.eval(r).unwrap() - exact).abs() < 1e-3, "r = {r}");
        }
    }

    #[test]
    fn cosine_is_damped_by_gaussian_factor() {
        // Convolving cos(2 k_F r) with N(0, 2 sigma^2) damps the
        // amplitude by exp(-(2)^2 * 2 sigma^2 / 2) and keeps the phase.
        let sigma = 0.25;
        let kernel = synthetic(|x| (2.0 * x).cos(), 30.0, 0.01);
        let sm = SmearedKernel::new(&kernel, sigma).unwrap();
        let damp = (-(2.0f64 * 2.0) * (2.0 * sigma * sigma) / 2.0).exp();
        for r in [5.0, 8.0, 12.5, 15.0] {
            let expect = damp * (2.0 * r as f64).cos();
            assert!(
                (sm.eval(r).unwrap() - expect).abs() < 2e-3,
                "r = {r}: {} vs {expect}",
                sm.eval(r).unwrap()
            );
        }
    }

    #[test]
    fn positivity_is_preserved_under_smearing() {
        let kernel = synthetic(|x| (x - 5.0) * (x - 5.0), 10.0, 0.01);
        let sm = SmearedKernel::new(&kernel, 0.2).unwrap();
        for j in 0..50 {
            let r = 2.0 + 0.1 * j as f64;
            assert!(sm.eval(r).unwrap() >= 0.0);
        }
    }

    #[test]
    fn unresolved_gaussian_is_rejected() {
        let kernel = synthetic(|_| 1.0, 10.0, 0.5);
        match SmearedKernel::new(&kernel, 0.1) {
            Err(LatticeError::Resolution { .. }) => {}
            Err(other) => panic!("expected Resolution error, got {other:?}"),
            Ok(_) => panic!("expected Resolution error, got Ok"),
        }
    }

    #[test]
    fn scaled_bessel_matches_series_values() {
        // Reference values of exp(-x) I0(x).
        let cases = [
            (0.0, 1.0),
            (0.5, 0.6450352706),
            (1.0, 0.4657596077),
            (5.0, 0.1835408126),
            (20.0, 0.0897803119),
        ];
        for (x, expect) in cases {
            assert!(
                (i0_scaled(x) - expect).abs() < 2e-7,
                "x = {x}: {} vs {expect}",
                i0_scaled(x)
            );
        }
    }
}
