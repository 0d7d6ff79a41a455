//! Eigenfunctions of the trap-unit oscillator `-d^2/dxi^2 + xi^2/4`.
//!
//! These are the standard Hermite functions with length scale sqrt(2) in
//! xi: psi_n(xi) = 2^(-1/4) phi_n(xi / sqrt(2)) with phi_n the unit
//! oscillator eigenfunction. Evaluation uses the normalized three-term
//! recurrence, which keeps every intermediate bounded (no raw factorials
//! or Hermite polynomials appear).

/// Value of the n-th eigenfunction at xi. Energy of the state is n + 1/2.
pub fn harmonic_eigenfunction(n: usize, xi: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    eigenfunctions_upto(n, xi, &mut buf);
    buf[n]
}

/// Fill `out[k]` with psi_k(xi) for k = 0..=n_max in a single recurrence
/// pass. `out` must have length n_max + 1.
pub fn eigenfunctions_upto(n_max: usize, xi: f64, out: &mut [f64]) {
    assert_eq!(out.len(), n_max + 1);
    let x = xi / std::f64::consts::SQRT_2;
    // phi_0(x) = pi^(-1/4) exp(-x^2/2); the extra 2^(-1/4) rescales to xi.
    let norm = 1.0 / (2.0 * std::f64::consts::PI).powf(0.25);
    out[0] = norm * (-0.5 * x * x).exp();
    if n_max == 0 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * x * out[0];
    for k in 1..n_max {
        let kf = k as f64;
        out[k + 1] = ((2.0 / (kf + 1.0)).sqrt() * x) * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}
