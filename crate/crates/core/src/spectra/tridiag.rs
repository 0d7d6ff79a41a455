//! Selected eigenpairs of a symmetric tridiagonal matrix.
//!
//! Eigenvalues by Sturm-sequence bisection, eigenvectors by inverse
//! iteration with a fixed start vector. Everything is deterministic for a
//! fixed matrix: bisection brackets depend only on the entries, and the
//! inverse-iteration start is a hash of the row index, not an RNG draw.
//! Eigenvalues inside a near-degenerate cluster get their vectors
//! re-orthogonalized against the rest of the cluster.

use rayon::prelude::*;

use crate::util::hash01;

/// Symmetric tridiagonal matrix: `diag` has length n, `off` length n - 1.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len(), diag.len() - 1);
        Self { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin bounds on the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm count).
    pub fn count_below(&self, lambda: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.sqrt();
        let mut count = 0usize;
        let mut q = 1.0f64;
        for i in 0..self.n() {
            let e2 = if i > 0 {
                self.off[i - 1] * self.off[i - 1]
            } else {
                0.0
            };
            q = self.diag[i] - lambda - e2 / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The k-th eigenvalue (0-based, ascending) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        let tol = 1e-14 * (hi - lo).abs().max(1.0) + f64::EPSILON * lo.abs().max(hi.abs());
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` lowest eigenvalues, ascending. Parallel over indices; each
    /// bisection is independent so the result does not depend on threads.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        assert!(k <= self.n());
        (0..k)
            .into_par_iter()
            .map(|i| self.eigenvalue(i))
            .collect()
    }

    /// Inverse-iteration eigenvector for an eigenvalue estimate. Returns
    /// the normalized vector and the residual |T v - lambda v|.
    fn inverse_iteration(&self, lambda: f64, ortho: &[&[f64]]) -> (Vec<f64>, f64) {
        let n = self.n();
        let mut v: Vec<f64> = (0..n).map(|i| hash01(i as u64) - 0.5).collect();
        normalize(&mut v);
        let scale = self.bounds().1.abs().max(self.bounds().0.abs()).max(1.0);
        // Small shift keeps the shifted matrix factorable when lambda is
        // accurate to machine precision.
        let shift = lambda + 1e-13 * scale;
        let lu = TridiagLu::factor(self, shift);
        let mut residual = f64::INFINITY;
        for _ in 0..8 {
            v = lu.solve(&v);
            for o in ortho {
                let c = dot(&v, o);
                for (vi, oi) in v.iter_mut().zip(o.iter()) {
                    *vi -= c * oi;
                }
            }
            normalize(&mut v);
            residual = self.residual(&v, lambda);
            if residual < 1e-11 * scale {
                break;
            }
        }
        (v, residual)
    }

    fn residual(&self, v: &[f64], lambda: f64) -> f64 {
        let n = self.n();
        let mut r2 = 0.0;
        for i in 0..n {
            let mut t = (self.diag[i] - lambda) * v[i];
            if i > 0 {
                t += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                t += self.off[i] * v[i + 1];
            }
            r2 += t * t;
        }
        r2.sqrt()
    }

    /// Lowest `k` eigenpairs. Vectors are unit l2 norm with no sign
    /// convention applied (callers fix the sign for their own grids).
    /// Returns None if some inverse iteration failed; the caller maps this
    /// to its own convergence error.
    pub fn lowest_eigenpairs(&self, k: usize) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
        let values = self.lowest_eigenvalues(k);
        let scale = {
            let (lo, hi) = self.bounds();
            lo.abs().max(hi.abs()).max(1.0)
        };
        let cluster_tol = 1e-8 * scale;
        // Cluster boundaries: consecutive eigenvalues closer than the
        // tolerance share inverse-iteration orthogonalization.
        let mut clusters: Vec<(usize, usize)> = Vec::new();
        let mut start = 0usize;
        for i in 1..=k {
            if i == k || values[i] - values[i - 1] > cluster_tol {
                clusters.push((start, i));
                start = i;
            }
        }
        let vector_sets: Vec<Option<Vec<Vec<f64>>>> = clusters
            .par_iter()
            .map(|&(a, b)| {
                let mut set: Vec<Vec<f64>> = Vec::with_capacity(b - a);
                for i in a..b {
                    let ortho: Vec<&[f64]> = set.iter().map(|v| v.as_slice()).collect();
                    let (v, res) = self.inverse_iteration(values[i], &ortho);
                    if res > 1e-7 * scale {
                        return None;
                    }
                    set.push(v);
                }
                Some(set)
            })
            .collect();
        let mut vectors = Vec::with_capacity(k);
        for set in vector_sets {
            vectors.extend(set?);
        }
        Some((values, vectors))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// LU factorization of (T - shift) with partial pivoting. Tridiagonal
/// input gains one extra superdiagonal under row swaps.
struct TridiagLu {
    n: usize,
    lower: Vec<f64>,
    d0: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &SymTridiag, shift: f64) -> Self {
        let n = t.n();
        let mut d0: Vec<f64> = t.diag.iter().map(|&d| d - shift).collect();
        let mut d1 = vec![0.0; n];
        let mut d2 = vec![0.0; n];
        for i in 0..n - 1 {
            d1[i] = t.off[i];
        }
        let mut lower = vec![0.0; n];
        let mut swapped = vec![false; n];
        let pivmin = f64::MIN_POSITIVE.sqrt();
        for i in 0..n - 1 {
            let sub = t.off[i];
            if sub.abs() > d0[i].abs() {
                swapped[i] = true;
                // Swap row i with row i+1.
                let (a, b, c) = (sub, d0[i + 1], d1[i + 1]);
                d1[i + 1] = 0.0;
                let (p0, p1, p2) = (d0[i], d1[i], d2[i]);
                d0[i] = a;
                d1[i] = b;
                d2[i] = c;
                let m = p0 / d0[i];
                lower[i] = m;
                d0[i + 1] = p1 - m * d1[i];
                d1[i + 1] = p2 - m * d2[i];
            } else {
                let p = if d0[i].abs() < pivmin {
                    pivmin.copysign(d0[i])
                } else {
                    d0[i]
                };
                d0[i] = p;
                let m = sub / p;
                lower[i] = m;
                d0[i + 1] -= m * d1[i];
                d1[i + 1] -= m * d2[i];
            }
        }
        if d0[n - 1].abs() < pivmin {
            d0[n - 1] = pivmin.copysign(d0[n - 1]);
        }
        Self {
            n,
            lower,
            d0,
            d1,
            d2,
            swapped,
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = rhs.to_vec();
        for i in 0..n - 1 {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            let m = self.lower[i];
            y[i + 1] -= m * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut t = y[i];
            if i + 1 < n {
                t -= self.d1[i] * x[i + 1];
            }
            if i + 2 < n {
                t -= self.d2[i] * x[i + 2];
            }
            x[i] = t / self.d0[i];
        }
        // Guard against overflow from a nearly singular solve.
        let mx = x.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if !mx.is_finite() {
            for xi in x.iter_mut() {
                if !xi.is_finite() {
                    *xi = 0.0;
                }
            }
        }
        x
    }
}
