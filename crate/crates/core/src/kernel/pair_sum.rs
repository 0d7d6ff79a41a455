//! Second-order particle-hole sums over a filled Fermi sea.

use rayon::prelude::*;

use super::{KernelError, KernelMeta, RadialKernel};
use crate::spectra::{hermite, Basis1d, Basis2d};
use crate::util::pairwise_sum;

/// Smallest particle-hole gap the perturbative sum accepts. Anything
/// smaller signals an open shell and aborts instead of regularizing.
pub const MIN_PH_GAP: f64 = 1e-12;

/// Mediated-kernel evaluator over a numerical 1D basis.
///
/// Owns the inverse particle-hole gaps; wavefunction values come from the
/// borrowed basis. The full kernel F(xi, xi') is available at any pair of
/// points through [`Kernel1d::eval`]; the pair sum runs in a fixed order
/// (occupied outer, virtual inner, pairwise reduction over occupied rows)
/// so results are bit-stable regardless of threading.
pub struct Kernel1d<'a> {
    pub basis: &'a Basis1d,
    pub n_occupied: usize,
    pub n_virtual: usize,
    /// 1/(eps_m - eps_n), row n (occupied) major.
    inv_gaps: Vec<f64>,
}

/// Build the 1D kernel from the lowest `n_fermions` occupied states and
/// the next `n_virtual` states of the basis.
pub fn mediated_kernel_1d(
    basis: &Basis1d,
    n_fermions: usize,
    n_virtual: usize,
) -> Result<Kernel1d<'_>, KernelError> {
    let needed = n_fermions + n_virtual;
    if n_virtual == 0 || basis.n_states() < needed {
        return Err(KernelError::InsufficientVirtualStates {
            available: basis.n_states(),
            needed,
            n_occupied: n_fermions,
            n_virtual,
        });
    }
    let mut inv_gaps = Vec::with_capacity(n_fermions * n_virtual);
    for n in 0..n_fermions {
        for m in 0..n_virtual {
            let gap = basis.energies[n_fermions + m] - basis.energies[n];
            if gap < MIN_PH_GAP {
                return Err(KernelError::DegenerateDenominator {
                    occupied: n,
                    unoccupied: n_fermions + m,
                    gap,
                });
            }
            inv_gaps.push(1.0 / gap);
        }
    }
    Ok(Kernel1d {
        basis,
        n_occupied: n_fermions,
        n_virtual,
        inv_gaps,
    })
}

impl Kernel1d<'_> {
    /// Kernel value at two arbitrary positions (trap units).
    pub fn eval(&self, xi1: f64, xi2: f64) -> f64 {
        let n_states = self.n_occupied + self.n_virtual;
        let mut v1 = vec![0.0; n_states];
        let mut v2 = vec![0.0; n_states];
        self.fill_values(xi1, &mut v1);
        self.fill_values(xi2, &mut v2);
        self.eval_from_values(&v1, &v2)
    }

    fn fill_values(&self, xi: f64, out: &mut [f64]) {
        for (s, o) in out.iter_mut().enumerate() {
            *o = self.basis.value_at(s, xi);
        }
    }

    fn eval_from_values(&self, v1: &[f64], v2: &[f64]) -> f64 {
        let (n_occ, n_virt) = (self.n_occupied, self.n_virtual);
        if n_occ == 0 {
            return 0.0;
        }
        // Products of virtual-state values at the two points.
        let prods: Vec<f64> = (0..n_virt)
            .map(|m| v1[n_occ + m] * v2[n_occ + m])
            .collect();
        let rows: Vec<f64> = (0..n_occ)
            .map(|n| {
                let gaps = &self.inv_gaps[n * n_virt..(n + 1) * n_virt];
                let inner: f64 = prods.iter().zip(gaps).map(|(p, g)| p * g).sum();
                v1[n] * v2[n] * inner
            })
            .collect();
        -pairwise_sum(&rows)
    }

    /// Full kernel matrix on a set of grid indices (test and export use).
    pub fn matrix_on_indices(&self, idx: &[usize]) -> Vec<Vec<f64>> {
        let n_states = self.n_occupied + self.n_virtual;
        let cols: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| {
                (0..n_states)
                    .map(|s| self.basis.wavefunctions[s][i])
                    .collect()
            })
            .collect();
        let mut out = vec![vec![0.0; idx.len()]; idx.len()];
        for a in 0..idx.len() {
            for b in a..idx.len() {
                let v = self.eval_from_values(&cols[a], &cols[b]);
                out[a][b] = v;
                out[b][a] = v;
            }
        }
        out
    }
}

/// Sampling layout for radial profiles.
#[derive(Debug, Clone)]
pub struct RadialParams {
    /// Largest k_F r sampled.
    pub max_kfr: f64,
    /// Radial step in k_F r. The default resolves one 2 k_F oscillation
    /// period (pi in k_F r) by 24 samples.
    pub step_kfr: f64,
    /// Center offsets (in x_zp) probed by the translation-invariance
    /// residual.
    pub offsets_xzp: Vec<f64>,
    /// Residual is evaluated for k_F r up to this value.
    pub residual_max_kfr: f64,
}

impl Default for RadialParams {
    fn default() -> Self {
        Self {
            max_kfr: 12.0,
            step_kfr: std::f64::consts::PI / 24.0,
            offsets_xzp: vec![1.0, 2.0, 3.0, 5.0],
            residual_max_kfr: 10.0,
        }
    }
}

impl RadialParams {
    pub fn with_max_kfr(max_kfr: f64) -> Self {
        Self {
            max_kfr,
            ..Self::default()
        }
    }
}

/// Radial profile plus the translation-invariance diagnostic.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub kernel: RadialKernel,
    /// max over offsets delta and sampled r of
    /// |F(-r/2 + delta, r/2 + delta) - F(-r/2, r/2)| / max |F|.
    pub translation_residual: f64,
}

/// Sample the kernel between symmetric points through the trap center,
/// F(r) = F(-r/2, +r/2), on a uniform k_F r grid.
pub fn radial_profile(kernel: &Kernel1d<'_>, k_f: f64, params: &RadialParams) -> RadialProfile {
    assert!(k_f > 0.0);
    let n_r = (params.max_kfr / params.step_kfr).floor() as usize + 1;
    let r_kfr: Vec<f64> = (0..n_r).map(|j| j as f64 * params.step_kfr).collect();
    let n_states = kernel.n_occupied + kernel.n_virtual;

    // Independent samples; each inner pair sum has fixed order, so the
    // parallel map is bit-stable for any thread count.
    let f: Vec<f64> = r_kfr
        .par_iter()
        .map_init(
            || (vec![0.0; n_states], vec![0.0; n_states]),
            |(v1, v2), &kfr| {
                let half = 0.5 * kfr / k_f;
                kernel.fill_values(-half, v1);
                kernel.fill_values(half, v2);
                kernel.eval_from_values(v1, v2)
            },
        )
        .collect();

    let max_abs = f.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let translation_residual = if max_abs == 0.0 {
        0.0
    } else {
        let probes: Vec<(usize, f64)> = r_kfr
            .iter()
            .enumerate()
            .filter(|(_, &kfr)| kfr <= params.residual_max_kfr)
            .flat_map(|(j, _)| params.offsets_xzp.iter().map(move |&d| (j, d)))
            .collect();
        let worst = probes
            .par_iter()
            .map_init(
                || (vec![0.0; n_states], vec![0.0; n_states]),
                |(v1, v2), &(j, delta)| {
                    let half = 0.5 * r_kfr[j] / k_f;
                    kernel.fill_values(-half + delta, v1);
                    kernel.fill_values(half + delta, v2);
                    let shifted = kernel.eval_from_values(v1, v2);
                    (shifted - f[j]).abs()
                },
            )
            .reduce(|| 0.0f64, f64::max);
        worst / max_abs
    };

    let meta = KernelMeta::Trap1d(kernel.basis.trap);
    RadialProfile {
        kernel: RadialKernel::new(r_kfr, f, k_f, meta),
        translation_residual,
    }
}

/// On-axis evaluator for the anisotropic 2D trap.
///
/// States with odd n_z vanish on the z = 0 axis and are skipped; the
/// transverse factors of the remaining states are folded into the pair
/// weights, leaving pure Hermite-function evaluations per sample.
pub struct Kernel2d<'a> {
    pub basis: &'a Basis2d,
    /// Indices (into the basis) with even n_z, occupied sea.
    occ: Vec<usize>,
    /// Indices with even n_z above the sea.
    virt: Vec<usize>,
    /// (zfac_n zfac_m)^2 / (eps_m - eps_n), occ-major.
    weights: Vec<f64>,
    nx_max: u32,
}

impl<'a> Kernel2d<'a> {
    /// Build from the lowest `n_fermions` states; everything else under
    /// the basis cutoff is virtual.
    pub fn new(basis: &'a Basis2d, n_fermions: usize) -> Result<Self, KernelError> {
        let total = basis.n_states();
        if total < n_fermions + 1 {
            return Err(KernelError::InsufficientVirtualStates {
                available: total,
                needed: n_fermions + 1,
                n_occupied: n_fermions,
                n_virtual: 1,
            });
        }
        let even = |i: &usize| basis.states[*i].nz % 2 == 0;
        let occ: Vec<usize> = (0..n_fermions).filter(even).collect();
        let virt: Vec<usize> = (n_fermions..total).filter(even).collect();
        let mut weights = Vec::with_capacity(occ.len() * virt.len());
        for &n in &occ {
            let zn = basis.axis_z_factor(n);
            for &m in &virt {
                let gap = basis.states[m].energy - basis.states[n].energy;
                if gap < MIN_PH_GAP {
                    return Err(KernelError::DegenerateDenominator {
                        occupied: n,
                        unoccupied: m,
                        gap,
                    });
                }
                let zm = basis.axis_z_factor(m);
                let z = zn * zm;
                weights.push(z * z / gap);
            }
        }
        Ok(Self {
            basis,
            occ,
            virt,
            weights,
            nx_max: basis.nx_max(),
        })
    }

    /// Kernel value between two points on the z = 0 axis.
    pub fn eval_axis(&self, x1: f64, x2: f64) -> f64 {
        let n = self.nx_max as usize;
        let mut h1 = vec![0.0; n + 1];
        let mut h2 = vec![0.0; n + 1];
        hermite::eigenfunctions_upto(n, x1, &mut h1);
        hermite::eigenfunctions_upto(n, x2, &mut h2);
        self.eval_from_tables(&h1, &h2)
    }

    fn eval_from_tables(&self, h1: &[f64], h2: &[f64]) -> f64 {
        if self.occ.is_empty() || self.virt.is_empty() {
            return 0.0;
        }
        let prods: Vec<f64> = self
            .virt
            .iter()
            .map(|&m| {
                let nx = self.basis.states[m].nx as usize;
                h1[nx] * h2[nx]
            })
            .collect();
        let n_virt = prods.len();
        let rows: Vec<f64> = self
            .occ
            .iter()
            .enumerate()
            .map(|(row, &n)| {
                let nx = self.basis.states[n].nx as usize;
                let w = &self.weights[row * n_virt..(row + 1) * n_virt];
                let inner: f64 = prods.iter().zip(w).map(|(p, g)| p * g).sum();
                h1[nx] * h2[nx] * inner
            })
            .collect();
        -pairwise_sum(&rows)
    }
}

/// Anchor offsets (in x_zp) for radial 2D sampling. A pair placed
/// mirror-symmetrically about the trap center picks up coherent
/// contributions from the whole virtual spectrum (the squared products
/// have no phase averaging there), which buries the Fermi-surface
/// oscillation; anchoring one end at generic off-center points and
/// averaging restores the translation-invariant part.
const AXIS_ANCHORS_XZP: [f64; 3] = [0.13, 0.29, 0.47];

/// Radial 2D kernel along the weak (x) axis near the trap center,
/// averaged over the fixed generic anchors F(x0, x0 + r).
pub fn mediated_kernel_2d(
    basis: &Basis2d,
    n_fermions: usize,
    r_kfr: &[f64],
    k_f: f64,
) -> Result<RadialKernel, KernelError> {
    assert!(k_f > 0.0);
    let kernel = Kernel2d::new(basis, n_fermions)?;
    let n = kernel.nx_max as usize;
    let f: Vec<f64> = r_kfr
        .par_iter()
        .map_init(
            || (vec![0.0; n + 1], vec![0.0; n + 1]),
            |(h1, h2), &kfr| {
                let r = kfr / k_f;
                let mean: f64 = AXIS_ANCHORS_XZP
                    .iter()
                    .map(|&x0| {
                        hermite::eigenfunctions_upto(n, x0, h1);
                        hermite::eigenfunctions_upto(n, x0 + r, h2);
                        kernel.eval_from_tables(h1, h2)
                    })
                    .sum::<f64>();
                mean / AXIS_ANCHORS_XZP.len() as f64
            },
        )
        .collect();
    let meta = KernelMeta::Trap2d(crate::spectra::TrapSpec2d::new(
        n_fermions.max(1),
        basis.anisotropy,
    ));
    Ok(RadialKernel::new(r_kfr.to_vec(), f, k_f, meta))
}

/// Uniform k_F r grid from 0 to `max_kfr`.
pub fn uniform_kfr_grid(max_kfr: f64, step_kfr: f64) -> Vec<f64> {
    let n = (max_kfr / step_kfr).floor() as usize + 1;
    (0..n).map(|j| j as f64 * step_kfr).collect()
}
