//! Ground-state observables: structure factor, bond order, edge profile.

use super::{ChainModel, FixedNumberBasis, GroundStateResult};
use std::f64::consts::PI;

/// Density structure factor S(q) on the discrete momenta q = 2 pi m / L.
#[derive(Debug, Clone)]
pub struct StructureFactor {
    /// S(2 pi m / L) for m = 0..L-1. S(0) vanishes in a fixed-number
    /// sector and is stored as exactly zero.
    pub s_of_q: Vec<f64>,
    /// Peak position over q != 0, ties broken toward smaller q.
    pub q0: f64,
    pub s_max: f64,
}

/// S(q) = (1/L^2) sum_{ij} <dn_i dn_j> e^{iq(r_i - r_j)} with
/// dn_i = n_i - rho. Density operators are diagonal, so for q != 0 this
/// is the weighted second moment of D_q = sum_j n_j e^{iq j}.
pub fn structure_factor(
    state: &GroundStateResult,
    basis: &FixedNumberBasis,
    model: &ChainModel,
) -> StructureFactor {
    let length = model.length;
    let dim = basis.dim();
    let mut s_of_q = vec![0.0; length];
    // Phase tables per momentum index.
    for m in 1..length {
        let q = 2.0 * PI * m as f64 / length as f64;
        let cos_t: Vec<f64> = (0..length).map(|j| (q * j as f64).cos()).collect();
        let sin_t: Vec<f64> = (0..length).map(|j| (q * j as f64).sin()).collect();
        let mut acc = 0.0;
        for idx in 0..dim {
            let w = state.amplitudes[idx] * state.amplitudes[idx];
            if w == 0.0 {
                continue;
            }
            let mut re = 0.0;
            let mut im = 0.0;
            let mut bits = basis.state(idx);
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                re += cos_t[j];
                im += sin_t[j];
                bits &= bits - 1;
            }
            acc += w * (re * re + im * im);
        }
        s_of_q[m] = acc / (length * length) as f64;
    }
    // S(q) = S(2 pi - q), so the peak search runs over m <= L/2 only;
    // this realizes the smaller-q tie-break exactly instead of leaving
    // symmetric partners to floating-point noise.
    let mut q0 = 0.0;
    let mut s_max = f64::NEG_INFINITY;
    for m in 1..=length / 2 {
        if s_of_q[m] > s_max {
            s_max = s_of_q[m];
            q0 = 2.0 * PI * m as f64 / length as f64;
        }
    }
    StructureFactor { s_of_q, q0, s_max }
}

/// <psi| b+_{j+1} b_j + h.c. |psi> for bond j (sites j, j+1 mod L).
fn bond_expectation(
    state: &GroundStateResult,
    basis: &FixedNumberBasis,
    length: usize,
    bond: usize,
) -> f64 {
    let j = bond;
    let k = (bond + 1) % length;
    let mut acc = 0.0;
    for idx in 0..basis.dim() {
        let s = basis.state(idx);
        let bj = s >> j & 1;
        let bk = s >> k & 1;
        if bj == bk {
            continue;
        }
        let target = s ^ ((1 << j) | (1 << k));
        acc += state.amplitudes[basis.rank(target)] * state.amplitudes[idx];
    }
    acc
}

/// Apply the bond operator B_j to the state (result is unnormalized).
fn apply_bond(
    state: &[f64],
    basis: &FixedNumberBasis,
    length: usize,
    bond: usize,
    out: &mut [f64],
) {
    out.iter_mut().for_each(|x| *x = 0.0);
    let j = bond;
    let k = (bond + 1) % length;
    for idx in 0..basis.dim() {
        let s = basis.state(idx);
        let bj = s >> j & 1;
        let bk = s >> k & 1;
        if bj == bk {
            continue;
        }
        let target = s ^ ((1 << j) | (1 << k));
        out[basis.rank(target)] += state[idx];
    }
}

/// Staggered bond order B = (1/L) sum_j (-1)^j <B_j> over the existing
/// bonds, plus the boundary-insensitive connected staggered bond-bond
/// correlator C_B = (1/L) sum_j (-1)^j [<B_j B_j0> - <B_j><B_j0>] with
/// j0 = L/2. B pins under open boundaries; C_B stays meaningful on rings
/// whose ground space is dimerization-degenerate.
pub fn bond_observables(
    state: &GroundStateResult,
    basis: &FixedNumberBasis,
    model: &ChainModel,
) -> (f64, f64) {
    let length = model.length;
    let bonds = if model.boundary.is_periodic() {
        length
    } else {
        length - 1
    };
    let expectations: Vec<f64> = (0..bonds)
        .map(|j| bond_expectation(state, basis, length, j))
        .collect();
    let b_order = expectations
        .iter()
        .enumerate()
        .map(|(j, &e)| if j % 2 == 0 { e } else { -e })
        .sum::<f64>()
        / length as f64;

    let j0 = length / 2;
    let mut phi = vec![0.0; basis.dim()];
    apply_bond(&state.amplitudes, basis, length, j0, &mut phi);
    let e0 = expectations[j0.min(bonds - 1)];
    let mut corr = 0.0;
    let mut psi_bj = vec![0.0; basis.dim()];
    for (j, &ej) in expectations.iter().enumerate() {
        // <B_j B_j0> = <psi| B_j (B_j0 psi)>.
        apply_bond(&phi, basis, length, j, &mut psi_bj);
        let bjb0: f64 = state
            .amplitudes
            .iter()
            .zip(&psi_bj)
            .map(|(a, b)| a * b)
            .sum();
        let connected = bjb0 - ej * e0;
        corr += if j % 2 == 0 { connected } else { -connected };
    }
    (b_order, corr / length as f64)
}

/// Site-resolved densities <n_j>.
pub fn edge_profile(state: &GroundStateResult, basis: &FixedNumberBasis) -> Vec<f64> {
    let length = basis.length;
    let mut n = vec![0.0; length];
    for idx in 0..basis.dim() {
        let w = state.amplitudes[idx] * state.amplitudes[idx];
        if w == 0.0 {
            continue;
        }
        let mut bits = basis.state(idx);
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            n[j] += w;
            bits &= bits - 1;
        }
    }
    n
}

/// Bundled observables of a solved chain.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub s_of_q: Vec<f64>,
    pub q0: f64,
    pub s_max: f64,
    pub bond_order: f64,
    pub bond_correlator: f64,
    /// Twisted-boundary Berry phase, when requested.
    pub berry: Option<f64>,
    pub densities: Vec<f64>,
}

pub fn observable_set(
    state: &GroundStateResult,
    basis: &FixedNumberBasis,
    model: &ChainModel,
    berry: Option<f64>,
) -> ObservableSet {
    let sf = structure_factor(state, basis, model);
    let (bond_order, bond_correlator) = bond_observables(state, basis, model);
    let densities = edge_profile(state, basis);
    ObservableSet {
        s_of_q: sf.s_of_q,
        q0: sf.q0,
        s_max: sf.s_max,
        bond_order,
        bond_correlator,
        berry,
        densities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::{build_basis, build_hamiltonian, ground_state, Boundary, ChainModel};

    /// Product state with amplitude 1 on one configuration.
    fn product_state(basis: &FixedNumberBasis, config: u64) -> GroundStateResult {
        let mut amplitudes = vec![0.0; basis.dim()];
        amplitudes[basis.rank(config)] = 1.0;
        GroundStateResult {
            energy: 0.0,
            amplitudes,
            basis_dim: basis.dim(),
            residual: 0.0,
            gap: None,
            degenerate: false,
        }
    }

    #[test]
    fn neel_state_has_quarter_peak_at_pi() {
        for length in [8usize, 12] {
            let basis = build_basis(length, length / 2).unwrap();
            let model =
                ChainModel::new(length, length / 2, 1.0, vec![], Boundary::periodic()).unwrap();
            let neel: u64 = (0..length).step_by(2).map(|j| 1u64 << j).sum();
            let state = product_state(&basis, neel);
            let sf = structure_factor(&state, &basis, &model);
            assert!((sf.q0 - PI).abs() < 1e-12);
            assert!((sf.s_max - 0.25).abs() < 1e-12);
            assert_eq!(sf.s_of_q[0], 0.0);
        }
    }

    #[test]
    fn structure_factor_is_symmetric_and_nonnegative() {
        let model = ChainModel::new(10, 5, 1.0, vec![2.0, 0.8], Boundary::periodic()).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let gs = ground_state(&h).unwrap();
        let sf = structure_factor(&gs, &h.basis, &model);
        for m in 1..model.length {
            assert!(sf.s_of_q[m] >= -1e-12);
            let mirror = sf.s_of_q[model.length - m];
            assert!((sf.s_of_q[m] - mirror).abs() < 1e-12);
        }
    }

    #[test]
    fn free_periodic_ring_has_no_staggered_bond_order() {
        let model = ChainModel::new(12, 6, 1.0, vec![], Boundary::periodic()).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let gs = ground_state(&h).unwrap();
        let (b, _) = bond_observables(&gs, &h.basis, &model);
        assert!(b.abs() < 1e-8, "B = {b}");
    }

    #[test]
    fn empty_chain_observables_vanish() {
        let basis = build_basis(8, 0).unwrap();
        let model = ChainModel::new(8, 0, 1.0, vec![], Boundary::Open).unwrap();
        let state = product_state(&basis, 0);
        let (b, c) = bond_observables(&state, &basis, &model);
        assert_eq!(b, 0.0);
        assert_eq!(c, 0.0);
        assert!(edge_profile(&state, &basis).iter().all(|&n| n == 0.0));
    }

    #[test]
    fn neel_product_state_alternates_density() {
        let basis = build_basis(6, 3).unwrap();
        let state = product_state(&basis, 0b010101);
        let n = edge_profile(&state, &basis);
        assert_eq!(n, vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn uniform_density_on_translation_symmetric_ring() {
        let model = ChainModel::new(10, 5, 1.0, vec![1.3, 0.4], Boundary::periodic()).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let gs = ground_state(&h).unwrap();
        assert!(!gs.degenerate);
        let n = edge_profile(&gs, &h.basis);
        for &nj in &n {
            assert!((nj - 0.5).abs() < 1e-8, "density {nj}");
        }
    }
}
