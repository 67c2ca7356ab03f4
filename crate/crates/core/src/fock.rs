//! Truncated photon-basis solver for the full two-qubit Rabi model.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eigen_sym, eigenvalues_sym, EigenSystem, SymMatrix};
use crate::model::{
    rabi_matrix_element, sort_records, BasisState, Method, ModelParams, Parity, Sector,
    SpectrumRecord,
};

/// Photon cutoff policy for truncated diagonalization.
#[derive(Clone, Copy, Debug)]
pub struct TruncationSpec {
    /// Starting photon cutoff; the basis holds `4 * (n_max + 1)` states.
    pub n_max: u32,
    /// Double the cutoff until the tracked levels stop moving.
    pub auto_extend: bool,
    /// Maximum drift of the tracked levels between consecutive doublings.
    pub stability_tol: f64,
    /// Hard ceiling for the cutoff during auto-extension.
    pub n_max_cap: u32,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec { n_max: 60, auto_extend: true, stability_tol: 1e-9, n_max_cap: 480 }
    }
}

/// All product states with `n <= n_max`, flat order.
pub fn basis(n_max: u32) -> Vec<BasisState> {
    (0..4 * (n_max as usize + 1)).map(BasisState::from_flat_index).collect()
}

/// States of one parity sector with `n <= n_max`, ascending flat order.
/// Each sector holds exactly `2 * (n_max + 1)` states.
pub fn parity_states(parity: Parity, n_max: u32) -> Vec<BasisState> {
    basis(n_max).into_iter().filter(|s| s.parity() == parity).collect()
}

/// Full Hamiltonian over the flat basis at cutoff `n_max`.
pub fn hamiltonian(params: &ModelParams, n_max: u32) -> SymMatrix {
    let p = params.normalized();
    let states = basis(n_max);
    matrix_over(&p, &states)
}

/// Hamiltonian restricted to one parity sector, with its basis list.
pub fn parity_block(params: &ModelParams, parity: Parity, n_max: u32) -> (SymMatrix, Vec<BasisState>) {
    let p = params.normalized();
    let states = parity_states(parity, n_max);
    (matrix_over(&p, &states), states)
}

fn matrix_over(p: &ModelParams, states: &[BasisState]) -> SymMatrix {
    let mut m = SymMatrix::zeros(states.len());
    for (i, &s) in states.iter().enumerate() {
        m.set_sym(i, i, rabi_matrix_element(p, s, s));
        for (j, &t) in states.iter().enumerate().skip(i + 1) {
            let v = rabi_matrix_element(p, s, t);
            if v != 0.0 {
                m.set_sym(i, j, v);
            }
        }
    }
    m
}

/// Eigendecomposition of one parity block at a fixed cutoff.
pub fn eigen_block(params: &ModelParams, parity: Parity, n_max: u32) -> (EigenSystem, Vec<BasisState>) {
    let (m, states) = parity_block(params, parity, n_max);
    (eigen_sym(&m), states)
}

/// Matrix-free application of the truncated Hamiltonian.
///
/// Returns `H v` inside the cutoff plus the norm of the amplitude pushed to
/// photon number `n_max + 1` (the truncation leak).
pub fn apply_h(params: &ModelParams, v: &[f64], n_max: u32) -> Result<(Vec<f64>, f64)> {
    let p = params.normalized();
    let dim = 4 * (n_max as usize + 1);
    if v.len() != dim {
        return Err(Error::InvalidParameter(format!(
            "vector length {} does not match basis size {dim}",
            v.len()
        )));
    }
    let mut out = vec![0.0; dim];
    for (i, x) in v.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        let s = BasisState::from_flat_index(i);
        out[i] += rabi_matrix_element(&p, s, s) * x;
        for t in coupled_neighbors(s, n_max) {
            out[t.flat_index()] += rabi_matrix_element(&p, t, s) * x;
        }
    }
    // amplitude leaving the truncated space through the top photon level
    let mut leak = [0.0; 4];
    let amp = ((n_max + 1) as f64).sqrt();
    for (i, x) in v[dim - 4..].iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        let s = BasisState::from_flat_index(dim - 4 + i);
        let t1 = BasisState::new(n_max + 1, s.q1.flipped(), s.q2);
        let t2 = BasisState::new(n_max + 1, s.q1, s.q2.flipped());
        leak[t1.flat_index() % 4] += p.g1 * amp * x;
        leak[t2.flat_index() % 4] += p.g2 * amp * x;
    }
    let leak_norm = leak.iter().map(|l| l * l).sum::<f64>().sqrt();
    Ok((out, leak_norm))
}

fn coupled_neighbors(s: BasisState, n_max: u32) -> Vec<BasisState> {
    let mut out = Vec::with_capacity(4);
    if s.n > 0 {
        out.push(BasisState::new(s.n - 1, s.q1.flipped(), s.q2));
        out.push(BasisState::new(s.n - 1, s.q1, s.q2.flipped()));
    }
    if s.n < n_max {
        out.push(BasisState::new(s.n + 1, s.q1.flipped(), s.q2));
        out.push(BasisState::new(s.n + 1, s.q1, s.q2.flipped()));
    }
    out
}

/// Parity-block eigenvalues with the cutoff raised until the lowest
/// `tracked` levels are stable.
///
/// Returns the full ascending eigenvalue list of the final block together
/// with the cutoff that produced it.
pub fn converged_block_values(
    params: &ModelParams,
    parity: Parity,
    tracked: usize,
    spec: &TruncationSpec,
) -> Result<(Vec<f64>, u32)> {
    if spec.stability_tol <= 0.0 {
        return Err(Error::InvalidParameter("stability tolerance must be positive".into()));
    }
    let mut n = spec.n_max.max(1);
    let mut prev = eigenvalues_sym(&parity_block(params, parity, n).0);
    if !spec.auto_extend {
        return Ok((prev, n));
    }
    loop {
        let n2 = (2 * n).min(spec.n_max_cap);
        if n2 <= n {
            return Err(Error::NumericalFailure(format!(
                "levels still drifting at photon cutoff cap {}",
                spec.n_max_cap
            )));
        }
        let next = eigenvalues_sym(&parity_block(params, parity, n2).0);
        let k = tracked.max(1).min(prev.len());
        let drift = (0..k).map(|i| (prev[i] - next[i]).abs()).fold(0.0, f64::max);
        if drift < spec.stability_tol {
            return Ok((next, n2));
        }
        prev = next;
        n = n2;
    }
}

/// Lowest `levels` energies per parity sector over a grid of total couplings.
///
/// `base` fixes `delta1`, `delta2` and the ratio `g1 : g2`; each grid value
/// is the total coupling `g1 + g2`. Points run in parallel; output order is
/// canonical regardless of scheduling.
pub fn spectrum_sweep(
    base: &ModelParams,
    g_grid: &[f64],
    sector: Sector,
    levels: u32,
    spec: &TruncationSpec,
) -> Result<Vec<SpectrumRecord>> {
    validate_grid(g_grid)?;
    if levels == 0 {
        return Err(Error::InvalidParameter("levels must be at least 1".into()));
    }
    let points: Vec<Result<Vec<SpectrumRecord>>> = g_grid
        .par_iter()
        .map(|&g| {
            let p = base.with_total_coupling(g)?;
            let mut recs = Vec::new();
            for &parity in sector.parities() {
                let (values, _) = converged_block_values(&p, parity, levels as usize, spec)?;
                for (level, &energy) in values.iter().take(levels as usize).enumerate() {
                    recs.push(SpectrumRecord {
                        g,
                        parity: parity.into(),
                        level: level as u32,
                        energy,
                        method: Method::Fock,
                    });
                }
            }
            Ok(recs)
        })
        .collect();
    let mut records = Vec::new();
    for point in points {
        records.extend(point?);
    }
    sort_records(&mut records);
    Ok(records)
}

pub(crate) fn validate_grid(g_grid: &[f64]) -> Result<()> {
    if g_grid.is_empty() {
        return Err(Error::InvalidParameter("coupling grid is empty".into()));
    }
    for &g in g_grid {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid couplings must be finite and non-negative, got {g}"
            )));
        }
    }
    Ok(())
}
