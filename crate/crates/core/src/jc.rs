//! Rotating-wave (Jaynes-Cummings) counterpart: conserved-excitation blocks,
//! characteristic polynomials, and the coupling-independent eigenstates.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::validate_grid;
use crate::linalg::{eigenvalues_sym, SymMatrix};
use crate::model::{
    jc_matrix_element, sort_records, BasisState, ExactState, Method, ModelParams, Parity,
    Qubit, SpectrumRecord,
};

const COND_TOL: f64 = 1e-12;
const NB_DEGENERACY_FLOOR: f64 = 1e-8;

/// One conserved-excitation subspace of the rotating-wave model.
#[derive(Clone, Debug)]
pub struct JcBlock {
    pub c: u32,
    pub states: Vec<BasisState>,
    pub matrix: SymMatrix,
}

/// Block of the conserved quantity `C = n + [q1 == e] + [q2 == e]`.
///
/// Bases: `{|C-2,ee>, |C-1,eg>, |C-1,ge>, |C,gg>}` for `C >= 2`,
/// `{|0,eg>, |0,ge>, |1,gg>}` for `C = 1`, `{|0,gg>}` for `C = 0`.
pub fn jc_block(params: &ModelParams, c: u32) -> JcBlock {
    use Qubit::{Excited as E, Ground as G};
    let p = params.normalized();
    let states: Vec<BasisState> = match c {
        0 => vec![BasisState::new(0, G, G)],
        1 => vec![
            BasisState::new(0, E, G),
            BasisState::new(0, G, E),
            BasisState::new(1, G, G),
        ],
        _ => vec![
            BasisState::new(c - 2, E, E),
            BasisState::new(c - 1, E, G),
            BasisState::new(c - 1, G, E),
            BasisState::new(c, G, G),
        ],
    };
    let mut matrix = SymMatrix::zeros(states.len());
    for (i, &s) in states.iter().enumerate() {
        matrix.set_sym(i, i, jc_matrix_element(&p, s, s));
        for (j, &t) in states.iter().enumerate().skip(i + 1) {
            let v = jc_matrix_element(&p, s, t);
            if v != 0.0 {
                matrix.set_sym(i, j, v);
            }
        }
    }
    JcBlock { c, states, matrix }
}

/// Characteristic determinant `det(block(C) - E I)` in closed form.
///
/// For `C >= 2` this is the printed quartic; for `C = 1` the printed cubic;
/// for `C = 0` the linear factor. Each agrees with the block determinant
/// exactly, not just up to a constant.
pub fn jc_char_eval(params: &ModelParams, c: u32, e: f64) -> f64 {
    let p = params.normalized();
    let (d1, d2, g1, g2) = (p.delta1, p.delta2, p.g1, p.g2);
    match c {
        0 => -d1 - d2 - e,
        1 => {
            e * ((d1 - d2) * (d1 - d2) + e * (1.0 - d1 - d2) - e * e + g1 * g1 + g2 * g2)
                + (d1 + d2 - 1.0) * (d1 - d2) * (d1 - d2)
                + (g1 * g1 - g2 * g2) * (d1 - d2)
        }
        _ => {
            let n = c as f64;
            let x = e - n + 1.0;
            (e - n + d1 + d2) * (e - n + 2.0 - d1 - d2) * (x * x - (d1 - d2) * (d1 - d2))
                + (g1 * g1 + g2 * g2) * (x * (e - n + d1 + d2) - 2.0 * n * x * x)
                + (g1 * g1 - g2 * g2)
                    * ((g1 * g1 - g2 * g2) * (n * n - n)
                        + (d1 * d1 - d2 * d2) * (2.0 * n - 1.0)
                        + (e + n) * (d2 - d1))
        }
    }
}

/// Eigenvalues of all blocks `C = 0..=c_max` at one parameter point, labeled
/// by the block parity `(-1)^C` with levels ascending per parity.
pub fn jc_spectrum(params: &ModelParams, c_max: u32) -> Vec<SpectrumRecord> {
    let g = params.normalized().total_coupling();
    let mut per_parity: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for c in 0..=c_max {
        let block = jc_block(params, c);
        let values = eigenvalues_sym(&block.matrix);
        per_parity[(c % 2) as usize].extend(values);
    }
    let mut records = Vec::new();
    for (idx, parity) in [(0usize, Parity::Even), (1usize, Parity::Odd)] {
        per_parity[idx].sort_by(f64::total_cmp);
        for (level, &energy) in per_parity[idx].iter().enumerate() {
            records.push(SpectrumRecord {
                g,
                parity: parity.into(),
                level: level as u32,
                energy,
                method: Method::Jc,
            });
        }
    }
    sort_records(&mut records);
    records
}

/// [`jc_spectrum`] over a grid of total couplings at fixed ratio, parallel
/// over grid points with deterministic output order.
pub fn jc_sweep(base: &ModelParams, g_grid: &[f64], c_max: u32) -> Result<Vec<SpectrumRecord>> {
    validate_grid(g_grid)?;
    let points: Vec<Result<Vec<SpectrumRecord>>> = g_grid
        .par_iter()
        .map(|&g| {
            let p = base.with_total_coupling(g)?;
            let mut recs = jc_spectrum(&p, c_max);
            for r in &mut recs {
                r.g = g;
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

fn require_special_conditions(p: &ModelParams) -> Result<(f64, f64, f64)> {
    let g = p.total_coupling();
    if g <= 0.0 {
        return Err(Error::InvalidParameter("total coupling must be positive".into()));
    }
    if (p.g1 - p.g2).abs() > COND_TOL * g.max(1.0) {
        return Err(Error::ConditionNotMet(format!(
            "equal couplings required, got g1={}, g2={}",
            p.g1, p.g2
        )));
    }
    if (p.delta1 + p.delta2 - 1.0).abs() > COND_TOL {
        return Err(Error::ConditionNotMet(format!(
            "delta1 + delta2 = 1 required, got {}",
            p.delta1 + p.delta2
        )));
    }
    Ok((p.delta1, p.delta2, g))
}

fn build_exact(entries: &[(BasisState, f64)], n_max: u32, energy: f64) -> ExactState {
    let mut amplitudes = vec![0.0; 4 * (n_max as usize + 1)];
    for (s, a) in entries {
        amplitudes[s.flat_index()] = *a;
    }
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in &mut amplitudes {
        *a /= norm;
    }
    ExactState { amplitudes, energy }
}

/// First member of the degenerate `E = C-1` pair under `g1 = g2`,
/// `delta1 + delta2 = 1`.
///
/// Unnormalized: `2(delta1-delta2)/(sqrt(C-1) g)` on `|C-2,ee>`, `-1` on
/// `|C-1,eg>`, `+1` on `|C-1,ge>`. For `C = 2` this is the one-photon even
/// state of the full model.
pub fn psi_c_na(params: &ModelParams, c: u32) -> Result<ExactState> {
    if c < 2 {
        return Err(Error::InvalidParameter("psi_c_na needs C >= 2".into()));
    }
    let p = params.normalized();
    let (d1, d2, g) = require_special_conditions(&p)?;
    use Qubit::{Excited as E, Ground as G};
    let lead = 2.0 * (d1 - d2) / (((c - 1) as f64).sqrt() * g);
    Ok(build_exact(
        &[
            (BasisState::new(c - 2, E, E), lead),
            (BasisState::new(c - 1, E, G), -1.0),
            (BasisState::new(c - 1, G, E), 1.0),
        ],
        c - 1,
        (c - 1) as f64,
    ))
}

/// Second member of the degenerate `E = C-1` pair; its `1/(delta1-delta2)`
/// amplitude diverges at equal detunings, so near-degenerate detunings are
/// rejected instead of returning huge components.
pub fn psi_c_nb(params: &ModelParams, c: u32) -> Result<ExactState> {
    if c < 2 {
        return Err(Error::InvalidParameter("psi_c_nb needs C >= 2".into()));
    }
    let p = params.normalized();
    let (d1, d2, g) = require_special_conditions(&p)?;
    if (d1 - d2).abs() < NB_DEGENERACY_FLOOR {
        return Err(Error::ConditionNotMet(
            "psi_c_nb is undefined at delta1 = delta2 (degenerate pair basis)".into(),
        ));
    }
    use Qubit::{Excited as E, Ground as G};
    let root_cm1 = ((c - 1) as f64).sqrt();
    let root_c = (c as f64).sqrt();
    Ok(build_exact(
        &[
            (BasisState::new(c - 2, E, E), root_cm1 * g / (d1 - d2)),
            (BasisState::new(c - 1, E, G), 1.0),
            (BasisState::new(c - 1, G, E), -1.0),
            (
                BasisState::new(c, G, G),
                ((c - 1) as f64 * g * g + 2.0 * (d1 - d2) * (d1 - d2)) / (root_c * g * (d2 - d1)),
            ),
        ],
        c,
        (c - 1) as f64,
    ))
}

/// Constant-energy `E = 0` state in the `C = 1` block under the same
/// conditions: `(-1, +1, 2(delta1-delta2)/g)` on `{|0,eg>, |0,ge>, |1,gg>}`.
pub fn psi_c0(params: &ModelParams) -> Result<ExactState> {
    let p = params.normalized();
    let (d1, d2, g) = require_special_conditions(&p)?;
    use Qubit::{Excited as E, Ground as G};
    Ok(build_exact(
        &[
            (BasisState::new(0, E, G), -1.0),
            (BasisState::new(0, G, E), 1.0),
            (BasisState::new(1, G, G), 2.0 * (d1 - d2) / g),
        ],
        1,
        0.0,
    ))
}

/// Residual of a flat-basis state against its conserved-excitation block:
/// `||(block - E) v_block|| / ||v||` plus any amplitude off the block.
pub fn block_residual(params: &ModelParams, c: u32, state: &ExactState) -> Result<f64> {
    let block = jc_block(params, c);
    let dim = block.states.len();
    let mut v = vec![0.0; dim];
    let mut off = 0.0;
    let mut membership = vec![false; state.amplitudes.len()];
    for (i, s) in block.states.iter().enumerate() {
        if let Some(a) = state.amplitudes.get(s.flat_index()) {
            v[i] = *a;
            membership[s.flat_index()] = true;
        }
    }
    for (i, a) in state.amplitudes.iter().enumerate() {
        if !membership[i] {
            off += a * a;
        }
    }
    let norm = state.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("cannot verify the zero vector".into()));
    }
    let mut res = 0.0;
    for i in 0..dim {
        let mut hv = 0.0;
        for j in 0..dim {
            hv += block.matrix.get(i, j) * v[j];
        }
        let r = hv - state.energy * v[i];
        res += r * r;
    }
    Ok(((res + off).sqrt()) / norm)
}
