//! Closed-subspace eigenstates: photon-bounded chains, determinant closure
//! conditions in the coupling, and the finite closed-form states.

use crate::error::{Error, Result};
use crate::fock::apply_h;
use crate::linalg::{singular_extremes, SymMatrix};
use crate::model::{rabi_matrix_element, BasisState, ExactState, ModelParams, Parity, Qubit};

const COND_TOL: f64 = 1e-12;
const G_SCAN_STEP: f64 = 0.01;
const G_BISECT_TOL: f64 = 1e-10;
const DET_ZERO_REL: f64 = 1e-12;
const NULL_SIGMA_REL: f64 = 1e-8;
const BOUNDARY_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-10;
const G_DEDUP: f64 = 1e-8;

/// Parity-pure ladder of photon-pair states from `n = 0` up to `n_top`.
///
/// Valid for any `n_top >= 1`. [`chain_basis`] additionally requires the
/// ladder to end on an `(eg, ge)` pair, which is the closure convention the
/// displayed finite matrices use.
pub(crate) fn chain_states(n_top: u32, parity: Parity) -> Vec<BasisState> {
    use Qubit::{Excited as E, Ground as G};
    let mut states = Vec::with_capacity(2 * (n_top as usize + 1));
    for m in 0..=n_top {
        let pair: [(Qubit, Qubit); 2] = match (parity, m % 2 == 0) {
            (Parity::Odd, true) => [(E, G), (G, E)],
            (Parity::Odd, false) => [(G, G), (E, E)],
            (Parity::Even, true) => [(E, E), (G, G)],
            (Parity::Even, false) => [(E, G), (G, E)],
        };
        for (q1, q2) in pair {
            states.push(BasisState::new(m, q1, q2));
        }
    }
    states
}

/// Candidate closed subspace bounded at photon number `n_top`.
#[derive(Clone, Debug)]
pub struct ChainBasis {
    pub n_top: u32,
    pub parity: Parity,
    pub states: Vec<BasisState>,
}

/// The photon-bounded chain whose top pair is `(|n_top,eg>, |n_top,ge>)`.
///
/// Odd parity needs even `n_top`, even parity odd `n_top`; other combinations
/// end on a `(gg, ee)` pair and are rejected here.
pub fn chain_basis(n_top: u32, parity: Parity) -> Result<ChainBasis> {
    if n_top < 1 {
        return Err(Error::InvalidParameter("chain needs n_top >= 1".into()));
    }
    let tail_matches = match parity {
        Parity::Odd => n_top % 2 == 0,
        Parity::Even => n_top % 2 == 1,
    };
    if !tail_matches {
        return Err(Error::ConditionNotMet(format!(
            "{} parity chain cannot end on an (eg, ge) pair at photon number {n_top}",
            parity.label()
        )));
    }
    Ok(ChainBasis { n_top, parity, states: chain_states(n_top, parity) })
}

fn chain_matrix(n_top: u32, parity: Parity, delta1: f64, delta2: f64, g: f64) -> (SymMatrix, Vec<BasisState>) {
    let p = ModelParams { omega: 1.0, g1: g / 2.0, g2: g / 2.0, delta1, delta2 };
    let states = chain_states(n_top, parity);
    let mut m = SymMatrix::zeros(states.len());
    for (i, &s) in states.iter().enumerate() {
        m.set_sym(i, i, rabi_matrix_element(&p, s, s));
        for (j, &t) in states.iter().enumerate().skip(i + 1) {
            let v = rabi_matrix_element(&p, s, t);
            if v != 0.0 {
                m.set_sym(i, j, v);
            }
        }
    }
    (m, states)
}

/// Determinant of the chain-restricted Hamiltonian shifted by the target
/// energy `E = n_top`, with equal couplings `g1 = g2 = g/2` imposed.
///
/// A photon-bounded eigenstate at energy `n_top` requires this to vanish.
pub fn closure_det(n_top: u32, parity: Parity, delta1: f64, delta2: f64, g: f64) -> Result<f64> {
    if n_top < 1 {
        return Err(Error::InvalidParameter("closure condition needs n_top >= 1".into()));
    }
    if !delta1.is_finite() || !delta2.is_finite() {
        return Err(Error::InvalidParameter("detunings must be finite".into()));
    }
    if !g.is_finite() || g <= 0.0 {
        return Err(Error::InvalidParameter(format!("coupling must be positive, got {g}")));
    }
    let (m, _) = chain_matrix(n_top, parity, delta1, delta2, g);
    Ok(m.shifted_det(n_top as f64))
}

/// Hadamard bound on the shifted chain determinant; used as the scale for
/// classifying a determinant value as zero.
fn det_scale(n_top: u32, parity: Parity, delta1: f64, delta2: f64, g: f64) -> f64 {
    let (m, _) = chain_matrix(n_top, parity, delta1, delta2, g);
    let dim = m.dim();
    let shift = n_top as f64;
    let mut bound = 1.0f64;
    for i in 0..dim {
        let mut row = 0.0;
        for j in 0..dim {
            let v = if i == j { m.get(i, i) - shift } else { m.get(i, j) };
            row += v * v;
        }
        bound *= row.sqrt().max(1.0);
    }
    bound
}

/// A coupling at which the chain closes into an exact eigenstate.
#[derive(Clone, Debug)]
pub struct QuasiExactSolution {
    pub n_top: u32,
    pub parity: Parity,
    /// Total coupling `g1 + g2` at the closure point.
    pub g: f64,
    /// Always `n_top` in units of the mode frequency.
    pub energy: f64,
    /// Unit-norm amplitudes over `states`.
    pub amplitudes: Vec<f64>,
    pub states: Vec<BasisState>,
    /// Combined in-space and leakage residual against the truncated model.
    pub residual: f64,
}

/// All couplings in `(0, g_max]` where the chain closure condition holds and
/// the null vector genuinely truncates (opposite amplitudes on the top pair).
///
/// Conditions independent of `g` (for example `|delta1 - delta2| = 1` at
/// `n_top = 1`, or the degenerate `delta1 = delta2` singlet) are reported as a
/// solution at every probed grid coupling.
pub fn solve_quasiexact_couplings(
    n_top: u32,
    parity: Parity,
    delta1: f64,
    delta2: f64,
    g_max: f64,
) -> Result<Vec<QuasiExactSolution>> {
    if !g_max.is_finite() || g_max <= 0.0 {
        return Err(Error::InvalidParameter(format!("g_max must be positive, got {g_max}")));
    }
    let steps = (g_max / G_SCAN_STEP).ceil() as usize;
    let mut grid = Vec::with_capacity(steps);
    for i in 1..=steps {
        grid.push((i as f64 * G_SCAN_STEP).min(g_max));
    }
    if let Some(last) = grid.last() {
        if *last < g_max {
            grid.push(g_max);
        }
    }

    let det_at = |g: f64| closure_det(n_top, parity, delta1, delta2, g);
    let mut candidates: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &g in &grid {
        let d = det_at(g)?;
        let zero = d.abs() <= DET_ZERO_REL * det_scale(n_top, parity, delta1, delta2, g);
        if zero {
            candidates.push(g);
            prev = None;
            continue;
        }
        if let Some((pg, pd)) = prev {
            if pd * d < 0.0 {
                let (mut lo, mut hi, mut dlo) = (pg, g, pd);
                while hi - lo > G_BISECT_TOL {
                    let mid = 0.5 * (lo + hi);
                    let dm = det_at(mid)?;
                    if dm == 0.0 {
                        lo = mid;
                        break;
                    }
                    if dlo * dm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        dlo = dm;
                    }
                }
                candidates.push(0.5 * (lo + hi));
            }
        }
        prev = Some((g, d));
    }

    let mut solutions = Vec::new();
    for g in candidates {
        if let Some(sol) = validate_candidate(n_top, parity, delta1, delta2, g)? {
            let dup = solutions
                .last()
                .map(|s: &QuasiExactSolution| (s.g - sol.g).abs() < G_DEDUP)
                .unwrap_or(false);
            if !dup {
                solutions.push(sol);
            }
        }
    }
    Ok(solutions)
}

fn validate_candidate(
    n_top: u32,
    parity: Parity,
    delta1: f64,
    delta2: f64,
    g: f64,
) -> Result<Option<QuasiExactSolution>> {
    let (m, states) = chain_matrix(n_top, parity, delta1, delta2, g);
    let dim = m.dim();
    let mut shifted = m.into_matrix();
    for i in 0..dim {
        shifted[(i, i)] -= n_top as f64;
    }
    let (smin, smax, mut v) = singular_extremes(&shifted)?;
    if smin > NULL_SIGMA_REL * smax.max(1.0) {
        return Ok(None);
    }
    // closure: the top pair must carry opposite amplitudes, otherwise the
    // state leaks to photon number n_top + 1
    if (v[dim - 2] + v[dim - 1]).abs() > BOUNDARY_TOL {
        return Ok(None);
    }
    let mut pivot = 0;
    for i in 1..dim {
        if v[i].abs() > v[pivot].abs() {
            pivot = i;
        }
    }
    if v[pivot] < 0.0 {
        v.neg_mut();
    }

    let p = ModelParams { omega: 1.0, g1: g / 2.0, g2: g / 2.0, delta1, delta2 };
    let n_max = n_top + 5;
    let mut full = vec![0.0; 4 * (n_max as usize + 1)];
    for (i, s) in states.iter().enumerate() {
        full[s.flat_index()] = v[i];
    }
    let report = verify_eigenstate(&p, &full, n_top as f64, n_max)?;
    let residual = (report.residual * report.residual + report.leakage * report.leakage).sqrt();
    if residual > RESIDUAL_TOL {
        return Ok(None);
    }
    Ok(Some(QuasiExactSolution {
        n_top,
        parity,
        g,
        energy: n_top as f64,
        amplitudes: v.iter().copied().collect(),
        states,
        residual,
    }))
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

fn check_g(g: f64) -> Result<()> {
    if !g.is_finite() || g <= 0.0 {
        return Err(Error::InvalidParameter(format!("coupling must be positive, got {g}")));
    }
    Ok(())
}

/// One-photon-bounded odd state at `E = 1`, existing for `delta1 - delta2 = 1`
/// with equal couplings `g1 = g2 = g/2`.
///
/// Unnormalized amplitudes: `2(delta1+delta2)/g` on `|0,eg>`, `+1` on
/// `|1,gg>`, `-1` on `|1,ee>`.
pub fn psi_g1(delta1: f64, delta2: f64, g: f64) -> Result<ExactState> {
    check_g(g)?;
    if (delta1 - delta2 - 1.0).abs() > COND_TOL {
        return Err(Error::ConditionNotMet(format!(
            "psi_g1 needs delta1 - delta2 = 1, got {}",
            delta1 - delta2
        )));
    }
    use Qubit::{Excited as E, Ground as G};
    Ok(build_exact(
        &[
            (BasisState::new(0, E, G), 2.0 * (delta1 + delta2) / g),
            (BasisState::new(1, G, G), 1.0),
            (BasisState::new(1, E, E), -1.0),
        ],
        1,
        1.0,
    ))
}

/// Mirror of [`psi_g1`] for `delta2 - delta1 = 1`, supported on `|0,ge>`.
pub fn psi_g2(delta1: f64, delta2: f64, g: f64) -> Result<ExactState> {
    check_g(g)?;
    if (delta2 - delta1 - 1.0).abs() > COND_TOL {
        return Err(Error::ConditionNotMet(format!(
            "psi_g2 needs delta2 - delta1 = 1, got {}",
            delta2 - delta1
        )));
    }
    use Qubit::{Excited as E, Ground as G};
    Ok(build_exact(
        &[
            (BasisState::new(0, G, E), 2.0 * (delta1 + delta2) / g),
            (BasisState::new(1, G, G), 1.0),
            (BasisState::new(1, E, E), -1.0),
        ],
        1,
        1.0,
    ))
}

/// One-photon-bounded even state at `E = 1`, existing for `delta1 + delta2 = 1`
/// with equal couplings.
///
/// Unnormalized amplitudes: `2(delta1-delta2)/g` on `|0,ee>`, `-1` on
/// `|1,eg>`, `+1` on `|1,ge>`.
pub fn psi_e(delta1: f64, delta2: f64, g: f64) -> Result<ExactState> {
    check_g(g)?;
    if (delta1 + delta2 - 1.0).abs() > COND_TOL {
        return Err(Error::ConditionNotMet(format!(
            "psi_e needs delta1 + delta2 = 1, got {}",
            delta1 + delta2
        )));
    }
    use Qubit::{Excited as E, Ground as G};
    Ok(build_exact(
        &[
            (BasisState::new(0, E, E), 2.0 * (delta1 - delta2) / g),
            (BasisState::new(1, E, G), -1.0),
            (BasisState::new(1, G, E), 1.0),
        ],
        1,
        1.0,
    ))
}

/// Qubit-singlet dark state `(|n,ge> - |n,eg>)/sqrt(2)` at `E = n`, exact for
/// equal detunings and equal couplings at any coupling strength.
pub fn dark_state(n: u32, delta: f64, g: f64) -> Result<ExactState> {
    if !delta.is_finite() || !g.is_finite() || g < 0.0 {
        return Err(Error::InvalidParameter("dark state needs finite delta and g >= 0".into()));
    }
    use Qubit::{Excited as E, Ground as G};
    Ok(build_exact(
        &[
            (BasisState::new(n, G, E), 1.0),
            (BasisState::new(n, E, G), -1.0),
        ],
        n,
        n as f64,
    ))
}

/// Residual report for a claimed eigenpair under the truncated Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct VerifyReport {
    /// `||(H - E) v|| / ||v||` inside the truncated space.
    pub residual: f64,
    /// Relative norm of the amplitude pushed beyond the photon cutoff.
    pub leakage: f64,
}

/// Check a vector against `(H - E) v = 0` at cutoff `n_max`. Vectors shorter
/// than the basis are zero-padded.
pub fn verify_eigenstate(
    params: &ModelParams,
    v: &[f64],
    energy: f64,
    n_max: u32,
) -> Result<VerifyReport> {
    let dim = 4 * (n_max as usize + 1);
    if v.len() > dim {
        return Err(Error::InvalidParameter(format!(
            "vector of length {} does not fit cutoff n_max = {n_max}",
            v.len()
        )));
    }
    let mut padded = v.to_vec();
    padded.resize(dim, 0.0);
    let norm = padded.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("cannot verify the zero vector".into()));
    }
    let (hv, leak) = apply_h(params, &padded, n_max)?;
    let mut res = 0.0;
    for (i, x) in padded.iter().enumerate() {
        let r = hv[i] - energy * x;
        res += r * r;
    }
    Ok(VerifyReport { residual: res.sqrt() / norm, leakage: leak / norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Qubit::{Excited as E, Ground as G};
    use approx::assert_abs_diff_eq;

    #[test]
    fn chain_basis_listings() {
        let c = chain_basis(2, Parity::Odd).unwrap();
        let want = [
            BasisState::new(0, E, G),
            BasisState::new(0, G, E),
            BasisState::new(1, G, G),
            BasisState::new(1, E, E),
            BasisState::new(2, E, G),
            BasisState::new(2, G, E),
        ];
        assert_eq!(c.states, want);
        assert!(c.states.iter().all(|s| s.parity() == Parity::Odd));

        let c = chain_basis(1, Parity::Even).unwrap();
        let want = [
            BasisState::new(0, E, E),
            BasisState::new(0, G, G),
            BasisState::new(1, E, G),
            BasisState::new(1, G, E),
        ];
        assert_eq!(c.states, want);

        assert!(chain_basis(1, Parity::Odd).is_err());
        assert!(chain_basis(2, Parity::Even).is_err());
        assert!(chain_basis(0, Parity::Odd).is_err());
    }

    #[test]
    fn chain_matrix_is_submatrix_of_full_hamiltonian() {
        let (d1, d2, g) = (0.9, 0.25, 1.3);
        let (m, states) = chain_matrix(3, Parity::Even, d1, d2, g);
        let p = ModelParams::new(1.0, g / 2.0, g / 2.0, d1, d2).unwrap();
        let h = crate::fock::hamiltonian(&p, 3);
        for (i, s) in states.iter().enumerate() {
            for (j, t) in states.iter().enumerate() {
                assert_eq!(m.get(i, j), h.get(s.flat_index(), t.flat_index()));
            }
        }
    }

    #[test]
    fn one_photon_closure_matches_factored_form() {
        for (d1, d2, g) in [(1.4, 0.4, 1.0), (0.9, 0.7, 0.3), (0.9, 0.7, 2.7), (1.6, 0.2, 1.8)] {
            let det = closure_det(1, Parity::Odd, d1, d2, g).unwrap();
            let want = (d1 + d2) * (d1 + d2) * ((d1 - d2) * (d1 - d2) - 1.0);
            assert_abs_diff_eq!(det, want, epsilon = 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn two_photon_closure_root_matches_formula() {
        let (d1, d2): (f64, f64) = (0.5, 0.3);
        let g_star = ((4.0 - (d1 - d2).powi(2)) * (1.0 - (d1 + d2).powi(2)) / 2.0).sqrt();
        let near = closure_det(2, Parity::Odd, d1, d2, g_star).unwrap();
        assert!(near.abs() < 1e-10, "det at root: {near:e}");
        assert!(closure_det(2, Parity::Odd, d1, d2, g_star - 0.1).unwrap().abs() > 1e-4);
        assert!(closure_det(2, Parity::Odd, d1, d2, g_star + 0.1).unwrap().abs() > 1e-4);
    }

    #[test]
    fn equal_detunings_vanish_identically() {
        for g in [0.2, 1.1, 2.9] {
            let det = closure_det(2, Parity::Odd, 0.6, 0.6, g).unwrap();
            assert!(det.abs() < 1e-12, "dark factor should kill det, got {det:e}");
        }
    }

    #[test]
    fn solve_finds_isolated_two_photon_point() {
        let sols = solve_quasiexact_couplings(2, Parity::Odd, 0.5, 0.3, 3.0).unwrap();
        assert_eq!(sols.len(), 1);
        let s = &sols[0];
        assert_abs_diff_eq!(s.g, 0.84427483681997, epsilon = 1e-8);
        assert_eq!(s.energy, 2.0);
        assert!(s.residual < 1e-10);
        let dim = s.amplitudes.len();
        assert!((s.amplitudes[dim - 1] + s.amplitudes[dim - 2]).abs() < 1e-8);
    }

    #[test]
    fn solve_handles_g_independent_condition() {
        let sols = solve_quasiexact_couplings(1, Parity::Odd, 1.4, 0.4, 0.3).unwrap();
        assert_eq!(sols.len(), 30);
        assert!(sols.iter().all(|s| s.residual < 1e-10));
    }

    #[test]
    fn solve_large_detuning_point_exists() {
        // (4 - (d1-d2)^2)(1 - (d1+d2)^2)/2 = 2.8728 > 0 here: both factors
        // flip sign, so the closure root is genuine
        let sols = solve_quasiexact_couplings(2, Parity::Odd, 2.5, 0.3, 3.0).unwrap();
        assert_eq!(sols.len(), 1);
        assert_abs_diff_eq!(sols[0].g, 2.8728f64.sqrt(), epsilon = 1e-8);
        assert!(sols[0].residual < 1e-10);
    }

    #[test]
    fn solve_rejects_bad_gmax() {
        assert!(solve_quasiexact_couplings(2, Parity::Odd, 0.5, 0.3, 0.0).is_err());
        assert!(solve_quasiexact_couplings(2, Parity::Odd, 0.5, 0.3, -1.0).is_err());
    }

    #[test]
    fn null_vector_at_equal_detunings_is_dark_state() {
        let sols = solve_quasiexact_couplings(2, Parity::Odd, 0.6, 0.6, 0.05).unwrap();
        assert!(!sols.is_empty());
        let s = &sols[0];
        let dark = dark_state(2, 0.6, s.g).unwrap();
        let mut overlap = 0.0;
        for (i, st) in s.states.iter().enumerate() {
            overlap += s.amplitudes[i] * dark.amplitudes[st.flat_index()];
        }
        assert!(overlap.abs() > 1.0 - 1e-10, "overlap {overlap}");
    }

    #[test]
    fn psi_g1_amplitudes_and_residual() {
        let st = psi_g1(1.4, 0.4, 1.0).unwrap();
        let a_eg = st.amplitudes[BasisState::new(0, E, G).flat_index()];
        let a_gg = st.amplitudes[BasisState::new(1, G, G).flat_index()];
        let a_ee = st.amplitudes[BasisState::new(1, E, E).flat_index()];
        assert_abs_diff_eq!(a_eg / a_gg, 3.6, epsilon = 1e-14);
        assert_abs_diff_eq!(a_ee / a_gg, -1.0, epsilon = 1e-14);
        let norm: f64 = st.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-14);
        // normalization constant sqrt(4(d1+d2)^2 + 2 g^2)/g
        assert_abs_diff_eq!(1.0 / a_gg, (4.0 * 1.8f64 * 1.8 + 2.0).sqrt(), epsilon = 1e-12);

        let p = ModelParams::new(1.0, 0.5, 0.5, 1.4, 0.4).unwrap();
        let r = verify_eigenstate(&p, &st.amplitudes, 1.0, 4).unwrap();
        assert!(r.residual < 1e-12 && r.leakage == 0.0);
    }

    #[test]
    fn psi_g1_simple_ratio_point() {
        let st = psi_g1(1.0, 0.0, 2.0).unwrap();
        let a_eg = st.amplitudes[BasisState::new(0, E, G).flat_index()];
        let a_gg = st.amplitudes[BasisState::new(1, G, G).flat_index()];
        assert_abs_diff_eq!(a_eg / a_gg, 1.0, epsilon = 1e-14);
        assert!(psi_g1(1.3, 0.4, 1.0).is_err());
        assert!(psi_g1(1.4, 0.4, 0.0).is_err());
    }

    #[test]
    fn psi_g2_mirrors_psi_g1() {
        let st = psi_g2(0.4, 1.4, 1.0).unwrap();
        let a_ge = st.amplitudes[BasisState::new(0, G, E).flat_index()];
        let a_gg = st.amplitudes[BasisState::new(1, G, G).flat_index()];
        assert_abs_diff_eq!(a_ge / a_gg, 3.6, epsilon = 1e-14);
        let p = ModelParams::new(1.0, 0.5, 0.5, 0.4, 1.4).unwrap();
        let r = verify_eigenstate(&p, &st.amplitudes, 1.0, 4).unwrap();
        assert!(r.residual < 1e-12);
        assert!(psi_g2(1.4, 0.4, 1.0).is_err());
    }

    #[test]
    fn psi_e_amplitudes_and_residual() {
        let st = psi_e(0.7, 0.3, 1.0).unwrap();
        let a_ee = st.amplitudes[BasisState::new(0, E, E).flat_index()];
        let a_eg = st.amplitudes[BasisState::new(1, E, G).flat_index()];
        let a_ge = st.amplitudes[BasisState::new(1, G, E).flat_index()];
        assert_abs_diff_eq!(a_ee / a_ge, 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(a_eg / a_ge, -1.0, epsilon = 1e-14);
        let p = ModelParams::new(1.0, 0.5, 0.5, 0.7, 0.3).unwrap();
        let r = verify_eigenstate(&p, &st.amplitudes, 1.0, 4).unwrap();
        assert!(r.residual < 1e-12);

        let sym = psi_e(0.5, 0.5, 1.0).unwrap();
        assert_eq!(sym.amplitudes[BasisState::new(0, E, E).flat_index()], 0.0);
        assert!(psi_e(0.8, 0.3, 1.0).is_err());
    }

    #[test]
    fn dark_state_is_exact_at_any_coupling() {
        let st = dark_state(2, 0.5, 1.7).unwrap();
        let p = ModelParams::new(1.0, 0.85, 0.85, 0.5, 0.5).unwrap();
        let r = verify_eigenstate(&p, &st.amplitudes, 2.0, 2).unwrap();
        assert!(r.residual < 1e-14);
        assert_eq!(r.leakage, 0.0);

        let zero = dark_state(0, 0.3, 0.9).unwrap();
        assert_abs_diff_eq!(
            zero.amplitudes[BasisState::new(0, G, E).flat_index()],
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_eq!(zero.energy, 0.0);
    }

    #[test]
    fn verify_rejects_junk_and_flags_nonsense() {
        let p = ModelParams::new(1.0, 0.4, 0.6, 0.7, 0.2).unwrap();
        let v = vec![0.5; 8];
        let r = verify_eigenstate(&p, &v, 0.0, 1).unwrap();
        assert!(r.residual > 0.1);
        assert!(verify_eigenstate(&p, &vec![0.0; 8], 0.0, 1).is_err());
        assert!(verify_eigenstate(&p, &vec![0.1; 12], 0.0, 1).is_err());
    }
}
