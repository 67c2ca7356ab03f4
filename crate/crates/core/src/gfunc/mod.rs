//! Series-expansion spectral solver for unequal qubit couplings.
//!
//! The parity reflection splits the model into two single-mode branches. Each
//! branch eigenproblem is expanded in three displaced-oscillator bases (A, B,
//! C), the expansions are matched at two points, and the eigenvalues are the
//! energies where the 8x8 matching determinant vanishes.
//!
//! The method needs `g1 != g2`, both couplings positive, and `delta1 != 0`;
//! degenerate regimes are rejected and belong to the dense solver.

mod matching;
mod recurrence;
mod series;

pub use matching::{
    assemble_m, choose_betas, manual_betas, representation_mismatch, BetaChoice, GSample,
};
pub use recurrence::{Rep, RecurrenceTable};
pub use series::series_eval;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::model::{sort_records, Method, ModelParams, Parity, Sector, SpectrumRecord};

use matching::POLE_ZONE;
use recurrence::{table_a, table_b, table_c, unit_init2, unit_init3, BranchParams};

/// Hard cap on generated series orders.
pub const SERIES_ORDER_CAP: usize = 500;

/// Couplings closer than this (relative) leave no usable B or C expansion.
const COUPLING_TOL: f64 = 1e-12;
/// `delta1` below this breaks the dependent-coefficient relations.
const DELTA1_TOL: f64 = 1e-12;
/// Default spacing of determinant samples over an energy segment.
const SCAN_STEP: f64 = 0.01;
/// Bisection bracket width at which a sign change counts as located.
const BISECT_TOL: f64 = 1e-10;
/// `sigma_min / sigma_max` confirming a null direction at a candidate.
const SIGMA_CONFIRM: f64 = 1e-8;
/// Cross-representation mismatch above this marks a candidate spurious.
const MISMATCH_LIMIT: f64 = 1e-6;
/// Roots closer than this merge into one.
const ROOT_DEDUP: f64 = 1e-8;
/// A local |det| minimum with sigma ratio below this triggers subdivision.
const DIP_TRIGGER: f64 = 1e-3;
/// Levels of local subdivision around a near-tangency.
const DIP_DEPTH: u32 = 5;

/// Structural preconditions of the series method.
pub fn require_applicable(params: &ModelParams) -> Result<()> {
    let p = params.normalized();
    if p.g1 <= 0.0 || p.g2 <= 0.0 {
        return Err(Error::MethodNotApplicable(format!(
            "series method needs both couplings positive, got g1={}, g2={}",
            p.g1, p.g2
        )));
    }
    if (p.g1 - p.g2).abs() <= COUPLING_TOL * p.g1.max(p.g2) {
        return Err(Error::MethodNotApplicable(format!(
            "series method breaks down for equal couplings (g1={}, g2={}); use the dense solver",
            p.g1, p.g2
        )));
    }
    if p.delta1.abs() <= DELTA1_TOL {
        return Err(Error::MethodNotApplicable(
            "series method needs a nonzero delta1; use the dense solver".into(),
        ));
    }
    Ok(())
}

fn signed_branch(params: &ModelParams, parity: Parity) -> BranchParams {
    let p = params.normalized();
    BranchParams {
        g: p.g1 + p.g2,
        gp: p.g1 - p.g2,
        d1: parity.sign() * p.delta1,
        d2: p.delta2,
    }
}

pub(crate) fn branch_params(params: &ModelParams, parity: Parity) -> Result<BranchParams> {
    require_applicable(params)?;
    Ok(signed_branch(params, parity))
}

fn family_pole_distance(e: f64, shift: f64) -> f64 {
    let m = (e + shift).round().max(0.0);
    (e - (m - shift)).abs()
}

/// Distance from a trial energy to the nearest pole of either coefficient
/// recurrence (`E = m - g^2` or `E = m - g'^2`).
pub(crate) fn pole_distance(e: f64, p: &BranchParams) -> f64 {
    family_pole_distance(e, p.g * p.g).min(family_pole_distance(e, p.gp * p.gp))
}

fn poles_between(p: &BranchParams, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for shift in [p.g * p.g, p.gp * p.gp] {
        let m_lo = ((lo + shift).ceil() as i64).max(0);
        let m_hi = (hi + shift).floor() as i64;
        for m in m_lo..=m_hi {
            out.push(m as f64 - shift);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// One parity branch of the transformed Hamiltonian over the interleaved
/// basis `{|e,0>, |g,0>, |e,1>, |g,1>, ...}`.
///
/// Photon-diagonal `n`; qubit coupling `delta2 + s*delta1*(-1)^n` with
/// `s = +1` on the even branch and `-1` on the odd one; hopping `g sqrt(n+1)`
/// along the excited chain and `g' sqrt(n+1)` along the ground chain.
/// Well-defined for any parameters, including `g1 == g2`.
pub fn h_plus_minus_matrix(params: &ModelParams, n_max: u32, parity: Parity) -> SymMatrix {
    let p = signed_branch(params, parity);
    let n_max = n_max as usize;
    let mut h = SymMatrix::zeros(2 * (n_max + 1));
    for n in 0..=n_max {
        h.set_sym(2 * n, 2 * n, n as f64);
        h.set_sym(2 * n + 1, 2 * n + 1, n as f64);
        let t = if n % 2 == 0 { 1.0 } else { -1.0 };
        h.set_sym(2 * n, 2 * n + 1, p.d2 + p.d1 * t);
        if n < n_max {
            let c = ((n + 1) as f64).sqrt();
            h.set_sym(2 * n, 2 * n + 2, p.g * c);
            h.set_sym(2 * n + 1, 2 * n + 3, p.gp * c);
        }
    }
    h
}

fn require_off_pole(e: f64, shift: f64) -> Result<()> {
    if family_pole_distance(e, shift) < POLE_ZONE {
        return Err(Error::NumericalFailure(format!(
            "trial energy {e} is within {POLE_ZONE} of a series pole"
        )));
    }
    Ok(())
}

/// A-representation coefficient table on the even branch, with canonical
/// initial condition `init_id` in 0..3 picking which free coefficient is one.
pub fn recurrence_a(params: &ModelParams, e: f64, init_id: usize, m_max: usize) -> Result<RecurrenceTable> {
    let p = branch_params(params, Parity::Even)?;
    require_off_pole(e, p.g * p.g)?;
    let mut t = table_a(&p, e, unit_init3(init_id)?, m_max.min(SERIES_ORDER_CAP))?;
    t.init_id = init_id;
    Ok(t)
}

/// B-representation table, as [`recurrence_a`].
pub fn recurrence_b(params: &ModelParams, e: f64, init_id: usize, m_max: usize) -> Result<RecurrenceTable> {
    let p = branch_params(params, Parity::Even)?;
    require_off_pole(e, p.gp * p.gp)?;
    let mut t = table_b(&p, e, unit_init3(init_id)?, m_max.min(SERIES_ORDER_CAP))?;
    t.init_id = init_id;
    Ok(t)
}

/// C-representation table; `init_id` in 0..2. The C recurrence has no
/// energy poles.
pub fn recurrence_c(params: &ModelParams, e: f64, init_id: usize, m_max: usize) -> Result<RecurrenceTable> {
    let p = branch_params(params, Parity::Even)?;
    let mut t = table_c(&p, e, unit_init2(init_id)?, m_max.min(SERIES_ORDER_CAP))?;
    t.init_id = init_id;
    Ok(t)
}

/// A confirmed zero of the matching determinant.
#[derive(Clone, Copy, Debug)]
pub struct GFuncRoot {
    pub energy: f64,
    pub parity: Parity,
    /// |det M| at the located zero, after column scaling.
    pub det_residual: f64,
    /// sigma_min / sigma_max at the located zero.
    pub sigma_ratio: f64,
    /// Cross-representation mismatch from the spurious-root filter, absent
    /// when no seam probe was admissible.
    pub mismatch: Option<f64>,
}

struct Segment {
    lo: f64,
    hi: f64,
    lo_at_zone: bool,
    hi_at_zone: bool,
}

/// Cut `[e_min, e_max]` into closed segments avoiding every pole by
/// [`POLE_ZONE`], flagging edges that abut an exclusion zone.
fn split_by_poles(p: &BranchParams, e_min: f64, e_max: f64) -> Vec<Segment> {
    let poles = poles_between(p, e_min - POLE_ZONE, e_max + POLE_ZONE);
    let mut segs = Vec::new();
    let mut lo = e_min;
    let mut lo_at_zone = false;
    for &pp in &poles {
        let hi = (pp - POLE_ZONE).min(e_max);
        if hi > lo {
            segs.push(Segment { lo, hi, lo_at_zone, hi_at_zone: true });
        }
        lo = lo.max(pp + POLE_ZONE);
        lo_at_zone = true;
        if lo >= e_max {
            return segs;
        }
    }
    if e_max > lo {
        segs.push(Segment { lo, hi: e_max, lo_at_zone, hi_at_zone: false });
    }
    segs
}

fn bisect_root(
    params: &ModelParams,
    parity: Parity,
    betas: &BetaChoice,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
) -> Result<f64> {
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = assemble_m(mid, params, betas, parity)?.det;
        if fm == 0.0 {
            return Ok(mid);
        }
        if f_lo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Resolve a dip of |det| without a sign change: subdivide around the
/// smallest sigma ratio until either a sign change appears (bisect it) or
/// the ratio confirms a tangent root, giving up after [`DIP_DEPTH`] levels.
fn refine_dip(
    params: &ModelParams,
    parity: Parity,
    betas: &BetaChoice,
    lo: f64,
    mid: f64,
    hi: f64,
    depth: u32,
) -> Result<Option<f64>> {
    let xs = [lo, 0.5 * (lo + mid), mid, 0.5 * (mid + hi), hi];
    let mut samples = Vec::with_capacity(xs.len());
    for &x in &xs {
        if let Ok(s) = assemble_m(x, params, betas, parity) {
            samples.push((x, s));
        }
    }
    if samples.len() < 3 {
        return Ok(None);
    }
    for w in samples.windows(2) {
        if w[0].1.det * w[1].1.det < 0.0 {
            return bisect_root(params, parity, betas, w[0].0, w[1].0, w[0].1.det).map(Some);
        }
    }
    let mut k = 0;
    for i in 1..samples.len() {
        if samples[i].1.sigma_ratio() < samples[k].1.sigma_ratio() {
            k = i;
        }
    }
    if samples[k].1.sigma_ratio() < SIGMA_CONFIRM {
        return Ok(Some(samples[k].0));
    }
    if depth == 0 {
        return Ok(None);
    }
    let k = k.clamp(1, samples.len() - 2);
    refine_dip(
        params,
        parity,
        betas,
        samples[k - 1].0,
        samples[k].0,
        samples[k + 1].0,
        depth - 1,
    )
}

fn scan_segment(
    params: &ModelParams,
    parity: Parity,
    betas: &BetaChoice,
    seg: &Segment,
    out: &mut Vec<f64>,
) -> Result<()> {
    let mut pts = vec![seg.lo];
    let mut e = seg.lo + SCAN_STEP;
    while e < seg.hi {
        pts.push(e);
        e += SCAN_STEP;
    }
    pts.push(seg.hi);
    // geometric ladders resolve roots crowding a pole
    if seg.lo_at_zone {
        let mut d = 4.0 * POLE_ZONE;
        while seg.lo + d < seg.hi {
            pts.push(seg.lo + d);
            d *= 4.0;
        }
    }
    if seg.hi_at_zone {
        let mut d = 4.0 * POLE_ZONE;
        while seg.hi - d > seg.lo {
            pts.push(seg.hi - d);
            d *= 4.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 0.5 * POLE_ZONE);

    let evaluated: Vec<(f64, Option<GSample>)> = pts
        .par_iter()
        .map(|&x| (x, assemble_m(x, params, betas, parity).ok()))
        .collect();
    let valid: Vec<(f64, GSample)> = evaluated
        .into_iter()
        .filter_map(|(x, s)| s.map(|s| (x, s)))
        .collect();
    if valid.is_empty() {
        return Err(Error::NumericalFailure(format!(
            "determinant evaluation failed across the whole segment [{}, {}]",
            seg.lo, seg.hi
        )));
    }

    for w in valid.windows(2) {
        let (x0, s0) = (w[0].0, &w[0].1);
        let (x1, s1) = (w[1].0, &w[1].1);
        if s0.det == 0.0 {
            out.push(x0);
        } else if s0.det * s1.det < 0.0 {
            out.push(bisect_root(params, parity, betas, x0, x1, s0.det)?);
        }
    }
    if let Some((x, s)) = valid.last() {
        if s.det == 0.0 {
            out.push(*x);
        }
    }

    for i in 1..valid.len().saturating_sub(1) {
        let prev = &valid[i - 1].1;
        let here = &valid[i].1;
        let next = &valid[i + 1].1;
        let no_crossing = prev.det * here.det > 0.0 && here.det * next.det > 0.0;
        if no_crossing
            && here.det.abs() < prev.det.abs()
            && here.det.abs() < next.det.abs()
            && here.sigma_ratio() < DIP_TRIGGER
        {
            if let Some(r) = refine_dip(
                params,
                parity,
                betas,
                valid[i - 1].0,
                valid[i].0,
                valid[i + 1].0,
                DIP_DEPTH,
            )? {
                out.push(r);
            }
        }
    }

    // a root hiding inside an exclusion zone shows up as an already tiny
    // sigma ratio at the zone edge
    if seg.lo_at_zone {
        let (x, s) = &valid[0];
        if s.sigma_ratio() < SIGMA_CONFIRM {
            out.push(*x);
        }
    }
    if seg.hi_at_zone {
        let (x, s) = valid.last().unwrap();
        if s.sigma_ratio() < SIGMA_CONFIRM {
            out.push(*x);
        }
    }
    Ok(())
}

/// All matching-determinant zeros in `[e_min, e_max]` for one parity branch,
/// bisection-refined, null-direction confirmed, filtered for pole artifacts,
/// deduplicated, ascending. `betas` falls back to [`choose_betas`].
pub fn find_roots(
    params: &ModelParams,
    parity: Parity,
    e_min: f64,
    e_max: f64,
    betas: Option<&BetaChoice>,
) -> Result<Vec<GFuncRoot>> {
    if !e_min.is_finite() || !e_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "energy range must be finite, got [{e_min}, {e_max}]"
        )));
    }
    let p = branch_params(params, parity)?;
    let betas = match betas {
        Some(b) => *b,
        None => choose_betas(params)?,
    };
    if e_max <= e_min {
        return Ok(Vec::new());
    }

    let mut candidates = Vec::new();
    for seg in split_by_poles(&p, e_min, e_max) {
        scan_segment(params, parity, &betas, &seg, &mut candidates)?;
    }
    candidates.sort_by(f64::total_cmp);

    let mut roots: Vec<GFuncRoot> = Vec::new();
    for e in candidates {
        if let Some(last) = roots.last() {
            if (e - last.energy).abs() < ROOT_DEDUP {
                continue;
            }
        }
        let sample = assemble_m(e, params, &betas, parity)?;
        if sample.sigma_ratio() >= SIGMA_CONFIRM {
            continue;
        }
        let mismatch = match representation_mismatch(e, params, &betas, parity) {
            Ok(v) => Some(v),
            Err(Error::MethodNotApplicable(_)) => None,
            Err(other) => return Err(other),
        };
        if let Some(v) = mismatch {
            if v >= MISMATCH_LIMIT {
                continue;
            }
        }
        roots.push(GFuncRoot {
            energy: e,
            parity,
            det_residual: sample.det.abs(),
            sigma_ratio: sample.sigma_ratio(),
            mismatch,
        });
    }
    Ok(roots)
}

/// Root sweep over a coupling grid, holding the `g1:g2` ratio of `base`.
pub fn gfunc_sweep(
    base: &ModelParams,
    g_grid: &[f64],
    sector: Sector,
    e_min: f64,
    e_max: f64,
) -> Result<Vec<SpectrumRecord>> {
    crate::fock::validate_grid(g_grid)?;
    let per_point: Result<Vec<Vec<SpectrumRecord>>> = g_grid
        .par_iter()
        .map(|&g| {
            let params = base.with_total_coupling(g)?;
            let mut recs = Vec::new();
            for &parity in sector.parities() {
                for (level, root) in find_roots(&params, parity, e_min, e_max, None)?.iter().enumerate() {
                    recs.push(SpectrumRecord {
                        g,
                        parity: parity.into(),
                        level: level as u32,
                        energy: root.energy,
                        method: Method::GFunc,
                    });
                }
            }
            Ok(recs)
        })
        .collect();
    let mut records: Vec<SpectrumRecord> = per_point?.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}
