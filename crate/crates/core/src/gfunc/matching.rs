//! Matching of the three series representations and the 8x8 determinant
//! matrix whose zeros in the trial energy are the eigenvalues.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::singular_extremes;
use crate::model::{ModelParams, Parity};

use super::recurrence::{table_a, table_b, table_c, BranchParams, Rep, RecurrenceTable};
use super::series::series_eval;
use super::{branch_params, pole_distance, SERIES_ORDER_CAP};

/// Matching points must stay below this fraction of every involved radius.
const BETA_MARGIN_LIMIT: f64 = 0.95;
/// Seam probes additionally keep this safety margin.
const PROBE_MARGIN_LIMIT: f64 = 0.9;
/// Pole proximity flag threshold on trial energies.
pub(crate) const POLE_ZONE: f64 = 1e-6;

/// Matching points for the two series seams with their margin diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct BetaChoice {
    /// Matching point between the A and B expansions.
    pub beta1: f64,
    /// Matching point between the B and C expansions.
    pub beta2: f64,
    /// `|argument| / radius` for (A at beta1, B at beta1, B at beta2, C at beta2).
    pub margins: [f64; 4],
}

fn margins_for(p: &BranchParams, beta1: f64, beta2: f64) -> [f64; 4] {
    [
        (beta1 + p.g).abs() / p.radius(Rep::A),
        (beta1 + p.gp).abs() / p.radius(Rep::B),
        (beta2 + p.gp).abs() / p.radius(Rep::B),
        beta2.abs() / p.radius(Rep::C),
    ]
}

/// Point between two disk centers with equal relative margins, optionally
/// weighting the first disk.
fn balanced_point(c1: f64, r1: f64, c2: f64, r2: f64, weight1: f64) -> f64 {
    let w1 = weight1 * r1;
    c1 + w1 / (w1 + r2) * (c2 - c1)
}

/// Matching points: the halfway defaults, replaced by margin-balanced points
/// when any default margin leaves the safe zone.
pub fn choose_betas(params: &ModelParams) -> Result<BetaChoice> {
    let p = branch_params(params, Parity::Even)?;
    let beta1 = -(p.g + p.gp) / 2.0;
    let beta2 = -p.gp / 2.0;
    let margins = margins_for(&p, beta1, beta2);
    if margins.iter().all(|m| *m < BETA_MARGIN_LIMIT) {
        return Ok(BetaChoice { beta1, beta2, margins });
    }
    let beta1 = balanced_point(-p.g, p.radius(Rep::A), -p.gp, p.radius(Rep::B), 1.0);
    let beta2 = balanced_point(-p.gp, p.radius(Rep::B), 0.0, p.radius(Rep::C), 1.0);
    let margins = margins_for(&p, beta1, beta2);
    if margins.iter().all(|m| *m < BETA_MARGIN_LIMIT) {
        return Ok(BetaChoice { beta1, beta2, margins });
    }
    Err(Error::MethodNotApplicable(format!(
        "no matching points inside all convergence disks for g1={}, g2={}",
        params.g1, params.g2
    )))
}

/// User-specified matching points, validated against the convergence disks.
pub fn manual_betas(params: &ModelParams, beta1: f64, beta2: f64) -> Result<BetaChoice> {
    if !beta1.is_finite() || !beta2.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "matching points must be finite, got ({beta1}, {beta2})"
        )));
    }
    let p = branch_params(params, Parity::Even)?;
    let margins = margins_for(&p, beta1, beta2);
    if margins.iter().any(|m| *m >= BETA_MARGIN_LIMIT) {
        return Err(Error::MethodNotApplicable(format!(
            "matching points ({beta1}, {beta2}) leave a series convergence disk"
        )));
    }
    Ok(BetaChoice { beta1, beta2, margins })
}

/// Probe points strictly inside the A/B and B/C disk overlaps, distinct from
/// the matching points. `None` if a seam's overlap is too thin to probe.
pub(crate) fn seam_probes(p: &BranchParams) -> (Option<f64>, Option<f64>) {
    let (ra, rb, rc) = (p.radius(Rep::A), p.radius(Rep::B), p.radius(Rep::C));
    let ab = [2.0, 0.5]
        .iter()
        .map(|&w| balanced_point(-p.g, ra, -p.gp, rb, w))
        .find(|&x| {
            (x + p.g).abs() / ra <= PROBE_MARGIN_LIMIT && (x + p.gp).abs() / rb <= PROBE_MARGIN_LIMIT
        });
    let bc = [2.0, 0.5]
        .iter()
        .map(|&w| balanced_point(-p.gp, rb, 0.0, rc, w))
        .find(|&x| {
            (x + p.gp).abs() / rb <= PROBE_MARGIN_LIMIT && x.abs() / rc <= PROBE_MARGIN_LIMIT
        });
    (ab, bc)
}

/// One evaluation of the matching determinant at a trial energy.
#[derive(Clone, Debug)]
pub struct GSample {
    pub e: f64,
    pub parity: Parity,
    /// Column-scaled 8x8 matching matrix.
    pub matrix: DMatrix<f64>,
    /// Scale divided out of each column (unit maximum entry afterwards).
    pub col_scales: [f64; 8],
    pub det: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Trial energy within [`POLE_ZONE`] of an algebraic series pole.
    pub pole_flag: bool,
}

impl GSample {
    /// Smallest-to-largest singular value ratio; a root confirmation signal.
    pub fn sigma_ratio(&self) -> f64 {
        if self.sigma_max == 0.0 {
            0.0
        } else {
            self.sigma_min / self.sigma_max
        }
    }

    /// Null direction expressed as the raw initial-condition vector
    /// `(b10, b20, b40, a10, a20, a30, c10, c20)`.
    pub fn null_initials(&self) -> Result<[f64; 8]> {
        let (_, _, v) = singular_extremes(&self.matrix)?;
        let mut out = [0.0; 8];
        for k in 0..8 {
            out[k] = v[k] / self.col_scales[k];
        }
        Ok(out)
    }
}

pub(crate) struct BasisTables {
    pub a: [RecurrenceTable; 3],
    pub b: [RecurrenceTable; 3],
    pub c: [RecurrenceTable; 2],
}

pub(crate) fn basis_tables(p: &BranchParams, e: f64) -> Result<BasisTables> {
    Ok(BasisTables {
        a: [
            table_a(p, e, [1.0, 0.0, 0.0], SERIES_ORDER_CAP)?,
            table_a(p, e, [0.0, 1.0, 0.0], SERIES_ORDER_CAP)?,
            table_a(p, e, [0.0, 0.0, 1.0], SERIES_ORDER_CAP)?,
        ],
        b: [
            table_b(p, e, [1.0, 0.0, 0.0], SERIES_ORDER_CAP)?,
            table_b(p, e, [0.0, 1.0, 0.0], SERIES_ORDER_CAP)?,
            table_b(p, e, [0.0, 0.0, 1.0], SERIES_ORDER_CAP)?,
        ],
        c: [
            table_c(p, e, [1.0, 0.0], SERIES_ORDER_CAP)?,
            table_c(p, e, [0.0, 1.0], SERIES_ORDER_CAP)?,
        ],
    })
}

/// Raw matching matrix: rows 0..4 equate A and B component values at beta1,
/// rows 4..8 equate B and C values at beta2; columns follow the unknown
/// order `(b10, b20, b40, a10, a20, a30, c10, c20)`.
fn raw_matrix(p: &BranchParams, tables: &BasisTables, betas: &BetaChoice) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(8, 8);
    for (k, t) in tables.a.iter().enumerate() {
        for j in 0..4 {
            m[(j, 3 + k)] = series_eval(t, j, betas.beta1 + p.g, -p.g * betas.beta1)?;
        }
    }
    for (k, t) in tables.b.iter().enumerate() {
        for j in 0..4 {
            m[(j, k)] = -series_eval(t, j, betas.beta1 + p.gp, -p.gp * betas.beta1)?;
            m[(4 + j, k)] = series_eval(t, j, betas.beta2 + p.gp, -p.gp * betas.beta2)?;
        }
    }
    for (k, t) in tables.c.iter().enumerate() {
        for j in 0..4 {
            m[(4 + j, 6 + k)] = -series_eval(t, j, betas.beta2, 0.0)?;
        }
    }
    Ok(m)
}

/// Assemble, column-scale, and factor the matching matrix at one energy.
pub fn assemble_m(e: f64, params: &ModelParams, betas: &BetaChoice, parity: Parity) -> Result<GSample> {
    let p = branch_params(params, parity)?;
    let tables = basis_tables(&p, e)?;
    let mut m = raw_matrix(&p, &tables, betas)?;
    let mut col_scales = [1.0; 8];
    for c in 0..8 {
        let peak = m.column(c).iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if peak > 0.0 {
            col_scales[c] = peak;
            for r in 0..8 {
                m[(r, c)] /= peak;
            }
        }
    }
    let det = m.clone().lu().determinant();
    let (sigma_min, sigma_max, _) = singular_extremes(&m)?;
    Ok(GSample {
        e,
        parity,
        matrix: m,
        col_scales,
        det,
        sigma_min,
        sigma_max,
        pole_flag: pole_distance(e, &p) < POLE_ZONE,
    })
}

/// Largest relative disagreement between the three representations of the
/// null-vector wavefunction, evaluated at the seam probes.
///
/// At a genuine eigenvalue all representations describe one state and the
/// mismatch sits at rounding level; at a spurious determinant zero (pole
/// artifact) they disagree at order one.
pub fn representation_mismatch(
    e: f64,
    params: &ModelParams,
    betas: &BetaChoice,
    parity: Parity,
) -> Result<f64> {
    let p = branch_params(params, parity)?;
    let (probe_ab, probe_bc) = seam_probes(&p);
    if probe_ab.is_none() && probe_bc.is_none() {
        return Err(Error::MethodNotApplicable(
            "disk overlaps too thin to probe representation consistency".into(),
        ));
    }
    let sample = assemble_m(e, params, betas, parity)?;
    let initials = sample.null_initials()?;
    let tables = basis_tables(&p, e)?;

    let combine = |ts: &[RecurrenceTable], weights: &[f64], x: f64, disp: f64| -> Result<[f64; 4]> {
        let mut out = [0.0; 4];
        for (t, w) in ts.iter().zip(weights) {
            for j in 0..4 {
                out[j] += w * series_eval(t, j, x, disp)?;
            }
        }
        Ok(out)
    };

    let bb = &initials[0..3];
    let aa = &initials[3..6];
    let cc = &initials[6..8];
    let mut mismatch = 0.0f64;
    let mut scale = 0.0f64;
    if let Some(x) = probe_ab {
        let va = combine(&tables.a, aa, x + p.g, -p.g * x)?;
        let vb = combine(&tables.b, bb, x + p.gp, -p.gp * x)?;
        for j in 0..4 {
            mismatch = mismatch.max((va[j] - vb[j]).abs());
            scale = scale.max(va[j].abs()).max(vb[j].abs());
        }
    }
    if let Some(x) = probe_bc {
        let vb = combine(&tables.b, bb, x + p.gp, -p.gp * x)?;
        let vc = combine(&tables.c, cc, x, 0.0)?;
        for j in 0..4 {
            mismatch = mismatch.max((vb[j] - vc[j]).abs());
            scale = scale.max(vb[j].abs()).max(vc[j].abs());
        }
    }
    Ok(mismatch / scale.max(f64::MIN_POSITIVE))
}
