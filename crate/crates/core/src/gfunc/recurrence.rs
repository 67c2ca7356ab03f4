//! Coefficient recurrences for the three displaced-basis series expansions.
//!
//! Rep A expands in the basis displaced by `g = g1 + g2`, rep B by
//! `g' = g1 - g2`, rep C in the bare number basis. Each carries four
//! coefficient sequences, one per component of the transformed wavefunction.

use crate::error::{Error, Result};

/// Divisor guard: trial energies this close to an algebraic pole make the
/// dependent coefficient meaningless.
const POLE_GUARD: f64 = 1e-12;
/// Coefficients grow like (1/radius)^m; stop a table before f64 overflow.
const OVERFLOW_GUARD: f64 = 1e200;

/// Which displaced expansion a table belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    A,
    B,
    C,
}

/// Effective parameters of one parity branch (`delta1` already carries the
/// branch sign).
#[derive(Clone, Copy, Debug)]
pub(crate) struct BranchParams {
    pub g: f64,
    pub gp: f64,
    pub d1: f64,
    pub d2: f64,
}

impl BranchParams {
    pub fn radius(&self, rep: Rep) -> f64 {
        let ra = (self.g - self.gp).abs();
        match rep {
            Rep::A => ra,
            Rep::B => ra.min(2.0 * self.gp.abs()),
            Rep::C => self.gp.abs(),
        }
    }
}

/// Generated coefficient sequences for one basis solution.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub rep: Rep,
    pub e: f64,
    /// Which free initial coefficient was set to one.
    pub init_id: usize,
    /// Four component sequences, index `j` is the component subscript minus one.
    pub rows: [Vec<f64>; 4],
    /// Number of orders actually generated (sequence length).
    pub m_used: usize,
    /// False when the overflow guard truncated generation early.
    pub complete: bool,
    /// Convergence radius of the associated power series.
    pub radius: f64,
}

impl RecurrenceTable {
    fn new(rep: Rep, e: f64, init_id: usize, rows: [Vec<f64>; 4], requested: usize, radius: f64) -> Self {
        let m_used = rows[0].len();
        RecurrenceTable { rep, e, init_id, rows, m_used, complete: m_used == requested + 1, radius }
    }
}

fn overflowed(vals: &[f64]) -> bool {
    vals.iter().any(|v| !v.is_finite() || v.abs() > OVERFLOW_GUARD)
}

fn a_pole_check(e: f64, g: f64, m: usize) -> Result<f64> {
    let div = e - m as f64 + g * g;
    if div.abs() < POLE_GUARD {
        return Err(Error::NumericalFailure(format!(
            "trial energy {e} sits on the series pole at {}",
            m as f64 - g * g
        )));
    }
    Ok(div)
}

pub(crate) fn table_a(p: &BranchParams, e: f64, init: [f64; 3], m_max: usize) -> Result<RecurrenceTable> {
    let (g, gp, d1, d2) = (p.g, p.gp, p.d1, p.d2);
    let div0 = a_pole_check(e, g, 0)?;
    let mut a1 = vec![init[0]];
    let mut a2 = vec![init[1]];
    let mut a3 = vec![init[2]];
    let mut a4 = vec![(div0 * init[0] - d2 * init[1]) / d1];
    for m in 0..m_max {
        let prev = |row: &Vec<f64>| if m >= 1 { row[m - 1] } else { 0.0 };
        let a2n = ((e - m as f64 + 2.0 * g * gp - g * g) * a2[m] - (gp - g) * prev(&a2)
            - d1 * a3[m]
            - d2 * a1[m])
            / ((gp - g) * (m as f64 + 1.0));
        let a3n = ((m as f64 - e + 3.0 * g * g) * a3[m] - 2.0 * g * prev(&a3)
            + d1 * a2[m]
            + d2 * a4[m])
            / (2.0 * g * (m as f64 + 1.0));
        let a4n = ((m as f64 - e + 2.0 * g * gp + g * g) * a4[m] - (g + gp) * prev(&a4)
            + d1 * a1[m]
            + d2 * a3[m])
            / ((g + gp) * (m as f64 + 1.0));
        let a1n = (d1 * a4n + d2 * a2n) / a_pole_check(e, g, m + 1)?;
        if overflowed(&[a1n, a2n, a3n, a4n]) {
            break;
        }
        a1.push(a1n);
        a2.push(a2n);
        a3.push(a3n);
        a4.push(a4n);
    }
    Ok(RecurrenceTable::new(Rep::A, e, 0, [a1, a2, a3, a4], m_max, p.radius(Rep::A)))
}

fn b_pole_check(e: f64, gp: f64, m: usize) -> Result<f64> {
    let div = e - m as f64 + gp * gp;
    if div.abs() < POLE_GUARD {
        return Err(Error::NumericalFailure(format!(
            "trial energy {e} sits on the series pole at {}",
            m as f64 - gp * gp
        )));
    }
    Ok(div)
}

pub(crate) fn table_b(p: &BranchParams, e: f64, init: [f64; 3], m_max: usize) -> Result<RecurrenceTable> {
    let (g, gp, d1, d2) = (p.g, p.gp, p.d1, p.d2);
    let div0 = b_pole_check(e, gp, 0)?;
    let mut b1 = vec![init[0]];
    let mut b2 = vec![init[1]];
    let mut b3 = vec![(div0 * init[1] - d2 * init[0]) / d1];
    let mut b4 = vec![init[2]];
    for m in 0..m_max {
        let prev = |row: &Vec<f64>| if m >= 1 { row[m - 1] } else { 0.0 };
        let b1n = ((e - m as f64 + 2.0 * g * gp - gp * gp) * b1[m] + (gp - g) * prev(&b1)
            - d1 * b4[m]
            - d2 * b2[m])
            / ((g - gp) * (m as f64 + 1.0));
        let b3n = ((m as f64 - e + 2.0 * g * gp + gp * gp) * b3[m] - (g + gp) * prev(&b3)
            + d1 * b2[m]
            + d2 * b4[m])
            / ((g + gp) * (m as f64 + 1.0));
        let b4n = ((m as f64 - e + 3.0 * gp * gp) * b4[m] - 2.0 * gp * prev(&b4)
            + d1 * b1[m]
            + d2 * b3[m])
            / (2.0 * gp * (m as f64 + 1.0));
        let b2n = (d1 * b3n + d2 * b1n) / b_pole_check(e, gp, m + 1)?;
        if overflowed(&[b1n, b2n, b3n, b4n]) {
            break;
        }
        b1.push(b1n);
        b2.push(b2n);
        b3.push(b3n);
        b4.push(b4n);
    }
    Ok(RecurrenceTable::new(Rep::B, e, 0, [b1, b2, b3, b4], m_max, p.radius(Rep::B)))
}

pub(crate) fn table_c(p: &BranchParams, e: f64, init: [f64; 2], m_max: usize) -> Result<RecurrenceTable> {
    let (g, gp, d1, d2) = (p.g, p.gp, p.d1, p.d2);
    let mut c1 = vec![init[0]];
    let mut c2 = vec![init[1]];
    for m in 0..m_max {
        let prev = |row: &Vec<f64>| if m >= 1 { row[m - 1] } else { 0.0 };
        let dd = d2 + d1 * if m % 2 == 0 { 1.0 } else { -1.0 };
        let c1n = ((e - m as f64) * c1[m] - g * prev(&c1) - dd * c2[m]) / (g * (m as f64 + 1.0));
        let c2n = ((e - m as f64) * c2[m] - gp * prev(&c2) - dd * c1[m]) / (gp * (m as f64 + 1.0));
        if overflowed(&[c1n, c2n]) {
            break;
        }
        c1.push(c1n);
        c2.push(c2n);
    }
    let c3: Vec<f64> = c1.iter().enumerate().map(|(m, v)| if m % 2 == 0 { *v } else { -*v }).collect();
    let c4: Vec<f64> = c2.iter().enumerate().map(|(m, v)| if m % 2 == 0 { *v } else { -*v }).collect();
    Ok(RecurrenceTable::new(Rep::C, e, 0, [c1, c2, c3, c4], m_max, p.radius(Rep::C)))
}

pub(crate) fn unit_init3(init_id: usize) -> Result<[f64; 3]> {
    match init_id {
        0 => Ok([1.0, 0.0, 0.0]),
        1 => Ok([0.0, 1.0, 0.0]),
        2 => Ok([0.0, 0.0, 1.0]),
        _ => Err(Error::InvalidParameter(format!("init_id must be 0..3, got {init_id}"))),
    }
}

pub(crate) fn unit_init2(init_id: usize) -> Result<[f64; 2]> {
    match init_id {
        0 => Ok([1.0, 0.0]),
        1 => Ok([0.0, 1.0]),
        _ => Err(Error::InvalidParameter(format!("init_id must be 0..2, got {init_id}"))),
    }
}
