//! Adaptive evaluation of the displaced power series.

use crate::error::{Error, Result};

use super::recurrence::RecurrenceTable;

/// Hard margin limit; arguments this close to the convergence radius are
/// refused rather than summed slowly and inaccurately.
const MARGIN_LIMIT: f64 = 0.95;
/// A term is negligible when below this fraction of the largest partial sum.
const TAIL_REL: f64 = 1e-16;
/// Consecutive negligible terms required to stop.
const TAIL_RUN: usize = 10;

/// Evaluate `exp(displacement) * sum_m rows[j][m] * x^m`.
///
/// The tail is declared converged after [`TAIL_RUN`] consecutive terms each
/// smaller than [`TAIL_REL`] times the largest partial sum seen; comparing
/// against the running maximum keeps the criterion meaningful when the sum
/// passes through zero.
pub fn series_eval(table: &RecurrenceTable, j: usize, x: f64, displacement: f64) -> Result<f64> {
    if j >= 4 {
        return Err(Error::InvalidParameter(format!("component index must be 0..4, got {j}")));
    }
    let margin = x.abs() / table.radius;
    if !margin.is_finite() || margin >= MARGIN_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "series argument {x} at margin {margin:.3} of convergence radius {}",
            table.radius
        )));
    }
    let row = &table.rows[j];
    let mut sum = 0.0;
    let mut sum_peak = 0.0f64;
    let mut power = 1.0;
    let mut quiet = 0;
    for &coeff in row {
        let term = coeff * power;
        sum += term;
        sum_peak = sum_peak.max(sum.abs());
        power *= x;
        if term.abs() <= TAIL_REL * sum_peak.max(f64::MIN_POSITIVE) {
            quiet += 1;
            if quiet >= TAIL_RUN {
                return Ok(displacement.exp() * sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NumericalFailure(format!(
        "series tail not converged after {} terms at margin {margin:.3}",
        row.len()
    )))
}
