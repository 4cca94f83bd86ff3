//! Parameter sweeps over the one-parameter state families and their CSV form.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{cereceda_concurrence, concurrence_mixed, concurrence_pure, negativity};
use crate::states::{embedded_qubit_werner, schmidt_state, werner, SchmidtCoeffs};

/// Values at or below this are treated as zero when locating boundaries and
/// when printing.
pub const ZERO_TOL: f64 = 1e-9;
const PRINT_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Qutrit Werner states.
    Werner,
    /// Pure states with Schmidt coefficients `(√(x/2), √(x/2), √(1-x))`.
    PureFig1,
    /// Werner states of the qubit pair embedded in the qutrit space.
    EmbeddedWerner,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Werner => "werner",
            Family::PureFig1 => "pure-fig1",
            Family::EmbeddedWerner => "embedded-werner",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub c3: f64,
    pub negativity: f64,
    pub robustness: f64,
    /// Only for pure sweeps.
    pub cereceda: Option<f64>,
}

/// `from, from + step, ...` up to and including `to` (within rounding).
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&from) {
        return Err(Error::ParameterOutOfRange {
            name: "from",
            value: from,
        });
    }
    if !(0.0..=1.0).contains(&to) || to <= from {
        return Err(Error::ParameterOutOfRange {
            name: "to",
            value: to,
        });
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::ParameterOutOfRange {
            name: "step",
            value: step,
        });
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| (from + k as f64 * step).min(to)).collect())
}

pub fn row(family: Family, x: f64) -> Result<SweepRow> {
    match family {
        Family::Werner | Family::EmbeddedWerner => {
            let rho = if family == Family::Werner {
                werner(x)?
            } else {
                embedded_qubit_werner(x)?
            };
            let n = negativity(&rho)?;
            Ok(SweepRow {
                x,
                c3: concurrence_mixed(&rho)?,
                negativity: n,
                robustness: 2.0 * n,
                cereceda: None,
            })
        }
        Family::PureFig1 => {
            let beta = SchmidtCoeffs::fig1_family(x)?;
            let psi = schmidt_state(&beta);
            let n = negativity(&psi.projector())?;
            Ok(SweepRow {
                x,
                c3: concurrence_pure(&psi)?,
                negativity: n,
                robustness: 2.0 * n,
                cereceda: Some(cereceda_concurrence(&beta)),
            })
        }
    }
}

/// Evaluates the grid points concurrently; rows come back in grid order.
pub fn sweep(family: Family, xs: &[f64]) -> Result<Vec<SweepRow>> {
    xs.par_iter().map(|&x| row(family, x)).collect()
}

/// Fixed six-significant-digit rendering (`2.00000`, `0.666667`,
/// `0.000000`). Magnitudes below 1e-12 print as zero.
pub fn format_sig6(v: f64) -> String {
    if v.abs() < PRINT_ZERO {
        return "0.000000".to_string();
    }
    // The exponent of the rounded value accounts for carries (0.9999996 -> 1.00000).
    let sci = format!("{v:.5e}");
    let exponent: i32 = sci[sci.find('e').map_or(0, |k| k + 1)..]
        .parse()
        .unwrap_or(0);
    if !(-4..6).contains(&exponent) {
        return sci;
    }
    let decimals = (5 - exponent) as usize;
    format!("{v:.decimals$}")
}

pub fn csv_header(family: Family) -> &'static str {
    match family {
        Family::PureFig1 => "x,c3,negativity,robustness,cereceda",
        _ => "x,c3,negativity,robustness",
    }
}

/// UTF-8 CSV with LF line endings.
pub fn to_csv(family: Family, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(csv_header(family));
    out.push('\n');
    for r in rows {
        let mut fields = vec![
            format_sig6(r.x),
            format_sig6(r.c3),
            format_sig6(r.negativity),
            format_sig6(r.robustness),
        ];
        if family == Family::PureFig1 {
            fields.push(format_sig6(r.cereceda.unwrap_or(f64::NAN)));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Bisects for the point in `[lo, hi]` where `f` leaves zero, assuming
/// `f(lo) <= ZERO_TOL < f(hi)` and a single crossing.
pub fn zero_boundary(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    if f(lo)? > ZERO_TOL || f(hi)? <= ZERO_TOL {
        return Err(Error::ParameterOutOfRange {
            name: "bracket",
            value: lo,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > ZERO_TOL {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
