//! Exact double-series representation of Q(x, y; rho):
//!
//! ```text
//! Q(x,y;rho) = Q(x)/2 - (1/pi) sum_{l>=0} sum_{k=0}^{2l+1} T(l, k)
//!
//! T(l, k) = (-1)^(3l+1-k) (2l)! y^k rho^(2l+1-k) Γ(1 + l - k/2, x²/2)
//!           / ( l! k! (1-rho²)^(l+1/2) (2l+1-k)! 2^(1+k/2) )
//! ```
//!
//! Each term is assembled in log space with its sign carried separately.
//! The outer sum is truncated once `consecutive_small` successive groups
//! have absolute mass (1/pi) sum_k |T(l, k)| below `rel_tol` times the
//! running estimate.
//!
//! The series only converges for |rho| below roughly 1/sqrt(2); beyond that
//! the groups grow and the result comes back with `converged == false`.

use std::f64::consts::{FRAC_1_PI, LN_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::EvalPoint;
use crate::special::{gauss_q, log_factorial, HalfIntOrder, UpperGammaLadder};

pub const MAX_OUTER_TERMS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSpec {
    pub rel_tol: f64,
    pub consecutive_small: usize,
    pub l_max: usize,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            consecutive_small: 3,
            l_max: 200,
        }
    }
}

impl SeriesSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::Config(format!(
                "series rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.consecutive_small == 0 {
            return Err(Error::Config("consecutive_small must be at least 1".into()));
        }
        if self.l_max == 0 || self.l_max > MAX_OUTER_TERMS {
            return Err(Error::Config(format!(
                "l_max must lie in 1..={MAX_OUTER_TERMS}, got {}",
                self.l_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    /// Number of outer groups summed; 0 when rho = 0 short-circuits.
    pub outer_terms_used: usize,
    pub converged: bool,
    /// Absolute mass of the last group summed, (1/pi) sum_k |T(l, k)|.
    pub last_term_magnitude: f64,
    /// x < 0 lies outside the range where the expansion has been checked.
    pub unvalidated_domain: bool,
}

/// Evaluate the series at `p`.
///
/// Errors only on an invalid `spec`; non-convergence is reported through
/// [`SeriesResult::converged`].
pub fn q2_series(p: &EvalPoint, spec: &SeriesSpec) -> Result<SeriesResult> {
    evaluate(p, spec, true)
}

/// Same as [`q2_series`] but without the rho = 0 product shortcut, so the
/// raw partial sums can be checked against Q(x) Q(y).
#[doc(hidden)]
pub fn q2_series_unshortcut(p: &EvalPoint, spec: &SeriesSpec) -> Result<SeriesResult> {
    evaluate(p, spec, false)
}

/// A single term, sign and ln-magnitude. `None` when the term vanishes
/// exactly (a zero base raised to a positive power).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Term {
    pub sign: f64,
    pub ln_abs: f64,
}

/// Log-space inputs shared by every term at one point.
pub(crate) struct TermContext {
    ln_fact: Vec<f64>,
    gamma: UpperGammaLadder,
    ln_abs_y: f64,
    ln_abs_rho: f64,
    y_negative: bool,
    rho_negative: bool,
    y_zero: bool,
    rho_zero: bool,
    ln_one_minus_rho_sq: f64,
}

impl TermContext {
    pub(crate) fn new(p: &EvalPoint, l_max: usize) -> Result<Self> {
        let ln_fact = (0..=(2 * l_max + 1) as u64).map(log_factorial).collect();
        // largest order needed is 1 + l_max (k = 0)
        let top = HalfIntOrder::integer(l_max as u32 + 1)?;
        let gamma = UpperGammaLadder::new(0.5 * p.x() * p.x(), top)?;
        let (y, rho) = (p.y(), p.rho());
        Ok(Self {
            ln_fact,
            gamma,
            ln_abs_y: y.abs().ln(),
            ln_abs_rho: rho.abs().ln(),
            y_negative: y < 0.0,
            rho_negative: rho < 0.0,
            y_zero: y == 0.0,
            rho_zero: rho == 0.0,
            ln_one_minus_rho_sq: ((1.0 - rho) * (1.0 + rho)).ln(),
        })
    }

    pub(crate) fn term(&self, l: usize, k: usize) -> Option<Term> {
        debug_assert!(k <= 2 * l + 1);
        let rho_power = 2 * l + 1 - k;
        if (self.y_zero && k > 0) || (self.rho_zero && rho_power > 0) {
            return None;
        }
        // 0^0 = 1, so zero powers contribute nothing to the log
        let y_part = if k == 0 { 0.0 } else { k as f64 * self.ln_abs_y };
        let rho_part = if rho_power == 0 {
            0.0
        } else {
            rho_power as f64 * self.ln_abs_rho
        };
        // Γ(1 + l - k/2) has twice_s = 2 + 2l - k >= 1
        let order = HalfIntOrder::new((2 + 2 * l - k) as u32).expect("order >= 1/2");
        let ln_abs = self.ln_fact[2 * l] + y_part + rho_part + self.gamma.ln_gamma(order)
            - self.ln_fact[l]
            - self.ln_fact[k]
            - (l as f64 + 0.5) * self.ln_one_minus_rho_sq
            - self.ln_fact[rho_power]
            - (1.0 + 0.5 * k as f64) * LN_2;

        let mut negative = (3 * l + 1 - k) % 2 == 1;
        if self.y_negative && k % 2 == 1 {
            negative = !negative;
        }
        if self.rho_negative && rho_power % 2 == 1 {
            negative = !negative;
        }
        Some(Term {
            sign: if negative { -1.0 } else { 1.0 },
            ln_abs,
        })
    }
}

fn evaluate(p: &EvalPoint, spec: &SeriesSpec, short_circuit: bool) -> Result<SeriesResult> {
    spec.validate()?;
    let unvalidated_domain = p.x() < 0.0;
    let head = 0.5 * gauss_q(p.x());

    if short_circuit && p.rho() == 0.0 {
        return Ok(SeriesResult {
            value: gauss_q(p.x()) * gauss_q(p.y()),
            outer_terms_used: 0,
            converged: true,
            last_term_magnitude: 0.0,
            unvalidated_domain,
        });
    }

    let ctx = TermContext::new(p, spec.l_max)?;
    let mut sum = 0.0;
    let mut small_run = 0;
    let mut last = f64::INFINITY;
    let mut used = 0;
    let mut converged = false;

    for l in 0..spec.l_max {
        let mut group = 0.0;
        let mut mass = 0.0;
        for k in 0..=2 * l + 1 {
            if let Some(t) = ctx.term(l, k) {
                let m = t.ln_abs.exp();
                group += t.sign * m;
                mass += m;
            }
        }
        sum += group;
        used = l + 1;
        last = mass * FRAC_1_PI;
        let value = head - sum * FRAC_1_PI;
        if !value.is_finite() {
            break;
        }
        if last <= spec.rel_tol * value.abs() {
            small_run += 1;
            if small_run >= spec.consecutive_small {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }

    Ok(SeriesResult {
        value: head - sum * FRAC_1_PI,
        outer_terms_used: used,
        converged,
        last_term_magnitude: last,
        unvalidated_domain,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceEntry {
    pub point: EvalPoint,
    pub outer_terms_used: usize,
    pub converged: bool,
}

/// Term counts needed at each point for a fixed truncation policy.
pub fn series_convergence_profile(
    points: &[EvalPoint],
    spec: &SeriesSpec,
) -> Result<Vec<ConvergenceEntry>> {
    spec.validate()?;
    points
        .iter()
        .map(|p| {
            let r = q2_series(p, spec)?;
            Ok(ConvergenceEntry {
                point: *p,
                outer_terms_used: r.outer_terms_used,
                converged: r.converged,
            })
        })
        .collect()
}
