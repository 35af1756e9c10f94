//! Closed-form approximations.
//!
//! Two one-dimensional models of Q(x) on x >= 0:
//!
//! ```text
//! Q(x) ≈ 0.49 exp(-8x/13) exp(-x²/2)
//! Q(x) ≈ 0.208 exp(-0.876 x²) + 0.13 exp(-0.525 x²) + 0.14 exp(-7.25 x²)
//! ```
//!
//! and the two-dimensional closed forms obtained by substituting each model
//! for the inner Q of
//! `Q(x,y;rho) = (1/sqrt(2 pi)) ∫_x^∞ exp(-v²/2) Q((y - rho v)/sqrt(1 - rho²)) dv`
//! and integrating exactly. The outer Q factor that appears is the exact
//! one-dimensional Q function.

use std::f64::consts::PI;

use serde::Serialize;

use crate::oracle::EvalPoint;
use crate::special::{gauss_q, ln_gauss_q, ln_gauss_tail_kernel, log_add_exp, TailKernelParams};

/// Weight of the single-exponential model.
pub const EXP_WEIGHT: f64 = 0.49;
/// Linear exponent coefficient of the single-exponential model.
pub const EXP_LINEAR: f64 = 8.0 / 13.0;

/// (weight, quadratic exponent) of each term of the three-exponential model.
pub const THREE_EXP_TERMS: [(f64, f64); 3] = [(0.208, 0.876), (0.13, 0.525), (0.14, 7.25)];

/// Q(x) ≈ 0.49 e^{-8x/13} e^{-x²/2}. Intended for x >= 0.
pub fn q1_approx_exp(x: f64) -> f64 {
    EXP_WEIGHT * (-EXP_LINEAR * x).exp() * (-0.5 * x * x).exp()
}

/// Q(x) ≈ 0.208 e^{-0.876x²} + 0.13 e^{-0.525x²} + 0.14 e^{-7.25x²}. Intended for x >= 0.
pub fn q1_approx_3exp(x: f64) -> f64 {
    THREE_EXP_TERMS
        .iter()
        .map(|&(w, kappa)| w * (-kappa * x * x).exp())
        .sum()
}

/// Constants A and B of the first closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstFormConstants {
    /// A = 1 + rho²/(1 - rho²) = 1/(1 - rho²)
    pub a: f64,
    /// B = 8 rho / (13 sqrt(1 - rho²)) + rho y / (1 - rho²)
    pub b: f64,
}

impl FirstFormConstants {
    pub fn new(rho: f64, y: f64) -> Self {
        let one_minus = (1.0 - rho) * (1.0 + rho);
        Self {
            a: 1.0 / one_minus,
            b: EXP_LINEAR * rho / one_minus.sqrt() + rho * y / one_minus,
        }
    }

    /// A in its printed form, for cross-checking the simplified one.
    pub fn a_as_printed(rho: f64) -> f64 {
        1.0 + rho * rho / (1.0 - rho * rho)
    }
}

/// One (quadratic, linear) constant pair of the second closed form:
/// (a, b), (c, d) or (f, g).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeExpPair {
    pub weight: f64,
    pub kappa: f64,
    /// 1/2 + kappa rho² / (1 - rho²)
    pub quadratic: f64,
    /// 2 kappa rho / (1 - rho²)
    pub linear: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondFormConstants {
    pub pairs: [ThreeExpPair; 3],
}

impl SecondFormConstants {
    pub fn new(rho: f64) -> Self {
        let one_minus = (1.0 - rho) * (1.0 + rho);
        let pairs = THREE_EXP_TERMS.map(|(weight, kappa)| ThreeExpPair {
            weight,
            kappa,
            quadratic: 0.5 + kappa * rho * rho / one_minus,
            linear: 2.0 * kappa * rho / one_minus,
        });
        Self { pairs }
    }

    pub fn a(&self) -> f64 {
        self.pairs[0].quadratic
    }
    pub fn b(&self) -> f64 {
        self.pairs[0].linear
    }
    pub fn c(&self) -> f64 {
        self.pairs[1].quadratic
    }
    pub fn d(&self) -> f64 {
        self.pairs[1].linear
    }
    pub fn f(&self) -> f64 {
        self.pairs[2].quadratic
    }
    pub fn g(&self) -> f64 {
        self.pairs[2].linear
    }
}

/// prefactor · exp(exponent) · Q(arg), falling back to log space when the
/// pieces would overflow or underflow on their own.
fn scaled_q(prefactor: f64, exponent: f64, arg: f64) -> f64 {
    if exponent.abs() < 600.0 && arg < 30.0 {
        prefactor * exponent.exp() * gauss_q(arg)
    } else {
        (prefactor.ln() + exponent + ln_gauss_q(arg)).exp()
    }
}

/// First closed form:
/// (0.49/sqrt A) e^{-8y/(13 sqrt(1-rho²))} e^{-y²/(2(1-rho²))} e^{B²/(2A)} Q(x sqrt A - B/sqrt A).
pub fn q2_approx_first(p: &EvalPoint) -> f64 {
    let (prefactor, exponent, arg) = first_form_parts(p);
    scaled_q(prefactor, exponent, arg)
}

/// ln of [`q2_approx_first`], finite where the value itself underflows.
pub fn ln_q2_approx_first(p: &EvalPoint) -> f64 {
    let (prefactor, exponent, arg) = first_form_parts(p);
    prefactor.ln() + exponent + ln_gauss_q(arg)
}

fn first_form_parts(p: &EvalPoint) -> (f64, f64, f64) {
    let (x, y, rho) = (p.x(), p.y(), p.rho());
    let s = p.rho_complement();
    let one_minus = (1.0 - rho) * (1.0 + rho);
    let FirstFormConstants { a, b } = FirstFormConstants::new(rho, y);
    let root_a = a.sqrt();
    let exponent = -EXP_LINEAR * y / s - y * y / (2.0 * one_minus) + b * b / (2.0 * a);
    (EXP_WEIGHT / root_a, exponent, x * root_a - b / root_a)
}

fn second_form_parts(p: &EvalPoint) -> [(f64, f64, f64); 3] {
    let (x, y, rho) = (p.x(), p.y(), p.rho());
    let one_minus = (1.0 - rho) * (1.0 + rho);
    SecondFormConstants::new(rho).pairs.map(|c| {
        let root = (2.0 * c.quadratic).sqrt();
        let exponent =
            -c.kappa * y * y / one_minus + c.linear * c.linear * y * y / (4.0 * c.quadratic);
        (c.weight / root, exponent, x * root - c.linear * y / root)
    })
}

/// The three terms of the second closed form, in table order.
pub fn q2_approx_second_terms(p: &EvalPoint) -> [f64; 3] {
    second_form_parts(p).map(|(pre, e, arg)| scaled_q(pre, e, arg))
}

/// ln of each of [`q2_approx_second_terms`].
pub fn ln_q2_approx_second_terms(p: &EvalPoint) -> [f64; 3] {
    second_form_parts(p).map(|(pre, e, arg)| pre.ln() + e + ln_gauss_q(arg))
}

/// Second closed form: sum over (w, kappa) of
/// (w/sqrt(2a)) e^{-kappa y²/(1-rho²)} e^{b²y²/(4a)} Q(x sqrt(2a) - b y/sqrt(2a)).
pub fn q2_approx_second(p: &EvalPoint) -> f64 {
    q2_approx_second_terms(p).iter().sum()
}

/// ln of the first form rebuilt from the integrand
/// (0.49/sqrt(2 pi)) exp(-v²/2 - (8/13)(y - rho v)/s - (y - rho v)²/(2 s²))
/// by expanding the exponent in v and applying the tail kernel.
pub fn ln_first_form_via_kernel(p: &EvalPoint) -> f64 {
    let (x, y, rho) = (p.x(), p.y(), p.rho());
    let s = p.rho_complement();
    let s2 = s * s;
    let alpha = 0.5 + rho * rho / (2.0 * s2);
    let beta = EXP_LINEAR * rho / s + rho * y / s2;
    let constant = -EXP_LINEAR * y / s - y * y / (2.0 * s2);
    let kernel = TailKernelParams::new(alpha, beta, x).expect("alpha >= 1/2");
    EXP_WEIGHT.ln() - 0.5 * (2.0 * PI).ln() + constant + ln_gauss_tail_kernel(&kernel)
}

/// ln of the per-term kernel evaluation of the three integrals
/// (w/sqrt(2 pi)) ∫_x^∞ exp(-v²/2 - kappa (y - rho v)²/s²) dv.
pub fn ln_second_form_terms_via_kernel(p: &EvalPoint) -> [f64; 3] {
    let (x, y, rho) = (p.x(), p.y(), p.rho());
    let s2 = p.rho_complement().powi(2);
    THREE_EXP_TERMS.map(|(w, kappa)| {
        let alpha = 0.5 + kappa * rho * rho / s2;
        let beta = 2.0 * kappa * rho * y / s2;
        let constant = -kappa * y * y / s2;
        let kernel = TailKernelParams::new(alpha, beta, x).expect("alpha >= 1/2");
        w.ln() - 0.5 * (2.0 * PI).ln() + constant + ln_gauss_tail_kernel(&kernel)
    })
}

/// Larger of |ln printed - ln kernel| for the first form and for the
/// three-term sum of the second form; a log difference d is a relative
/// difference of about d.
pub fn derivation_discrepancy(p: &EvalPoint) -> f64 {
    let first = (ln_q2_approx_first(p) - ln_first_form_via_kernel(p)).abs();
    let ln_sum = |t: [f64; 3]| t.into_iter().fold(f64::NEG_INFINITY, log_add_exp);
    let second =
        (ln_sum(ln_q2_approx_second_terms(p)) - ln_sum(ln_second_form_terms_via_kernel(p))).abs();
    first.max(second)
}
