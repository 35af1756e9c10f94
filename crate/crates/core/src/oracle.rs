//! Reference evaluations of Q(x, y; rho) by independent quadrature routes.
//!
//! * [`q2_reduced`] integrates the single-variable form
//!   `(1/sqrt(2 pi)) ∫_x^∞ exp(-v²/2) Q((y - rho v) / sqrt(1 - rho²)) dv`
//!   and is the primary reference.
//! * [`q2_double`] integrates the defining bivariate density directly.
//! * [`q2_craig`] and [`q2_craig_equal`] integrate the finite-range Craig
//!   forms (positive arguments only).
//! * [`q2_product`] is the exact value at rho = 0.

use std::cell::Cell;
use std::f64::consts::{FRAC_1_PI, PI};

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::quad::{integrate, Estimate, Tolerance};
use crate::special::gauss_q;

/// Semi-infinite limits are cut this many standard deviations out; the
/// discarded Gaussian mass is below Q(10) ≈ 7.6e-24.
pub const TAIL_CUTOFF: f64 = 10.0;

/// Half-width, in conditional standard deviations, of the inner integration
/// window used by [`q2_double`].
const CONDITIONAL_CUTOFF: f64 = 12.0;

/// An (x, y, rho) triple with |rho| < 1 and finite x, y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalPoint {
    x: f64,
    y: f64,
    rho: f64,
}

impl EvalPoint {
    pub fn new(x: f64, y: f64, rho: f64) -> Result<Self> {
        ensure_finite("x", x)?;
        ensure_finite("y", y)?;
        if !(rho.abs() < 1.0) {
            return Err(Error::Correlation(rho));
        }
        Ok(Self { x, y, rho })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// sqrt(1 - rho²)
    pub fn rho_complement(&self) -> f64 {
        ((1.0 - self.rho) * (1.0 + self.rho)).sqrt()
    }

    /// The same point with x and y exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y,
            y: self.x,
            rho: self.rho,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-14) || !self.rel_tol.is_finite() {
            return Err(Error::Config(format!(
                "rel_tol must be at least 1e-14, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::Config(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be positive".into()));
        }
        Ok(())
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }

    /// Tighter tolerance for inner integrals so their error does not
    /// dominate the outer estimate.
    fn inner_tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol * 0.1,
            abs: self.abs_tol * 1e-2,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

fn convergence_error(est: Estimate) -> Error {
    Error::Convergence {
        estimate: est.value.clamp(0.0, 1.0),
        abs_error: est.abs_error,
        subdivisions: est.subdivisions,
    }
}

fn panels_for(width: f64, panel: f64) -> usize {
    ((width / panel).ceil() as usize).clamp(1, 64)
}

fn std_normal_pdf(v: f64) -> f64 {
    (-0.5 * v * v).exp() / (2.0 * PI).sqrt()
}

/// Q(x, y; rho) from the reduced single integral.
pub fn q2_reduced(p: &EvalPoint, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let (y, rho) = (p.y, p.rho);
    let s = p.rho_complement();
    let lower = p.x.max(-TAIL_CUTOFF);
    let upper = p.x.max(0.0) + TAIL_CUTOFF;
    let integrand = |v: f64| std_normal_pdf(v) * gauss_q((y - rho * v) / s);
    integrate(
        integrand,
        lower,
        upper,
        panels_for(upper - lower, 1.0),
        spec.tolerance(),
    )
    .map(|e| e.value.clamp(0.0, 1.0))
    .map_err(convergence_error)
}

/// Q(x, y; rho) by nested adaptive quadrature of the bivariate density over
/// [x, X_max] × [y, Y_max].
pub fn q2_double(p: &EvalPoint, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let rho = p.rho;
    let one_minus = (1.0 - rho) * (1.0 + rho);
    let sigma = one_minus.sqrt();
    let norm = 1.0 / (2.0 * PI * sigma);
    let density = |u: f64, v: f64| norm * (-(u * u + v * v - 2.0 * rho * u * v) / (2.0 * one_minus)).exp();

    let u_lo = p.x.max(-TAIL_CUTOFF);
    let u_hi = p.x.max(0.0) + TAIL_CUTOFF;
    let v_lo = p.y.max(-TAIL_CUTOFF);
    let v_hi = p.y.max(0.0) + TAIL_CUTOFF;

    let inner_tol = spec.inner_tolerance();
    let inner_failure: Cell<Option<Estimate>> = Cell::new(None);
    let outer = |u: f64| {
        // for fixed u the density in v is centred on rho u with spread sigma
        let centre = rho * u;
        let lo = v_lo.max(centre - CONDITIONAL_CUTOFF * sigma);
        let hi = v_hi.min(centre + CONDITIONAL_CUTOFF * sigma);
        if lo >= hi {
            return 0.0;
        }
        match integrate(|v| density(u, v), lo, hi, panels_for(hi - lo, sigma), inner_tol) {
            Ok(e) => e.value,
            Err(e) => {
                inner_failure.set(Some(e));
                e.value
            }
        }
    };
    let result = integrate(outer, u_lo, u_hi, panels_for(u_hi - u_lo, 1.0), spec.tolerance());
    if let Some(e) = inner_failure.get() {
        return Err(convergence_error(Estimate {
            value: result.map_or_else(|r| r.value, |r| r.value),
            ..e
        }));
    }
    result
        .map(|e| e.value.clamp(0.0, 1.0))
        .map_err(convergence_error)
}

/// Upper limit of one Craig integral: the angle whose tangent is
/// sqrt(1 - rho²) r / (1 - rho r), placed in (0, pi).
fn craig_angle(ratio: f64, rho: f64, s: f64) -> f64 {
    let num = s * ratio;
    let den = 1.0 - rho * ratio;
    if den > 0.0 {
        (num / den).atan()
    } else if den < 0.0 {
        (num / den).atan() + PI
    } else {
        0.5 * PI
    }
}

fn craig_integral(arg: f64, angle: f64, spec: &QuadratureSpec) -> Result<f64> {
    let half_sq = 0.5 * arg * arg;
    let integrand = |phi: f64| {
        let sin = phi.sin();
        (-half_sq / (sin * sin)).exp()
    };
    integrate(integrand, 0.0, angle, 4, spec.tolerance())
        .map(|e| e.value)
        .map_err(convergence_error)
}

/// Q(x, y; rho) from the Craig form; requires x > 0 and y > 0.
pub fn q2_craig(p: &EvalPoint, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(p.x > 0.0 && p.y > 0.0) {
        return Err(Error::domain(format!(
            "the Craig form needs x > 0 and y > 0, got x = {}, y = {}",
            p.x, p.y
        )));
    }
    let s = p.rho_complement();
    let first = craig_integral(p.x, craig_angle(p.x / p.y, p.rho, s), spec)?;
    let second = craig_integral(p.y, craig_angle(p.y / p.x, p.rho, s), spec)?;
    Ok(((first + second) / (2.0 * PI)).clamp(0.0, 1.0))
}

/// Q(x, x; rho) from the single Craig integral for equal arguments.
pub fn q2_craig_equal(x: f64, rho: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let p = EvalPoint::new(x, x, rho)?;
    if !(p.x > 0.0) {
        return Err(Error::domain(format!(
            "the equal-argument Craig form needs x > 0, got {x}"
        )));
    }
    let angle = ((1.0 + rho) / (1.0 - rho)).sqrt().atan();
    let value = craig_integral(x, angle, spec)? * FRAC_1_PI;
    Ok(value.clamp(0.0, 1.0))
}

/// Q(x) Q(y), the exact value of Q(x, y; 0).
pub fn q2_product(x: f64, y: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    ensure_finite("y", y)?;
    Ok(gauss_q(x) * gauss_q(y))
}
