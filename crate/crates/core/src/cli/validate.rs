//! Built-in invariant suites run by `bivq validate`.
//!
//! Each suite checks one invariant over a fixed set of points and records
//! the largest deviation found. `q1_offset` is added to every Q(x) the
//! suites use as a comparison value, so a deliberately perturbed build can
//! be shown to fail.

use serde::Serialize;

use crate::analysis::linspace;
use crate::approx::{derivation_discrepancy, q1_approx_3exp, q1_approx_exp, q2_approx_first, q2_approx_second};
use crate::error::Result;
use crate::oracle::{q2_craig, q2_double, q2_reduced, EvalPoint, QuadratureSpec};
use crate::series::{q2_series, SeriesSpec};
use crate::special::q1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub invariant: &'static str,
    pub tolerance: f64,
    pub checked: usize,
    pub worst_deviation: f64,
    /// (x, y, rho) of the worst check; y and rho are 0 for one-dimensional checks.
    pub worst_point: Option<[f64; 3]>,
    pub passed: bool,
    /// Set when an evaluation failed outright.
    pub error: Option<String>,
}

struct Tracker {
    checked: usize,
    worst: f64,
    at: Option<[f64; 3]>,
}

impl Tracker {
    fn new() -> Self {
        Self {
            checked: 0,
            worst: 0.0,
            at: None,
        }
    }

    fn record(&mut self, deviation: f64, at: [f64; 3]) {
        self.checked += 1;
        // a NaN deviation becomes the worst and stays there
        if self.worst.is_nan() {
            return;
        }
        if !(deviation <= self.worst) {
            self.worst = deviation;
            self.at = Some(at);
        }
    }

    fn finish(self, name: &'static str, invariant: &'static str, tolerance: f64, run: Result<()>) -> SuiteOutcome {
        let error = run.err().map(|e| e.to_string());
        SuiteOutcome {
            name,
            invariant,
            tolerance,
            checked: self.checked,
            worst_deviation: self.worst,
            worst_point: self.at,
            passed: error.is_none() && self.worst <= tolerance,
            error,
        }
    }
}

fn at(p: &EvalPoint) -> [f64; 3] {
    [p.x(), p.y(), p.rho()]
}

fn points(xs: &[f64], ys: &[f64], rhos: &[f64]) -> Result<Vec<EvalPoint>> {
    let mut out = Vec::new();
    for &x in xs {
        for &y in ys {
            for &rho in rhos {
                out.push(EvalPoint::new(x, y, rho)?);
            }
        }
    }
    Ok(out)
}

/// Run every suite, in a fixed order.
pub fn run_suites(q1_offset: f64) -> Vec<SuiteOutcome> {
    let q1p = |x: f64| q1(x).map(|v| v + q1_offset);
    let quad = QuadratureSpec::default();
    vec![
        q1_anchors(&q1p),
        oracle_agreement(&quad),
        rho_zero_identity(&quad, &q1p),
        symmetry(&quad, &q1p),
        kernel_equivalence(),
        factorization(&q1p),
        series_agreement(&quad),
    ]
}

fn q1_anchors(q1p: &dyn Fn(f64) -> Result<f64>) -> SuiteOutcome {
    const ANCHORS: [(f64, f64); 5] = [
        (0.0, 0.5),
        (1.0, 0.15865525393145705),
        (-1.0, 0.8413447460685429),
        (3.0, 0.0013498980316300946),
        (-2.5, 0.9937903346742238),
    ];
    let mut t = Tracker::new();
    let run = (|| {
        for (x, exact) in ANCHORS {
            t.record((q1p(x)? - exact).abs(), [x, 0.0, 0.0]);
        }
        Ok(())
    })();
    t.finish("q1_anchors", "|Q(x) - reference value|", 1e-15, run)
}

fn oracle_agreement(quad: &QuadratureSpec) -> SuiteOutcome {
    let mut t = Tracker::new();
    let run = (|| {
        for p in points(&[0.25, 1.0, 2.5], &[0.25, 1.0, 2.5], &[-0.9, -0.5, 0.0, 0.5, 0.9])? {
            let reduced = q2_reduced(&p, quad)?;
            let double = q2_double(&p, quad)?;
            let craig = q2_craig(&p, quad)?;
            let d = (reduced - double)
                .abs()
                .max((reduced - craig).abs())
                .max((double - craig).abs());
            t.record(d, at(&p));
        }
        Ok(())
    })();
    t.finish(
        "oracle_cross_agreement",
        "pairwise |difference| of the reduced, double and Craig oracles",
        1e-8,
        run,
    )
}

fn rho_zero_identity(quad: &QuadratureSpec, q1p: &dyn Fn(f64) -> Result<f64>) -> SuiteOutcome {
    let mut t = Tracker::new();
    let axis = linspace(-2.0, 3.0, 11);
    let run = (|| {
        for p in points(&axis, &axis, &[0.0])? {
            let d = (q2_reduced(&p, quad)? - q1p(p.x())? * q1p(p.y())?).abs();
            t.record(d, at(&p));
        }
        Ok(())
    })();
    t.finish("rho_zero_identity", "|Q(x, y; 0) - Q(x) Q(y)|", 1e-9, run)
}

fn symmetry(quad: &QuadratureSpec, q1p: &dyn Fn(f64) -> Result<f64>) -> SuiteOutcome {
    let mut t = Tracker::new();
    let run = (|| {
        for p in points(&[-1.0, 0.5, 2.0], &[-0.5, 1.0, 2.5], &[-0.7, 0.3, 0.8])? {
            let v = q2_reduced(&p, quad)?;
            let swap = (v - q2_reduced(&p.swapped(), quad)?).abs();
            let mirror = EvalPoint::new(p.x(), -p.y(), -p.rho())?;
            let reflect = (v + q2_reduced(&mirror, quad)? - q1p(p.x())?).abs();
            t.record(swap.max(reflect), at(&p));
        }
        Ok(())
    })();
    t.finish(
        "symmetry",
        "|Q(x,y;r) - Q(y,x;r)| and |Q(x,y;r) + Q(x,-y;-r) - Q(x)|",
        1e-9,
        run,
    )
}

fn kernel_equivalence() -> SuiteOutcome {
    let mut t = Tracker::new();
    let axis = linspace(0.0, 4.0, 9);
    let run = (|| {
        for p in points(&axis, &axis, &[-0.9, -0.45, 0.0, 0.45, 0.9])? {
            t.record(derivation_discrepancy(&p), at(&p));
        }
        Ok(())
    })();
    t.finish(
        "kernel_equivalence",
        "|ln closed form - ln completed-square integral|",
        1e-12,
        run,
    )
}

fn factorization(q1p: &dyn Fn(f64) -> Result<f64>) -> SuiteOutcome {
    let mut t = Tracker::new();
    let axis = linspace(0.0, 3.0, 7);
    let run = (|| {
        for p in points(&axis, &axis, &[0.0])? {
            let qx = q1p(p.x())?;
            let first = qx * q1_approx_exp(p.y());
            let second = qx * q1_approx_3exp(p.y());
            let d1 = (q2_approx_first(&p) - first).abs() / first;
            let d2 = (q2_approx_second(&p) - second).abs() / second;
            t.record(d1.max(d2), at(&p));
        }
        Ok(())
    })();
    t.finish(
        "rho_zero_factorization",
        "relative gap between a closed form at rho = 0 and Q(x) times its 1D model of y",
        1e-14,
        run,
    )
}

fn series_agreement(quad: &QuadratureSpec) -> SuiteOutcome {
    let mut t = Tracker::new();
    let spec = SeriesSpec::default();
    let run = (|| {
        for p in points(&[0.5, 1.0, 2.0], &[0.5, 1.0, 2.0], &[-0.6, 0.3, 0.6])? {
            let s = q2_series(&p, &spec)?;
            let d = if s.converged {
                (s.value - q2_reduced(&p, quad)?).abs()
            } else {
                f64::INFINITY
            };
            t.record(d, at(&p));
        }
        Ok(())
    })();
    t.finish(
        "series_vs_oracle",
        "|converged series - reduced oracle|",
        1e-6,
        run,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes() {
        for s in run_suites(0.0) {
            assert!(s.passed, "{s:?}");
            assert!(s.checked > 0);
        }
    }

    #[test]
    fn perturbed_q1_is_caught() {
        let failed: Vec<_> = run_suites(1e-6)
            .into_iter()
            .filter(|s| !s.passed)
            .map(|s| s.name)
            .collect();
        assert!(failed.contains(&"q1_anchors"));
        assert!(failed.contains(&"rho_zero_identity"));
        assert!(failed.contains(&"symmetry"));
    }

    #[test]
    fn nan_deviation_fails() {
        let mut t = Tracker::new();
        t.record(0.0, [0.0; 3]);
        t.record(f64::NAN, [1.0, 2.0, 3.0]);
        let s = t.finish("n", "i", 1.0, Ok(()));
        assert!(!s.passed);
        assert_eq!(s.worst_point, Some([1.0, 2.0, 3.0]));
    }
}
