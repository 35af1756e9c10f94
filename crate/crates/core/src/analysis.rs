//! Error metrics and grid sweeps comparing each approximation route with a
//! reference oracle.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{q1_approx_3exp, q1_approx_exp, q2_approx_first, q2_approx_second};
use crate::error::{Error, Result};
use crate::oracle::{q2_product, q2_reduced, EvalPoint, QuadratureSpec};
use crate::series::{q2_series, SeriesSpec};
use crate::special::gauss_q;

/// References smaller than this get no relative error.
pub const TINY_REFERENCE: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    FirstForm,
    SecondForm,
    #[serde(rename = "q1_exp")]
    Q1Exp,
    #[serde(rename = "q1_3exp")]
    Q1ThreeExp,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Series,
        Method::FirstForm,
        Method::SecondForm,
        Method::Q1Exp,
        Method::Q1ThreeExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::FirstForm => "first_form",
            Method::SecondForm => "second_form",
            Method::Q1Exp => "q1_exp",
            Method::Q1ThreeExp => "q1_3exp",
        }
    }

    pub fn is_one_dimensional(self) -> bool {
        matches!(self, Method::Q1Exp | Method::Q1ThreeExp)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Method::Series),
            "first_form" | "first" => Ok(Method::FirstForm),
            "second_form" | "second" => Ok(Method::SecondForm),
            "q1_exp" => Ok(Method::Q1Exp),
            "q1_3exp" => Ok(Method::Q1ThreeExp),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (expected series, first_form, second_form, q1_exp or q1_3exp)"
            ))),
        }
    }
}

/// Which oracle supplies the reference value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Q(x) Q(y) where rho = 0, the reduced-integral oracle elsewhere.
    Auto,
    /// Q(x) Q(y); only valid on rho = 0 grids.
    Product,
    /// Reduced single-integral quadrature.
    Reduced,
}

impl ReferenceKind {
    pub fn name(self) -> &'static str {
        match self {
            ReferenceKind::Auto => "auto",
            ReferenceKind::Product => "product",
            ReferenceKind::Reduced => "reduced",
        }
    }

    fn evaluate(self, p: &EvalPoint, quad: &QuadratureSpec) -> Result<f64> {
        match self {
            ReferenceKind::Product => q2_product(p.x(), p.y()),
            ReferenceKind::Auto if p.rho() == 0.0 => q2_product(p.x(), p.y()),
            ReferenceKind::Auto | ReferenceKind::Reduced => q2_reduced(p, quad),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RecordFlags {
    /// A negative argument, outside the range the approximations target.
    pub out_of_domain: bool,
    pub series_not_converged: bool,
    /// The reference quadrature failed; `reference` holds its best estimate.
    pub oracle_failed: bool,
    /// Reference below [`TINY_REFERENCE`], relative error not reported.
    pub rel_suppressed: bool,
}

impl RecordFlags {
    /// Excluded records are emitted but do not enter summaries.
    pub fn excluded(&self) -> bool {
        self.oracle_failed || self.series_not_converged
    }

    /// `|`-separated flag names, empty when none are set.
    pub fn labels(&self) -> String {
        let mut out = Vec::new();
        if self.out_of_domain {
            out.push("out_of_domain");
        }
        if self.series_not_converged {
            out.push("not_converged");
        }
        if self.oracle_failed {
            out.push("oracle_failed");
        }
        if self.rel_suppressed {
            out.push("rel_suppressed");
        }
        out.join("|")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRecord {
    /// For one-dimensional methods only `point.x()` is meaningful.
    pub point: EvalPoint,
    pub method: Method,
    pub reference: f64,
    pub approx: f64,
    pub abs_err: f64,
    pub abs_rel_err: Option<f64>,
    pub flags: RecordFlags,
}

/// Absolute error |ref - approx| and absolute relative error
/// |ref - approx| / |ref|; the latter is `None` for a (near) zero reference.
pub fn error_metrics(reference: f64, approx: f64) -> (f64, Option<f64>) {
    let abs_err = (reference - approx).abs();
    let rel = if reference.abs() < TINY_REFERENCE {
        None
    } else {
        Some(abs_err / reference.abs())
    };
    (abs_err, rel)
}

fn make_record(point: EvalPoint, method: Method, reference: f64, approx: f64, mut flags: RecordFlags) -> ErrorRecord {
    let (abs_err, abs_rel_err) = error_metrics(reference, approx);
    flags.rel_suppressed = abs_rel_err.is_none();
    ErrorRecord {
        point,
        method,
        reference,
        approx,
        abs_err,
        abs_rel_err,
        flags,
    }
}

/// Cartesian grid of evaluation points. A single-step axis requires min == max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub x_steps: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub y_steps: usize,
    pub rho_values: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            x_min: 0.0,
            x_max: 3.0,
            x_steps: 13,
            y_min: 0.0,
            y_max: 3.0,
            y_steps: 13,
            rho_values: vec![0.0],
        }
    }
}

fn check_axis(name: &str, min: f64, max: f64, steps: usize) -> Result<()> {
    if !min.is_finite() || !max.is_finite() {
        return Err(Error::Config(format!("{name} range must be finite")));
    }
    match steps {
        0 => Err(Error::Config(format!("{name} range needs at least one step"))),
        1 if min != max => Err(Error::Config(format!(
            "{name} range with one step needs min == max, got {min}:{max}"
        ))),
        1 => Ok(()),
        _ if !(min < max) => Err(Error::Config(format!(
            "{name} range needs min < max, got {min}:{max}"
        ))),
        _ => Ok(()),
    }
}

pub(crate) fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let h = (max - min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i + 1 == steps { max } else { min + i as f64 * h })
        .collect()
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        check_axis("x", self.x_min, self.x_max, self.x_steps)?;
        check_axis("y", self.y_min, self.y_max, self.y_steps)?;
        if self.rho_values.is_empty() {
            return Err(Error::Config("at least one rho value is required".into()));
        }
        if let Some(&bad) = self.rho_values.iter().find(|r| !(r.abs() < 1.0)) {
            return Err(Error::Correlation(bad));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.x_steps)
    }

    pub fn ys(&self) -> Vec<f64> {
        linspace(self.y_min, self.y_max, self.y_steps)
    }

    /// All points, x-major, then y, then rho.
    pub fn points(&self) -> Result<Vec<EvalPoint>> {
        self.validate()?;
        let ys = self.ys();
        let mut out = Vec::with_capacity(self.x_steps * self.y_steps * self.rho_values.len());
        for x in self.xs() {
            for &y in &ys {
                for &rho in &self.rho_values {
                    out.push(EvalPoint::new(x, y, rho)?);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub method: Method,
    /// Records that entered the statistics.
    pub n_points: usize,
    /// Records left out because the oracle or the series did not converge.
    pub excluded: usize,
    /// Included records without a relative error (tiny reference).
    pub rel_suppressed: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub median_rel_err: f64,
    pub p95_rel_err: f64,
    /// Point with the largest relative error (largest absolute error when
    /// no relative error is available).
    pub worst_point: Option<EvalPoint>,
}

/// Linear-interpolation percentile of sorted data, q in [0, 1].
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = q * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            let frac = pos - lo as f64;
            sorted[lo] + frac * (sorted[hi] - sorted[lo])
        }
    }
}

/// Summary statistics over the records of one method.
pub fn summarize(method: Method, records: &[ErrorRecord]) -> SweepSummary {
    let mine: Vec<&ErrorRecord> = records.iter().filter(|r| r.method == method).collect();
    let included: Vec<&ErrorRecord> = mine.iter().copied().filter(|r| !r.flags.excluded()).collect();
    let mut rel: Vec<f64> = included.iter().filter_map(|r| r.abs_rel_err).collect();
    rel.sort_by(f64::total_cmp);

    let max_abs_err = included.iter().map(|r| r.abs_err).fold(f64::NAN, f64::max);
    let worst = included
        .iter()
        .filter(|r| r.abs_rel_err.is_some())
        .max_by(|a, b| a.abs_rel_err.unwrap().total_cmp(&b.abs_rel_err.unwrap()))
        .or_else(|| included.iter().max_by(|a, b| a.abs_err.total_cmp(&b.abs_err)));

    SweepSummary {
        method,
        n_points: included.len(),
        excluded: mine.len() - included.len(),
        rel_suppressed: included.len() - rel.len(),
        max_abs_err,
        max_rel_err: rel.last().copied().unwrap_or(f64::NAN),
        median_rel_err: percentile(&rel, 0.5),
        p95_rel_err: percentile(&rel, 0.95),
        worst_point: worst.map(|r| r.point),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub grid: SweepGrid,
    pub reference: ReferenceKind,
    pub records: Vec<ErrorRecord>,
    pub summaries: Vec<SweepSummary>,
}

fn one_dimensional_record(x: f64, method: Method) -> ErrorRecord {
    let approx = match method {
        Method::Q1Exp => q1_approx_exp(x),
        Method::Q1ThreeExp => q1_approx_3exp(x),
        _ => unreachable!("two-dimensional method"),
    };
    let point = EvalPoint::new(x, 0.0, 0.0).expect("finite x");
    let flags = RecordFlags {
        out_of_domain: x < 0.0,
        ..RecordFlags::default()
    };
    make_record(point, method, gauss_q(x), approx, flags)
}

fn two_dimensional_record(
    p: &EvalPoint,
    method: Method,
    reference: &Result<f64>,
    series: &SeriesSpec,
) -> Result<ErrorRecord> {
    let (reference, oracle_failed) = match reference {
        Ok(v) => (*v, false),
        Err(Error::Convergence { estimate, .. }) => (*estimate, true),
        Err(e) => return Err(e.clone()),
    };
    let mut flags = RecordFlags {
        oracle_failed,
        out_of_domain: p.x() < 0.0 || p.y() < 0.0,
        ..RecordFlags::default()
    };
    let approx = match method {
        Method::Series => {
            let r = q2_series(p, series)?;
            flags.series_not_converged = !r.converged;
            flags.out_of_domain = r.unvalidated_domain;
            r.value
        }
        Method::FirstForm => q2_approx_first(p),
        Method::SecondForm => q2_approx_second(p),
        Method::Q1Exp | Method::Q1ThreeExp => unreachable!("one-dimensional method"),
    };
    Ok(make_record(*p, method, reference, approx, flags))
}

/// Evaluate every method over the grid and summarise each.
///
/// Records are grouped by method in the order given; within a method they
/// follow the grid order. One-dimensional methods use the x axis only.
pub fn sweep(
    grid: &SweepGrid,
    methods: &[Method],
    reference: ReferenceKind,
    quad: &QuadratureSpec,
    series: &SeriesSpec,
) -> Result<SweepReport> {
    grid.validate()?;
    quad.validate()?;
    series.validate()?;
    if methods.is_empty() {
        return Err(Error::Config("no methods selected".into()));
    }
    if reference == ReferenceKind::Product && grid.rho_values.iter().any(|&r| r != 0.0) {
        return Err(Error::Config(
            "the product reference Q(x)Q(y) is exact only at rho = 0".into(),
        ));
    }

    let points = grid.points()?;
    let needs_2d = methods.iter().any(|m| !m.is_one_dimensional());
    let references: Vec<Result<f64>> = if needs_2d {
        points.par_iter().map(|p| reference.evaluate(p, quad)).collect()
    } else {
        Vec::new()
    };

    let mut records = Vec::new();
    for &method in methods {
        if method.is_one_dimensional() {
            records.extend(grid.xs().into_iter().map(|x| one_dimensional_record(x, method)));
        } else {
            let block: Result<Vec<ErrorRecord>> = points
                .par_iter()
                .zip(references.par_iter())
                .map(|(p, r)| two_dimensional_record(p, method, r, series))
                .collect();
            records.extend(block?);
        }
    }
    let summaries = methods.iter().map(|&m| summarize(m, &records)).collect();
    Ok(SweepReport {
        grid: grid.clone(),
        reference,
        records,
        summaries,
    })
}

/// Pointwise errors of both one-dimensional models against exact Q(x),
/// first the single-exponential model over the whole range, then the
/// three-exponential one.
pub fn q1_error_profile(x_min: f64, x_max: f64, steps: usize) -> Result<Vec<ErrorRecord>> {
    if steps < 2 {
        return Err(Error::Config("a profile needs at least two steps".into()));
    }
    check_axis("x", x_min, x_max, steps)?;
    let xs = linspace(x_min, x_max, steps);
    Ok([Method::Q1Exp, Method::Q1ThreeExp]
        .iter()
        .flat_map(|&m| xs.iter().map(move |&x| one_dimensional_record(x, m)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn metrics() {
        let (a, r) = error_metrics(0.5, 0.49);
        assert!((a - 0.01).abs() < 1e-15);
        assert!((r.unwrap() - 0.02).abs() < 1e-14);
        assert_eq!(error_metrics(0.3, 0.3), (0.0, Some(0.0)));
        assert_eq!(error_metrics(0.0, 1e-3).1, None);
        assert_eq!(error_metrics(1e-310, 0.0).1, None);
        // Q(1) against the single-exponential model, mpmath values
        let (a, r) = error_metrics(gauss_q(1.0), q1_approx_exp(1.0));
        assert!((a - 0.001_961_445_194_374_826).abs() < 1e-15);
        assert!((r.unwrap() - 0.012_362_938_798_246_280).abs() < 1e-13);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(SweepGrid::default().validate().is_ok());
        let g = SweepGrid { x_steps: 1, ..SweepGrid::default() };
        assert!(g.validate().is_err());
        let g = SweepGrid { x_min: 1.0, x_max: 1.0, x_steps: 1, ..SweepGrid::default() };
        assert!(g.validate().is_ok());
        let g = SweepGrid { x_min: 2.0, x_max: 1.0, ..SweepGrid::default() };
        assert!(g.validate().is_err());
        let g = SweepGrid { rho_values: vec![0.2, 1.0], ..SweepGrid::default() };
        assert!(matches!(g.validate(), Err(Error::Correlation(_))));
        let g = SweepGrid { rho_values: vec![], ..SweepGrid::default() };
        assert!(g.validate().is_err());
        let xs = SweepGrid::default().xs();
        assert_eq!(xs.len(), 13);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[12], 3.0);
        assert!((xs[4] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_ordering() {
        let g = SweepGrid {
            x_min: 0.0,
            x_max: 1.0,
            x_steps: 2,
            y_min: 0.0,
            y_max: 1.0,
            y_steps: 2,
            rho_values: vec![-0.5, 0.5],
        };
        let pts: Vec<(f64, f64, f64)> = g.points().unwrap().iter().map(|p| (p.x(), p.y(), p.rho())).collect();
        assert_eq!(
            pts,
            vec![
                (0.0, 0.0, -0.5),
                (0.0, 0.0, 0.5),
                (0.0, 1.0, -0.5),
                (0.0, 1.0, 0.5),
                (1.0, 0.0, -0.5),
                (1.0, 0.0, 0.5),
                (1.0, 1.0, -0.5),
                (1.0, 1.0, 0.5),
            ]
        );
    }

    #[test]
    fn single_point_at_origin() {
        let g = SweepGrid {
            x_min: 0.0,
            x_max: 0.0,
            x_steps: 1,
            y_min: 0.0,
            y_max: 0.0,
            y_steps: 1,
            rho_values: vec![0.0],
        };
        let rep = sweep(&g, &[Method::FirstForm], ReferenceKind::Auto, &quad(), &SeriesSpec::default()).unwrap();
        assert_eq!(rep.records.len(), 1);
        let r = rep.records[0];
        assert_eq!(r.reference, 0.25);
        assert!((r.approx - 0.245).abs() < 1e-16);
        assert!((r.abs_rel_err.unwrap() - 0.02).abs() < 1e-14);
        assert_eq!(rep.summaries[0].n_points, 1);
    }

    #[test]
    fn default_grid_measured_errors() {
        // Relative errors on the 13 x 13 rho = 0 grid equal the 1D model
        // errors in y (scipy erfc): max 0.3635 for the single-exponential
        // model at y = 3, 0.0877 for the three-exponential model at y = 3.
        let rep = sweep(
            &SweepGrid::default(),
            &[Method::FirstForm, Method::SecondForm],
            ReferenceKind::Auto,
            &quad(),
            &SeriesSpec::default(),
        )
        .unwrap();
        let first = &rep.summaries[0];
        let second = &rep.summaries[1];
        assert_eq!(first.n_points, 169);
        assert!((first.max_rel_err - 0.363_504_233_688_766_2).abs() < 1e-12);
        assert_eq!(first.worst_point.unwrap().y(), 3.0);
        assert!((second.max_rel_err - 0.087_670_924_853_113_58).abs() < 1e-12);
        assert!((second.p95_rel_err - 0.087_670_924_853_113_58).abs() < 1e-12);
        for s in &rep.summaries {
            assert!(s.max_rel_err >= s.p95_rel_err && s.p95_rel_err >= s.median_rel_err);
        }
    }

    #[test]
    fn summary_recomputes_from_records() {
        let g = SweepGrid {
            y_max: 2.0,
            y_steps: 5,
            x_steps: 4,
            rho_values: vec![-0.3, 0.4],
            ..SweepGrid::default()
        };
        let rep = sweep(&g, &[Method::SecondForm, Method::Series], ReferenceKind::Reduced, &quad(), &SeriesSpec::default()).unwrap();
        for s in &rep.summaries {
            let again = summarize(s.method, &rep.records);
            assert_eq!(&again, s);
            let mut rel: Vec<f64> = rep
                .records
                .iter()
                .filter(|r| r.method == s.method && !r.flags.excluded())
                .filter_map(|r| r.abs_rel_err)
                .collect();
            rel.sort_by(f64::total_cmp);
            assert_eq!(s.max_rel_err, *rel.last().unwrap());
            assert_eq!(s.median_rel_err, percentile(&rel, 0.5));
        }
    }

    #[test]
    fn product_and_reduced_references_agree_at_zero_rho() {
        let g = SweepGrid::default();
        let methods = [Method::FirstForm, Method::SecondForm, Method::Series];
        let a = sweep(&g, &methods, ReferenceKind::Product, &quad(), &SeriesSpec::default()).unwrap();
        let b = sweep(&g, &methods, ReferenceKind::Reduced, &quad(), &SeriesSpec::default()).unwrap();
        for (s, t) in a.summaries.iter().zip(&b.summaries) {
            assert!((s.max_abs_err - t.max_abs_err).abs() < 1e-8);
            assert!((s.max_rel_err - t.max_rel_err).abs() < 1e-8);
            assert!((s.median_rel_err - t.median_rel_err).abs() < 1e-8);
            assert!((s.p95_rel_err - t.p95_rel_err).abs() < 1e-8);
        }
    }

    #[test]
    fn product_reference_rejected_off_zero_rho() {
        let g = SweepGrid { rho_values: vec![0.0, 0.5], ..SweepGrid::default() };
        let err = sweep(&g, &[Method::FirstForm], ReferenceKind::Product, &quad(), &SeriesSpec::default());
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn oracle_failures_are_flagged_and_excluded() {
        let starved = QuadratureSpec { rel_tol: 1e-14, abs_tol: 1e-300, max_subdivisions: 1 };
        let g = SweepGrid { x_steps: 2, y_steps: 2, rho_values: vec![0.7], ..SweepGrid::default() };
        let rep = sweep(&g, &[Method::FirstForm], ReferenceKind::Reduced, &starved, &SeriesSpec::default()).unwrap();
        assert!(rep.records.iter().any(|r| r.flags.oracle_failed));
        let s = &rep.summaries[0];
        assert_eq!(s.n_points + s.excluded, 4);
        assert!(s.excluded > 0);
    }

    #[test]
    fn nonconverged_series_is_excluded() {
        let g = SweepGrid {
            x_min: 1.0,
            x_max: 1.0,
            x_steps: 1,
            y_min: 1.0,
            y_max: 1.0,
            y_steps: 1,
            rho_values: vec![0.3, 0.9],
        };
        let rep = sweep(&g, &[Method::Series], ReferenceKind::Reduced, &quad(), &SeriesSpec::default()).unwrap();
        assert!(!rep.records[0].flags.series_not_converged);
        assert!(rep.records[1].flags.series_not_converged);
        assert_eq!(rep.records[1].flags.labels(), "not_converged");
        assert_eq!(rep.summaries[0].n_points, 1);
        assert_eq!(rep.summaries[0].excluded, 1);
    }

    #[test]
    fn one_dimensional_profile() {
        let prof = q1_error_profile(0.0, 5.0, 101).unwrap();
        assert_eq!(prof.len(), 202);
        let at_zero_exp = prof[0];
        let at_zero_3exp = prof[101];
        assert_eq!(at_zero_exp.method, Method::Q1Exp);
        assert!((at_zero_exp.abs_err - 0.01).abs() < 1e-15);
        assert_eq!(at_zero_3exp.method, Method::Q1ThreeExp);
        assert!((at_zero_3exp.abs_err - 0.022).abs() < 1e-15);
        assert!(q1_error_profile(0.0, 5.0, 1).is_err());
    }

    #[test]
    fn one_dimensional_far_tail() {
        let prof = q1_error_profile(0.0, 6.0, 2).unwrap();
        let at_six = prof[1];
        // mpmath: 0.81154360596044665
        assert!((at_six.abs_rel_err.unwrap() - 0.811_543_605_960_446_65).abs() < 1e-12);
        let prof = q1_error_profile(-1.0, 36.0, 2).unwrap();
        assert!(prof[0].flags.out_of_domain);
        assert!(prof[1].abs_rel_err.unwrap().is_finite());
        // Q(40) underflows, so no relative error is reported
        let prof = q1_error_profile(0.0, 40.0, 2).unwrap();
        assert_eq!(prof[1].abs_rel_err, None);
        assert!(prof[1].flags.rel_suppressed);
    }

    #[test]
    fn sweep_with_one_dimensional_method_uses_x_axis() {
        let rep = sweep(&SweepGrid::default(), &[Method::Q1Exp], ReferenceKind::Auto, &quad(), &SeriesSpec::default()).unwrap();
        assert_eq!(rep.records.len(), 13);
    }

    #[test]
    fn deterministic_records() {
        let g = SweepGrid { x_steps: 5, y_steps: 5, rho_values: vec![0.0, 0.6], ..SweepGrid::default() };
        let m = [Method::FirstForm, Method::Series];
        let a = sweep(&g, &m, ReferenceKind::Auto, &quad(), &SeriesSpec::default()).unwrap();
        let b = sweep(&g, &m, ReferenceKind::Auto, &quad(), &SeriesSpec::default()).unwrap();
        assert_eq!(a, b);
    }
}
