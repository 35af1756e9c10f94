//! The `bivq` command-line program.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or domain error,
//! 3 oracle non-convergence (output still carries the best estimate),
//! 4 I/O error.

pub mod format;
pub mod validate;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{error_metrics, sweep, Method, ReferenceKind, SweepGrid, SweepReport, TINY_REFERENCE};
use crate::approx::{q2_approx_first, q2_approx_second};
use crate::error::Error;
use crate::oracle::{q2_craig, q2_double, q2_reduced, EvalPoint, QuadratureSpec};
use crate::series::{q2_series, SeriesResult, SeriesSpec};
use format::{aligned, csv_header, csv_row, human, human_opt, machine, machine_opt, record_fields, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    ValidationFailed = 1,
    Usage = 2,
    NonConvergence = 3,
    Io = 4,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Lib(Error::Convergence { .. }) => Exit::NonConvergence,
            CliError::Lib(_) => Exit::Usage,
            CliError::Io { .. } => Exit::Io,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bivq",
    version,
    about = "Evaluate, approximate and benchmark the two-dimensional Gaussian Q-function Q(x, y; rho)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Q(x, y; rho) at one point by one or every route.
    Eval(EvalArgs),
    /// Compare approximations with a reference over a grid.
    Sweep(SweepArgs),
    /// Report how many outer series terms each point needs.
    SeriesProfile(ProfileArgs),
    /// Run the built-in invariant suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMethod {
    Oracle,
    Series,
    First,
    Second,
    All,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, value_enum, default_value_t = EvalMethod::All)]
    pub method: EvalMethod,
    /// Relative tolerance of the quadrature oracles.
    #[arg(long, value_name = "TOL")]
    pub rel_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// MIN:MAX:STEPS
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

fn parse_range(s: &str) -> Result<AxisRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, steps] = parts[..] else {
        return Err(format!("expected MIN:MAX:STEPS, got '{s}'"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    Ok(AxisRange {
        min: num(min)?,
        max: num(max)?,
        steps: steps
            .trim()
            .parse()
            .map_err(|e| format!("steps '{steps}': {e}"))?,
    })
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Auto,
    Product,
    Reduced,
}

impl From<ReferenceArg> for ReferenceKind {
    fn from(r: ReferenceArg) -> Self {
        match r {
            ReferenceArg::Auto => ReferenceKind::Auto,
            ReferenceArg::Product => ReferenceKind::Product,
            ReferenceArg::Reduced => ReferenceKind::Reduced,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "MIN:MAX:STEPS", value_parser = parse_range, allow_hyphen_values = true, default_value = "0:3:13")]
    pub x_range: AxisRange,
    #[arg(long, value_name = "MIN:MAX:STEPS", value_parser = parse_range, allow_hyphen_values = true, default_value = "0:3:13")]
    pub y_range: AxisRange,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub rho_list: Vec<f64>,
    /// Comma-separated: series, first_form, second_form, q1_exp, q1_3exp.
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "first_form,second_form")]
    pub method: Vec<Method>,
    #[arg(long, value_enum, default_value_t = ReferenceArg::Auto)]
    pub reference: ReferenceArg,
    /// Relative tolerance of the quadrature reference.
    #[arg(long, value_name = "TOL")]
    pub rel_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with = "x_range")]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "y_range")]
    pub y: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "rho_list")]
    pub rho: Option<f64>,
    #[arg(long, value_name = "MIN:MAX:STEPS", value_parser = parse_range, allow_hyphen_values = true)]
    pub x_range: Option<AxisRange>,
    #[arg(long, value_name = "MIN:MAX:STEPS", value_parser = parse_range, allow_hyphen_values = true)]
    pub y_range: Option<AxisRange>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub rho_list: Vec<f64>,
    /// Relative truncation tolerance of the series.
    #[arg(long, value_name = "TOL")]
    pub rel_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Add a constant to every Q(x) comparison value (fault injection).
    #[arg(long, hide = true, allow_negative_numbers = true, default_value_t = 0.0)]
    pub inject_q1_offset: f64,
}

/// Rendered output and the exit status it implies.
struct Outcome {
    text: String,
    exit: Exit,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(exit) => exit.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit().into()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Exit, CliError> {
    let (outcome, out) = match &cli.command {
        Command::Eval(a) => (cmd_eval(a)?, a.output.out.as_ref()),
        Command::Sweep(a) => (cmd_sweep(a)?, a.output.out.as_ref()),
        Command::SeriesProfile(a) => (cmd_series_profile(a)?, a.output.out.as_ref()),
        Command::Validate(a) => (cmd_validate(a), None),
    };
    match out {
        Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    Ok(outcome.exit)
}

fn quad_spec(rel_tol: Option<f64>) -> Result<QuadratureSpec, Error> {
    let mut q = QuadratureSpec::default();
    if let Some(t) = rel_tol {
        q.rel_tol = t;
    }
    q.validate()?;
    Ok(q)
}

fn config_lines(quad: Option<&QuadratureSpec>, series: &SeriesSpec) -> String {
    let mut s = String::new();
    if let Some(q) = quad {
        let _ = writeln!(
            s,
            "# quadrature rel_tol = {:e}, abs_tol = {:e}, max_subdivisions = {}",
            q.rel_tol, q.abs_tol, q.max_subdivisions
        );
    }
    let _ = writeln!(
        s,
        "# series rel_tol = {:e}, consecutive_small = {}, l_max = {}",
        series.rel_tol, series.consecutive_small, series.l_max
    );
    s
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- eval

#[derive(Debug, Clone, Serialize)]
struct RouteRow {
    route: &'static str,
    value: f64,
    abs_err: f64,
    rel_err: Option<f64>,
    flags: String,
}

#[derive(Debug, Clone, Serialize)]
struct Delta {
    a: &'static str,
    b: &'static str,
    delta: f64,
}

fn cmd_eval(a: &EvalArgs) -> Result<Outcome, CliError> {
    let p = EvalPoint::new(a.x, a.y, a.rho)?;
    let quad = quad_spec(a.rel_tol)?;
    let series = SeriesSpec::default();

    let mut oracle_failed = false;
    let mut oracle = |name: &'static str, f: fn(&EvalPoint, &QuadratureSpec) -> crate::Result<f64>| {
        match f(&p, &quad) {
            Ok(v) => Ok((name, v, vec![])),
            Err(Error::Convergence { estimate, .. }) => {
                oracle_failed = true;
                Ok((name, estimate, vec!["oracle_failed"]))
            }
            Err(e) => Err(e),
        }
    };

    let reference = oracle("oracle_reduced", q2_reduced)?;
    let series_route = || -> Result<_, Error> {
        let r: SeriesResult = q2_series(&p, &series)?;
        let mut flags = vec![];
        if !r.converged {
            flags.push("not_converged");
        }
        if r.unvalidated_domain {
            flags.push("out_of_domain");
        }
        Ok(("series", r.value, flags))
    };
    let first = || ("first_form", q2_approx_first(&p), vec![]);
    let second = || ("second_form", q2_approx_second(&p), vec![]);

    let mut routes = vec![reference.clone()];
    match a.method {
        EvalMethod::Oracle => {}
        EvalMethod::Series => routes.push(series_route()?),
        EvalMethod::First => routes.push(first()),
        EvalMethod::Second => routes.push(second()),
        EvalMethod::All => {
            routes.push(oracle("oracle_double", q2_double)?);
            if p.x() > 0.0 && p.y() > 0.0 {
                routes.push(oracle("oracle_craig", q2_craig)?);
            }
            routes.push(series_route()?);
            routes.push(first());
            routes.push(second());
        }
    }

    let ref_value = reference.1;
    let rows: Vec<RouteRow> = routes
        .iter()
        .map(|(route, value, flags)| {
            let (abs_err, rel_err) = error_metrics(ref_value, *value);
            let mut flags = flags.clone();
            if rel_err.is_none() {
                flags.push("rel_suppressed");
            }
            RouteRow {
                route,
                value: *value,
                abs_err,
                rel_err,
                flags: flags.join("|"),
            }
        })
        .collect();
    let deltas: Vec<Delta> = if a.method == EvalMethod::All {
        let mut d = Vec::new();
        for (i, ri) in rows.iter().enumerate() {
            for rj in &rows[i + 1..] {
                d.push(Delta {
                    a: ri.route,
                    b: rj.route,
                    delta: ri.value - rj.value,
                });
            }
        }
        d
    } else {
        Vec::new()
    };

    let text = match a.output.format.unwrap_or(Format::Human) {
        Format::Csv => {
            let mut s = String::from("# bivq eval\n# reference = oracle_reduced\n");
            s.push_str(&config_lines(Some(&quad), &series));
            s.push_str(&csv_header());
            for r in &rows {
                s.push_str(&csv_row(&[
                    machine(p.x()),
                    machine(p.y()),
                    machine(p.rho()),
                    r.route.to_string(),
                    machine(ref_value),
                    machine(r.value),
                    machine(r.abs_err),
                    machine_opt(r.rel_err),
                    r.flags.clone(),
                ]));
            }
            for d in &deltas {
                let _ = writeln!(s, "# delta {} - {} = {}", d.a, d.b, machine(d.delta));
            }
            s
        }
        Format::Json => to_json(&json!({
            "point": p,
            "reference": "oracle_reduced",
            "quadrature": quad,
            "series": series,
            "routes": rows,
            "deltas": deltas,
        })),
        Format::Human => {
            let mut s = format!(
                "Q(x, y; rho) at x = {}, y = {}, rho = {}\n\n",
                p.x(),
                p.y(),
                p.rho()
            );
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.route.to_string(),
                        human(r.value),
                        human(r.abs_err),
                        human_opt(r.rel_err),
                        r.flags.clone(),
                    ]
                })
                .collect();
            s.push_str(&aligned(
                &["route", "value", "abs_err vs oracle_reduced", "rel_err", "flags"],
                &table,
            ));
            if !deltas.is_empty() {
                s.push('\n');
                let table: Vec<Vec<String>> = deltas
                    .iter()
                    .map(|d| vec![d.a.to_string(), d.b.to_string(), human(d.delta)])
                    .collect();
                s.push_str(&aligned(&["a", "b", "a - b"], &table));
            }
            s
        }
    };

    let exit = if oracle_failed {
        eprintln!("warning: quadrature did not converge; the best estimate is shown");
        Exit::NonConvergence
    } else {
        Exit::Ok
    };
    Ok(Outcome { text, exit })
}

// ---------------------------------------------------------------- sweep

fn range_str(r: &AxisRange) -> String {
    format!("{}:{}:{}", r.min, r.max, r.steps)
}

fn list_str(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn point_str(p: Option<EvalPoint>) -> String {
    match p {
        Some(p) => format!("({}, {}, {})", p.x(), p.y(), p.rho()),
        None => "none".into(),
    }
}

fn summary_lines(report: &SweepReport, num: fn(f64) -> String) -> String {
    let mut s = String::new();
    for m in &report.summaries {
        let _ = writeln!(
            s,
            "# summary {}: n_points = {}, excluded = {}, rel_suppressed = {}, max_abs_err = {}, \
             max_rel_err = {}, median_rel_err = {}, p95_rel_err = {}, worst_point = {}",
            m.method,
            m.n_points,
            m.excluded,
            m.rel_suppressed,
            num(m.max_abs_err),
            num(m.max_rel_err),
            num(m.median_rel_err),
            num(m.p95_rel_err),
            point_str(m.worst_point)
        );
    }
    s
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    let quad = quad_spec(a.rel_tol)?;
    let series = SeriesSpec::default();
    let grid = SweepGrid {
        x_min: a.x_range.min,
        x_max: a.x_range.max,
        x_steps: a.x_range.steps,
        y_min: a.y_range.min,
        y_max: a.y_range.max,
        y_steps: a.y_range.steps,
        rho_values: a.rho_list.clone(),
    };
    let reference: ReferenceKind = a.reference.into();
    let report = sweep(&grid, &a.method, reference, &quad, &series)?;

    let methods = a.method.iter().map(|m| m.name()).collect::<Vec<_>>().join(",");
    let mut header = format!(
        "# bivq sweep\n# x_range = {}\n# y_range = {}\n# rho_list = {}\n# methods = {}\n\
         # reference = {}\n# tiny_reference = {:e}\n",
        range_str(&a.x_range),
        range_str(&a.y_range),
        list_str(&a.rho_list),
        methods,
        reference.name(),
        TINY_REFERENCE
    );
    header.push_str(&config_lines(Some(&quad), &series));

    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = header;
            s.push_str(&csv_header());
            for r in &report.records {
                s.push_str(&csv_row(&record_fields(r)));
            }
            s.push_str(&summary_lines(&report, machine));
            s
        }
        Format::Json => to_json(&json!({
            "grid": report.grid,
            "methods": a.method,
            "reference": reference,
            "tiny_reference": TINY_REFERENCE,
            "quadrature": quad,
            "series": series,
            "records": report.records,
            "summaries": report.summaries,
        })),
        Format::Human => {
            let mut s = header;
            let rows: Vec<Vec<String>> = report
                .records
                .iter()
                .map(|r| {
                    vec![
                        human(r.point.x()),
                        human(r.point.y()),
                        human(r.point.rho()),
                        r.method.name().to_string(),
                        human(r.reference),
                        human(r.approx),
                        human(r.abs_err),
                        human_opt(r.abs_rel_err),
                        r.flags.labels(),
                    ]
                })
                .collect();
            s.push_str(&aligned(&format::CSV_COLUMNS, &rows));
            s.push_str(&summary_lines(&report, human));
            s
        }
    };

    let exit = if report.records.iter().any(|r| r.flags.oracle_failed) {
        eprintln!("warning: the reference quadrature did not converge at some points (flag oracle_failed)");
        Exit::NonConvergence
    } else {
        Exit::Ok
    };
    Ok(Outcome { text, exit })
}

// ---------------------------------------------------------------- series-profile

#[derive(Debug, Clone, Serialize)]
struct ProfileRow {
    point: EvalPoint,
    outer_terms_used: usize,
    converged: bool,
    value: f64,
    last_term_magnitude: f64,
    unvalidated_domain: bool,
}

fn axis(name: &str, single: Option<f64>, range: Option<AxisRange>) -> Result<AxisRange, Error> {
    match (single, range) {
        (_, Some(r)) => Ok(r),
        (Some(v), None) => Ok(AxisRange {
            min: v,
            max: v,
            steps: 1,
        }),
        (None, None) => Err(Error::Config(format!("give --{name} or --{name}-range"))),
    }
}

fn cmd_series_profile(a: &ProfileArgs) -> Result<Outcome, CliError> {
    let x = axis("x", a.x, a.x_range)?;
    let y = axis("y", a.y, a.y_range)?;
    let rho_values = match (a.rho, a.rho_list.is_empty()) {
        (Some(r), _) => vec![r],
        (None, false) => a.rho_list.clone(),
        (None, true) => return Err(Error::Config("give --rho or --rho-list".into()).into()),
    };
    let grid = SweepGrid {
        x_min: x.min,
        x_max: x.max,
        x_steps: x.steps,
        y_min: y.min,
        y_max: y.max,
        y_steps: y.steps,
        rho_values,
    };
    let mut spec = SeriesSpec::default();
    if let Some(t) = a.rel_tol {
        spec.rel_tol = t;
    }
    spec.validate()?;

    let rows = grid
        .points()?
        .into_iter()
        .map(|p| {
            let r = q2_series(&p, &spec)?;
            Ok(ProfileRow {
                point: p,
                outer_terms_used: r.outer_terms_used,
                converged: r.converged,
                value: r.value,
                last_term_magnitude: r.last_term_magnitude,
                unvalidated_domain: r.unvalidated_domain,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let flags = |r: &ProfileRow| {
        let mut f = vec![];
        if !r.converged {
            f.push("not_converged");
        }
        if r.unvalidated_domain {
            f.push("out_of_domain");
        }
        f.join("|")
    };

    let header = format!(
        "# bivq series-profile\n# x_range = {}\n# y_range = {}\n# rho_list = {}\n{}",
        range_str(&x),
        range_str(&y),
        list_str(&grid.rho_values),
        config_lines(None, &spec)
    );
    const COLUMNS: [&str; 8] = [
        "x",
        "y",
        "rho",
        "outer_terms_used",
        "converged",
        "value",
        "last_term_magnitude",
        "flags",
    ];
    let fields = |r: &ProfileRow, num: fn(f64) -> String| {
        vec![
            num(r.point.x()),
            num(r.point.y()),
            num(r.point.rho()),
            r.outer_terms_used.to_string(),
            r.converged.to_string(),
            num(r.value),
            num(r.last_term_magnitude),
            flags(r),
        ]
    };

    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = header;
            s.push_str(&csv_row(&COLUMNS.map(String::from)));
            for r in &rows {
                s.push_str(&csv_row(&fields(r, machine)));
            }
            s
        }
        Format::Json => to_json(&json!({ "series": spec, "rows": rows })),
        Format::Human => {
            let mut s = header;
            let table: Vec<Vec<String>> = rows.iter().map(|r| fields(r, human)).collect();
            s.push_str(&aligned(&COLUMNS, &table));
            s
        }
    };
    Ok(Outcome { text, exit: Exit::Ok })
}

// ---------------------------------------------------------------- validate

fn cmd_validate(a: &ValidateArgs) -> Outcome {
    let suites = validate::run_suites(a.inject_q1_offset);
    let passed = suites.iter().all(|s| s.passed);
    let where_ = |p: Option<[f64; 3]>| match p {
        Some([x, y, rho]) => format!("x = {x}, y = {y}, rho = {rho}"),
        None => "-".into(),
    };

    let text = match a.format.unwrap_or(Format::Human) {
        Format::Json => to_json(&json!({ "passed": passed, "suites": suites })),
        Format::Csv => {
            let mut s = csv_row(
                &["suite", "passed", "checked", "tolerance", "worst_deviation", "worst_x", "worst_y", "worst_rho", "error"]
                    .map(String::from),
            );
            for o in &suites {
                let [wx, wy, wr] = o.worst_point.map(|p| p.map(machine)).unwrap_or_default();
                s.push_str(&csv_row(&[
                    o.name.to_string(),
                    o.passed.to_string(),
                    o.checked.to_string(),
                    machine(o.tolerance),
                    machine(o.worst_deviation),
                    wx,
                    wy,
                    wr,
                    o.error.clone().unwrap_or_default().replace(',', ";"),
                ]));
            }
            s
        }
        Format::Human => {
            let mut s = String::new();
            for o in &suites {
                let status = if o.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    s,
                    "{status} {:<24} {} checks, worst {} (tolerance {:e})",
                    o.name,
                    o.checked,
                    human(o.worst_deviation),
                    o.tolerance
                );
                if !o.passed {
                    let _ = writeln!(s, "     invariant: {}", o.invariant);
                    let _ = writeln!(s, "     worst point: {}", where_(o.worst_point));
                    if let Some(e) = &o.error {
                        let _ = writeln!(s, "     error: {e}");
                    }
                }
            }
            s
        }
    };

    let exit = if passed {
        Exit::Ok
    } else {
        for o in suites.iter().filter(|o| !o.passed) {
            eprintln!(
                "validation failed: {} ({}) worst {} at {}",
                o.name,
                o.invariant,
                o.worst_deviation,
                where_(o.worst_point)
            );
        }
        Exit::ValidationFailed
    };
    Outcome { text, exit }
}
