//! Number rendering and table layout shared by the subcommands.

use std::fmt::Write as _;

use clap::ValueEnum;

use crate::analysis::ErrorRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Human,
}

/// Column order of every error table.
pub const CSV_COLUMNS: [&str; 9] = [
    "x", "y", "rho", "method", "reference", "value", "abs_err", "rel_err", "flags",
];

/// 17 significant digits, which round-trips every finite double.
pub fn machine(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn machine_opt(v: Option<f64>) -> String {
    v.map(machine).unwrap_or_default()
}

/// 10 significant digits, positional notation for moderate magnitudes.
pub fn human(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (9 - exp) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.9e}")
    }
}

pub fn human_opt(v: Option<f64>) -> String {
    v.map(human).unwrap_or_else(|| "-".into())
}

/// One CSV data row. Fields never contain commas, so no quoting is needed.
pub fn csv_row(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

pub fn csv_header() -> String {
    csv_row(&CSV_COLUMNS.map(String::from))
}

pub fn record_fields(r: &ErrorRecord) -> Vec<String> {
    vec![
        machine(r.point.x()),
        machine(r.point.y()),
        machine(r.point.rho()),
        r.method.name().to_string(),
        machine(r.reference),
        machine(r.approx),
        machine(r.abs_err),
        machine_opt(r.abs_rel_err),
        r.flags.labels(),
    ]
}

/// Left-aligned columns separated by two spaces.
pub fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (cell, w) in cells.iter().zip(&widths) {
            let _ = write!(s, "{cell:<w$}  ");
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}
