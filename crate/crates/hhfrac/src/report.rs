//! CSV and JSON output of sweep results.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::harness::{CheckSummary, Row, SweepOutcome, ViolationRecord};
use crate::numfmt;

pub const CSV_COLUMNS: [&str; 21] = [
    "cell",
    "check",
    "variant",
    "psi",
    "u",
    "v",
    "alpha",
    "rho",
    "s",
    "q",
    "p",
    "certified",
    "lhs",
    "middle",
    "rhs",
    "margin_left",
    "margin_right",
    "quad_err",
    "holds",
    "class",
    "error",
];

fn opt_f(x: Option<f64>) -> String {
    x.map(numfmt::file).unwrap_or_default()
}

fn opt_b(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

fn csv_record(row: &Row) -> [String; 21] {
    [
        row.cell.to_string(),
        row.check.to_string(),
        row.variant.clone(),
        row.psi.clone(),
        numfmt::file(row.u),
        numfmt::file(row.v),
        numfmt::file(row.alpha),
        numfmt::file(row.rho),
        numfmt::file(row.s),
        numfmt::file(row.q),
        numfmt::file(row.p),
        opt_b(row.certified),
        opt_f(row.lhs),
        opt_f(row.middle),
        opt_f(row.rhs),
        opt_f(row.margin_left),
        opt_f(row.margin_right),
        opt_f(row.quad_err),
        opt_b(row.holds),
        row.class.name().to_string(),
        row.error.clone().unwrap_or_default(),
    ]
}

/// One line per row in a fixed column order, floats to 17 significant digits.
pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.write_record(csv_record(row))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    summary: BTreeMap<&'static str, CheckSummary>,
    checks: BTreeMap<&'static str, Vec<&'a Row>>,
    violations: &'a [ViolationRecord],
}

/// Rows grouped by check, with per-check counts and the violation list.
pub fn write_json<W: Write>(outcome: &SweepOutcome, out: W) -> serde_json::Result<()> {
    let mut checks: BTreeMap<&'static str, Vec<&Row>> = BTreeMap::new();
    for row in &outcome.rows {
        checks.entry(row.check).or_default().push(row);
    }
    let report = JsonReport { summary: outcome.summary(), checks, violations: &outcome.violations };
    serde_json::to_writer_pretty(out, &report)
}
