//! Recomputes the published worked examples of the fractional sandwich and
//! compares them with the printed member values.

use std::fmt;

use hhfrac_core::ineq::hh_sandwich;
use hhfrac_core::{Error, FracParams, Interval, Psi, QuadSettings, Variant};

use crate::numfmt;

/// Agreement threshold between a printed and a computed value.
pub const MATCH_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub alpha: f64,
    pub s: f64,
    pub rho: f64,
    /// Printed `(lhs, middle, rhs)`.
    pub printed: [f64; 3],
}

/// `ψ(x) = x^(sα)` on `[0, 1]`.
pub const TRIPLES: [Triple; 2] = [
    Triple { alpha: 2.0, s: 0.5, rho: 1.0, printed: [0.25, 0.333, 0.5] },
    Triple { alpha: 1.0, s: 0.5, rho: 2.0, printed: [0.35355, 0.5, 0.8] },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Member {
    Lhs,
    Middle,
    Rhs,
}

impl Member {
    pub fn name(self) -> &'static str {
        match self {
            Member::Lhs => "lhs",
            Member::Middle => "middle",
            Member::Rhs => "rhs",
        }
    }
}

/// Source of a computed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Variant(Variant),
    Quadrature,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Variant(v) => v.name(),
            Source::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRow {
    /// 1-based.
    pub triple: usize,
    pub member: Member,
    pub source: Source,
    pub printed: f64,
    pub computed: f64,
}

impl AuditRow {
    pub fn matches(&self) -> bool {
        (self.printed - self.computed).abs() <= MATCH_TOL
    }
}

impl fmt::Display for AuditRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<6}  {:<21}  paper: {} / computed: {} / status: {}",
            self.member.name(),
            self.source.name(),
            numfmt::table(self.printed),
            numfmt::table(self.computed),
            if self.matches() { "match" } else { "discrepancy" }
        )
    }
}

pub fn reproduce_examples(settings: &QuadSettings) -> Result<Vec<AuditRow>, Error> {
    let iv = Interval::new(0.0, 1.0)?;
    let mut rows = Vec::new();
    for (i, t) in TRIPLES.iter().enumerate() {
        let psi = Psi::Power(t.s * t.alpha);
        let fp = FracParams::with_conjugate(t.alpha, t.rho, t.s, 1.0)?;
        let printed = hh_sandwich(&psi, iv, &fp, Variant::AsPrinted, settings)?;
        let derived = hh_sandwich(&psi, iv, &fp, Variant::DerivationConsistent, settings)?;
        let row = |member, source, printed_value, computed| AuditRow {
            triple: i + 1,
            member,
            source,
            printed: printed_value,
            computed,
        };
        rows.push(row(Member::Lhs, Source::Variant(Variant::AsPrinted), t.printed[0], printed.lhs));
        rows.push(row(Member::Lhs, Source::Variant(Variant::DerivationConsistent), t.printed[0], derived.lhs));
        rows.push(row(Member::Middle, Source::Quadrature, t.printed[1], printed.middle));
        rows.push(row(Member::Rhs, Source::Variant(Variant::AsPrinted), t.printed[2], printed.rhs));
        rows.push(row(Member::Rhs, Source::Variant(Variant::DerivationConsistent), t.printed[2], derived.rhs));
    }
    Ok(rows)
}

/// The audit as a text table.
pub fn render(rows: &[AuditRow]) -> String {
    let mut out = String::new();
    for (i, t) in TRIPLES.iter().enumerate() {
        out.push_str(&format!(
            "triple {}: psi = x^(s*alpha), [u, v] = [0, 1], alpha = {}, s = {}, rho = {}\n",
            i + 1,
            numfmt::table(t.alpha),
            numfmt::table(t.s),
            numfmt::table(t.rho)
        ));
        for row in rows.iter().filter(|r| r.triple == i + 1) {
            out.push_str(&format!("  {row}\n"));
        }
    }
    out
}
