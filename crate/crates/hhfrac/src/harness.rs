//! Parameter sweeps over the inequality checks.

use std::collections::BTreeMap;

use hhfrac_core::fracint::conjugate;
use hhfrac_core::ineq::{self, certify_fn, hh_sandwich, lemma_identity, ConvexityCertificate, Theorem};
use hhfrac_core::means::{check_proposition, Proposition};
use hhfrac_core::{Error, FracParams, Interval, Psi, QuadSettings, Variant};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Check, SweepConfig};

/// Largest accepted `|side_a - side_b|` for the trapezoid identity.
pub const LEMMA_TOL: f64 = 1e-7;

/// Environment variable that fixes the worker count of a sweep.
pub const THREADS_ENV: &str = "HHFRAC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Pass,
    /// A failure that is not expected to hold: uncertified ψ, the as-printed
    /// constants, or a statement evaluated as written.
    Informative,
    Hard,
    Error,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Pass => "pass",
            Class::Informative => "informative",
            Class::Hard => "hard",
            Class::Error => "error",
        }
    }
}

/// Row-level variant: coefficient set or proposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sub {
    None,
    Variant(Variant),
    Prop(Proposition),
}

impl Sub {
    pub fn label(self) -> String {
        match self {
            Sub::None => String::new(),
            Sub::Variant(v) => v.name().to_string(),
            Sub::Prop(p) => format!("P{}", p.index()),
        }
    }
}

/// One evaluated cell. Column meaning by check:
///
/// * `sandwich`: the three members and both margins.
/// * `lemma`: `lhs` = side a, `rhs` = side b, `middle` = residual,
///   `margin_left` = `LEMMA_TOL - |residual|`.
/// * `t2` .. `min_m`: `lhs` = gap, `rhs` = bound, `margin_right` = bound - gap.
/// * `means`: `lhs` = left side, `rhs` = bound, `margin_right` = bound - lhs.
/// * `certify`: `lhs` = worst violation, `margin_left` = its negation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub cell: usize,
    pub check: &'static str,
    pub variant: String,
    pub psi: String,
    pub u: f64,
    pub v: f64,
    pub alpha: f64,
    pub rho: f64,
    pub s: f64,
    pub q: f64,
    pub p: f64,
    pub certified: Option<bool>,
    pub lhs: Option<f64>,
    pub middle: Option<f64>,
    pub rhs: Option<f64>,
    pub margin_left: Option<f64>,
    pub margin_right: Option<f64>,
    pub quad_err: Option<f64>,
    pub holds: Option<bool>,
    pub class: Class,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationRecord {
    #[serde(flatten)]
    pub row: Row,
    /// Command line that recomputes this row.
    pub command: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub rows: usize,
    pub pass: usize,
    pub informative: usize,
    pub hard: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub rows: Vec<Row>,
    pub violations: Vec<ViolationRecord>,
}

impl SweepOutcome {
    pub fn hard_violations(&self) -> usize {
        self.violations.iter().filter(|v| v.row.class == Class::Hard).count()
    }

    pub fn summary(&self) -> BTreeMap<&'static str, CheckSummary> {
        let mut out: BTreeMap<&'static str, CheckSummary> = BTreeMap::new();
        for row in &self.rows {
            let e = out.entry(row.check).or_default();
            e.rows += 1;
            match row.class {
                Class::Pass => e.pass += 1,
                Class::Informative => e.informative += 1,
                Class::Hard => e.hard += 1,
                Class::Error => e.error += 1,
            }
        }
        out
    }
}

/// One unit of work: a check at one point of the parameter product.
#[derive(Debug, Clone, Copy)]
pub struct Task<'a> {
    pub check: Check,
    pub psi: &'a crate::config::PsiEntry,
    pub iv: Interval,
    pub alpha: f64,
    pub rho: f64,
    pub s: f64,
    pub q: f64,
    pub sub: Sub,
}

/// Tasks in canonical order: check, ψ, interval, α, ρ, s, q, then variant
/// or proposition.
pub fn tasks(cfg: &SweepConfig) -> Vec<Task<'_>> {
    let mut out = Vec::with_capacity(cfg.expected_rows());
    for &check in &cfg.checks {
        let subs: Vec<Sub> = match check {
            c if c.uses_variants() => cfg.variants.iter().map(|&v| Sub::Variant(v)).collect(),
            Check::Means => cfg.propositions.iter().map(|&p| Sub::Prop(p)).collect(),
            _ => vec![Sub::None],
        };
        for psi in &cfg.psi {
            for &iv in &cfg.intervals {
                for &alpha in &cfg.alpha {
                    for &rho in &cfg.rho {
                        for &s in &cfg.s {
                            for &q in &cfg.q {
                                for &sub in &subs {
                                    out.push(Task { check, psi, iv, alpha, rho, s, q, sub });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn run_sweep(cfg: &SweepConfig) -> SweepOutcome {
    let work = tasks(cfg);
    let eval = || -> Vec<Row> { work.par_iter().enumerate().map(|(i, t)| evaluate(cfg, i, t)).collect() };
    let threads = std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    let rows = match threads.map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build()) {
        Some(Ok(pool)) => pool.install(eval),
        _ => eval(),
    };
    let violations = rows
        .iter()
        .zip(&work)
        .filter(|(row, _)| matches!(row.class, Class::Hard | Class::Informative))
        .map(|(row, task)| ViolationRecord { row: row.clone(), command: reproduce_command(cfg, task, row) })
        .collect();
    SweepOutcome { rows, violations }
}

/// `ψ` on `[u^ρ, v^ρ]`, or `|ψ'|^q` there for the gap checks.
pub fn certify_for(
    check: Check,
    psi: &Psi,
    iv: Interval,
    fp: &FracParams,
    grid: usize,
    seed: u64,
) -> Result<ConvexityCertificate, Error> {
    let (lo, hi) = iv.powered(fp.rho);
    let domain = Interval::new(lo, hi)?;
    if matches!(check, Check::T2 | Check::T3 | Check::T4 | Check::MinM) {
        let q = fp.q;
        certify_fn(|x| Ok(psi.deriv(x)?.abs().powf(q)), domain, fp.s, fp.alpha, grid, seed)
    } else {
        certify_fn(|x| Ok(psi.eval(x)?), domain, fp.s, fp.alpha, grid, seed)
    }
}

pub fn theorem_of(check: Check) -> Option<Theorem> {
    match check {
        Check::T2 => Some(Theorem::T2),
        Check::T3 => Some(Theorem::T3),
        Check::T4 => Some(Theorem::T4),
        Check::MinM => Some(Theorem::MinM),
        _ => None,
    }
}

fn classify(holds: bool, hard_if_failed: bool) -> Class {
    match (holds, hard_if_failed) {
        (true, _) => Class::Pass,
        (false, true) => Class::Hard,
        (false, false) => Class::Informative,
    }
}

fn evaluate(cfg: &SweepConfig, cell: usize, t: &Task<'_>) -> Row {
    let psi = t.psi.resolve(t.s, t.alpha);
    let mut row = Row {
        cell,
        check: t.check.name(),
        variant: t.sub.label(),
        psi: psi.to_string(),
        u: t.iv.u,
        v: t.iv.v,
        alpha: t.alpha,
        rho: t.rho,
        s: t.s,
        q: t.q,
        p: conjugate(t.q),
        certified: None,
        lhs: None,
        middle: None,
        rhs: None,
        margin_left: None,
        margin_right: None,
        quad_err: None,
        holds: None,
        class: Class::Error,
        error: None,
    };
    if let Err(e) = fill(cfg, t, &psi, &mut row) {
        row.error = Some(e.to_string());
        row.class = Class::Error;
    }
    row
}

fn fill(cfg: &SweepConfig, t: &Task<'_>, psi: &Psi, row: &mut Row) -> Result<(), Error> {
    let fp = FracParams::with_conjugate(t.alpha, t.rho, t.s, t.q)?;
    let settings: &QuadSettings = &cfg.tol;
    let certified =
        || certify_for(t.check, psi, t.iv, &fp, cfg.certify_grid, cfg.seed).map(|c| c.is_certified).unwrap_or(false);
    match (t.check, t.sub) {
        (Check::Sandwich, Sub::Variant(variant)) => {
            let r = hh_sandwich(psi, t.iv, &fp, variant, settings)?;
            let cert = certified();
            row.certified = Some(cert);
            row.lhs = Some(r.lhs);
            row.middle = Some(r.middle);
            row.rhs = Some(r.rhs);
            row.margin_left = Some(r.margin_left);
            row.margin_right = Some(r.margin_right);
            row.quad_err = Some(r.quad_err);
            row.holds = Some(r.both_hold());
            row.class = classify(r.both_hold(), cert && variant == Variant::DerivationConsistent);
        }
        (Check::Lemma, _) => {
            let r = lemma_identity(psi, t.iv, t.alpha, t.rho, settings)?;
            let holds = r.residual.abs() <= LEMMA_TOL;
            row.lhs = Some(r.side_a);
            row.middle = Some(r.residual);
            row.rhs = Some(r.side_b);
            row.margin_left = Some(LEMMA_TOL - r.residual.abs());
            row.quad_err = Some(r.quad_err);
            row.holds = Some(holds);
            row.class = classify(holds, true);
        }
        (check, Sub::Variant(variant)) if theorem_of(check).is_some() => {
            let theorem = theorem_of(check).expect("gap check");
            let r = ineq::gap_bound(theorem, psi, t.iv, &fp, variant, settings)?;
            let cert = certified();
            row.certified = Some(cert);
            row.lhs = Some(r.gap);
            row.rhs = Some(r.bound);
            row.margin_right = Some(r.bound - r.gap);
            row.quad_err = Some(r.quad_err);
            row.holds = Some(r.holds);
            row.class = classify(r.holds, cert && variant == Variant::DerivationConsistent);
        }
        (Check::Means, Sub::Prop(prop)) => {
            let r = check_proposition(prop, t.iv.u, t.iv.v, prop.needs_r().then_some(cfg.r), t.q)?;
            row.lhs = Some(r.lhs);
            row.rhs = Some(r.bound);
            row.margin_right = Some(r.bound - r.lhs);
            row.holds = Some(r.holds);
            row.class = classify(r.holds, prop.needs_r());
        }
        (Check::Certify, _) => {
            let c = certify_for(t.check, psi, t.iv, &fp, cfg.certify_grid, cfg.seed)?;
            row.certified = Some(c.is_certified);
            row.lhs = Some(c.worst_violation);
            row.margin_left = Some(-c.worst_violation);
            row.holds = Some(c.is_certified);
            row.class = classify(c.is_certified, false);
        }
        _ => unreachable!("task built with a sub-kind that does not match its check"),
    }
    Ok(())
}

fn quote(text: &str) -> String {
    format!("'{}'", text.replace('\'', r"'\''"))
}

fn tol_flags(tol: &QuadSettings) -> String {
    format!(
        "--abs-tol {:?} --rel-tol {:?} --max-levels {} --fallback {}",
        tol.abs_tol, tol.rel_tol, tol.max_levels, tol.fallback_subdivisions
    )
}

fn variant_flag(sub: Sub) -> &'static str {
    match sub {
        Sub::Variant(Variant::AsPrinted) => "printed",
        _ => "derived",
    }
}

/// Command line for the `hhfrac` binary that recomputes one row.
pub fn reproduce_command(cfg: &SweepConfig, t: &Task<'_>, row: &Row) -> String {
    let psi = quote(&row.psi);
    let base = format!("--psi {psi} --u {:?} --v {:?} --alpha {:?} --rho {:?}", t.iv.u, t.iv.v, t.alpha, t.rho);
    let cert = format!("--grid {} --seed {}", cfg.certify_grid, cfg.seed);
    let tol = tol_flags(&cfg.tol);
    match t.check {
        Check::Sandwich => {
            format!("hhfrac --digits 17 check-hh {base} --s {:?} --variant {} {cert} {tol}", t.s, variant_flag(t.sub))
        }
        Check::Lemma => format!("hhfrac --digits 17 lemma {base} {tol}"),
        Check::T2 | Check::T3 | Check::T4 | Check::MinM => {
            let theorem = theorem_of(t.check).expect("gap check").name();
            let theorem = if theorem == "min_m" { "min" } else { theorem };
            format!(
                "hhfrac --digits 17 check-gap --theorem {theorem} {base} --s {:?} --q {:?} --variant {} {cert} {tol}",
                t.s,
                t.q,
                variant_flag(t.sub)
            )
        }
        Check::Means => {
            let prop = match t.sub {
                Sub::Prop(p) => p,
                _ => unreachable!("means task without proposition"),
            };
            let r = if prop.needs_r() { format!(" --r {}", cfg.r) } else { String::new() };
            format!(
                "hhfrac --digits 17 means --prop {} --u {:?} --v {:?}{r} --q {:?}",
                prop.index(),
                t.iv.u,
                t.iv.v,
                t.q
            )
        }
        Check::Certify => {
            let (lo, hi) = t.iv.powered(t.rho);
            format!(
                "hhfrac --digits 17 certify --psi {psi} --u {lo:?} --v {hi:?} --s {:?} --alpha {:?} {cert}",
                t.s, t.alpha
            )
        }
    }
}
