//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhfrac_core::fracint::katugampola;
use hhfrac_core::ineq::{self, hh_sandwich, lemma_identity, Theorem, DEFAULT_SEED};
use hhfrac_core::means::{check_proposition, Proposition};
use hhfrac_core::{ConvexityCertificate, Error, FracParams, Interval, ParseError, Psi, QuadSettings, Side, Variant};

use crate::audit;
use crate::config::{Check, ConfigError, SweepConfig, DEFAULT_CERTIFY_GRID};
use crate::harness::{self, Class, LEMMA_TOL};
use crate::numfmt;
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HARD_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hhfrac", version, about = "Fractional Hermite-Hadamard checks for Katugampola integrals")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// Significant digits of numbers in printed tables.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u8).range(1..=17))]
    digits: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Absolute quadrature tolerance.
    #[arg(long, default_value = "1e-10")]
    abs_tol: f64,
    /// Relative quadrature tolerance.
    #[arg(long, default_value = "1e-10")]
    rel_tol: f64,
    /// Deepest tanh-sinh level.
    #[arg(long, default_value_t = 10)]
    max_levels: u32,
    /// Subinterval budget of the Gauss-Kronrod fallback.
    #[arg(long, default_value_t = 200)]
    fallback: u32,
}

impl TolArgs {
    fn settings(&self) -> Result<QuadSettings, CliError> {
        let s = QuadSettings {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_levels: self.max_levels,
            fallback_subdivisions: self.fallback,
        };
        s.validate().map_err(|e| CliError::Usage(format!("quadrature settings: {e}")))?;
        Ok(s)
    }
}

#[derive(Debug, Args)]
struct CertArgs {
    /// Lattice size of the convexity certificate (grid^3 lattice triples plus as many random ones).
    #[arg(long, default_value_t = DEFAULT_CERTIFY_GRID)]
    grid: usize,
    /// Seed of the random certificate samples.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct Operator {
    /// Test function: an expression in x, or power(c), recip, affine(a, b).
    #[arg(long)]
    psi: String,
    #[arg(long)]
    u: f64,
    #[arg(long)]
    v: f64,
    /// Fractional order.
    #[arg(long)]
    alpha: f64,
    /// Katugampola deformation parameter.
    #[arg(long)]
    rho: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Printed,
    Derived,
    Both,
}

impl VariantArg {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantArg::Printed => vec![Variant::AsPrinted],
            VariantArg::Derived => vec![Variant::DerivationConsistent],
            VariantArg::Both => Variant::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TheoremArg {
    T2,
    T3,
    T4,
    Min,
}

impl TheoremArg {
    fn theorem(self) -> Theorem {
        match self {
            TheoremArg::T2 => Theorem::T2,
            TheoremArg::T3 => Theorem::T3,
            TheoremArg::T4 => Theorem::T4,
            TheoremArg::Min => Theorem::MinM,
        }
    }

    fn check(self) -> Check {
        match self {
            TheoremArg::T2 => Check::T2,
            TheoremArg::T3 => Check::T3,
            TheoremArg::T4 => Check::T4,
            TheoremArg::Min => Check::MinM,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one Katugampola fractional integral.
    EvalIntegral {
        #[command(flatten)]
        op: Operator,
        #[arg(long, value_enum)]
        side: SideArg,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Evaluate the three members of the fractional Hermite-Hadamard sandwich.
    CheckHh {
        #[command(flatten)]
        op: Operator,
        /// Convexity index in (0, 1].
        #[arg(long)]
        s: f64,
        #[arg(long, value_enum, default_value_t = VariantArg::Both)]
        variant: VariantArg,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Compare the trapezoid gap with one of the gap bounds.
    CheckGap {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[command(flatten)]
        op: Operator,
        #[arg(long)]
        s: f64,
        /// Power-mean exponent, >= 1.
        #[arg(long)]
        q: f64,
        /// Hölder exponent; defaults to the conjugate of q.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_enum, default_value_t = VariantArg::Both)]
        variant: VariantArg,
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Both sides of the trapezoid identity and their residual.
    Lemma {
        #[command(flatten)]
        op: Operator,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Sample the generalized s-convexity inequality for psi on [u, v].
    Certify {
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        cert: CertArgs,
    },
    /// Evaluate one of the four mean inequalities.
    #[command(allow_negative_numbers = true)]
    Means {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        prop: u8,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
        /// Integer exponent with |r| >= 2 (propositions 1 and 2).
        #[arg(long)]
        r: Option<i32>,
        #[arg(long)]
        q: f64,
    },
    /// Run a parameter sweep from a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_csv: PathBuf,
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Recompute the published worked examples and compare member by member.
    Reproduce {
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("psi: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<hhfrac_core::DomainError> for CliError {
    fn from(e: hhfrac_core::DomainError) -> Self {
        CliError::Core(e.into())
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, usize::from(cli.digits), out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn parse_psi(text: &str) -> Result<Psi, CliError> {
    Ok(Psi::parse(text)?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cert_line(cert: &Result<ConvexityCertificate, Error>, digits: usize) -> String {
    match cert {
        Ok(c) => format!(
            "{} (worst violation {}, {} samples)",
            yes_no(c.is_certified),
            numfmt::sig(c.worst_violation, digits),
            c.samples
        ),
        Err(e) => format!("no ({e})"),
    }
}

fn dispatch(command: Command, digits: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let fmt = move |x: f64| numfmt::sig(x, digits);
    match command {
        Command::EvalIntegral { op, side, tol } => {
            let psi = parse_psi(&op.psi)?;
            let iv = Interval::new(op.u, op.v)?;
            FracParams::with_conjugate(op.alpha, op.rho, 1.0, 1.0)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let r = katugampola(side, &psi, iv, op.alpha, op.rho, &tol.settings()?)?;
            writeln!(out, "{}", fmt(r.value))?;
            writeln!(out, "err_estimate  {}", fmt(r.err_estimate))?;
            writeln!(out, "evaluations   {}", r.evaluations)?;
            Ok(EXIT_OK)
        }
        Command::CheckHh { op, s, variant, cert, tol } => {
            let psi = parse_psi(&op.psi)?;
            let iv = Interval::new(op.u, op.v)?;
            let fp = FracParams::with_conjugate(op.alpha, op.rho, s, 1.0)?;
            let settings = tol.settings()?;
            let certificate = harness::certify_for(Check::Sandwich, &psi, iv, &fp, cert.grid, cert.seed);
            let certified = certificate.as_ref().map(|c| c.is_certified).unwrap_or(false);
            writeln!(out, "psi        {psi}")?;
            writeln!(out, "certified  {}", cert_line(&certificate, digits))?;
            writeln!(
                out,
                "{:<22}  {:>14}  {:>14}  {:>14}  {:>14}  {:>14}  holds",
                "variant", "lhs", "middle", "rhs", "margin_left", "margin_right"
            )?;
            let mut code = EXIT_OK;
            let mut quad_err = 0.0;
            for v in variant.variants() {
                let r = hh_sandwich(&psi, iv, &fp, v, &settings)?;
                quad_err = r.quad_err;
                writeln!(
                    out,
                    "{:<22}  {:>14}  {:>14}  {:>14}  {:>14}  {:>14}  {}",
                    v.name(),
                    fmt(r.lhs),
                    fmt(r.middle),
                    fmt(r.rhs),
                    fmt(r.margin_left),
                    fmt(r.margin_right),
                    yes_no(r.both_hold())
                )?;
                if !r.both_hold() && certified && v == Variant::DerivationConsistent {
                    code = EXIT_HARD_VIOLATION;
                }
            }
            writeln!(out, "quad_err   {}", fmt(quad_err))?;
            Ok(code)
        }
        Command::CheckGap { theorem, op, s, q, p, variant, cert, tol } => {
            let psi = parse_psi(&op.psi)?;
            let iv = Interval::new(op.u, op.v)?;
            let fp = match p {
                Some(p) => FracParams::new(op.alpha, op.rho, s, q, Some(p))?,
                None => FracParams::with_conjugate(op.alpha, op.rho, s, q)?,
            };
            let settings = tol.settings()?;
            let certificate = harness::certify_for(theorem.check(), &psi, iv, &fp, cert.grid, cert.seed);
            let certified = certificate.as_ref().map(|c| c.is_certified).unwrap_or(false);
            writeln!(out, "psi        {psi}")?;
            writeln!(out, "theorem    {}", theorem.theorem().name())?;
            writeln!(out, "certified  {} for |psi'|^q", cert_line(&certificate, digits))?;
            writeln!(
                out,
                "{:<22}  {:>14}  {:>14}  {:>14}  {:>14}  holds",
                "variant", "gap", "bound", "margin", "quad_err"
            )?;
            let mut code = EXIT_OK;
            let mut components = Vec::new();
            for v in variant.variants() {
                let r = ineq::gap_bound(theorem.theorem(), &psi, iv, &fp, v, &settings)?;
                writeln!(
                    out,
                    "{:<22}  {:>14}  {:>14}  {:>14}  {:>14}  {}",
                    v.name(),
                    fmt(r.gap),
                    fmt(r.bound),
                    fmt(r.bound - r.gap),
                    fmt(r.quad_err),
                    yes_no(r.holds)
                )?;
                if let (Some(m), Some(i)) = (r.components, r.argmin) {
                    components.push((v, m, i));
                }
                if !r.holds && certified && v == Variant::DerivationConsistent {
                    code = EXIT_HARD_VIOLATION;
                }
            }
            for (v, m, i) in components {
                writeln!(out, "{}: M1 {} M2 {} M3 {} argmin M{}", v.name(), fmt(m[0]), fmt(m[1]), fmt(m[2]), i + 1)?;
            }
            Ok(code)
        }
        Command::Lemma { op, tol } => {
            let psi = parse_psi(&op.psi)?;
            let iv = Interval::new(op.u, op.v)?;
            FracParams::with_conjugate(op.alpha, op.rho, 1.0, 1.0)?;
            let r = lemma_identity(&psi, iv, op.alpha, op.rho, &tol.settings()?)?;
            writeln!(out, "side_a    {}", fmt(r.side_a))?;
            writeln!(out, "side_b    {}", fmt(r.side_b))?;
            writeln!(out, "residual  {}", fmt(r.residual))?;
            writeln!(out, "quad_err  {}", fmt(r.quad_err))?;
            let holds = r.residual.abs() <= LEMMA_TOL;
            writeln!(out, "holds     {}", yes_no(holds))?;
            Ok(if holds { EXIT_OK } else { EXIT_HARD_VIOLATION })
        }
        Command::Certify { psi, u, v, s, alpha, cert } => {
            let psi = parse_psi(&psi)?;
            let iv = Interval::new(u, v)?;
            let c = ineq::certify_fn(|x| Ok(psi.eval(x)?), iv, s, alpha, cert.grid, cert.seed)?;
            writeln!(out, "certified        {}", yes_no(c.is_certified))?;
            writeln!(out, "worst_violation  {}", fmt(c.worst_violation))?;
            if let Some((a, b, t)) = c.witness {
                writeln!(out, "witness          a = {}, b = {}, t = {}", fmt(a), fmt(b), fmt(t))?;
            }
            writeln!(out, "samples          {}", c.samples)?;
            Ok(EXIT_OK)
        }
        Command::Means { prop, u, v, r, q } => {
            let prop = Proposition::from_index(prop).expect("range-checked by the parser");
            let rep = check_proposition(prop, u, v, r, q)?;
            writeln!(out, "proposition  P{}", prop.index())?;
            writeln!(out, "lhs          {}", fmt(rep.lhs))?;
            writeln!(out, "bound        {}", fmt(rep.bound))?;
            writeln!(out, "margin       {}", fmt(rep.bound - rep.lhs))?;
            writeln!(out, "holds        {}", yes_no(rep.holds))?;
            Ok(if !rep.holds && prop.needs_r() { EXIT_HARD_VIOLATION } else { EXIT_OK })
        }
        Command::Sweep { config, out_csv, out_json } => {
            let cfg = SweepConfig::from_path(&config)?;
            let outcome = harness::run_sweep(&cfg);
            report::write_csv(&outcome.rows, BufWriter::new(File::create(&out_csv)?))?;
            if let Some(path) = out_json {
                let mut w = BufWriter::new(File::create(&path)?);
                report::write_json(&outcome, &mut w)?;
                w.flush()?;
            }
            writeln!(
                out,
                "{:<10}  {:>6}  {:>6}  {:>11}  {:>6}  {:>6}",
                "check", "rows", "pass", "informative", "hard", "error"
            )?;
            for (check, s) in outcome.summary() {
                writeln!(
                    out,
                    "{check:<10}  {:>6}  {:>6}  {:>11}  {:>6}  {:>6}",
                    s.rows, s.pass, s.informative, s.hard, s.error
                )?;
            }
            for v in outcome.violations.iter().filter(|v| v.row.class == Class::Hard) {
                writeln!(out, "hard violation in cell {}: {}", v.row.cell, v.command)?;
            }
            Ok(if outcome.hard_violations() > 0 { EXIT_HARD_VIOLATION } else { EXIT_OK })
        }
        Command::Reproduce { tol } => {
            let rows = audit::reproduce_examples(&tol.settings()?)?;
            write!(out, "{}", audit::render(&rows))?;
            Ok(EXIT_OK)
        }
    }
}
