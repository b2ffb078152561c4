//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every tolerance is a named constant below.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hhfrac::audit::{self, Member, Source};
use hhfrac::config::SweepConfig;
use hhfrac::harness::run_sweep;
use hhfrac_core::fracint::katugampola;
use hhfrac_core::ineq::{gap_bound, hh_sandwich, lemma_identity, Theorem};
use hhfrac_core::means::{arithmetic_mean, check_proposition, generalized_log_mean, Proposition};
use hhfrac_core::specfun::beta_rho;
use hhfrac_core::{Expr, FracParams, Interval, Psi, QuadSettings, Side, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXAMPLE_MEMBER_TOL: f64 = 1e-9;
const EXAMPLE_MIDDLE_TOL: f64 = 1e-8;
const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);

const LEMMA_TOL: f64 = 1e-7;
const LEMMA_BUDGET: Duration = Duration::from_secs(30);

const MARGIN_SLACK: f64 = 1e-9;
const SANDWICH_BUDGET: Duration = Duration::from_secs(120);

const CLASSICAL_TOL: f64 = 1e-10;
const RL_TOL: f64 = 1e-8;
const BETA_COLLAPSE_TOL: f64 = 1e-8;
const REDUCTION_TOL: f64 = 1e-10;
const AD_REL_TOL: f64 = 1e-5;
const L1_TOL: f64 = 1e-13;
const MEANS_SLACK: f64 = 1e-12;

const STANDARD_GRID: &str = r#"
psi = ["power(s*alpha)", "x^2", "x"]
alpha = [0.5, 1, 2]
rho = [0.5, 1, 2]
s = [0.5, 1]
intervals = [[0, 1], [1, 3]]
variants = ["derivation_consistent"]
seed = 20240607
certify_grid = 16
"#;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn settings() -> QuadSettings {
    QuadSettings::default()
}

/// `Γ(x)` for `x` a positive integer or half-integer.
fn gamma_half_integer(x: f64) -> f64 {
    let mut acc = if x.fract() == 0.0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut y = if x.fract() == 0.0 { 1.0 } else { 0.5 };
    while y < x - 0.25 {
        acc *= y;
        y += 1.0;
    }
    acc
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let psi = Psi::Power(1.0);
    let fp = FracParams::with_conjugate(2.0, 1.0, 0.5, 1.0).unwrap();
    let r = hh_sandwich(&psi, unit(), &fp, Variant::AsPrinted, &settings()).map_err(|e| e.to_string())?;
    ensure((r.lhs - 0.25).abs() <= EXAMPLE_MEMBER_TOL, || format!("lhs {}", r.lhs))?;
    ensure((r.rhs - 0.5).abs() <= EXAMPLE_MEMBER_TOL, || format!("rhs {}", r.rhs))?;
    // Γ(3)/2 · (∫(1-t)t dt + ∫t·t dt), with Γ(3)/2 = 1
    let oracle = 1.0 / 6.0 + 1.0 / 3.0;
    ensure((r.middle - oracle).abs() <= EXAMPLE_MIDDLE_TOL, || format!("middle {}", r.middle))?;
    let rows = audit::reproduce_examples(&settings()).map_err(|e| e.to_string())?;
    let mid = rows
        .iter()
        .find(|a| a.triple == 1 && a.member == Member::Middle && a.source == Source::Quadrature)
        .ok_or("no middle row")?;
    ensure(!mid.matches() && mid.printed == 0.333, || "printed 0.333 not flagged".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < EXAMPLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("lhs {}, middle {}, rhs {}, 0.333 flagged", r.lhs, r.middle, r.rhs))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let iv = Interval::new(0.5, 2.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for text in ["x^2", "x^3", "exp(x)", "1/x"] {
        let psi = Psi::parse(text).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            for rho in [0.5, 1.0, 2.0] {
                let r = lemma_identity(&psi, iv, alpha, rho, &settings())
                    .map_err(|e| format!("{text} {alpha} {rho}: {e}"))?;
                ensure(r.residual.abs() <= LEMMA_TOL, || format!("{text} α={alpha} ρ={rho}: residual {}", r.residual))?;
                worst = worst.max(r.residual.abs());
                cells += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(cells == 36, || format!("{cells} cells"))?;
    ensure(elapsed < LEMMA_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("36 cells, max |residual| {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cfg =
        SweepConfig::from_toml(&format!("{STANDARD_GRID}\nchecks = [\"sandwich\"]\n")).map_err(|e| e.to_string())?;
    let out = run_sweep(&cfg);
    let mut certified = 0;
    for row in &out.rows {
        ensure(row.error.is_none(), || format!("cell {} errored: {:?}", row.cell, row.error))?;
        if row.certified != Some(true) {
            continue;
        }
        certified += 1;
        let slack = -(row.quad_err.unwrap() + MARGIN_SLACK);
        ensure(row.margin_left.unwrap() >= slack && row.margin_right.unwrap() >= slack, || {
            format!(
                "cell {} ({}, α={}, ρ={}, s={}, [{}, {}]) margins {:?} {:?}",
                row.cell, row.psi, row.alpha, row.rho, row.s, row.u, row.v, row.margin_left, row.margin_right
            )
        })?;
    }
    ensure(certified > 0, || "no certified cells".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < SANDWICH_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{certified} of {} cells certified, all margins within slack", out.rows.len()))
}

fn criterion_4() -> Outcome {
    let psi = Psi::parse("x^2").unwrap();
    let fp = FracParams::with_conjugate(1.0, 1.0, 1.0, 1.0).unwrap();
    for variant in Variant::ALL {
        let r = hh_sandwich(&psi, unit(), &fp, variant, &settings()).map_err(|e| e.to_string())?;
        for (got, want) in [(r.lhs, 0.25), (r.middle, 1.0 / 3.0), (r.rhs, 0.5)] {
            ensure((got - want).abs() <= CLASSICAL_TOL, || format!("{variant}: {got} vs {want}"))?;
        }
    }
    Ok("members 0.25, 1/3, 0.5 for both variants".into())
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for c in 0..=3 {
        let psi = Psi::parse(&format!("x^{c}")).unwrap();
        for alpha in [0.5, 1.0, 1.5, 2.0] {
            let got = katugampola(Side::Left, &psi, unit(), alpha, 1.0, &settings()).map_err(|e| e.to_string())?.value;
            let want = gamma_half_integer(c as f64 + 1.0) / gamma_half_integer(c as f64 + 1.0 + alpha);
            worst = worst.max((got - want).abs());
            ensure((got - want).abs() <= RL_TOL, || format!("c={c} α={alpha}: {got} vs {want}"))?;
        }
    }
    Ok(format!("16 monomial cases, max error {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let vals = [0.5, 1.0, 2.0, 5.0];
    let mut worst: f64 = 0.0;
    for a in vals {
        for b in vals {
            let want = gamma_half_integer(a) * gamma_half_integer(b) / gamma_half_integer(a + b);
            for rho in [0.5, 1.0, 2.0, 3.0] {
                let got = beta_rho(a, b, rho).map_err(|e| format!("{a} {b} {rho}: {e}"))?;
                worst = worst.max((got - want).abs());
                ensure((got - want).abs() <= BETA_COLLAPSE_TOL, || format!("a={a} b={b} ρ={rho}: {got} vs {want}"))?;
            }
        }
    }
    Ok(format!("64 cases, max error {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let cfg =
        SweepConfig::from_toml(&format!("{STANDARD_GRID}\nq = [1, 2]\nchecks = [\"t2\", \"t3\", \"t4\", \"min_m\"]\n"))
            .map_err(|e| e.to_string())?;
    let out = run_sweep(&cfg);
    let (mut certified, mut errors) = (0, 0);
    for row in &out.rows {
        if row.error.is_some() {
            errors += 1;
            continue;
        }
        if row.certified != Some(true) {
            continue;
        }
        certified += 1;
        ensure(row.holds == Some(true), || {
            format!(
                "{} cell {} ({}, α={}, ρ={}, s={}, q={}): gap {:?} bound {:?}",
                row.check, row.cell, row.psi, row.alpha, row.rho, row.s, row.q, row.lhs, row.rhs
            )
        })?;
    }
    ensure(certified > 0, || "no certified cells".into())?;

    // Reductions at ρ = s = α = 1.
    for text in ["x^2", "exp(x)", "x^3"] {
        let psi = Psi::parse(text).unwrap();
        for (u, v) in [(0.0, 1.0), (0.5, 2.0)] {
            let iv = Interval::new(u, v).unwrap();
            let (du, dv) = (psi.deriv(u).unwrap().abs(), psi.deriv(v).unwrap().abs());
            for q in [1.0, 2.0, 3.0] {
                let fp = FracParams::with_conjugate(1.0, 1.0, 1.0, q).unwrap();
                for variant in Variant::ALL {
                    if q == 1.0 {
                        let want = (v - u) / 2.0 * (du + dv) / 2.0;
                        let got = gap_bound(Theorem::T2, &psi, iv, &fp, variant, &settings())
                            .map_err(|e| e.to_string())?
                            .bound;
                        ensure((got - want).abs() <= REDUCTION_TOL, || {
                            format!("T2 {text} [{u},{v}] {variant}: {got} vs {want}")
                        })?;
                    }
                    let want = (v - u) / 2.0 * ((du.powf(q) + dv.powf(q)) / 2.0).powf(1.0 / q);
                    let got =
                        gap_bound(Theorem::T3, &psi, iv, &fp, variant, &settings()).map_err(|e| e.to_string())?.bound;
                    ensure((got - want).abs() <= REDUCTION_TOL, || {
                        format!("T3 {text} [{u},{v}] q={q} {variant}: {got} vs {want}")
                    })?;
                }
            }
        }
    }
    Ok(format!("{certified} certified rows hold ({errors} rows with non-differentiable psi skipped), reductions match"))
}

/// Richardson-extrapolated central difference.
fn central_difference(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-3 * x.abs().max(1.0);
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

const AD_CORPUS: [(&str, f64, f64); 20] = [
    ("x^2", -3.0, 3.0),
    ("x^3 - 2*x", -2.0, 2.0),
    ("exp(x)", -2.0, 2.0),
    ("ln(x)", 0.1, 5.0),
    ("sqrt(x)", 0.1, 4.0),
    ("abs(x)", 0.1, 3.0),
    ("1/x", 0.2, 4.0),
    ("exp(-x^2)", -2.0, 2.0),
    ("x^2.5", 0.1, 3.0),
    ("2^x", -2.0, 2.0),
    ("x^x", 0.2, 3.0),
    ("ln(1 + x^2)", -3.0, 3.0),
    ("sqrt(1 + x^2)", -3.0, 3.0),
    ("x*exp(-x)", 0.0, 5.0),
    ("(x^2 + 1)/(x - 5)", -3.0, 3.0),
    ("exp(sqrt(x))", 0.1, 4.0),
    ("ln(ln(x + 3))", 0.0, 3.0),
    ("pow(x, 3)/(1 + abs(x))", 0.1, 3.0),
    ("x^(-1.5)", 0.2, 3.0),
    ("exp(x)*ln(x)", 0.2, 3.0),
];

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    for (text, lo, hi) in AD_CORPUS {
        let e = Expr::parse(text).map_err(|err| format!("{text}: {err}"))?;
        let f = |x: f64| e.eval(x).unwrap();
        for i in 0..100 {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / 100.0;
            let ad = e.eval_dual(x).map_err(|err| format!("{text} at {x}: {err}"))?.deriv;
            let fd = central_difference(&f, x);
            let rel = (ad - fd).abs() / ad.abs().max(1.0);
            worst = worst.max(rel);
            ensure(rel <= AD_REL_TOL, || format!("{text} at {x}: {ad} vs {fd}"))?;
        }
    }
    Ok(format!("2000 points, max relative error {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let u: f64 = rng.random_range(1e-3..100.0);
        let v: f64 = rng.random_range(1e-3..100.0);
        let l1 = generalized_log_mean(u, v, 1).map_err(|e| e.to_string())?;
        let a = arithmetic_mean(u, v).map_err(|e| e.to_string())?;
        ensure((l1 - a).abs() <= L1_TOL * a.max(1.0), || format!("L_1({u}, {v}) = {l1} vs A = {a}"))?;
    }

    let mut points: Vec<f64> = vec![0.01, 0.1, 0.5, 1.0, 2.5, 5.0, 7.5, 10.0];
    points.extend((0..12).map(|_| rng.random_range(1e-3..=10.0)));
    let (mut p12, mut p34_hold, mut p34_fail) = (0, 0, 0);
    for &u in &points {
        for &v in &points {
            if v <= u {
                continue;
            }
            for q in [1.0, 1.5, 2.0] {
                for r in [-4, -3, -2, 2, 3, 4] {
                    for prop in [Proposition::P1, Proposition::P2] {
                        let rep = check_proposition(prop, u, v, Some(r), q).map_err(|e| e.to_string())?;
                        ensure(rep.lhs <= rep.bound + MEANS_SLACK, || {
                            format!("{prop:?} u={u} v={v} r={r} q={q}: {rep:?}")
                        })?;
                        p12 += 1;
                    }
                }
                for prop in [Proposition::P3, Proposition::P4] {
                    let rep = check_proposition(prop, u, v, None, q).map_err(|e| e.to_string())?;
                    if rep.holds {
                        p34_hold += 1;
                    } else {
                        p34_fail += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "L_1 = A on 1000 pairs; {p12} P1/P2 cases hold; P3/P4 as stated: {p34_hold} hold, {p34_fail} fail (recorded)"
    ))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("sweep.toml");
    std::fs::write(
        &config,
        format!("{STANDARD_GRID}\nq = [1, 2]\nchecks = [\"sandwich\", \"lemma\", \"t3\", \"min_m\", \"certify\"]\n")
            .replace(
                "variants = [\"derivation_consistent\"]",
                "variants = [\"as_printed\", \"derivation_consistent\"]",
            ),
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("run{i}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_hhfrac"))
            .args(["sweep", "--config", config.to_str().unwrap(), "--out-csv", csv.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.code() == Some(0), || {
            format!("sweep exited {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr))
        })?;
        outputs.push(std::fs::read(&csv).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "CSV outputs differ".into())?;
    let lines = outputs[0].iter().filter(|&&b| b == b'\n').count();
    Ok(format!("two runs byte-identical ({lines} lines)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("worked example (as-printed constants)", criterion_1),
        ("trapezoid identity residual", criterion_2),
        ("sandwich on certified standard grid", criterion_3),
        ("classical reduction", criterion_4),
        ("Riemann-Liouville monomials", criterion_5),
        ("rho-beta collapse", criterion_6),
        ("gap bounds and reductions", criterion_7),
        ("forward-mode derivatives", criterion_8),
        ("special means", criterion_9),
        ("sweep determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
