//! Arithmetic, logarithmic and generalized logarithmic means, and the four
//! mean inequalities obtained from the trapezoid bounds with `ψ(x) = x^r`
//! and `ψ(x) = 1/x`.

use crate::error::DomainError;
use crate::math;

fn positive(what: &'static str, x: f64) -> Result<f64, DomainError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(DomainError::new(what, x, "must be finite and > 0"))
    }
}

/// `A(u, v) = (u + v) / 2`
pub fn arithmetic_mean(u: f64, v: f64) -> Result<f64, DomainError> {
    positive("u", u)?;
    positive("v", v)?;
    Ok(0.5 * (u + v))
}

/// `L(u, v) = (v - u) / (ln v - ln u)`, with `L(u, u) = u`.
pub fn logarithmic_mean(u: f64, v: f64) -> Result<f64, DomainError> {
    positive("u", u)?;
    positive("v", v)?;
    if u == v {
        return Ok(u);
    }
    let h = (v - u) / u;
    Ok((v - u) / math::ln1p(h))
}

/// `L_r(u, v)^r = (v^(r+1) - u^(r+1)) / ((v - u)(r + 1))`.
fn gen_log_mean_pow_r(u: f64, v: f64, r: i32) -> f64 {
    let rf = f64::from(r);
    if u == v {
        return math::pow(u, rf);
    }
    // (z^(r+1) - 1)/(z - 1) with z = v/u, free of cancellation for z near 1.
    let h = (v - u) / u;
    math::pow(u, rf) * math::expm1((rf + 1.0) * math::ln1p(h)) / (h * (rf + 1.0))
}

/// `L_r(u, v) = [(v^(r+1) - u^(r+1)) / ((v - u)(r + 1))]^(1/r)` for integer
/// `r ∉ {-1, 0}`.
pub fn generalized_log_mean(u: f64, v: f64, r: i32) -> Result<f64, DomainError> {
    positive("u", u)?;
    positive("v", v)?;
    check_r(r)?;
    Ok(math::pow(gen_log_mean_pow_r(u, v, r), 1.0 / f64::from(r)))
}

fn check_r(r: i32) -> Result<(), DomainError> {
    if r == 0 || r == -1 {
        Err(DomainError::new("r", f64::from(r), "must not be 0 or -1"))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Proposition {
    /// `|A(u^r, v^r) - L_r^r|`, bound with `2^((q-1)/q + 1)` in the denominator.
    P1,
    /// `|A(u^r, v^r) - L_r^r|`, bound with `2` in the denominator.
    P2,
    /// `|A(1/u, 1/v) - L(u, v)|`, bound with `2^((q-1)/q + 1)` in the denominator.
    P3,
    /// `|A(1/u, 1/v) - L(u, v)|`, bound with `2` in the denominator.
    P4,
}

impl Proposition {
    pub const ALL: [Proposition; 4] = [Proposition::P1, Proposition::P2, Proposition::P3, Proposition::P4];

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Proposition::P1),
            2 => Some(Proposition::P2),
            3 => Some(Proposition::P3),
            4 => Some(Proposition::P4),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Proposition::P1 => 1,
            Proposition::P2 => 2,
            Proposition::P3 => 3,
            Proposition::P4 => 4,
        }
    }

    pub fn needs_r(self) -> bool {
        matches!(self, Proposition::P1 | Proposition::P2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeansReport {
    pub lhs: f64,
    pub bound: f64,
    pub proposition: Proposition,
    /// `lhs <= bound + 1e-12`
    pub holds: bool,
}

/// Evaluates one proposition exactly as stated; `r` is required for P1/P2
/// and ignored otherwise.
pub fn check_proposition(
    prop: Proposition,
    u: f64,
    v: f64,
    r: Option<i32>,
    q: f64,
) -> Result<MeansReport, DomainError> {
    positive("u", u)?;
    positive("v", v)?;
    if v <= u {
        return Err(DomainError::new("v", v, "must be > u"));
    }
    if !(q.is_finite() && q >= 1.0) {
        return Err(DomainError::new("q", q, "must be finite and >= 1"));
    }
    let outer = (q - 1.0) / q + 1.0;
    let (lhs, bound) = match prop {
        Proposition::P1 | Proposition::P2 => {
            let r = r.ok_or(DomainError::new("r", f64::NAN, "is required for propositions 1 and 2"))?;
            if r.abs() < 2 {
                return Err(DomainError::new("r", f64::from(r), "must satisfy |r| >= 2"));
            }
            let rf = f64::from(r);
            let lhs = (arithmetic_mean(math::pow(u, rf), math::pow(v, rf))? - gen_log_mean_pow_r(u, v, r)).abs();
            let e = q * (rf - 1.0);
            let mean = math::pow(arithmetic_mean(math::pow(u, e), math::pow(v, e))?, 1.0 / q);
            let denom = if prop == Proposition::P1 { math::pow(2.0, outer) } else { 2.0 };
            (lhs, (v - u) * rf.abs() / denom * mean)
        }
        Proposition::P3 | Proposition::P4 => {
            let lhs = (arithmetic_mean(1.0 / u, 1.0 / v)? - logarithmic_mean(u, v)?).abs();
            let e = -2.0 * q;
            let mean = math::pow(arithmetic_mean(math::pow(u, e), math::pow(v, e))?, 1.0 / q);
            let denom = if prop == Proposition::P3 { math::pow(2.0, outer) } else { 2.0 };
            (lhs, (v - u) / denom * mean)
        }
    };
    Ok(MeansReport { lhs, bound, proposition: prop, holds: lhs <= bound + 1e-12 })
}
