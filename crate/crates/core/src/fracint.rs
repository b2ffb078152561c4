//! Left and right Katugampola fractional integrals.
//!
//! Both operators integrate `ψ(t^ρ)` against the kernel over `t ∈ (u, v)`:
//!
//! ```text
//! left  = ρ^(1-α)/Γ(α) ∫_u^v (v^ρ - t^ρ)^(α-1) t^(ρ-1) ψ(t^ρ) dt
//! right = ρ^(1-α)/Γ(α) ∫_u^v (t^ρ - u^ρ)^(α-1) t^(ρ-1) ψ(t^ρ) dt
//! ```
//!
//! so `ψ` is sampled on `[u^ρ, v^ρ]`. For `α < 1` the kernel is singular at
//! one end and for `ρ < 1` the factor `t^(ρ-1)` is singular at `t = 0`; the
//! kernel differences are formed from exact endpoint distances.

use crate::error::{DomainError, Error};
use crate::expr::Psi;
use crate::math;
use crate::quad::{self, Node, QuadResult, QuadSettings};
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// The operator anchored at `u`, evaluated at `v^ρ`.
    Left,
    /// The operator anchored at `v`, evaluated at `u^ρ`.
    Right,
}

/// `0 <= u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub u: f64,
    pub v: f64,
}

impl Interval {
    pub fn new(u: f64, v: f64) -> Result<Self, DomainError> {
        if !(u.is_finite() && u >= 0.0) {
            return Err(DomainError::new("u", u, "must be finite and >= 0"));
        }
        if !(v.is_finite() && v > u) {
            return Err(DomainError::new("v", v, "must be finite and > u"));
        }
        Ok(Self { u, v })
    }

    /// `(u^ρ, v^ρ)`: the interval on which ψ is sampled.
    pub fn powered(&self, rho: f64) -> (f64, f64) {
        (math::pow_nonneg(self.u, rho), math::pow(self.v, rho))
    }

    pub fn width(&self) -> f64 {
        self.v - self.u
    }
}

/// Order, deformation, convexity index and the exponents of the gap bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    pub alpha: f64,
    pub rho: f64,
    /// Convexity index in `(0, 1]`.
    pub s: f64,
    /// Power-mean exponent, `>= 1`.
    pub q: f64,
    /// Hölder conjugate of `q`; `+inf` when `q = 1`.
    pub p: Option<f64>,
}

impl FracParams {
    pub fn new(alpha: f64, rho: f64, s: f64, q: f64, p: Option<f64>) -> Result<Self, DomainError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(DomainError::new("alpha", alpha, "must be finite and > 0"));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(DomainError::new("rho", rho, "must be finite and > 0"));
        }
        if !(s > 0.0 && s <= 1.0) {
            return Err(DomainError::new("s", s, "must lie in (0, 1]"));
        }
        if !(q.is_finite() && q >= 1.0) {
            return Err(DomainError::new("q", q, "must be finite and >= 1"));
        }
        if let Some(p) = p {
            if p.is_nan() || p <= 1.0 {
                return Err(DomainError::new("p", p, "must be > 1"));
            }
            if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
                return Err(DomainError::new("p", p, "must satisfy 1/p + 1/q = 1"));
            }
        }
        Ok(Self { alpha, rho, s, q, p })
    }

    /// Parameters with `p` set to the conjugate of `q`.
    pub fn with_conjugate(alpha: f64, rho: f64, s: f64, q: f64) -> Result<Self, DomainError> {
        Self::new(alpha, rho, s, q, None).and_then(|fp| Self::new(alpha, rho, s, q, Some(conjugate(fp.q))))
    }

    /// `p`, defaulting to the conjugate of `q`.
    pub fn holder_p(&self) -> f64 {
        self.p.unwrap_or_else(|| conjugate(self.q))
    }
}

/// `q / (q - 1)`, with `+inf` at `q = 1`.
pub fn conjugate(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else {
        q / (q - 1.0)
    }
}

fn check_order(alpha: f64, rho: f64) -> Result<(), DomainError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(DomainError::new("alpha", alpha, "must be finite and > 0"));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(DomainError::new("rho", rho, "must be finite and > 0"));
    }
    Ok(())
}

/// `v^ρ - (v - d)^ρ` for `0 <= d <= v`.
fn drop_from_top(v: f64, d: f64, rho: f64) -> f64 {
    -math::pow(v, rho) * math::expm1(rho * math::ln1p(-d / v))
}

/// `(u + d)^ρ - u^ρ` for `d >= 0`.
fn rise_from_bottom(u: f64, d: f64, rho: f64) -> f64 {
    if u == 0.0 {
        math::pow(d, rho)
    } else {
        math::pow(u, rho) * math::expm1(rho * math::ln1p(d / u))
    }
}

/// Katugampola operator of order `alpha` and deformation `rho`.
pub fn katugampola(
    side: Side,
    psi: &Psi,
    iv: Interval,
    alpha: f64,
    rho: f64,
    settings: &QuadSettings,
) -> Result<QuadResult, Error> {
    check_order(alpha, rho)?;
    let iv = Interval::new(iv.u, iv.v)?;
    let coef = math::exp((1.0 - alpha) * math::ln(rho) - specfun::ln_gamma(alpha)?);
    let (u, v) = (iv.u, iv.v);
    let (u_rho, v_rho) = iv.powered(rho);

    let integrand = |n: Node| -> Result<f64, Error> {
        let t = n.x;
        let kernel_base = match side {
            Side::Left => drop_from_top(v, n.from_right, rho),
            Side::Right => rise_from_bottom(u, n.from_left, rho),
        };
        let mut weight = math::pow_nonneg(kernel_base, alpha - 1.0) * math::pow_nonneg(t, rho - 1.0);
        if !weight.is_finite() && side == Side::Right && u == 0.0 {
            // t^(ρ(α-1)) t^(ρ-1) with t^ρ underflowing: combine the exponents.
            weight = math::exp((rho * alpha - 1.0) * math::ln(t));
        }
        // ψ is sampled at t^ρ; near an end, rebuild t^ρ from the exact offset.
        let t_rho = if n.from_right < n.from_left {
            v_rho - drop_from_top(v, n.from_right, rho)
        } else {
            u_rho + rise_from_bottom(u, n.from_left, rho)
        };
        Ok(weight * psi.eval(t_rho)?)
    };
    let r = quad::try_integrate_nodes(integrand, u, v, settings)?;
    Ok(r.scaled(coef))
}

/// Riemann–Liouville integral: the Katugampola operator at `ρ = 1`.
pub fn riemann_liouville(
    side: Side,
    psi: &Psi,
    iv: Interval,
    alpha: f64,
    settings: &QuadSettings,
) -> Result<QuadResult, Error> {
    katugampola(side, psi, iv, alpha, 1.0, settings)
}
