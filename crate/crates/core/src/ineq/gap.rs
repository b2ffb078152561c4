//! Upper bounds on the trapezoid gap
//! `|(ψ(u^ρ) + ψ(v^ρ))/2 - operator average|` for functions whose `|ψ'|^q`
//! is generalized s-convex.

use crate::error::Error;
use crate::expr::Psi;
use crate::fracint::{FracParams, Interval};
use crate::math;
use crate::quad::QuadSettings;
use crate::specfun;

use super::sandwich::operator_average;
use super::{Variant, MARGIN_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// Power-mean bound with weight `|kernel| t^(ρ-1)`.
    T2,
    /// Power-mean bound with weight `t^(ρ-1)`.
    T3,
    /// Hölder bound.
    T4,
    /// Smallest of the three.
    MinM,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::T2, Theorem::T3, Theorem::T4, Theorem::MinM];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::T2 => "t2",
            Theorem::T3 => "t3",
            Theorem::T4 => "t4",
            Theorem::MinM => "min_m",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "t2" => Some(Theorem::T2),
            "t3" => Some(Theorem::T3),
            "t4" => Some(Theorem::T4),
            "min" | "min_m" => Some(Theorem::MinM),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBoundReport {
    /// Absolute trapezoid gap, from the operators.
    pub gap: f64,
    /// `>= 0`, possibly `+inf` when the Hölder factor diverges.
    pub bound: f64,
    pub theorem: Theorem,
    pub variant: Variant,
    /// `gap <= bound + quad_err + MARGIN_SLACK`.
    pub holds: bool,
    /// `(M1, M2, M3)` for [`Theorem::MinM`], before the `(v^ρ - u^ρ)/2` factor.
    pub components: Option<[f64; 3]>,
    /// Index (0-based) of the smallest component; ties within 1e-12 go to
    /// the lowest index.
    pub argmin: Option<usize>,
    pub quad_err: f64,
}

/// Signed trapezoid gap and its quadrature error estimate.
pub fn trapezoid_gap(
    psi: &Psi,
    iv: Interval,
    alpha: f64,
    rho: f64,
    settings: &QuadSettings,
) -> Result<(f64, f64), Error> {
    let (u_rho, v_rho) = iv.powered(rho);
    let avg = operator_average(psi, iv, alpha, rho, settings)?;
    Ok((0.5 * (psi.eval(u_rho)? + psi.eval(v_rho)?) - avg.value, avg.err_estimate))
}

/// Everything a bound needs besides the gap itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub fp: FracParams,
    /// `v^ρ - u^ρ`
    pub width: f64,
    /// `|ψ'(u^ρ)|`
    pub deriv_u: f64,
    /// `|ψ'(v^ρ)|`
    pub deriv_v: f64,
}

impl BoundInputs {
    pub fn new(psi: &Psi, iv: Interval, fp: &FracParams) -> Result<Self, Error> {
        let (u_rho, v_rho) = iv.powered(fp.rho);
        Ok(Self { fp: *fp, width: v_rho - u_rho, deriv_u: psi.deriv(u_rho)?.abs(), deriv_v: psi.deriv(v_rho)?.abs() })
    }

    /// `(|ψ'(u^ρ)|^q + |ψ'(v^ρ)|^q)^(1/q)`
    fn endpoint_norm(&self) -> f64 {
        let q = self.fp.q;
        math::pow(math::pow(self.deriv_u, q) + math::pow(self.deriv_v, q), 1.0 / q)
    }

    /// `β_ρ(αs+1, α+1)/ρ + 1/((α(s+1)+1)ρ)`
    fn bracket(&self) -> Result<f64, Error> {
        let FracParams { alpha, rho, s, .. } = self.fp;
        Ok(specfun::beta_rho(alpha * s + 1.0, alpha + 1.0, rho)? / rho + 1.0 / ((alpha * (s + 1.0) + 1.0) * rho))
    }

    /// The same bracket with the last term written `1/(α(s+1)ρ + 1)`, as it
    /// appears in the stated power-mean bound.
    fn bracket_t2_printed(&self) -> Result<f64, Error> {
        let FracParams { alpha, rho, s, .. } = self.fp;
        Ok(specfun::beta_rho(alpha * s + 1.0, alpha + 1.0, rho)? / rho + 1.0 / (alpha * (s + 1.0) * rho + 1.0))
    }

    /// `(∫₀¹ t^(p(ρ-1)) dt)^(1/p)`, with the `p = ∞` limit `sup t^(ρ-1)`.
    fn holder_factor(&self) -> f64 {
        let rho = self.fp.rho;
        let p = self.fp.holder_p();
        if p.is_infinite() {
            return if rho >= 1.0 { 1.0 } else { f64::INFINITY };
        }
        let denom = p * (rho - 1.0) + 1.0;
        if denom <= 0.0 {
            f64::INFINITY
        } else {
            math::pow(denom, -1.0 / p)
        }
    }

    /// Hölder bound with the weight split evaluated exactly: the second
    /// factor has no `t^(ρ-1)` and its two coefficients differ.
    fn holder_exact_factor(&self) -> Result<f64, Error> {
        let FracParams { alpha, rho, s, q, .. } = self.fp;
        let inv = 1.0 / rho;
        let coef_u = specfun::beta(alpha * s + inv, alpha + 1.0)? / rho + 1.0 / (rho * alpha * (s + 1.0) + 1.0);
        let coef_v =
            (specfun::beta(inv, alpha * (s + 1.0) + 1.0)? + specfun::beta(alpha + inv, alpha * s + 1.0)?) / rho;
        let sum = coef_u * math::pow(self.deriv_u, q) + coef_v * math::pow(self.deriv_v, q);
        Ok(math::pow(sum, 1.0 / q))
    }
}

/// `(M1, M2, M3)` for the given variant: each theorem's bound divided by
/// `(v^ρ - u^ρ)/2`.
pub fn bound_components(inputs: &BoundInputs, variant: Variant) -> Result<[f64; 3], Error> {
    let FracParams { alpha, rho, q, .. } = inputs.fp;
    let outer = (q - 1.0) / q;
    let norm = inputs.endpoint_norm();
    // The zero-derivative case is exact: every bound vanishes.
    if norm == 0.0 {
        return Ok([0.0; 3]);
    }
    let bracket = math::pow(inputs.bracket()?, 1.0 / q);
    Ok(match variant {
        Variant::AsPrinted => [
            rho * math::pow(1.0 / (rho * (alpha + 1.0)), outer) * bracket * norm,
            math::pow(1.0 / rho, outer) * bracket * norm,
            rho * inputs.holder_factor() * bracket * norm,
        ],
        Variant::DerivationConsistent => [
            rho * math::pow(2.0 / (rho * (alpha + 1.0)), outer) * bracket * norm,
            rho * math::pow(1.0 / rho, outer) * bracket * norm,
            rho * inputs.holder_factor() * inputs.holder_exact_factor()?,
        ],
    })
}

/// `(bound, components, argmin)`
type BoundParts = (f64, Option<[f64; 3]>, Option<usize>);

fn theorem_bound(theorem: Theorem, inputs: &BoundInputs, variant: Variant) -> Result<BoundParts, Error> {
    let half_width = 0.5 * inputs.width;
    if theorem == Theorem::T2 && variant == Variant::AsPrinted {
        let FracParams { alpha, rho, q, .. } = inputs.fp;
        let norm = inputs.endpoint_norm();
        if norm == 0.0 {
            return Ok((0.0, None, None));
        }
        let b = rho
            * half_width
            * math::pow(1.0 / ((alpha + 1.0) * rho), (q - 1.0) / q)
            * math::pow(inputs.bracket_t2_printed()?, 1.0 / q)
            * norm;
        return Ok((b, None, None));
    }
    let m = bound_components(inputs, variant)?;
    Ok(match theorem {
        Theorem::T2 => (half_width * m[0], None, None),
        Theorem::T3 => (half_width * m[1], None, None),
        Theorem::T4 => (half_width * m[2], None, None),
        Theorem::MinM => {
            let min = m.iter().copied().fold(f64::INFINITY, f64::min);
            let tie = 1e-12 * min.abs().max(1.0);
            let argmin = m.iter().position(|&x| x - min <= tie);
            (half_width * min, Some(m), argmin)
        }
    })
}

/// Gap and bound for one theorem and coefficient set.
pub fn gap_bound(
    theorem: Theorem,
    psi: &Psi,
    iv: Interval,
    fp: &FracParams,
    variant: Variant,
    settings: &QuadSettings,
) -> Result<GapBoundReport, Error> {
    let inputs = BoundInputs::new(psi, iv, fp)?;
    let (signed_gap, quad_err) = trapezoid_gap(psi, iv, fp.alpha, fp.rho, settings)?;
    let (bound, components, argmin) = theorem_bound(theorem, &inputs, variant)?;
    let gap = signed_gap.abs();
    Ok(GapBoundReport {
        gap,
        bound,
        theorem,
        variant,
        holds: gap <= bound + quad_err + MARGIN_SLACK,
        components,
        argmin,
        quad_err,
    })
}

pub fn gap_bound_t2(
    psi: &Psi,
    iv: Interval,
    fp: &FracParams,
    variant: Variant,
    settings: &QuadSettings,
) -> Result<GapBoundReport, Error> {
    gap_bound(Theorem::T2, psi, iv, fp, variant, settings)
}

pub fn gap_bound_t3(
    psi: &Psi,
    iv: Interval,
    fp: &FracParams,
    variant: Variant,
    settings: &QuadSettings,
) -> Result<GapBoundReport, Error> {
    gap_bound(Theorem::T3, psi, iv, fp, variant, settings)
}

pub fn gap_bound_t4(
    psi: &Psi,
    iv: Interval,
    fp: &FracParams,
    variant: Variant,
    settings: &QuadSettings,
) -> Result<GapBoundReport, Error> {
    gap_bound(Theorem::T4, psi, iv, fp, variant, settings)
}

pub fn min_bound(
    psi: &Psi,
    iv: Interval,
    fp: &FracParams,
    variant: Variant,
    settings: &QuadSettings,
) -> Result<GapBoundReport, Error> {
    gap_bound(Theorem::MinM, psi, iv, fp, variant, settings)
}
