use crate::error::Error;
use crate::expr::Psi;
use crate::fracint::{katugampola, FracParams, Interval, Side};
use crate::math;
use crate::quad::{self, Node, QuadResult, QuadSettings};
use crate::specfun;

use super::{Variant, MARGIN_SLACK};

/// The three members `lhs <= middle <= rhs` of the fractional
/// Hermite–Hadamard inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichReport {
    pub lhs: f64,
    pub middle: f64,
    pub rhs: f64,
    pub variant: Variant,
    /// `middle - lhs`
    pub margin_left: f64,
    /// `rhs - middle`
    pub margin_right: f64,
    /// `(lhs <= middle, middle <= rhs)` up to `quad_err + MARGIN_SLACK`.
    pub holds: (bool, bool),
    pub quad_err: f64,
}

impl SandwichReport {
    pub fn both_hold(&self) -> bool {
        self.holds.0 && self.holds.1
    }
}

/// `ρ^α Γ(α+1) / (2 (v^ρ - u^ρ)^α) · [left + right]`, the normalised
/// operator average.
pub fn operator_average(
    psi: &Psi,
    iv: Interval,
    alpha: f64,
    rho: f64,
    settings: &QuadSettings,
) -> Result<QuadResult, Error> {
    let left = katugampola(Side::Left, psi, iv, alpha, rho, settings)?;
    let right = katugampola(Side::Right, psi, iv, alpha, rho, settings)?;
    let (u_rho, v_rho) = iv.powered(rho);
    let coef =
        0.5 * math::exp(alpha * math::ln(rho) + specfun::ln_gamma(alpha + 1.0)? - alpha * math::ln(v_rho - u_rho));
    Ok(QuadResult {
        value: coef * (left.value + right.value),
        err_estimate: coef * (left.err_estimate + right.err_estimate),
        evaluations: left.evaluations + right.evaluations,
    })
}

/// Constants `(C_L, C_R)` of the outer members.
fn sandwich_constants(fp: &FracParams, variant: Variant) -> Result<(f64, f64), Error> {
    let FracParams { alpha, rho, s, .. } = *fp;
    let beta_term = alpha * specfun::beta(alpha, alpha * s + 1.0)?;
    Ok(match variant {
        Variant::AsPrinted => (math::pow(2.0, alpha * (s - 1.0)), 1.0 / (rho * (1.0 + s)) + beta_term),
        Variant::DerivationConsistent => (math::pow(2.0, alpha * s - 1.0), 1.0 / (1.0 + s) + beta_term),
    })
}

pub fn hh_sandwich(
    psi: &Psi,
    iv: Interval,
    fp: &FracParams,
    variant: Variant,
    settings: &QuadSettings,
) -> Result<SandwichReport, Error> {
    let (u_rho, v_rho) = iv.powered(fp.rho);
    let (c_left, c_right) = sandwich_constants(fp, variant)?;
    let lhs = c_left * psi.eval(0.5 * (u_rho + v_rho))?;
    let avg = operator_average(psi, iv, fp.alpha, fp.rho, settings)?;
    let rhs = c_right * 0.5 * (psi.eval(u_rho)? + psi.eval(v_rho)?);
    let middle = avg.value;
    let margin_left = middle - lhs;
    let margin_right = rhs - middle;
    let slack = avg.err_estimate + MARGIN_SLACK;
    Ok(SandwichReport {
        lhs,
        middle,
        rhs,
        variant,
        margin_left,
        margin_right,
        holds: (margin_left >= -slack, margin_right >= -slack),
        quad_err: avg.err_estimate,
    })
}

/// Both sides of the trapezoid identity, computed along independent paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaIdentity {
    /// Endpoint average minus operator average.
    pub side_a: f64,
    /// `ρ(v^ρ - u^ρ)/2 ∫₀¹ [(1-t^ρ)^α - t^(ρα)] t^(ρ-1) ψ'(t^ρ u^ρ + (1-t^ρ) v^ρ) dt`
    pub side_b: f64,
    pub residual: f64,
    /// Sum of the quadrature error estimates of both sides.
    pub quad_err: f64,
}

pub fn lemma_identity(
    psi: &Psi,
    iv: Interval,
    alpha: f64,
    rho: f64,
    settings: &QuadSettings,
) -> Result<LemmaIdentity, Error> {
    let (u_rho, v_rho) = iv.powered(rho);
    let avg = operator_average(psi, iv, alpha, rho, settings)?;
    let side_a = 0.5 * (psi.eval(u_rho)? + psi.eval(v_rho)?) - avg.value;

    let integrand = |n: Node| -> Result<f64, Error> {
        let ln_t = if n.from_right < 0.5 { math::ln1p(-n.from_right) } else { math::ln(n.x) };
        let lambda = math::exp(rho * ln_t);
        let one_minus = -math::expm1(rho * ln_t);
        let kernel = math::pow_nonneg(one_minus, alpha) - math::exp(rho * alpha * ln_t);
        let jac = math::exp((rho - 1.0) * ln_t);
        let at = lambda * u_rho + one_minus * v_rho;
        Ok(kernel * jac * psi.deriv(at)?)
    };
    let integral = quad::try_integrate_nodes(integrand, 0.0, 1.0, settings)?;
    let scale = 0.5 * rho * (v_rho - u_rho);
    let side_b = scale * integral.value;
    Ok(LemmaIdentity {
        side_a,
        side_b,
        residual: side_a - side_b,
        quad_err: avg.err_estimate + scale.abs() * integral.err_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn fp(alpha: f64, rho: f64, s: f64) -> FracParams {
        FracParams::new(alpha, rho, s, 1.0, None).unwrap()
    }

    #[test]
    fn worked_example_as_printed() {
        // α = 2, s = 1/2, ρ = 1, ψ = x^(sα)
        let r = hh_sandwich(&Psi::Power(1.0), unit(), &fp(2.0, 1.0, 0.5), Variant::AsPrinted, &QuadSettings::default())
            .unwrap();
        assert!((r.lhs - 0.25).abs() < 1e-12);
        assert!((r.rhs - 0.5).abs() < 1e-12);
        // Oracle: Γ(3)/2 (∫₀¹ (1-t) t dt + ∫₀¹ t t dt) = 1/2.
        let oracle = quad::integrate(|t| (1.0 - t) * t + t * t, 0.0, 1.0, &QuadSettings::default()).unwrap().value;
        assert!((r.middle - oracle).abs() < 1e-10);
        assert!((r.middle - 0.5).abs() < 1e-10);
    }

    #[test]
    fn second_example_triple() {
        // α = 1, s = 1/2, ρ = 2, ψ = x^(1/2)
        let psi = Psi::Power(0.5);
        let p = hh_sandwich(&psi, unit(), &fp(1.0, 2.0, 0.5), Variant::AsPrinted, &QuadSettings::default()).unwrap();
        assert!((p.lhs - 0.5).abs() < 1e-12);
        assert!((p.middle - 2.0 / 3.0).abs() < 1e-9);
        assert!((p.rhs - 0.5).abs() < 1e-12);
        assert!(!p.holds.1, "printed right constant is too small here");
        let d = hh_sandwich(&psi, unit(), &fp(1.0, 2.0, 0.5), Variant::DerivationConsistent, &QuadSettings::default())
            .unwrap();
        assert!(d.both_hold(), "{d:?}");
        assert!((d.rhs - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn classical_members() {
        let r = hh_sandwich(
            &Psi::parse("x^2").unwrap(),
            unit(),
            &fp(1.0, 1.0, 1.0),
            Variant::DerivationConsistent,
            &QuadSettings::default(),
        )
        .unwrap();
        assert!((r.lhs - 0.25).abs() < 1e-12);
        assert!((r.middle - 1.0 / 3.0).abs() < 1e-10);
        assert!((r.rhs - 0.5).abs() < 1e-12);
        assert!((r.margin_left - 1.0 / 12.0).abs() < 1e-10);
        assert!((r.margin_right - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn affine_is_the_equality_case() {
        let psi = Psi::Affine { a: 2.0, b: 1.0 };
        let iv = Interval::new(0.5, 2.0).unwrap();
        for variant in Variant::ALL {
            let r = hh_sandwich(&psi, iv, &fp(1.0, 1.0, 1.0), variant, &QuadSettings::default()).unwrap();
            assert!((r.lhs - r.middle).abs() < 1e-10 && (r.rhs - r.middle).abs() < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn variants_coincide_at_unit_order_and_rho() {
        let psi = Psi::parse("exp(x)").unwrap();
        for s in [0.3, 0.5, 1.0] {
            let f = fp(1.0, 1.0, s);
            let a = hh_sandwich(&psi, unit(), &f, Variant::AsPrinted, &QuadSettings::default()).unwrap();
            let b = hh_sandwich(&psi, unit(), &f, Variant::DerivationConsistent, &QuadSettings::default()).unwrap();
            assert_eq!((a.lhs, a.middle, a.rhs), (b.lhs, b.middle, b.rhs));
        }
    }

    #[test]
    fn lemma_examples() {
        let s = QuadSettings::default();
        let c = lemma_identity(&Psi::parse("3").unwrap(), unit(), 0.7, 1.3, &s).unwrap();
        assert!(c.side_a.abs() < 1e-10 && c.side_b.abs() < 1e-12);

        let sq = Psi::parse("x^2").unwrap();
        let r = lemma_identity(&sq, unit(), 1.0, 1.0, &s).unwrap();
        // Oracle for side b: (1/2) ∫₀¹ (1 - 2t) 2(1 - t) dt.
        let oracle_b = 0.5 * quad::integrate(|t| (1.0 - 2.0 * t) * 2.0 * (1.0 - t), 0.0, 1.0, &s).unwrap().value;
        assert!((r.side_a - 1.0 / 6.0).abs() < 1e-10);
        assert!((r.side_b - oracle_b).abs() < 1e-10);
        assert!(r.residual.abs() <= 1e-8);

        let r = lemma_identity(&sq, unit(), 2.0, 2.0, &s).unwrap();
        assert!(r.residual.abs() <= 1e-7, "{r:?}");
    }

    #[test]
    fn lemma_grid_on_unit_interval() {
        let s = QuadSettings::default();
        for text in ["x^2", "x^3", "exp(x)"] {
            let psi = Psi::parse(text).unwrap();
            for alpha in [0.5, 1.0, 2.0] {
                for rho in [0.5, 1.0, 2.0] {
                    let r = lemma_identity(&psi, unit(), alpha, rho, &s).unwrap();
                    assert!(r.residual.abs() <= 1e-7, "{text} α={alpha} ρ={rho}: {r:?}");
                }
            }
        }
    }
}
