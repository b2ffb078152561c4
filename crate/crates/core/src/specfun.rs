//! Gamma, beta and the ρ-deformed beta integral.

use core::f64::consts::PI;

use crate::error::DomainError;
use crate::math;
use crate::quad::{self, QuadError, QuadSettings};

/// Relative accuracy targets for the special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecfunAccuracy {
    pub rel_tol: f64,
}

impl SpecfunAccuracy {
    /// Target for the closed forms built on [`ln_gamma`].
    pub const CLOSED_FORM: Self = Self { rel_tol: 1e-12 };
    /// Target for [`beta_rho`], which is integrated numerically.
    pub const INTEGRATED: Self = Self { rel_tol: 1e-9 };

    pub fn new(rel_tol: f64) -> Result<Self, DomainError> {
        if rel_tol > 0.0 && rel_tol < 1.0 {
            Ok(Self { rel_tol })
        } else {
            Err(DomainError::new("rel_tol", rel_tol, "must lie in (0, 1)"))
        }
    }
}

impl Default for SpecfunAccuracy {
    fn default() -> Self {
        Self::CLOSED_FORM
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn positive(what: &'static str, x: f64) -> Result<f64, DomainError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(DomainError::new(what, x, "must be finite and > 0"))
    }
}

/// Natural logarithm of Γ(x) for x > 0 (Lanczos, g = 7, nine terms).
pub fn ln_gamma(x: f64) -> Result<f64, DomainError> {
    positive("x", x)?;
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx); sin(πx) > 0 on (0, 1/2).
        return math::ln(PI / math::sin(PI * x)) - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * math::ln(t) - t + math::ln(series)
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64, DomainError> {
    ln_gamma(x).map(math::exp)
}

/// β(a, b) = Γ(a)Γ(b)/Γ(a+b), assembled in log space.
pub fn beta(a: f64, b: f64) -> Result<f64, DomainError> {
    positive("a", a)?;
    positive("b", b)?;
    Ok(math::exp(ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b)))
}

/// Error from [`beta_rho`].
#[derive(Debug, Clone, PartialEq)]
pub enum BetaRhoError {
    Domain(DomainError),
    Quad(QuadError),
}

impl core::fmt::Display for BetaRhoError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BetaRhoError::Domain(e) => e.fmt(f),
            BetaRhoError::Quad(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for BetaRhoError {}

impl From<BetaRhoError> for crate::Error {
    fn from(e: BetaRhoError) -> Self {
        match e {
            BetaRhoError::Domain(d) => d.into(),
            BetaRhoError::Quad(q) => q.into(),
        }
    }
}

/// Settings that keep the absolute error of [`beta_rho`] below 1e-9.
pub fn beta_rho_settings() -> QuadSettings {
    QuadSettings { abs_tol: 1e-12, rel_tol: 1e-12, max_levels: 12, fallback_subdivisions: 400 }
}

/// The ρ-deformed beta integral
/// `∫₀¹ ρ (1 - x^ρ)^(b-1) (x^ρ)^(a-1) x^(ρ-1) dx`, evaluated by quadrature.
pub fn beta_rho(a: f64, b: f64, rho: f64) -> Result<f64, BetaRhoError> {
    positive("a", a).map_err(BetaRhoError::Domain)?;
    positive("b", b).map_err(BetaRhoError::Domain)?;
    positive("rho", rho).map_err(BetaRhoError::Domain)?;

    let integrand = |n: quad::Node| {
        // ln x without cancellation near either end.
        let ln_x = if n.from_right < 0.5 { math::ln1p(-n.from_right) } else { math::ln(n.x) };
        let one_minus = -math::expm1(rho * ln_x);
        // (x^ρ)^(a-1) x^(ρ-1) folded into one power so tiny x cannot underflow to 0 * inf.
        rho * math::pow(one_minus, b - 1.0) * math::exp((rho * a - 1.0) * ln_x)
    };
    let settings = beta_rho_settings();
    match quad::integrate_nodes(integrand, 0.0, 1.0, &settings) {
        Ok(r) => Ok(r.value),
        // Accept an unconverged ladder if its estimate still meets the 1e-9 target.
        Err(QuadError::NonConvergence { best }) if best.err_estimate <= 1e-9 => Ok(best.value),
        Err(e) => Err(BetaRhoError::Quad(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-15);
        assert!((ln_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-13);
        assert!((ln_gamma(2.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn gamma_matches_factorials_and_half_integers() {
        let mut fact = 1.0f64;
        for n in 1..=40u32 {
            let g = gamma(n as f64).unwrap();
            assert!(rel(g, fact) < 1e-12, "Γ({n})");
            fact *= n as f64;
        }
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let mut g = PI.sqrt();
        for n in 0..20 {
            let x = n as f64 + 0.5;
            assert!(rel(gamma(x).unwrap(), g) < 1e-12, "Γ({x})");
            g *= x;
        }
        // Γ(0.1) from the reflection branch.
        assert!(rel(gamma(0.1).unwrap(), 9.513_507_698_668_732) < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.0).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
        assert!(beta(0.0, 1.0).is_err());
        assert!(beta(1.0, -2.0).is_err());
        assert!(beta_rho(1.0, 1.0, 0.0).is_err());
        assert!(SpecfunAccuracy::new(0.0).is_err());
        assert!(SpecfunAccuracy::new(1.0).is_err());
    }

    #[test]
    fn beta_closed_forms() {
        assert!(rel(beta(2.0, 2.0).unwrap(), 1.0 / 6.0) < 1e-13);
        assert!(rel(beta(1.0, 1.5).unwrap(), 2.0 / 3.0) < 1e-13);
        // αβ(α, αs+1) with α = 2, s = 1/2; oracle is direct quadrature of
        // ∫₀¹ t^(α-1)(1-t)^(αs) dt.
        let oracle = quad::integrate(|t| t * (1.0 - t), 0.0, 1.0, &QuadSettings::default()).unwrap().value;
        assert!((2.0 * beta(2.0, 2.0).unwrap() - 2.0 * oracle).abs() < 1e-12);
        assert!((2.0 * oracle - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn beta_rho_examples() {
        assert!((beta_rho(1.0, 1.0, 2.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((beta_rho(2.0, 3.0, 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-9);
        assert!((beta_rho(2.0, 3.0, 2.0).unwrap() - beta(2.0, 3.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn beta_rho_collapses_to_beta() {
        for a in [0.5, 0.7, 1.0, 2.0, 3.3, 5.0] {
            for b in [0.5, 1.0, 1.9, 2.0, 5.0] {
                for rho in [0.5, 1.0, 2.0, 3.0] {
                    let got = beta_rho(a, b, rho).unwrap();
                    let want = beta(a, b).unwrap();
                    assert!((got - want).abs() <= 1e-8, "a={a} b={b} ρ={rho}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn ln_gamma_monotone_above_two() {
        let mut prev = ln_gamma(2.0).unwrap();
        let mut x = 2.0;
        while x < 60.0 {
            x += 0.01;
            let cur = ln_gamma(x).unwrap();
            assert!(cur > prev, "x = {x}");
            prev = cur;
        }
    }

    proptest! {
        #[test]
        fn beta_is_symmetric(a in 0.5f64..10.0, b in 0.5f64..10.0) {
            let ab = beta(a, b).unwrap();
            let ba = beta(b, a).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-13 * ab);
        }

        #[test]
        fn beta_recurrence(a in 0.5f64..10.0, b in 0.5f64..10.0) {
            let lhs = beta(a + 1.0, b).unwrap();
            let rhs = beta(a, b).unwrap() * a / (a + b);
            prop_assert!(rel(lhs, rhs) <= 1e-11);
        }

        #[test]
        fn gamma_recurrence(x in 0.1f64..49.0) {
            let lhs = ln_gamma(x + 1.0).unwrap();
            let rhs = ln_gamma(x).unwrap() + x.ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }
}
