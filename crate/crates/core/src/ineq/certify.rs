use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DomainError, Error};
use crate::expr::Psi;
use crate::fracint::Interval;
use crate::math;

pub const DEFAULT_SEED: u64 = 0x5e_ed0f_c0e5;

/// Outcome of sampling the generalized s-convexity inequality
/// `f(ta + (1-t)b) <= t^(αs) f(a) + (1-t)^(αs) f(b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityCertificate {
    pub is_certified: bool,
    /// Largest `lhs - rhs` seen, less a rounding allowance; `<= 0` iff certified.
    pub worst_violation: f64,
    /// `(a, b, t)` at the worst violation, when there is one.
    pub witness: Option<(f64, f64, f64)>,
    pub samples: usize,
}

/// Checks ψ on a `grid³` lattice of `(a, b, t)` plus `grid³` random triples.
pub fn certify_s_convex(
    psi: &Psi,
    iv: Interval,
    s: f64,
    alpha: f64,
    grid: usize,
) -> Result<ConvexityCertificate, Error> {
    certify_fn(|x| psi.eval(x).map_err(Error::from), iv, s, alpha, grid, DEFAULT_SEED)
}

/// [`certify_s_convex`] for an arbitrary function, e.g. `|ψ'|^q`.
pub fn certify_fn<F>(
    mut f: F,
    iv: Interval,
    s: f64,
    alpha: f64,
    grid: usize,
    seed: u64,
) -> Result<ConvexityCertificate, Error>
where
    F: FnMut(f64) -> Result<f64, Error>,
{
    if grid < 8 {
        return Err(DomainError::new("grid", grid as f64, "must be >= 8").into());
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(DomainError::new("s", s, "must lie in (0, 1]").into());
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(DomainError::new("alpha", alpha, "must be finite and > 0").into());
    }
    let (lo, hi) = (iv.u, iv.v);
    let exponent = alpha * s;
    let step = (hi - lo) / (grid - 1) as f64;
    let points: alloc::vec::Vec<f64> =
        (0..grid).map(|i| if i + 1 == grid { hi } else { lo + step * i as f64 }).collect();
    let values = points.iter().map(|&x| f(x)).collect::<Result<alloc::vec::Vec<_>, _>>()?;

    let mut worst = f64::NEG_INFINITY;
    let mut witness = (lo, hi, 0.0);
    let mut samples = 0usize;

    let mut check = |a: f64, fa: f64, b: f64, fb: f64, t: f64, f: &mut F| -> Result<(), Error> {
        let x = (t * a + (1.0 - t) * b).clamp(lo, hi);
        let fx = f(x)?;
        let wa = math::pow_nonneg(t, exponent);
        let wb = math::pow_nonneg(1.0 - t, exponent);
        let raw = fx - wa * fa - wb * fb;
        let rounding = 4.0 * f64::EPSILON * (fx.abs() + wa * fa.abs() + wb * fb.abs());
        let violation = raw - rounding;
        if violation > worst {
            worst = violation;
            witness = (a, b, t);
        }
        samples += 1;
        Ok(())
    };

    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate() {
            for k in 0..grid {
                let t = k as f64 / (grid - 1) as f64;
                check(a, values[i], b, values[j], t, &mut f)?;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..grid * grid * grid {
        let a = rng.random_range(lo..=hi);
        let b = rng.random_range(lo..=hi);
        let t = rng.random_range(0.0..=1.0);
        let (fa, fb) = (f(a)?, f(b)?);
        check(a, fa, b, fb, t, &mut f)?;
    }

    let is_certified = worst <= 0.0;
    Ok(ConvexityCertificate {
        is_certified,
        worst_violation: worst,
        witness: if is_certified { None } else { Some(witness) },
        samples,
    })
}
