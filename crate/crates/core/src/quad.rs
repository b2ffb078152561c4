//! One-dimensional quadrature for integrands with integrable endpoint
//! singularities.
//!
//! The primary rule is tanh-sinh (double exponential). Its nodes cluster at
//! both endpoints and never touch them, so kernels such as `(1 - t)^(α-1)`
//! with `α < 1` need no special casing. When the tanh-sinh ladder fails to
//! settle within `max_levels`, an adaptive 15-point Gauss–Kronrod rule on
//! bisected subintervals takes over.
//!
//! Integrands that are singular at an endpoint lose accuracy if they compute
//! the distance to that endpoint as `b - x`: near `b` the node `x` itself is
//! rounded. [`integrate_nodes`] hands the integrand a [`Node`] that carries
//! both distances computed without cancellation.

use core::f64::consts::FRAC_PI_2;
use core::fmt;

use alloc::vec::Vec;

use crate::math;

/// Abscissae beyond this `t` have endpoint distances below the smallest
/// normal double.
const T_MAX: f64 = 6.1;
const MIN_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Deepest tanh-sinh refinement level; the step at level `k` is `2^-k`.
    pub max_levels: u32,
    /// Subinterval budget of the Gauss–Kronrod fallback.
    pub fallback_subdivisions: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_levels: 10, fallback_subdivisions: 200 }
    }
}

impl QuadSettings {
    pub fn validate(&self) -> Result<(), QuadError> {
        let ok_tol = |x: f64| x >= 0.0 && x.is_finite();
        if !ok_tol(self.abs_tol) || !ok_tol(self.rel_tol) {
            return Err(QuadError::InvalidSettings("tolerances must be finite and non-negative"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(QuadError::InvalidSettings("abs_tol > 0 or rel_tol > 0 required"));
        }
        if !(3..=12).contains(&self.max_levels) {
            return Err(QuadError::InvalidSettings("max_levels must lie in [3, 12]"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Absolute error estimate, always `>= 0`.
    pub err_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    /// Multiplies value and error estimate by `c`.
    pub fn scaled(self, c: f64) -> Self {
        Self { value: self.value * c, err_estimate: self.err_estimate * c.abs(), ..self }
    }
}

/// A quadrature abscissa together with its exact distances to both ends of
/// the integration interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    /// `x - a`, computed without cancellation.
    pub from_left: f64,
    /// `b - x`, computed without cancellation.
    pub from_right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadError {
    InvalidInterval {
        a: f64,
        b: f64,
    },
    InvalidSettings(&'static str),
    /// The integrand produced a NaN or infinity inside the interval.
    Integrand {
        at: f64,
    },
    /// Neither rule reached the requested tolerance; `best` is the estimate
    /// with the smaller error bound.
    NonConvergence {
        best: QuadResult,
    },
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::InvalidInterval { a, b } => write!(f, "invalid interval [{a}, {b}]: need finite a < b"),
            QuadError::InvalidSettings(msg) => write!(f, "invalid settings: {msg}"),
            QuadError::Integrand { at } => write!(f, "integrand is not finite at x = {at}"),
            QuadError::NonConvergence { best } => write!(
                f,
                "no convergence: best estimate {} with error {:e} after {} evaluations",
                best.value, best.err_estimate, best.evaluations
            ),
        }
    }
}

impl core::error::Error for QuadError {}

/// Integrates `f` over `(a, b)`.
///
/// Abscissae that round onto an endpoint are skipped, so `f` is only ever
/// sampled strictly inside the interval.
pub fn integrate<F>(mut f: F, a: f64, b: f64, settings: &QuadSettings) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> f64,
{
    drive(|n: Node| Ok::<f64, QuadError>(f(n.x)), a, b, settings, true)
}

/// Integrates a node-aware integrand over `(a, b)`.
pub fn integrate_nodes<F>(mut f: F, a: f64, b: f64, settings: &QuadSettings) -> Result<QuadResult, QuadError>
where
    F: FnMut(Node) -> f64,
{
    drive(|n: Node| Ok::<f64, QuadError>(f(n)), a, b, settings, false)
}

/// Like [`integrate_nodes`] for integrands that can fail. The first error
/// returned by `f` aborts the integration.
pub fn try_integrate_nodes<E, F>(f: F, a: f64, b: f64, settings: &QuadSettings) -> Result<QuadResult, E>
where
    E: From<QuadError>,
    F: FnMut(Node) -> Result<f64, E>,
{
    drive(f, a, b, settings, false)
}

fn drive<E, F>(mut f: F, a: f64, b: f64, settings: &QuadSettings, strict_open: bool) -> Result<QuadResult, E>
where
    E: From<QuadError>,
    F: FnMut(Node) -> Result<f64, E>,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadError::InvalidInterval { a, b }.into());
    }
    settings.validate()?;

    let ts = tanh_sinh(&mut f, a, b, settings, strict_open)?;
    if ts.err_estimate <= settings.target(ts.value) {
        return Ok(ts);
    }

    let gk = gauss_kronrod(&mut f, a, b, settings)?;
    let evaluations = ts.evaluations + gk.evaluations;
    if gk.err_estimate <= settings.target(gk.value) {
        return Ok(QuadResult { evaluations, ..gk });
    }
    let best = if gk.err_estimate < ts.err_estimate { gk } else { ts };
    Err(QuadError::NonConvergence { best: QuadResult { evaluations, ..best } }.into())
}

fn checked<E: From<QuadError>>(value: f64, x: f64) -> Result<f64, E> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadError::Integrand { at: x }.into())
    }
}

/// Tanh-sinh ladder. Returns the deepest estimate reached, with the
/// difference to the previous level as its error estimate.
fn tanh_sinh<E, F>(f: &mut F, a: f64, b: f64, settings: &QuadSettings, strict_open: bool) -> Result<QuadResult, E>
where
    E: From<QuadError>,
    F: FnMut(Node) -> Result<f64, E>,
{
    let half = 0.5 * (b - a);
    let width = b - a;
    let mid = a + half;
    let mut evaluations = 1usize;

    // Sum of weight * f over all nodes so far, without the step factor h.
    let centre = checked(f(Node { x: mid, from_left: half, from_right: half })?, mid)?;
    let mut sum = FRAC_PI_2 * half * centre;

    // Adds the symmetric pair of nodes at abscissa t > 0. Returns false once
    // the pair has collapsed onto the endpoints.
    let mut add_pair = |t: f64, sum: &mut f64, evaluations: &mut usize| -> Result<bool, E> {
        let q = math::exp(-core::f64::consts::PI * math::sinh(t));
        let gap = half * (2.0 * q / (1.0 + q));
        if gap == 0.0 {
            return Ok(false);
        }
        let weight = half * FRAC_PI_2 * math::cosh(t) * 4.0 * q / ((1.0 + q) * (1.0 + q));
        if weight == 0.0 {
            return Ok(false);
        }
        let mut any = false;
        let left = Node { x: a + gap, from_left: gap, from_right: width - gap };
        if !(strict_open && left.x <= a) {
            *sum += weight * checked(f(left)?, left.x)?;
            *evaluations += 1;
            any = true;
        }
        let right = Node { x: b - gap, from_left: width - gap, from_right: gap };
        if !(strict_open && right.x >= b) {
            *sum += weight * checked(f(right)?, right.x)?;
            *evaluations += 1;
            any = true;
        }
        Ok(any)
    };

    // Level 0: integer abscissae.
    let mut k = 1u32;
    while f64::from(k) <= T_MAX {
        if !add_pair(f64::from(k), &mut sum, &mut evaluations)? {
            break;
        }
        k += 1;
    }
    let mut h = 1.0;
    let mut estimate = h * sum;
    let mut err = f64::INFINITY;

    for level in 1..=settings.max_levels {
        h *= 0.5;
        let mut j = 1u64;
        loop {
            let t = j as f64 * h;
            if t > T_MAX || !add_pair(t, &mut sum, &mut evaluations)? {
                break;
            }
            j += 2;
        }
        let next = h * sum;
        err = (next - estimate).abs();
        estimate = next;
        if level >= MIN_LEVEL && err <= settings.target(estimate) {
            break;
        }
    }

    Ok(QuadResult { value: estimate, err_estimate: err, evaluations })
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

fn gk15<E, F>(f: &mut F, a: f64, b: f64, lo: f64, hi: f64) -> Result<Segment, E>
where
    E: From<QuadError>,
    F: FnMut(Node) -> Result<f64, E>,
{
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let node = |x: f64| Node { x, from_left: x - a, from_right: b - x };

    let fc = checked(f(node(centre))?, centre)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&xk, &wk)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * xk;
        let (x1, x2) = (centre - dx, centre + dx);
        let pair = checked(f(node(x1))?, x1)? + checked(f(node(x2))?, x2)?;
        kronrod += wk * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok(Segment { lo, hi, value: kronrod * half, err: ((kronrod - gauss) * half).abs() })
}

/// Adaptive Gauss–Kronrod on bisected subintervals; always splits the
/// segment with the largest error.
fn gauss_kronrod<E, F>(f: &mut F, a: f64, b: f64, settings: &QuadSettings) -> Result<QuadResult, E>
where
    E: From<QuadError>,
    F: FnMut(Node) -> Result<f64, E>,
{
    let mut segments: Vec<Segment> = Vec::new();
    segments.push(gk15(f, a, b, a, b)?);
    let mut evaluations = 15;
    let budget = settings.fallback_subdivisions.max(1) as usize;

    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.err).sum();
        if err <= settings.target(value) || segments.len() >= budget {
            return Ok(QuadResult { value, err_estimate: err, evaluations });
        }
        let (worst, _) =
            segments
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, s)| if s.err > acc.1 { (i, s.err) } else { acc });
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            // Cannot split further in floating point.
            let value: f64 = seg.value + segments.iter().map(|s| s.value).sum::<f64>();
            return Ok(QuadResult { value, err_estimate: err, evaluations });
        }
        segments.push(gk15(f, a, b, seg.lo, mid)?);
        segments.push(gk15(f, a, b, mid, seg.hi)?);
        evaluations += 30;
    }
}
