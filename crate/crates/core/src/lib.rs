//! Katugampola fractional integrals and Hermite–Hadamard type bounds for
//! generalized s-convex functions.
//!
//! The crate is `no_std` and only needs `alloc` (for expression trees and
//! diagnostics). File formats, the sweep harness and the command line live in
//! the `hhfrac` crate.
//!
//! Layout:
//!
//! * [`specfun`]: log-gamma, beta and the ρ-deformed beta integral.
//! * [`quad`]: tanh-sinh quadrature with a Gauss–Kronrod fallback.
//! * [`expr`]: expression language for ψ with forward-mode derivatives.
//! * [`fracint`]: left/right Katugampola operators.
//! * [`ineq`]: convexity certificates, the fractional Hermite–Hadamard
//!   sandwich, the trapezoid identity and the gap bounds.
//! * [`means`]: arithmetic / logarithmic means and the derived propositions.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod expr;
pub mod fracint;
pub mod ineq;
pub mod means;
pub mod quad;
pub mod specfun;

pub use error::{DomainError, Error};
pub use expr::{DualValue, EvalError, Expr, ParseError, Psi};
pub use fracint::{FracParams, Interval, Side};
pub use ineq::{ConvexityCertificate, GapBoundReport, SandwichReport, Theorem, Variant};
pub use quad::{QuadError, QuadResult, QuadSettings};
