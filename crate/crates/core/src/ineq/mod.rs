//! Convexity certificates, the fractional Hermite–Hadamard sandwich, the
//! trapezoid identity and the gap bounds.
//!
//! Two coefficient sets are carried side by side. [`Variant::AsPrinted`]
//! uses the constants exactly as they are usually stated for these results.
//! [`Variant::DerivationConsistent`] uses the constants that follow when the
//! intermediate integrals of the arguments are evaluated exactly; only this
//! set is expected to hold without exception.

mod certify;
mod gap;
mod sandwich;

pub use certify::{certify_fn, certify_s_convex, ConvexityCertificate, DEFAULT_SEED};
pub use gap::{
    bound_components, gap_bound, gap_bound_t2, gap_bound_t3, gap_bound_t4, min_bound, trapezoid_gap, BoundInputs,
    GapBoundReport, Theorem,
};
pub use sandwich::{hh_sandwich, lemma_identity, operator_average, LemmaIdentity, SandwichReport};

/// Additive slack, on top of the quadrature error, before a margin counts
/// as a violation.
pub const MARGIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    AsPrinted,
    DerivationConsistent,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::AsPrinted, Variant::DerivationConsistent];

    pub fn name(self) -> &'static str {
        match self {
            Variant::AsPrinted => "as_printed",
            Variant::DerivationConsistent => "derivation_consistent",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "as_printed" | "printed" => Some(Variant::AsPrinted),
            "derivation_consistent" | "derived" => Some(Variant::DerivationConsistent),
            _ => None,
        }
    }
}

impl core::fmt::Display for Variant {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}
