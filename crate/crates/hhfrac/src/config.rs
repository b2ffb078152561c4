//! Sweep configuration, read from TOML.
//!
//! ```toml
//! psi = ["power(s*alpha)", "x^2", "x"]
//! alpha = [0.5, 1, 2]
//! rho = [0.5, 1, 2]
//! s = [0.5, 1]
//! q = [1, 2]                  # optional, default [1]
//! intervals = [[0, 1], [1, 3]]
//! variants = ["as_printed", "derivation_consistent"]   # optional, default both
//! checks = ["sandwich", "lemma", "t2", "t3", "t4", "min_m", "means", "certify"]
//! seed = 7                    # optional
//! certify_grid = 16           # optional
//!
//! [tolerance]                 # optional
//! abs = 1e-10
//! rel = 1e-10
//! max_levels = 10
//!
//! [means]                     # optional
//! propositions = [1, 2, 3, 4]
//! r = 2
//! ```

use std::fmt;
use std::path::Path;

use hhfrac_core::ineq::DEFAULT_SEED;
use hhfrac_core::means::Proposition;
use hhfrac_core::{FracParams, Interval, Psi, QuadSettings, Variant};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Which computation a sweep row performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Sandwich,
    Lemma,
    T2,
    T3,
    T4,
    MinM,
    Means,
    Certify,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Sandwich => "sandwich",
            Check::Lemma => "lemma",
            Check::T2 => "t2",
            Check::T3 => "t3",
            Check::T4 => "t4",
            Check::MinM => "min_m",
            Check::Means => "means",
            Check::Certify => "certify",
        }
    }

    /// Whether rows are repeated per coefficient variant.
    pub fn uses_variants(self) -> bool {
        matches!(self, Check::Sandwich | Check::T2 | Check::T3 | Check::T4 | Check::MinM)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A test function entry: a fixed ψ, or the power family `x^(sα)` that is
/// resolved per cell.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiEntry {
    Fixed(Psi),
    PowerSAlpha,
}

impl PsiEntry {
    pub fn parse(text: &str) -> Result<Self, String> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "power(s*alpha)" || compact == "power(alpha*s)" {
            return Ok(PsiEntry::PowerSAlpha);
        }
        Psi::parse(text).map(PsiEntry::Fixed).map_err(|e| format!("psi `{text}`: {e}"))
    }

    pub fn resolve(&self, s: f64, alpha: f64) -> Psi {
        match self {
            PsiEntry::Fixed(psi) => psi.clone(),
            PsiEntry::PowerSAlpha => Psi::Power(s * alpha),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerance {
    abs: Option<f64>,
    rel: Option<f64>,
    max_levels: Option<u32>,
    fallback_subdivisions: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeans {
    propositions: Option<Vec<u8>>,
    r: Option<i32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    psi: Vec<String>,
    alpha: Vec<f64>,
    rho: Vec<f64>,
    s: Vec<f64>,
    q: Option<Vec<f64>>,
    intervals: Vec<[f64; 2]>,
    variants: Option<Vec<String>>,
    checks: Vec<Check>,
    seed: Option<u64>,
    certify_grid: Option<usize>,
    tolerance: Option<RawTolerance>,
    means: Option<RawMeans>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub psi: Vec<PsiEntry>,
    /// The entries as written, for reports.
    pub psi_text: Vec<String>,
    pub alpha: Vec<f64>,
    pub rho: Vec<f64>,
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub intervals: Vec<Interval>,
    pub variants: Vec<Variant>,
    pub checks: Vec<Check>,
    pub tol: QuadSettings,
    pub seed: u64,
    pub certify_grid: usize,
    pub propositions: Vec<Proposition>,
    pub r: i32,
}

pub const DEFAULT_CERTIFY_GRID: usize = 16;

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        Self::from_raw(raw).map_err(ConfigError::Invalid)
    }

    fn from_raw(raw: RawConfig) -> Result<Self, String> {
        let non_empty =
            |name: &str, len: usize| if len == 0 { Err(format!("`{name}` must not be empty")) } else { Ok(()) };
        non_empty("psi", raw.psi.len())?;
        non_empty("alpha", raw.alpha.len())?;
        non_empty("rho", raw.rho.len())?;
        non_empty("s", raw.s.len())?;
        non_empty("intervals", raw.intervals.len())?;
        let q = raw.q.unwrap_or_else(|| vec![1.0]);
        non_empty("q", q.len())?;

        for &alpha in &raw.alpha {
            for &rho in &raw.rho {
                for &s in &raw.s {
                    for &q in &q {
                        FracParams::new(alpha, rho, s, q, None).map_err(|e| e.to_string())?;
                    }
                }
            }
        }
        let intervals = raw
            .intervals
            .iter()
            .map(|&[u, v]| Interval::new(u, v).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let psi = raw.psi.iter().map(|t| PsiEntry::parse(t)).collect::<Result<Vec<_>, _>>()?;
        let variants = match raw.variants {
            None => Variant::ALL.to_vec(),
            Some(names) => {
                non_empty("variants", names.len())?;
                names
                    .iter()
                    .map(|n| Variant::from_name(n).ok_or_else(|| format!("unknown variant `{n}`")))
                    .collect::<Result<Vec<_>, _>>()?
            }
        };

        let mut tol = QuadSettings::default();
        if let Some(t) = raw.tolerance {
            tol.abs_tol = t.abs.unwrap_or(tol.abs_tol);
            tol.rel_tol = t.rel.unwrap_or(tol.rel_tol);
            tol.max_levels = t.max_levels.unwrap_or(tol.max_levels);
            tol.fallback_subdivisions = t.fallback_subdivisions.unwrap_or(tol.fallback_subdivisions);
        }
        tol.validate().map_err(|e| format!("tolerance: {e}"))?;

        let certify_grid = raw.certify_grid.unwrap_or(DEFAULT_CERTIFY_GRID);
        if certify_grid < 8 {
            return Err(format!("`certify_grid` must be >= 8, got {certify_grid}"));
        }

        let (propositions, r) = match raw.means {
            None => (Proposition::ALL.to_vec(), 2),
            Some(m) => {
                let props = match m.propositions {
                    None => Proposition::ALL.to_vec(),
                    Some(ids) => {
                        non_empty("means.propositions", ids.len())?;
                        ids.iter()
                            .map(|&i| Proposition::from_index(i).ok_or_else(|| format!("unknown proposition {i}")))
                            .collect::<Result<Vec<_>, _>>()?
                    }
                };
                (props, m.r.unwrap_or(2))
            }
        };
        if r.abs() < 2 {
            return Err(format!("`means.r` must satisfy |r| >= 2, got {r}"));
        }

        Ok(Self {
            psi,
            psi_text: raw.psi,
            alpha: raw.alpha,
            rho: raw.rho,
            s: raw.s,
            q,
            intervals,
            variants,
            checks: raw.checks,
            tol,
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
            certify_grid,
            propositions,
            r,
        })
    }

    /// Rows produced per cell of the parameter product for `check`.
    pub fn multiplicity(&self, check: Check) -> usize {
        match check {
            c if c.uses_variants() => self.variants.len(),
            Check::Means => self.propositions.len(),
            _ => 1,
        }
    }

    /// Cells in the parameter product `ψ × interval × α × ρ × s × q`.
    pub fn cells_per_check(&self) -> usize {
        self.psi.len() * self.intervals.len() * self.alpha.len() * self.rho.len() * self.s.len() * self.q.len()
    }

    pub fn expected_rows(&self) -> usize {
        self.checks.iter().map(|&c| self.multiplicity(c) * self.cells_per_check()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
psi = ["x^2", "power(s*alpha)"]
alpha = [1, 2]
rho = [1]
s = [0.5, 1]
intervals = [[0, 1]]
checks = ["sandwich", "lemma", "means"]
"#;

    #[test]
    fn parses_defaults() {
        let cfg = SweepConfig::from_toml(BASIC).unwrap();
        assert_eq!(cfg.q, vec![1.0]);
        assert_eq!(cfg.variants, Variant::ALL.to_vec());
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.tol, QuadSettings::default());
        assert_eq!(cfg.psi[1], PsiEntry::PowerSAlpha);
        assert_eq!(cfg.cells_per_check(), 8);
        assert_eq!(cfg.expected_rows(), 8 * 2 + 8 + 8 * 4);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            BASIC.replace("rho = [1]", "rho = []"),
            BASIC.replace("s = [0.5, 1]", "s = [1.5]"),
            BASIC.replace("[[0, 1]]", "[[1, 0]]"),
            BASIC.replace("\"lemma\"", "\"nope\""),
            BASIC.replace("\"x^2\"", "\"x^\""),
            format!("{BASIC}\nextra = 1\n"),
            format!("{BASIC}\nvariants = [\"sideways\"]\n"),
            format!("{BASIC}\ncertify_grid = 4\n"),
            format!("{BASIC}\n[means]\nr = 1\n"),
        ];
        for text in bad {
            assert!(SweepConfig::from_toml(&text).is_err(), "{text}");
        }
    }

    #[test]
    fn resolves_power_family() {
        assert_eq!(PsiEntry::PowerSAlpha.resolve(0.5, 2.0), Psi::Power(1.0));
        assert_eq!(PsiEntry::parse("power( s * alpha )").unwrap(), PsiEntry::PowerSAlpha);
    }
}
