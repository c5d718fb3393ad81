//! The randomized verification suite.
//!
//! [`run_suite`] executes every registered check against a list of
//! block shapes and produces a [`VerificationReport`]. Reports are
//! deterministic for a fixed configuration: each check derives its
//! own ChaCha12 stream from the master seed and its registry name, so
//! neither registry order nor thread scheduling can change a single
//! sampled matrix. Violations are compared against the named bounds
//! of a [`TolProfile`].

mod checks;
mod scalar_oracle;
pub mod tolerances;

pub use tolerances::TolProfile;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::block::BlockShape;
use crate::error::{Error, Result};
use checks::{CheckCtx, REGISTRY};

/// Suite configuration.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Block shapes every check iterates over.
    pub dims: Vec<BlockShape>,
    /// Baseline sample count per check and shape; heavier checks
    /// derive smaller budgets from it.
    pub samples: usize,
    /// Master seed for all sampling.
    pub seed: u64,
    /// Named tolerance bounds.
    pub profile: TolProfile,
}

impl VerifyConfig {
    /// The default suite: full 2x2, 3x3, and 4x4 blocks, a two-block
    /// shape, and a commutative four-point shape, at 100 samples and
    /// seed 1.
    pub fn default_suite() -> Self {
        let dims = vec![
            BlockShape::full(2).expect("static shape"),
            BlockShape::full(3).expect("static shape"),
            BlockShape::full(4).expect("static shape"),
            BlockShape::new(vec![2, 2]).expect("static shape"),
            BlockShape::commutative(4).expect("static shape"),
        ];
        Self {
            dims,
            samples: 100,
            seed: 1,
            profile: TolProfile::default(),
        }
    }
}

/// Outcome of one registered check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    /// Registry name of the check.
    pub name: String,
    /// Standard mathematical name of the fact checked.
    pub anchor: String,
    /// Whether the worst violation stayed within tolerance.
    pub passed: bool,
    /// Worst violation observed, in the units of the tolerance.
    pub max_violation: f64,
    /// Bound the violation was compared against.
    pub tolerance: f64,
}

/// Full suite report; serializes to JSON without loss.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Shape labels the suite ran over.
    pub dims: Vec<String>,
    /// Baseline sample count.
    pub samples: usize,
    /// Master seed.
    pub seed: u64,
    /// Per-check outcomes, sorted by name.
    pub checks: Vec<CheckOutcome>,
    /// Wall time of the run in seconds. The only nondeterministic
    /// field.
    pub wall_time_seconds: f64,
}

impl VerificationReport {
    /// Whether every check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Plain-text rendering, one line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "verification suite: dims [{}], samples {}, seed {}\n",
            self.dims.join(", "),
            self.samples,
            self.seed
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{}  {:<36} {:>12.3e} <= {:>8.1e}  ({})\n",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.max_violation,
                c.tolerance,
                c.anchor
            ));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!(
            "{} of {} checks passed in {:.1}s\n",
            passed,
            self.checks.len(),
            self.wall_time_seconds
        ));
        out
    }

    /// Pretty JSON rendering.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Document {
            context: "verification report".into(),
            message: e.to_string(),
        })
    }
}

/// Shape label used in reports and on the command line: block
/// dimensions joined by `x`, so `2x2` is two full qubit blocks.
pub fn shape_label(shape: &BlockShape) -> String {
    shape
        .dims()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

/// Parses a shape label produced by [`shape_label`].
pub fn parse_shape(label: &str) -> Result<BlockShape> {
    let dims: Vec<usize> = label
        .split('x')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Document {
            context: format!("shape label {label:?}"),
            message: e.to_string(),
        })?;
    BlockShape::new(dims)
}

/// Runs every registered check and assembles the report.
///
/// A check that returns an error or a non-finite violation is
/// reported as failed with the violation pinned at `f64::MAX`, which
/// keeps the JSON free of non-finite numbers.
pub fn run_suite(config: &VerifyConfig) -> Result<VerificationReport> {
    if config.dims.is_empty() {
        return Err(Error::InvalidShape);
    }
    let start = std::time::Instant::now();
    let ctx = CheckCtx {
        dims: &config.dims,
        samples: config.samples,
        seed: config.seed,
        tol: &config.profile,
    };
    let mut outcomes: Vec<CheckOutcome> = REGISTRY
        .par_iter()
        .map(|def| {
            let tolerance = (def.tolerance)(ctx.tol);
            let max_violation = match (def.run)(&ctx) {
                Ok(v) if v.is_finite() => v,
                _ => f64::MAX,
            };
            CheckOutcome {
                name: def.name.to_string(),
                anchor: def.anchor.to_string(),
                passed: max_violation <= tolerance,
                max_violation,
                tolerance,
            }
        })
        .collect();
    outcomes.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(VerificationReport {
        dims: config.dims.iter().map(shape_label).collect(),
        samples: config.samples,
        seed: config.seed,
        checks: outcomes,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_labels_round_trip() {
        for label in ["2", "4", "2x2", "1x1x1x1"] {
            let shape = parse_shape(label).unwrap();
            assert_eq!(shape_label(&shape), label);
        }
        assert!(parse_shape("2,2").is_err());
        assert!(parse_shape("").is_err());
    }

    #[test]
    fn tiny_suite_is_deterministic_and_serializable() {
        let config = VerifyConfig {
            dims: vec![BlockShape::full(2).unwrap()],
            samples: 10,
            seed: 7,
            profile: TolProfile::default(),
        };
        let a = run_suite(&config).unwrap();
        let b = run_suite(&config).unwrap();
        assert_eq!(a.checks.len(), b.checks.len());
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.max_violation.to_bits(), y.max_violation.to_bits());
        }
        let json = a.to_json().unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.checks.len(), a.checks.len());
        let names: Vec<&str> = a.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
    }
}
