//! Run configuration and the acceptance windows, fixed before any suite runs.

use std::path::PathBuf;

use serde::Serialize;

use crate::error::ExperimentError;

/// Window for n^2 * gap over the sweep.
pub const N2GAP_WINDOW: (f64, f64) = (0.3, 60.0);
/// Window for the least-squares slope of log(relaxation time) against log(n).
pub const SLOPE_WINDOW: (f64, f64) = (1.2, 2.2);
/// Range of n used for the slope fit.
pub const SLOPE_RANGE: (usize, usize) = (4, 10);
/// Window for mean sampled node depth / sqrt(n).
pub const DEPTH_WINDOW: (f64, f64) = (0.5, 4.0);
/// Tree sizes for depth sampling.
pub const DEPTH_SIZES: [usize; 4] = [64, 256, 1024, 4096];
/// Bound on sum_t pi(Omega_it) sqrt(l u) / (sqrt(n) pi-hat(i)) over all pairs.
pub const BOUNDLU_CONSTANT: f64 = 4.0;
/// Bound on the pinning overcount / sqrt(l).
pub const NUMETA_CONSTANT: f64 = 4.0;
/// Random functions per inequality instance in the flow suite.
pub const FLOW_TRIALS: usize = 500;
/// Random functions per partition in the identity checks.
pub const IDENTITY_TRIALS: usize = 100;
/// Largest n for the exhaustive flow and subset checks.
pub const FLOW_EXHAUSTIVE_MAX: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Enumerate,
    Spectral,
    Lemmas,
    Flows,
    Depth,
    Mixing,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Enumerate, Suite::Spectral, Suite::Lemmas, Suite::Flows, Suite::Depth, Suite::Mixing];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Enumerate => "enumerate",
            Suite::Spectral => "spectral",
            Suite::Lemmas => "lemmas",
            Suite::Flows => "flows",
            Suite::Depth => "depth",
            Suite::Mixing => "mixing",
        }
    }

    /// Default n range.
    pub fn default_range(self) -> (usize, usize) {
        match self {
            Suite::Enumerate => (1, 12),
            Suite::Spectral => (2, 10),
            Suite::Lemmas => (2, 8),
            Suite::Flows => (2, 9),
            Suite::Depth => (2, 10),
            Suite::Mixing => (2, 7),
        }
    }

    /// Largest n accepted without `--cap-override`.
    pub fn cap(self) -> usize {
        match self {
            Suite::Enumerate => flipwalk_core::DEFAULT_ENUMERATION_CAP,
            Suite::Spectral => 10,
            Suite::Lemmas => 8,
            Suite::Flows => 9,
            Suite::Depth => 10,
            Suite::Mixing => 7,
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Suite::Spectral | Suite::Depth => 10_000,
            Suite::Lemmas => 10,
            Suite::Flows => FLOW_TRIALS,
            Suite::Enumerate | Suite::Mixing => 0,
        }
    }
}

/// Settings shared by all suites. `n`, `n_max` and `samples` override suite defaults.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub cap_override: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { n: None, n_max: None, seed: 1, samples: None, cap_override: None, out: None, format: Format::Csv }
    }
}

impl ExperimentConfig {
    /// The n range for `suite`, checked against its cap. An empty range is allowed.
    pub fn range(&self, suite: Suite) -> Result<(usize, usize), ExperimentError> {
        let (lo, hi) = suite.default_range();
        let (lo, hi) = match (self.n, self.n_max) {
            (Some(n), _) => (n, n),
            (None, Some(m)) => (lo, m),
            (None, None) => (lo, hi),
        };
        let cap = self.cap_override.unwrap_or(suite.cap());
        if lo <= hi && hi > cap {
            return Err(ExperimentError::CapExceeded { suite: suite.id(), n: hi, cap });
        }
        Ok((lo, hi))
    }

    pub fn samples(&self, suite: Suite) -> usize {
        self.samples.unwrap_or(suite.default_samples())
    }

    /// Seed for one unit of work, so that results do not depend on execution order.
    pub fn seed_for(&self, suite: Suite, n: usize, k: u64) -> u64 {
        let s = Suite::ALL.iter().position(|&x| x == suite).unwrap() as u64;
        self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (s << 56) ^ ((n as u64) << 32) ^ k
    }
}
