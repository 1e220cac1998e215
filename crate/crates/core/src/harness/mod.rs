//! Seeded Monte Carlo experiments over Wigner samples.
//!
//! Replica `r` at dimension `n` is sampled with seed
//! [`derive_seed`](crate::rng::derive_seed)`(master, n, r)`. Replicas are
//! independent work units; results are gathered by index, so output never
//! depends on the worker count or the schedule.

mod checks;
mod report;
mod runner;

use std::fmt;
use std::str::FromStr;

use crate::ensemble::EntryDistribution;
use crate::error::{LabError, Result};
use crate::spectral::TestFunction;

pub use checks::{
    edge_boundedness_scan, edge_distribution_compare, estimate_joint_factorization,
    estimate_joint_factorization_with, gaussianity_check, truncation_variance_scan, Centering,
    EdgeTraceRow, Factorization, GaussianityReport, TruncationPoint, DEFAULT_BOOTSTRAP,
    EXACT_CENTERING_MAX_N,
};
pub use report::{evaluate_checks, SummaryRow};
pub use runner::{
    map_replicas, run_monte_carlo, run_monte_carlo_with, NamedValue, PowerValue, RunRecord,
    MAX_DIMENSION, MAX_REPLICAS,
};

/// Named verification performed on the records of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    /// ESD Kolmogorov distance and even moments against the semicircle.
    Semicircle,
    /// Mean of `Tr W^2` against `n / 4`.
    TraceMean,
    /// Joint centered moment of fixed and edge-length trace powers against
    /// the product of marginals.
    Factorization,
    /// Centered linear statistics against the top edge statistic.
    Independence,
    /// Skewness, kurtosis and pair-partition factorization of centered trace powers.
    Gaussianity,
    /// Variance of the truncation remainder of analytic test functions.
    Truncation,
    /// Even/odd edge-length trace means across the dimension grid.
    EdgeBoundedness,
    /// Edge statistics and edge-length traces against a second ensemble.
    EdgeUniversality,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Semicircle,
        CheckKind::TraceMean,
        CheckKind::Factorization,
        CheckKind::Independence,
        CheckKind::Gaussianity,
        CheckKind::Truncation,
        CheckKind::EdgeBoundedness,
        CheckKind::EdgeUniversality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Semicircle => "semicircle",
            CheckKind::TraceMean => "trace_mean",
            CheckKind::Factorization => "factorization",
            CheckKind::Independence => "independence",
            CheckKind::Gaussianity => "gaussianity",
            CheckKind::Truncation => "truncation",
            CheckKind::EdgeBoundedness => "edge_boundedness",
            CheckKind::EdgeUniversality => "edge_universality",
        }
    }

    /// Smallest replica count the check accepts.
    pub fn min_replicas(self) -> usize {
        match self {
            CheckKind::Independence | CheckKind::Factorization => 100,
            CheckKind::Gaussianity => 500,
            _ => 2,
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| LabError::Config {
                key: "checks".into(),
                message: format!("unknown check '{s}'"),
            })
    }
}

/// Declarative description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ensemble: EntryDistribution,
    pub dimensions: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    pub functions: Vec<TestFunction>,
    /// Orders `i` at which analytic functions are also truncated to `g^{(i)}`.
    pub truncation_orders: Vec<usize>,
    /// Fixed powers `m_i`.
    pub powers: Vec<u32>,
    /// Edge times `t_j`; the matching powers are `[t_j n^{2/3}]`.
    pub edge_times: Vec<f64>,
    /// Number of top eigenvalues kept as edge statistics.
    pub edge_count: usize,
    pub checks: Vec<CheckKind>,
    /// Second ensemble for [`CheckKind::EdgeUniversality`].
    pub compare_ensemble: Option<EntryDistribution>,
    /// Worker threads; 0 uses the global pool. Never affects results.
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(
        ensemble: EntryDistribution,
        dimensions: Vec<usize>,
        replicas: usize,
        seed: u64,
    ) -> Self {
        Self {
            ensemble,
            dimensions,
            replicas,
            seed,
            functions: Vec::new(),
            truncation_orders: Vec::new(),
            powers: Vec::new(),
            edge_times: Vec::new(),
            edge_count: 1,
            checks: Vec::new(),
            compare_ensemble: None,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: String| {
            Err(LabError::Config {
                key: key.into(),
                message,
            })
        };
        if self.dimensions.is_empty() {
            return bad("dimensions", "at least one dimension is required".into());
        }
        if let Some(&n) = self.dimensions.iter().find(|&&n| n == 0) {
            return bad("dimensions", format!("dimension {n} must be at least 1"));
        }
        if self.replicas < 2 {
            return bad(
                "replicas",
                format!("{} replicas; need at least 2", self.replicas),
            );
        }
        if let Some(m) = self.powers.iter().find(|&&m| m == 0) {
            return bad("powers", format!("power {m} must be at least 1"));
        }
        if let Some(t) = self
            .edge_times
            .iter()
            .find(|&&t| !(t > 0.0 && t.is_finite()))
        {
            return bad("edge_times", format!("edge time {t} must be positive"));
        }
        let smallest = *self.dimensions.iter().min().expect("non-empty");
        if self.edge_count == 0 || self.edge_count > smallest {
            return bad(
                "edge_count",
                format!("{} outside 1..={smallest}", self.edge_count),
            );
        }
        for check in &self.checks {
            if self.replicas < check.min_replicas() {
                return bad(
                    "replicas",
                    format!(
                        "check '{check}' needs at least {} replicas, got {}",
                        check.min_replicas(),
                        self.replicas
                    ),
                );
            }
            match check {
                CheckKind::EdgeUniversality if self.compare_ensemble.is_none() => {
                    return bad(
                        "compare_ensemble",
                        "required by check 'edge_universality'".into(),
                    )
                }
                CheckKind::EdgeBoundedness | CheckKind::EdgeUniversality
                    if self.edge_times.is_empty() =>
                {
                    return bad("edge_times", format!("required by check '{check}'"))
                }
                CheckKind::Factorization
                    if self.powers.is_empty() || self.edge_times.is_empty() =>
                {
                    return bad(
                        "powers",
                        "check 'factorization' needs both powers and edge_times".into(),
                    )
                }
                CheckKind::Gaussianity if self.powers.is_empty() => {
                    return bad("powers", "required by check 'gaussianity'".into())
                }
                CheckKind::Independence if self.functions.is_empty() => {
                    return bad("functions", "required by check 'independence'".into())
                }
                CheckKind::Truncation
                    if self.truncation_orders.is_empty()
                        || !self.functions.iter().any(TestFunction::has_generator) =>
                {
                    return bad(
                        "truncation_orders",
                        "check 'truncation' needs orders and an analytic function".into(),
                    )
                }
                _ => {}
            }
        }
        Ok(())
    }
}
