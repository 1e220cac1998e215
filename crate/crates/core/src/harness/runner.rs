use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CheckKind, ExperimentConfig};
use crate::ensemble::{sample_wigner, EntryDistribution};
use crate::error::{LabError, Result};
use crate::rng::{derive_seed, mix64};
use crate::spectral::{
    edge_statistics, edge_trace_exponent, eigenvalues_sym, esd_kolmogorov_distance, lss,
    trace_powers, SpectralSummary, TestFunction,
};

pub const MAX_DIMENSION: usize = 4096;
pub const MAX_REPLICAS: usize = 1_000_000;
/// Upper bound on `sum_n n^3 * replicas`, roughly an hour of single-core work.
const MAX_WORK: f64 = 5.0e13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub function: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerValue {
    pub power: u32,
    pub value: f64,
}

/// Observables of one replica.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub ensemble: String,
    pub n: usize,
    pub replica: usize,
    pub seed: u64,
    /// First 16 hex digits of SHA-256 over the little-endian eigenvalues.
    pub eigen_digest: String,
    pub lss: Vec<NamedValue>,
    pub trace_powers: Vec<PowerValue>,
    /// `2 n^{2/3} (lambda_i - 1)` for the top eigenvalues.
    pub edge: Vec<f64>,
    /// Kolmogorov distance of this replica's ESD to the semicircle.
    pub esd_ks: f64,
}

impl RunRecord {
    pub fn trace_power(&self, power: u32) -> Option<f64> {
        self.trace_powers
            .iter()
            .find(|p| p.power == power)
            .map(|p| p.value)
    }

    pub fn lss_value(&self, label: &str) -> Option<f64> {
        self.lss
            .iter()
            .find(|v| v.function == label)
            .map(|v| v.value)
    }
}

pub(crate) fn eigen_digest(eigenvalues: &[f64]) -> String {
    let mut h = Sha256::new();
    for x in eigenvalues {
        h.update(x.to_le_bytes());
    }
    h.finalize()[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn check_capacity(dimensions: &[usize], replicas: usize) -> Result<()> {
    if let Some(n) = dimensions.iter().find(|&&n| n > MAX_DIMENSION) {
        return Err(LabError::Capacity(format!(
            "dimension {n} exceeds the limit of {MAX_DIMENSION}"
        )));
    }
    if replicas > MAX_REPLICAS {
        return Err(LabError::Capacity(format!(
            "{replicas} replicas exceed the limit of {MAX_REPLICAS}"
        )));
    }
    let work: f64 = dimensions
        .iter()
        .map(|&n| (n as f64).powi(3) * replicas as f64)
        .sum();
    if work > MAX_WORK {
        return Err(LabError::Capacity(format!(
            "requested eigenvalue work {work:.3e} exceeds the limit of {MAX_WORK:.1e}"
        )));
    }
    Ok(())
}

fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LabError::Capacity(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Samples `replicas` matrices at dimension `n` and maps each spectrum
/// through `f`. Output is ordered by replica index.
pub fn map_replicas<T, F>(
    dist: &EntryDistribution,
    n: usize,
    replicas: usize,
    master_seed: u64,
    workers: usize,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &SpectralSummary) -> Result<T> + Sync + Send,
{
    check_capacity(&[n], replicas)?;
    if n == 0 {
        return Err(LabError::InvalidDimension("n must be at least 1".into()));
    }
    with_workers(workers, || {
        (0..replicas)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(master_seed, n as u64, r as u64);
                let sample = sample_wigner(n, dist, seed)?;
                let summary = eigenvalues_sym(&sample)?;
                f(r, &summary)
            })
            .collect::<Result<Vec<T>>>()
    })?
}

/// Everything a record stores at dimension `n`.
struct Observables {
    functions: Vec<(String, TestFunction)>,
    powers: Vec<u32>,
    edge_count: usize,
}

impl Observables {
    fn for_config(config: &ExperimentConfig, n: usize) -> Result<Self> {
        let mut functions = Vec::new();
        for g in &config.functions {
            functions.push((g.label(), g.clone()));
            if g.has_generator() {
                for &order in &config.truncation_orders {
                    functions.push((format!("{}[{order}]", g.label()), g.truncate(order)));
                }
            }
        }
        let mut powers: Vec<u32> = (1..=8).chain(config.powers.iter().copied()).collect();
        for &t in &config.edge_times {
            let k = edge_trace_exponent(n, t)?;
            powers.extend([k, 2 * k, 2 * k + 1]);
        }
        powers.sort_unstable();
        powers.dedup();
        Ok(Self {
            functions,
            powers,
            edge_count: config.edge_count.min(n),
        })
    }

    fn record(&self, dist_name: &str, replica: usize, s: &SpectralSummary) -> Result<RunRecord> {
        let values = trace_powers(s, &self.powers);
        Ok(RunRecord {
            ensemble: dist_name.to_string(),
            n: s.n,
            replica,
            seed: s.seed,
            eigen_digest: eigen_digest(&s.eigenvalues),
            lss: self
                .functions
                .iter()
                .map(|(label, g)| NamedValue {
                    function: label.clone(),
                    value: lss(s, g),
                })
                .collect(),
            trace_powers: self
                .powers
                .iter()
                .zip(values)
                .map(|(&power, value)| PowerValue { power, value })
                .collect(),
            edge: edge_statistics(s, self.edge_count)?,
            esd_ks: esd_kolmogorov_distance(&s.eigenvalues),
        })
    }
}

/// Master seed used for the comparison ensemble of a config.
pub(crate) fn compare_seed(master: u64) -> u64 {
    mix64(master ^ 0x00C0_DE0F_C0AB_A5E5)
}

/// Runs every replica of every dimension; see [`run_monte_carlo_with`].
pub fn run_monte_carlo(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    run_monte_carlo_with(config, |_| Ok(()))
}

/// Runs the experiment, handing each finished `(ensemble, n)` batch to
/// `on_batch` in a fixed order before moving on.
pub fn run_monte_carlo_with<F>(config: &ExperimentConfig, mut on_batch: F) -> Result<Vec<RunRecord>>
where
    F: FnMut(&[RunRecord]) -> Result<()>,
{
    config.validate()?;
    let mut ensembles = vec![(config.ensemble, config.seed)];
    if config.checks.contains(&CheckKind::EdgeUniversality) {
        if let Some(other) = config.compare_ensemble {
            ensembles.push((other, compare_seed(config.seed)));
        }
    }
    let total_runs = config.replicas * ensembles.len();
    check_capacity(&config.dimensions, total_runs)?;

    let mut all = Vec::with_capacity(config.dimensions.len() * total_runs);
    for (dist, master) in ensembles {
        let name = dist.name();
        for &n in &config.dimensions {
            let obs = Observables::for_config(config, n)?;
            let batch = map_replicas(&dist, n, config.replicas, master, config.workers, |r, s| {
                obs.record(&name, r, s)
            })?;
            on_batch(&batch)?;
            all.extend(batch);
        }
    }
    Ok(all)
}
