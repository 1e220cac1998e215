//! Statistical estimators over Monte Carlo output.

use super::runner::{map_replicas, RunRecord};
use crate::ensemble::EntryDistribution;
use crate::error::{LabError, Result};
use crate::moments::{trace_moment_direct, MomentTable};
use crate::rng::{mix64, SeqRng};
use crate::spectral::{edge_statistics, edge_trace_exponent, trace_powers, TestFunction};
use crate::stats::{bootstrap_se, ks_two_sample, mean, std_error, variance};

/// Bootstrap resamples used for every reported standard error.
pub const DEFAULT_BOOTSTRAP: usize = 200;
const MIN_FACTORIZATION_RECORDS: usize = 100;
const MIN_GAUSSIANITY_SAMPLES: usize = 500;
const MIN_EDGE_COMPARE: usize = 500;

/// How trace powers were centered before forming joint moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// Sample means over the replicas in use.
    Empirical,
    /// Exact `E[Tr W^k]` from the enumeration oracle; used for `n <= 4`.
    Exact,
}

/// Largest dimension centered by exact expectations.
pub const EXACT_CENTERING_MAX_N: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub joint: f64,
    pub product: f64,
    pub gap: f64,
    pub stderr: f64,
    pub centering: Centering,
}

fn column(records: &[RunRecord], power: u32) -> Result<Vec<f64>> {
    records
        .iter()
        .map(|r| {
            r.trace_power(power).ok_or_else(|| {
                LabError::Input(format!(
                    "record (n = {}, replica {}) has no trace power {power}",
                    r.n, r.replica
                ))
            })
        })
        .collect()
}

/// Exact means of the given powers, when the oracle can supply them.
fn exact_centers(records: &[RunRecord], n: usize, powers: &[u32]) -> Option<Vec<f64>> {
    if n > EXACT_CENTERING_MAX_N {
        return None;
    }
    let dist = EntryDistribution::from_name(&records[0].ensemble).ok()?;
    let table = MomentTable::for_distribution(&dist);
    powers
        .iter()
        .map(|&k| trace_moment_direct(n, k as usize, &table).ok())
        .collect()
}

/// `(joint, product, gap)` over the rows `idx` of the two column groups,
/// each column centered by `exact` when given, else by its mean over `idx`.
fn factorization_on(
    first: &[Vec<f64>],
    second: &[Vec<f64>],
    idx: &[usize],
    exact: Option<&(Vec<f64>, Vec<f64>)>,
) -> (f64, f64, f64) {
    let len = idx.len() as f64;
    let centers = |cols: &[Vec<f64>]| -> Vec<f64> {
        cols.iter()
            .map(|c| idx.iter().map(|&i| c[i]).sum::<f64>() / len)
            .collect()
    };
    let (ca, cb) = match exact {
        Some((a, b)) => (a.clone(), b.clone()),
        None => (centers(first), centers(second)),
    };
    let (mut joint, mut ma, mut mb) = (0.0, 0.0, 0.0);
    for &i in idx {
        let pa: f64 = first.iter().zip(&ca).map(|(c, m)| c[i] - m).product();
        let pb: f64 = second.iter().zip(&cb).map(|(c, m)| c[i] - m).product();
        joint += pa * pb;
        ma += pa;
        mb += pb;
    }
    let (joint, product) = (joint / len, (ma / len) * (mb / len));
    (joint, product, joint - product)
}

/// Joint centered moment of `Tr W^{m_i}` and `Tr W^{[t_j n^{2/3}]}` against
/// the product of the two marginal centered moments. Centering uses the
/// empirical mean across replicas.
pub fn estimate_joint_factorization(
    records: &[RunRecord],
    m_list: &[u32],
    t_list: &[f64],
) -> Result<Factorization> {
    let seed = records.first().map_or(0, |r| mix64(r.seed));
    estimate_joint_factorization_with(records, m_list, t_list, DEFAULT_BOOTSTRAP, seed)
}

pub fn estimate_joint_factorization_with(
    records: &[RunRecord],
    m_list: &[u32],
    t_list: &[f64],
    bootstrap: usize,
    seed: u64,
) -> Result<Factorization> {
    if records.len() < MIN_FACTORIZATION_RECORDS {
        return Err(LabError::SampleSize {
            required: MIN_FACTORIZATION_RECORDS,
            got: records.len(),
        });
    }
    let n = records[0].n;
    if records.iter().any(|r| r.n != n) {
        return Err(LabError::Input("records mix several dimensions".into()));
    }
    let first = m_list
        .iter()
        .map(|&m| column(records, m))
        .collect::<Result<Vec<_>>>()?;
    let second = t_list
        .iter()
        .map(|&t| column(records, edge_trace_exponent(n, t)?))
        .collect::<Result<Vec<_>>>()?;
    let edge_powers = t_list
        .iter()
        .map(|&t| edge_trace_exponent(n, t))
        .collect::<Result<Vec<_>>>()?;
    let exact = exact_centers(records, n, m_list).zip(exact_centers(records, n, &edge_powers));
    let all: Vec<usize> = (0..records.len()).collect();
    let (joint, product, gap) = factorization_on(&first, &second, &all, exact.as_ref());
    let stderr = bootstrap_se(records.len(), bootstrap, seed, |idx| {
        factorization_on(&first, &second, idx, exact.as_ref()).2
    });
    Ok(Factorization {
        joint,
        product,
        gap,
        stderr,
        centering: if exact.is_some() {
            Centering::Exact
        } else {
            Centering::Empirical
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianityReport {
    /// Per component.
    pub skewness: Vec<f64>,
    /// Per component.
    pub excess_kurtosis: Vec<f64>,
    /// `max |E[Z_a Z_b Z_c Z_d] - (C_ab C_cd + C_ac C_bd + C_ad C_bc)|` over
    /// index multisets, from empirical moments of the centered sample.
    pub wick_gap: f64,
    /// Bootstrap standard error of the gap at the maximizing tuple.
    pub wick_stderr: f64,
    /// Largest gap-to-standard-error ratio over all tuples.
    pub wick_z: f64,
}

fn quadruples(d: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in a..d {
            for c in b..d {
                for e in c..d {
                    out.push([a, b, c, e]);
                }
            }
        }
    }
    out
}

fn wick_gaps(cols: &[Vec<f64>], idx: &[usize], tuples: &[[usize; 4]]) -> Vec<f64> {
    let len = idx.len() as f64;
    let z: Vec<Vec<f64>> = cols
        .iter()
        .map(|c| {
            let m = idx.iter().map(|&i| c[i]).sum::<f64>() / len;
            idx.iter().map(|&i| c[i] - m).collect()
        })
        .collect();
    let d = cols.len();
    let mut cov = vec![0.0; d * d];
    for a in 0..d {
        for b in 0..d {
            cov[a * d + b] = z[a].iter().zip(&z[b]).map(|(x, y)| x * y).sum::<f64>() / len;
        }
    }
    tuples
        .iter()
        .map(|&[a, b, c, e]| {
            let fourth = (0..idx.len())
                .map(|r| z[a][r] * z[b][r] * z[c][r] * z[e][r])
                .sum::<f64>()
                / len;
            let pairings = cov[a * d + b] * cov[c * d + e]
                + cov[a * d + c] * cov[b * d + e]
                + cov[a * d + e] * cov[b * d + c];
            fourth - pairings
        })
        .collect()
}

/// Skewness, excess kurtosis and pair-partition (Wick) gap of a sample of
/// vectors; `samples[r]` is replica `r`.
pub fn gaussianity_check(samples: &[Vec<f64>]) -> Result<GaussianityReport> {
    if samples.len() < MIN_GAUSSIANITY_SAMPLES {
        return Err(LabError::SampleSize {
            required: MIN_GAUSSIANITY_SAMPLES,
            got: samples.len(),
        });
    }
    let d = samples[0].len();
    if d == 0 || samples.iter().any(|s| s.len() != d) {
        return Err(LabError::Input(
            "sample vectors must share a positive length".into(),
        ));
    }
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|a| samples.iter().map(|s| s[a]).collect())
        .collect();
    let mut skewness = Vec::with_capacity(d);
    let mut excess_kurtosis = Vec::with_capacity(d);
    for c in &cols {
        skewness.push(crate::stats::skewness(c)?);
        excess_kurtosis.push(crate::stats::excess_kurtosis(c)?);
    }

    let tuples = quadruples(d);
    let all: Vec<usize> = (0..samples.len()).collect();
    let gaps = wick_gaps(&cols, &all, &tuples);

    let mut rng = SeqRng::new(mix64(samples.len() as u64 ^ 0x61C4), 0xB007);
    let mut idx = vec![0usize; samples.len()];
    let boot: Vec<Vec<f64>> = (0..DEFAULT_BOOTSTRAP)
        .map(|_| {
            for slot in idx.iter_mut() {
                *slot = rng.below(samples.len() as u64) as usize;
            }
            wick_gaps(&cols, &idx, &tuples)
        })
        .collect();
    let ses: Vec<f64> = (0..tuples.len())
        .map(|t| variance(&boot.iter().map(|b| b[t]).collect::<Vec<_>>()).sqrt())
        .collect();

    let (mut wick_gap, mut wick_stderr, mut wick_z) = (0.0f64, 0.0, 0.0f64);
    for (g, se) in gaps.iter().zip(&ses) {
        if g.abs() > wick_gap {
            wick_gap = g.abs();
            wick_stderr = *se;
        }
        if *se > 0.0 {
            wick_z = wick_z.max(g.abs() / se);
        }
    }
    Ok(GaussianityReport {
        skewness,
        excess_kurtosis,
        wick_gap,
        wick_stderr,
        wick_z,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPoint {
    pub order: usize,
    pub variance: f64,
    pub stderr: f64,
}

/// `Var[Tr g(W) - Tr g^{(i)}(W)]` for each order `i`.
pub fn truncation_variance_scan(
    g: &TestFunction,
    orders: &[usize],
    n: usize,
    replicas: usize,
    dist: &EntryDistribution,
    seed: u64,
    workers: usize,
) -> Result<Vec<TruncationPoint>> {
    if replicas < 2 {
        return Err(LabError::SampleSize {
            required: 2,
            got: replicas,
        });
    }
    let truncations: Vec<TestFunction> = orders.iter().map(|&i| g.truncate(i)).collect();
    let remainders = map_replicas(dist, n, replicas, seed, workers, |_, s| {
        Ok(truncations
            .iter()
            .map(|p| {
                s.eigenvalues
                    .iter()
                    .map(|&x| g.eval(x) - p.eval(x))
                    .sum::<f64>()
            })
            .collect::<Vec<f64>>())
    })?;
    Ok(orders
        .iter()
        .enumerate()
        .map(|(col, &order)| {
            let v: Vec<f64> = remainders.iter().map(|r| r[col]).collect();
            let stderr = bootstrap_se(
                v.len(),
                DEFAULT_BOOTSTRAP,
                mix64(seed ^ order as u64),
                |idx| {
                    let sub: Vec<f64> = idx.iter().map(|&i| v[i]).collect();
                    variance(&sub)
                },
            );
            TruncationPoint {
                order,
                variance: variance(&v),
                stderr,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTraceRow {
    pub n: usize,
    /// `k = [t n^{2/3}]`.
    pub k: u32,
    pub even_mean: f64,
    pub even_se: f64,
    pub odd_mean: f64,
    pub odd_se: f64,
}

/// Monte Carlo means of `Tr W^{2k}` and `Tr W^{2k+1}` with `k = [t n^{2/3}]`.
pub fn edge_boundedness_scan(
    t: f64,
    n_list: &[usize],
    replicas: usize,
    dist: &EntryDistribution,
    seed: u64,
    workers: usize,
) -> Result<Vec<EdgeTraceRow>> {
    if replicas < 2 {
        return Err(LabError::SampleSize {
            required: 2,
            got: replicas,
        });
    }
    n_list
        .iter()
        .map(|&n| {
            let k = edge_trace_exponent(n, t)?;
            let pairs = map_replicas(dist, n, replicas, seed, workers, |_, s| {
                let v = trace_powers(s, &[2 * k, 2 * k + 1]);
                Ok((v[0], v[1]))
            })?;
            let even: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let odd: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            Ok(EdgeTraceRow {
                n,
                k,
                even_mean: mean(&even),
                even_se: std_error(&even),
                odd_mean: mean(&odd),
                odd_se: std_error(&odd),
            })
        })
        .collect()
}

/// Two-sample Kolmogorov-Smirnov distance between the top edge statistic
/// `s_1` of two ensembles.
pub fn edge_distribution_compare(
    ensemble_a: &EntryDistribution,
    ensemble_b: &EntryDistribution,
    n: usize,
    replicas: usize,
    seed_a: u64,
    seed_b: u64,
    workers: usize,
) -> Result<f64> {
    if replicas < MIN_EDGE_COMPARE {
        return Err(LabError::SampleSize {
            required: MIN_EDGE_COMPARE,
            got: replicas,
        });
    }
    let top = |_: usize, s: &crate::spectral::SpectralSummary| Ok(edge_statistics(s, 1)?[0]);
    let a = map_replicas(ensemble_a, n, replicas, seed_a, workers, top)?;
    let b = map_replicas(ensemble_b, n, replicas, seed_b, workers, top)?;
    Ok(ks_two_sample(&a, &b))
}
