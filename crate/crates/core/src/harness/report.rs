//! Turns run records into pass/fail summary rows with fixed tolerances.

use std::collections::BTreeMap;

use super::checks::{estimate_joint_factorization, gaussianity_check};
use super::runner::RunRecord;
use super::{CheckKind, ExperimentConfig};
use crate::ensemble::semicircle_moment;
use crate::error::Result;
use crate::spectral::edge_trace_exponent;
use crate::stats::{bootstrap_se, independence_test, ks_two_sample, mean, std_error, variance};

/// Per-replica ESD distance allowed at dimension `n`; the fixed 0.05 plus
/// the `O(1/n)` discretization of an `n`-atom measure.
pub fn semicircle_ks_tolerance(n: usize) -> f64 {
    0.05 + 2.0 / n as f64
}
const MOMENT_SLACK: f64 = 0.01;
const FACTORIZATION_FLOOR: f64 = 0.1;
const PEARSON_LIMIT: f64 = 0.1;
const P_VALUE_FLOOR: f64 = 0.01;
const SKEW_LIMIT: f64 = 0.15;
const KURTOSIS_LIMIT: f64 = 0.3;
const WICK_Z_LIMIT: f64 = 4.0;
const TRUNCATION_CEILING: f64 = 1e-4;
const BAND_RATIO: f64 = 3.0;
const EDGE_KS_LIMIT: f64 = 0.1;

/// One line of the summary CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub check: String,
    pub n: usize,
    pub statistic: String,
    pub value: f64,
    pub tolerance: f64,
    pub stderr: f64,
    pub pass: bool,
}

impl SummaryRow {
    fn build(check: CheckKind, n: usize, statistic: impl Into<String>) -> RowBuilder {
        RowBuilder(SummaryRow {
            check: check.name().into(),
            n,
            statistic: statistic.into(),
            value: 0.0,
            tolerance: 0.0,
            stderr: 0.0,
            pass: false,
        })
    }
}

struct RowBuilder(SummaryRow);

impl RowBuilder {
    fn stderr(mut self, se: f64) -> Self {
        self.0.stderr = se;
        self
    }

    /// Passes when `value <= tolerance`.
    fn at_most(mut self, value: f64, tolerance: f64) -> SummaryRow {
        self.0.value = value;
        self.0.tolerance = tolerance;
        self.0.pass = value <= tolerance;
        self.0
    }

    /// Passes when `value > tolerance`.
    fn above(mut self, value: f64, tolerance: f64) -> SummaryRow {
        self.0.value = value;
        self.0.tolerance = tolerance;
        self.0.pass = value > tolerance;
        self.0
    }
}

fn group<'a>(records: &'a [RunRecord], ensemble: &str) -> BTreeMap<usize, Vec<&'a RunRecord>> {
    let mut by_n: BTreeMap<usize, Vec<&RunRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.ensemble == ensemble) {
        by_n.entry(r.n).or_default().push(r);
    }
    by_n
}

fn powers_of(recs: &[&RunRecord], power: u32) -> Vec<f64> {
    recs.iter()
        .map(|r| r.trace_power(power).unwrap_or(f64::NAN))
        .collect()
}

fn lss_of(recs: &[&RunRecord], label: &str) -> Vec<f64> {
    recs.iter()
        .map(|r| r.lss_value(label).unwrap_or(f64::NAN))
        .collect()
}

/// Evaluates every enabled check on the records of a run.
pub fn evaluate_checks(
    config: &ExperimentConfig,
    records: &[RunRecord],
) -> Result<Vec<SummaryRow>> {
    let main = group(records, &config.ensemble.name());
    let mut rows = Vec::new();
    for &check in &config.checks {
        match check {
            CheckKind::Semicircle => semicircle_rows(&main, &mut rows),
            CheckKind::TraceMean => {
                for (&n, recs) in &main {
                    let v = powers_of(recs, 2);
                    let se = std_error(&v);
                    rows.push(
                        SummaryRow::build(check, n, "abs_dev_tr_w2")
                            .stderr(se)
                            .at_most((mean(&v) - n as f64 / 4.0).abs(), 5.0 * se),
                    );
                }
            }
            CheckKind::Factorization => {
                for (&n, recs) in &main {
                    let owned: Vec<RunRecord> = recs.iter().map(|r| (*r).clone()).collect();
                    for &m in &config.powers {
                        for &t in &config.edge_times {
                            let f = estimate_joint_factorization(&owned, &[m], &[t])?;
                            rows.push(
                                SummaryRow::build(check, n, format!("gap_m{m}_t{t}"))
                                    .stderr(f.stderr)
                                    .at_most(f.gap.abs(), FACTORIZATION_FLOOR.max(4.0 * f.stderr)),
                            );
                        }
                    }
                }
            }
            CheckKind::Independence => {
                for (&n, recs) in &main {
                    let edge: Vec<f64> = recs.iter().map(|r| r.edge[0]).collect();
                    for g in &config.functions {
                        let label = g.label();
                        let res = independence_test(&lss_of(recs, &label), &edge)?;
                        rows.push(
                            SummaryRow::build(check, n, format!("pearson_{label}"))
                                .at_most(res.pearson.abs(), PEARSON_LIMIT),
                        );
                        rows.push(
                            SummaryRow::build(check, n, format!("dcor_pvalue_{label}"))
                                .above(res.p_value, P_VALUE_FLOOR),
                        );
                    }
                }
            }
            CheckKind::Gaussianity => {
                for (&n, recs) in &main {
                    let cols: Vec<Vec<f64>> =
                        config.powers.iter().map(|&m| powers_of(recs, m)).collect();
                    let samples: Vec<Vec<f64>> = (0..recs.len())
                        .map(|r| cols.iter().map(|c| c[r]).collect())
                        .collect();
                    let rep = gaussianity_check(&samples)?;
                    for (i, &m) in config.powers.iter().enumerate() {
                        rows.push(
                            SummaryRow::build(check, n, format!("skewness_m{m}"))
                                .at_most(rep.skewness[i].abs(), SKEW_LIMIT),
                        );
                        rows.push(
                            SummaryRow::build(check, n, format!("excess_kurtosis_m{m}"))
                                .at_most(rep.excess_kurtosis[i].abs(), KURTOSIS_LIMIT),
                        );
                    }
                    rows.push(
                        SummaryRow::build(check, n, "wick_z")
                            .stderr(rep.wick_stderr)
                            .at_most(rep.wick_z, WICK_Z_LIMIT),
                    );
                }
            }
            CheckKind::Truncation => truncation_rows(config, &main, &mut rows),
            CheckKind::EdgeBoundedness => edge_rows(config, &main, &mut rows)?,
            CheckKind::EdgeUniversality => {
                if let Some(other) = config.compare_ensemble {
                    let alt = group(records, &other.name());
                    universality_rows(config, &main, &alt, &mut rows)?;
                }
            }
        }
    }
    Ok(rows)
}

fn semicircle_rows(main: &BTreeMap<usize, Vec<&RunRecord>>, rows: &mut Vec<SummaryRow>) {
    let check = CheckKind::Semicircle;
    for (&n, recs) in main {
        let ks: Vec<f64> = recs.iter().map(|r| r.esd_ks).collect();
        rows.push(
            SummaryRow::build(check, n, "KS")
                .stderr(std_error(&ks))
                .at_most(mean(&ks), semicircle_ks_tolerance(n)),
        );
        for k in 1..=4u32 {
            let v: Vec<f64> = powers_of(recs, 2 * k)
                .iter()
                .map(|x| x / n as f64)
                .collect();
            let se = std_error(&v);
            rows.push(
                SummaryRow::build(check, n, format!("moment_{}", 2 * k))
                    .stderr(se)
                    .at_most(
                        (mean(&v) - semicircle_moment(2 * k)).abs(),
                        3.0 * se + MOMENT_SLACK,
                    ),
            );
        }
    }
}

fn truncation_rows(
    config: &ExperimentConfig,
    main: &BTreeMap<usize, Vec<&RunRecord>>,
    rows: &mut Vec<SummaryRow>,
) {
    let check = CheckKind::Truncation;
    let mut orders = config.truncation_orders.clone();
    orders.sort_unstable();
    orders.dedup();
    for (&n, recs) in main {
        for g in config.functions.iter().filter(|g| g.has_generator()) {
            let label = g.label();
            let full = lss_of(recs, &label);
            let points: Vec<(usize, f64, f64)> = orders
                .iter()
                .map(|&i| {
                    let part = lss_of(recs, &format!("{label}[{i}]"));
                    let diff: Vec<f64> = full.iter().zip(&part).map(|(a, b)| a - b).collect();
                    let se = bootstrap_se(diff.len(), 200, (n as u64) << 8 | i as u64, |idx| {
                        variance(&idx.iter().map(|&j| diff[j]).collect::<Vec<_>>())
                    });
                    (i, variance(&diff), se)
                })
                .collect();
            for pair in points.windows(2) {
                let ((i, vi, si), (j, vj, sj)) = (pair[0], pair[1]);
                let combined = (si * si + sj * sj).sqrt();
                rows.push(
                    SummaryRow::build(check, n, format!("increase_{label}_{i}_to_{j}"))
                        .stderr(combined)
                        .at_most(vj - vi, 2.0 * combined),
                );
            }
            if let Some(&(i, v, se)) = points.last() {
                rows.push(
                    SummaryRow::build(check, n, format!("variance_{label}_{i}"))
                        .stderr(se)
                        .at_most(v, TRUNCATION_CEILING),
                );
            }
        }
    }
}

fn edge_rows(
    config: &ExperimentConfig,
    main: &BTreeMap<usize, Vec<&RunRecord>>,
    rows: &mut Vec<SummaryRow>,
) -> Result<()> {
    let check = CheckKind::EdgeBoundedness;
    for &t in &config.edge_times {
        let mut table = Vec::new();
        for (&n, recs) in main {
            let k = edge_trace_exponent(n, t)?;
            let even = powers_of(recs, 2 * k);
            let odd = powers_of(recs, 2 * k + 1);
            table.push((
                n,
                mean(&even),
                std_error(&even),
                mean(&odd),
                std_error(&odd),
            ));
        }
        let largest_n = table.last().map_or(0, |r| r.0);
        let lo = table.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let hi = table.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        let ratio = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        rows.push(
            SummaryRow::build(check, largest_n, format!("even_band_ratio_t{t}"))
                .at_most(ratio, BAND_RATIO),
        );
        if let (Some(first), Some(last)) = (table.first(), table.last()) {
            if table.len() > 1 {
                let combined = (first.4 * first.4 + last.4 * last.4).sqrt();
                rows.push(
                    SummaryRow::build(check, last.0, format!("odd_increase_t{t}"))
                        .stderr(combined)
                        .at_most(last.3.abs() - first.3.abs(), 2.0 * combined),
                );
            }
        }
    }
    Ok(())
}

fn universality_rows(
    config: &ExperimentConfig,
    main: &BTreeMap<usize, Vec<&RunRecord>>,
    alt: &BTreeMap<usize, Vec<&RunRecord>>,
    rows: &mut Vec<SummaryRow>,
) -> Result<()> {
    let check = CheckKind::EdgeUniversality;
    for (&n, recs) in main {
        let Some(other) = alt.get(&n) else { continue };
        let a: Vec<f64> = recs.iter().map(|r| r.edge[0]).collect();
        let b: Vec<f64> = other.iter().map(|r| r.edge[0]).collect();
        rows.push(
            SummaryRow::build(check, n, "edge_ks").at_most(ks_two_sample(&a, &b), EDGE_KS_LIMIT),
        );
        for &t in &config.edge_times {
            let k = edge_trace_exponent(n, t)?;
            let (x, y) = (powers_of(recs, 2 * k), powers_of(other, 2 * k));
            let combined = std_error(&x).hypot(std_error(&y));
            rows.push(
                SummaryRow::build(check, n, format!("even_trace_diff_t{t}"))
                    .stderr(combined)
                    .at_most((mean(&x) - mean(&y)).abs(), 4.0 * combined),
            );
        }
    }
    Ok(())
}
