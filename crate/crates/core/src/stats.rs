//! Sample statistics, resampling and the dependence/two-sample tests used
//! by the harness. All resampling is driven by counter-based streams so
//! every reported standard error and p-value is reproducible.

use crate::error::{LabError, Result};
use crate::rng::SeqRng;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Standard error of the sample mean.
pub fn std_error(x: &[f64]) -> f64 {
    (variance(x) / x.len() as f64).sqrt()
}

/// `x - mean(x)`.
pub fn centered(x: &[f64]) -> Vec<f64> {
    let m = mean(x);
    x.iter().map(|v| v - m).collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    same_length(x, y)?;
    let (cx, cy) = (centered(x), centered(y));
    let sxy: f64 = cx.iter().zip(&cy).map(|(a, b)| a * b).sum();
    let sxx: f64 = cx.iter().map(|a| a * a).sum();
    let syy: f64 = cy.iter().map(|b| b * b).sum();
    if sxx == 0.0 || syy == 0.0 {
        return Err(LabError::UndefinedVariance);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn same_length(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(LabError::Input(format!(
            "sample lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// Standardized third moment `m3 / m2^{3/2}` (population form).
pub fn skewness(x: &[f64]) -> Result<f64> {
    let c = centered(x);
    let n = x.len() as f64;
    let m2 = c.iter().map(|v| v * v).sum::<f64>() / n;
    if m2 == 0.0 {
        return Err(LabError::UndefinedVariance);
    }
    let m3 = c.iter().map(|v| v * v * v).sum::<f64>() / n;
    Ok(m3 / m2.powf(1.5))
}

/// `m4 / m2^2 - 3` (population form).
pub fn excess_kurtosis(x: &[f64]) -> Result<f64> {
    let c = centered(x);
    let n = x.len() as f64;
    let m2 = c.iter().map(|v| v * v).sum::<f64>() / n;
    if m2 == 0.0 {
        return Err(LabError::UndefinedVariance);
    }
    let m4 = c.iter().map(|v| v * v * v * v).sum::<f64>() / n;
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Two-sample Kolmogorov-Smirnov distance `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Bootstrap standard error of `stat` over `reps` resamples of `0..len`.
pub fn bootstrap_se<F>(len: usize, reps: usize, seed: u64, stat: F) -> f64
where
    F: Fn(&[usize]) -> f64,
{
    let mut rng = SeqRng::new(seed, 0xB007);
    let mut idx = vec![0usize; len];
    let values: Vec<f64> = (0..reps)
        .map(|_| {
            for slot in idx.iter_mut() {
                *slot = rng.below(len as u64) as usize;
            }
            stat(&idx)
        })
        .collect();
    variance(&values).sqrt()
}

/// Double-centered distance matrix `A_ij = a_ij - a_i. - a_.j + a_..`.
fn double_centered(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = (x[i] - x[j]).abs();
        }
    }
    let row: Vec<f64> = (0..n)
        .map(|i| d[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64)
        .collect();
    let grand = row.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            // Distance matrices are symmetric: column means equal row means.
            d[i * n + j] += grand - row[i] - row[j];
        }
    }
    d
}

fn dcov_sq(a: &[f64], b: &[f64], n: usize, perm: Option<&[usize]>) -> f64 {
    let mut acc = 0.0;
    match perm {
        None => {
            for (x, y) in a.iter().zip(b) {
                acc += x * y;
            }
        }
        Some(p) => {
            for i in 0..n {
                let arow = &a[i * n..(i + 1) * n];
                let brow = &b[p[i] * n..(p[i] + 1) * n];
                for j in 0..n {
                    acc += arow[j] * brow[p[j]];
                }
            }
        }
    }
    acc / (n * n) as f64
}

/// Distance correlation (V-statistic form) of two equal-length samples.
pub fn distance_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    same_length(x, y)?;
    let n = x.len();
    let (a, b) = (double_centered(x), double_centered(y));
    let vx = dcov_sq(&a, &a, n, None);
    let vy = dcov_sq(&b, &b, n, None);
    if vx <= 0.0 || vy <= 0.0 {
        return Err(LabError::UndefinedVariance);
    }
    Ok((dcov_sq(&a, &b, n, None).max(0.0) / (vx * vy).sqrt()).sqrt())
}

pub const DEFAULT_PERMUTATIONS: usize = 500;
pub const DEFAULT_TEST_SEED: u64 = 0x5EED_1DE9;
pub const MIN_INDEPENDENCE_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceResult {
    pub pearson: f64,
    pub dcor: f64,
    /// Permutation p-value of the distance correlation, `(1 + #{perm >= obs}) / (P + 1)`.
    pub p_value: f64,
}

pub fn independence_test(x: &[f64], y: &[f64]) -> Result<IndependenceResult> {
    independence_test_with(x, y, DEFAULT_PERMUTATIONS, DEFAULT_TEST_SEED)
}

pub fn independence_test_with(
    x: &[f64],
    y: &[f64],
    permutations: usize,
    seed: u64,
) -> Result<IndependenceResult> {
    same_length(x, y)?;
    if x.len() < MIN_INDEPENDENCE_SAMPLES {
        return Err(LabError::SampleSize {
            required: MIN_INDEPENDENCE_SAMPLES,
            got: x.len(),
        });
    }
    let pearson = pearson(x, y)?;
    let n = x.len();
    let (a, b) = (double_centered(x), double_centered(y));
    let vx = dcov_sq(&a, &a, n, None);
    let vy = dcov_sq(&b, &b, n, None);
    if vx <= 0.0 || vy <= 0.0 {
        return Err(LabError::UndefinedVariance);
    }
    let observed = dcov_sq(&a, &b, n, None);
    let dcor = (observed.max(0.0) / (vx * vy).sqrt()).sqrt();

    let mut rng = SeqRng::new(seed, 0xD0C0);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut exceed = 0usize;
    // Relative slack so that a permutation reproducing the observed pairing
    // counts as at least as extreme despite summation-order rounding.
    let threshold = observed - 1e-12 * observed.abs();
    for _ in 0..permutations {
        rng.shuffle(&mut perm);
        if dcov_sq(&a, &b, n, Some(&perm)) >= threshold {
            exceed += 1;
        }
    }
    Ok(IndependenceResult {
        pearson,
        dcor,
        p_value: (1 + exceed) as f64 / (permutations + 1) as f64,
    })
}
