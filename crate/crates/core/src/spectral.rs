//! Spectra of samples and the observables built on them: linear spectral
//! statistics, trace powers and edge-rescaled eigenvalues.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eigen::symmetric_eigenvalues;
use crate::ensemble::{semicircle_cdf, WignerSample};
use crate::error::{LabError, Result};

/// Sorted spectrum of one sample, `lambda_1 >= ... >= lambda_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
    pub ensemble: String,
}

impl SpectralSummary {
    /// Spectrum of `-W`; its edge statistics describe the lower edge of `W`.
    pub fn negated(&self) -> SpectralSummary {
        let mut eigenvalues: Vec<f64> = self.eigenvalues.iter().rev().map(|x| -x).collect();
        eigenvalues.shrink_to_fit();
        SpectralSummary {
            n: self.n,
            eigenvalues,
            seed: self.seed,
            ensemble: self.ensemble.clone(),
        }
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn eigenvalues_sym(matrix: &WignerSample) -> Result<SpectralSummary> {
    let eigenvalues = symmetric_eigenvalues(&matrix.entries, matrix.n)?;
    Ok(SpectralSummary {
        n: matrix.n,
        eigenvalues,
        seed: matrix.seed,
        ensemble: matrix.ensemble.clone(),
    })
}

/// Named analytic functions with an explicit power-series generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum AnalyticKind {
    Exp,
    Cos,
    /// `1 / (pole - x)`, analytic on `|x| < |pole|`.
    Resolvent {
        pole: f64,
    },
}

impl AnalyticKind {
    pub fn value(self, x: f64) -> f64 {
        match self {
            AnalyticKind::Exp => x.exp(),
            AnalyticKind::Cos => x.cos(),
            AnalyticKind::Resolvent { pole } => 1.0 / (pole - x),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            AnalyticKind::Exp => x.exp(),
            AnalyticKind::Cos => -x.sin(),
            AnalyticKind::Resolvent { pole } => 1.0 / ((pole - x) * (pole - x)),
        }
    }

    /// Taylor coefficient `g_i` at the origin.
    pub fn coefficient(self, i: usize) -> f64 {
        match self {
            AnalyticKind::Exp => 1.0 / factorial(i),
            AnalyticKind::Cos => {
                if i % 2 == 1 {
                    0.0
                } else if (i / 2).is_multiple_of(2) {
                    1.0 / factorial(i)
                } else {
                    -1.0 / factorial(i)
                }
            }
            AnalyticKind::Resolvent { pole } => pole.powi(-(i as i32) - 1),
        }
    }

    pub fn name(self) -> String {
        match self {
            AnalyticKind::Exp => "exp".into(),
            AnalyticKind::Cos => "cos".into(),
            AnalyticKind::Resolvent { pole } => format!("resolvent({pole})"),
        }
    }
}

fn factorial(i: usize) -> f64 {
    (1..=i).fold(1.0, |acc, j| acc * j as f64)
}

/// Growth class of a test function, recorded alongside its values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    Polynomial {
        degree: usize,
    },
    Entire,
    /// Analytic on a finite disc around the origin.
    Disc,
}

/// Function `g` whose statistic `Tr g(W)` is observed.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// Coefficients `g_0, ..., g_d`.
    Polynomial(Vec<f64>),
    /// Closed-form function plus the default truncation order for `g^{(m)}`.
    Analytic { kind: AnalyticKind, order: usize },
}

impl TestFunction {
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        TestFunction::Polynomial(c)
    }

    pub fn exp(order: usize) -> Self {
        TestFunction::Analytic {
            kind: AnalyticKind::Exp,
            order,
        }
    }

    /// `g(x)`. Polynomials use Horner's rule; analytic functions their closed form.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Polynomial(c) => horner(c, x),
            TestFunction::Analytic { kind, .. } => kind.value(x),
        }
    }

    pub fn coefficient(&self, i: usize) -> f64 {
        match self {
            TestFunction::Polynomial(c) => c.get(i).copied().unwrap_or(0.0),
            TestFunction::Analytic { kind, .. } => kind.coefficient(i),
        }
    }

    /// Coefficients of `g^{(m)}(x) = sum_{i <= m} g_i x^i`.
    pub fn truncated_coefficients(&self, order: usize) -> Vec<f64> {
        (0..=order).map(|i| self.coefficient(i)).collect()
    }

    pub fn truncate(&self, order: usize) -> TestFunction {
        TestFunction::Polynomial(self.truncated_coefficients(order))
    }

    /// Truncation at the function's own configured order.
    pub fn default_truncation(&self) -> TestFunction {
        match self {
            TestFunction::Polynomial(_) => self.clone(),
            TestFunction::Analytic { order, .. } => self.truncate(*order),
        }
    }

    pub fn has_generator(&self) -> bool {
        matches!(self, TestFunction::Analytic { .. })
    }

    pub fn growth(&self) -> Growth {
        match self {
            TestFunction::Polynomial(c) => Growth::Polynomial {
                degree: c.len().saturating_sub(1),
            },
            TestFunction::Analytic {
                kind: AnalyticKind::Resolvent { .. },
                ..
            } => Growth::Disc,
            TestFunction::Analytic { .. } => Growth::Entire,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestFunction::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|v| format!("{v}")).collect();
                format!("poly({})", parts.join(","))
            }
            TestFunction::Analytic { kind, .. } => kind.name(),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    let mut it = c.iter().rev();
    let Some(&lead) = it.next() else {
        return 0.0;
    };
    it.fold(lead, |acc, &ci| acc * x + ci)
}

/// `Tr g(W) = sum_i g(lambda_i)`.
pub fn lss(summary: &SpectralSummary, g: &TestFunction) -> f64 {
    summary.eigenvalues.iter().map(|&x| g.eval(x)).sum()
}

/// `x^k` by repeated multiplication starting from 1, the same operation
/// sequence Horner's rule performs on a monomial.
#[inline]
fn power_by_steps(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc = acc * x + 0.0;
    }
    acc
}

/// `Tr W^k = sum_i lambda_i^k`.
pub fn trace_power(summary: &SpectralSummary, k: u32) -> f64 {
    summary
        .eigenvalues
        .iter()
        .map(|&x| power_by_steps(x, k))
        .sum()
}

/// Trace powers for every exponent in `ks` in one pass over the spectrum.
pub fn trace_powers(summary: &SpectralSummary, ks: &[u32]) -> Vec<f64> {
    let max_k = ks.iter().copied().max().unwrap_or(0);
    let mut by_power = vec![0.0; max_k as usize + 1];
    let mut wanted = vec![false; max_k as usize + 1];
    for &k in ks {
        wanted[k as usize] = true;
    }
    // Accumulate per exponent in eigenvalue order so each sum matches
    // `trace_power` bit for bit.
    let mut powers: Vec<f64> = vec![1.0; summary.eigenvalues.len()];
    for k in 0..=max_k as usize {
        if k > 0 {
            for (p, &x) in powers.iter_mut().zip(&summary.eigenvalues) {
                *p = *p * x + 0.0;
            }
        }
        if wanted[k] {
            by_power[k] = powers.iter().sum();
        }
    }
    ks.iter().map(|&k| by_power[k as usize]).collect()
}

/// `(2 n^{2/3} (lambda_i - 1))` for the top `count` eigenvalues.
pub fn edge_statistics(summary: &SpectralSummary, count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > summary.n {
        return Err(LabError::Range(format!(
            "edge count {count} outside 1..={}",
            summary.n
        )));
    }
    let scale = 2.0 * (summary.n as f64).powf(2.0 / 3.0);
    Ok(summary.eigenvalues[..count]
        .iter()
        .map(|&l| scale * (l - 1.0))
        .collect())
}

/// `max(1, floor(t n^{2/3}))`.
pub fn edge_trace_exponent(n: usize, t: f64) -> Result<u32> {
    if t.is_nan() || t <= 0.0 || !t.is_finite() {
        return Err(LabError::Domain(format!(
            "edge time t = {t} must be positive"
        )));
    }
    if n == 0 {
        return Err(LabError::InvalidDimension("n must be at least 1".into()));
    }
    let c = (n as f64).cbrt();
    let raw = t * c * c;
    // Guard exact cubes (64 -> 16) against a one-ulp undershoot.
    let k = (raw * (1.0 + 4.0 * f64::EPSILON)).floor();
    Ok((k as u32).max(1))
}

/// Kolmogorov distance between the empirical spectral distribution and the
/// semicircle law on `[-1, 1]`.
pub fn esd_kolmogorov_distance(eigenvalues: &[f64]) -> f64 {
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = semicircle_cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
