//! Entry distributions and scaled Wigner samples.
//!
//! Matrices follow the doubled scaling: `W = (x_ij / sqrt(n))` with
//! `Var(x_ij) = 1/4`, so the limiting spectrum is the semicircle on `[-1, 1]`.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;

use crate::error::{LabError, Result};
use crate::rng::CounterStream;

/// A centered law with variance 1/4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryLaw {
    /// `N(0, 1/4)`.
    Gaussian,
    /// `+1/2` or `-1/2` with equal probability.
    Rademacher,
    /// Uniform on `[-sqrt(3)/2, sqrt(3)/2]`.
    Uniform,
}

const UNIFORM_HALF_WIDTH: f64 = 0.866_025_403_784_438_6; // sqrt(3)/2

impl EntryLaw {
    pub const ALL: [EntryLaw; 3] = [EntryLaw::Gaussian, EntryLaw::Rademacher, EntryLaw::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            EntryLaw::Gaussian => "gaussian",
            EntryLaw::Rademacher => "rademacher",
            EntryLaw::Uniform => "uniform",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "goe" | "normal" => Ok(EntryLaw::Gaussian),
            "rademacher" | "bernoulli" => Ok(EntryLaw::Rademacher),
            "uniform" => Ok(EntryLaw::Uniform),
            _ => Err(LabError::UnknownDistribution(name.to_string())),
        }
    }

    /// Maps two independent uniforms in `[0, 1)` to one draw.
    #[inline]
    pub fn transform(self, u: [f64; 2]) -> f64 {
        match self {
            EntryLaw::Gaussian => {
                let r = (-2.0 * (1.0 - u[0]).ln()).sqrt();
                0.5 * r * (2.0 * PI * u[1]).cos()
            }
            EntryLaw::Rademacher => {
                if u[0] < 0.5 {
                    -0.5
                } else {
                    0.5
                }
            }
            EntryLaw::Uniform => UNIFORM_HALF_WIDTH * (2.0 * u[0] - 1.0),
        }
    }

    /// Exact `E[x^p]`.
    pub fn moment(self, p: u32) -> f64 {
        if p % 2 == 1 {
            return 0.0;
        }
        let k = p / 2;
        match self {
            // (2k-1)!! / 4^k
            EntryLaw::Gaussian => {
                let mut acc = 1.0;
                for j in 1..=k {
                    acc *= f64::from(2 * j - 1) / 4.0;
                }
                acc
            }
            EntryLaw::Rademacher => 0.25f64.powi(k as i32),
            // a^{2k} / (2k + 1) with a^2 = 3/4
            EntryLaw::Uniform => 0.75f64.powi(k as i32) / f64::from(2 * k + 1),
        }
    }

    /// Constant `C` with `E[x^{2k}] <= (C k)^k` for every `k >= 1`.
    ///
    /// All three laws meet the bound with `C = 1/4`: `(2k-1)!! <= k^k`,
    /// `1 <= k^k`, and `3^k <= (2k+1) k^k`.
    pub fn moment_growth_constant(self) -> f64 {
        0.25
    }
}

impl fmt::Display for EntryLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Law of the off-diagonal entries plus an optional distinct diagonal law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntryDistribution {
    pub offdiag: EntryLaw,
    pub diagonal: Option<EntryLaw>,
}

impl EntryDistribution {
    pub fn new(offdiag: EntryLaw) -> Self {
        Self {
            offdiag,
            diagonal: None,
        }
    }

    pub fn with_diagonal(offdiag: EntryLaw, diagonal: EntryLaw) -> Self {
        Self {
            offdiag,
            diagonal: Some(diagonal),
        }
    }

    pub fn gaussian() -> Self {
        Self::new(EntryLaw::Gaussian)
    }

    pub fn rademacher() -> Self {
        Self::new(EntryLaw::Rademacher)
    }

    pub fn uniform() -> Self {
        Self::new(EntryLaw::Uniform)
    }

    /// Parses `"gaussian"` or `"gaussian/rademacher"` (off-diagonal/diagonal).
    pub fn from_name(name: &str) -> Result<Self> {
        match name.split_once('/') {
            Some((off, diag)) => Ok(Self::with_diagonal(
                EntryLaw::from_name(off)?,
                EntryLaw::from_name(diag)?,
            )),
            None => Ok(Self::new(EntryLaw::from_name(name)?)),
        }
    }

    pub fn diagonal_law(&self) -> EntryLaw {
        self.diagonal.unwrap_or(self.offdiag)
    }

    pub fn name(&self) -> String {
        match self.diagonal {
            Some(d) if d != self.offdiag => format!("{}/{}", self.offdiag, d),
            _ => self.offdiag.name().to_string(),
        }
    }

    /// Unscaled draw `x_ij` for `i <= j`, a pure function of `(seed, i, j)`.
    #[inline]
    pub fn draw(&self, stream: &CounterStream, i: usize, j: usize) -> f64 {
        let u = stream.uniforms(i as u32, j as u32);
        if i == j {
            self.diagonal_law().transform(u)
        } else {
            self.offdiag.transform(u)
        }
    }
}

/// One scaled symmetric sample, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSample {
    pub n: usize,
    pub entries: Vec<f64>,
    pub ensemble: String,
    pub seed: u64,
}

impl WignerSample {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Sum of squared entries, `Tr W^2` computed without eigenvalues.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    /// Wraps an arbitrary square matrix (used for testing and for `-W`).
    pub fn from_rows(n: usize, entries: Vec<f64>, ensemble: &str, seed: u64) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(LabError::InvalidDimension(format!(
                "expected {n}x{n} entries, got {}",
                entries.len()
            )));
        }
        Ok(Self {
            n,
            entries,
            ensemble: ensemble.to_string(),
            seed,
        })
    }
}

/// Draws the `n x n` sample for `seed`; entry `(i, j)` depends only on
/// `(seed, i, j)`.
pub fn sample_wigner(n: usize, dist: &EntryDistribution, seed: u64) -> Result<WignerSample> {
    if n == 0 {
        return Err(LabError::InvalidDimension("n must be at least 1".into()));
    }
    if n > u32::MAX as usize {
        return Err(LabError::InvalidDimension(format!("n = {n} too large")));
    }
    let stream = CounterStream::new(seed, 0);
    let scale = 1.0 / (n as f64).sqrt();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = dist.draw(&stream, i, j) * scale;
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(WignerSample {
        n,
        entries,
        ensemble: dist.name(),
        seed,
    })
}

/// Semicircle density on `[-1, 1]`: `(2/pi) sqrt(1 - x^2)`.
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() <= 1.0 {
        FRAC_2_PI * (1.0 - x * x).sqrt()
    } else {
        0.0
    }
}

/// Distribution function of the semicircle on `[-1, 1]`.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -1.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        0.5 + (x * (1.0 - x * x).sqrt() + x.asin()) / PI
    }
}

/// Catalan number `C_k`. Exact for `k <= 35`.
pub fn catalan(k: u32) -> u64 {
    let mut c: u128 = 1;
    for i in 0..u128::from(k) {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as u64
}

/// `k`-th moment of the semicircle on `[-1, 1]`: zero for odd `k`,
/// `C_{k/2} / 4^{k/2}` for even `k`.
pub fn semicircle_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let half = k / 2;
    catalan(half) as f64 / 4f64.powi(half as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_prefix() {
        let c: Vec<u64> = (0..8).map(catalan).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn moment_table_anchors() {
        for law in EntryLaw::ALL {
            assert_eq!(law.moment(0), 1.0);
            assert_eq!(law.moment(1), 0.0);
            assert_eq!(law.moment(2), 0.25);
            for k in 1..=12u32 {
                let bound = (law.moment_growth_constant() * f64::from(k)).powi(k as i32);
                assert!(law.moment(2 * k) <= bound * (1.0 + 1e-12), "{law} k={k}");
            }
        }
        assert_eq!(EntryLaw::Gaussian.moment(4), 3.0 / 16.0);
        assert_eq!(EntryLaw::Rademacher.moment(4), 1.0 / 16.0);
    }

    #[test]
    fn one_by_one_is_raw_draw() {
        let dist = EntryDistribution::gaussian();
        let s = sample_wigner(1, &dist, 99).unwrap();
        let raw = dist.draw(&CounterStream::new(99, 0), 0, 0);
        assert_eq!(s.entries, vec![raw]);
    }

    #[test]
    fn rademacher_two_by_two_values() {
        let v = 0.5 / 2f64.sqrt();
        for seed in 0..20 {
            let s = sample_wigner(2, &EntryDistribution::rademacher(), seed).unwrap();
            assert!(s.entries.iter().all(|&x| x == v || x == -v));
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            sample_wigner(0, &EntryDistribution::gaussian(), 1),
            Err(LabError::InvalidDimension(_))
        ));
    }

    #[test]
    fn symmetric_and_reproducible() {
        let dist = EntryDistribution::uniform();
        let a = sample_wigner(17, &dist, 5).unwrap();
        let b = sample_wigner(17, &dist, 5).unwrap();
        assert_eq!(a, b);
        for i in 0..17 {
            for j in 0..17 {
                assert_eq!(a.get(i, j).to_bits(), a.get(j, i).to_bits());
            }
        }
        let c = sample_wigner(17, &dist, 6).unwrap();
        assert_ne!(a.entries, c.entries);
    }

    #[test]
    fn density_values() {
        assert_eq!(semicircle_density(0.0), 2.0 / PI);
        assert_eq!(semicircle_density(1.0), 0.0);
        assert_eq!(semicircle_density(1.5), 0.0);
        assert_eq!(semicircle_moment(1), 0.0);
        assert_eq!(semicircle_moment(2), 0.25);
        assert_eq!(semicircle_moment(6), 5.0 / 64.0);
    }

    #[test]
    fn distribution_names_round_trip() {
        let d = EntryDistribution::from_name("gaussian/rademacher").unwrap();
        assert_eq!(d.diagonal_law(), EntryLaw::Rademacher);
        assert_eq!(EntryDistribution::from_name(&d.name()).unwrap(), d);
        assert!(EntryDistribution::from_name("cauchy").is_err());
    }
}
