//! Power means, similarity matrices, Leinster–Cobbold diversity and Hill numbers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;

/// Tolerance on `sum(p) == 1` for probability vectors.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

/// Diversity order `q` in `[0, +inf]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub const ZERO: Order = Order(0.0);
    pub const ONE: Order = Order(1.0);
    pub const TWO: Order = Order(2.0);
    pub const INFINITY: Order = Order(f64::INFINITY);

    pub fn new(q: f64) -> Result<Self> {
        if q >= 0.0 {
            Ok(Order(q))
        } else {
            Err(Error::NegativeOrder(q))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let q = match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => f64::INFINITY,
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("not an order: {s:?}")))?,
        };
        Order::new(q)
    }
}

/// The power mean `((sum w_i a_i^s))^(1/s)` of positive numbers.
///
/// `s = 0` is the geometric mean, `s = +inf` the maximum and `s = -inf` the
/// minimum. Without weights every entry gets `1/N`. Entries with zero weight
/// are ignored.
pub fn power_mean(a: &[f64], weights: Option<&[f64]>, s: f64) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::param("power mean of an empty list"));
    }
    if let Some(bad) = a.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::param(format!(
            "power mean needs positive finite entries, got {bad}"
        )));
    }
    if s.is_nan() {
        return Err(Error::param("power mean exponent is NaN"));
    }
    let uniform;
    let w = match weights {
        Some(w) => {
            ProbabilityDistribution::check(w)?;
            if w.len() != a.len() {
                return Err(Error::DimensionMismatch {
                    expected: a.len(),
                    found: w.len(),
                });
            }
            w
        }
        None => {
            uniform = vec![1.0 / a.len() as f64; a.len()];
            &uniform
        }
    };
    let support = || {
        a.iter()
            .zip(w)
            .filter(|(_, w)| **w > 0.0)
            .map(|(x, w)| (*x, *w))
    };

    if s == f64::INFINITY {
        return Ok(support().map(|(x, _)| x).fold(f64::MIN, f64::max));
    }
    if s == f64::NEG_INFINITY {
        return Ok(support().map(|(x, _)| x).fold(f64::MAX, f64::min));
    }
    if s == 0.0 {
        let log_mean: f64 = support().map(|(x, w)| w * x.ln()).sum();
        return Ok(log_mean.exp());
    }
    // Factor out the extreme entry so that x^s stays in [0, 1].
    let pivot = if s > 0.0 {
        support().map(|(x, _)| x).fold(f64::MIN, f64::max)
    } else {
        support().map(|(x, _)| x).fold(f64::MAX, f64::min)
    };
    let sum: f64 = support().map(|(x, w)| w * (x / pivot).powf(s)).sum();
    Ok(pivot * sum.powf(1.0 / s))
}

/// A probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    p: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        Self::check(&p)?;
        Ok(ProbabilityDistribution { p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(ProbabilityDistribution {
            p: vec![1.0 / n as f64; n],
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    fn check(p: &[f64]) -> Result<()> {
        if p.is_empty() {
            return Err(Error::EmptySpace);
        }
        if let Some(bad) = p.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(Error::param(format!(
                "probabilities must be non-negative, got {bad}"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::param(format!(
                "probabilities must sum to 1, got {total}"
            )));
        }
        Ok(())
    }
}

/// Square matrix with entries in `[0, 1]` and unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    z: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(n: usize, z: Vec<f64>) -> Result<Self> {
        if z.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: z.len(),
            });
        }
        if z.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::param("similarities must lie in [0, 1]"));
        }
        if (0..n).any(|i| z[i * n + i] != 1.0) {
            return Err(Error::param("similarity diagonal must be 1"));
        }
        Ok(SimilarityMatrix { n, z })
    }

    pub fn identity(n: usize) -> Self {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        SimilarityMatrix { n, z }
    }

    /// `Z_ij = exp(-d_ij)`; pass a `ScaledView` for `exp(-t d_ij)`.
    pub fn from_metric<S: MetricSpace + ?Sized>(space: &S) -> Self {
        let n = space.len();
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                z[i * n + j] = if i == j {
                    1.0
                } else {
                    (-space.distance(i, j)).exp()
                };
            }
        }
        SimilarityMatrix { n, z }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.z[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.z
    }

    fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.z
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(p).map(|(z, p)| z * p).sum())
            .collect()
    }
}

/// Leinster–Cobbold diversity of order `q` of `p` with respect to `z`.
pub fn lc_diversity(z: &SimilarityMatrix, p: &ProbabilityDistribution, q: Order) -> Result<f64> {
    if z.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            found: p.len(),
        });
    }
    let zp = z.apply(&p.p);
    diversity_from_zp(&p.p, &zp, q)
}

/// Hill number of order `q`: diversity under the identity similarity.
pub fn hill_number(p: &ProbabilityDistribution, q: Order) -> Result<f64> {
    diversity_from_zp(&p.p, &p.p, q)
}

fn diversity_from_zp(p: &[f64], zp: &[f64], q: Order) -> Result<f64> {
    for (i, (&pi, &zpi)) in p.iter().zip(zp).enumerate() {
        if pi > 0.0 && zpi <= 0.0 {
            return Err(Error::ZeroSimilarityOnSupport(i));
        }
    }
    let support = || {
        p.iter()
            .zip(zp)
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, z)| (*p, *z))
    };
    let q = q.value();
    let value = if q == 1.0 {
        let log: f64 = support().map(|(p, z)| p * z.ln()).sum();
        (-log).exp()
    } else if q.is_infinite() {
        support()
            .map(|(_, z)| 1.0 / z)
            .fold(f64::INFINITY, f64::min)
    } else {
        let sum: f64 = support().map(|(p, z)| p * z.powf(q - 1.0)).sum();
        sum.powf(1.0 / (1.0 - q))
    };
    Ok(value)
}
