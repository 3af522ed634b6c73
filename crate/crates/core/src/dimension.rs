//! Spread dimension: the instantaneous growth rate `d ln E_0(tX) / d ln t`.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{check_scale, Error, Result};
use crate::metric::MetricSpace;
use crate::spread::{check_grid, spread0, Profile, Quantity};

/// Default relative log-step of the central difference.
pub const DEFAULT_LOG_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionEstimate {
    pub t: f64,
    pub value: f64,
    pub step: f64,
}

fn check_step(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "log-step must be positive, got {delta}"
        )))
    }
}

/// `(ln f(t e^d) - ln f(t e^{-d})) / 2d`, the central-difference estimate of
/// `d ln f / d ln t` at `t`.
pub fn growth_rate(mut f: impl FnMut(f64) -> Result<f64>, t: f64, delta: f64) -> Result<f64> {
    check_scale(t)?;
    check_step(delta)?;
    let mut log_at = |s: f64| -> Result<f64> {
        let v = f(s)?;
        if v > 0.0 && v.is_finite() {
            Ok(v.ln())
        } else {
            Err(Error::NonPositiveValue { t: s, value: v })
        }
    };
    let hi = log_at(t * delta.exp())?;
    let lo = log_at(t * (-delta).exp())?;
    Ok((hi - lo) / (2.0 * delta))
}

/// Memo of `t -> E_0(tX)` keyed by the exact bits of `t`. Concurrent misses
/// may evaluate the same scale twice; both store the same value.
#[derive(Debug, Default)]
pub struct SpreadCache {
    values: RwLock<HashMap<u64, f64>>,
}

impl SpreadCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn spread0<S: MetricSpace + ?Sized>(&self, space: &S, t: f64) -> Result<f64> {
        let key = t.to_bits();
        if let Some(&v) = self.values.read().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let v = spread0(space, t)?;
        self.values.write().expect("cache lock").insert(key, v);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Growth rate of `t -> E_0(tX)` at `t`.
pub fn spread_dimension<S: MetricSpace + ?Sized>(
    space: &S,
    t: f64,
    delta: f64,
) -> Result<DimensionEstimate> {
    spread_dimension_cached(space, t, delta, &SpreadCache::new())
}

pub fn spread_dimension_cached<S: MetricSpace + ?Sized>(
    space: &S,
    t: f64,
    delta: f64,
    cache: &SpreadCache,
) -> Result<DimensionEstimate> {
    let value = growth_rate(|s| cache.spread0(space, s), t, delta)?;
    Ok(DimensionEstimate {
        t,
        value,
        step: delta,
    })
}

/// Spread dimension at every scale of `grid`.
pub fn dimension_profile<S: MetricSpace + ?Sized>(
    space: &S,
    grid: &[f64],
    delta: f64,
) -> Result<Profile> {
    check_grid(grid)?;
    check_step(delta)?;
    let cache = SpreadCache::new();
    let values = grid
        .iter()
        .map(|&t| spread_dimension_cached(space, t, delta, &cache).map(|d| Some(d.value)))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(Quantity::Dimension, grid.to_vec(), values)
}
