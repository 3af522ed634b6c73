//! Weightings, magnitude, positive definiteness and maximum diversity.

mod trees;

pub use trees::{
    corona_maxdiv, corona_spread, linear_tree_spread, linear_tree_spread_derivative, tree_magnitude,
};

use std::cmp::Ordering;

use nalgebra::{Cholesky, DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{check_scale, Error, Result};
use crate::metric::MetricSpace;
use crate::spread::{check_grid, Profile, Quantity};

/// Below this reciprocal condition number a similarity matrix is singular.
pub const SINGULAR_RCOND: f64 = 1e-12;
/// Weightings whose residual `max |Zw - 1|` exceeds this are flagged.
pub const RESIDUAL_FLAG: f64 = 1e-8;
/// Weights above `-NONNEGATIVE_SLACK` count as non-negative.
pub const NONNEGATIVE_SLACK: f64 = 1e-10;
/// Smallest Cholesky pivot accepted as positive.
pub const PD_PIVOT_TOLERANCE: f64 = 1e-12;
/// Default cap on point count for exhaustive subset enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;
/// Largest space for which the similarity matrix is formed densely.
pub const DENSE_SOLVE_LIMIT: usize = 2048;

/// A solution of `Z w = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weighting {
    pub weights: Vec<f64>,
    /// `max_i |(Z w)_i - 1|`, recomputed after the solve.
    pub residual: f64,
    /// Reciprocal 1-norm condition number of `Z`.
    pub rcond: f64,
}

impl Weighting {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|w| *w >= -NONNEGATIVE_SLACK)
    }

    /// True when the residual is too large to trust the weights.
    pub fn is_degraded(&self) -> bool {
        self.residual.is_nan() || self.residual > RESIDUAL_FLAG
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeResult {
    pub value: f64,
    pub weighting: Weighting,
    pub condition_estimate: f64,
}

fn similarity_matrix<S: MetricSpace + ?Sized>(space: &S, t: f64) -> Result<DMatrix<f64>> {
    check_scale(t)?;
    let n = space.len();
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if n > DENSE_SOLVE_LIMIT {
        return Err(Error::UnsupportedSize {
            what: "dense similarity solve",
            n,
            cap: DENSE_SOLVE_LIMIT,
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            (-t * space.distance(i, j)).exp()
        }
    }))
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn solve_weighting(z: &DMatrix<f64>) -> Result<Weighting> {
    let n = z.nrows();
    let lu = z.clone().lu();
    let inverse = lu.try_inverse().ok_or(Error::NoWeighting { rcond: 0.0 })?;
    let rcond = 1.0 / (one_norm(z) * one_norm(&inverse));
    if rcond.is_nan() || rcond < SINGULAR_RCOND {
        return Err(Error::NoWeighting {
            rcond: if rcond.is_nan() { 0.0 } else { rcond },
        });
    }
    let ones = DVector::from_element(n, 1.0);
    let w = lu.solve(&ones).ok_or(Error::NoWeighting { rcond })?;
    let residual = (z * &w - &ones).amax();
    Ok(Weighting {
        weights: w.iter().copied().collect(),
        residual,
        rcond,
    })
}

/// Weighting of `tX`, or `NoWeighting` when `Z` is numerically singular.
pub fn weighting<S: MetricSpace + ?Sized>(space: &S, t: f64) -> Result<Weighting> {
    solve_weighting(&similarity_matrix(space, t)?)
}

/// Magnitude `|tX|`, the sum of the weights.
pub fn magnitude<S: MetricSpace + ?Sized>(space: &S, t: f64) -> Result<MagnitudeResult> {
    let weighting = weighting(space, t)?;
    Ok(MagnitudeResult {
        value: weighting.total(),
        condition_estimate: weighting.rcond,
        weighting,
    })
}

/// Whether the similarity matrix of `tX` is positive definite, decided by a
/// Cholesky factorization whose pivots must all exceed
/// [`PD_PIVOT_TOLERANCE`].
pub fn is_positive_definite<S: MetricSpace + ?Sized>(space: &S, t: f64) -> Result<bool> {
    let z = similarity_matrix(space, t)?;
    Ok(match Cholesky::new(z) {
        Some(chol) => chol
            .l_dirty()
            .diagonal()
            .iter()
            .all(|l| l * l > PD_PIVOT_TOLERANCE),
        None => false,
    })
}

/// The maximizing subset and its magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximumDiversity {
    pub value: f64,
    /// Indices of the subset, ascending.
    pub subset: Vec<usize>,
}

fn mask_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

/// Larger value wins; exact ties go to the lexicographically smaller subset.
fn better(a: (f64, u32), b: (f64, u32), n: usize) -> (f64, u32) {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if mask_indices(a.1, n) <= mask_indices(b.1, n) {
                a
            } else {
                b
            }
        }
    }
}

/// Maximum diversity `|tX|_+`: the largest magnitude among subsets with a
/// non-negative weighting, by enumerating all `2^n - 1` subsets.
pub fn maximum_diversity<S: MetricSpace + ?Sized>(space: &S, t: f64) -> Result<MaximumDiversity> {
    maximum_diversity_with_cap(space, t, DEFAULT_ENUMERATION_CAP)
}

pub fn maximum_diversity_with_cap<S: MetricSpace + ?Sized>(
    space: &S,
    t: f64,
    cap: usize,
) -> Result<MaximumDiversity> {
    check_scale(t)?;
    let n = space.len();
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if n > cap.min(31) {
        return Err(Error::UnsupportedSize {
            what: "maximum diversity enumeration",
            n,
            cap: cap.min(31),
        });
    }
    let z = similarity_matrix(space, t)?;
    let (value, mask) = (1u32..(1u32 << n))
        .into_par_iter()
        .filter_map(|mask| {
            let idx = mask_indices(mask, n);
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| z[(idx[a], idx[b])]);
            match solve_weighting(&sub) {
                Ok(w) if w.is_nonnegative() => Some((w.total(), mask)),
                _ => None,
            }
        })
        .reduce(|| (f64::NEG_INFINITY, 0), |a, b| better(a, b, n));
    debug_assert!(mask != 0, "singletons always have a non-negative weighting");
    Ok(MaximumDiversity {
        value,
        subset: mask_indices(mask, n),
    })
}

/// Sign of `det Z(t)`, or `None` if the factorization is singular.
fn determinant_sign(z: DMatrix<f64>) -> Option<f64> {
    let lu = z.lu();
    let mut sign: f64 = lu.p().determinant();
    for u in lu.u().diagonal().iter() {
        if *u == 0.0 || !u.is_finite() {
            return None;
        }
        sign *= u.signum();
    }
    Some(sign)
}

/// Scales in `[grid[0], grid[last]]` where the similarity matrix is
/// singular: grid points with no weighting, plus sign changes of `det Z`
/// between neighbouring grid points, refined by bisection in `ln t`.
pub fn singular_scales<S: MetricSpace + ?Sized>(space: &S, grid: &[f64]) -> Result<Vec<f64>> {
    check_grid(grid)?;
    let signs = grid
        .iter()
        .map(|&t| Ok(determinant_sign(similarity_matrix(space, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let singular_at = |t: f64| -> Result<bool> {
        match weighting(space, t) {
            Ok(_) => Ok(false),
            Err(Error::NoWeighting { .. }) => Ok(true),
            Err(e) => Err(e),
        }
    };

    let mut found = Vec::new();
    for (k, &t) in grid.iter().enumerate() {
        if singular_at(t)? {
            found.push(t);
            continue;
        }
        let Some(&next) = grid.get(k + 1) else { break };
        let (Some(s0), Some(s1)) = (signs[k], signs[k + 1]) else {
            continue;
        };
        if s0 == s1 || singular_at(next)? {
            continue;
        }
        let (mut lo, mut hi) = (t.ln(), next.ln());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match determinant_sign(similarity_matrix(space, mid.exp())?) {
                None => {
                    lo = mid;
                    hi = mid;
                    break;
                }
                Some(s) if s == s0 => lo = mid,
                Some(_) => hi = mid,
            }
        }
        found.push((0.5 * (lo + hi)).exp());
    }
    Ok(found)
}

/// A magnitude profile with the scales where magnitude does not exist.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeProfile {
    pub profile: Profile,
    pub singular_scales: Vec<f64>,
    /// Grid scales whose weighting residual exceeded [`RESIDUAL_FLAG`].
    pub degraded_scales: Vec<f64>,
}

pub fn magnitude_profile<S: MetricSpace + ?Sized>(
    space: &S,
    grid: &[f64],
) -> Result<MagnitudeProfile> {
    check_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut degraded_scales = Vec::new();
    for &t in grid {
        match magnitude(space, t) {
            Ok(m) => {
                if m.weighting.is_degraded() {
                    degraded_scales.push(t);
                }
                values.push(Some(m.value));
            }
            Err(Error::NoWeighting { .. }) => values.push(None),
            Err(e) => return Err(e),
        }
    }
    Ok(MagnitudeProfile {
        profile: Profile::new(Quantity::Magnitude, grid.to_vec(), values)?,
        singular_scales: singular_scales(space, grid)?,
        degraded_scales,
    })
}

pub fn maximum_diversity_profile<S: MetricSpace + ?Sized>(
    space: &S,
    grid: &[f64],
) -> Result<Profile> {
    check_grid(grid)?;
    let values = grid
        .iter()
        .map(|&t| maximum_diversity(space, t).map(|m| Some(m.value)))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(Quantity::MaximumDiversity, grid.to_vec(), values)
}
