//! The q-spread of finite and measure-weighted spaces.
//!
//! All spreads are built from similarity row sums
//! `S_i = sum_j exp(-t d_ij) m_j`. Rows are independent and may be evaluated
//! in parallel; each row is summed sequentially in index order and the final
//! reduction over rows is also sequential, so results do not depend on the
//! number of worker threads.

use rayon::prelude::*;

use crate::diversity::{power_mean, Order};
use crate::error::{check_scale, Error, Result};
use crate::io::format_value;
use crate::metric::{MetricSpace, WeightedSpace};

pub const DEFAULT_POINTS_PER_DECADE: usize = 100;

/// `sum_j exp(-t d_ij) m_j`, or with unit masses when `mass` is `None`.
#[inline]
pub fn similarity_row_sum<S: MetricSpace + ?Sized>(
    space: &S,
    i: usize,
    t: f64,
    mass: Option<&[f64]>,
) -> f64 {
    let n = space.len();
    let mut sum = 0.0;
    match mass {
        None => {
            for j in 0..n {
                sum += (-t * space.distance(i, j)).exp();
            }
        }
        Some(m) => {
            for (j, mj) in m.iter().enumerate().take(n) {
                sum += (-t * space.distance(i, j)).exp() * mj;
            }
        }
    }
    sum
}

/// All similarity row sums, in index order.
pub fn similarity_row_sums<S: MetricSpace + ?Sized>(
    space: &S,
    t: f64,
    mass: Option<&[f64]>,
) -> Vec<f64> {
    (0..space.len())
        .into_par_iter()
        .map(|i| similarity_row_sum(space, i, t, mass))
        .collect()
}

fn nonempty<S: MetricSpace + ?Sized>(space: &S) -> Result<usize> {
    match space.len() {
        0 => Err(Error::EmptySpace),
        n => Ok(n),
    }
}

/// Reciprocal mean similarity of point `i` at the space's own scale.
///
/// Uniform: `N / sum_j exp(-d_ij)`. Weighted: total mass over the
/// mass-weighted similarity sum.
pub fn reciprocal_mean_similarity<S: MetricSpace + ?Sized>(
    space: &S,
    mass: Option<&[f64]>,
    i: usize,
) -> Result<f64> {
    let n = nonempty(space)?;
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let total = match mass {
        None => n as f64,
        Some(m) => {
            if m.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.len(),
                });
            }
            m.iter().sum()
        }
    };
    Ok(total / similarity_row_sum(space, i, 1.0, mass))
}

/// All reciprocal mean similarities of the uniform space `tX`.
pub fn reciprocal_mean_similarities<S: MetricSpace + ?Sized>(
    space: &S,
    t: f64,
) -> Result<Vec<f64>> {
    check_scale(t)?;
    let n = nonempty(space)? as f64;
    Ok(similarity_row_sums(space, t, None)
        .into_iter()
        .map(|s| n / s)
        .collect())
}

/// The spread `E_0(tX)` with the uniform measure.
pub fn spread0<S: MetricSpace + ?Sized>(space: &S, t: f64) -> Result<f64> {
    check_scale(t)?;
    nonempty(space)?;
    Ok(similarity_row_sums(space, t, None)
        .iter()
        .map(|s| 1.0 / s)
        .sum())
}

/// The spread of a measure-weighted space: `sum_i m_i / sum_j Z_ij m_j`.
/// Invariant under multiplying every mass by the same constant.
pub fn weighted_spread0<S: MetricSpace>(space: &WeightedSpace<S>, t: f64) -> Result<f64> {
    check_scale(t)?;
    nonempty(space.space())?;
    let mass = space.mass();
    let rows = similarity_row_sums(space.space(), t, Some(mass));
    Ok(mass.iter().zip(&rows).map(|(m, s)| m / s).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadResult {
    pub q: Order,
    pub t: f64,
    pub value: f64,
}

/// The q-spread of the uniform space `tX`.
pub fn spread_q<S: MetricSpace + ?Sized>(space: &S, t: f64, q: Order) -> Result<SpreadResult> {
    check_scale(t)?;
    let n = nonempty(space)?;
    let rows = similarity_row_sums(space, t, None);
    let nf = n as f64;
    let qv = q.value();
    let value = if qv == 0.0 {
        rows.iter().map(|s| 1.0 / s).sum()
    } else if qv == 1.0 {
        let mean_log: f64 = rows.iter().map(|s| s.ln()).sum::<f64>() / nf;
        nf * (-mean_log).exp()
    } else if qv == 2.0 {
        nf * nf / rows.iter().sum::<f64>()
    } else if q.is_infinite() {
        rows.iter().map(|s| nf / s).fold(f64::INFINITY, f64::min)
    } else {
        let sum: f64 = rows.iter().map(|s| s.powf(qv - 1.0)).sum();
        (sum / nf.powf(qv)).powf(1.0 / (1.0 - qv))
    };
    Ok(SpreadResult { q, t, value })
}

/// The q-spread of a weighted space, for the orders with a measure form:
/// `q = 0`, `q = 2` (squared total mass over the total similarity mass) and
/// `q = inf` (minimum of total mass over weighted row sums).
pub fn weighted_spread_q<S: MetricSpace>(
    space: &WeightedSpace<S>,
    t: f64,
    q: Order,
) -> Result<SpreadResult> {
    check_scale(t)?;
    nonempty(space.space())?;
    let mass = space.mass();
    let total = space.total_mass();
    let rows = similarity_row_sums(space.space(), t, Some(mass));
    let qv = q.value();
    let value = if qv == 0.0 {
        mass.iter().zip(&rows).map(|(m, s)| m / s).sum()
    } else if qv == 2.0 {
        let similarity_mass: f64 = mass.iter().zip(&rows).map(|(m, s)| m * s).sum();
        total * total / similarity_mass
    } else if q.is_infinite() {
        rows.iter().map(|s| total / s).fold(f64::INFINITY, f64::min)
    } else {
        return Err(Error::UnsupportedWeightedOrder(qv));
    };
    Ok(SpreadResult { q, t, value })
}

/// `spread_q` computed as the `(1-q)`-power mean of reciprocal mean
/// similarities. A second route to the same number.
pub fn spread_q_via_mean<S: MetricSpace + ?Sized>(space: &S, t: f64, q: Order) -> Result<f64> {
    let rho = reciprocal_mean_similarities(space, t)?;
    power_mean(&rho, None, 1.0 - q.value())
}

/// What a profile measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Spread(Order),
    Magnitude,
    MaximumDiversity,
    Dimension,
}

/// Log-spaced scale grid description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points_per_decade: usize,
}

impl LogGrid {
    pub fn new(t_min: f64, t_max: f64, points_per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max.is_finite() && t_min < t_max) {
            return Err(Error::param(format!(
                "need 0 < t_min < t_max, got [{t_min}, {t_max}]"
            )));
        }
        if points_per_decade == 0 {
            return Err(Error::param("points per decade must be positive"));
        }
        Ok(LogGrid {
            t_min,
            t_max,
            points_per_decade,
        })
    }

    pub fn len(&self) -> usize {
        let decades = (self.t_max / self.t_min).log10();
        let steps = (decades * self.points_per_decade as f64 - 1e-6)
            .ceil()
            .max(1.0);
        steps as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Strictly increasing scales from `t_min` to `t_max`, both included.
    pub fn scales(&self) -> Vec<f64> {
        log_spaced(self.t_min, self.t_max, self.len())
    }
}

/// `count >= 2` geometrically spaced values with exact endpoints.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let last = count.saturating_sub(1).max(1) as f64;
    (0..count)
        .map(|i| match i {
            0 => lo,
            i if i + 1 == count => hi,
            i => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect()
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("empty scale grid"));
    }
    for &t in grid {
        check_scale(t)?;
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("scale grid must be strictly increasing"));
    }
    Ok(())
}

/// A sampled curve `t -> value`; `None` marks scales where the quantity is
/// undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub quantity: Quantity,
    pub grid: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl Profile {
    pub fn new(quantity: Quantity, grid: Vec<f64>, values: Vec<Option<f64>>) -> Result<Self> {
        check_grid(&grid)?;
        if grid.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Profile {
            quantity,
            grid,
            values,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, Option<f64>)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// The defined values in grid order.
    pub fn defined_values(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    /// CSV with the given header; `x_scale` multiplies the grid column.
    pub fn write_csv<W: std::io::Write>(
        &self,
        out: &mut W,
        header: (&str, &str),
        x_scale: f64,
    ) -> std::io::Result<()> {
        writeln!(out, "{},{}", header.0, header.1)?;
        for (t, v) in self.iter() {
            writeln!(
                out,
                "{},{}",
                format_value(t * x_scale),
                format_value(v.unwrap_or(f64::NAN))
            )?;
        }
        Ok(())
    }
}

/// `t -> E_q(tX)` over `grid`.
pub fn spread_profile<S: MetricSpace + ?Sized>(
    space: &S,
    grid: &[f64],
    q: Order,
) -> Result<Profile> {
    check_grid(grid)?;
    let values = grid
        .iter()
        .map(|&t| spread_q(space, t, q).map(|r| Some(r.value)))
        .collect::<Result<Vec<_>>>()?;
    Profile::new(Quantity::Spread(q), grid.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{graph_metric, scale, DistanceMatrix, PointCloud};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    fn two_points(d: f64) -> DistanceMatrix {
        DistanceMatrix::from_rows(&[vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    fn k32() -> DistanceMatrix {
        DistanceMatrix::from_fn(5, |i, j| if (i < 3) == (j < 3) { 2.0 } else { 1.0 }).unwrap()
    }

    #[test]
    fn reciprocal_mean_similarity_examples() {
        let one = DistanceMatrix::single_point();
        assert_eq!(reciprocal_mean_similarity(&one, None, 0).unwrap(), 1.0);

        let far = DistanceMatrix::from_fn(4, |_, _| 800.0).unwrap();
        assert_eq!(reciprocal_mean_similarity(&far, None, 2).unwrap(), 4.0);

        let x = two_points(3f64.ln());
        for i in 0..2 {
            let rho = reciprocal_mean_similarity(&x, None, i).unwrap();
            assert!(close(rho, 1.5, 1e-15));
        }
        assert!(matches!(
            reciprocal_mean_similarity(&x, None, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn spread0_examples() {
        let one = DistanceMatrix::single_point();
        for t in [1e-6, 1.0, 1e6] {
            assert_eq!(spread0(&one, t).unwrap(), 1.0);
        }
        for d in [0.1, 1.0, 3.7] {
            let e = spread0(&two_points(d), 1.0).unwrap();
            assert!(close(e, 2.0 / (1.0 + (-d).exp()), 1e-15));
        }
        let r = DistanceMatrix::from_rows(&[
            vec![0.0, 1000.0, 1000.0],
            vec![1000.0, 0.0, 1.0],
            vec![1000.0, 1.0, 0.0],
        ])
        .unwrap();
        let e = spread0(&r, 1.0).unwrap();
        assert!(close(e, 1.0 + 2.0 / (1.0 + (-1.0f64).exp()), 1e-15));
        assert!((e - 2.4621).abs() < 1e-4);
        assert!(matches!(spread0(&r, 0.0), Err(Error::NonPositiveScale(_))));
    }

    #[test]
    fn spread_q_examples() {
        let one = DistanceMatrix::single_point();
        let x = two_points(0.8);
        let expected = 2.0 / (1.0 + (-0.8f64).exp());
        for q in [0.0, 0.3, 1.0, 2.0, 4.0, f64::INFINITY] {
            let q = Order::new(q).unwrap();
            assert_eq!(spread_q(&one, 2.0, q).unwrap().value, 1.0);
            assert!(close(spread_q(&x, 1.0, q).unwrap().value, expected, 1e-14));
        }

        // K_{3,2} at t = 1, hand evaluation of the q = 0 branch.
        let e1 = (-1.0f64).exp();
        let e2 = (-2.0f64).exp();
        let hand = 3.0 / (1.0 + 2.0 * e1 + 2.0 * e2) + 2.0 / (1.0 + e2 + 3.0 * e1);
        let e = spread_q(&k32(), 1.0, Order::ZERO).unwrap().value;
        assert!(close(e, hand, 1e-14));
        assert!((e - 2.388_459_813).abs() < 1e-9);
    }

    #[test]
    fn weighted_orders() {
        let x = two_points(1.0);
        let w = WeightedSpace::new(x.clone(), vec![0.3, 0.3]).unwrap();
        for q in [Order::ZERO, Order::TWO, Order::INFINITY] {
            let weighted = weighted_spread_q(&w, 1.7, q).unwrap().value;
            let plain = spread_q(&x, 1.7, q).unwrap().value;
            assert!(close(weighted, plain, 1e-14));
        }
        assert!(matches!(
            weighted_spread_q(&w, 1.0, Order::ONE),
            Err(Error::UnsupportedWeightedOrder(_))
        ));
    }

    #[test]
    fn mass_scaling_invariance() {
        let m = graph_metric(4, &[(0, 1, 0.5), (1, 2, 1.5), (2, 3, 0.2)]).unwrap();
        let mass = vec![0.2, 1.1, 3.0, 0.7];
        let base =
            weighted_spread0(&WeightedSpace::new(m.clone(), mass.clone()).unwrap(), 1.3).unwrap();
        for c in [1e-3, 2.0, 1e4] {
            let scaled: Vec<f64> = mass.iter().map(|x| x * c).collect();
            let v = weighted_spread0(&WeightedSpace::new(m.clone(), scaled).unwrap(), 1.3).unwrap();
            assert!(close(v, base, 1e-12));
        }
    }

    #[test]
    fn limits_and_diameter_bound() {
        let c = PointCloud::from_points(&[
            vec![0.0, 0.0],
            vec![0.3, 1.0],
            vec![2.0, 0.1],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let small = spread0(&c, 1e-9).unwrap();
        assert!((small - 1.0).abs() < 1e-6);
        let dmin = crate::metric::min_distance(&c).unwrap();
        assert!(spread0(&c, 40.0 / dmin).unwrap() > 4.0 - 1e-6);
        for t in [0.1, 0.5, 1.0, 3.0] {
            let diam = crate::metric::diameter(&scale(&c, t).unwrap()).unwrap();
            assert!(spread0(&c, t).unwrap() <= diam.exp());
        }
    }

    #[test]
    fn table_matches_power_mean() {
        let m = k32();
        for q in [0.0, 0.5, 1.0, 2.0, 5.0, f64::INFINITY] {
            let q = Order::new(q).unwrap();
            for t in [0.05, 0.7, 3.0] {
                let table = spread_q(&m, t, q).unwrap().value;
                let mean = spread_q_via_mean(&m, t, q).unwrap();
                assert!(close(table, mean, 1e-12), "q={q} t={t}");
            }
        }
    }

    #[test]
    fn grid_and_profile() {
        let g = LogGrid::new(1e-4, 1e3, 10).unwrap();
        let s = g.scales();
        assert_eq!(s.len(), 71);
        assert_eq!(s[0], 1e-4);
        assert_eq!(*s.last().unwrap(), 1e3);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(LogGrid::new(1.0, 1.0, 10).is_err());

        let p = spread_profile(&DistanceMatrix::single_point(), &s, Order::ZERO).unwrap();
        assert!(p.defined_values().iter().all(|v| *v == 1.0));
        assert!(spread_profile(&DistanceMatrix::single_point(), &[1.0, 0.5], Order::ZERO).is_err());

        let mut buf = Vec::new();
        Profile::new(Quantity::Magnitude, vec![1.0, 2.0], vec![Some(1.5), None])
            .unwrap()
            .write_csv(&mut buf, ("t", "value"), 1.0)
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "t,value\n1.0000000000000000e0,1.5000000000000000e0\n2.0000000000000000e0,nan\n"
        );
    }
}
