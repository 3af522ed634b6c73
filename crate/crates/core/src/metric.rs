//! Finite metric spaces: dense distance matrices, Euclidean point clouds,
//! scaled views and measure-weighted spaces.

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use rayon::prelude::*;

use crate::error::{check_scale, Error, Result, Violation};

/// Point clouds at or below this size may be turned into a dense matrix.
pub const DEFAULT_MATERIALIZE_THRESHOLD: usize = 2048;

/// A finite metric space addressed by point index.
///
/// Implementations must return `distance(i, i) == 0` and symmetric,
/// non-negative, finite values.
pub trait MetricSpace: Sync {
    fn len(&self) -> usize;

    fn distance(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<S: MetricSpace + ?Sized> MetricSpace for &S {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        (**self).distance(i, j)
    }
}

/// Dense symmetric matrix of pairwise distances, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major entries, checking every invariant
    /// except the triangle inequality.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        validate(n, &entries, false).map_err(Error::InvalidMetric)?;
        Ok(DistanceMatrix { n, d: entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidMetric(Violation::NotSquare {
                    len: row.len() * n,
                    n,
                }));
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    /// Builds a matrix by evaluating `f` on every pair with `i < j`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self::new(n, d)
    }

    pub fn single_point() -> Self {
        DistanceMatrix { n: 1, d: vec![0.0] }
    }

    pub fn entries(&self) -> &[f64] {
        &self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn validate(&self, check_triangle: bool) -> std::result::Result<(), Violation> {
        validate(self.n, &self.d, check_triangle)
    }
}

impl MetricSpace for DistanceMatrix {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn distance(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

/// Checks the distance-matrix invariants on row-major `entries` and reports
/// the first violation in row-major order.
///
/// The triangle inequality is `O(n^3)` and only checked when asked; it uses
/// a relative slack of a few ulps so that floating shortest-path sums pass.
pub fn validate(
    n: usize,
    entries: &[f64],
    check_triangle: bool,
) -> std::result::Result<(), Violation> {
    if entries.len() != n * n {
        return Err(Violation::NotSquare {
            len: entries.len(),
            n,
        });
    }
    let at = |i: usize, j: usize| entries[i * n + j];
    for i in 0..n {
        for j in 0..n {
            let v = at(i, j);
            if !v.is_finite() {
                return Err(Violation::NonFinite { i, j });
            }
            if v < 0.0 {
                return Err(Violation::Negative { i, j, value: v });
            }
        }
    }
    for i in 0..n {
        if at(i, i) != 0.0 {
            return Err(Violation::NonzeroDiagonal { i, value: at(i, i) });
        }
        for j in (i + 1)..n {
            if at(i, j) != at(j, i) {
                return Err(Violation::Asymmetric { i, j });
            }
        }
    }
    if check_triangle {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let direct = at(i, k);
                    let detour = at(i, j) + at(j, k);
                    if direct > detour * (1.0 + 4.0 * f64::EPSILON) {
                        return Err(Violation::Triangle { i, j, k });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Points in Euclidean space, stored row-major. Distances are computed on
/// demand and never cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    materialize_threshold: usize,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("point cloud dimension must be at least 1"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("point coordinates must be finite"));
        }
        Ok(PointCloud {
            dim,
            coords,
            materialize_threshold: DEFAULT_MATERIALIZE_THRESHOLD,
        })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(1, Vec::len);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    pub fn with_materialize_threshold(mut self, threshold: usize) -> Self {
        self.materialize_threshold = threshold;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Dense distance matrix; refused above the materialization threshold.
    pub fn to_distance_matrix(&self) -> Result<DistanceMatrix> {
        let n = self.len();
        if n > self.materialize_threshold {
            return Err(Error::UnsupportedSize {
                what: "distance matrix materialization",
                n,
                cap: self.materialize_threshold,
            });
        }
        DistanceMatrix::from_fn(n, |i, j| self.distance(i, j))
    }
}

impl MetricSpace for PointCloud {
    fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    fn distance(&self, i: usize, j: usize) -> f64 {
        let a = self.point(i);
        let b = self.point(j);
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

/// `base` with every distance multiplied by `factor`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledView<'a, S: ?Sized> {
    base: &'a S,
    factor: f64,
}

impl<'a, S: MetricSpace + ?Sized> ScaledView<'a, S> {
    pub fn base(&self) -> &'a S {
        self.base
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    /// Scales again; the two factors are folded into one product so that
    /// `rescale(scale(X, t), u)` and `scale(X, t * u)` agree exactly.
    pub fn rescale(&self, u: f64) -> Result<ScaledView<'a, S>> {
        check_scale(u)?;
        Ok(ScaledView {
            base: self.base,
            factor: self.factor * u,
        })
    }
}

impl<S: MetricSpace + ?Sized> MetricSpace for ScaledView<'_, S> {
    fn len(&self) -> usize {
        self.base.len()
    }

    #[inline]
    fn distance(&self, i: usize, j: usize) -> f64 {
        self.factor * self.base.distance(i, j)
    }
}

/// The space `tX`.
pub fn scale<S: MetricSpace + ?Sized>(space: &S, t: f64) -> Result<ScaledView<'_, S>> {
    check_scale(t)?;
    Ok(ScaledView {
        base: space,
        factor: t,
    })
}

/// A finite space carrying a positive mass on each point.
#[derive(Debug, Clone)]
pub struct WeightedSpace<S> {
    space: S,
    mass: Vec<f64>,
}

impl<S: MetricSpace> WeightedSpace<S> {
    pub fn new(space: S, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: mass.len(),
            });
        }
        if let Some(bad) = mass.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::param(format!(
                "masses must be positive and finite, got {bad}"
            )));
        }
        Ok(WeightedSpace { space, mass })
    }

    /// Mass `1/n` on every point; recovers the unweighted definitions.
    pub fn uniform(space: S) -> Result<Self> {
        let n = space.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(WeightedSpace {
            space,
            mass: vec![1.0 / n as f64; n],
        })
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }
}

/// Largest pairwise distance; `0` for one point.
pub fn diameter<S: MetricSpace + ?Sized>(space: &S) -> Result<f64> {
    let n = space.len();
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| space.distance(i, j))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max))
}

/// Smallest distance between distinct points, or `None` for one point.
pub fn min_distance<S: MetricSpace + ?Sized>(space: &S) -> Option<f64> {
    let n = space.len();
    (0..n)
        .into_par_iter()
        .filter_map(|i| {
            ((i + 1)..n)
                .map(|j| space.distance(i, j))
                .min_by(f64::total_cmp)
        })
        .min_by(f64::total_cmp)
}

/// Shortest-path metric of a connected graph with positive edge lengths.
pub fn graph_metric(vertices: usize, edges: &[(usize, usize, f64)]) -> Result<DistanceMatrix> {
    if vertices == 0 {
        return Err(Error::EmptySpace);
    }
    let mut graph = UnGraph::<(), f64>::with_capacity(vertices, edges.len());
    for _ in 0..vertices {
        graph.add_node(());
    }
    for &(a, b, len) in edges {
        if a >= vertices || b >= vertices {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                len: vertices,
            });
        }
        if a == b || !(len > 0.0 && len.is_finite()) {
            return Err(Error::param(format!("invalid edge ({a}, {b}, {len})")));
        }
        graph.add_edge(NodeIndex::new(a), NodeIndex::new(b), len);
    }

    let mut d = vec![0.0; vertices * vertices];
    for src in 0..vertices {
        let reached = dijkstra(&graph, NodeIndex::new(src), None, |e| *e.weight());
        for dst in 0..vertices {
            match reached.get(&NodeIndex::new(dst)) {
                Some(&len) => d[src * vertices + dst] = len,
                None => return Err(Error::Disconnected { from: src, to: dst }),
            }
        }
    }
    // Dijkstra from either end can round differently; keep the matrix exactly symmetric.
    for i in 0..vertices {
        for j in (i + 1)..vertices {
            let v = d[i * vertices + j].min(d[j * vertices + i]);
            d[i * vertices + j] = v;
            d[j * vertices + i] = v;
        }
    }
    DistanceMatrix::new(vertices, d)
}
