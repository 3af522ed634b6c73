//! Example spaces: toy metrics, graph metrics, grids and fractal
//! approximations.

mod ifs;

pub use ifs::{cantor, ifs_points, koch, sierpinski, AffineMap, IfsSystem};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{graph_metric, DistanceMatrix, PointCloud};

/// Three points: two at distance 1 from each other, both 1000 from the third.
pub fn three_point_r() -> DistanceMatrix {
    DistanceMatrix::from_rows(&[
        vec![0.0, 1000.0, 1000.0],
        vec![1000.0, 0.0, 1.0],
        vec![1000.0, 1.0, 0.0],
    ])
    .expect("static metric")
}

/// Complete bipartite graph `K_{3,2}` with unit edges: points 0..3 on one
/// side, 3..5 on the other.
pub fn k32() -> DistanceMatrix {
    DistanceMatrix::from_fn(5, |i, j| if (i < 3) == (j < 3) { 2.0 } else { 1.0 })
        .expect("static metric")
}

pub fn two_point(distance: f64) -> Result<DistanceMatrix> {
    DistanceMatrix::from_rows(&[vec![0.0, distance], vec![distance, 0.0]])
}

/// Path graph `L_N`: `d(i, j) = |i - j|`.
pub fn linear_tree_metric(n: usize) -> Result<DistanceMatrix> {
    if n == 0 {
        return Err(Error::param("linear tree needs N >= 1"));
    }
    DistanceMatrix::from_fn(n, |i, j| (j - i) as f64)
}

/// Star `C_N = K_{1,N-1}`: vertex 0 is the centre.
pub fn corona_metric(n: usize) -> Result<DistanceMatrix> {
    if n < 2 {
        return Err(Error::param(format!("corona needs N >= 2, got {n}")));
    }
    DistanceMatrix::from_fn(n, |i, _| if i == 0 { 1.0 } else { 2.0 })
}

/// Cycle graph on `n >= 3` vertices with unit edges.
pub fn cycle_metric(n: usize) -> Result<DistanceMatrix> {
    if n < 3 {
        return Err(Error::param(format!("cycle needs N >= 3, got {n}")));
    }
    DistanceMatrix::from_fn(n, |i, j| {
        let k = j - i;
        k.min(n - k) as f64
    })
}

/// `rows x cols` planar lattice with the given spacing.
pub fn grid(rows: usize, cols: usize, spacing: f64) -> Result<PointCloud> {
    if rows == 0 || cols == 0 {
        return Err(Error::param("grid needs at least one row and column"));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::param(format!(
            "grid spacing must be positive, got {spacing}"
        )));
    }
    let mut coords = Vec::with_capacity(rows * cols * 2);
    for r in 0..rows {
        for c in 0..cols {
            coords.push(c as f64 * spacing);
            coords.push(r as f64 * spacing);
        }
    }
    PointCloud::new(2, coords)
}

/// Uniform random labelled tree on `n` vertices, decoded from a random
/// Prüfer sequence drawn with a seeded ChaCha generator.
pub fn random_tree(n: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if n == 0 {
        return Err(Error::param("random tree needs N >= 1"));
    }
    if n <= 2 {
        return Ok(if n == 2 { vec![(0, 1)] } else { vec![] });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    Ok(decode_prufer(n, &code))
}

fn decode_prufer(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &v in code {
        degree[v] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in code {
        let leaf = *leaves.iter().next().expect("a tree always has a leaf");
        leaves.remove(&leaf);
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let mut last = leaves.into_iter();
    let (a, b) = (last.next().unwrap(), last.next().unwrap());
    edges.push((a, b));
    edges
}

/// Shortest-path metric of a unit-edge tree.
pub fn tree_metric(n: usize, edges: &[(usize, usize)]) -> Result<DistanceMatrix> {
    let weighted: Vec<_> = edges.iter().map(|&(a, b)| (a, b, 1.0)).collect();
    graph_metric(n, &weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{diameter, MetricSpace};
    use crate::spread::spread0;

    #[test]
    fn three_point_space() {
        let r = three_point_r();
        assert_eq!(diameter(&r).unwrap(), 1000.0);
        assert_eq!(r.validate(true), Ok(()));
        assert!((spread0(&r, 1e3).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn k32_matches_bipartite_graph() {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..5 {
                edges.push((a, b, 1.0));
            }
        }
        assert_eq!(graph_metric(5, &edges).unwrap(), k32());
        assert_eq!(k32().validate(true), Ok(()));
    }

    #[test]
    fn k32_spread_defined_everywhere() {
        let grid = crate::spread::LogGrid::new(1e-2, 1e2, 50).unwrap().scales();
        for t in grid {
            let e = spread0(&k32(), t).unwrap();
            assert!(e.is_finite() && (1.0..=5.0).contains(&e));
        }
    }

    #[test]
    fn trees() {
        for n in 1..12 {
            let l = linear_tree_metric(n).unwrap();
            assert_eq!(diameter(&l).unwrap(), (n - 1) as f64);
            assert_eq!(l.validate(true), Ok(()));
        }
        for n in 3..12 {
            let c = corona_metric(n).unwrap();
            assert_eq!(diameter(&c).unwrap(), 2.0);
            assert_eq!(c.validate(true), Ok(()));
        }
        assert_eq!(corona_metric(2).unwrap(), linear_tree_metric(2).unwrap());

        let path: Vec<_> = (0..5).map(|i| (i, i + 1, 1.0)).collect();
        assert_eq!(
            graph_metric(6, &path).unwrap(),
            linear_tree_metric(6).unwrap()
        );
        let star: Vec<_> = (1..6).map(|i| (0, i, 1.0)).collect();
        assert_eq!(graph_metric(6, &star).unwrap(), corona_metric(6).unwrap());
    }

    #[test]
    fn cycles() {
        for n in 3..13 {
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
            assert_eq!(graph_metric(n, &edges).unwrap(), cycle_metric(n).unwrap());
        }
    }

    #[test]
    fn grids() {
        let g = grid(1, 2, 0.25).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.distance(0, 1), 0.25);
        assert_eq!(grid(220, 220, 0.1).unwrap().len(), 48400);
        assert_eq!(grid(10, 4900, 0.1).unwrap().len(), 49000);
        assert!(grid(0, 3, 1.0).is_err());
        assert!(grid(2, 3, 0.0).is_err());
    }

    #[test]
    fn random_trees() {
        assert!(random_tree(1, 7).unwrap().is_empty());
        assert_eq!(random_tree(2, 7).unwrap(), vec![(0, 1)]);
        for n in 1..25 {
            for seed in 0..5 {
                let edges = random_tree(n, seed).unwrap();
                assert_eq!(edges.len(), n - 1);
                // connected, so a tree
                tree_metric(n, &edges).unwrap();
            }
        }
        assert_eq!(random_tree(9, 3).unwrap(), random_tree(9, 3).unwrap());
    }

    #[test]
    fn generated_metrics_satisfy_triangle_inequality() {
        for n in [3, 8, 13] {
            let t = tree_metric(n, &random_tree(n, 11).unwrap()).unwrap();
            assert_eq!(t.validate(true), Ok(()));
            assert_eq!(cycle_metric(n).unwrap().validate(true), Ok(()));
        }
    }
}
