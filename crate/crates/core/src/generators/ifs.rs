//! Iterated function systems in one or two dimensions.

use crate::error::{Error, Result};
use crate::metric::PointCloud;

/// Relative rounding grid used to merge coincident points.
pub const DEFAULT_DEDUP_TOLERANCE: f64 = 1e-9;

/// `x -> A x + b` on the plane; one-dimensional systems use only the first
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: [[f64; 2]; 2],
    pub offset: [f64; 2],
}

impl AffineMap {
    pub fn similarity(ratio: f64, angle: f64, offset: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        AffineMap {
            linear: [[ratio * c, -ratio * s], [ratio * s, ratio * c]],
            offset,
        }
    }

    #[inline]
    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let a = &self.linear;
        [
            a[0][0] * p[0] + a[0][1] * p[1] + self.offset[0],
            a[1][0] * p[0] + a[1][1] * p[1] + self.offset[1],
        ]
    }

    /// Largest singular value of the linear part.
    pub fn operator_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.linear;
        let frob2 = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
        (0.5 * (frob2 + disc)).sqrt()
    }
}

/// Contractions, seed points and the number of map applications.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsSystem {
    dim: usize,
    maps: Vec<AffineMap>,
    seeds: Vec<[f64; 2]>,
    depth: usize,
}

impl IfsSystem {
    pub fn new(
        dim: usize,
        maps: Vec<AffineMap>,
        seeds: Vec<[f64; 2]>,
        depth: usize,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::param(format!(
                "IFS dimension must be 1 or 2, got {dim}"
            )));
        }
        if maps.is_empty() || seeds.is_empty() {
            return Err(Error::param("IFS needs at least one map and one seed"));
        }
        if let Some(m) = maps
            .iter()
            .find(|m| m.operator_norm().is_nan() || m.operator_norm() >= 1.0)
        {
            return Err(Error::param(format!(
                "IFS map is not a contraction (norm {})",
                m.operator_norm()
            )));
        }
        if dim == 1 {
            let leaks = maps.iter().any(|m| {
                m.linear[0][1] != 0.0
                    || m.linear[1][0] != 0.0
                    || m.linear[1][1] != 0.0
                    || m.offset[1] != 0.0
            }) || seeds.iter().any(|s| s[1] != 0.0);
            if leaks {
                return Err(Error::param("one-dimensional IFS must stay on the x axis"));
            }
        }
        Ok(IfsSystem {
            dim,
            maps,
            seeds,
            depth,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Largest coordinate range of the seeds; the attractor's bounding set
    /// for the canonical systems below.
    fn extent(&self) -> f64 {
        let range = |k: usize| {
            let lo = self
                .seeds
                .iter()
                .map(|s| s[k])
                .fold(f64::INFINITY, f64::min);
            let hi = self
                .seeds
                .iter()
                .map(|s| s[k])
                .fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        let e = range(0).max(range(1));
        if e > 0.0 {
            e
        } else {
            1.0
        }
    }
}

type Key = [i64; 2];

fn key(p: [f64; 2], cell: f64) -> Key {
    [(p[0] / cell).round() as i64, (p[1] / cell).round() as i64]
}

/// Sorts by rounded coordinates and keeps the first point of each cell.
fn dedup(points: &mut Vec<[f64; 2]>, cell: f64) {
    points.sort_by(|a, b| {
        key(*a, cell)
            .cmp(&key(*b, cell))
            .then(a[0].total_cmp(&b[0]))
            .then(a[1].total_cmp(&b[1]))
    });
    points.dedup_by(|b, a| key(*a, cell) == key(*b, cell));
}

/// Images of the seeds under every composition of exactly `depth` maps,
/// with points closer than `dedup_tolerance * extent` (by coordinate
/// rounding) merged. The result is sorted by rounded coordinates.
pub fn ifs_points(system: &IfsSystem, dedup_tolerance: f64) -> Result<PointCloud> {
    if dedup_tolerance.is_nan() || dedup_tolerance <= 0.0 {
        return Err(Error::param("dedup tolerance must be positive"));
    }
    let cell = dedup_tolerance * system.extent();
    let mut level = system.seeds.clone();
    dedup(&mut level, cell);
    for _ in 0..system.depth {
        let mut next = Vec::with_capacity(level.len() * system.maps.len());
        for m in &system.maps {
            next.extend(level.iter().map(|p| m.apply(*p)));
        }
        dedup(&mut next, cell);
        level = next;
    }
    let coords: Vec<f64> = level
        .iter()
        .flat_map(|p| p[..system.dim].to_vec())
        .collect();
    PointCloud::new(system.dim, coords)
}

fn check_size(size: f64) -> Result<()> {
    if size > 0.0 && size.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "fractal size must be positive, got {size}"
        )))
    }
}

/// Middle-thirds Cantor set approximation on `[0, length]`:
/// `x -> x/3` and `x -> x/3 + 2 length/3` applied to `{0, length}`.
pub fn cantor_system(depth: usize, length: f64) -> Result<IfsSystem> {
    check_size(length)?;
    let third = |offset| AffineMap {
        linear: [[1.0 / 3.0, 0.0], [0.0, 0.0]],
        offset: [offset, 0.0],
    };
    IfsSystem::new(
        1,
        vec![third(0.0), third(2.0 * length / 3.0)],
        vec![[0.0, 0.0], [length, 0.0]],
        depth,
    )
}

/// Koch curve over the base segment `[0, width]` on the x axis.
pub fn koch_system(depth: usize, width: f64) -> Result<IfsSystem> {
    check_size(width)?;
    let r = 1.0 / 3.0;
    let turn = std::f64::consts::FRAC_PI_3;
    let apex = [width / 2.0, width * 3f64.sqrt() / 6.0];
    IfsSystem::new(
        2,
        vec![
            AffineMap::similarity(r, 0.0, [0.0, 0.0]),
            AffineMap::similarity(r, turn, [width / 3.0, 0.0]),
            AffineMap::similarity(r, -turn, apex),
            AffineMap::similarity(r, 0.0, [2.0 * width / 3.0, 0.0]),
        ],
        vec![[0.0, 0.0], [width, 0.0]],
        depth,
    )
}

/// Sierpinski triangle in the equilateral triangle of side `width`.
pub fn sierpinski_system(depth: usize, width: f64) -> Result<IfsSystem> {
    check_size(width)?;
    let vertices = [
        [0.0, 0.0],
        [width, 0.0],
        [width / 2.0, width * 3f64.sqrt() / 2.0],
    ];
    let maps = vertices
        .iter()
        .map(|v| AffineMap {
            linear: [[0.5, 0.0], [0.0, 0.5]],
            offset: [v[0] / 2.0, v[1] / 2.0],
        })
        .collect();
    IfsSystem::new(2, maps, vertices.to_vec(), depth)
}

pub fn cantor(depth: usize, length: f64) -> Result<PointCloud> {
    ifs_points(&cantor_system(depth, length)?, DEFAULT_DEDUP_TOLERANCE)
}

pub fn koch(depth: usize, width: f64) -> Result<PointCloud> {
    ifs_points(&koch_system(depth, width)?, DEFAULT_DEDUP_TOLERANCE)
}

pub fn sierpinski(depth: usize, width: f64) -> Result<PointCloud> {
    ifs_points(&sierpinski_system(depth, width)?, DEFAULT_DEDUP_TOLERANCE)
}
