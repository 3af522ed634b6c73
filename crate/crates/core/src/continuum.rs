//! Closed forms for the interval and round spheres, and the large-scale
//! asymptotics of the spread of a closed Riemannian manifold.

use std::f64::consts::PI;

use crate::error::{check_scale, Error, Result};
use crate::metric::{PointCloud, WeightedSpace};

/// Below this length the interval formulas use their Taylor expansions.
pub const SERIES_CUTOFF: f64 = 1e-6;

fn check_length(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!(
            "interval length must be positive, got {l}"
        )))
    }
}

/// `E_0` of the interval of length `l` with Lebesgue measure,
/// `arctanh(z)/z` with `z = sqrt(1 - e^{-l})`, written as
/// `(ln(1 + z) + l/2)/z` so that `1 - z` is never formed.
pub fn interval_spread0(l: f64) -> Result<f64> {
    check_length(l)?;
    if l < SERIES_CUTOFF {
        return Ok(1.0 + l / 3.0 + l * l / 30.0);
    }
    let z = (-(-l).exp_m1()).sqrt();
    Ok((z.ln_1p() + 0.5 * l) / z)
}

/// `E_2 = l^2 / (2(l - 1 + e^{-l}))`.
pub fn interval_spread2(l: f64) -> Result<f64> {
    check_length(l)?;
    if l < SERIES_CUTOFF {
        return Ok(1.0 / (1.0 - l / 3.0 + l * l / 12.0));
    }
    Ok(l * l / (2.0 * (l + (-l).exp_m1())))
}

/// `E_inf = l / (2(1 - e^{-l/2}))`.
pub fn interval_spread_inf(l: f64) -> Result<f64> {
    check_length(l)?;
    if l < SERIES_CUTOFF {
        return Ok(1.0 / (1.0 - l / 4.0 + l * l / 24.0));
    }
    Ok(l / (-2.0 * (-0.5 * l).exp_m1()))
}

/// `|L_l| = l/2 + 1`.
pub fn interval_magnitude(l: f64) -> Result<f64> {
    check_length(l)?;
    Ok(0.5 * l + 1.0)
}

/// `E_0` of the round `n`-sphere of radius `r` with its geodesic metric.
pub fn sphere_spread0(n: usize, r: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::param("sphere dimension must be at least 1"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param(format!(
            "sphere radius must be positive, got {r}"
        )));
    }
    let x = PI * r;
    if n.is_multiple_of(2) {
        let prod: f64 = (1..=n / 2)
            .map(|i| (r / (2 * i - 1) as f64).powi(2) + 1.0)
            .product();
        Ok(2.0 / (1.0 + (-x).exp()) * prod)
    } else {
        let prod: f64 = (1..=(n - 1) / 2)
            .map(|i| (r / (2 * i) as f64).powi(2) + 1.0)
            .product();
        Ok(x / (-(-x).exp_m1()) * prod)
    }
}

/// Dimension, volume and total scalar curvature of a closed manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldSummary {
    n: usize,
    volume: f64,
    total_scalar_curvature: f64,
}

impl ManifoldSummary {
    pub fn new(n: usize, volume: f64, total_scalar_curvature: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::param("manifold dimension must be at least 1"));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::param(format!(
                "volume must be positive, got {volume}"
            )));
        }
        if !total_scalar_curvature.is_finite() {
            return Err(Error::param("total scalar curvature must be finite"));
        }
        Ok(ManifoldSummary {
            n,
            volume,
            total_scalar_curvature,
        })
    }

    /// Round `n`-sphere of radius `r`: scalar curvature `n(n-1)/r^2`.
    pub fn round_sphere(n: usize, r: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::param("sphere dimension must be at least 1"));
        }
        let volume = sphere_area(n, r);
        ManifoldSummary::new(n, volume, volume * (n * (n - 1)) as f64 / (r * r))
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn total_scalar_curvature(&self) -> f64 {
        self.total_scalar_curvature
    }
}

/// `Gamma(n/2 + 1)` by the recursion `Gamma(x + 1) = x Gamma(x)` from
/// `Gamma(1) = 1` or `Gamma(1/2) = sqrt(pi)`; exact up to rounding.
fn gamma_half_plus_one(n: usize) -> f64 {
    let (mut x, mut g) = if n.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (0.5, PI.sqrt())
    };
    let target = n as f64 / 2.0 + 1.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half_plus_one(n)
}

/// Area of the round `n`-sphere of radius `r`: `(n+1) omega_{n+1} r^n`.
fn sphere_area(n: usize, r: f64) -> f64 {
    (n + 1) as f64 * unit_ball_volume(n + 1) * r.powi(n as i32)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Leading two terms of `E_0(tX)` as `t -> infinity`:
/// `(t^n Vol + (n+1)/6 t^{n-2} TSC) / (n! omega_n)`.
pub fn riemannian_asymptotic_spread(m: &ManifoldSummary, t: f64) -> Result<f64> {
    check_scale(t)?;
    let n = m.n as i32;
    let lead = t.powi(n) * m.volume;
    let curvature = (n + 1) as f64 / 6.0 * t.powi(n - 2) * m.total_scalar_curvature;
    Ok((lead + curvature) / (factorial(m.n) * unit_ball_volume(m.n)))
}

/// Surface case: `area t^2 / (2 pi) + chi`.
pub fn surface_asymptotic_spread(area: f64, euler_characteristic: f64, t: f64) -> Result<f64> {
    check_scale(t)?;
    if !(area > 0.0 && area.is_finite()) {
        return Err(Error::param(format!("area must be positive, got {area}")));
    }
    if !euler_characteristic.is_finite() {
        return Err(Error::param("Euler characteristic must be finite"));
    }
    Ok(area * t * t / (2.0 * PI) + euler_characteristic)
}

/// Midpoint discretization of `[0, l]`: `n` points at `(i + 1/2) l/n`, each
/// carrying mass `l/n`.
pub fn riemann_sum_space(l: f64, n: usize) -> Result<WeightedSpace<PointCloud>> {
    check_length(l)?;
    if n < 2 {
        return Err(Error::param(format!(
            "need at least 2 sample points, got {n}"
        )));
    }
    let h = l / n as f64;
    let coords = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    WeightedSpace::new(PointCloud::new(1, coords)?, vec![h; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spread::weighted_spread0;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    /// Composite Simpson rule on `[a, b]` with `m` (even) panels.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
        let h = (b - a) / m as f64;
        let mut s = f(a) + f(b);
        for k in 1..m {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    /// `E_0(L_l) = int_0^l dx / int_0^l e^{-|x-y|} dy` by nested quadrature,
    /// splitting the inner integral at the kink.
    fn quadrature_spread0(l: f64) -> f64 {
        let inner = |x: f64| {
            simpson(|y| (y - x).exp(), 0.0, x, 200) + simpson(|y| (x - y).exp(), x, l, 200)
        };
        simpson(|x| 1.0 / inner(x), 0.0, l, 400)
    }

    #[test]
    fn interval_spread0_examples() {
        let oracle = quadrature_spread0(1.0);
        assert!((oracle - 1.364725).abs() < 1e-6);
        assert!(close(interval_spread0(1.0).unwrap(), oracle, 1e-10));
        assert!(close(
            interval_spread0(3.5).unwrap(),
            quadrature_spread0(3.5),
            1e-8
        ));

        let tail = interval_spread0(50.0).unwrap() - (25.0 + 2f64.ln());
        assert!(tail.abs() < 1e-6);
        assert!(interval_spread0(0.0).is_err());
        assert!(interval_spread0(-1.0).is_err());
    }

    #[test]
    fn series_branches_are_continuous() {
        for f in [interval_spread0, interval_spread2, interval_spread_inf] {
            let below = f(SERIES_CUTOFF * (1.0 - 1e-9)).unwrap();
            let above = f(SERIES_CUTOFF).unwrap();
            assert!((below - above).abs() < 1e-9, "{below} vs {above}");
            assert!((f(1e-8).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn interval_asymptotes() {
        assert!((interval_spread_inf(50.0).unwrap() - 25.0).abs() < 1e-6);
        // E_2 approaches its asymptote only like 1/(2l)
        for l in [50.0, 200.0, 1e3] {
            let gap = interval_spread2(l).unwrap() - 0.5 * (l + 1.0);
            assert!(close(gap, 0.5 / (l - 1.0), 1e-6), "l={l}");
        }

        let mut prev = f64::INFINITY;
        for l in (1..=40).map(|k| k as f64) {
            let gap = (interval_spread0(l).unwrap() - (0.5 * l + 2f64.ln())).abs();
            assert!(gap <= prev, "l={l}");
            prev = gap;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn interval_orders_and_magnitude() {
        for l in [0.1, 1.0, 10.0] {
            let (e0, e2, ei) = (
                interval_spread0(l).unwrap(),
                interval_spread2(l).unwrap(),
                interval_spread_inf(l).unwrap(),
            );
            assert!(e0 >= e2 && e2 >= ei, "l={l}: {e0} {e2} {ei}");
        }
        assert_eq!(interval_magnitude(2.0).unwrap(), 2.0);
        for l in [0.1, 1.0, 10.0, 100.0] {
            assert!(interval_magnitude(l).unwrap() >= interval_spread0(l).unwrap());
        }
        let gap = interval_magnitude(60.0).unwrap() - interval_spread0(60.0).unwrap();
        assert!((gap - (1.0 - 2f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn spheres() {
        let r = 10.0;
        let expected = 2.0 / (1.0 + (-PI * r).exp()) * 101.0;
        assert!(close(sphere_spread0(2, r).unwrap(), expected, 1e-15));
        assert!((sphere_spread0(2, r).unwrap() - 202.0).abs() < 1e-9);
        assert!((sphere_spread0(1, 1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert!(close(
            sphere_spread0(3, 2.0).unwrap(),
            2.0 * PI / (1.0 - (-2.0 * PI).exp()) * 2.0,
            1e-15
        ));
        assert!(sphere_spread0(0, 1.0).is_err());
        assert!(sphere_spread0(2, 0.0).is_err());

        let mut prev = f64::INFINITY;
        for r in [1.0, 2.0, 3.0, 5.0, 10.0] {
            let gap = (sphere_spread0(2, r).unwrap() - (2.0 * r * r + 2.0)).abs();
            assert!(gap <= 3.0 * (-PI * r).exp() * (r * r + 1.0));
            assert!(gap <= prev);
            prev = gap;
        }
    }

    #[test]
    fn unit_ball_volumes() {
        let known = [
            (1, 2.0),
            (2, PI),
            (3, 4.0 * PI / 3.0),
            (4, PI * PI / 2.0),
            (5, 8.0 * PI * PI / 15.0),
        ];
        for (n, v) in known {
            assert!(close(unit_ball_volume(n), v, 1e-15), "n={n}");
        }
        let s2 = ManifoldSummary::round_sphere(2, 1.0).unwrap();
        assert!(close(s2.volume(), 4.0 * PI, 1e-15));
        assert!(close(s2.total_scalar_curvature(), 8.0 * PI, 1e-15));
    }

    #[test]
    fn asymptotic_matches_closed_forms() {
        let s2 = ManifoldSummary::new(2, 4.0 * PI, 8.0 * PI).unwrap();
        assert!(close(
            riemannian_asymptotic_spread(&s2, 10.0).unwrap(),
            202.0,
            1e-14
        ));
        assert!(close(
            surface_asymptotic_spread(4.0 * PI, 2.0, 10.0).unwrap(),
            202.0,
            1e-14
        ));

        // Gauss-Bonnet: TSC = 2 int K = 4 pi chi on surfaces
        for (area, chi, t) in [(3.0, 0.0, 2.0), (7.5, -2.0, 0.3), (1.0, 2.0, 40.0)] {
            let m = ManifoldSummary::new(2, area, 4.0 * PI * chi).unwrap();
            let a = riemannian_asymptotic_spread(&m, t).unwrap();
            let b = surface_asymptotic_spread(area, chi, t).unwrap();
            assert!(close(a, b, 1e-13));
        }
        let torus = surface_asymptotic_spread(5.0, 0.0, 3.0).unwrap();
        assert!(close(torus, 5.0 * 9.0 / (2.0 * PI), 1e-15));
    }

    #[test]
    fn circle_normalization() {
        // The circle of radius r at scale t has leading term pi r t.
        let r = 1.5;
        let circle = ManifoldSummary::round_sphere(1, r).unwrap();
        assert_eq!(circle.total_scalar_curvature(), 0.0);
        for t in [5.0, 20.0, 80.0] {
            let asym = riemannian_asymptotic_spread(&circle, t).unwrap();
            assert!(close(asym, PI * r * t, 1e-14));
            let exact = sphere_spread0(1, r * t).unwrap();
            assert!((exact - asym).abs() < 1e-6, "t={t}: {exact} vs {asym}");
        }
    }

    #[test]
    fn higher_spheres_approach_asymptotics() {
        // remainder is O(t^{n-4}); for round spheres the constant is small
        for n in [3usize, 4, 5] {
            let m = ManifoldSummary::round_sphere(n, 1.0).unwrap();
            for t in [5.0, 10.0, 20.0, 40.0] {
                let exact = sphere_spread0(n, t).unwrap();
                let asym = riemannian_asymptotic_spread(&m, t).unwrap();
                let bound = 4.0 * t.powi(n as i32 - 4) + 1e-12 * exact;
                assert!(
                    (exact - asym).abs() <= bound,
                    "n={n} t={t}: {exact} vs {asym}"
                );
            }
        }
    }

    #[test]
    fn riemann_sums() {
        let space = riemann_sum_space(10.0, 8).unwrap();
        assert!(close(space.total_mass(), 10.0, 1e-15));
        assert!(riemann_sum_space(1.0, 1).is_err());

        let tiny = riemann_sum_space(1e-9, 2).unwrap();
        assert!((weighted_spread0(&tiny, 1.0).unwrap() - 1.0).abs() < 1e-8);

        let exact = interval_spread0(10.0).unwrap();
        let err = |n| {
            (weighted_spread0(&riemann_sum_space(10.0, n).unwrap(), 1.0).unwrap() - exact).abs()
        };
        let (e250, e500) = (err(250), err(500));
        assert!(e500 < 1e-2);
        assert!(e250 / e500 > 1.9, "ratio {}", e250 / e500);
    }
}
