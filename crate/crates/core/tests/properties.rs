use proptest::prelude::*;

use metric_spread::dimension::{dimension_profile, DEFAULT_LOG_STEP};
use metric_spread::diversity::Order;
use metric_spread::generators::{cantor, grid};
use metric_spread::magnitude::{is_positive_definite, magnitude, maximum_diversity};
use metric_spread::metric::{graph_metric, DistanceMatrix, MetricSpace, PointCloud};
use metric_spread::spread::{log_spaced, spread0, spread_q};

fn cloud(max_n: usize) -> impl Strategy<Value = PointCloud> {
    (1usize..=3, 1usize..=max_n).prop_flat_map(|(dim, n)| {
        prop::collection::vec(-5.0f64..5.0, dim * n)
            .prop_map(move |c| PointCloud::new(dim, c).unwrap())
    })
}

fn weighted_graph() -> impl Strategy<Value = DistanceMatrix> {
    (2usize..=12).prop_flat_map(|n| {
        (
            prop::collection::vec((0usize..1000, 0.1f64..4.0), n - 1),
            prop::collection::vec((0usize..n, 0usize..n, 0.1f64..4.0), 0..n),
        )
            .prop_map(move |(tree, extra)| {
                // vertex k + 1 hangs off a random earlier vertex
                let mut edges: Vec<_> = tree
                    .iter()
                    .enumerate()
                    .map(|(k, &(parent, w))| (parent % (k + 1), k + 1, w))
                    .collect();
                edges.extend(extra.into_iter().filter(|(a, b, _)| a != b));
                graph_metric(n, &edges).unwrap()
            })
    })
}

fn subset(space: &PointCloud, mask: &[bool]) -> PointCloud {
    let pts: Vec<Vec<f64>> = space
        .points()
        .zip(mask)
        .filter(|(_, &keep)| keep)
        .map(|(p, _)| p.to_vec())
        .collect();
    PointCloud::from_points(&pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_metrics_are_metrics(m in weighted_graph()) {
        prop_assert_eq!(m.validate(true), Ok(()));
    }

    #[test]
    fn spread_bounds_and_monotonicity(m in weighted_graph(), t in 0.01f64..10.0) {
        let n = m.len() as f64;
        let grid = log_spaced(t / 100.0, t * 100.0, 30);
        let mut prev = 0.0;
        for s in grid {
            let e = spread0(&m, s).unwrap();
            prop_assert!(e >= 1.0 - 1e-12 && e <= n * (1.0 + 1e-12));
            prop_assert!(e >= prev * (1.0 - 1e-12));
            prev = e;
        }
    }

    #[test]
    fn spread_decreases_in_order(x in cloud(20), t in 0.05f64..20.0) {
        let values: Vec<f64> = [0.0, 0.5, 1.0, 2.0, 5.0, f64::INFINITY]
            .iter()
            .map(|&q| spread_q(&x, t, Order::new(q).unwrap()).unwrap().value)
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "{:?}", values);
        }
    }

    #[test]
    fn euclidean_sandwich(x in cloud(8), t in 0.1f64..5.0) {
        prop_assume!(is_positive_definite(&x, t).unwrap());
        let e0 = spread0(&x, t).unwrap();
        let plus = maximum_diversity(&x, t).unwrap().value;
        let mag = magnitude(&x, t).unwrap().value;
        prop_assert!(e0 <= plus + 1e-10);
        prop_assert!(plus <= mag + 1e-10);
    }

    #[test]
    fn subsets_have_smaller_magnitude(
        x in cloud(10),
        mask in prop::collection::vec(any::<bool>(), 10),
        t in 0.1f64..5.0,
    ) {
        prop_assume!(is_positive_definite(&x, t).unwrap());
        let mask = &mask[..x.len()];
        prop_assume!(mask.iter().any(|&b| b));
        let b = subset(&x, mask);
        prop_assume!(is_positive_definite(&b, t).unwrap());
        prop_assert!(magnitude(&b, t).unwrap().value <= magnitude(&x, t).unwrap().value + 1e-10);
    }
}

#[test]
fn dimension_non_negative_on_grids() {
    for (rows, cols) in [(1, 40), (6, 6), (3, 15)] {
        let g = grid(rows, cols, 1.0).unwrap();
        let profile = dimension_profile(&g, &log_spaced(1e-3, 1e3, 25), DEFAULT_LOG_STEP).unwrap();
        assert!(profile.defined_values().iter().all(|&v| v >= -1e-6));
    }
}

#[test]
fn cantor_period_three() {
    let c = cantor(10, 1.0).unwrap();
    let scales = log_spaced(20.0, 600.0, 7);
    let tripled: Vec<f64> = scales.iter().map(|t| 3.0 * t).collect();
    let a = dimension_profile(&c, &scales, DEFAULT_LOG_STEP).unwrap();
    let b = dimension_profile(&c, &tripled, DEFAULT_LOG_STEP).unwrap();
    for ((t, x), (_, y)) in a.iter().zip(b.iter()) {
        let (x, y) = (x.unwrap(), y.unwrap());
        assert!((x - y).abs() < 0.005, "t={t}: {x} vs {y}");
    }
}

#[test]
fn grids_look_like_their_dimension() {
    // 1 x 3000 line: plateau near 1 at intermediate interpoint distance
    let line = grid(1, 3000, 1.0).unwrap();
    let d = dimension_profile(&line, &[0.3], DEFAULT_LOG_STEP)
        .unwrap()
        .values[0]
        .unwrap();
    assert!((d - 1.0).abs() < 0.05, "{d}");

    // square grid: just under 2
    let square = grid(40, 40, 1.0).unwrap();
    let d = dimension_profile(&square, &[0.3], DEFAULT_LOG_STEP)
        .unwrap()
        .values[0]
        .unwrap();
    assert!(d > 1.7 && d < 2.0, "{d}");

    // 10 x 490: line-like before the short side resolves, then rising
    let strip = grid(10, 490, 1.0).unwrap();
    let p = dimension_profile(&strip, &log_spaced(0.01, 0.1, 9), DEFAULT_LOG_STEP).unwrap();
    let early = p.defined_values();
    assert!(early.iter().any(|d| (d - 1.0).abs() < 0.1), "{early:?}");
    let late = dimension_profile(&strip, &[0.5], DEFAULT_LOG_STEP)
        .unwrap()
        .values[0]
        .unwrap();
    assert!(late > 1.5, "{late}");
}
