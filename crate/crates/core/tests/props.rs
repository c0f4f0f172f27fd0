//! Property tests for the spec-level invariants that are not already part
//! of the acceptance suite.

mod common;

use barynet::bnn::{to_segments, BaseConfiguration, GlobalBnn};
use barynet::data::gen_sine;
use barynet::geometry::{barycentric_coords, interval_coords, Interval, Simplex};
use barynet::losses::{classical_loss, LossKind};
use barynet::persistence::{lower_star_barcode, PointCloudFunction};
use common::{sorted_triples, sublevel_oracle};
use proptest::prelude::*;

fn simplex_with_weights() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (1usize..=3).prop_flat_map(|dim| {
        (
            prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), dim + 1),
            prop::collection::vec(1e-3..1.0f64, dim + 1),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn barycentric_round_trip((vertices, weights) in simplex_with_weights()) {
        let dim = vertices.len() - 1;
        let Ok(simplex) = Simplex::new(vertices.clone()) else {
            return Ok(()); // skip singular draws
        };
        let total: f64 = weights.iter().sum();
        let w: Vec<f64> = weights.iter().map(|v| v / total).collect();
        let p: Vec<f64> = (0..dim)
            .map(|c| w.iter().zip(&vertices).map(|(wi, v)| wi * v[c]).sum())
            .collect();
        let coords = barycentric_coords(&simplex, &p).unwrap();
        prop_assert!(coords.is_inside());
        prop_assert!((coords.sum() - 1.0).abs() <= 1e-9);
        for (got, want) in coords.values().iter().zip(&w) {
            prop_assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn interval_and_general_solver_agree(a in -100.0..100.0f64, span in 0.1..50.0f64, t in -2.0..3.0f64) {
        let b = a + span;
        let x = a + t * span;
        let iv = Interval::new(a, b).unwrap();
        let fast = interval_coords(&iv, x);
        let simplex = Simplex::new(vec![vec![a], vec![b]]).unwrap();
        let solved = barycentric_coords(&simplex, &[x]).unwrap();
        for (u, v) in fast.values().iter().zip(solved.values()) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
        // Inside flag characterizations agree (away from the tolerance band).
        if (x - a).abs() > 1e-9 && (x - b).abs() > 1e-9 {
            prop_assert_eq!(fast.is_inside(), x >= a && x <= b);
        }
    }

    #[test]
    fn persistence_matches_oracle_on_small_grids(ys in prop::collection::vec(0i32..5, 1..=12)) {
        let ys: Vec<f64> = ys.into_iter().map(f64::from).collect();
        let points: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64, y)).collect();
        let cloud = PointCloudFunction::new(points).unwrap();
        let got: Vec<(f64, f64, bool)> = lower_star_barcode(&cloud)
            .unwrap()
            .bars
            .iter()
            .map(|b| (b.birth, b.death, b.essential))
            .collect();
        prop_assert_eq!(sorted_triples(got), sorted_triples(sublevel_oracle(&ys)));
        // Bar-count bound from the vertex count.
        let bc = lower_star_barcode(&cloud).unwrap();
        prop_assert!(bc.len() <= ys.len().div_ceil(2));
    }

    #[test]
    fn network_is_continuous_and_matches_segments(
        gaps in prop::collection::vec(0.1..5.0f64, 1..=19),
        ys in prop::collection::vec(-10.0..10.0f64, 20),
        samples in prop::collection::vec(0.0..1.0f64, 50),
    ) {
        let n = gaps.len() + 1;
        let mut xs = vec![0.0];
        for g in &gaps {
            xs.push(xs.last().unwrap() + g);
        }
        let ys: Vec<f64> = ys.into_iter().take(n).collect();
        let cfg = BaseConfiguration::new(xs, ys).unwrap();
        let net = GlobalBnn::from_base_config(&cfg);
        let segments = to_segments(&cfg);
        let (a, b) = cfg.domain();

        // Continuity across interior base points.
        let eps = 1e-7;
        let slope_bound = segments.iter().fold(0.0f64, |m, s| m.max(s.slope.abs()));
        for &x in &cfg.xs()[1..n - 1] {
            let jump = (net.eval_at(x - eps) - net.eval_at(x + eps)).abs();
            prop_assert!(jump <= slope_bound * 2.0 * eps + 1e-12, "jump {jump} at {x}");
        }

        // The segment slope/intercept form and the network agree pointwise,
        // so the max-norm error against any sample set matches too.
        for &u in &samples {
            let x = a + u * (b - a);
            let k = cfg.segment_of(x).unwrap().0;
            let direct = segments[k].eval(x);
            prop_assert!((net.eval_at(x) - direct).abs() <= 1e-9);
        }
    }

    #[test]
    fn classical_losses_ignore_sample_order(perm_seed in 0u64..1000) {
        let pts = [(0.0, 1.0), (1.0, -0.5), (2.0, 0.25), (3.0, 2.0), (4.0, -1.0)];
        let mut shuffled = pts.to_vec();
        // cheap deterministic shuffle
        let mut s = perm_seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let reference = PointCloudFunction::new(pts.to_vec()).unwrap();
        let reordered = PointCloudFunction::new(shuffled).unwrap();
        let pred = PointCloudFunction::new(pts.iter().map(|&(x, _)| (x, 0.0)).collect()).unwrap();
        for kind in [LossKind::Mse, LossKind::Rmse, LossKind::Mae, LossKind::LogCosh] {
            prop_assert_eq!(
                classical_loss(&pred, &reference, kind).unwrap(),
                classical_loss(&pred, &reordered, kind).unwrap()
            );
        }
    }
}

/// The 250-point sine barcode and a 7-point subsample keeping the four
/// minima and three maxima carry identical (birth, death) multisets.
#[test]
fn subsample_preserves_the_sine_barcode() {
    let dense = gen_sine(250, -10.0, 10.0, 0.0, 0).unwrap();
    let bc = lower_star_barcode(&dense).unwrap();
    assert_eq!(bc.len(), 4);

    // Critical vertices of the dense cloud: local minima and maxima.
    let ys = dense.ys();
    let xs = dense.xs();
    // Minima (boundary vertices count when their neighbor is larger) and
    // interior maxima; boundary maxima never pair and are dropped.
    let mut critical = Vec::new();
    for i in 0..ys.len() {
        let is_min = (i == 0 || ys[i - 1] > ys[i]) && (i == ys.len() - 1 || ys[i + 1] > ys[i]);
        let is_interior_max = i > 0 && i < ys.len() - 1 && ys[i - 1] < ys[i] && ys[i + 1] < ys[i];
        if is_min || is_interior_max {
            critical.push((xs[i], ys[i]));
        }
    }
    assert_eq!(critical.len(), 7, "expected 4 minima and 3 maxima");
    let sparse = PointCloudFunction::new(critical).unwrap();
    let sparse_bc = lower_star_barcode(&sparse).unwrap();

    let pairs = |bc: &barynet::persistence::Barcode| {
        let mut v: Vec<(f64, f64)> = bc.bars.iter().map(|b| (b.birth, b.death)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    };
    assert_eq!(pairs(&bc), pairs(&sparse_bc));
}
