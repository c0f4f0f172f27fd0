//! Shared oracles for the integration suites. Everything here is
//! deliberately independent of the library's evaluation and sweep paths:
//! linear interpolation by direct formula, persistence by recomputing
//! sublevel components at every threshold.
#![allow(dead_code)] // each test target uses a subset

use barynet::bnn::BaseConfiguration;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Piecewise-linear interpolation oracle: index scan plus the two-point
/// line formula, no barycentric machinery.
pub fn lerp_oracle(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    let mut i = 0;
    while i < n - 2 && xs[i + 1] < x {
        i += 1;
    }
    ys[i] + (x - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
}

/// Brute-force 0-dimensional lower-star persistence of a path complex:
/// for every threshold, recompute the connected components of the sublevel
/// graph (maximal runs of vertices with value <= threshold) and track
/// birth and merge events directly. Components are identified by their
/// oldest vertex in (value, index) order; merging kills every younger
/// root at the current threshold. Returns (birth, death, essential)
/// triples; the surviving component is truncated to the global maximum.
pub fn sublevel_oracle(ys: &[f64]) -> Vec<(f64, f64, bool)> {
    assert!(!ys.is_empty());
    let mut levels: Vec<f64> = ys.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let age = |v: usize| (ys[v], v);
    let mut alive: Vec<usize> = Vec::new(); // component roots
    let mut bars = Vec::new();
    for &h in &levels {
        let mut next_alive = Vec::new();
        let mut i = 0;
        while i < ys.len() {
            if ys[i] > h {
                i += 1;
                continue;
            }
            let mut j = i;
            while j + 1 < ys.len() && ys[j + 1] <= h {
                j += 1;
            }
            // roots of previously alive components inside this run
            let mut prev: Vec<usize> = alive.iter().copied().filter(|&r| i <= r && r <= j).collect();
            if prev.is_empty() {
                // freshly born component; its root value must equal h
                let root = (i..=j).min_by(|&a, &b| age(a).partial_cmp(&age(b)).unwrap()).unwrap();
                assert_eq!(ys[root], h);
                next_alive.push(root);
            } else {
                prev.sort_by(|&a, &b| age(a).partial_cmp(&age(b)).unwrap());
                let survivor = prev[0];
                for &dead in &prev[1..] {
                    bars.push((ys[dead], h, false));
                }
                next_alive.push(survivor);
            }
            i = j + 1;
        }
        alive = next_alive;
    }
    assert_eq!(alive.len(), 1);
    let root = alive[0];
    let max = *levels.last().unwrap();
    bars.push((ys[root], max, true));
    bars
}

/// Canonical form for comparing barcodes as multisets.
pub fn sorted_triples(mut bars: Vec<(f64, f64, bool)>) -> Vec<(f64, f64, bool)> {
    bars.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    bars
}

/// Random strictly increasing abscissas spanning a random domain.
pub fn random_config(rng: &mut ChaCha8Rng, n: usize) -> BaseConfiguration {
    let a: f64 = rng.random_range(-100.0..100.0);
    let mut xs = vec![a];
    for _ in 1..n {
        let gap: f64 = rng.random_range(0.05..10.0);
        xs.push(xs.last().unwrap() + gap);
    }
    let ys: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
    BaseConfiguration::new(xs, ys).unwrap()
}
