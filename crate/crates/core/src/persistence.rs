//! 0-dimensional lower-star persistence of sampled 1-D functions.
//!
//! The sample set is read as a path complex: vertices are the points sorted
//! by abscissa, edges join consecutive points. Sweeping the vertices in
//! increasing function value (ties broken by vertex index) births a
//! connected component at every local minimum and kills the younger of two
//! components when they merge at a local maximum (elder rule). The
//! component that survives yields the essential bar, truncated by
//! convention to end at the maximum value, so the longest bar is always
//! `[min f, max f)`.

use crate::error::{Error, Result};

/// A sampled function `{(x_i, y_i)}` where equal abscissas must carry equal
/// ordinates. Canonical form: sorted by `x` with duplicate points collapsed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloudFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PointCloudFunction {
    /// Canonicalize a sample set: sort by `x`, collapse duplicate points,
    /// reject conflicting ordinates and non-finite coordinates.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFiniteSample { index: i });
            }
        }
        let mut points = points;
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut xs = Vec::with_capacity(points.len());
        let mut ys = Vec::with_capacity(points.len());
        for (x, y) in points {
            match xs.last() {
                Some(&px) if px == x => {
                    let py = *ys.last().unwrap();
                    if py != y {
                        return Err(Error::FunctionConsistency { x, y1: py, y2: y });
                    }
                }
                _ => {
                    xs.push(x);
                    ys.push(y);
                }
            }
        }
        Ok(PointCloudFunction { xs, ys })
    }

    pub fn from_columns(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        Self::new(xs.into_iter().zip(ys).collect())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// `(first x, last x)` of the canonical ordering.
    pub fn domain(&self) -> Option<(f64, f64)> {
        Some((*self.xs.first()?, *self.xs.last()?))
    }

    pub fn min_y(&self) -> Option<f64> {
        self.ys.iter().copied().reduce(f64::min)
    }

    pub fn max_y(&self) -> Option<f64> {
        self.ys.iter().copied().reduce(f64::max)
    }

    /// Linear interpolation between the enclosing samples; `None` outside
    /// the domain.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let (a, b) = self.domain()?;
        if x < a || x > b {
            return None;
        }
        if self.len() == 1 {
            return Some(self.ys[0]);
        }
        let i = self.xs.partition_point(|&v| v < x).clamp(1, self.len() - 1);
        let t = (x - self.xs[i - 1]) / (self.xs[i] - self.xs[i - 1]);
        Some(self.ys[i - 1] + t * (self.ys[i] - self.ys[i - 1]))
    }
}

/// One persistence interval `[birth, death)` with the critical vertex
/// indices that produced it; gradients of entropy-based losses are routed
/// through these indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceBar {
    pub birth: f64,
    pub death: f64,
    /// Vertex index of the local minimum where the component was born.
    pub birth_index: usize,
    /// Vertex index of the merging local maximum, or of the global maximum
    /// for the truncated essential bar.
    pub death_index: usize,
    pub essential: bool,
}

impl PersistenceBar {
    pub fn length(&self) -> f64 {
        self.death - self.birth
    }
}

/// A multiset of persistence bars, sorted by birth (longest first among
/// equal births).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Barcode {
    pub bars: Vec<PersistenceBar>,
}

impl Barcode {
    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn essential(&self) -> Option<&PersistenceBar> {
        self.bars.iter().find(|b| b.essential)
    }

    pub fn total_length(&self) -> f64 {
        self.bars.iter().map(PersistenceBar::length).sum()
    }
}

/// Minimal union-find over vertex indices, tracking the birth vertex of
/// each component root.
struct MergeForest {
    parent: Vec<usize>,
    birth_vertex: Vec<usize>,
}

const INACTIVE: usize = usize::MAX;

impl MergeForest {
    fn new(len: usize) -> Self {
        MergeForest {
            parent: vec![INACTIVE; len],
            birth_vertex: vec![0; len],
        }
    }

    fn activate(&mut self, v: usize) {
        self.parent[v] = v;
        self.birth_vertex[v] = v;
    }

    fn is_active(&self, v: usize) -> bool {
        self.parent[v] != INACTIVE
    }

    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut v = v;
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }
}

/// 0-dimensional lower-star barcode of the path complex over `pcf`.
///
/// Zero-persistence pairs (birth equal to death, arising only from tied
/// values) are dropped; the essential bar is always present, even with zero
/// length for constant input.
pub fn lower_star_barcode(pcf: &PointCloudFunction) -> Result<Barcode> {
    let ys = pcf.ys();
    let m = ys.len();
    if m == 0 {
        return Err(Error::EmptyInput);
    }

    // Sweep order: increasing value, ties by vertex index.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| ys[a].total_cmp(&ys[b]).then(a.cmp(&b)));
    let mut pos = vec![0usize; m];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }

    let mut forest = MergeForest::new(m);
    let mut bars = Vec::new();
    for &v in &order {
        forest.activate(v);
        for u in [v.wrapping_sub(1), v + 1] {
            if u >= m || !forest.is_active(u) {
                continue;
            }
            let ru = forest.find(u);
            let rv = forest.find(v);
            if ru == rv {
                continue;
            }
            // Elder rule: the component with the later-born root dies here.
            let (elder, younger) = if pos[forest.birth_vertex[ru]] < pos[forest.birth_vertex[rv]] {
                (ru, rv)
            } else {
                (rv, ru)
            };
            let birth_vertex = forest.birth_vertex[younger];
            if ys[v] > ys[birth_vertex] {
                bars.push(PersistenceBar {
                    birth: ys[birth_vertex],
                    death: ys[v],
                    birth_index: birth_vertex,
                    death_index: v,
                    essential: false,
                });
            }
            forest.parent[younger] = elder;
        }
    }

    // The surviving component was born at the global minimum; truncate its
    // death to the global maximum (the last vertex in sweep order).
    bars.push(PersistenceBar {
        birth: ys[order[0]],
        death: ys[order[m - 1]],
        birth_index: order[0],
        death_index: order[m - 1],
        essential: true,
    });

    bars.sort_by(|a, b| {
        a.birth
            .total_cmp(&b.birth)
            .then(b.length().total_cmp(&a.length()))
            .then(a.birth_index.cmp(&b.birth_index))
    });
    Ok(Barcode { bars })
}

/// The `k` longest bars (ties resolved by lower birth index). The essential
/// bar is the longest, so it survives any `k >= 1`.
pub fn filter_top_k(bc: &Barcode, k: usize) -> Barcode {
    assert!(k >= 1, "k must be at least 1");
    if k >= bc.len() {
        return bc.clone();
    }
    let mut ranked: Vec<usize> = (0..bc.bars.len()).collect();
    ranked.sort_by(|&i, &j| {
        bc.bars[j]
            .length()
            .total_cmp(&bc.bars[i].length())
            .then(bc.bars[i].birth_index.cmp(&bc.bars[j].birth_index))
    });
    let keep: Vec<bool> = {
        let mut keep = vec![false; bc.bars.len()];
        for &i in ranked.iter().take(k) {
            keep[i] = true;
        }
        keep
    };
    Barcode {
        bars: bc
            .bars
            .iter()
            .zip(keep)
            .filter_map(|(bar, keep)| keep.then_some(*bar))
            .collect(),
    }
}

fn bar_lengths(bc: &Barcode) -> Result<(Vec<f64>, f64)> {
    let lengths: Vec<f64> = bc.bars.iter().map(PersistenceBar::length).collect();
    let total: f64 = lengths.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateBarcode);
    }
    Ok((lengths, total))
}

/// Persistent entropy `-sum p_i ln p_i` with `p_i = l_i / L`. Zero-length
/// bars contribute nothing (the `x ln x -> 0` limit); a barcode of total
/// length zero is rejected as degenerate.
pub fn persistent_entropy(bc: &Barcode) -> Result<f64> {
    let (lengths, total) = bar_lengths(bc)?;
    Ok(lengths
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| {
            let p = l / total;
            -p * p.ln()
        })
        .sum())
}

/// Length-weighted persistent entropy `-sum l_i ln p_i`: the entropy
/// structure of [`persistent_entropy`] weighted by raw bar length, hence
/// 1-homogeneous in the lengths and sensitive to absolute scale.
pub fn lwpe(bc: &Barcode) -> Result<f64> {
    let (lengths, total) = bar_lengths(bc)?;
    Ok(lengths
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * (l / total).ln())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(ys: &[f64]) -> PointCloudFunction {
        let points = ys.iter().enumerate().map(|(i, &y)| (i as f64, y)).collect();
        PointCloudFunction::new(points).unwrap()
    }

    fn pairs(bc: &Barcode) -> Vec<(f64, f64, bool)> {
        bc.bars.iter().map(|b| (b.birth, b.death, b.essential)).collect()
    }

    #[test]
    fn canonicalization_sorts_and_collapses() {
        let pcf = PointCloudFunction::new(vec![(2.0, 1.0), (0.0, 5.0), (1.0, 6.0), (1.0, 6.0)]).unwrap();
        assert_eq!(pcf.xs(), &[0.0, 1.0, 2.0]);
        assert_eq!(pcf.ys(), &[5.0, 6.0, 1.0]);
    }

    #[test]
    fn conflicting_ordinates_rejected() {
        let r = PointCloudFunction::new(vec![(1.0, 6.0), (1.0, 9.0)]);
        assert!(matches!(r, Err(Error::FunctionConsistency { .. })));
    }

    #[test]
    fn monotone_function_has_single_essential_bar() {
        let bc = lower_star_barcode(&cloud(&[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(pairs(&bc), vec![(0.0, 2.0, true)]);
        assert_eq!(bc.essential().unwrap().death_index, 2);
    }

    #[test]
    fn merge_sweep_hand_trace() {
        // Components born at 0 and 1 merge at 2; elder rule kills the
        // younger; the essential bar truncates at max f = 3.
        let bc = lower_star_barcode(&cloud(&[0.0, 2.0, 1.0, 3.0])).unwrap();
        assert_eq!(pairs(&bc), vec![(0.0, 3.0, true), (1.0, 2.0, false)]);
        let side = &bc.bars[1];
        assert_eq!((side.birth_index, side.death_index), (2, 1));
    }

    #[test]
    fn plateau_is_not_a_critical_point() {
        // Non-minimal plateau produces no bar (zero-persistence pair).
        let bc = lower_star_barcode(&cloud(&[1.0, 1.0, 0.0])).unwrap();
        assert_eq!(pairs(&bc), vec![(0.0, 1.0, true)]);
        // Minimal plateau births exactly one component.
        let bc = lower_star_barcode(&cloud(&[2.0, 0.0, 0.0, 2.0, 1.0])).unwrap();
        assert_eq!(pairs(&bc), vec![(0.0, 2.0, true), (1.0, 2.0, false)]);
    }

    #[test]
    fn single_point_yields_zero_length_essential() {
        let bc = lower_star_barcode(&cloud(&[4.0])).unwrap();
        assert_eq!(pairs(&bc), vec![(4.0, 4.0, true)]);
        assert!(matches!(persistent_entropy(&bc), Err(Error::DegenerateBarcode)));
        assert!(matches!(lwpe(&bc), Err(Error::DegenerateBarcode)));
    }

    #[test]
    fn empty_input_is_an_error() {
        let empty = PointCloudFunction::new(vec![]).unwrap();
        assert!(matches!(lower_star_barcode(&empty), Err(Error::EmptyInput)));
    }

    #[test]
    fn top_k_keeps_longest_bars() {
        let bc = lower_star_barcode(&cloud(&[0.0, 2.0, 1.0, 3.0])).unwrap();
        let top = filter_top_k(&bc, 1);
        assert_eq!(pairs(&top), vec![(0.0, 3.0, true)]);
        assert_eq!(filter_top_k(&bc, 10), bc);
    }

    #[test]
    fn top_k_breaks_length_ties_by_birth_index() {
        // Two bars of equal length: the one born at the lower vertex index
        // wins the tie.
        let bc = lower_star_barcode(&cloud(&[0.0, 5.0, 0.0, 5.0])).unwrap();
        assert_eq!(bc.len(), 2);
        assert!(bc.bars.iter().all(|b| b.length() == 5.0));
        let top = filter_top_k(&bc, 1);
        assert_eq!(top.len(), 1);
        assert!(top.bars[0].essential);
        assert_eq!(top.bars[0].birth_index, 0);
    }

    #[test]
    fn entropy_of_single_bar_is_zero() {
        let bc = lower_star_barcode(&cloud(&[0.0, 7.0])).unwrap();
        assert_eq!(persistent_entropy(&bc).unwrap(), 0.0);
        assert_eq!(lwpe(&bc).unwrap(), 0.0);
    }

    #[test]
    fn equal_bars_reach_maximum_entropy() {
        let bars = (0..5)
            .map(|i| PersistenceBar {
                birth: 0.0,
                death: 2.0,
                birth_index: i,
                death_index: i,
                essential: i == 0,
            })
            .collect();
        let bc = Barcode { bars };
        assert!((persistent_entropy(&bc).unwrap() - (5.0_f64).ln()).abs() < 1e-12);
        assert!((lwpe(&bc).unwrap() - 5.0 * 2.0 * (5.0_f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn frozen_two_bar_values() {
        // Bars of lengths 3 and 1: PE = -(3/4)ln(3/4) - (1/4)ln(1/4),
        // LWPE = -3 ln(3/4) - ln(1/4).
        let bc = lower_star_barcode(&cloud(&[0.0, 2.0, 1.0, 3.0])).unwrap();
        let pe = persistent_entropy(&bc).unwrap();
        let lw = lwpe(&bc).unwrap();
        let expect_pe = -(0.75_f64.ln() * 0.75 + 0.25_f64.ln() * 0.25);
        let expect_lw = -(3.0 * 0.75_f64.ln() + 0.25_f64.ln());
        assert!((pe - expect_pe).abs() < 1e-15);
        assert!((lw - expect_lw).abs() < 1e-15);
        assert!((pe - 0.5623).abs() < 1e-4);
        assert!((lw - 2.2493).abs() < 1e-4);
    }

    #[test]
    fn bar_count_equals_plateau_minima_count() {
        // Plateau-aware local-minimum count: a maximal run of equal values
        // flanked by strictly larger values (or the boundary) on both sides.
        fn minima_count(ys: &[f64]) -> usize {
            let m = ys.len();
            let mut count = 0;
            let mut i = 0;
            while i < m {
                let mut j = i;
                while j + 1 < m && ys[j + 1] == ys[i] {
                    j += 1;
                }
                let left_ok = i == 0 || ys[i - 1] > ys[i];
                let right_ok = j == m - 1 || ys[j + 1] > ys[i];
                if left_ok && right_ok {
                    count += 1;
                }
                i = j + 1;
            }
            count
        }

        let cases: Vec<Vec<f64>> = vec![
            vec![0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, 2.0, 1.0, 3.0],
            vec![3.0, 1.0, 1.0, 2.0, 0.0, 4.0, 0.0],
            vec![2.0, 2.0, 2.0],
            vec![0.0, 1.0, 0.0, 1.0, 0.0],
        ];
        for ys in cases {
            let bc = lower_star_barcode(&cloud(&ys)).unwrap();
            let minima = minima_count(&ys);
            assert_eq!(bc.len(), minima, "ys = {ys:?}");
            assert!(bc.len() <= ys.len().div_ceil(2));
            assert_eq!(bc.bars.iter().filter(|b| b.essential).count(), 1);
        }
    }

    #[test]
    fn scaling_lengths_preserves_pe_and_scales_lwpe() {
        let base = cloud(&[0.0, 2.0, 1.0, 3.0, 0.5, 2.5]);
        let bc = lower_star_barcode(&base).unwrap();
        let min = base.min_y().unwrap();
        for &c in &[0.25, 3.0, 10.0] {
            let scaled_ys: Vec<f64> = base.ys().iter().map(|y| min + c * (y - min)).collect();
            let scaled = PointCloudFunction::from_columns(base.xs().to_vec(), scaled_ys).unwrap();
            let sc = lower_star_barcode(&scaled).unwrap();
            let pe0 = persistent_entropy(&bc).unwrap();
            let pe1 = persistent_entropy(&sc).unwrap();
            assert!((pe0 - pe1).abs() < 1e-12);
            let lw0 = lwpe(&bc).unwrap();
            let lw1 = lwpe(&sc).unwrap();
            assert!((lw1 - c * lw0).abs() <= 1e-12 * (c * lw0).abs());
        }
    }
}
