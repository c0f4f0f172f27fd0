//! Seeded initialization of base points and full-batch projected gradient
//! descent over them.
//!
//! A training run is strictly sequential; independent runs (other losses or
//! seeds) are free to execute concurrently. Identical inputs produce a
//! bit-identical trace.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bnn::BaseConfiguration;
use crate::error::{Error, Result};
use crate::losses::{self, LossKind};
use crate::persistence::{lower_star_barcode, PointCloudFunction};

/// Training protocol: point budget, epochs, learning rate, seed, driving
/// loss and the projection gap. `min_gap` defaults to `1e-3 * (B - A)`.
#[derive(Debug, Clone, Serialize)]
pub struct TrainConfig {
    pub n_base_points: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub loss: LossKind,
    pub train_x: bool,
    pub train_y: bool,
    pub min_gap: Option<f64>,
    /// Record a copy of the base configuration at every epoch.
    pub snapshots: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n_base_points: 8,
            epochs: 50,
            learning_rate: 0.1,
            seed: 0,
            loss: LossKind::Lwpe,
            train_x: true,
            train_y: true,
            min_gap: None,
            snapshots: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_base_points < 2 {
            return Err(Error::TooFewBasePoints {
                got: self.n_base_points,
            });
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidTrainParameter("learning_rate must be positive"));
        }
        if !self.train_x && !self.train_y {
            return Err(Error::NothingTrainable);
        }
        if let Some(g) = self.min_gap {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::InvalidTrainParameter("min_gap must be positive"));
            }
        }
        Ok(())
    }

    fn resolved_gap(&self, a: f64, b: f64) -> f64 {
        self.min_gap.unwrap_or(1e-3 * (b - a))
    }
}

/// Metrics of one epoch. All five metric values are recorded no matter
/// which loss drives the updates, so learning curves can report MSE for a
/// topologically trained run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub epoch: usize,
    pub loss: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    pub logcosh: f64,
    pub snapshot: Option<BaseConfiguration>,
}

/// Per-epoch records, including epoch 0 for the freshly initialized state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainTrace {
    pub records: Vec<TraceRecord>,
}

impl TrainTrace {
    pub fn initial(&self) -> &TraceRecord {
        &self.records[0]
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("trace has at least the initial record")
    }

    /// First epoch whose MSE is at most half the initial MSE.
    pub fn epochs_to_half_initial_mse(&self) -> Option<usize> {
        let target = self.records[0].mse / 2.0;
        self.records.iter().find(|r| r.mse <= target).map(|r| r.epoch)
    }
}

/// Endpoints pinned to `[A, B]` plus `n - 2` uniform interior draws, sorted
/// and spaced to honor the gap; values drawn uniformly over the reference
/// value range. Deterministic for a given seed.
pub fn init_base_points(reference: &PointCloudFunction, tc: &TrainConfig) -> Result<BaseConfiguration> {
    tc.validate()?;
    if reference.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (a, b) = reference.domain().unwrap();
    if a >= b {
        return Err(Error::InvalidInterval { a, b });
    }
    let n = tc.n_base_points;
    let gap = tc.resolved_gap(a, b);
    if gap * (n - 1) as f64 >= b - a {
        return Err(Error::InfeasibleMinGap {
            min_gap: gap,
            points: n,
            span: b - a,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(tc.seed);
    let mut xs = Vec::with_capacity(n);
    xs.push(a);
    for _ in 0..n - 2 {
        xs.push(rng.random_range(a..b));
    }
    xs.push(b);
    xs[1..n - 1].sort_by(f64::total_cmp);
    space_out(&mut xs, gap);

    let lo = reference.min_y().unwrap();
    let hi = reference.max_y().unwrap();
    let ys = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    BaseConfiguration::new(xs, ys)
}

/// Clamp interior abscissas so consecutive points stay at least `gap`
/// apart while the pinned endpoints are respected: one pass raising lower
/// bounds left to right, one pass capping against the right neighbor.
fn space_out(xs: &mut [f64], gap: f64) {
    let n = xs.len();
    for i in 1..n - 1 {
        if xs[i] < xs[i - 1] + gap {
            xs[i] = xs[i - 1] + gap;
        }
    }
    for i in (1..n - 1).rev() {
        if xs[i] > xs[i + 1] - gap {
            xs[i] = xs[i + 1] - gap;
        }
    }
}

/// One projected full-batch gradient step:
/// `project(cfg - lr * masked gradient)` where the projection pins the
/// endpoint abscissas, restores sorted order (points travel with their
/// values) and enforces the minimum gap. Values are not constrained.
pub fn sgd_step(cfg: &BaseConfiguration, reference: &PointCloudFunction, tc: &TrainConfig) -> Result<BaseConfiguration> {
    sgd_step_cached(cfg, reference, tc, None)
}

fn sgd_step_cached(
    cfg: &BaseConfiguration,
    reference: &PointCloudFunction,
    tc: &TrainConfig,
    ref_descriptor: Option<f64>,
) -> Result<BaseConfiguration> {
    let report = losses::loss_gradient_with_ref(cfg, reference, tc.loss, ref_descriptor)?;
    let n = cfg.len();
    let (a, b) = cfg.domain();
    let lr = tc.learning_rate;

    let mut xs = cfg.xs().to_vec();
    let mut ys = cfg.ys().to_vec();
    if tc.train_x {
        for (x, g) in xs.iter_mut().zip(&report.gradient_xs) {
            *x -= lr * g;
        }
    }
    if tc.train_y {
        for (y, g) in ys.iter_mut().zip(&report.gradient_ys) {
            *y -= lr * g;
        }
    }

    xs[0] = a;
    xs[n - 1] = b;
    let mut interior: Vec<(f64, f64)> = xs[1..n - 1].iter().copied().zip(ys[1..n - 1].iter().copied()).collect();
    interior.sort_by(|p, q| p.0.total_cmp(&q.0));
    for (i, (x, y)) in interior.into_iter().enumerate() {
        xs[i + 1] = x;
        ys[i + 1] = y;
    }
    space_out(&mut xs, tc.resolved_gap(a, b));

    BaseConfiguration::new(xs, ys)
}

/// Initialize, then run `epochs` full-batch steps, tracing every metric at
/// epoch 0 and after each step. Returns the final configuration with the
/// trace.
pub fn train(reference: &PointCloudFunction, tc: &TrainConfig) -> Result<(BaseConfiguration, TrainTrace)> {
    let mut cfg = init_base_points(reference, tc)?;
    // Reference descriptor of the full barcode, computed once per run; this
    // is where a constant cloud fails for the topological losses.
    let ref_descriptor = if tc.loss.is_topological() {
        Some(losses::descriptor(&lower_star_barcode(reference)?, tc.loss)?)
    } else {
        None
    };

    let mut trace = TrainTrace::default();
    trace.records.push(observe(0, &cfg, reference, tc, ref_descriptor)?);
    for epoch in 1..=tc.epochs {
        cfg = sgd_step_cached(&cfg, reference, tc, ref_descriptor)?;
        trace.records.push(observe(epoch, &cfg, reference, tc, ref_descriptor)?);
    }
    Ok((cfg, trace))
}

fn observe(
    epoch: usize,
    cfg: &BaseConfiguration,
    reference: &PointCloudFunction,
    tc: &TrainConfig,
    ref_descriptor: Option<f64>,
) -> Result<TraceRecord> {
    let pred = losses::predict_cloud(cfg, reference)?;
    let mse = losses::classical_loss(&pred, reference, LossKind::Mse)?;
    let rmse = losses::classical_loss(&pred, reference, LossKind::Rmse)?;
    let mae = losses::classical_loss(&pred, reference, LossKind::Mae)?;
    let logcosh = losses::classical_loss(&pred, reference, LossKind::LogCosh)?;
    let loss = match tc.loss {
        LossKind::Mse => mse,
        LossKind::Rmse => rmse,
        LossKind::Mae => mae,
        LossKind::LogCosh => logcosh,
        kind => {
            let d_pred = losses::descriptor(&lower_star_barcode(&pred)?, kind)?;
            (ref_descriptor.expect("cached for topological losses") - d_pred).abs()
        }
    };
    Ok(TraceRecord {
        epoch,
        loss,
        mse,
        rmse,
        mae,
        logcosh,
        snapshot: tc.snapshots.then(|| cfg.clone()),
    })
}
