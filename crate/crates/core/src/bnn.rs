//! Barycentric networks: local interpolators over simplices, their averaged
//! global composition, and exact piecewise-linear segment extraction.
//!
//! A local network over a simplex evaluates, through a fixed ReLU/step
//! composition, the barycentric interpolation of its vertex values inside
//! the simplex and exactly zero outside. The global network averages the
//! local evaluations over the simplices containing the query point, which
//! removes the multiplicity at shared faces and yields a continuous
//! piecewise-linear function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{barycentric_coords, interval_coords, BarycentricCoordinates, Interval, Simplex};

/// `max(0, t)`.
pub fn relu(t: f64) -> f64 {
    if t > 0.0 {
        t
    } else {
        0.0
    }
}

/// `1 - step(-t)`: one for `t > 0`, zero for `t <= 0` (strict at zero).
pub fn step_star(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Both activations at once.
pub fn activations(t: f64) -> (f64, f64) {
    (relu(t), step_star(t))
}

/// A local network: a simplex together with the function values at its
/// vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBnn {
    simplex: Simplex,
    values: Vec<f64>,
}

impl LocalBnn {
    pub fn new(simplex: Simplex, values: Vec<f64>) -> Result<Self> {
        if values.len() != simplex.dim() + 1 {
            return Err(Error::LengthMismatch {
                xs: simplex.dim() + 1,
                ys: values.len(),
            });
        }
        Ok(LocalBnn { simplex, values })
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluate the activation composition
    ///
    /// ```text
    /// sum_i ReLU(1 - ReLU(1 - t_i) - sum_j (step*(-t_j) + step*(t_j - 1))) * g(v_i)
    /// ```
    ///
    /// which equals `sum_i t_i g(v_i)` when every `t_i` is in `[0, 1]` and
    /// zero otherwise. The composition is evaluated literally rather than
    /// branching on the inside test, so the equivalence itself stays
    /// testable.
    pub fn eval(&self, coords: &BarycentricCoordinates) -> Result<f64> {
        if coords.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: coords.len(),
            });
        }
        Ok(self.eval_unchecked(coords))
    }

    pub(crate) fn eval_unchecked(&self, coords: &BarycentricCoordinates) -> f64 {
        let t = coords.values();
        let kill: f64 = t.iter().map(|&tj| step_star(-tj) + step_star(tj - 1.0)).sum();
        t.iter()
            .zip(&self.values)
            .map(|(&ti, &gi)| relu(1.0 - relu(1.0 - ti) - kill) * gi)
            .sum()
    }

    fn coords_at(&self, p: &[f64]) -> BarycentricCoordinates {
        if self.simplex.dim() == 1 {
            let iv = Interval::unchecked(self.simplex.vertices()[0][0], self.simplex.vertices()[1][0]);
            interval_coords(&iv, p[0])
        } else {
            // The simplex was validated as non-singular at construction, so
            // the pivots of the solve cannot vanish.
            barycentric_coords(&self.simplex, p).expect("validated simplex")
        }
    }
}

/// The base points of a one-dimensional piecewise-linear function: strictly
/// increasing abscissas together with the function values there. These are
/// the only trainable quantities of the network.
///
/// Serialized as `{"xs": [...], "ys": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBaseConfiguration", into = "RawBaseConfiguration")]
pub struct BaseConfiguration {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawBaseConfiguration {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TryFrom<RawBaseConfiguration> for BaseConfiguration {
    type Error = Error;

    fn try_from(raw: RawBaseConfiguration) -> Result<Self> {
        BaseConfiguration::new(raw.xs, raw.ys)
    }
}

impl From<BaseConfiguration> for RawBaseConfiguration {
    fn from(cfg: BaseConfiguration) -> Self {
        RawBaseConfiguration {
            xs: cfg.xs,
            ys: cfg.ys,
        }
    }
}

impl BaseConfiguration {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::TooFewBasePoints { got: xs.len() });
        }
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        for (i, v) in xs.iter().chain(ys.iter()).enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { index: i % xs.len() });
            }
        }
        for i in 1..xs.len() {
            if xs[i] <= xs[i - 1] {
                return Err(Error::BasePointsNotIncreasing { index: i });
            }
        }
        Ok(BaseConfiguration { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Domain endpoints `(A, B)`.
    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Segment index `k` with `a_k <= x <= a_{k+1}` together with the local
    /// parameter `t = (x - a_k) / (a_{k+1} - a_k)`, or `None` outside the
    /// domain. Interior base points belong to the segment on their right.
    pub fn segment_of(&self, x: f64) -> Option<(usize, f64)> {
        let (a, b) = self.domain();
        if x < a || x > b {
            return None;
        }
        let i = self.xs.partition_point(|&v| v <= x);
        let k = i.max(1).min(self.xs.len() - 1) - 1;
        let t = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        Some((k, t))
    }
}

/// One affine piece of a piecewise-linear function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CplfSegment {
    pub x0: f64,
    pub x1: f64,
    pub slope: f64,
    pub intercept: f64,
}

impl CplfSegment {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Slope/intercept form of every segment:
/// `m_k = (y_{k+1} - y_k) / (a_{k+1} - a_k)` and `c_k = y_k - m_k a_k`.
/// Adjacent segments agree at the shared abscissa up to rounding.
pub fn to_segments(cfg: &BaseConfiguration) -> Vec<CplfSegment> {
    let xs = cfg.xs();
    let ys = cfg.ys();
    (0..xs.len() - 1)
        .map(|k| {
            let slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
            CplfSegment {
                x0: xs[k],
                x1: xs[k + 1],
                slope,
                intercept: ys[k] - slope * xs[k],
            }
        })
        .collect()
}

/// The averaged composition of local networks over a simplicial complex.
///
/// Immutable after construction; evaluation is pure, so values may be
/// shared freely across threads. Updating base points means building a new
/// network.
#[derive(Debug, Clone)]
pub struct GlobalBnn {
    locals: Vec<LocalBnn>,
    /// Sorted interval endpoints when the network was built from a base
    /// configuration; enables the binary-search evaluation path.
    interval_xs: Option<Vec<f64>>,
}

impl GlobalBnn {
    /// One local network per consecutive interval of the configuration,
    /// carrying the interval's endpoint values.
    pub fn from_base_config(cfg: &BaseConfiguration) -> Self {
        let xs = cfg.xs();
        let ys = cfg.ys();
        let locals = (0..xs.len() - 1)
            .map(|k| LocalBnn {
                simplex: Simplex::interval(xs[k], xs[k + 1]),
                values: vec![ys[k], ys[k + 1]],
            })
            .collect();
        GlobalBnn {
            locals,
            interval_xs: Some(xs.to_vec()),
        }
    }

    /// A network over caller-supplied simplices in any dimension. The
    /// shared-face axiom of the complex is not verified here.
    pub fn from_locals(locals: Vec<LocalBnn>) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(GlobalBnn {
            locals,
            interval_xs: None,
        })
    }

    pub fn locals(&self) -> &[LocalBnn] {
        &self.locals
    }

    /// Evaluate at `p`: the sum of local evaluations divided by the number
    /// of simplices containing `p`, or zero when no simplex contains it.
    ///
    /// The divisor counts locals whose coordinates form an exact convex
    /// combination (every entry in `[0, 1]`), which coincides with counting
    /// nonzero locals whenever all vertex values are positive and keeps the
    /// interpolation property when values are zero or negative.
    pub fn eval(&self, p: &[f64]) -> f64 {
        match (&self.interval_xs, p.len()) {
            (Some(xs), 1) => self.eval_intervals(xs, p[0]),
            _ => self.eval_scan(p),
        }
    }

    /// 1-D convenience wrapper around [`GlobalBnn::eval`].
    pub fn eval_at(&self, x: f64) -> f64 {
        self.eval(&[x])
    }

    /// Evaluation that visits every local network; the binary-search path
    /// must agree with this bit for bit.
    pub fn eval_scan(&self, p: &[f64]) -> f64 {
        let mut sum = 0.0;
        let mut containing = 0usize;
        for local in &self.locals {
            let coords = local.coords_at(p);
            sum += local.eval_unchecked(&coords);
            if coords.is_convex_combination() {
                containing += 1;
            }
        }
        if containing == 0 {
            0.0
        } else {
            sum / containing as f64
        }
    }

    fn eval_intervals(&self, xs: &[f64], x: f64) -> f64 {
        let n = xs.len();
        if x < xs[0] || x > xs[n - 1] {
            return 0.0;
        }
        // First index with xs[i] >= x; segment i-1 contains x, and segment i
        // as well when x sits exactly on the shared base point.
        let i = xs.partition_point(|&v| v < x);
        let first = i.max(1) - 1;
        let last = if i < n - 1 && xs[i] == x { i } else { first };
        let mut sum = 0.0;
        let mut containing = 0usize;
        for k in first..=last {
            let local = &self.locals[k];
            let coords = local.coords_at(&[x]);
            sum += local.eval_unchecked(&coords);
            if coords.is_convex_combination() {
                containing += 1;
            }
        }
        if containing == 0 {
            0.0
        } else {
            sum / containing as f64
        }
    }
}
