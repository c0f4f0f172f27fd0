//! Simplices and barycentric coordinates.
//!
//! A point `p` is located inside a `d`-simplex by solving the augmented
//! linear system
//!
//! ```text
//! [ v_0 v_1 ... v_d ]         [ p ]
//! [  1   1  ...  1  ] * t  =  [ 1 ]
//! ```
//!
//! whose solution `t` sums to one and is componentwise nonnegative exactly
//! when `p` lies in the convex hull of the vertices. For 1-simplices
//! (intervals) the closed form `t = (x - a) / (b - a)` is used instead.

use crate::error::{Error, Result};

/// Tolerance applied to the inside test: a coordinate counts as nonnegative
/// when it is `>= -INSIDE_TOL`, so points on shared faces classify as inside
/// despite floating-point noise.
pub const INSIDE_TOL: f64 = 1e-12;

/// Relative determinant threshold below which a simplex is rejected as
/// numerically singular.
const SINGULARITY_TOL: f64 = 1e-10;

/// A `d`-simplex given by `d + 1` vertices of dimension `d`.
///
/// Construction verifies affine independence: the augmented matrix above
/// must have determinant magnitude above `1e-10 * max|coord|^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: vertices.len(),
            });
        }
        let dim = vertices.len() - 1;
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::SingularSimplex);
            }
        }
        let simplex = Simplex { vertices };
        let scale = simplex
            .vertices
            .iter()
            .flatten()
            .fold(0.0_f64, |m, c| m.max(c.abs()));
        let threshold = SINGULARITY_TOL * scale.powi(dim as i32);
        if determinant(simplex.augmented_matrix()).abs() <= threshold {
            return Err(Error::SingularSimplex);
        }
        Ok(simplex)
    }

    /// 1-simplex constructor used for intervals of a base configuration,
    /// where `a < b` is the exact non-degeneracy condition.
    pub(crate) fn interval(a: f64, b: f64) -> Self {
        debug_assert!(a < b);
        Simplex {
            vertices: vec![vec![a], vec![b]],
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Rows `0..d` hold the vertex coordinates column by column, the last
    /// row is all ones.
    fn augmented_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.vertices.len();
        let dim = n - 1;
        let mut m = vec![vec![0.0; n]; n];
        for (j, v) in self.vertices.iter().enumerate() {
            for (i, &c) in v.iter().enumerate() {
                m[i][j] = c;
            }
            m[dim][j] = 1.0;
        }
        m
    }
}

/// Barycentric coordinates of a point relative to a simplex.
///
/// Entries sum to one (up to rounding); the point is inside the simplex
/// exactly when every entry is nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricCoordinates {
    values: Vec<f64>,
}

impl BarycentricCoordinates {
    pub(crate) fn new(values: Vec<f64>) -> Self {
        BarycentricCoordinates { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Inside test with the shared-face tolerance [`INSIDE_TOL`].
    pub fn is_inside(&self) -> bool {
        self.values.iter().all(|&t| t >= -INSIDE_TOL)
    }

    /// Exact convex-combination test: every entry in `[0, 1]` with strict
    /// floating-point comparisons. This matches the support of the network
    /// activation composition bit for bit.
    pub fn is_convex_combination(&self) -> bool {
        self.values.iter().all(|&t| (0.0..=1.0).contains(&t))
    }
}

/// Closed interval `[a, b]` with `a < b`; the 1-simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Interval { a, b })
    }

    pub(crate) fn unchecked(a: f64, b: f64) -> Self {
        debug_assert!(a < b);
        Interval { a, b }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn span(&self) -> f64 {
        self.b - self.a
    }
}

/// Barycentric coordinates of `p` with respect to `simplex`, by Gaussian
/// elimination with partial pivoting on the augmented system.
pub fn barycentric_coords(simplex: &Simplex, p: &[f64]) -> Result<BarycentricCoordinates> {
    let dim = simplex.dim();
    if p.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: p.len(),
        });
    }
    let mut rhs = Vec::with_capacity(dim + 1);
    rhs.extend_from_slice(p);
    rhs.push(1.0);
    solve(simplex.augmented_matrix(), rhs)
        .map(BarycentricCoordinates::new)
        .ok_or(Error::SingularSimplex)
}

/// Coordinates of `x` relative to the interval `[a, b]`: `(1 - t, t)` with
/// `t = (x - a) / (b - a)`, so the entry for the left endpoint comes first.
pub fn interval_coords(iv: &Interval, x: f64) -> BarycentricCoordinates {
    let t = (x - iv.a) / (iv.b - iv.a);
    BarycentricCoordinates::new(vec![1.0 - t, t])
}

/// Eliminate everything below the pivot in `col`; the pivot row has
/// already been swapped into place.
fn eliminate_column(m: &mut [Vec<f64>], rhs: Option<&mut Vec<f64>>, col: usize) {
    let (upper, lower) = m.split_at_mut(col + 1);
    let pivot_row = &upper[col];
    let mut factors = Vec::with_capacity(lower.len());
    for row in lower.iter_mut() {
        let f = row[col] / pivot_row[col];
        for (cell, pivot_cell) in row[col..].iter_mut().zip(&pivot_row[col..]) {
            *cell -= f * pivot_cell;
        }
        factors.push(f);
    }
    if let Some(rhs) = rhs {
        let pivot_value = rhs[col];
        for (row, f) in (col + 1..rhs.len()).zip(factors) {
            rhs[row] -= f * pivot_value;
        }
    }
}

fn pivot_row(m: &[Vec<f64>], col: usize) -> usize {
    (col..m.len())
        .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
        .unwrap()
}

/// Determinant by elimination with partial pivoting.
fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = pivot_row(&m, col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        eliminate_column(&mut m, None, col);
    }
    det
}

/// Solve `m * x = rhs`; `None` when a pivot vanishes.
fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let pivot = pivot_row(&m, col);
        if m[pivot][col] == 0.0 {
            return None;
        }
        if pivot != col {
            m.swap(pivot, col);
            rhs.swap(pivot, col);
        }
        eliminate_column(&mut m, Some(&mut rhs), col);
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for col in row + 1..n {
            acc -= m[row][col] * x[col];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}
