//! Exact representation of continuous piecewise-linear functions through
//! barycentric networks, plus approximation of sampled 1-D functions by
//! gradient descent on the network's base points.
//!
//! The pieces:
//!
//! - [`geometry`]: simplices and barycentric coordinates (general dimension
//!   and the closed-form interval case).
//! - [`bnn`]: local networks over simplices, the averaged global network,
//!   base configurations and exact segment extraction.
//! - [`persistence`]: 0-dimensional lower-star persistence of sampled
//!   functions, barcodes, persistent entropy and its length-weighted
//!   variant.
//! - [`losses`]: classical pointwise losses, entropy-based topological
//!   losses and analytic gradients with respect to the base points.
//! - [`training`]: seeded initialization and projected full-batch gradient
//!   descent.
//! - [`data`], [`plot`], [`experiment`]: CSV/JSON artifacts, deterministic
//!   SVG charts and multi-loss comparison runs for the `barynet` CLI.

pub mod bnn;
pub mod data;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod losses;
pub mod persistence;
pub mod plot;
pub mod training;

pub use bnn::{BaseConfiguration, GlobalBnn, LocalBnn};
pub use error::{Error, Result};
pub use losses::{LossKind, LossReport};
pub use persistence::{Barcode, PersistenceBar, PointCloudFunction};
pub use training::{TrainConfig, TrainTrace};
