//! C ABI for the barynet library.
//!
//! Handles (`BaryCloud`, `BaryModel`, `BaryBarcode`) are opaque pointers
//! owned by this library: create them through the `bary_*_new` functions
//! and release them with the matching `bary_*_free`. Every fallible call
//! returns a [`BaryStatus`]; a human-readable description of the most
//! recent failure on the calling thread is available through
//! [`bary_last_error_message`].
//!
//! The generated header lives at `include/barynet.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use barynet::bnn::{BaseConfiguration, GlobalBnn};
use barynet::losses::{classical_loss, predict_cloud, topo_loss, LossKind};
use barynet::persistence::{filter_top_k, lower_star_barcode, lwpe, persistent_entropy, Barcode, PointCloudFunction};
use barynet::training::{train, TrainConfig};
use barynet::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaryStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments violate a documented precondition.
    InvalidArgument = 2,
    /// Equal abscissas carry different ordinates.
    InconsistentFunction = 3,
    /// The operation needs at least one sample.
    EmptyInput = 4,
    /// Total bar length is zero; entropy is undefined.
    DegenerateBarcode = 5,
    /// A sample lies outside the model domain.
    OutOfDomain = 6,
    /// The minimum-gap constraint cannot be satisfied.
    InfeasibleGap = 7,
    /// An index is past the end of the collection.
    IndexOutOfRange = 8,
    /// An output buffer is too small.
    BufferTooSmall = 9,
    /// A numerical operation failed (singular simplex and similar).
    NumericalFailure = 10,
    /// The callee panicked; state is unchanged.
    InternalPanic = 11,
}

/// Loss selector for training and evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaryLoss {
    Mse = 0,
    Rmse = 1,
    Mae = 2,
    LogCosh = 3,
    Pe = 4,
    Lwpe = 5,
}

impl From<BaryLoss> for LossKind {
    fn from(loss: BaryLoss) -> LossKind {
        match loss {
            BaryLoss::Mse => LossKind::Mse,
            BaryLoss::Rmse => LossKind::Rmse,
            BaryLoss::Mae => LossKind::Mae,
            BaryLoss::LogCosh => LossKind::LogCosh,
            BaryLoss::Pe => LossKind::Pe,
            BaryLoss::Lwpe => LossKind::Lwpe,
        }
    }
}

/// One persistence interval.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BaryBar {
    pub birth: f64,
    pub death: f64,
    /// Sample index of the local minimum that birthed the component.
    pub birth_index: usize,
    /// Sample index of the merging maximum (global maximum for the
    /// essential bar).
    pub death_index: usize,
    pub essential: bool,
}

/// Training protocol. `min_gap <= 0` selects the default gap of 1e-3 of
/// the domain span.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BaryTrainOptions {
    pub n_base_points: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub loss: BaryLoss,
    pub train_x: bool,
    pub train_y: bool,
    pub min_gap: f64,
}

/// An immutable sampled function (opaque).
pub struct BaryCloud {
    inner: PointCloudFunction,
}

/// A trained or hand-built base configuration with its evaluator (opaque).
pub struct BaryModel {
    cfg: BaseConfiguration,
    net: GlobalBnn,
}

/// A persistence barcode (opaque).
pub struct BaryBarcode {
    inner: Barcode,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn remember_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> BaryStatus {
    match err {
        Error::FunctionConsistency { .. } => BaryStatus::InconsistentFunction,
        Error::EmptyInput => BaryStatus::EmptyInput,
        Error::DegenerateBarcode => BaryStatus::DegenerateBarcode,
        Error::SampleOutOfDomain { .. } => BaryStatus::OutOfDomain,
        Error::InfeasibleMinGap { .. } => BaryStatus::InfeasibleGap,
        Error::SingularSimplex => BaryStatus::NumericalFailure,
        _ => BaryStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> BaryStatus {
    remember_error(&err.to_string());
    status_of(&err)
}

fn null_argument() -> BaryStatus {
    remember_error("null pointer argument");
    BaryStatus::NullArgument
}

/// Run `body`, translating panics into a status instead of unwinding
/// across the ABI boundary.
fn guarded(body: impl FnOnce() -> BaryStatus) -> BaryStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            remember_error("internal panic");
            BaryStatus::InternalPanic
        }
    }
}

unsafe fn opt_ref<'a, T>(p: *const T) -> Option<&'a T> {
    if p.is_null() {
        None
    } else {
        Some(&*p)
    }
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> BaryStatus {
    if out.is_null() {
        return null_argument();
    }
    *out = Box::into_raw(Box::new(value));
    BaryStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bary_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the most recent error message for this thread into `buf` (always
/// NUL-terminated when `cap > 0`) and return the full length including the
/// terminator. Call with `buf = NULL` to query the required capacity.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be null.
#[no_mangle]
pub unsafe extern "C" fn bary_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Build a cloud from parallel coordinate arrays. The input is sorted by
/// `x` and duplicate points collapse; equal `x` with different `y` fails.
///
/// # Safety
/// `xs` and `ys` must point to `len` readable doubles; `out` must be a
/// valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn bary_cloud_new(
    xs: *const f64,
    ys: *const f64,
    len: usize,
    out: *mut *mut BaryCloud,
) -> BaryStatus {
    if xs.is_null() || ys.is_null() {
        return null_argument();
    }
    let xs = std::slice::from_raw_parts(xs, len).to_vec();
    let ys = std::slice::from_raw_parts(ys, len).to_vec();
    guarded(move || match PointCloudFunction::from_columns(xs, ys) {
        Ok(inner) => unsafe { write_handle(out, BaryCloud { inner }) },
        Err(e) => fail(e),
    })
}

/// Equispaced samples of `sin(x)` on `[a, b]` with optional seeded
/// Gaussian noise.
///
/// # Safety
/// `out` must be a valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn bary_cloud_sine(
    n_points: usize,
    a: f64,
    b: f64,
    noise_sigma: f64,
    seed: u64,
    out: *mut *mut BaryCloud,
) -> BaryStatus {
    guarded(move || match barynet::data::gen_sine(n_points, a, b, noise_sigma, seed) {
        Ok(inner) => unsafe { write_handle(out, BaryCloud { inner }) },
        Err(e) => fail(e),
    })
}

/// Number of (canonicalized) samples; 0 for a null handle.
///
/// # Safety
/// `cloud` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn bary_cloud_len(cloud: *const BaryCloud) -> usize {
    opt_ref(cloud).map_or(0, |c| c.inner.len())
}

/// Copy the canonical samples into caller-provided arrays of capacity
/// `cap`.
///
/// # Safety
/// `xs_out` and `ys_out` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bary_cloud_get(
    cloud: *const BaryCloud,
    xs_out: *mut f64,
    ys_out: *mut f64,
    cap: usize,
) -> BaryStatus {
    let Some(cloud) = opt_ref(cloud) else {
        return null_argument();
    };
    if xs_out.is_null() || ys_out.is_null() {
        return null_argument();
    }
    let n = cloud.inner.len();
    if cap < n {
        remember_error("output capacity smaller than the cloud");
        return BaryStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(cloud.inner.xs().as_ptr(), xs_out, n);
    std::ptr::copy_nonoverlapping(cloud.inner.ys().as_ptr(), ys_out, n);
    BaryStatus::Ok
}

/// # Safety
/// `cloud` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bary_cloud_free(cloud: *mut BaryCloud) {
    if !cloud.is_null() {
        drop(Box::from_raw(cloud));
    }
}

/// Build a model from strictly increasing abscissas and their values.
///
/// # Safety
/// `xs` and `ys` must point to `len` readable doubles; `out` must be a
/// valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn bary_model_new(
    xs: *const f64,
    ys: *const f64,
    len: usize,
    out: *mut *mut BaryModel,
) -> BaryStatus {
    if xs.is_null() || ys.is_null() {
        return null_argument();
    }
    let xs = std::slice::from_raw_parts(xs, len).to_vec();
    let ys = std::slice::from_raw_parts(ys, len).to_vec();
    guarded(move || match BaseConfiguration::new(xs, ys) {
        Ok(cfg) => {
            let net = GlobalBnn::from_base_config(&cfg);
            unsafe { write_handle(out, BaryModel { cfg, net }) }
        }
        Err(e) => fail(e),
    })
}

/// Number of base points; 0 for a null handle.
///
/// # Safety
/// `model` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn bary_model_len(model: *const BaryModel) -> usize {
    opt_ref(model).map_or(0, |m| m.cfg.len())
}

/// Copy the base points into caller-provided arrays of capacity `cap`.
///
/// # Safety
/// `xs_out` and `ys_out` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bary_model_get(
    model: *const BaryModel,
    xs_out: *mut f64,
    ys_out: *mut f64,
    cap: usize,
) -> BaryStatus {
    let Some(model) = opt_ref(model) else {
        return null_argument();
    };
    if xs_out.is_null() || ys_out.is_null() {
        return null_argument();
    }
    let n = model.cfg.len();
    if cap < n {
        remember_error("output capacity smaller than the model");
        return BaryStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(model.cfg.xs().as_ptr(), xs_out, n);
    std::ptr::copy_nonoverlapping(model.cfg.ys().as_ptr(), ys_out, n);
    BaryStatus::Ok
}

/// Evaluate the network at `x`: barycentric interpolation inside the
/// domain, exactly zero outside. Returns NaN for a null handle.
///
/// # Safety
/// `model` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn bary_model_eval(model: *const BaryModel, x: f64) -> f64 {
    opt_ref(model).map_or(f64::NAN, |m| m.net.eval_at(x))
}

/// Evaluate the network at `len` points.
///
/// # Safety
/// `xs` must point to `len` readable doubles and `out` to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn bary_model_eval_many(
    model: *const BaryModel,
    xs: *const f64,
    out: *mut f64,
    len: usize,
) -> BaryStatus {
    let Some(model) = opt_ref(model) else {
        return null_argument();
    };
    if xs.is_null() || out.is_null() {
        return null_argument();
    }
    for i in 0..len {
        *out.add(i) = model.net.eval_at(*xs.add(i));
    }
    BaryStatus::Ok
}

/// # Safety
/// `model` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bary_model_free(model: *mut BaryModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// 0-dimensional lower-star barcode of the cloud.
///
/// # Safety
/// `out` must be a valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn bary_barcode_compute(cloud: *const BaryCloud, out: *mut *mut BaryBarcode) -> BaryStatus {
    let Some(cloud) = opt_ref(cloud) else {
        return null_argument();
    };
    guarded(move || match lower_star_barcode(&cloud.inner) {
        Ok(inner) => unsafe { write_handle(out, BaryBarcode { inner }) },
        Err(e) => fail(e),
    })
}

/// Number of bars; 0 for a null handle.
///
/// # Safety
/// `barcode` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn bary_barcode_len(barcode: *const BaryBarcode) -> usize {
    opt_ref(barcode).map_or(0, |b| b.inner.len())
}

/// Fetch one bar by index.
///
/// # Safety
/// `out` must point to a writable `BaryBar`.
#[no_mangle]
pub unsafe extern "C" fn bary_barcode_bar(
    barcode: *const BaryBarcode,
    index: usize,
    out: *mut BaryBar,
) -> BaryStatus {
    let Some(barcode) = opt_ref(barcode) else {
        return null_argument();
    };
    if out.is_null() {
        return null_argument();
    }
    let Some(bar) = barcode.inner.bars.get(index) else {
        remember_error("bar index out of range");
        return BaryStatus::IndexOutOfRange;
    };
    *out = BaryBar {
        birth: bar.birth,
        death: bar.death,
        birth_index: bar.birth_index,
        death_index: bar.death_index,
        essential: bar.essential,
    };
    BaryStatus::Ok
}

/// The `k` longest bars as a new barcode handle (`k >= 1`).
///
/// # Safety
/// `out` must be a valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn bary_barcode_top_k(
    barcode: *const BaryBarcode,
    k: usize,
    out: *mut *mut BaryBarcode,
) -> BaryStatus {
    let Some(barcode) = opt_ref(barcode) else {
        return null_argument();
    };
    if k == 0 {
        remember_error("k must be at least 1");
        return BaryStatus::InvalidArgument;
    }
    let inner = filter_top_k(&barcode.inner, k);
    write_handle(out, BaryBarcode { inner })
}

/// Persistent entropy of the barcode.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn bary_barcode_entropy(barcode: *const BaryBarcode, out: *mut f64) -> BaryStatus {
    let Some(barcode) = opt_ref(barcode) else {
        return null_argument();
    };
    if out.is_null() {
        return null_argument();
    }
    match persistent_entropy(&barcode.inner) {
        Ok(v) => {
            *out = v;
            BaryStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Length-weighted persistent entropy of the barcode.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn bary_barcode_lwpe(barcode: *const BaryBarcode, out: *mut f64) -> BaryStatus {
    let Some(barcode) = opt_ref(barcode) else {
        return null_argument();
    };
    if out.is_null() {
        return null_argument();
    }
    match lwpe(&barcode.inner) {
        Ok(v) => {
            *out = v;
            BaryStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `barcode` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bary_barcode_free(barcode: *mut BaryBarcode) {
    if !barcode.is_null() {
        drop(Box::from_raw(barcode));
    }
}

/// Train a model on `cloud` under `options` and return the final model.
/// Deterministic for identical inputs.
///
/// # Safety
/// `options` must point to a readable `BaryTrainOptions`; `out` must be a
/// valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn bary_train(
    cloud: *const BaryCloud,
    options: *const BaryTrainOptions,
    out: *mut *mut BaryModel,
) -> BaryStatus {
    let Some(cloud) = opt_ref(cloud) else {
        return null_argument();
    };
    let Some(options) = opt_ref(options) else {
        return null_argument();
    };
    let tc = TrainConfig {
        n_base_points: options.n_base_points,
        epochs: options.epochs,
        learning_rate: options.learning_rate,
        seed: options.seed,
        loss: options.loss.into(),
        train_x: options.train_x,
        train_y: options.train_y,
        min_gap: (options.min_gap > 0.0).then_some(options.min_gap),
        snapshots: false,
    };
    guarded(move || match train(&cloud.inner, &tc) {
        Ok((cfg, _trace)) => {
            let net = GlobalBnn::from_base_config(&cfg);
            unsafe { write_handle(out, BaryModel { cfg, net }) }
        }
        Err(e) => fail(e),
    })
}

/// Loss of the model's prediction against `cloud` (the model is evaluated
/// at every cloud abscissa first).
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn bary_loss_value(
    model: *const BaryModel,
    cloud: *const BaryCloud,
    loss: BaryLoss,
    out: *mut f64,
) -> BaryStatus {
    let Some(model) = opt_ref(model) else {
        return null_argument();
    };
    let Some(cloud) = opt_ref(cloud) else {
        return null_argument();
    };
    if out.is_null() {
        return null_argument();
    }
    let kind: LossKind = loss.into();
    guarded(move || {
        let result = predict_cloud(&model.cfg, &cloud.inner).and_then(|pred| {
            if kind.is_topological() {
                topo_loss(&pred, &cloud.inner, kind)
            } else {
                classical_loss(&pred, &cloud.inner, kind)
            }
        });
        match result {
            Ok(v) => unsafe {
                *out = v;
                BaryStatus::Ok
            },
            Err(e) => fail(e),
        }
    })
}
