//! Experiment orchestration: train one network per requested loss from a
//! shared seed and emit traces, models, barcodes, plots and a summary.
//!
//! Per-loss runs are independent and execute on separate threads; all file
//! contents are deterministic functions of the experiment spec, so repeated
//! runs produce byte-identical traces and models (the summary additionally
//! records wall-clock timings).

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::bnn::BaseConfiguration;
use crate::data;
use crate::error::{Error, Result};
use crate::losses::{self, LossKind};
use crate::persistence::{filter_top_k, lower_star_barcode, PointCloudFunction};
use crate::plot;
use crate::training::{self, TrainConfig, TrainTrace};

/// Where the reference cloud comes from.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSpec {
    Sine {
        n_points: usize,
        a: f64,
        b: f64,
        noise_sigma: f64,
        seed: u64,
    },
    Csv {
        path: PathBuf,
        x_col: String,
        y_col: String,
    },
}

impl SourceSpec {
    pub fn load(&self) -> Result<PointCloudFunction> {
        match self {
            SourceSpec::Sine {
                n_points,
                a,
                b,
                noise_sigma,
                seed,
            } => data::gen_sine(*n_points, *a, *b, *noise_sigma, *seed),
            SourceSpec::Csv { path, x_col, y_col } => data::load_csv(path, x_col, y_col),
        }
    }
}

/// A full comparison experiment: source, shared training protocol, losses
/// to compare and the output directory.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    pub source: SourceSpec,
    pub train: TrainConfig,
    pub losses: Vec<LossKind>,
    pub out_dir: PathBuf,
    /// Optional top-k diagnostic: additionally emit the filtered reference
    /// barcode.
    pub top_k: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LossSummary {
    pub loss: LossKind,
    pub final_loss: f64,
    pub final_mse: f64,
    pub final_rmse: f64,
    pub final_mae: f64,
    pub final_logcosh: f64,
    pub epochs_to_half_initial_mse: Option<usize>,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub spec: ExperimentSpec,
    pub results: Vec<LossSummary>,
}

struct Outputs {
    written: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, path: PathBuf, content: &str) -> Result<()> {
        fs::write(&path, content)?;
        self.written.push(path);
        Ok(())
    }

    fn cleanup(&self) {
        for path in &self.written {
            let _ = fs::remove_file(path);
        }
    }
}

/// Train one run per requested loss from the same initialization and write
/// all artifacts into `spec.out_dir`. Partial outputs are removed when any
/// run fails.
pub fn run_compare(spec: &ExperimentSpec) -> Result<RunSummary> {
    let mut outputs = Outputs { written: Vec::new() };
    match run_compare_inner(spec, &mut outputs) {
        Ok(summary) => Ok(summary),
        Err(e) => {
            outputs.cleanup();
            Err(e)
        }
    }
}

fn run_compare_inner(spec: &ExperimentSpec, outputs: &mut Outputs) -> Result<RunSummary> {
    if spec.losses.is_empty() {
        return Err(Error::NoLosses);
    }
    let reference = spec.source.load()?;
    fs::create_dir_all(&spec.out_dir)?;
    let out = |name: &str| spec.out_dir.join(name);

    let ref_barcode = lower_star_barcode(&reference)?;
    outputs.write(out("barcode_reference.csv"), &data::barcode_csv(&ref_barcode))?;
    outputs.write(
        out("barcode_reference.svg"),
        &plot::plot_barcode("reference barcode", &ref_barcode),
    )?;
    if let Some(k) = spec.top_k {
        let filtered = filter_top_k(&ref_barcode, k);
        outputs.write(
            out(&format!("barcode_reference_top{k}.csv")),
            &data::barcode_csv(&filtered),
        )?;
    }

    // Shared initial state (same seed for every loss).
    let initial = training::init_base_points(&reference, &spec.train)?;
    outputs.write(
        out("fit_initial.svg"),
        &fit_plot("initial base points", &reference, &initial)?,
    )?;

    // One training run per loss, in parallel.
    let runs: Vec<Result<(BaseConfiguration, TrainTrace, f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = spec
            .losses
            .iter()
            .map(|&loss| {
                let reference = &reference;
                let tc = TrainConfig {
                    loss,
                    ..spec.train.clone()
                };
                scope.spawn(move || {
                    let started = Instant::now();
                    let (cfg, trace) = training::train(reference, &tc)?;
                    Ok((cfg, trace, started.elapsed().as_secs_f64()))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("training thread panicked"))
            .collect()
    });

    let mut results = Vec::with_capacity(spec.losses.len());
    let mut traces = Vec::with_capacity(spec.losses.len());
    for (&loss, run) in spec.losses.iter().zip(runs) {
        let (cfg, trace, seconds) = run?;
        let name = loss.as_str();
        outputs.write(out(&format!("trace_{name}.csv")), &data::trace_csv(&trace))?;
        outputs.write(out(&format!("model_{name}.json")), &data::model_json(&cfg))?;
        let pred = losses::predict_cloud(&cfg, &reference)?;
        outputs.write(
            out(&format!("barcode_{name}.csv")),
            &data::barcode_csv(&lower_star_barcode(&pred)?),
        )?;
        outputs.write(
            out(&format!("fit_{name}.svg")),
            &fit_plot(&format!("final fit ({name})"), &reference, &cfg)?,
        )?;
        let last = trace.last();
        results.push(LossSummary {
            loss,
            final_loss: last.loss,
            final_mse: last.mse,
            final_rmse: last.rmse,
            final_mae: last.mae,
            final_logcosh: last.logcosh,
            epochs_to_half_initial_mse: trace.epochs_to_half_initial_mse(),
            wall_clock_seconds: seconds,
        });
        traces.push((name.to_string(), trace));
    }

    let panels: Vec<(String, &TrainTrace)> = traces.iter().map(|(n, t)| (n.clone(), t)).collect();
    outputs.write(out("learning_curves.svg"), &plot::plot_trace_grid(&panels))?;

    let summary = RunSummary {
        seed: spec.train.seed,
        spec: spec.clone(),
        results,
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    outputs.write(out("summary.json"), &json)?;
    Ok(summary)
}

/// Overlay of the reference cloud and the network of `cfg` evaluated at
/// the reference abscissas, plus the base points themselves.
fn fit_plot(title: &str, reference: &PointCloudFunction, cfg: &BaseConfiguration) -> Result<String> {
    let pred = losses::predict_cloud(cfg, reference)?;
    let base: Vec<(f64, f64)> = cfg.xs().iter().copied().zip(cfg.ys().iter().copied()).collect();
    let series = vec![
        ("reference".to_string(), reference.points().collect()),
        ("network".to_string(), pred.points().collect()),
        ("base points".to_string(), base),
    ];
    Ok(plot::plot_series(title, &series))
}
