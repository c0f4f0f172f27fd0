//! Command-line front end.
//!
//! Subcommands:
//!   represent  exact representation demo with equidistant base points
//!   entropy    barcode and entropy descriptors of a cloud
//!   train      single-loss training run
//!   compare    multi-loss comparison from one shared initialization
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use barynet::bnn::{to_segments, BaseConfiguration, GlobalBnn};
use barynet::data;
use barynet::experiment::{run_compare, ExperimentSpec, SourceSpec};
use barynet::losses::{classical_loss, predict_cloud, LossKind};
use barynet::persistence::{filter_top_k, lower_star_barcode, lwpe, persistent_entropy, PointCloudFunction};
use barynet::plot;
use barynet::training::{train, TrainConfig};
use barynet::Error;

#[derive(Parser)]
#[command(name = "barynet", version, about = "Piecewise-linear function approximation with barycentric networks and entropy-based topological losses")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a network on equidistant base points sampled from the source
    /// and report the representation error.
    Represent(RepresentArgs),
    /// Barcode, persistent entropy and length-weighted entropy of a cloud.
    Entropy(EntropyArgs),
    /// Train base points under a single loss.
    Train(TrainArgs),
    /// Train one run per loss from a shared initialization and compare.
    Compare(CompareArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// CSV input file (use with --x-col / --y-col).
    #[arg(long, value_name = "PATH", conflicts_with = "sine")]
    csv: Option<PathBuf>,

    /// Column holding the abscissas.
    #[arg(long, default_value = "x")]
    x_col: String,

    /// Column holding the ordinates.
    #[arg(long, default_value = "y")]
    y_col: String,

    /// Synthetic sine cloud: A B N SIGMA.
    #[arg(long, num_args = 4, value_names = ["A", "B", "N", "SIGMA"], allow_negative_numbers = true)]
    sine: Option<Vec<f64>>,

    /// Seed for the sine noise (defaults to --seed where available, else 0).
    #[arg(long)]
    sine_seed: Option<u64>,
}

impl SourceArgs {
    fn to_spec(&self, default_seed: u64) -> Result<SourceSpec, String> {
        match (&self.csv, &self.sine) {
            (Some(path), None) => Ok(SourceSpec::Csv {
                path: path.clone(),
                x_col: self.x_col.clone(),
                y_col: self.y_col.clone(),
            }),
            (None, Some(v)) => {
                let n = v[2];
                if n.fract() != 0.0 || n < 2.0 {
                    return Err(format!("--sine N must be an integer >= 2, got {n}"));
                }
                Ok(SourceSpec::Sine {
                    n_points: n as usize,
                    a: v[0],
                    b: v[1],
                    noise_sigma: v[3],
                    seed: self.sine_seed.unwrap_or(default_seed),
                })
            }
            (None, None) => Err("one of --csv or --sine is required".to_string()),
            (Some(_), Some(_)) => Err("--csv and --sine are mutually exclusive".to_string()),
        }
    }
}

#[derive(Args)]
struct ProtocolArgs {
    /// Number of base points.
    #[arg(long, default_value_t = 8)]
    points: usize,

    /// Training epochs.
    #[arg(long, default_value_t = 50)]
    epochs: usize,

    /// Learning rate.
    #[arg(long, default_value_t = 0.1)]
    lr: f64,

    /// Seed for initialization (and sine noise unless --sine-seed is set).
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Minimum abscissa separation (default: 1e-3 of the domain span).
    #[arg(long)]
    min_gap: Option<f64>,

    /// Keep the base abscissas fixed; train values only.
    #[arg(long)]
    freeze_x: bool,

    /// Keep the base values fixed; train abscissas only.
    #[arg(long)]
    freeze_y: bool,
}

impl ProtocolArgs {
    fn to_config(&self, loss: LossKind) -> TrainConfig {
        TrainConfig {
            n_base_points: self.points,
            epochs: self.epochs,
            learning_rate: self.lr,
            seed: self.seed,
            loss,
            train_x: !self.freeze_x,
            train_y: !self.freeze_y,
            min_gap: self.min_gap,
            snapshots: false,
        }
    }
}

#[derive(Args)]
struct RepresentArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Number of equidistant base points.
    #[arg(long, default_value_t = 8)]
    points: usize,

    /// Output directory for model.json and fit.svg.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Also report the k longest bars.
    #[arg(long)]
    top_k: Option<usize>,

    /// Output directory for barcode.csv and barcode.svg.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[command(flatten)]
    protocol: ProtocolArgs,

    /// Loss driving the updates.
    #[arg(long, default_value = "lwpe", value_parser = parse_loss)]
    loss: LossKind,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[command(flatten)]
    protocol: ProtocolArgs,

    /// Loss to include (repeatable); default: mse rmse mae logcosh lwpe.
    #[arg(long = "loss", value_parser = parse_loss)]
    losses: Vec<LossKind>,

    /// Additionally emit the top-k filtered reference barcode.
    #[arg(long)]
    top_k: Option<usize>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

fn parse_loss(s: &str) -> Result<LossKind, String> {
    s.parse()
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        CliError::Usage(msg)
    }
}

/// 2 for bad input, 3 for numerical failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateBarcode | Error::SingularSimplex | Error::DimensionMismatch { .. } => 3,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Represent(args) => represent(args),
        Cmd::Entropy(args) => entropy(args),
        Cmd::Train(args) => train_cmd(args),
        Cmd::Compare(args) => compare(args),
    }
}

/// Linear interpolation of the cloud at `x` (cloud is sorted by x).
fn cloud_lerp(pcf: &PointCloudFunction, x: f64) -> f64 {
    let xs = pcf.xs();
    let ys = pcf.ys();
    let i = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    ys[i - 1] + t * (ys[i] - ys[i - 1])
}

fn represent(args: RepresentArgs) -> Result<(), CliError> {
    let reference = args.source.to_spec(0)?.load()?;
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    if reference.len() < 2 {
        return Err(CliError::Lib(Error::EmptyInput));
    }
    let (a, b) = reference.domain().unwrap();
    let n = args.points;
    let xs: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => a,
            i if i == n - 1 => b,
            i => a + (b - a) * i as f64 / (n - 1) as f64,
        })
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| cloud_lerp(&reference, x)).collect();
    let cfg = BaseConfiguration::new(xs, ys)?;
    let net = GlobalBnn::from_base_config(&cfg);

    let max_err = reference
        .points()
        .map(|(x, y)| (net.eval_at(x) - y).abs())
        .fold(0.0_f64, f64::max);
    let pred = predict_cloud(&cfg, &reference)?;
    let mse = classical_loss(&pred, &reference, LossKind::Mse)?;
    println!(
        "base_points={} segments={} max_abs_error={} mse={}",
        cfg.len(),
        to_segments(&cfg).len(),
        max_err,
        mse
    );

    if let Some(dir) = args.out {
        fs::create_dir_all(&dir).map_err(Error::from)?;
        data::write_model(&dir.join("model.json"), &cfg)?;
        let series = vec![
            ("reference".to_string(), reference.points().collect::<Vec<_>>()),
            ("network".to_string(), pred.points().collect::<Vec<_>>()),
        ];
        fs::write(
            dir.join("fit.svg"),
            plot::plot_series("equidistant representation", &series),
        )
        .map_err(Error::from)?;
    }
    Ok(())
}

fn entropy(args: EntropyArgs) -> Result<(), CliError> {
    let cloud = args.source.to_spec(0)?.load()?;
    let bc = lower_star_barcode(&cloud)?;
    let pe = persistent_entropy(&bc)?;
    let lw = lwpe(&bc)?;
    println!("bars={} pe={} lwpe={}", bc.len(), pe, lw);

    let filtered = match args.top_k {
        Some(k) if k >= 1 => {
            let f = filter_top_k(&bc, k);
            println!("top{k}_bars={} top{k}_pe={} top{k}_lwpe={}", f.len(), persistent_entropy(&f)?, lwpe(&f)?);
            Some((k, f))
        }
        Some(_) => return Err(CliError::Usage("--top-k must be at least 1".into())),
        None => None,
    };

    if let Some(dir) = args.out {
        fs::create_dir_all(&dir).map_err(Error::from)?;
        fs::write(dir.join("barcode.csv"), data::barcode_csv(&bc)).map_err(Error::from)?;
        fs::write(dir.join("barcode.svg"), plot::plot_barcode("barcode", &bc)).map_err(Error::from)?;
        if let Some((k, f)) = filtered {
            fs::write(dir.join(format!("barcode_top{k}.csv")), data::barcode_csv(&f)).map_err(Error::from)?;
        }
    }
    Ok(())
}

fn train_cmd(args: TrainArgs) -> Result<(), CliError> {
    let reference = args.source.to_spec(args.protocol.seed)?.load()?;
    let tc = args.protocol.to_config(args.loss);
    let (cfg, trace) = train(&reference, &tc)?;

    fs::create_dir_all(&args.out).map_err(Error::from)?;
    fs::write(args.out.join("trace.csv"), data::trace_csv(&trace)).map_err(Error::from)?;
    data::write_model(&args.out.join("model.json"), &cfg)?;
    let pred = predict_cloud(&cfg, &reference)?;
    fs::write(
        args.out.join("barcode_prediction.csv"),
        data::barcode_csv(&lower_star_barcode(&pred)?),
    )
    .map_err(Error::from)?;
    fs::write(
        args.out.join("trace.svg"),
        plot::plot_trace(&format!("training ({})", args.loss), &trace),
    )
    .map_err(Error::from)?;
    let series = vec![
        ("reference".to_string(), reference.points().collect::<Vec<_>>()),
        ("network".to_string(), pred.points().collect::<Vec<_>>()),
    ];
    fs::write(args.out.join("fit.svg"), plot::plot_series("final fit", &series)).map_err(Error::from)?;

    let last = trace.last();
    println!(
        "loss={} final_loss={} final_mse={} epochs_to_half_mse={}",
        args.loss,
        last.loss,
        last.mse,
        trace
            .epochs_to_half_initial_mse()
            .map_or("never".to_string(), |e| e.to_string()),
    );
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let losses = if args.losses.is_empty() {
        vec![
            LossKind::Mse,
            LossKind::Rmse,
            LossKind::Mae,
            LossKind::LogCosh,
            LossKind::Lwpe,
        ]
    } else {
        args.losses.clone()
    };
    let spec = ExperimentSpec {
        source: args.source.to_spec(args.protocol.seed)?,
        train: args.protocol.to_config(LossKind::Lwpe),
        losses,
        out_dir: args.out.clone(),
        top_k: args.top_k,
    };
    let summary = run_compare(&spec)?;
    for r in &summary.results {
        println!(
            "loss={} final_mse={} epochs_to_half_mse={} seconds={:.3}",
            r.loss,
            r.final_mse,
            r.epochs_to_half_initial_mse.map_or("never".to_string(), |e| e.to_string()),
            r.wall_clock_seconds
        );
    }
    println!("summary={}", args.out.join("summary.json").display());
    Ok(())
}
