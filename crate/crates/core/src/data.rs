//! Data ingestion and artifact serialization.
//!
//! CSV input: UTF-8, comma-separated, one header row, configurable x/y
//! column names. Emitted CSV and JSON use the shortest round-trip decimal
//! representation of every float, so identical inputs produce identical
//! bytes and values survive a round trip exactly.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::bnn::BaseConfiguration;
use crate::error::{Error, Result};
use crate::persistence::{Barcode, PersistenceBar, PointCloudFunction};
use crate::training::{TraceRecord, TrainTrace};

/// Split one CSV line into trimmed cells, stripping one pair of
/// surrounding double quotes per cell.
fn split_line(line: &str) -> Vec<&str> {
    line.split(',')
        .map(|cell| {
            let cell = cell.trim();
            cell.strip_prefix('"')
                .and_then(|c| c.strip_suffix('"'))
                .unwrap_or(cell)
        })
        .collect()
}

/// Load a point cloud from a CSV file, reading `x_col` and `y_col` as
/// numbers. Rows with equal x must carry equal y.
pub fn load_csv(path: &Path, x_col: &str, y_col: &str) -> Result<PointCloudFunction> {
    let content = fs::read_to_string(path)?;
    parse_csv(&content, x_col, y_col)
}

pub fn parse_csv(content: &str, x_col: &str, y_col: &str) -> Result<PointCloudFunction> {
    let mut lines = content.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    let header = split_line(header);
    let find = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| Error::CsvMissingColumn { name: name.to_string() })
    };
    let xi = find(x_col)?;
    let yi = find(y_col)?;

    let mut points = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = idx + 1; // 1-based, header is row 1
        let cells = split_line(line);
        let cell = |col: usize, name: &str| -> Result<f64> {
            let raw = cells.get(col).ok_or_else(|| Error::CsvParse {
                line: row,
                message: format!("missing field for column {name:?}"),
            })?;
            raw.parse::<f64>().map_err(|_| Error::CsvParse {
                line: row,
                message: format!("column {name:?}: cannot parse {raw:?} as a number"),
            })
        };
        points.push((cell(xi, x_col)?, cell(yi, y_col)?));
    }
    PointCloudFunction::new(points)
}

/// Equispaced samples of `sin(x)` on `[a, b]`, optionally with seeded
/// Gaussian noise; `sigma = 0` yields the clean cloud.
pub fn gen_sine(n_points: usize, a: f64, b: f64, noise_sigma: f64, seed: u64) -> Result<PointCloudFunction> {
    if n_points < 2 {
        return Err(Error::TooFewBasePoints { got: n_points });
    }
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(Error::InvalidInterval { a, b });
    }
    let xs: Vec<f64> = (0..n_points)
        .map(|i| match i {
            0 => a,
            i if i == n_points - 1 => b,
            i => a + (b - a) * i as f64 / (n_points - 1) as f64,
        })
        .collect();
    let mut ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
    if noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, noise_sigma).expect("positive sigma");
        for y in &mut ys {
            *y += normal.sample(&mut rng);
        }
    }
    PointCloudFunction::from_columns(xs, ys)
}

/// Trace CSV with header `epoch,loss,mse,rmse,mae,logcosh`.
pub fn trace_csv(trace: &TrainTrace) -> String {
    let mut out = String::from("epoch,loss,mse,rmse,mae,logcosh\n");
    for r in &trace.records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.epoch, r.loss, r.mse, r.rmse, r.mae, r.logcosh
        ));
    }
    out
}

pub fn parse_trace_csv(content: &str) -> Result<TrainTrace> {
    let mut lines = content.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    if header != "epoch,loss,mse,rmse,mae,logcosh" {
        return Err(Error::CsvParse {
            line: 1,
            message: format!("unexpected trace header {header:?}"),
        });
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = idx + 1;
        let cells = split_line(line);
        if cells.len() != 6 {
            return Err(Error::CsvParse {
                line: row,
                message: format!("expected 6 fields, got {}", cells.len()),
            });
        }
        let num = |i: usize| -> Result<f64> {
            cells[i].parse().map_err(|_| Error::CsvParse {
                line: row,
                message: format!("cannot parse {:?} as a number", cells[i]),
            })
        };
        records.push(TraceRecord {
            epoch: cells[0].parse().map_err(|_| Error::CsvParse {
                line: row,
                message: format!("cannot parse {:?} as an epoch", cells[0]),
            })?,
            loss: num(1)?,
            mse: num(2)?,
            rmse: num(3)?,
            mae: num(4)?,
            logcosh: num(5)?,
            snapshot: None,
        });
    }
    Ok(TrainTrace { records })
}

/// Barcode CSV with header `birth,death,essential`.
pub fn barcode_csv(bc: &Barcode) -> String {
    let mut out = String::from("birth,death,essential\n");
    for bar in &bc.bars {
        out.push_str(&format!("{},{},{}\n", bar.birth, bar.death, bar.essential));
    }
    out
}

pub fn parse_barcode_csv(content: &str) -> Result<Barcode> {
    let mut lines = content.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyInput)?;
    if header != "birth,death,essential" {
        return Err(Error::CsvParse {
            line: 1,
            message: format!("unexpected barcode header {header:?}"),
        });
    }
    let mut bars = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = idx + 1;
        let cells = split_line(line);
        if cells.len() != 3 {
            return Err(Error::CsvParse {
                line: row,
                message: format!("expected 3 fields, got {}", cells.len()),
            });
        }
        let parse_err = |what: &str, raw: &str| Error::CsvParse {
            line: row,
            message: format!("cannot parse {raw:?} as {what}"),
        };
        bars.push(PersistenceBar {
            birth: cells[0].parse().map_err(|_| parse_err("a number", cells[0]))?,
            death: cells[1].parse().map_err(|_| parse_err("a number", cells[1]))?,
            birth_index: 0,
            death_index: 0,
            essential: cells[2].parse().map_err(|_| parse_err("a bool", cells[2]))?,
        });
    }
    Ok(Barcode { bars })
}

/// Pretty JSON for a model file: `{"xs": [...], "ys": [...]}`.
pub fn model_json(cfg: &BaseConfiguration) -> String {
    let mut s = serde_json::to_string_pretty(cfg).expect("serializable configuration");
    s.push('\n');
    s
}

pub fn write_model(path: &Path, cfg: &BaseConfiguration) -> Result<()> {
    fs::write(path, model_json(cfg))?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<BaseConfiguration> {
    let content = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&content)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::lower_star_barcode;
    use crate::training::TrainConfig;

    #[test]
    fn csv_basic_parse() {
        let pcf = parse_csv("x,y\n0,5\n1,6\n2,7\n", "x", "y").unwrap();
        assert_eq!(pcf.len(), 3);
        assert_eq!(pcf.ys(), &[5.0, 6.0, 7.0]);
    }

    #[test]
    fn csv_duplicate_rows_collapse() {
        let pcf = parse_csv("x,y\n0,5\n1,6\n1,6\n", "x", "y").unwrap();
        assert_eq!(pcf.len(), 2);
    }

    #[test]
    fn csv_conflicting_duplicate_is_an_error() {
        let r = parse_csv("x,y\n1,6\n1,9\n", "x", "y");
        assert!(matches!(r, Err(Error::FunctionConsistency { .. })));
    }

    #[test]
    fn csv_errors_carry_row_numbers() {
        match parse_csv("x,y\n0,5\n1,oops\n", "x", "y") {
            Err(Error::CsvParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_csv("a,b\n0,5\n", "x", "y"),
            Err(Error::CsvMissingColumn { .. })
        ));
    }

    #[test]
    fn csv_quoted_headers_and_columns() {
        let pcf = parse_csv("\"day\",\"close\"\n1, 170.5\n2, 171.25\n", "day", "close").unwrap();
        assert_eq!(pcf.xs(), &[1.0, 2.0]);
        assert_eq!(pcf.ys(), &[170.5, 171.25]);
    }

    #[test]
    fn sine_cloud_shape() {
        let pcf = gen_sine(250, -10.0, 10.0, 0.0, 0).unwrap();
        assert_eq!(pcf.len(), 250);
        assert_eq!(pcf.domain(), Some((-10.0, 10.0)));
        let bc = lower_star_barcode(&pcf).unwrap();
        assert_eq!(bc.len(), 4);
    }

    #[test]
    fn noisy_sine_is_seed_deterministic() {
        let a = gen_sine(250, -10.0, 10.0, 0.1, 42).unwrap();
        let b = gen_sine(250, -10.0, 10.0, 0.1, 42).unwrap();
        let c = gen_sine(250, -10.0, 10.0, 0.1, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn trace_csv_round_trips() {
        let reference = gen_sine(60, -10.0, 10.0, 0.0, 0).unwrap();
        let tc = TrainConfig {
            epochs: 3,
            ..TrainConfig::default()
        };
        let (_, trace) = crate::training::train(&reference, &tc).unwrap();
        let csv = trace_csv(&trace);
        let back = parse_trace_csv(&csv).unwrap();
        assert_eq!(back.records.len(), trace.records.len());
        for (a, b) in back.records.iter().zip(&trace.records) {
            assert_eq!(a.epoch, b.epoch);
            assert_eq!(a.loss, b.loss);
            assert_eq!(a.mse, b.mse);
            assert_eq!(a.rmse, b.rmse);
            assert_eq!(a.mae, b.mae);
            assert_eq!(a.logcosh, b.logcosh);
        }
    }

    #[test]
    fn barcode_csv_round_trips() {
        let pcf = gen_sine(100, -10.0, 10.0, 0.1, 5).unwrap();
        let bc = lower_star_barcode(&pcf).unwrap();
        let csv = barcode_csv(&bc);
        let back = parse_barcode_csv(&csv).unwrap();
        assert_eq!(back.len(), bc.len());
        for (a, b) in back.bars.iter().zip(&bc.bars) {
            assert_eq!(a.birth, b.birth);
            assert_eq!(a.death, b.death);
            assert_eq!(a.essential, b.essential);
        }
    }

    #[test]
    fn model_json_round_trips() {
        let cfg = BaseConfiguration::new(vec![0.0, 0.1234567890123457, 2.0], vec![1.0, -0.5, 0.25]).unwrap();
        let json = model_json(&cfg);
        let back: BaseConfiguration = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }
}
