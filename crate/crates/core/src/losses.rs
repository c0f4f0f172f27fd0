//! Loss functions over (reference cloud, base configuration) pairs and
//! their analytic gradients with respect to the base points.
//!
//! Classical losses compare the predicted cloud pointwise; the topological
//! losses compare persistence descriptors of the two clouds:
//!
//! ```text
//! L_pe   = |PE_ref   - PE_pred|
//! L_lwpe = |LWPE_ref - LWPE_pred|
//! ```
//!
//! Gradients chain through the interpolation formula on each segment. For
//! the topological losses the critical-vertex pairing is held fixed within
//! one evaluation (and recomputed on the next), so each bar length is the
//! difference of two predicted values and the descriptor derivatives have
//! closed forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bnn::{BaseConfiguration, GlobalBnn};
use crate::error::{Error, Result};
use crate::persistence::{lower_star_barcode, lwpe, persistent_entropy, Barcode, PointCloudFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LossKind {
    #[serde(rename = "mse")]
    Mse,
    #[serde(rename = "rmse")]
    Rmse,
    #[serde(rename = "mae")]
    Mae,
    #[serde(rename = "logcosh")]
    LogCosh,
    #[serde(rename = "pe")]
    Pe,
    #[serde(rename = "lwpe")]
    Lwpe,
}

impl LossKind {
    pub const ALL: [LossKind; 6] = [
        LossKind::Mse,
        LossKind::Rmse,
        LossKind::Mae,
        LossKind::LogCosh,
        LossKind::Pe,
        LossKind::Lwpe,
    ];

    pub fn is_topological(self) -> bool {
        matches!(self, LossKind::Pe | LossKind::Lwpe)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LossKind::Mse => "mse",
            LossKind::Rmse => "rmse",
            LossKind::Mae => "mae",
            LossKind::LogCosh => "logcosh",
            LossKind::Pe => "pe",
            LossKind::Lwpe => "lwpe",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LossKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "mse" => Ok(LossKind::Mse),
            "rmse" => Ok(LossKind::Rmse),
            "mae" => Ok(LossKind::Mae),
            "logcosh" => Ok(LossKind::LogCosh),
            "pe" => Ok(LossKind::Pe),
            "lwpe" => Ok(LossKind::Lwpe),
            other => Err(format!(
                "unknown loss {other:?} (expected mse, rmse, mae, logcosh, pe or lwpe)"
            )),
        }
    }
}

/// Loss value together with its gradient over the base points.
#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    pub value: f64,
    pub gradient_xs: Vec<f64>,
    pub gradient_ys: Vec<f64>,
}

/// Evaluate the network of `cfg` at every reference abscissa, preserving
/// the canonical order. Every sample must lie inside the base domain.
pub fn predict_cloud(cfg: &BaseConfiguration, reference: &PointCloudFunction) -> Result<PointCloudFunction> {
    let ys = predict_values(cfg, reference)?;
    PointCloudFunction::from_columns(reference.xs().to_vec(), ys)
}

fn predict_values(cfg: &BaseConfiguration, reference: &PointCloudFunction) -> Result<Vec<f64>> {
    let (a, b) = cfg.domain();
    let net = GlobalBnn::from_base_config(cfg);
    reference
        .xs()
        .iter()
        .map(|&x| {
            if x < a || x > b {
                Err(Error::SampleOutOfDomain { x, a, b })
            } else {
                Ok(net.eval_at(x))
            }
        })
        .collect()
}

fn check_matching(pred: &PointCloudFunction, reference: &PointCloudFunction) -> Result<()> {
    if pred.len() != reference.len() {
        return Err(Error::LengthMismatch {
            xs: pred.len(),
            ys: reference.len(),
        });
    }
    for (index, (xp, xr)) in pred.xs().iter().zip(reference.xs()).enumerate() {
        if xp != xr {
            return Err(Error::CloudMismatch { index });
        }
    }
    Ok(())
}

/// Numerically stable `ln cosh r`.
fn log_cosh(r: f64) -> f64 {
    let a = r.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn classical_value(pred_ys: &[f64], ref_ys: &[f64], kind: LossKind) -> f64 {
    let m = pred_ys.len() as f64;
    let residuals = pred_ys.iter().zip(ref_ys).map(|(p, r)| p - r);
    match kind {
        LossKind::Mse => residuals.map(|r| r * r).sum::<f64>() / m,
        LossKind::Rmse => (classical_value(pred_ys, ref_ys, LossKind::Mse)).sqrt(),
        LossKind::Mae => residuals.map(f64::abs).sum::<f64>() / m,
        LossKind::LogCosh => residuals.map(log_cosh).sum::<f64>() / m,
        LossKind::Pe | LossKind::Lwpe => unreachable!("topological kind in classical_value"),
    }
}

/// Pointwise loss between matching clouds. Rejects topological kinds.
pub fn classical_loss(pred: &PointCloudFunction, reference: &PointCloudFunction, kind: LossKind) -> Result<f64> {
    if kind.is_topological() {
        return Err(Error::LossKindMismatch {
            kind: kind.as_str(),
            expected: "a classical (pointwise) loss",
        });
    }
    check_matching(pred, reference)?;
    if pred.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(classical_value(pred.ys(), reference.ys(), kind))
}

pub(crate) fn descriptor(bc: &Barcode, kind: LossKind) -> Result<f64> {
    match kind {
        LossKind::Pe => persistent_entropy(bc),
        LossKind::Lwpe => lwpe(bc),
        _ => Err(Error::LossKindMismatch {
            kind: kind.as_str(),
            expected: "a topological loss",
        }),
    }
}

/// Absolute difference of the persistence descriptor of the two clouds.
/// Rejects classical kinds.
pub fn topo_loss(pred: &PointCloudFunction, reference: &PointCloudFunction, kind: LossKind) -> Result<f64> {
    if !kind.is_topological() {
        return Err(Error::LossKindMismatch {
            kind: kind.as_str(),
            expected: "a topological loss",
        });
    }
    let d_ref = descriptor(&lower_star_barcode(reference)?, kind)?;
    let d_pred = descriptor(&lower_star_barcode(pred)?, kind)?;
    Ok((d_ref - d_pred).abs())
}

/// Loss and analytic gradient of `kind` at `cfg` against `reference`.
pub fn loss_gradient(cfg: &BaseConfiguration, reference: &PointCloudFunction, kind: LossKind) -> Result<LossReport> {
    loss_gradient_with_ref(cfg, reference, kind, None)
}

/// Same as [`loss_gradient`], reusing a reference descriptor computed
/// once per training run for the topological kinds (the value is ignored
/// for classical kinds).
pub fn loss_gradient_with_ref(
    cfg: &BaseConfiguration,
    reference: &PointCloudFunction,
    kind: LossKind,
    ref_descriptor: Option<f64>,
) -> Result<LossReport> {
    if reference.is_empty() {
        return Err(Error::EmptyInput);
    }
    let pred_ys = predict_values(cfg, reference)?;
    let m = reference.len();

    // Per-sample derivative of the loss with respect to the prediction.
    let mut coeff = vec![0.0; m];
    let value = match kind {
        LossKind::Mse => {
            for (c, (p, r)) in coeff.iter_mut().zip(pred_ys.iter().zip(reference.ys())) {
                *c = 2.0 * (p - r) / m as f64;
            }
            classical_value(&pred_ys, reference.ys(), LossKind::Mse)
        }
        LossKind::Rmse => {
            let value = classical_value(&pred_ys, reference.ys(), LossKind::Rmse);
            if value > 0.0 {
                for (c, (p, r)) in coeff.iter_mut().zip(pred_ys.iter().zip(reference.ys())) {
                    *c = (p - r) / (m as f64 * value);
                }
            }
            value
        }
        LossKind::Mae => {
            for (c, (p, r)) in coeff.iter_mut().zip(pred_ys.iter().zip(reference.ys())) {
                *c = sign(p - r) / m as f64;
            }
            classical_value(&pred_ys, reference.ys(), LossKind::Mae)
        }
        LossKind::LogCosh => {
            for (c, (p, r)) in coeff.iter_mut().zip(pred_ys.iter().zip(reference.ys())) {
                *c = (p - r).tanh() / m as f64;
            }
            classical_value(&pred_ys, reference.ys(), LossKind::LogCosh)
        }
        LossKind::Pe | LossKind::Lwpe => {
            let d_ref = match ref_descriptor {
                Some(d) => d,
                None => descriptor(&lower_star_barcode(reference)?, kind)?,
            };
            let pred_cloud = PointCloudFunction::from_columns(reference.xs().to_vec(), pred_ys.clone())?;
            let barcode = lower_star_barcode(&pred_cloud)?;
            let d_pred = descriptor(&barcode, kind)?;
            let s = sign(d_ref - d_pred);
            if s != 0.0 {
                let total = barcode.total_length();
                for bar in &barcode.bars {
                    let p = bar.length() / total;
                    // d(descriptor)/d(length_j)
                    let w = match kind {
                        LossKind::Pe => -(p.ln() + d_pred) / total,
                        LossKind::Lwpe => -p.ln(),
                        _ => unreachable!(),
                    };
                    // d(loss)/d(pred) = -s * w * (delta_death - delta_birth)
                    coeff[bar.death_index] -= s * w;
                    coeff[bar.birth_index] += s * w;
                }
            }
            (d_ref - d_pred).abs()
        }
    };

    // Chain through the segment interpolation
    //   pred(x) = (1 - t) y_k + t y_{k+1},  t = (x - a_k) / (a_{k+1} - a_k).
    let n = cfg.len();
    let xs = cfg.xs();
    let ys = cfg.ys();
    let mut gradient_xs = vec![0.0; n];
    let mut gradient_ys = vec![0.0; n];
    for (i, &c) in coeff.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let x = reference.xs()[i];
        let (k, t) = cfg.segment_of(x).expect("sample inside domain");
        let span = xs[k + 1] - xs[k];
        let rise = ys[k + 1] - ys[k];
        gradient_ys[k] += c * (1.0 - t);
        gradient_ys[k + 1] += c * t;
        gradient_xs[k] += c * rise * (x - xs[k + 1]) / (span * span);
        gradient_xs[k + 1] -= c * rise * (x - xs[k]) / (span * span);
    }

    Ok(LossReport {
        value,
        gradient_xs,
        gradient_ys,
    })
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(xs: &[f64], ys: &[f64]) -> BaseConfiguration {
        BaseConfiguration::new(xs.to_vec(), ys.to_vec()).unwrap()
    }

    fn cloud(points: &[(f64, f64)]) -> PointCloudFunction {
        PointCloudFunction::new(points.to_vec()).unwrap()
    }

    #[test]
    fn prediction_interpolates_reference_abscissas() {
        let c = cfg(&[0.0, 1.0], &[0.0, 1.0]);
        let reference = cloud(&[(0.0, 9.0), (0.5, 9.0), (1.0, 9.0)]);
        let pred = predict_cloud(&c, &reference).unwrap();
        assert_eq!(pred.ys(), &[0.0, 0.5, 1.0]);

        let tent = cfg(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]);
        let reference = cloud(&[(0.5, 0.0), (1.5, 0.0)]);
        assert_eq!(predict_cloud(&tent, &reference).unwrap().ys(), &[0.5, 0.5]);

        let constant = cfg(&[0.0, 1.0], &[3.0, 3.0]);
        let reference = cloud(&[(0.25, 0.0), (0.75, 0.0)]);
        assert!(predict_cloud(&constant, &reference).unwrap().ys().iter().all(|&y| y == 3.0));
    }

    #[test]
    fn out_of_domain_sample_is_rejected() {
        let c = cfg(&[0.0, 1.0], &[0.0, 1.0]);
        let reference = cloud(&[(0.5, 0.0), (1.5, 0.0)]);
        assert!(matches!(
            predict_cloud(&c, &reference),
            Err(Error::SampleOutOfDomain { .. })
        ));
    }

    #[test]
    fn classical_losses_on_unit_residuals() {
        let reference = cloud(&[(0.0, 0.0), (1.0, 0.0)]);
        let pred = cloud(&[(0.0, 1.0), (1.0, -1.0)]);
        assert_eq!(classical_loss(&pred, &reference, LossKind::Mse).unwrap(), 1.0);
        assert_eq!(classical_loss(&pred, &reference, LossKind::Rmse).unwrap(), 1.0);
        assert_eq!(classical_loss(&pred, &reference, LossKind::Mae).unwrap(), 1.0);
        let lc = classical_loss(&pred, &reference, LossKind::LogCosh).unwrap();
        assert!((lc - 1.0_f64.cosh().ln()).abs() < 1e-15);
        assert!((lc - 0.4338).abs() < 1e-4);
    }

    #[test]
    fn identical_clouds_have_zero_loss_for_all_kinds() {
        let reference = cloud(&[(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0)]);
        for kind in [LossKind::Mse, LossKind::Rmse, LossKind::Mae, LossKind::LogCosh] {
            assert_eq!(classical_loss(&reference, &reference, kind).unwrap(), 0.0);
        }
        for kind in [LossKind::Pe, LossKind::Lwpe] {
            assert_eq!(topo_loss(&reference, &reference, kind).unwrap(), 0.0);
        }
    }

    #[test]
    fn kind_mixups_are_rejected() {
        let reference = cloud(&[(0.0, 0.0), (1.0, 2.0)]);
        assert!(classical_loss(&reference, &reference, LossKind::Lwpe).is_err());
        assert!(topo_loss(&reference, &reference, LossKind::Mse).is_err());
    }

    #[test]
    fn topo_loss_against_single_bar_prediction() {
        // Reference bars of lengths {3, 1}; prediction monotone (one bar).
        let reference = cloud(&[(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0)]);
        let pred = cloud(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        let pe = topo_loss(&pred, &reference, LossKind::Pe).unwrap();
        let lw = topo_loss(&pred, &reference, LossKind::Lwpe).unwrap();
        assert!((pe - 0.5623).abs() < 1e-4);
        assert!((lw - 2.2493).abs() < 1e-4);
    }

    #[test]
    fn topo_loss_ignores_sample_order_and_duplicates() {
        let reference = cloud(&[(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0)]);
        let shuffled = cloud(&[(3.0, 3.0), (1.0, 2.0), (0.0, 0.0), (2.0, 1.0), (1.0, 2.0)]);
        let pred = cloud(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        for kind in [LossKind::Pe, LossKind::Lwpe] {
            assert_eq!(
                topo_loss(&pred, &reference, kind).unwrap(),
                topo_loss(&pred, &shuffled, kind).unwrap()
            );
        }
    }

    #[test]
    fn exact_fit_has_zero_mse_gradient() {
        let c = cfg(&[0.0, 1.0, 2.0], &[1.0, -1.0, 0.5]);
        let reference = predict_cloud(&c, &cloud(&[(0.0, 0.0), (0.5, 0.0), (1.2, 0.0), (2.0, 0.0)])).unwrap();
        let report = loss_gradient(&c, &reference, LossKind::Mse).unwrap();
        assert_eq!(report.value, 0.0);
        assert!(report.gradient_ys.iter().all(|&g| g == 0.0));
        assert!(report.gradient_xs.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn lwpe_length_derivative_closed_form() {
        // Bar lengths {3, 1}: d(LWPE)/d(l_1) = -ln(3/4).
        let reference = cloud(&[(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0)]);
        let bc = lower_star_barcode(&reference).unwrap();
        let total = bc.total_length();
        let lengths: Vec<f64> = bc.bars.iter().map(|b| b.length()).collect();
        assert_eq!(total, 4.0);
        let w = -(lengths[0] / total).ln();
        assert!((w - 0.2877).abs() < 1e-4);
    }

    #[test]
    fn scale_sensitivity_splits_the_descriptors() {
        // Scaling the reference about its minimum changes L_lwpe against a
        // fixed prediction but leaves the reference PE term unchanged.
        let reference = cloud(&[(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0)]);
        let min = reference.min_y().unwrap();
        let scaled = PointCloudFunction::from_columns(
            reference.xs().to_vec(),
            reference.ys().iter().map(|y| min + 2.5 * (y - min)).collect(),
        )
        .unwrap();
        let pred = cloud(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);

        let pe_a = topo_loss(&pred, &reference, LossKind::Pe).unwrap();
        let pe_b = topo_loss(&pred, &scaled, LossKind::Pe).unwrap();
        assert!((pe_a - pe_b).abs() < 1e-12);

        let lw_a = topo_loss(&pred, &reference, LossKind::Lwpe).unwrap();
        let lw_b = topo_loss(&pred, &scaled, LossKind::Lwpe).unwrap();
        assert!((lw_a - lw_b).abs() > 1e-3);
    }

    #[test]
    fn classical_loss_is_order_invariant() {
        let a = cloud(&[(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)]);
        let b = cloud(&[(2.0, 0.5), (0.0, 1.5), (1.0, 1.0)]);
        let forward = classical_loss(&a, &b, LossKind::Mse).unwrap();
        let again = classical_loss(&a, &b, LossKind::Mse).unwrap();
        assert_eq!(forward, again);
    }
}
