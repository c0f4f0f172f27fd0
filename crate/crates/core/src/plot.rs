//! Minimal deterministic SVG charts: line plots for traces and clouds,
//! horizontal strips for barcodes. Identical input produces byte-identical
//! output; nothing here depends on locale, time or randomness.

use crate::persistence::{Barcode, PointCloudFunction};
use crate::training::TrainTrace;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

const PANEL_W: f64 = 640.0;
const PANEL_H: f64 = 400.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 40.0;

#[derive(Clone, Copy)]
struct Bounds {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Bounds {
    fn of(series: &[(String, Vec<(f64, f64)>)]) -> Bounds {
        let mut b = Bounds {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for (_, pts) in series {
            for &(x, y) in pts {
                b.x0 = b.x0.min(x);
                b.x1 = b.x1.max(x);
                b.y0 = b.y0.min(y);
                b.y1 = b.y1.max(y);
            }
        }
        if !b.x0.is_finite() {
            b = Bounds {
                x0: 0.0,
                x1: 1.0,
                y0: 0.0,
                y1: 1.0,
            };
        }
        if b.x0 == b.x1 {
            b.x0 -= 0.5;
            b.x1 += 0.5;
        }
        if b.y0 == b.y1 {
            b.y0 -= 0.5;
            b.y1 += 0.5;
        }
        b
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (PANEL_W - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        PANEL_H - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (PANEL_H - MARGIN_T - MARGIN_B)
    }
}

fn svg_open(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    )
}

/// Axis frame, four ticks per axis, series polylines and a legend; emitted
/// as a `<g>` so panels can be composed into grids.
fn panel(title: &str, series: &[(String, Vec<(f64, f64)>)], ox: f64, oy: f64) -> String {
    let b = Bounds::of(series);
    let mut s = format!("<g transform=\"translate({ox},{oy})\">\n");
    s.push_str(&format!(
        "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-weight=\"bold\">{}</text>\n",
        PANEL_W / 2.0,
        title
    ));
    // frame
    s.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444444\"/>\n",
        MARGIN_L,
        MARGIN_T,
        PANEL_W - MARGIN_L - MARGIN_R,
        PANEL_H - MARGIN_T - MARGIN_B
    ));
    // ticks
    for i in 0..=4 {
        let fx = b.x0 + (b.x1 - b.x0) * i as f64 / 4.0;
        let px = b.px(fx);
        s.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{}\" x2=\"{px}\" y2=\"{}\" stroke=\"#444444\"/>\n",
            PANEL_H - MARGIN_B,
            PANEL_H - MARGIN_B + 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            PANEL_H - MARGIN_B + 18.0,
            tick_label(fx)
        ));
        let fy = b.y0 + (b.y1 - b.y0) * i as f64 / 4.0;
        let py = b.py(fy);
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{}\" y2=\"{py}\" stroke=\"#444444\"/>\n",
            MARGIN_L - 5.0,
            MARGIN_L
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 8.0,
            py + 4.0,
            tick_label(fy)
        ));
    }
    // series
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", b.px(x), b.py(y))).collect();
            s.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                coords.join(" ")
            ));
        }
        let ly = MARGIN_T + 14.0 + 14.0 * i as f64;
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"3\"/>\n",
            PANEL_W - MARGIN_R - 110.0,
            PANEL_W - MARGIN_R - 90.0
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\">{}</text>\n",
            PANEL_W - MARGIN_R - 84.0,
            ly + 4.0,
            label
        ));
    }
    s.push_str("</g>\n");
    s
}

fn tick_label(v: f64) -> String {
    let r = (v * 1e4).round() / 1e4;
    // avoid "-0"
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

/// Line chart of named series.
pub fn plot_series(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut s = svg_open(PANEL_W, PANEL_H);
    s.push_str(&panel(title, series, 0.0, 0.0));
    s.push_str("</svg>\n");
    s
}

/// One polyline per metric (loss, mse, rmse, mae, logcosh) against epoch.
pub fn plot_trace(title: &str, trace: &TrainTrace) -> String {
    plot_series(title, &trace_series(trace))
}

fn trace_series(trace: &TrainTrace) -> Vec<(String, Vec<(f64, f64)>)> {
    let col = |f: fn(&crate::training::TraceRecord) -> f64| {
        trace
            .records
            .iter()
            .map(|r| (r.epoch as f64, f(r)))
            .collect::<Vec<_>>()
    };
    vec![
        ("loss".to_string(), col(|r| r.loss)),
        ("mse".to_string(), col(|r| r.mse)),
        ("rmse".to_string(), col(|r| r.rmse)),
        ("mae".to_string(), col(|r| r.mae)),
        ("logcosh".to_string(), col(|r| r.logcosh)),
    ]
}

/// Clouds drawn as polylines over the canonical ordering.
pub fn plot_clouds(title: &str, clouds: &[(String, &PointCloudFunction)]) -> String {
    let series: Vec<(String, Vec<(f64, f64)>)> = clouds
        .iter()
        .map(|(label, pcf)| (label.clone(), pcf.points().collect()))
        .collect();
    plot_series(title, &series)
}

/// Horizontal bar strip: one `<rect class="bar">` per persistence bar,
/// stacked in barcode order, the essential bar highlighted.
pub fn plot_barcode(title: &str, bc: &Barcode) -> String {
    let n = bc.len().max(1);
    let row_h = 18.0_f64;
    let height = MARGIN_T + MARGIN_B + row_h * n as f64;
    let (lo, hi) = bc
        .bars
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), bar| {
            (lo.min(bar.birth), hi.max(bar.death))
        });
    let (lo, hi) = if lo.is_finite() && hi > lo { (lo, hi) } else { (0.0, 1.0) };
    let px = |v: f64| MARGIN_L + (v - lo) / (hi - lo) * (PANEL_W - MARGIN_L - MARGIN_R);

    let mut s = svg_open(PANEL_W, height);
    s.push_str(&format!(
        "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-weight=\"bold\">{}</text>\n",
        PANEL_W / 2.0,
        title
    ));
    for (i, bar) in bc.bars.iter().enumerate() {
        let y = MARGIN_T + row_h * i as f64 + 4.0;
        let x0 = px(bar.birth);
        let w = (px(bar.death) - x0).max(1.0);
        let color = if bar.essential { PALETTE[1] } else { PALETTE[0] };
        s.push_str(&format!(
            "<rect class=\"bar\" x=\"{x0}\" y=\"{y}\" width=\"{w}\" height=\"10\" fill=\"{color}\"/>\n"
        ));
    }
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let x = px(v);
        s.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            height - 12.0,
            tick_label(v)
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Grid of trace panels, two per row, in the given order.
pub fn plot_trace_grid(panels: &[(String, &TrainTrace)]) -> String {
    let cols = 2usize;
    let rows = panels.len().div_ceil(cols);
    let mut s = svg_open(PANEL_W * cols as f64, PANEL_H * rows.max(1) as f64);
    for (i, (title, trace)) in panels.iter().enumerate() {
        let ox = (i % cols) as f64 * PANEL_W;
        let oy = (i / cols) as f64 * PANEL_H;
        s.push_str(&panel(title, &trace_series(trace), ox, oy));
    }
    s.push_str("</svg>\n");
    s
}
