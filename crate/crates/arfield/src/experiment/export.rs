//! Serialization of distortion curves: flat CSV (byte-stable under reruns),
//! pretty JSON, and standalone SVG charts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{CurvePoint, DistortionCurve};
use crate::error::{Error, Result};

/// Column order of the flat CSV export.
pub const CSV_HEADER: &str =
    "rho,n,lambda,renewal_kind,noise_variance,trials,mean_distortion,stderr,mean_M,failed_trials";

/// One flat CSV row. Sweep-level metadata is repeated on every row so the
/// file stands alone; `lambda` is empty for unbounded renewal kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub rho: f64,
    pub n: u64,
    pub lambda: Option<f64>,
    pub renewal_kind: String,
    pub noise_variance: f64,
    pub trials: usize,
    pub mean_distortion: f64,
    pub stderr: f64,
    #[serde(rename = "mean_M")]
    pub mean_m: f64,
    pub failed_trials: usize,
}

impl CsvRow {
    fn from_point(curve: &DistortionCurve, p: &CurvePoint) -> Self {
        CsvRow {
            rho: p.rho,
            n: p.n,
            lambda: curve.lambda,
            renewal_kind: curve.renewal_kind.clone(),
            noise_variance: curve.noise_variance,
            trials: curve.trials,
            mean_distortion: p.mean_distortion,
            stderr: p.stderr,
            mean_m: p.mean_m,
            failed_trials: p.failed_trials,
        }
    }
}

/// Renders the curve as flat CSV. The header row is always present, even
/// for a curve with no points; float fields use the shortest representation
/// that parses back to the identical bits.
pub fn export_csv(curve: &DistortionCurve) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))?;
    for p in &curve.points {
        w.serialize(CsvRow::from_point(curve, p))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is always utf-8"))
}

/// Parses a CSV produced by [`export_csv`] back into rows.
pub fn import_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut rows = Vec::new();
    for record in csv::Reader::from_reader(text.as_bytes()).deserialize() {
        rows.push(record?);
    }
    Ok(rows)
}

/// Renders the curve — points, slopes, and run metadata — as pretty
/// JSON.
pub fn export_json(curve: &DistortionCurve) -> Result<String> {
    Ok(serde_json::to_string_pretty(curve)?)
}

const SERIES_COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

const SVG_W: f64 = 680.0;
const SVG_H: f64 = 460.0;
const PLOT_L: f64 = 76.0;
const PLOT_R: f64 = 652.0;
const PLOT_T: f64 = 52.0;
const PLOT_B: f64 = 396.0;

fn svg_open(out: &mut String, title: &str, subtitle: &str) {
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\" font-family=\"sans-serif\">\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"#ffffff\"/>\n\
         <text x=\"{PLOT_L}\" y=\"22\" font-size=\"15\" fill=\"#222222\">{title}</text>\n\
         <text x=\"{PLOT_L}\" y=\"40\" font-size=\"11\" fill=\"#666666\">{subtitle}</text>\n"
    );
}

fn svg_axes(out: &mut String, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        "<rect x=\"{PLOT_L}\" y=\"{PLOT_T}\" width=\"{}\" height=\"{}\" \
         fill=\"none\" stroke=\"#444444\"/>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#222222\" text-anchor=\"middle\">{x_label}</text>\n\
         <text x=\"18\" y=\"{}\" font-size=\"12\" fill=\"#222222\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {})\">{y_label}</text>\n",
        PLOT_R - PLOT_L,
        PLOT_B - PLOT_T,
        (PLOT_L + PLOT_R) / 2.0,
        SVG_H - 14.0,
        (PLOT_T + PLOT_B) / 2.0,
        (PLOT_T + PLOT_B) / 2.0,
    );
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    /// Builds the data-to-pixel frame, padding degenerate spans so a single
    /// point still lands mid-plot.
    fn new(mut x0: f64, mut x1: f64, mut y0: f64, mut y1: f64) -> Frame {
        if x0 == x1 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y0 == y1 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let (px, py) = ((x1 - x0) * 0.05, (y1 - y0) * 0.05);
        Frame {
            x0: x0 - px,
            x1: x1 + px,
            y0: y0 - py,
            y1: y1 + py,
        }
    }

    fn px(&self, x: f64) -> f64 {
        PLOT_L + (x - self.x0) / (self.x1 - self.x0) * (PLOT_R - PLOT_L)
    }

    fn py(&self, y: f64) -> f64 {
        PLOT_B - (y - self.y0) / (self.y1 - self.y0) * (PLOT_B - PLOT_T)
    }
}

fn svg_polyline(out: &mut String, pts: &[(f64, f64)], color: &str, dashed: bool, width: f64) {
    let mut d = String::new();
    for (x, y) in pts {
        let _ = write!(d, "{x:.1},{y:.1} ");
    }
    let dash = if dashed { " stroke-dasharray=\"6 3\"" } else { "" };
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\"{dash}/>",
        d.trim_end()
    );
}

/// Renders the sweep as a standalone log-log chart: one colored series per
/// rho with markers at each (n, mean distortion) point and the fitted slope
/// quoted in the legend.
pub fn distortion_svg(curve: &DistortionCurve) -> String {
    let mut out = String::new();
    let subtitle = format!(
        "{} renewal, noise variance {}, {} trials per point, field {}",
        curve.renewal_kind, curve.noise_variance, curve.trials, curve.field_digest
    );
    svg_open(&mut out, "Mean distortion vs sampling density", &subtitle);

    // Group plottable points by rho, preserving the sweep's rho order.
    let mut series: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for p in &curve.points {
        if !(p.mean_distortion.is_finite() && p.mean_distortion > 0.0) {
            continue;
        }
        let pt = ((p.n as f64).log10(), p.mean_distortion.log10());
        match series.iter_mut().find(|(rho, _)| *rho == p.rho) {
            Some((_, pts)) => pts.push(pt),
            None => series.push((p.rho, vec![pt])),
        }
    }
    if series.is_empty() {
        let _ = write!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"13\" fill=\"#666666\" \
             text-anchor=\"middle\">no plottable points</text>\n</svg>\n",
            SVG_W / 2.0,
            SVG_H / 2.0
        );
        return out;
    }

    let all = series.iter().flat_map(|(_, pts)| pts.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let frame = Frame::new(x0, x1, y0, y1);

    // Horizontal gridlines at decade boundaries.
    let (e0, e1) = (frame.y0.ceil() as i64, frame.y1.floor() as i64);
    let step = 1 + (e1 - e0) / 8;
    let mut e = e0;
    while e <= e1 {
        let y = frame.py(e as f64);
        let _ = write!(
            out,
            "<line x1=\"{PLOT_L}\" y1=\"{y:.1}\" x2=\"{PLOT_R}\" y2=\"{y:.1}\" stroke=\"#dddddd\"/>\n\
             <text x=\"{}\" y=\"{:.1}\" font-size=\"11\" fill=\"#444444\" text-anchor=\"end\">1e{e}</text>\n",
            PLOT_L - 6.0,
            y + 4.0
        );
        e += step;
    }

    // Vertical gridlines at the observed densities.
    let mut ns: Vec<u64> = curve.points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let thin = 1 + (ns.len() - 1) / 8;
    for n in ns.iter().step_by(thin) {
        let x = frame.px((*n as f64).log10());
        let _ = write!(
            out,
            "<line x1=\"{x:.1}\" y1=\"{PLOT_T}\" x2=\"{x:.1}\" y2=\"{PLOT_B}\" stroke=\"#dddddd\"/>\n\
             <text x=\"{x:.1}\" y=\"{}\" font-size=\"11\" fill=\"#444444\" text-anchor=\"middle\">{n}</text>\n",
            PLOT_B + 16.0
        );
    }

    svg_axes(&mut out, "sampling density n (log scale)", "mean distortion (log scale)");

    for (idx, (rho, pts)) in series.iter().enumerate() {
        let color = SERIES_COLORS[idx % SERIES_COLORS.len()];
        let pixels: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (frame.px(x), frame.py(y))).collect();
        svg_polyline(&mut out, &pixels, color, false, 1.5);
        for (x, y) in &pixels {
            let _ = writeln!(
                out,
                "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"{color}\"/>"
            );
        }
        let slope_text = curve
            .slopes
            .iter()
            .find(|s| s.rho == *rho)
            .and_then(|s| s.slope)
            .map(|s| format!("slope {s:.3}"))
            .unwrap_or_else(|| "slope n/a".into());
        let ly = PLOT_T + 14.0 + 18.0 * idx as f64;
        let _ = write!(
            out,
            "<rect x=\"{}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n\
             <text x=\"{}\" y=\"{:.1}\" font-size=\"12\" fill=\"#222222\">rho={rho}, {slope_text}</text>\n",
            PLOT_R - 170.0,
            ly - 9.0,
            PLOT_R - 156.0,
            ly
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Renders a field-versus-reconstruction overlay on linear axes. The first
/// series is the reference and is drawn solid; the rest are dashed.
pub fn overlay_svg(xs: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let mut out = String::new();
    svg_open(
        &mut out,
        "Field reconstruction",
        "reference drawn solid; estimates dashed",
    );
    if xs.len() < 2 || series.is_empty() {
        let _ = write!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"13\" fill=\"#666666\" \
             text-anchor=\"middle\">no plottable points</text>\n</svg>\n",
            SVG_W / 2.0,
            SVG_H / 2.0
        );
        return out;
    }
    let (mut y0, mut y1) = (f64::MAX, f64::MIN);
    for (_, ys) in series {
        for &y in ys.iter() {
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    let x0 = xs.iter().copied().fold(f64::MAX, f64::min);
    let x1 = xs.iter().copied().fold(f64::MIN, f64::max);
    let frame = Frame::new(x0, x1, y0, y1);

    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let x = frame.x0 + t * (frame.x1 - frame.x0);
        let y = frame.y0 + t * (frame.y1 - frame.y0);
        let (gx, gy) = (frame.px(x), frame.py(y));
        let _ = write!(
            out,
            "<line x1=\"{gx:.1}\" y1=\"{PLOT_T}\" x2=\"{gx:.1}\" y2=\"{PLOT_B}\" stroke=\"#dddddd\"/>\n\
             <text x=\"{gx:.1}\" y=\"{}\" font-size=\"11\" fill=\"#444444\" text-anchor=\"middle\">{x:.2}</text>\n\
             <line x1=\"{PLOT_L}\" y1=\"{gy:.1}\" x2=\"{PLOT_R}\" y2=\"{gy:.1}\" stroke=\"#dddddd\"/>\n\
             <text x=\"{}\" y=\"{:.1}\" font-size=\"11\" fill=\"#444444\" text-anchor=\"end\">{y:.3}</text>\n",
            PLOT_B + 16.0,
            PLOT_L - 6.0,
            gy + 4.0
        );
    }
    svg_axes(&mut out, "x", "field value");

    for (idx, (label, ys)) in series.iter().enumerate() {
        let color = if idx == 0 {
            "#222222"
        } else {
            SERIES_COLORS[(idx - 1) % SERIES_COLORS.len()]
        };
        let pixels: Vec<(f64, f64)> = xs
            .iter()
            .zip(ys.iter())
            .map(|(&x, &y)| (frame.px(x), frame.py(y)))
            .collect();
        svg_polyline(&mut out, &pixels, color, idx != 0, if idx == 0 { 2.0 } else { 1.5 });
        let ly = PLOT_T + 14.0 + 18.0 * idx as f64;
        let _ = write!(
            out,
            "<rect x=\"{}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n\
             <text x=\"{}\" y=\"{:.1}\" font-size=\"12\" fill=\"#222222\">{label}</text>\n",
            PLOT_R - 170.0,
            ly - 9.0,
            PLOT_R - 156.0,
            ly
        );
    }
    out.push_str("</svg>\n");
    out
}
