//! CSV, summary, and SVG emission for sweep results.
//!
//! Sweep CSVs share one header:
//!
//! ```text
//! truth_v,v_det,n_raw,n,v_hat,aoa_deg,abs_err,status
//! ```
//!
//! Rows are written in grid order, so the swept variable of an angle sweep
//! is recoverable from the row index (`θ = from + index·step`; it is also in
//! the summary and plotted on the SVG x-axis). All formatting is fixed-width
//! decimal with no locale dependence: identical results produce
//! byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::DerivedParams;
use crate::error::{Error, Result};
use crate::harness::SweepResult;

/// Sweep flavor, selecting file names and axis labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Velocity,
    Angle,
}

impl SweepKind {
    fn label(self) -> &'static str {
        match self {
            SweepKind::Velocity => "velocity sweep",
            SweepKind::Angle => "angle sweep",
        }
    }

    fn x_label(self) -> &'static str {
        match self {
            SweepKind::Velocity => "truth velocity (m/s)",
            SweepKind::Angle => "angle (deg)",
        }
    }
}

/// Pinned column header for every sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "truth_v,v_det,n_raw,n,v_hat,aoa_deg,abs_err,status";

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.6}")
    }
}

/// Render the sweep CSV (header plus one line per row).
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.rows.len() + 1));
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(row.truth_v_mps),
            fmt_f64(row.v_det_mps),
            fmt_f64(row.n_raw),
            row.n,
            fmt_f64(row.v_hat_mps),
            fmt_f64(row.aoa_deg),
            fmt_f64(row.abs_err_mps),
            row.status.as_str()
        );
    }
    out
}

/// Render the human-readable summary.
pub fn sweep_summary(result: &SweepResult, kind: SweepKind) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", kind.label());
    let _ = writeln!(out, "points: {}", result.rows.len());
    let _ = writeln!(out, "evaluated: {}", result.evaluated_count);
    let _ = writeln!(out, "success: {}", result.success_count);
    let _ = writeln!(
        out,
        "failures: {}",
        result.evaluated_count - result.success_count
    );
    let _ = writeln!(out, "out_of_span: {}", result.out_of_span_count);
    let _ = writeln!(out, "max_abs_err_mps: {}", fmt_f64(result.max_abs_err_mps));
    let _ = writeln!(out, "tolerance_mps: {}", fmt_f64(result.tolerance_mps));
    if let (Some(first), Some(last)) = (result.rows.first(), result.rows.last()) {
        let _ = writeln!(
            out,
            "sweep_range: {} .. {}",
            fmt_f64(first.independent),
            fmt_f64(last.independent)
        );
    }
    out
}

// ---------------------------------------------------------------------------
// Minimal SVG charts
// ---------------------------------------------------------------------------

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 520.0;
const MARGIN: f64 = 60.0;

struct Axes {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Axes {
    fn from_points(points: &[(f64, f64)], extra_y: &[f64]) -> Self {
        let finite = points.iter().filter(|(x, y)| x.is_finite() && y.is_finite());
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for (x, y) in finite {
            x_min = x_min.min(*x);
            x_max = x_max.max(*x);
            y_min = y_min.min(*y);
            y_max = y_max.max(*y);
        }
        for &y in extra_y {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if !x_min.is_finite() {
            (x_min, x_max) = (0.0, 1.0);
        }
        if !y_min.is_finite() {
            (y_min, y_max) = (0.0, 1.0);
        }
        if x_max - x_min < 1e-12 {
            x_min -= 0.5;
            x_max += 0.5;
        }
        let pad = (y_max - y_min).max(1e-12) * 0.05;
        Self {
            x_min,
            x_max,
            y_min: y_min - pad,
            y_max: y_max + pad,
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (SVG_W - 2.0 * MARGIN)
    }

    fn sy(&self, y: f64) -> f64 {
        SVG_H - MARGIN - (y - self.y_min) / (self.y_max - self.y_min) * (SVG_H - 2.0 * MARGIN)
    }
}

/// Reference line drawn across the chart at a fixed y.
pub struct ReferenceLine {
    pub y: f64,
    pub color: &'static str,
    pub label: String,
}

fn svg_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    references: &[ReferenceLine],
    scatter: bool,
) -> String {
    let extra: Vec<f64> = references.iter().map(|r| r.y).collect();
    let axes = Axes::from_points(points, &extra);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="28" font-family="sans-serif" font-size="18" text-anchor="middle">{title}</text>"#,
        SVG_W / 2.0
    );

    // Plot frame.
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        SVG_W - 2.0 * MARGIN,
        SVG_H - 2.0 * MARGIN
    );

    // Axis ticks: five per axis.
    for i in 0..=4 {
        let fx = axes.x_min + (axes.x_max - axes.x_min) * i as f64 / 4.0;
        let fy = axes.y_min + (axes.y_max - axes.y_min) * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{:.1}</text>"#,
            axes.sx(fx),
            SVG_H - MARGIN + 20.0,
            fx
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{:.1}</text>"#,
            MARGIN - 8.0,
            axes.sy(fy) + 4.0,
            fy
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">{x_label}</text>"#,
        SVG_W / 2.0,
        SVG_H - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.2})">{y_label}</text>"#,
        SVG_H / 2.0,
        SVG_H / 2.0
    );

    for reference in references {
        let y = axes.sy(reference.y);
        let _ = writeln!(
            svg,
            r#"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-dasharray="6 4"/>"#,
            SVG_W - MARGIN,
            reference.color
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="{}" text-anchor="end">{}</text>"#,
            SVG_W - MARGIN - 4.0,
            y - 4.0,
            reference.color,
            reference.label
        );
    }

    let finite: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if scatter {
        for (x, y) in &finite {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#,
                axes.sx(*x),
                axes.sy(*y)
            );
        }
    } else if !finite.is_empty() {
        let mut path = String::new();
        for (x, y) in &finite {
            let _ = write!(path, "{:.2},{:.2} ", axes.sx(*x), axes.sy(*y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            path.trim_end()
        );
    }

    svg.push_str("</svg>\n");
    svg
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Write CSV, summary, and SVG charts for one sweep into `out_dir`.
///
/// Velocity sweeps produce `velocity_sweep.csv`, `velocity_sweep.svg`,
/// `n_estimate.svg`, and `velocity_sweep_summary.txt`; angle sweeps produce
/// `angle_sweep.csv`, `angle_sweep.svg`, and `angle_sweep_summary.txt`.
/// The recovered-velocity charts carry dashed reference lines at ±v_max and
/// (green) ±extended_v_max. Returns the paths written.
pub fn emit_outputs(
    result: &SweepResult,
    kind: SweepKind,
    derived: &DerivedParams,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    if !out_dir.is_dir() {
        return Err(Error::io(
            out_dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "output directory must exist"),
        ));
    }

    let stem = match kind {
        SweepKind::Velocity => "velocity_sweep",
        SweepKind::Angle => "angle_sweep",
    };
    let mut written = Vec::new();

    let csv_path = out_dir.join(format!("{stem}.csv"));
    write_file(&csv_path, &sweep_csv(result))?;
    written.push(csv_path);

    let summary_path = out_dir.join(format!("{stem}_summary.txt"));
    write_file(&summary_path, &sweep_summary(result, kind))?;
    written.push(summary_path);

    let v_points: Vec<(f64, f64)> = result
        .rows
        .iter()
        .map(|r| (r.independent, r.v_hat_mps))
        .collect();
    let references = vec![
        ReferenceLine {
            y: derived.v_max_mps,
            color: "darkorange",
            label: "+v_max".to_string(),
        },
        ReferenceLine {
            y: -derived.v_max_mps,
            color: "darkorange",
            label: "-v_max".to_string(),
        },
        ReferenceLine {
            y: derived.extended_v_max_mps,
            color: "green",
            label: "+extended v_max".to_string(),
        },
        ReferenceLine {
            y: -derived.extended_v_max_mps,
            color: "green",
            label: "-extended v_max".to_string(),
        },
    ];
    let chart_path = out_dir.join(format!("{stem}.svg"));
    write_file(
        &chart_path,
        &svg_chart(
            kind.label(),
            kind.x_label(),
            "recovered velocity (m/s)",
            &v_points,
            &references,
            false,
        ),
    )?;
    written.push(chart_path);

    if kind == SweepKind::Velocity {
        let n_points: Vec<(f64, f64)> = result
            .rows
            .iter()
            .map(|r| (r.independent, r.n_raw))
            .collect();
        let n_path = out_dir.join("n_estimate.svg");
        write_file(
            &n_path,
            &svg_chart(
                "rotation count estimate",
                kind.x_label(),
                "n_raw",
                &n_points,
                &[],
                true,
            ),
        )?;
        written.push(n_path);
    }

    Ok(written)
}

/// Render detections (from the `process` pipeline) as CSV.
pub fn detections_csv(
    rows: &[(
        crate::processing::Detection,
        crate::disambiguation::DisambiguationResult,
    )],
) -> String {
    let mut out = String::from(
        "range_bin,doppler_bin,range_m,magnitude,v_det,n_raw,n,v_hat,aoa_deg,phase_coherence\n",
    );
    for (det, res) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            det.range_bin,
            det.doppler_bin,
            fmt_f64(det.range_m),
            fmt_f64(det.magnitude),
            fmt_f64(res.v_det_mps),
            fmt_f64(res.n_raw),
            res.n,
            fmt_f64(res.v_hat_mps),
            fmt_f64(res.aoa_deg),
            fmt_f64(res.phase_coherence),
        );
    }
    out
}
