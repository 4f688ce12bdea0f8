//! Minimal self-contained SVG plots.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::harness::io::{read_front_csv, write_text};
use crate::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

/// Lines with circle markers; `reference` is drawn as a square and kept in range.
pub fn line_plot(series: &[Series], x_label: &str, y_label: &str, reference: Option<(f64, f64)>) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter().copied()).chain(reference);
    let (x0, x1) = span(all().map(|p| p.0));
    let (y0, y1) = span(all().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" data-x-range="{x0} {x1}" data-y-range="{y0} {y1}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(svg, r#"<path class="axes" d="M{left} {top} V{bottom} H{right}" stroke="black" fill="none"/>"#);
    for k in 0..=4 {
        let t = f64::from(k) / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{xv:.3}</text>"#, sx(xv), bottom + 16.0);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{yv:.3}</text>"#, left - 6.0, sy(yv) + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 15.0, escape(x_label));
    let _ = writeln!(svg, r#"<text x="15" y="{:.1}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {:.1})">{}</text>"#, HEIGHT / 2.0, HEIGHT / 2.0, escape(y_label));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" stroke="{color}" fill="none"/>"#, path.join(" "));
        for &(x, y) in &s.points {
            let _ = writeln!(svg, r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = top + 16.0 * i as f64;
        let _ = writeln!(svg, r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/>"#, right - 150.0, ly - 9.0);
        let _ = writeln!(svg, r#"<text class="legend" x="{:.1}" y="{ly:.1}" font-size="12">{}</text>"#, right - 135.0, escape(&s.label));
    }
    if let Some((x, y)) = reference {
        let _ = writeln!(svg, r#"<rect class="reference" x="{:.2}" y="{:.2}" width="8" height="8" fill="black"/>"#, sx(x) - 4.0, sy(y) - 4.0);
    }
    svg.push_str("</svg>\n");
    svg
}

/// Plot one or more front CSVs as loss1 / loss2 curves; legend labels come from the file paths.
pub fn emit_svg_scatter(fronts: &[PathBuf], reference: [f64; 2], out: &Path) -> Result<()> {
    if fronts.is_empty() {
        return Err(Error::invalid("no front CSVs to plot"));
    }
    let series = fronts
        .iter()
        .map(|p| {
            let front = read_front_csv(p, reference)?;
            let label = match (p.parent().and_then(|d| d.file_name()), p.file_stem()) {
                (Some(dir), Some(stem)) => format!("{}/{}", dir.to_string_lossy(), stem.to_string_lossy()),
                _ => p.display().to_string(),
            };
            Ok(Series { label, points: front.points.iter().map(|q| (q.losses[0], q.losses[1])).collect() })
        })
        .collect::<Result<Vec<_>>>()?;
    write_text(out, &line_plot(&series, "loss 1", "loss 2", Some((reference[0], reference[1]))))
}

/// Grey-scale heat map of a square matrix, darkest at the maximum.
pub fn heatmap(m: &[Vec<f64>], title: &str) -> String {
    let n = m.len().max(1);
    let cell = (WIDTH - 2.0 * MARGIN) / n as f64;
    let (lo, hi) = m.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let range = if hi > lo { hi - lo } else { 1.0 };
    let mut svg = String::new();
    let side = WIDTH;
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{:.1}" y="30" font-size="14" text-anchor="middle">{} (min {lo:.4}, max {hi:.4})</text>"#, side / 2.0, escape(title));
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let shade = (255.0 * (1.0 - (v - lo) / range)).round() as u8;
            let _ = writeln!(
                svg,
                r#"<rect class="cell" x="{:.2}" y="{:.2}" width="{cell:.2}" height="{cell:.2}" fill="rgb({shade},{shade},{shade})"><title>{i},{j}: {v}</title></rect>"#,
                MARGIN + j as f64 * cell,
                MARGIN + i as f64 * cell
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}
