//! SVG plots read back from sweep CSV files.
//!
//! Columns are named `<pair>:<quantity>[:<macrofraction>]`; every distinct
//! quantity gets its own panel with one curve per pair. Line style follows
//! the pair: solid for a single flipped qubit, dashed for negative flip
//! parity (singlet-like), dotted for positive parity (GHZ-like).

use std::path::Path;

use plotters::prelude::*;
use spinreg::register::pair_delta;
use spinreg::RegisterLabel;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    Solid,
    Dashed,
    Dotted,
}

/// Line style for a pair column name (a class name or `eps/eps'`).
pub fn line_style(pair: &str) -> LineStyle {
    match pair {
        "single" => return LineStyle::Solid,
        "singlet" => return LineStyle::Dashed,
        "ghz" => return LineStyle::Dotted,
        _ => {}
    }
    let Some((a, b)) = pair.split_once('/') else {
        return LineStyle::Solid;
    };
    let delta = match (RegisterLabel::parse(a), RegisterLabel::parse(b)) {
        (Ok(a), Ok(b)) => match pair_delta(&a, &b) {
            Ok(d) => d,
            Err(_) => return LineStyle::Solid,
        },
        _ => return LineStyle::Solid,
    };
    let flips: Vec<i8> = delta.delta().iter().copied().filter(|&d| d != 0).collect();
    if flips.len() <= 1 {
        LineStyle::Solid
    } else if flips.iter().map(|&d| i32::from(d)).product::<i32>() < 0 {
        LineStyle::Dashed
    } else {
        LineStyle::Dotted
    }
}

/// Curves of one panel.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub quantity: String,
    pub curves: Vec<(String, Vec<(f64, f64)>)>,
}

/// Read a sweep CSV and group its columns into panels.
pub fn read_panels(csv_path: &Path) -> Result<(String, Vec<Panel>)> {
    let mut rdr = csv::Reader::from_path(csv_path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let Some(abscissa) = header.first().cloned() else {
        return Err(CliError::MalformedCsv("missing header".into()));
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::MalformedCsv(format!("row {}: {e}", i + 1)))?;
        rows.push(row);
    }
    let mut panels: Vec<Panel> = Vec::new();
    for (col, name) in header.iter().enumerate().skip(1) {
        let (pair, quantity) = name.split_once(':').unwrap_or(("", name.as_str()));
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[col])).collect();
        match panels.iter_mut().find(|p| p.quantity == quantity) {
            Some(p) => p.curves.push((pair.to_string(), points)),
            None => panels.push(Panel {
                quantity: quantity.to_string(),
                curves: vec![(pair.to_string(), points)],
            }),
        }
    }
    Ok((abscissa, panels))
}

/// Render the CSV at `csv_path` to a self-contained SVG at `svg_path`.
pub fn emit_plot(csv_path: &Path, svg_path: &Path) -> Result<()> {
    let (abscissa, panels) = read_panels(csv_path)?;
    let plot_err = |e: &dyn std::fmt::Display| CliError::Plot(e.to_string());
    let n = panels.len().max(1);
    let root = SVGBackend::new(svg_path, (720, 300 * n as u32)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let areas = root.split_evenly((n, 1));
    for (panel, area) in panels.iter().zip(areas.iter()) {
        let (xr, yr) = ranges(panel);
        let mut chart = ChartBuilder::on(area)
            .caption(&panel.quantity, ("sans-serif", 16))
            .margin(10)
            .x_label_area_size(30)
            .y_label_area_size(60)
            .build_cartesian_2d(xr, yr)
            .map_err(|e| plot_err(&e))?;
        chart
            .configure_mesh()
            .x_desc(abscissa.as_str())
            .draw()
            .map_err(|e| plot_err(&e))?;
        for (i, (pair, points)) in panel.curves.iter().enumerate() {
            let color = Palette99::pick(i).to_rgba();
            let style = color.stroke_width(2);
            let pts = points.clone();
            let anno = match line_style(pair) {
                LineStyle::Solid => chart.draw_series(LineSeries::new(pts, style)),
                LineStyle::Dashed => chart.draw_series(DashedLineSeries::new(pts, 8, 5, style)),
                LineStyle::Dotted => {
                    chart.draw_series(DottedLineSeries::new(pts, 0, 5, move |c| Circle::new(c, 1, color.filled())))
                }
            }
            .map_err(|e| plot_err(&e))?;
            anno.label(pair.as_str())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
        }
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .background_style(WHITE.mix(0.8))
            .draw()
            .map_err(|e| plot_err(&e))?;
    }
    root.present().map_err(|e| plot_err(&e))?;
    Ok(())
}

fn ranges(panel: &Panel) -> (std::ops::Range<f64>, std::ops::Range<f64>) {
    let pts = panel.curves.iter().flat_map(|c| c.1.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return (0.0..1.0, 0.0..1.0);
    }
    let pad = |lo: f64, hi: f64| {
        let span = hi - lo;
        let p = if span > 0.0 { 0.05 * span } else { 0.5 * lo.abs().max(1.0) };
        (lo - p)..(hi + p)
    };
    let xr = if x1 > x0 { x0..x1 } else { pad(x0, x1) };
    (xr, pad(y0, y1))
}
