//! Deterministic CSV, JSON and SVG emission of spectra and tables.
//!
//! Floats are written with 17 significant digits so that re-parsing
//! recovers every value bit for bit. Spectrum files carry the angular
//! probe frequency next to the cyclic one for the same reason.

use super::{AppError, AppResult};
use crate::constants::TWO_PI;
use crate::detector::{ProbeComponents, Spectrum};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::{Read, Write};

/// JSON schema of the spectrum sidecar.
pub const SPECTRUM_SCHEMA: &str = include_str!("../../schema/spectrum.schema.json");

/// Leading columns of every spectrum CSV.
pub const SPECTRUM_COLUMNS: [&str; 5] = ["omega_p_hz", "omega_p_rad_s", "re_s21", "im_s21", "abs_s21"];

/// Round-trip float formatting.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column names of `spec`, including the per-term columns when present.
pub fn spectrum_columns(spec: &Spectrum) -> Vec<String> {
    let mut columns: Vec<String> = SPECTRUM_COLUMNS.iter().map(|s| s.to_string()).collect();
    if let Some(first) = spec.components.as_ref().and_then(|c| c.first()) {
        columns.push("re_cavity".into());
        columns.push("im_cavity".into());
        for j in 1..=first.qubits.len() {
            columns.push(format!("re_qubit_{j}"));
            columns.push(format!("im_qubit_{j}"));
        }
    }
    columns
}

fn csv_error(e: csv::Error) -> AppError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => AppError::Io(io.to_string()),
        other => AppError::Config(format!("malformed CSV: {other:?}")),
    }
}

/// Writes a header row and numeric rows.
pub fn write_table<W: Write>(out: W, header: &[String], rows: impl IntoIterator<Item = Vec<f64>>) -> AppResult<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header).map_err(csv_error)?;
    for row in rows {
        writer
            .write_record(row.iter().map(|&x| format_float(x)))
            .map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes `spec` as CSV.
pub fn write_spectrum_csv<W: Write>(out: W, spec: &Spectrum) -> AppResult<()> {
    spec.validate()?;
    let rows = spec.omega_p.iter().enumerate().map(|(i, &w)| {
        let s = spec.s21[i];
        let mut row = vec![w / TWO_PI, w, s.re, s.im, s.norm()];
        if let Some(c) = &spec.components {
            row.extend([c[i].cavity.re, c[i].cavity.im]);
            row.extend(c[i].qubits.iter().flat_map(|q| [q.re, q.im]));
        }
        row
    });
    write_table(out, &spectrum_columns(spec), rows)
}

/// Reads a spectrum CSV written by [`write_spectrum_csv`]. The metadata of
/// the result is `null`.
pub fn read_spectrum_csv<R: Read>(input: R) -> AppResult<Spectrum> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.len() < SPECTRUM_COLUMNS.len()
        || header.iter().zip(SPECTRUM_COLUMNS).any(|(got, want)| got != want)
    {
        return Err(AppError::Config(format!(
            "spectrum CSV must start with the columns {}",
            SPECTRUM_COLUMNS.join(",")
        )));
    }
    let extra = header.len() - SPECTRUM_COLUMNS.len();
    let n_qubits = match extra {
        0 => None,
        e if e >= 2 && e % 2 == 0 => {
            let n = (e - 2) / 2;
            let mut expected = vec!["re_cavity".to_string(), "im_cavity".to_string()];
            for j in 1..=n {
                expected.push(format!("re_qubit_{j}"));
                expected.push(format!("im_qubit_{j}"));
            }
            if header.iter().skip(SPECTRUM_COLUMNS.len()).ne(expected.iter().map(String::as_str)) {
                return Err(AppError::Config("unexpected component columns in spectrum CSV".into()));
            }
            Some(n)
        }
        _ => return Err(AppError::Config("component columns must come in re/im pairs".into())),
    };
    let mut spec = Spectrum {
        omega_p: Vec::new(),
        s21: Vec::new(),
        components: n_qubits.map(|_| Vec::new()),
        meta: Value::Null,
    };
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        if record.len() != header.len() {
            return Err(AppError::Config(format!("row {} has {} fields", row + 1, record.len())));
        }
        let values = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| AppError::Config(format!("row {}: '{field}' is not a number", row + 1)))
            })
            .collect::<AppResult<Vec<_>>>()?;
        spec.omega_p.push(values[1]);
        spec.s21.push(Complex64::new(values[2], values[3]));
        if let Some(components) = &mut spec.components {
            let pairs: Vec<Complex64> = values[5..].chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
            components.push(ProbeComponents {
                cavity: pairs[0],
                qubits: pairs[1..].to_vec(),
            });
        }
    }
    spec.validate().map_err(|e| AppError::Config(e.to_string()))?;
    Ok(spec)
}

/// JSON sidecar describing a spectrum file.
pub fn spectrum_sidecar(spec: &Spectrum, subcommand: &str, warnings: &[String]) -> Value {
    let range = match (spec.omega_p.first(), spec.omega_p.last()) {
        (Some(lo), Some(hi)) => json!([lo / TWO_PI, hi / TWO_PI]),
        _ => Value::Null,
    };
    json!({
        "format": "cqed-spectrum",
        "version": 1,
        "subcommand": subcommand,
        "columns": spectrum_columns(spec),
        "points": spec.omega_p.len(),
        "omega_p_range_hz": range,
        "parameters": spec.meta,
        "warnings": warnings,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("JSON values always serialize");
    bytes.push(b'\n');
    bytes
}

/// One curve of an SVG plot.
pub struct Channel<'a> {
    pub name: &'a str,
    pub values: Vec<f64>,
}

const SVG_WIDTH: f64 = 800.0;
const SVG_HEIGHT: f64 = 500.0;
const SVG_MARGIN: f64 = 60.0;
const SVG_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line plot with one polyline per channel over the shared abscissa `x`.
pub fn svg_plot(title: &str, x_label: &str, x: &[f64], channels: &[Channel]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let bounds = |it: &mut dyn Iterator<Item = &f64>| {
        it.filter(finite)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    };
    let (x_lo, x_hi) = bounds(&mut x.iter());
    let (y_lo, y_hi) = bounds(&mut channels.iter().flat_map(|c| c.values.iter()));
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (x_span, y_span) = (span(x_lo, x_hi), span(y_lo, y_hi));
    let px = |v: f64| SVG_MARGIN + (v - x_lo) / x_span * (SVG_WIDTH - 2.0 * SVG_MARGIN);
    let py = |v: f64| SVG_HEIGHT - SVG_MARGIN - (v - y_lo) / y_span * (SVG_HEIGHT - 2.0 * SVG_MARGIN);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        SVG_WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{SVG_MARGIN}" y="{SVG_MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        SVG_WIDTH - 2.0 * SVG_MARGIN,
        SVG_HEIGHT - 2.0 * SVG_MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{} [{:.6e}, {:.6e}]</text>"#,
        SVG_WIDTH / 2.0,
        SVG_HEIGHT - 20.0,
        escape(x_label),
        x_lo,
        x_hi
    );
    for (i, channel) in channels.iter().enumerate() {
        let color = SVG_COLORS[i % SVG_COLORS.len()];
        let points: Vec<String> = x
            .iter()
            .zip(&channel.values)
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(&a, &b)| format!("{:.2},{:.2}", px(a), py(b)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline data-channel="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            escape(channel.name),
            points.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            SVG_WIDTH - SVG_MARGIN - 120.0,
            SVG_MARGIN + 18.0 * (i + 1) as f64,
            escape(channel.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG of Re, Im and |S21| against the cyclic probe frequency.
pub fn spectrum_svg(spec: &Spectrum, title: &str) -> String {
    let x: Vec<f64> = spec.omega_p.iter().map(|w| w / TWO_PI).collect();
    let channels = [
        Channel {
            name: "Re S21",
            values: spec.s21.iter().map(|s| s.re).collect(),
        },
        Channel {
            name: "Im S21",
            values: spec.s21.iter().map(|s| s.im).collect(),
        },
        Channel {
            name: "|S21|",
            values: spec.s21.iter().map(|s| s.norm()).collect(),
        },
    ];
    svg_plot(title, "probe frequency (Hz)", &x, &channels)
}
