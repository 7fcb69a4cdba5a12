//! CSV and SVG output.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{HarnessError, Result};
use crate::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(HarnessError::usage("format", format!("unknown format `{other}`; expected csv or svg"))),
        }
    }
}

/// C's `%.17g`: 17 significant digits, trailing zeros dropped, exponent form
/// outside `1e-4 ≤ |x| < 1e17`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (16 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn to_csv(table: &Table) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(table.header()).expect("in-memory write");
    for rec in table.records() {
        w.write_record(rec.values().into_iter().map(format_g17)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Inverse of [`to_csv`] given how many leading columns are inputs.
pub fn parse_csv(text: &str, inputs: usize) -> Result<Table> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let bad = |e: csv::Error| HarnessError::usage("csv", e.to_string());
    let header: Vec<String> = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(bad)?;
        let row = rec
            .iter()
            .zip(&header)
            .map(|(field, col)| {
                field.parse::<f64>().map_err(|_| {
                    HarnessError::usage(col.clone(), format!("row {}: `{field}` is not a number", i + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Table::from_rows(header, inputs, &rows)
}

const PANEL_W: f64 = 640.0;
const PANEL_H: f64 = 320.0;
const MARGIN: f64 = 56.0;

/// One log-log panel per non-input column against the first input column.
/// Points with a nonpositive coordinate are left out; values are plotted by
/// magnitude so signed columns still show their envelope.
pub fn to_svg(table: &Table) -> String {
    let x_name = table.header().first().cloned().unwrap_or_default();
    let xs = table.column(&x_name).unwrap_or_default();
    let y_names: Vec<&String> = table.header().iter().skip(table.input_count()).collect();
    let height = PANEL_H * y_names.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_W}" height="{height}" font-family="monospace" font-size="11">"#
    );
    for (panel, y_name) in y_names.iter().enumerate() {
        let ys = table.column(y_name).unwrap_or_default();
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| (x, y.abs()))
            .filter(|&(x, y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
            .map(|(x, y)| (x.log10(), y.log10()))
            .collect();
        let top = PANEL_H * panel as f64;
        let _ = writeln!(s, r#"<g transform="translate(0,{top})">"#);
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="16">|{y_name}| vs {x_name} (log-log)</text>"#);
        let (x0, x1, y0, y1) = (MARGIN, PANEL_W - 16.0, PANEL_H - MARGIN + 16.0, 28.0);
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        if pts.is_empty() {
            let _ = writeln!(s, r#"<text x="{}" y="{}">no positive data</text>"#, x0 + 8.0, y1 + 20.0);
        } else {
            let span = |v: &mut dyn Iterator<Item = f64>| {
                let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
                if hi - lo < 1e-12 {
                    (lo - 0.5, hi + 0.5)
                } else {
                    (lo, hi)
                }
            };
            let (lx, hx) = span(&mut pts.iter().map(|p| p.0));
            let (ly, hy) = span(&mut pts.iter().map(|p| p.1));
            let px = |x: f64| x0 + (x - lx) / (hx - lx) * (x1 - x0);
            let py = |y: f64| y0 - (y - ly) / (hy - ly) * (y0 - y1);
            let line: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" points="{}"/>"#, line.join(" "));
            let _ = writeln!(s, r#"<text x="{x0}" y="{}">{x_name}: 1e{lx:.2} .. 1e{hx:.2}</text>"#, y0 + 18.0);
            let _ = writeln!(s, r#"<text x="{x0}" y="{}">{y_name}: 1e{ly:.2} .. 1e{hy:.2}</text>"#, y0 + 32.0);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => to_csv(table),
        Format::Svg => to_svg(table),
    }
}

pub fn emit(table: &Table, format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, render(table, format))
        .map_err(|e| HarnessError::Io { path: path.display().to_string(), message: e.to_string() })
}
