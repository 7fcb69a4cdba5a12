use crate::error::{HarnessError, Result};
use crate::table::Table;

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub npoints: usize,
}

pub fn fit_slope(table: &Table, x_col: &str, y_col: &str) -> Result<FitResult> {
    let xs = table.column(x_col)?;
    let ys = table.column(y_col)?;
    for (row, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
        if !(x > 0.0 && x.is_finite()) {
            return Err(HarnessError::Domain { row: row + 1, column: x_col.into(), value: x });
        }
        if !(y > 0.0 && y.is_finite()) {
            return Err(HarnessError::Domain { row: row + 1, column: y_col.into(), value: y });
        }
    }
    fit_points(&xs, &ys)
}

/// As [`fit_slope`] on raw positive data; rows are numbered from 1.
pub fn fit_points(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    let n = xs.len().min(ys.len());
    for (row, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        for (column, value) in [("x", x), ("y", y)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(HarnessError::Domain { row: row + 1, column: column.into(), value });
            }
        }
    }
    if n < 3 {
        return Err(HarnessError::TooFewPoints(n));
    }
    let lx: Vec<f64> = xs[..n].iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys[..n].iter().map(|y| y.ln()).collect();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(HarnessError::usage("x", "all x values coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(FitResult { slope, intercept, stderr, npoints: n })
}
