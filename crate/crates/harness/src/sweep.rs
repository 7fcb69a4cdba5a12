//! The five registered experiments and the parallel grid runner.

use num_complex::Complex64;
use rayon::prelude::*;
use sympwave::model_integral::{ModelIntegral, Symbol};
use sympwave::plancherel::CFunction;
use sympwave::profiles::Profile;
use sympwave::root_data::RootDatum;
use sympwave::stationary_phase::PhaseProblem;
use sympwave::wave_kernel::RankOneGeometry;

use crate::config::{progression, Spec};
use crate::error::{HarnessError, Result};
use crate::table::{SweepRecord, Table, Value};

pub const THREADS_VAR: &str = "SYMPWAVE_THREADS";

pub const CFUN_KEYS: [&str; 6] = ["preset", "lambda-min", "lambda-max", "steps", "scale", "direction"];
pub const STPHASE_KEYS: [&str; 5] = ["demo", "amplitude", "x-list", "N", "M"];
pub const MODEL_KEYS: [&str; 9] = ["preset", "symbol", "dim", "weights", "axis", "r-list", "h-list", "min-hr", "M"];
pub const KERNEL_KEYS: [&str; 5] = ["preset", "psi", "t-list", "R", "R-factor"];
pub const DISPERSIVE_KEYS: [&str; 4] = ["preset", "psi", "p", "t-list"];

pub fn keys_of(experiment: &str) -> &'static [&'static str] {
    match experiment {
        "cfun" => &CFUN_KEYS,
        "stphase" => &STPHASE_KEYS,
        "model" => &MODEL_KEYS,
        "kernel" => &KERNEL_KEYS,
        "dispersive" => &DISPERSIVE_KEYS,
        _ => &[],
    }
}

/// Worker count: available parallelism, capped by `SYMPWAVE_THREADS`.
pub fn worker_count() -> Result<usize> {
    let available = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(available),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n.min(available)),
            _ => Err(HarnessError::usage(THREADS_VAR, format!("`{v}` is not a positive integer"))),
        },
    }
}

pub fn run_sweep(spec: &Spec) -> Result<Table> {
    run_sweep_with(spec, worker_count()?)
}

/// Runs the experiment on a pool of `workers` threads. Rows come back in
/// grid order whatever the worker count.
pub fn run_sweep_with(spec: &Spec, workers: usize) -> Result<Table> {
    spec.check_keys(keys_of(spec.experiment()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::usage(THREADS_VAR, e.to_string()))?;
    pool.install(|| match spec.experiment() {
        "cfun" => cfun(spec),
        "stphase" => stphase(spec),
        "model" => model(spec),
        "kernel" => kernel(spec),
        "dispersive" => dispersive(spec),
        other => Err(HarnessError::usage("experiment", format!("unknown experiment `{other}`"))),
    })
}

/// Ordered parallel map; the first failing grid point (in grid order) wins.
fn par_rows<P: Sync>(
    points: &[P],
    row: impl Fn(&P) -> Result<SweepRecord> + Sync + Send,
) -> Result<Vec<SweepRecord>> {
    let results: Vec<Result<SweepRecord>> = points.par_iter().map(row).collect();
    results.into_iter().collect()
}

fn names(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

fn preset_datum(spec: &Spec, default: &str) -> Result<RootDatum<f64>> {
    let name = spec.str_or("preset", default);
    RootDatum::preset(name).map_err(|e| HarnessError::usage("preset", e.to_string()))
}

fn profile(spec: &Spec) -> Result<Profile<f64>> {
    spec.str_or("psi", "exp:1")
        .parse()
        .map_err(|e: sympwave::Error| HarnessError::usage("psi", e.to_string()))
}

fn unit(key: &str, v: Vec<f64>) -> Result<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(HarnessError::usage(key, "direction must be a nonzero vector"));
    }
    Ok(v.into_iter().map(|x| x / norm).collect())
}

/// Density `|c(λ)|^{-2}` along a ray `λ = s·direction`.
fn cfun(spec: &Spec) -> Result<Table> {
    let cf = CFunction::new(preset_datum(spec, "h3")?)?;
    let l = cf.datum().rank();
    let default_dir: Vec<f64> = (0..l).map(|j| 0.5f64.powi(j as i32)).collect();
    let dir = unit("direction", spec.list_or("direction", &default_dir)?)?;
    if dir.len() != l {
        return Err(HarnessError::usage("direction", format!("need {l} components, got {}", dir.len())));
    }
    let steps = spec.usize_or("steps", 50)?;
    let hi = spec.f64_or("lambda-max", 10.0)?;
    let scale = spec.str_or("scale", "lin");
    let lo = spec.f64_or("lambda-min", if scale == "geom" { 1e-3 } else { hi / steps.max(1) as f64 })?;
    let grid = progression("scale", scale, lo, hi, steps)?;

    let mut header: Vec<String> = (1..=l).map(|j| format!("lambda_{j}")).collect();
    header.push("lambda_abs".into());
    header.push("density".into());
    let rows = par_rows(&grid, |&s| {
        let lambda: Vec<f64> = dir.iter().map(|d| d * s).collect();
        let mut inputs: Vec<(String, f64)> =
            lambda.iter().enumerate().map(|(j, &x)| (format!("lambda_{}", j + 1), x)).collect();
        inputs.push(("lambda_abs".into(), s.abs()));
        Ok(SweepRecord::new(inputs, vec![("density".into(), Value::Real(cf.density(&lambda)))]))
    })?;
    Table::new(header, l + 1, rows)
}

/// `∫_0^{π/2} g(t) e^{−ix cos t} dt`: expansion total against direct quadrature.
fn stphase(spec: &Spec) -> Result<Table> {
    let demo = spec.str_or("demo", "cos");
    if demo != "cos" {
        return Err(HarnessError::usage("demo", format!("unknown demo `{demo}`; expected cos")));
    }
    let g: fn(f64) -> Complex64 = match spec.str_or("amplitude", "one") {
        "one" => |_| Complex64::new(1.0, 0.0),
        "sin" => |t: f64| Complex64::new(t.sin(), 0.0),
        "poly" => |t: f64| Complex64::new(1.0 + t * t, 0.0),
        other => {
            return Err(HarnessError::usage("amplitude", format!("unknown amplitude `{other}`; expected one, sin or poly")))
        }
    };
    let n = spec.usize_or("N", 2)?;
    let m = spec.usize_or("M", 1)?;
    if n == 0 || m == 0 {
        return Err(HarnessError::usage(if n == 0 { "N" } else { "M" }, "orders start at 1"));
    }
    let xs = spec.list_or("x-list", &[20.0, 50.0, 100.0])?;
    let problem = PhaseProblem::neg_cos(g)?;

    let header = names(&["x", "total_re", "total_im", "oracle_re", "oracle_im", "abs_err"]);
    let rows = par_rows(&xs, |&x| {
        let e = problem.expand(x, n, m)?;
        let o = problem.oracle(x);
        Ok(SweepRecord::new(
            vec![("x".into(), x)],
            vec![
                ("total".into(), Value::Complex(e.total)),
                ("oracle".into(), Value::Complex(o.value)),
                ("abs_err".into(), Value::Real((e.total - o.value).norm())),
            ],
        ))
    })?;
    Table::new(header, 1, rows)
}

/// `ξ(r,h)` and its parts, with `bound_ratio = |R|(hr)^{l/2}(1+r)^{−n}`.
fn model(spec: &Spec) -> Result<Table> {
    let symbol = match spec.str_or("symbol", "plancherel") {
        "plancherel" => Symbol::plancherel(CFunction::new(preset_datum(spec, "a2")?)?),
        "gauss" => match spec.get("weights") {
            Some(_) => Symbol::anisotropic_gaussian(spec.list("weights")?),
            None => Symbol::gaussian(spec.usize_or("dim", 2)?),
        },
        other => {
            return Err(HarnessError::usage("symbol", format!("unknown symbol `{other}`; expected plancherel or gauss")))
        }
    };
    let l = symbol.dim();
    let mut e1 = vec![0.0; l];
    if let Some(first) = e1.first_mut() {
        *first = 1.0;
    }
    let axis = unit("axis", spec.list_or("axis", &e1)?)?;
    let n = l as f64 + symbol.growth_exponent();
    let integral = ModelIntegral::new(symbol, &axis)?;
    let m = spec.usize_or("M", integral.default_m())?;
    let rs = spec.list_or("r-list", &[0.5, 1.0, 2.0])?;
    let hs = spec.list_or("h-list", &[10.0, 25.0, 50.0])?;
    let min_hr = spec.f64_or("min-hr", 0.0)?;
    let points: Vec<(f64, f64)> = rs
        .iter()
        .flat_map(|&r| hs.iter().map(move |&h| (r, h)))
        .filter(|&(r, h)| h * r >= min_hr)
        .collect();

    let header = names(&[
        "r", "h", "direct_re", "direct_im", "main_re", "main_im", "R0_re", "R0_im", "R1_re", "R1_im", "R2_re",
        "R2_im", "bound_ratio",
    ]);
    let rows = par_rows(&points, |&(r, h)| {
        let d = integral.xi_decompose(r, h, m)?;
        let ratio = d.remainder_unscaled().norm() * (h * r).powf(l as f64 / 2.0) * (1.0 + r).powf(-n);
        Ok(SweepRecord::new(
            vec![("r".into(), r), ("h".into(), h)],
            vec![
                ("direct".into(), Value::Complex(d.direct)),
                ("main".into(), Value::Complex(d.main)),
                ("R0".into(), Value::Complex(d.r0)),
                ("R1".into(), Value::Complex(d.r1)),
                ("R2".into(), Value::Complex(d.r2)),
                ("bound_ratio".into(), Value::Real(ratio)),
            ],
        ))
    })?;
    Table::new(header, 2, rows)
}

/// `k_t(R)` over `t-list × R` with `bound_ratio = |k| t^ν / ((1+R)^{ν+d} e^{−ρR})`.
/// With `R-factor` set, `R = factor·t` per row and
/// `log_ratio = |k| e^{ρR} / ln t`.
fn kernel(spec: &Spec) -> Result<Table> {
    let geometry = RankOneGeometry::new(preset_datum(spec, "h3")?)?;
    let psi = profile(spec)?;
    let ts = spec.list_or("t-list", &[10.0, 20.0, 40.0, 80.0])?;
    let factor = match spec.get("R-factor") {
        Some(_) => Some(spec.f64_or("R-factor", 1.0)?),
        None => None,
    };
    let points: Vec<(f64, f64)> = match factor {
        Some(f) => ts.iter().map(|&t| (t, f * t)).collect(),
        None => {
            let rs = spec.list_or("R", &[0.5])?;
            ts.iter().flat_map(|&t| rs.iter().map(move |&r| (t, r))).collect()
        }
    };
    if let Some(&(t, r)) = points.iter().find(|p| !(p.1 >= 0.0)) {
        let key = if factor.is_some() { "R-factor" } else { "R" };
        return Err(HarnessError::usage(key, format!("radius {r} at t = {t} is negative")));
    }
    let (nu, d, rho) = (geometry.nu() as f64, geometry.d() as f64, geometry.rho());

    let mut header = names(&["t", "R", "re", "im", "abs", "bound_ratio"]);
    if factor.is_some() {
        header.push("log_ratio".into());
    }
    let rows = par_rows(&points, |&(t, r)| {
        let k = geometry.kernel(&psi, t, r)?.value;
        let abs = k.norm();
        let ratio = abs * t.abs().powf(nu) / ((1.0 + r).powf(nu + d) * (-rho * r).exp());
        let mut outputs = vec![
            ("re".into(), Value::Real(k.re)),
            ("im".into(), Value::Real(k.im)),
            ("abs".into(), Value::Real(abs)),
            ("bound_ratio".into(), Value::Real(ratio)),
        ];
        if factor.is_some() {
            outputs.push(("log_ratio".into(), Value::Real(abs * (rho * r).exp() / t.ln())));
        }
        Ok(SweepRecord::new(vec![("t".into(), t), ("R".into(), r)], outputs))
    })?;
    Table::new(header, 2, rows)
}

/// Kunze–Stein dispersive bound per `t`.
fn dispersive(spec: &Spec) -> Result<Table> {
    let geometry = RankOneGeometry::new(preset_datum(spec, "h3")?)?;
    let psi = profile(spec)?;
    let p = spec.f64_or("p", 4.0)?;
    let ts = spec.list_or("t-list", &[10.0, 20.0, 40.0, 80.0])?;
    let header = names(&["t", "bound"]);
    let rows = par_rows(&ts, |&t| {
        let b = geometry.dispersive_bound(&psi, t, p).map_err(|e| match e {
            sympwave::Error::OutOfRange { .. } => HarnessError::usage("p", format!("p = {p} must exceed 2")),
            other => other.into(),
        })?;
        Ok(SweepRecord::new(vec![("t".into(), t)], vec![("bound".into(), Value::Real(b))]))
    })?;
    Table::new(header, 1, rows)
}
