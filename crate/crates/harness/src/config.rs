//! Experiment specifications: `key = value` pairs from a config file with
//! command-line flags layered on top.

use std::collections::BTreeMap;

use crate::error::{HarnessError, Result};

pub const EXPERIMENTS: [&str; 5] = ["cfun", "stphase", "model", "kernel", "dispersive"];

#[derive(Clone, Debug, PartialEq)]
pub struct Spec {
    experiment: String,
    values: BTreeMap<String, String>,
}

impl Spec {
    pub fn new(experiment: &str) -> Result<Self> {
        if !EXPERIMENTS.contains(&experiment) {
            return Err(HarnessError::usage(
                "experiment",
                format!("unknown experiment `{experiment}`; expected one of {}", EXPERIMENTS.join(", ")),
            ));
        }
        Ok(Self { experiment: experiment.to_string(), values: BTreeMap::new() })
    }

    pub fn experiment(&self) -> &str {
        &self.experiment
    }

    pub fn set(&mut self, key: &str, value: &str) -> &mut Self {
        self.values.insert(key.to_string(), value.trim().to_string());
        self
    }

    /// Applies config text underneath the current values, so anything set
    /// already (from the command line) wins.
    pub fn layer_config(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_config(text)? {
            self.values.entry(key).or_insert(value);
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// Rejects keys the experiment does not read.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(HarnessError::usage(
                k,
                format!("not a parameter of `{}` (expected {})", self.experiment, allowed.join(", ")),
            )),
            None => Ok(()),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.values.get(key).map(String::as_str).unwrap_or(default)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => parse_f64(key, v),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| HarnessError::usage(key, format!("`{v}` is not a nonnegative integer"))),
        }
    }

    /// A list of reals, empty when the key is missing or blank.
    pub fn list(&self, key: &str) -> Result<Vec<f64>> {
        match self.values.get(key) {
            None => Ok(Vec::new()),
            Some(v) => parse_list(key, v),
        }
    }

    pub fn list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.values.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => parse_list(key, v),
        }
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::usage(line, format!("config line {} is not `key = value`", i + 1)))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(HarnessError::usage(line, format!("config line {} has an empty key", i + 1)));
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| HarnessError::usage(key, format!("`{v}` is not a number")))
}

/// `a,b,c`, or a progression `lin:min:max:steps` / `geom:min:max:steps`.
pub fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let v = v.trim();
    if v.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((scale, rest)) = v.split_once(':') {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(HarnessError::usage(key, format!("`{v}` is not scale:min:max:steps")));
        }
        let lo = parse_f64(key, parts[0])?;
        let hi = parse_f64(key, parts[1])?;
        let steps: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| HarnessError::usage(key, format!("`{}` is not a step count", parts[2])))?;
        return progression(key, scale.trim(), lo, hi, steps);
    }
    v.split(',').map(|s| parse_f64(key, s)).collect()
}

/// `steps` points from `lo` to `hi` inclusive.
pub fn progression(key: &str, scale: &str, lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Ok(Vec::new());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let frac = |j: usize| j as f64 / (steps - 1) as f64;
    match scale {
        "lin" => Ok((0..steps).map(|j| lo + (hi - lo) * frac(j)).collect()),
        "geom" => {
            if !(lo > 0.0 && hi > 0.0) {
                return Err(HarnessError::usage(key, "geometric progressions need positive endpoints"));
            }
            let (a, b) = (lo.ln(), hi.ln());
            let mut v: Vec<f64> = (0..steps).map(|j| (a + (b - a) * frac(j)).exp()).collect();
            // endpoints exactly as given
            v[0] = lo;
            v[steps - 1] = hi;
            Ok(v)
        }
        other => Err(HarnessError::usage(key, format!("unknown scale `{other}`; expected lin or geom"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_overrides_config() {
        let mut s = Spec::new("kernel").unwrap();
        s.set("R", "2.0");
        s.layer_config("# comment\nR = 0.5\npsi = exp:1.0  # trailing\n\n").unwrap();
        assert_eq!(s.get("R"), Some("2.0"));
        assert_eq!(s.get("psi"), Some("exp:1.0"));
    }

    #[test]
    fn lists_and_progressions() {
        assert_eq!(parse_list("t", "10, 20,40").unwrap(), vec![10.0, 20.0, 40.0]);
        assert!(parse_list("t", "").unwrap().is_empty());
        let g = parse_list("t", "geom:10:80:4").unwrap();
        assert!((g[1] - 20.0).abs() < 1e-12 && (g[3] - 80.0).abs() < 1e-12);
        assert_eq!(parse_list("t", "lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let err = parse_list("t-list", "10,x").unwrap_err();
        assert!(err.to_string().contains("t-list"));
    }

    #[test]
    fn malformed_config_names_the_line() {
        let err = Spec::new("cfun").unwrap().layer_config("steps 10").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("steps 10"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut s = Spec::new("dispersive").unwrap();
        s.set("colour", "red");
        let err = s.check_keys(&["preset", "psi"]).unwrap_err();
        assert!(err.to_string().contains("colour"));
        assert!(Spec::new("nope").is_err());
    }
}
