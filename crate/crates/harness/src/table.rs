use num_complex::Complex64;

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Real(f64),
    /// Written as two columns `<name>_re`, `<name>_im`.
    Complex(Complex64),
}

/// One grid point: its inputs and what was computed there.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub inputs: Vec<(String, f64)>,
    pub outputs: Vec<(String, Value)>,
}

impl SweepRecord {
    pub fn new(inputs: Vec<(String, f64)>, outputs: Vec<(String, Value)>) -> Self {
        Self { inputs, outputs }
    }

    /// Column names with complex outputs split.
    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.inputs.iter().map(|(n, _)| n.clone()).collect();
        for (name, v) in &self.outputs {
            match v {
                Value::Real(_) => cols.push(name.clone()),
                Value::Complex(_) => {
                    cols.push(format!("{name}_re"));
                    cols.push(format!("{name}_im"));
                }
            }
        }
        cols
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.inputs.iter().map(|&(_, x)| x).collect();
        for (_, v) in &self.outputs {
            match *v {
                Value::Real(x) => out.push(x),
                Value::Complex(z) => {
                    out.push(z.re);
                    out.push(z.im);
                }
            }
        }
        out
    }
}

/// Records sharing one header, in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    header: Vec<String>,
    inputs: usize,
    records: Vec<SweepRecord>,
}

impl Table {
    /// `header` is the flattened column list; the first `inputs` columns are
    /// grid inputs. Every record must flatten to exactly this header.
    pub fn new(header: Vec<String>, inputs: usize, records: Vec<SweepRecord>) -> Result<Self> {
        for (i, name) in header.iter().enumerate() {
            if header[..i].contains(name) {
                return Err(HarnessError::usage(name.clone(), "duplicate column name"));
            }
        }
        if inputs > header.len() {
            return Err(HarnessError::usage("header", "more inputs than columns"));
        }
        for (row, rec) in records.iter().enumerate() {
            if rec.inputs.len() != inputs || rec.columns() != header {
                return Err(HarnessError::usage(
                    "header",
                    format!("row {} has columns {:?}, table has {:?}", row + 1, rec.columns(), header),
                ));
            }
            // a real output named like half of a complex pair would not survive parsing
            for (name, v) in &rec.outputs {
                if matches!(v, Value::Real(_)) && (name.ends_with("_re") || name.ends_with("_im")) {
                    return Err(HarnessError::usage(name.clone(), "real columns may not end in _re/_im"));
                }
            }
        }
        Ok(Self { header, inputs, records })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn input_count(&self) -> usize {
        self.inputs
    }

    pub fn records(&self) -> &[SweepRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let j = self
            .header
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| HarnessError::usage(name, format!("no such column; have {}", self.header.join(", "))))?;
        Ok(self.records.iter().map(|r| r.values()[j]).collect())
    }

    /// Rebuilds a table from flattened rows; adjacent `<x>_re`, `<x>_im`
    /// output columns become one complex value.
    pub fn from_rows(header: Vec<String>, inputs: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut records = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != header.len() {
                return Err(HarnessError::usage(
                    "row",
                    format!("row {} has {} fields, header has {}", i + 1, row.len(), header.len()),
                ));
            }
            let ins = header[..inputs].iter().cloned().zip(row[..inputs].iter().copied()).collect();
            let mut outs = Vec::new();
            let mut j = inputs;
            while j < header.len() {
                let paired = header[j]
                    .strip_suffix("_re")
                    .filter(|stem| header.get(j + 1).map(String::as_str) == Some(&format!("{stem}_im")));
                match paired {
                    Some(stem) => {
                        outs.push((stem.to_string(), Value::Complex(Complex64::new(row[j], row[j + 1]))));
                        j += 2;
                    }
                    None => {
                        outs.push((header[j].clone(), Value::Real(row[j])));
                        j += 1;
                    }
                }
            }
            records.push(SweepRecord::new(ins, outs));
        }
        Self::new(header, inputs, records)
    }
}
