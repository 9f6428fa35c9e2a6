//! Suite reports and their JSON-lines / CSV emission.
//!
//! JSON-lines layout, one object per line:
//!
//! 1. `{"record":"header","suite":..,"config":{..}}`
//! 2. one `{"record":"assertion","suite","id","pass","value","threshold","margin","witness","witness_xs"}`
//!    per assertion, in registration order
//! 3. `{"record":"summary","suite","pass","samples","worst_id","worst_margin"}`
//!
//! Floats are written with 17 significant digits; non-finite values as `null`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Duration;

use crate::error::Result;
use crate::format::sig17;
use crate::geometry::Triple;
use crate::symmetry::{write_batch_csv, SymmetrizationResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub id: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
    /// Distance to the threshold, positive on the passing side.
    pub margin: f64,
    pub witness: Option<Triple>,
}

impl Assertion {
    pub fn new(
        id: impl Into<String>,
        value: f64,
        bound: Bound,
        threshold: f64,
        witness: Option<Triple>,
    ) -> Self {
        let margin = match bound {
            Bound::AtMost | Bound::Below => threshold - value,
            Bound::AtLeast | Bound::Above => value - threshold,
        };
        let pass = match bound {
            Bound::AtMost | Bound::AtLeast => margin >= 0.0,
            Bound::Below | Bound::Above => margin > 0.0,
        };
        Assertion {
            id: id.into(),
            pass,
            value,
            threshold,
            margin,
            witness,
        }
    }

    pub fn at_most(
        id: impl Into<String>,
        value: f64,
        threshold: f64,
        witness: Option<Triple>,
    ) -> Self {
        Self::new(id, value, Bound::AtMost, threshold, witness)
    }

    pub fn at_least(
        id: impl Into<String>,
        value: f64,
        threshold: f64,
        witness: Option<Triple>,
    ) -> Self {
        Self::new(id, value, Bound::AtLeast, threshold, witness)
    }

    pub fn below(
        id: impl Into<String>,
        value: f64,
        threshold: f64,
        witness: Option<Triple>,
    ) -> Self {
        Self::new(id, value, Bound::Below, threshold, witness)
    }

    pub fn above(
        id: impl Into<String>,
        value: f64,
        threshold: f64,
        witness: Option<Triple>,
    ) -> Self {
        Self::new(id, value, Bound::Above, threshold, witness)
    }
}

/// Running maximum of a sampled quantity with its witness.
#[derive(Debug, Clone, Copy)]
pub struct Extreme {
    pub value: f64,
    pub witness: Option<Triple>,
}

impl Extreme {
    pub fn new() -> Self {
        Extreme {
            value: f64::NEG_INFINITY,
            witness: None,
        }
    }

    /// Keeps the first strict maximum; NaN always wins so it cannot hide.
    pub fn push(&mut self, value: f64, t: &Triple) {
        if self.value.is_nan() {
            return;
        }
        if value.is_nan() || value > self.value {
            self.value = value;
            self.witness = Some(*t);
        }
    }
}

impl Default for Extreme {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub samples: usize,
    /// Key-value echo of the resolved configuration.
    pub config: BTreeMap<String, String>,
    pub assertions: Vec<Assertion>,
    /// Raw samples, kept only when requested.
    pub rows: Vec<(Triple, SymmetrizationResult)>,
    /// Wall time; never written to the numeric report.
    pub runtime: Duration,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            pass: true,
            samples: 0,
            config: BTreeMap::new(),
            assertions: Vec::new(),
            rows: Vec::new(),
            runtime: Duration::ZERO,
        }
    }

    pub fn push(&mut self, a: Assertion) {
        self.pass &= a.pass;
        self.assertions.push(a);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    /// The assertion with the smallest margin.
    pub fn worst(&self) -> Option<&Assertion> {
        self.assertions
            .iter()
            .min_by(|a, b| a.margin.total_cmp(&b.margin))
    }

    pub fn assertion(&self, id: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.id == id)
    }

    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        let suite = json_str(&self.suite);
        let cfg: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| format!("{}:{}", json_str(k), json_str(v)))
            .collect();
        let _ = writeln!(
            s,
            "{{\"record\":\"header\",\"suite\":{suite},\"config\":{{{}}}}}",
            cfg.join(",")
        );
        for a in &self.assertions {
            let _ = writeln!(
                s,
                "{{\"record\":\"assertion\",\"suite\":{suite},\"id\":{},\"pass\":{},\"value\":{},\"threshold\":{},\"margin\":{},\"witness\":{},\"witness_xs\":{}}}",
                json_str(&a.id),
                a.pass,
                json_num(a.value),
                json_num(a.threshold),
                json_num(a.margin),
                a.witness.map_or("null".into(), |t| json_array(&t.to_row())),
                a.witness
                    .and_then(|t| t.xs)
                    .map_or("null".into(), |xs| json_array(&xs)),
            );
        }
        let (worst_id, worst_margin) = match self.worst() {
            Some(a) => (json_str(&a.id), json_num(a.margin)),
            None => ("null".into(), "null".into()),
        };
        let _ = writeln!(
            s,
            "{{\"record\":\"summary\",\"suite\":{suite},\"pass\":{},\"samples\":{},\"worst_id\":{worst_id},\"worst_margin\":{worst_margin}}}",
            self.pass, self.samples
        );
        s
    }

    pub fn write_json_lines<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_json_lines().as_bytes())?;
        Ok(())
    }

    pub fn write_samples_csv<W: Write>(&self, out: W) -> Result<()> {
        write_batch_csv(out, &self.rows)
    }
}

fn json_str(s: &str) -> String {
    serde_json::Value::String(s.to_owned()).to_string()
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        sig17(x)
    } else {
        "null".into()
    }
}

fn json_array(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| json_num(x)).collect();
    format!("[{}]", parts.join(","))
}
