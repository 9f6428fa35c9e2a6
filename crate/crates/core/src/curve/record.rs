//! Plain-text `key = value` records for curve specifications.
//!
//! ```text
//! kind = parabola
//! a = 0.5
//! lo = -10
//! hi = 10
//! ```
//!
//! Recognised keys: `kind`, `a` (parabola), `slope` and `intercept` (line),
//! `support_lo`, `plateau_lo`, `plateau_hi`, `support_hi` (bumpsine),
//! `name` (custom), `lo`, `hi`. Missing bounds default to the kind's
//! customary domain. Custom curves round-trip by name only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{BumpParams, CurveKind, CurveSpec, CustomCurve, Interval};
use crate::error::{Error, Result};

/// Splits `key = value` lines, dropping blanks and `#` comments.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", n + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn num(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    map.get(key)
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{key}`: bad number `{v}`")))
        })
        .transpose()
}

fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

impl CurveSpec {
    /// Serializes to a `key = value` record.
    pub fn to_record(&self) -> String {
        let mut s = String::new();
        match &self.kind {
            CurveKind::Line { slope, intercept } => {
                let _ = writeln!(s, "kind = line");
                let _ = writeln!(s, "slope = {}", fmt_f64(*slope));
                let _ = writeln!(s, "intercept = {}", fmt_f64(*intercept));
            }
            CurveKind::Parabola { a } => {
                let _ = writeln!(s, "kind = parabola");
                let _ = writeln!(s, "a = {}", fmt_f64(*a));
            }
            CurveKind::Cubic => {
                let _ = writeln!(s, "kind = cubic");
            }
            CurveKind::BumpSine(p) => {
                let _ = writeln!(s, "kind = bumpsine");
                let _ = writeln!(s, "support_lo = {}", fmt_f64(p.support_lo));
                let _ = writeln!(s, "plateau_lo = {}", fmt_f64(p.plateau_lo));
                let _ = writeln!(s, "plateau_hi = {}", fmt_f64(p.plateau_hi));
                let _ = writeln!(s, "support_hi = {}", fmt_f64(p.support_hi));
            }
            CurveKind::Custom(c) => {
                let _ = writeln!(s, "kind = custom");
                let _ = writeln!(s, "name = {}", c.name());
            }
        }
        let _ = writeln!(s, "lo = {}", fmt_f64(self.domain.lo));
        let _ = writeln!(s, "hi = {}", fmt_f64(self.domain.hi));
        s
    }

    /// Parses a record produced by [`CurveSpec::to_record`] (or written by hand).
    pub fn from_record(text: &str) -> Result<Self> {
        Self::from_map(&parse_key_values(text)?)
    }

    /// Builds a spec from already-split keys; unknown keys are ignored so a
    /// whole config file can be passed.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let kind_name = map
            .get("kind")
            .ok_or_else(|| Error::Parse("missing `kind`".into()))?
            .to_ascii_lowercase();
        let base = match kind_name.as_str() {
            "line" => CurveSpec::line(
                num(map, "slope")?.unwrap_or(0.0),
                num(map, "intercept")?.unwrap_or(0.0),
            ),
            "parabola" => CurveSpec::parabola(
                num(map, "a")?.ok_or_else(|| Error::Parse("parabola needs `a`".into()))?,
            ),
            "cubic" => CurveSpec::cubic(),
            "bumpsine" => {
                let d = BumpParams::default();
                let p = BumpParams {
                    support_lo: num(map, "support_lo")?.unwrap_or(d.support_lo),
                    plateau_lo: num(map, "plateau_lo")?.unwrap_or(d.plateau_lo),
                    plateau_hi: num(map, "plateau_hi")?.unwrap_or(d.plateau_hi),
                    support_hi: num(map, "support_hi")?.unwrap_or(d.support_hi),
                };
                CurveSpec {
                    kind: CurveKind::BumpSine(p),
                    ..CurveSpec::bump_sine()
                }
            }
            "custom" => {
                let name = map
                    .get("name")
                    .ok_or_else(|| Error::Parse("custom curve needs `name`".into()))?;
                let c = CustomCurve::named(name)
                    .ok_or_else(|| Error::Parse(format!("unknown custom curve `{name}`")))?;
                CurveSpec::custom(c, Interval::REAL_LINE)
            }
            other => return Err(Error::Parse(format!("unknown curve kind `{other}`"))),
        };
        let lo = num(map, "lo")?.unwrap_or(base.domain.lo);
        let hi = num(map, "hi")?.unwrap_or(base.domain.hi);
        CurveSpec::new(base.kind, Interval::new(lo, hi)?)
    }
}
