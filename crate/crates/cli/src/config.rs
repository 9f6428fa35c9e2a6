//! Option resolution: command line, then config file, then defaults.
//!
//! Config files hold one `key = value` per line with `#` comments. Keys are
//! the long option names (`seed`, `n`, `out-dir`, ...); a curve may be given
//! either as `curve = <shorthand>` or as a record (`kind = ...`, `a = ...`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, Context, Result};
use menger_core::curve::record::parse_key_values;
use menger_core::CurveSpec;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "MENGER_LAB_OUT";

#[derive(Debug, Default, Clone)]
pub struct Config {
    file: BTreeMap<String, String>,
    /// Every resolved key, echoed into report headers.
    pub resolved: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                parse_key_values(&text)
                    .with_context(|| format!("parsing config {}", p.display()))?
            }
            None => BTreeMap::new(),
        };
        Ok(Config {
            file,
            resolved: BTreeMap::new(),
        })
    }

    fn lookup<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.file
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config `{key} = {v}`: {e}"))
            })
            .transpose()
    }

    /// Command-line value, else config value, else `None`.
    pub fn opt<T>(&mut self, key: &str, cli: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        let v = match cli {
            Some(v) => Some(v),
            None => self.lookup(key)?,
        };
        if let Some(v) = &v {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(v)
    }

    pub fn get<T>(&mut self, key: &str, cli: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        let v = self.opt(key, cli)?.unwrap_or(default);
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    pub fn require<T>(&mut self, key: &str, cli: Option<T>) -> Result<T>
    where
        T: FromStr + ToString,
        T::Err: std::fmt::Display,
    {
        self.opt(key, cli)?
            .ok_or_else(|| anyhow!("missing --{key} (on the command line or in the config file)"))
    }

    /// Curve from `--curve`, else `curve =`, else a curve record in the file.
    /// `lo`/`hi` restrict the domain when given.
    pub fn curve(&mut self, cli: Option<String>) -> Result<Option<CurveSpec>> {
        let spec = match self.opt::<String>("curve", cli)? {
            Some(s) => Some(s.parse::<CurveSpec>()?),
            None if self.file.contains_key("kind") => Some(CurveSpec::from_map(&self.file)?),
            None => None,
        };
        if let Some(s) = &spec {
            for line in s.to_record().lines() {
                if let Some((k, v)) = line.split_once(" = ") {
                    self.resolved.insert(format!("curve.{k}"), v.to_string());
                }
            }
        }
        Ok(spec)
    }

    /// Output directory: flag, config, environment, then `.`.
    pub fn out_dir(&mut self, cli: Option<PathBuf>) -> Result<PathBuf> {
        let dir = match cli {
            Some(p) => p,
            None => match self.file.get("out-dir") {
                Some(v) => PathBuf::from(v),
                None => {
                    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from)
                }
            },
        };
        self.resolved
            .insert("out-dir".into(), dir.display().to_string());
        Ok(dir)
    }

    /// `tol.<name> = value` entries from the file.
    pub fn tolerance_overrides(&self) -> Vec<(String, String)> {
        self.file
            .iter()
            .filter_map(|(k, v)| {
                k.strip_prefix("tol.")
                    .map(|name| (name.to_string(), v.clone()))
            })
            .collect()
    }
}
