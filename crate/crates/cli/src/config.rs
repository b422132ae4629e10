//! Run configuration: flat key-value files merged with flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{config_err, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Discrim,
    OnticBound,
    OnticSearch,
    BellVerify,
    BellSweep,
    Sample,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Discrim => "discrim",
            CommandKind::OnticBound => "ontic-bound",
            CommandKind::OnticSearch => "ontic-search",
            CommandKind::BellVerify => "bell-verify",
            CommandKind::BellSweep => "bell-sweep",
            CommandKind::Sample => "sample",
        }
    }

    /// Command-specific parameter keys accepted from files and flags.
    pub fn parameter_keys(self) -> &'static [&'static str] {
        match self {
            CommandKind::Discrim => &["eta1", "gamma2", "phase"],
            CommandKind::OnticBound => &["mode", "q", "c", "eta1", "gamma2"],
            CommandKind::OnticSearch => &["q", "c", "eta1", "resolution", "sharp", "n", "budget"],
            CommandKind::BellVerify => &["theta", "scenario", "starts", "tol"],
            CommandKind::BellSweep => &["sweep", "points", "starts", "tol"],
            CommandKind::Sample => &["eta1", "gamma2", "phase", "runs"],
        }
    }

    pub fn uses_samples(self) -> bool {
        matches!(self, CommandKind::Discrim | CommandKind::Sample)
    }
}

impl FromStr for CommandKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        [
            CommandKind::Discrim,
            CommandKind::OnticBound,
            CommandKind::OnticSearch,
            CommandKind::BellVerify,
            CommandKind::BellSweep,
            CommandKind::Sample,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| config_err(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(config_err(format!("format must be csv or json, got `{other}`"))),
        }
    }
}

const GLOBAL_KEYS: [&str; 4] = ["seed", "samples", "out", "format"];

pub const DEFAULT_SAMPLES: u64 = 100_000;

/// Command parameters as raw strings, typed on access.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self {
            values: pairs
                .into_iter()
                .map(|(k, v)| (normalize_key(k), v.trim().to_string()))
                .collect(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        self.get(key).map_or(Ok(default), |v| parse_f64(key, v))
    }

    /// Comma list `a,b,c` or inclusive linspace `start:stop:count`.
    pub fn f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let Some(raw) = self.get(key) else {
            return Ok(default.to_vec());
        };
        if let Some((start, rest)) = raw.split_once(':') {
            let (stop, count) = rest
                .split_once(':')
                .ok_or_else(|| config_err(format!("{key}: range must be start:stop:count")))?;
            let (start, stop) = (parse_f64(key, start)?, parse_f64(key, stop)?);
            let count: usize = parse_int(key, count)?;
            return match count {
                0 => Err(config_err(format!("{key}: range needs at least one point"))),
                1 => Ok(vec![start]),
                _ => Ok((0..count)
                    .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
                    .collect()),
            };
        }
        raw.split(',').map(|v| parse_f64(key, v)).collect()
    }

    pub fn u64(&self, key: &str, default: u64) -> Result<u64> {
        self.get(key).map_or(Ok(default), |v| parse_int(key, v))
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        self.get(key).map_or(Ok(default), |v| parse_int(key, v))
    }

    pub fn bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(other) => Err(config_err(format!("{key}: expected a boolean, got `{other}`"))),
        }
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

fn parse_f64(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| config_err(format!("{key}: `{}` is not a number", raw.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(config_err(format!("{key}: value must be finite")))
    }
}

fn parse_int<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| config_err(format!("{key}: `{}` is not a non-negative integer", raw.trim())))
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(path: &Path, text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::ConfigFile {
            path: path.to_path_buf(),
            line: idx + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = normalize_key(key);
        if key.is_empty() {
            return Err(CliError::ConfigFile {
                path: path.to_path_buf(),
                line: idx + 1,
                message: "empty key".into(),
            });
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(path, &text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: Params,
    pub seed: u64,
    pub samples: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Merges file values with flag values (flags win) and validates keys.
    pub fn merge(
        command: CommandKind,
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut merged = file;
        merged.extend(flags);
        let allowed = command.parameter_keys();
        for key in merged.keys() {
            if !GLOBAL_KEYS.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
                return Err(config_err(format!(
                    "`{key}` is not a parameter of {} (expected one of: {})",
                    command.name(),
                    allowed.join(", ")
                )));
            }
        }
        let mut params = Params::default();
        let mut global = BTreeMap::new();
        for (k, v) in merged {
            if GLOBAL_KEYS.contains(&k.as_str()) {
                global.insert(k, v);
            } else {
                params.values.insert(k, v);
            }
        }
        let global = Params { values: global };
        let seed = global.u64("seed", 0)?;
        let samples = global.u64("samples", DEFAULT_SAMPLES)?;
        if command.uses_samples() && samples == 0 {
            return Err(config_err("samples must be at least 1"));
        }
        let format = global.get("format").map_or(Ok(Format::Csv), str::parse)?;
        let output = global.get("out").map(PathBuf::from);
        Ok(Self {
            command,
            params,
            seed,
            samples,
            output,
            format,
        })
    }

    pub fn new(command: CommandKind, params: &[(&str, &str)]) -> Result<Self> {
        let flags = params.iter().map(|(k, v)| (normalize_key(k), v.to_string())).collect();
        Self::merge(command, BTreeMap::new(), flags)
    }
}
