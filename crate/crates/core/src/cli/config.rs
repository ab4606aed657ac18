//! Run configuration: defaults, then an optional `key=value` file, then
//! command-line flags, each layer overriding the previous one.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::leakage::{VConvention, MAX_RATIO};
use crate::mathieu::Parity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Table,
    Sweep,
    Mathieu,
    Oracle,
    Evolve,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Table => "table",
            Command::Sweep => "sweep",
            Command::Mathieu => "mathieu",
            Command::Oracle => "oracle",
            Command::Evolve => "evolve",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Table => &["convention", "format", "truncation", "out"],
            Command::Sweep => &["lo", "hi", "steps", "spacing", "truncation", "format", "out"],
            Command::Mathieu => &["kind", "order", "q", "truncation", "format", "out"],
            Command::Oracle => &["ratio", "truncation", "format", "out"],
            Command::Evolve => &[
                "theta",
                "time",
                "ratio",
                "convention",
                "truncation",
                "format",
                "out",
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::domain(format!(
                "unknown format `{other}` (expected csv or json)"
            ))),
        }
    }
}

/// How sweep ratios are spaced between `lo` and `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    /// Equal ratios between neighbours; `0.0025 → 0.02` in 4 steps doubles.
    #[default]
    Geometric,
    Linear,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" | "log" => Ok(Spacing::Geometric),
            "linear" => Ok(Spacing::Linear),
            other => Err(Error::domain(format!(
                "unknown spacing `{other}` (expected geometric or linear)"
            ))),
        }
    }
}

/// Sweep range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub spacing: Spacing,
}

impl SweepRange {
    /// Ascending ratios; the last one is exactly `hi` when `steps > 1`.
    pub fn ratios(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    return self.hi;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Geometric => self.lo * (self.hi / self.lo).powf(t),
                    Spacing::Linear => self.lo + (self.hi - self.lo) * t,
                }
            })
            .collect()
    }
}

/// Everything one invocation needs. Fields that a command does not use keep
/// their defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub convention: VConvention,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// Charge truncation `N` (table, sweep, oracle, evolve) or Fourier mode
    /// count (mathieu); `None` picks the module default.
    pub truncation: Option<usize>,
    pub sweep: Option<SweepRange>,
    pub ratio: Option<f64>,
    pub theta: Option<f64>,
    pub time: Option<f64>,
    pub kind: Option<Parity>,
    pub order: Option<u32>,
    pub q: Option<f64>,
}

/// Raw `key → value` settings before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.0.insert(key.into(), value.into());
    }

    /// Later layers win.
    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Parse `key=value` lines. Blank lines and lines starting with `#` are
    /// skipped; surrounding whitespace is trimmed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::domain(format!(
                    "config line {}: expected key=value, got `{line}`",
                    lineno + 1
                )));
            };
            s.set(k.trim(), v.trim());
        }
        Ok(s)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::domain(format!("invalid value `{v}` for {key}: {e}")))
            })
            .transpose()
    }

    fn required<T: FromStr>(&self, command: Command, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.parsed(key)?.ok_or_else(|| {
            Error::domain(format!("`{}` needs --{key}", command.name()))
        })
    }
}

impl RunConfig {
    /// Build and validate from merged settings. Keys not used by `command`
    /// are rejected so that typos in a config file do not pass silently.
    pub fn from_settings(command: Command, settings: &Settings) -> Result<Self> {
        if let Some(k) = settings.0.keys().find(|k| !command.keys().contains(&k.as_str())) {
            return Err(Error::domain(format!(
                "`{}` does not take `{k}`",
                command.name()
            )));
        }
        let s = settings;
        let sweep = match command {
            Command::Sweep => Some(SweepRange {
                lo: s.required(command, "lo")?,
                hi: s.required(command, "hi")?,
                steps: s.required(command, "steps")?,
                spacing: s.parsed("spacing")?.unwrap_or_default(),
            }),
            _ => None,
        };
        let needs = |key: &str| -> Result<Option<f64>> {
            s.required::<f64>(command, key).map(Some)
        };
        let (ratio, theta, time) = match command {
            Command::Oracle => (needs("ratio")?, None, None),
            Command::Evolve => (needs("ratio")?, needs("theta")?, needs("time")?),
            _ => (None, None, None),
        };
        let (kind, order, q) = match command {
            Command::Mathieu => (
                Some(s.required::<Parity>(command, "kind")?),
                Some(s.required::<u32>(command, "order")?),
                Some(s.required::<f64>(command, "q")?),
            ),
            _ => (None, None, None),
        };
        let cfg = RunConfig {
            command,
            convention: s.parsed("convention")?.unwrap_or_default(),
            format: s.parsed("format")?.unwrap_or_default(),
            out: s.get("out").map(PathBuf::from),
            truncation: s.parsed("truncation")?,
            sweep,
            ratio,
            theta,
            time,
            kind,
            order,
            q,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks that must pass before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let in_range = |r: f64| r > 0.0 && r <= MAX_RATIO;
        if let Some(sw) = &self.sweep {
            if !(in_range(sw.lo) && in_range(sw.hi) && sw.lo <= sw.hi) {
                return Err(Error::domain(format!(
                    "sweep bounds must satisfy 0 < lo <= hi <= {MAX_RATIO}, got lo={} hi={}",
                    sw.lo, sw.hi
                )));
            }
            if sw.steps == 0 {
                return Err(Error::domain("sweep needs steps >= 1"));
            }
        }
        if let Some(r) = self.ratio {
            if !in_range(r) {
                return Err(Error::domain(format!(
                    "ratio must lie in (0, {MAX_RATIO}], got {r}"
                )));
            }
        }
        for (name, x) in [("theta", self.theta), ("time", self.time), ("q", self.q)] {
            if let Some(x) = x {
                if !x.is_finite() {
                    return Err(Error::domain(format!("{name} must be finite, got {x}")));
                }
            }
        }
        if let Some(n) = self.truncation {
            if n == 0 {
                return Err(Error::domain("truncation must be positive"));
            }
        }
        Ok(())
    }
}
