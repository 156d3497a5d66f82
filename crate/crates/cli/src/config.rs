//! Flat `key = value` configuration files and the value syntaxes shared with flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::CliError;

/// A real number, optionally in units of the quarter period `K` (`0.7`, `K`, `-K/2`, `3K/16`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub in_k: bool,
}

impl Quantity {
    pub const fn plain(value: f64) -> Self {
        Self { value, in_k: false }
    }

    pub const fn of_k(value: f64) -> Self {
        Self { value, in_k: true }
    }

    pub fn resolve(self, quarter_period: f64) -> f64 {
        if self.in_k {
            self.value * quarter_period
        } else {
            self.value
        }
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let Some((coef, rest)) = s.split_once('K') else {
            return number(s).map(Quantity::plain);
        };
        let coef = match coef.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => number(c)?,
        };
        let rest = rest.trim();
        let den = match rest.strip_prefix('/') {
            Some(d) => number(d)?,
            None if rest.is_empty() => 1.0,
            None => return Err(format!("cannot parse '{s}' (expected e.g. 0.7, K, -K/2, 3K/16)")),
        };
        if den == 0.0 {
            return Err(format!("'{s}' divides by zero"));
        }
        Ok(Quantity::of_k(coef / den))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.in_k {
            write!(f, "{}K", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// A half-open integer interval `a..b`, or closed `a..=b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexRange {
    pub start: i64,
    pub end: i64,
}

impl IndexRange {
    pub fn range(self) -> std::ops::Range<i64> {
        self.start..self.end
    }
}

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("cannot parse range '{s}' (expected a..b or a..=b)");
        let (a, b) = s.trim().split_once("..").ok_or_else(bad)?;
        let (b, inclusive) = match b.strip_prefix('=') {
            Some(b) => (b, true),
            None => (b, false),
        };
        let start: i64 = a.trim().parse().map_err(|_| bad())?;
        let end: i64 = b.trim().parse().map_err(|_| bad())?;
        let end = if inclusive { end + 1 } else { end };
        if end <= start {
            return Err(format!("range '{s}' is empty"));
        }
        Ok(Self { start, end })
    }
}

/// Time slices: a list `0,0.5,K` or an evenly spaced grid `start:end:count` (end excluded).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeSamples {
    List(Vec<Quantity>),
    Grid { start: Quantity, end: Quantity, count: usize },
}

impl TimeSamples {
    pub fn resolve(&self, quarter_period: f64) -> Vec<f64> {
        match self {
            TimeSamples::List(v) => v.iter().map(|q| q.resolve(quarter_period)).collect(),
            TimeSamples::Grid { start, end, count } => {
                let (a, b) = (start.resolve(quarter_period), end.resolve(quarter_period));
                (0..*count).map(|i| a + (b - a) * i as f64 / *count as f64).collect()
            }
        }
    }
}

impl FromStr for TimeSamples {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [a, b, n] => {
                let count: usize = n.trim().parse().map_err(|_| format!("sample count '{n}' is not a positive integer"))?;
                if count == 0 {
                    return Err("sample count must be positive".into());
                }
                Ok(TimeSamples::Grid { start: a.parse()?, end: b.parse()?, count })
            }
            [list] => {
                let v = list.split(',').map(str::parse).collect::<Result<Vec<Quantity>, _>>()?;
                Ok(TimeSamples::List(v))
            }
            _ => Err(format!("cannot parse time samples '{s}' (expected t1,t2,… or start:end:count)")),
        }
    }
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Obj,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "obj" => Ok(Format::Obj),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv, obj or json)")),
        }
    }
}

/// Keys accepted in configuration files; flags use the same names with dashes.
pub const KEYS: &[&str] = &[
    "family",
    "twisted",
    "k",
    "n",
    "gamma",
    "delta",
    "beta",
    "m-range",
    "n-range",
    "t-samples",
    "format",
    "out",
    "raw-alpha",
    "raw-beta",
    "seed",
    "points",
    "grid",
];

/// Parsed configuration file: key → (line number, raw value).
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, (usize, String)>,
    origin: String,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{origin}:{line}: expected 'key = value', found '{content}'")))?;
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("{origin}:{line}: unknown key '{key}'")));
            }
            if entries.insert(key.clone(), (line, value.trim().to_string())).is_some() {
                return Err(CliError::Config(format!("{origin}:{line}: duplicate key '{key}'")));
            }
        }
        Ok(Self { entries, origin: origin.to_string() })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// The flag value if given, else the parsed file value, else `None`.
    pub fn pick<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, raw)) => raw.parse().map(Some).map_err(|e| CliError::Config(format!("{}:{line}: key '{key}': {e}", self.origin))),
        }
    }

    /// Like [`ConfigFile::pick`] with a default.
    pub fn pick_or<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        Ok(self.pick(key, flag)?.unwrap_or(default))
    }
}
