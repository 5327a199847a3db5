//! Layered settings: command-line flags over a `key=value` file over
//! built-in defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use jensenlab::numeric::{Dyadic, Rat};
use jensenlab::specialfn::XiMethod;
use num_traits::{One, Signed};

use crate::CliError;

pub const KEYS: &[&str] = &[
    "prec", "order", "method", "seed", "trials", "delta", "T", "c", "n1", "d", "n", "out", "format",
    "cache-dir", "mode", "deg", "deg-q", "radius", "trunc", "source",
];

pub const CACHE_ENV: &str = "JENSENLAB_CACHE";

#[derive(Clone, Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses the flat `key = value` format. Blank lines and `#` comments are
/// skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        let k = if k.eq_ignore_ascii_case("t") { "T".to_string() } else { k };
        if !KEYS.contains(&k.as_str()) {
            return Err(usage(format!("config line {}: unknown key `{k}`", i + 1)));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

impl Settings {
    pub fn layered(flags: BTreeMap<String, String>, config: Option<&Path>) -> Result<Settings, CliError> {
        let mut values = match config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        values.extend(flags);
        Ok(Settings { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => s.parse().map_err(|e| usage(format!("--{key} `{s}`: {e}"))),
        }
    }

    pub fn rat(&self, key: &str, default: &str) -> Result<Rat, CliError> {
        let s = self.raw(key).unwrap_or(default);
        parse_rat(s).ok_or_else(|| usage(format!("--{key} `{s}` is not a number")))
    }

    pub fn range(&self, key: &str, default: (usize, usize)) -> Result<(usize, usize), CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_range(s).ok_or_else(|| usage(format!("--{key} `{s}`: expected `a..b` or `a`"))),
        }
    }

    /// `δ^2` for the sector parameter.
    pub fn delta_sq(&self, default: &str) -> Result<Rat, CliError> {
        let s = self.raw("delta").unwrap_or(default);
        let d2 = parse_delta_sq(s).ok_or_else(|| usage(format!("--delta `{s}` is not a number")))?;
        if !d2.is_positive() || d2 > Rat::one() {
            return Err(usage(format!("--delta `{s}` outside (0, 1]")));
        }
        Ok(d2)
    }

    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let format = match self.raw("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            f => return Err(usage(format!("--format `{f}`: expected csv or json"))),
        };
        let cache_dir = self
            .raw("cache-dir")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
        let cfg = RunConfig {
            precision_bits: self.get("prec", 128u32)?,
            jet_order: self.get("order", 0usize)?,
            method: self.get("method", XiMethod::Both).map_err(|_| usage("--method: expected phi, factors or both"))?,
            seed: self.get("seed", 0u64)?,
            output_path: self.raw("out").map(PathBuf::from),
            format,
            cache_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: u32,
    /// Highest jet order; 0 lets each command pick what it needs.
    pub jet_order: usize,
    pub method: XiMethod,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.precision_bits < 64 {
            return Err(usage(format!("--prec {} below 64 bits", self.precision_bits)));
        }
        if self.jet_order == 1 {
            return Err(usage("--order must be at least 2"));
        }
        Ok(())
    }

    /// Explicit order if one was given, otherwise `needed`.
    pub fn order_or(&self, needed: usize) -> usize {
        if self.jet_order == 0 {
            needed.max(2)
        } else {
            self.jet_order
        }
    }
}

/// Fractions (`3/4`) and decimals with optional exponent (`3e12`, `0.5`).
pub fn parse_rat(s: &str) -> Option<Rat> {
    Dyadic::parse_rat(s)
}

/// `δ` as a number, or `δ^2` written as `sqrt(r)` or `2^-1/2`.
pub fn parse_delta_sq(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return parse_rat(inner);
    }
    if let Some(e) = s.strip_prefix("2^") {
        let e = e.trim_start_matches('(').trim_end_matches(')');
        return match e {
            "-1/2" => Some(Rat::new(1.into(), 2.into())),
            "-1" => Some(Rat::new(1.into(), 4.into())),
            _ => None,
        };
    }
    parse_rat(s).map(|d| &d * &d)
}

/// Inclusive ranges `a..b` or `a..=b`, or a single value.
pub fn parse_range(s: &str) -> Option<(usize, usize)> {
    let s = s.trim();
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let r = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (r.0 <= r.1).then_some(r)
        }
        None => {
            let v = s.parse().ok()?;
            Some((v, v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jensenlab::numeric::rat;

    #[test]
    fn numbers_and_ranges() {
        assert_eq!(parse_rat("3e12"), Some(rat(3_000_000_000_000, 1)));
        assert_eq!(parse_rat("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rat("0.1"), Some(rat(1, 10)));
        assert_eq!(parse_range("1..30"), Some((1, 30)));
        assert_eq!(parse_range("0..=10"), Some((0, 10)));
        assert_eq!(parse_range("6"), Some((6, 6)));
        assert_eq!(parse_range("5..2"), None);
    }

    #[test]
    fn delta_forms() {
        assert_eq!(parse_delta_sq("0.5"), Some(rat(1, 4)));
        assert_eq!(parse_delta_sq("2^-1/2"), Some(rat(1, 2)));
        assert_eq!(parse_delta_sq("sqrt(1/2)"), Some(rat(1, 2)));
        assert_eq!(parse_delta_sq("0.1"), Some(rat(1, 100)));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# comment\nseed = 4\ntrials=9\nprec = 96\n").unwrap();
        let flags = BTreeMap::from([("seed".to_string(), "7".to_string())]);
        let s = Settings::layered(flags, Some(&path)).unwrap();
        assert_eq!(s.get("seed", 0u64).unwrap(), 7);
        assert_eq!(s.get("trials", 1usize).unwrap(), 9);
        assert_eq!(s.get("order", 3usize).unwrap(), 3);
        assert_eq!(s.run_config().unwrap().precision_bits, 96);
    }

    #[test]
    fn bad_config_is_a_usage_error() {
        assert!(matches!(parse_config("bogus = 1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_config("seed 4"), Err(CliError::Usage(_))));
        let s = Settings { values: BTreeMap::from([("prec".into(), "32".into())]) };
        assert!(s.run_config().is_err());
    }
}
