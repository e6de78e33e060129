//! Plain-text `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are skipped. Values given on the
//! command line take precedence over values from the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Keys the front end understands.
pub const KNOWN_KEYS: &[&str] = &[
    "d",
    "from",
    "to",
    "step",
    "measures",
    "derivative",
    "seed",
    "format",
    "oracle.restarts",
    "roof.restarts",
    "roof.ensemble_size",
    "verify.tolerance_scale",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::usage(format!("config line {}: unknown key `{key}`", lineno + 1)));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> CliResult<Option<Vec<T>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| CliError::usage(format!("config key `{key}`: cannot parse `{s}`"))))
                .collect::<CliResult<Vec<T>>>()
                .map(Some),
        }
    }
}

/// First of the flag value, the config value and the default.
pub fn resolve<T: FromStr>(flag: Option<T>, config: &Config, key: &str, default: T) -> CliResult<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(config.get(key)?.unwrap_or(default)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let c = Config::parse("# grid\nfrom = 0.5\n\nd = 3,4\nroof.restarts=6\n").unwrap();
        assert_eq!(c.get::<f64>("from").unwrap(), Some(0.5));
        assert_eq!(c.list::<usize>("d").unwrap(), Some(vec![3, 4]));
        assert_eq!(resolve(Some(9usize), &c, "roof.restarts", 1).unwrap(), 9);
        assert_eq!(resolve(None, &c, "roof.restarts", 1usize).unwrap(), 6);
        assert_eq!(resolve(None, &c, "seed", 42u64).unwrap(), 42);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("nonsense").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("step = fast").unwrap().get::<f64>("step").is_err());
    }
}
