//! Flat key-value experiment configuration: `key = value` lines with `#`
//! comments. Typed accessors record every key they touch (with its
//! effective value), so the echoed configuration is complete and
//! `parse -> echo -> parse` is the identity on echoed text.

use anyhow::{bail, Context, Result};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default)]
pub struct Config {
    provided: BTreeMap<String, String>,
    effective: RefCell<BTreeMap<String, String>>,
}

impl Config {
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut provided = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {} is not `key = value`: {raw:?}", lineno + 1);
            };
            let key = key.trim().to_string();
            if key.is_empty() {
                bail!("config line {} has an empty key", lineno + 1);
            }
            provided.insert(key, value.trim().to_string());
        }
        Ok(Config { provided, effective: RefCell::new(BTreeMap::new()) })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse_str(&text)
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.provided.insert(key.to_string(), value);
    }

    fn record(&self, key: &str, value: String) {
        self.effective.borrow_mut().insert(key.to_string(), value);
    }

    pub fn get_str(&self, key: &str, default: &str) -> String {
        let value =
            self.provided.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.record(key, value.clone());
        value
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        let value = match self.provided.get(key) {
            Some(raw) => raw
                .parse::<f64>()
                .with_context(|| format!("config key `{key}` is not a number: {raw:?}"))?,
            None => default,
        };
        self.record(key, format_float(value));
        Ok(value)
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        let value = match self.provided.get(key) {
            Some(raw) => raw
                .parse::<usize>()
                .with_context(|| format!("config key `{key}` is not an integer: {raw:?}"))?,
            None => default,
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        let value = match self.provided.get(key) {
            Some(raw) => raw
                .parse::<u64>()
                .with_context(|| format!("config key `{key}` is not an integer: {raw:?}"))?,
            None => default,
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn get_f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let values = match self.provided.get(key) {
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().with_context(|| {
                        format!("config key `{key}` has a non-numeric entry: {s:?}")
                    })
                })
                .collect::<Result<Vec<f64>>>()?,
            None => default.to_vec(),
        };
        let rendered: Vec<String> = values.iter().map(|v| format_float(*v)).collect();
        self.record(key, rendered.join(","));
        Ok(values)
    }

    pub fn get_usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        let values = match self.provided.get(key) {
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim().parse::<usize>().with_context(|| {
                        format!("config key `{key}` has a non-integer entry: {s:?}")
                    })
                })
                .collect::<Result<Vec<usize>>>()?,
            None => default.to_vec(),
        };
        let rendered: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        self.record(key, rendered.join(","));
        Ok(values)
    }

    /// Keys provided but never consumed by the subcommand.
    pub fn unused_keys(&self) -> Vec<String> {
        let used = self.effective.borrow();
        self.provided.keys().filter(|k| !used.contains_key(*k)).cloned().collect()
    }

    /// The effective configuration (touched keys with their values).
    pub fn effective_map(&self) -> BTreeMap<String, String> {
        self.effective.borrow().clone()
    }

    /// Echo as parseable text, keys sorted.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.effective.borrow().iter() {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn format_float(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_typed_access() {
        let cfg = Config::parse_str("# comment\np = 2.5\ncells_list = 8, 16,32\n").unwrap();
        assert_eq!(cfg.get_f64("p", 0.0).unwrap(), 2.5);
        assert_eq!(cfg.get_usize_list("cells_list", &[]).unwrap(), vec![8, 16, 32]);
        assert_eq!(cfg.get_u64("seed", 7).unwrap(), 7);
        assert!(cfg.unused_keys().is_empty());
    }

    #[test]
    fn echo_round_trip_is_identity() {
        let cfg = Config::parse_str("p = 2.5\nseed = 3\n").unwrap();
        cfg.get_f64("p", 0.0).unwrap();
        cfg.get_u64("seed", 0).unwrap();
        cfg.get_usize("cells", 16).unwrap(); // default recorded too
        let echoed = cfg.echo();
        let cfg2 = Config::parse_str(&echoed).unwrap();
        cfg2.get_f64("p", 0.0).unwrap();
        cfg2.get_u64("seed", 0).unwrap();
        cfg2.get_usize("cells", 0).unwrap();
        assert_eq!(cfg2.echo(), echoed);
    }

    #[test]
    fn rejects_malformed_lines_and_bad_numbers() {
        assert!(Config::parse_str("just words\n").is_err());
        let cfg = Config::parse_str("p = fish\n").unwrap();
        assert!(cfg.get_f64("p", 1.0).is_err());
    }

    #[test]
    fn unused_keys_are_reported() {
        let cfg = Config::parse_str("p = 2\nmystery = 9\n").unwrap();
        cfg.get_f64("p", 0.0).unwrap();
        assert_eq!(cfg.unused_keys(), vec!["mystery".to_string()]);
    }

    #[test]
    fn float_formatting_round_trips() {
        for &v in &[1.0, -0.1, 1.0 / 3.0, 6.02e23, 1e-300] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_float(f64::INFINITY), "inf");
    }
}
