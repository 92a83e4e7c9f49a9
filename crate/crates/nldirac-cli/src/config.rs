//! Layered run configuration. Each key resolves through four layers,
//! later ones winning: built-in default, config file, `NLDIRAC_*`
//! environment variable, explicit flag.
//!
//! The file format is line-oriented `key = value` with `#` comments.
//! Unknown keys in the file are hard errors against the invoked
//! subcommand's key list; unrelated `NLDIRAC_*` variables are ignored
//! because the environment is shared with other tooling.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::failure::{CliResult, Failure};

pub struct Layers {
    file: BTreeMap<String, String>,
    flags: BTreeMap<&'static str, String>,
    /// Every key the command resolved, with its final value; emitted as the
    /// run's fully-resolved config.
    resolved: RefCell<BTreeMap<String, String>>,
}

fn env_name(key: &str) -> String {
    let mut name = String::from("NLDIRAC_");
    for ch in key.chars() {
        name.push(match ch {
            '-' | '.' => '_',
            other => other.to_ascii_uppercase(),
        });
    }
    name
}

fn parse_file(text: &str, allowed: &[&str]) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let n = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("config line {n}: expected 'key = value'")))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(Failure::input(format!("config line {n}: empty key")));
        }
        if !allowed.contains(&key) {
            return Err(Failure::input(format!(
                "config line {n}: unknown key '{key}' for this subcommand"
            )));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Failure::input(format!("config line {n}: duplicate key '{key}'")));
        }
    }
    Ok(map)
}

impl Layers {
    /// Load the optional config file and combine it with the flag values the
    /// parser actually saw. `allowed` is the full key list of the invoked
    /// subcommand.
    pub fn load(
        config_path: Option<&Path>,
        allowed: &[&str],
        flags: Vec<(&'static str, Option<String>)>,
    ) -> CliResult<Self> {
        let file = match config_path {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Failure::input(format!("cannot read config {}: {e}", path.display()))
                })?;
                parse_file(&text, allowed)?
            }
            None => BTreeMap::new(),
        };
        let flags = flags
            .into_iter()
            .filter_map(|(key, value)| value.map(|v| (key, v)))
            .collect();
        Ok(Self { file, flags, resolved: RefCell::new(BTreeMap::new()) })
    }

    fn raw(&self, key: &str) -> Option<String> {
        if let Some(v) = self.flags.get(key) {
            return Some(v.clone());
        }
        if let Ok(v) = std::env::var(env_name(key)) {
            return Some(v);
        }
        self.file.get(key).cloned()
    }

    fn record(&self, key: &str, value: &str) {
        self.resolved.borrow_mut().insert(key.to_string(), value.to_string());
    }

    /// Final `key = value` view of everything this run resolved, in key
    /// order.
    pub fn resolved_pairs(&self) -> Vec<(String, String)> {
        self.resolved.borrow().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn str(&self, key: &str, default: &str) -> String {
        let v = self.raw(key).unwrap_or_else(|| default.to_string());
        self.record(key, &v);
        v
    }

    pub fn str_opt(&self, key: &str) -> Option<String> {
        let v = self.raw(key);
        if let Some(ref v) = v {
            self.record(key, v);
        }
        v
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, text: &str) -> CliResult<T> {
        text.parse().map_err(|_| {
            Failure::input(format!(
                "key '{key}': cannot parse '{text}' as {}",
                std::any::type_name::<T>()
            ))
        })
    }

    pub fn f64(&self, key: &str, default: f64) -> CliResult<f64> {
        match self.raw(key) {
            Some(text) => {
                self.record(key, &text);
                self.parsed(key, &text)
            }
            None => {
                self.record(key, &default.to_string());
                Ok(default)
            }
        }
    }

    pub fn f64_opt(&self, key: &str) -> CliResult<Option<f64>> {
        match self.raw(key) {
            Some(text) => {
                self.record(key, &text);
                self.parsed(key, &text).map(Some)
            }
            None => Ok(None),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.raw(key) {
            Some(text) => {
                self.record(key, &text);
                self.parsed(key, &text)
            }
            None => {
                self.record(key, &default.to_string());
                Ok(default)
            }
        }
    }

    pub fn bool(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.raw(key).as_deref() {
            Some("true") => {
                self.record(key, "true");
                Ok(true)
            }
            Some("false") => {
                self.record(key, "false");
                Ok(false)
            }
            Some(other) => {
                Err(Failure::input(format!("key '{key}': expected true or false, got '{other}'")))
            }
            None => {
                self.record(key, if default { "true" } else { "false" });
                Ok(default)
            }
        }
    }

    /// Comma-separated float list; an empty value is an empty list.
    pub fn f64_list(&self, key: &str, default: &str) -> CliResult<Vec<f64>> {
        let text = self.str(key, default);
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Vec::new());
        }
        trimmed.split(',').map(|part| self.parsed(key, part.trim())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_names_flatten_separators() {
        assert_eq!(env_name("t-final"), "NLDIRAC_T_FINAL");
        assert_eq!(env_name("row1.c"), "NLDIRAC_ROW1_C");
    }

    #[test]
    fn unknown_file_keys_are_rejected_with_their_line() {
        let err = parse_file("a = 1\nbogus = 2\n", &["a"]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("bogus"), "{msg}");
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let map = parse_file("# top\n\n  a = 1 \n", &["a"]).unwrap();
        assert_eq!(map.get("a").map(String::as_str), Some("1"));
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        assert!(parse_file("a = 1\na = 2\n", &["a"]).is_err());
    }
}
