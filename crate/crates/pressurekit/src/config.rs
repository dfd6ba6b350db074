//! Flat `key = value` experiment configs.
//!
//! ```text
//! # comment
//! include common.cfg        # merged in place, path relative to this file
//! system = full2.sft
//! potential = zero.pot
//! n_range = 1-16            # inclusive; also `40-200/40` or `4,6,8`
//! ```
//!
//! Paths are resolved against the directory of the file that names them.
//! Unknown and repeated keys are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const KEYS: &[&str] = &[
    "command",
    "system",
    "measure",
    "potential",
    "cover",
    "cutter",
    "n_range",
    "n_grid",
    "n",
    "m",
    "delta",
    "weighting",
    "s_tol",
    "depth_cap",
    "n_exact",
    "mc_orbits",
    "mc_length",
    "seed",
    "samples",
    "orbit_len",
    "depth",
    "tolerance",
    "locality",
    "box_depth",
    "n_probe",
    "word_cap",
    "suite",
];

const PATH_KEYS: &[&str] = &["system", "measure", "potential", "cover", "cutter"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
    paths: BTreeMap<String, PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Config::default();
        cfg.merge_file(path, 0)?;
        Ok(cfg)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = Config::default();
        cfg.merge_text(text, base, "<config>", 0)?;
        Ok(cfg)
    }

    fn merge_file(&mut self, path: &Path, depth: usize) -> Result<()> {
        if depth > 8 {
            return Err(Error::config(format!("{}: include nesting too deep", path.display())));
        }
        let text = read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        self.merge_text(&text, base, &path.display().to_string(), depth)
    }

    fn merge_text(&mut self, text: &str, base: &Path, name: &str, depth: usize) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::config(format!("{name}:{}: {msg}", i + 1));
            if let Some(rest) = line.strip_prefix("include ") {
                self.merge_file(&base.join(rest.trim()), depth + 1)?;
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected 'key = value', got '{line}'")))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(at(format!("unknown key '{k}'")));
            }
            if self.values.contains_key(k) {
                return Err(at(format!("key '{k}' set twice")));
            }
            if PATH_KEYS.contains(&k) {
                self.paths.insert(k.to_string(), base.join(v));
            }
            self.values.insert(k.to_string(), v.to_string());
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn path(&self, key: &str) -> Option<&Path> {
        self.paths.get(key).map(PathBuf::as_path)
    }

    /// Contents of the file named by `key`.
    pub fn file(&self, key: &str) -> Result<String> {
        let p = self
            .path(key)
            .ok_or_else(|| Error::config(format!("missing key '{key}'")))?;
        read(p)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::config(format!("key '{key}': cannot parse '{v}'")))
            })
            .transpose()
    }

    pub fn get_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        self.raw(key).map(|v| parse_list(v).map_err(|e| Error::config(format!("key '{key}': {e}")))).transpose()
    }

    pub fn list_or(&self, key: &str, default: Vec<usize>) -> Result<Vec<usize>> {
        Ok(self.list(key)?.unwrap_or(default))
    }

    /// All settings as `key=value` pairs joined by `;`, for provenance columns.
    pub fn fingerprint(&self) -> String {
        let parts: Vec<String> = self
            .values
            .iter()
            .filter(|(k, _)| k.as_str() != "command")
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        parts.join(";")
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// `a-b`, `a-b/step` (both inclusive) or a comma list, increasing.
pub fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let bad = || format!("bad integer list '{s}'");
    let out: Vec<usize> = if s.contains('-') {
        let (range, step) = match s.split_once('/') {
            Some((r, t)) => (r, t.trim().parse::<usize>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let (a, b) = range.split_once('-').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if step == 0 || a > b {
            return Err(bad());
        }
        (a..=b).step_by(step).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<std::result::Result<_, _>>()?
    };
    if out.is_empty() || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("list '{s}' must be non-empty and increasing"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("1-4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_list("40-200/40").unwrap(), vec![40, 80, 120, 160, 200]);
        assert_eq!(parse_list("4, 6,8").unwrap(), vec![4, 6, 8]);
        assert!(parse_list("5-1").is_err());
        assert!(parse_list("3,3").is_err());
    }

    #[test]
    fn unknown_and_repeated_keys() {
        let base = Path::new(".");
        assert!(Config::parse("colour = red\n", base).is_err());
        assert!(Config::parse("m = 1\nm = 2\n", base).is_err());
        let c = Config::parse("m = 2 # extra depth\nsystem = a.sft\n", Path::new("/x")).unwrap();
        assert_eq!(c.get::<usize>("m").unwrap(), Some(2));
        assert_eq!(c.path("system").unwrap(), Path::new("/x/a.sft"));
    }
}
