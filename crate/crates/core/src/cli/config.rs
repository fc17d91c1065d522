//! `key = value` config files and the cache of searched witness parameters.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::witnesses::{self, key_estimate_table, LacunaryParams};

/// Environment variable naming the JSON cache of searched parameters.
pub const CACHE_ENV: &str = "VARLAT_CACHE";

/// Default first scale of the radius sets.
pub const DEFAULT_J0: i32 = 2;

/// Keys accepted in config files; identical to the long flag names.
pub const KEYS: [&str; 15] = [
    "p", "q", "r-list", "j0", "j1-list", "a", "kmin", "grid-points", "seed", "workers", "nodes", "trials", "m", "n",
    "j-max",
];

/// Parsed `key = value` lines. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("line {}: unknown key {key:?}", i + 1)));
            }
            entries.insert(key, v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.entries
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| Error::Config(format!("bad value for {key}: {v:?}"))))
            .transpose()
    }

    pub fn get_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.entries.get(key).map(|v| parse_list(v)).transpose()
    }
}

/// Comma-separated list.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Error::Config(format!("bad list entry {t:?}"))))
        .collect()
}

/// Numbers separated by commas or whitespace.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}"))))
        .collect()
}

/// `min_{j0 ≤ j ≤ max(j0, 30)} D_j` for base `a`, with an admissible depth.
pub fn params_for_base(a: f64, j0: i32) -> Result<LacunaryParams> {
    let j_hi = j0.max(witnesses::DEFAULT_WINDOW.1);
    let k_min = witnesses::admissible_k_min(a, j_hi + 1)?;
    let table = key_estimate_table(a, k_min, j_hi)?;
    let key_constant = table[j0 as usize..].iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(LacunaryParams { a, k_min, j0, key_constant })
}

/// Searched parameters, read from the cache file when present and valid,
/// otherwise computed and written back to it.
pub fn searched_params(cache: Option<&Path>) -> Result<LacunaryParams> {
    if let Some(path) = cache {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(p) = serde_json::from_str::<LacunaryParams>(&text) {
                if witnesses::check_truncation(p.a, p.k_min, p.j0).is_ok() {
                    return Ok(p);
                }
            }
        }
    }
    let params = witnesses::search_key_params(&witnesses::DEFAULT_BASES, None, witnesses::DEFAULT_WINDOW)?;
    if let Some(path) = cache {
        std::fs::write(path, serde_json::to_string_pretty(&params)?)?;
    }
    Ok(params)
}
