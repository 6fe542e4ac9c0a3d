//! Number formatting, config-file parsing, and output plumbing.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Binary64 round-trip formatting: 17 significant digits, '.' decimal.
/// The same string feeds both CSV fields and JSON values (which are emitted
/// as decimal strings).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// Keys accepted in a config file: the shared flag vocabulary.
const CONFIG_KEYS: [&str; 16] = [
    "p", "q", "s1", "s2", "n", "seed", "trials", "tol", "format", "out", "x", "y", "z", "kappa",
    "suite", "budget",
];

/// Flat `key = value` config file mirroring the flags. Flags override it.
#[derive(Debug, Default, Clone)]
pub struct ConfigMap {
    values: HashMap<String, String>,
}

impl ConfigMap {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {} is not `key = value`: {line}", lineno + 1))?;
            let key = key.trim().to_string();
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(format!("unknown config key `{key}` on line {}", lineno + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigMap { values })
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<f64>()
                .map(Some)
                .map_err(|_| format!("config key `{key}` is not a number: {raw}")),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<u64>()
                .map(Some)
                .map_err(|_| format!("config key `{key}` is not an integer: {raw}")),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, String> {
        Ok(self.u64(key)?.map(|v| v as usize))
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }
}

/// Writes to the given path, or to stdout when no path is set.
pub fn write_output(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
        }
    }
}
