//! Flag/config-file merging. A config file is flat `key = value` lines (`#` comments); keys are
//! the long flag names without dashes (`t-max` and `t_max` both work). Flags win.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Input(format!(
                    "config line {}: expected key=value, got {raw:?}",
                    n + 1
                )));
            };
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Input(format!("config line {}: unknown key {key:?}", n + 1)));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Input(format!("config {key}: not a number: {v:?}")))
            })
            .transpose()
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.get(key)
            .map(|v| match v {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(CliError::Input(format!("config {key}: not a boolean: {v:?}"))),
            })
            .transpose()
    }
}

const KNOWN_KEYS: &[&str] = &[
    "omega",
    "s",
    "hbar",
    "t-start",
    "t-max",
    "step",
    "rel-tol",
    "abs-tol",
    "out",
    "format",
    "scenario",
    "strict",
    "tol-ode",
    "tol-wronskian",
    "tol-fluct",
    "tol-omega",
    "from",
    "to",
    "in",
    "m0omega0",
    "s-range",
];

/// Flag if given, else the config value, else the default.
pub fn pick_f64(flag: Option<f64>, cfg: &ConfigFile, key: &str, default: Option<f64>) -> Result<Option<f64>, CliError> {
    Ok(match flag {
        Some(v) => Some(v),
        None => cfg.f64(key)?.or(default),
    })
}

pub fn require_f64(flag: Option<f64>, cfg: &ConfigFile, key: &str) -> Result<f64, CliError> {
    pick_f64(flag, cfg, key, None)?.ok_or_else(|| CliError::Input(format!("--{key} is required")))
}

pub fn pick_str(flag: Option<&str>, cfg: &ConfigFile, key: &str) -> Option<String> {
    flag.map(str::to_string).or_else(|| cfg.get(key).map(str::to_string))
}
