//! `key = value` config files and default resolution.
//!
//! Precedence, lowest first: built-in defaults, config file, `TGC_SEED`,
//! explicit flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use tiered_gc::sim::ModelKind;

use crate::CliError;

pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Defaults {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub model: ModelKind,
    pub literal_mu: bool,
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOL,
            model: ModelKind::Se2,
            literal_mu: false,
        }
    }
}

fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Invalid(format!("config line {}: expected key=value", no + 1)));
        };
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Invalid(format!("config: bad value `{value}` for `{key}`"))
}

impl Defaults {
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (k, v) in parse_kv(text)? {
            match k.as_str() {
                "trials" => self.trials = v.parse().map_err(|_| bad(&k, &v))?,
                "seed" => self.seed = v.parse().map_err(|_| bad(&k, &v))?,
                "tol" => self.tol = v.parse().map_err(|_| bad(&k, &v))?,
                "model" => self.model = v.parse().map_err(|_| bad(&k, &v))?,
                "literal_mu" => self.literal_mu = v.parse().map_err(|_| bad(&k, &v))?,
                _ => return Err(CliError::Invalid(format!("config: unknown key `{k}`"))),
            }
        }
        Ok(())
    }

    pub fn apply_seed_env(&mut self, value: Option<String>) -> Result<(), CliError> {
        if let Some(v) = value {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| CliError::Invalid(format!("TGC_SEED: bad seed `{v}`")))?;
        }
        Ok(())
    }

    pub fn load(config: Option<&Path>) -> Result<Self, CliError> {
        let mut d = Defaults::default();
        if let Some(path) = config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
            d.apply_text(&text)?;
        }
        d.apply_seed_env(std::env::var("TGC_SEED").ok())?;
        Ok(d)
    }
}
