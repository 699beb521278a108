//! Run-time defaults, optionally read from the JSON file named by
//! `HDK_CONFIG`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::completions::ApproxLimits;
use crate::error::{Error, Result};

pub const CONFIG_ENV: &str = "HDK_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Seed for every sampled suite.
    pub seed: u64,
    /// Largest ground (number of primes) enumerated exhaustively.
    pub max_ground: usize,
    /// Largest exponent in enumerated divisor boxes.
    pub max_exponent: u32,
    /// Default `p`-adic precision.
    pub precision: u32,
    /// Samples per randomized suite check.
    pub trials: usize,
    pub approx: ApproxLimits,
}

impl Default for Config {
    fn default() -> Config {
        Config { seed: 0, max_ground: 3, max_exponent: 3, precision: 8, trials: 100, approx: ApproxLimits::default() }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }

    /// Defaults overridden by `HDK_CONFIG` when it is set.
    pub fn from_env() -> Result<Config> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) => Config::from_file(Path::new(&p)),
            None => Ok(Config::default()),
        }
    }
}
