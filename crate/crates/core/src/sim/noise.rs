//! Calibrated default noise levels, shipped in `config/noise.toml`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::settings::Setting;

const BUILTIN: &str = include_str!("../../config/noise.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseFile {
    noise: BTreeMap<String, f64>,
}

/// Noise level per setting.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTable {
    levels: [f64; 12],
}

impl NoiseTable {
    /// Parse a table; every setting must be present exactly once.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: NoiseFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut levels = [f64::NAN; 12];
        for (name, level) in &file.noise {
            let setting: Setting = name.parse()?;
            if !(level.is_finite() && *level >= 0.0) {
                return Err(Error::Config(format!(
                    "noise for {name} must be >= 0, got {level}"
                )));
            }
            levels[setting.index()] = *level;
        }
        if let Some(missing) = Setting::ALL.iter().find(|s| levels[s.index()].is_nan()) {
            return Err(Error::Config(format!("no noise level for {missing}")));
        }
        Ok(Self { levels })
    }

    pub fn builtin() -> &'static NoiseTable {
        static TABLE: OnceLock<NoiseTable> = OnceLock::new();
        TABLE.get_or_init(|| NoiseTable::from_toml(BUILTIN).expect("shipped noise table is valid"))
    }

    pub fn get(&self, setting: Setting) -> f64 {
        self.levels[setting.index()]
    }
}

/// Default noise for `setting` in `p` dimensions: the calibrated level at
/// `p = 1` and none above it, as in the suite's high-dimensional runs.
pub fn default_noise(setting: Setting, p: usize) -> f64 {
    if p > 1 {
        0.0
    } else {
        NoiseTable::builtin().get(setting)
    }
}
