//! Settings merged from an optional JSON file and command-line flags.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::args::{CommonArgs, Format, ScalingMode};
use crate::failure::Failure;

/// Every setting any command reads. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub spin: Option<f64>,
    pub gamma: Option<f64>,
    pub theta0: Option<f64>,
    pub phi0: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub tau_points: Option<usize>,
    pub log: Option<bool>,
    pub dump_state: Option<PathBuf>,
    pub theta_points: Option<usize>,
    pub gammas: Option<Vec<f64>>,
    pub mode: Option<ScalingMode>,
    pub spin_min: Option<f64>,
    pub spin_max: Option<f64>,
    pub spin_points: Option<usize>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub ratio_points: Option<usize>,
    pub draws: Option<usize>,
    pub tol_dense: Option<f64>,
    pub tol_xi2: Option<f64>,
    pub tol_ode: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
    }
}

/// Settings shared by all commands, after merging.
#[derive(Debug, Clone, PartialEq)]
pub struct Base {
    pub spin: f64,
    pub gamma: f64,
    pub theta0: f64,
    pub phi0: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

/// Loads the config file named by `--config`, if any.
pub fn file_for(common: &CommonArgs) -> Result<FileConfig, Failure> {
    match &common.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

pub fn base(common: &CommonArgs, file: &FileConfig, default_spin: f64, default_format: Format) -> Base {
    Base {
        spin: common.spin.or(file.spin).unwrap_or(default_spin),
        gamma: common.gamma.or(file.gamma).unwrap_or(0.0),
        theta0: common.theta0.or(file.theta0).unwrap_or(FRAC_PI_2),
        phi0: common.phi0.or(file.phi0).unwrap_or(0.0),
        out: common.out.clone().or_else(|| file.out.clone()),
        format: common.format.or(file.format).unwrap_or(default_format),
        seed: common.seed.or(file.seed).unwrap_or(42),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = serde_json::from_str(r#"{"spin": 50, "gamma": 2.0, "format": "json"}"#).unwrap();
        let flags = CommonArgs {
            gamma: Some(0.5),
            ..Default::default()
        };
        let b = base(&flags, &file, 1000.0, Format::Csv);
        assert_eq!(b.spin, 50.0);
        assert_eq!(b.gamma, 0.5);
        assert_eq!(b.format, Format::Json);
        assert_eq!(b.theta0, FRAC_PI_2);
        assert_eq!(b.seed, 42);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"spn": 3}"#).is_err());
        let f: FileConfig = serde_json::from_str(r#"{"mode": "gamma-ratio", "gammas": [0, 1]}"#).unwrap();
        assert_eq!(f.mode, Some(ScalingMode::GammaRatio));
    }
}
