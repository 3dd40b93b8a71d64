//! Optional `key = value` configuration file.

use std::path::{Path, PathBuf};

use qfsplit::config::AnalysisConfig;

use crate::CliError;

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "QFSPLIT_CONFIG";

/// Command-line overrides applied after the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub truncation_degree: Option<u64>,
    pub candidate_slack: Option<u64>,
    pub witt_length_cap: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<AnalysisConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
}

/// Reads the config from `path`, or from `$QFSPLIT_CONFIG` when no path is
/// given, falling back to defaults; then applies `overrides`.
pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<AnalysisConfig, CliError> {
    let path: Option<PathBuf> = path
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut config = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => AnalysisConfig::default(),
    };
    if let Some(d) = overrides.truncation_degree {
        config.truncation_degree = Some(d);
    }
    if let Some(s) = overrides.candidate_slack {
        config.candidate_slack = Some(s);
    }
    if let Some(c) = overrides.witt_length_cap {
        config.witt_length_cap = c;
    }
    Ok(config)
}
