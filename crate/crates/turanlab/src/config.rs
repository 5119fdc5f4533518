//! Run configuration: defaults, an optional TOML file, then flags.

use std::path::Path;

use serde::Deserialize;
use turanlab_core::extremal::Guards;

use crate::report::Format;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub trials: usize,
    pub guards: Guards,
    /// `None` picks each command's default (CSV for scan, JSON otherwise).
    pub output_format: Option<Format>,
    pub deterministic: bool,
    /// Worker threads; `0` means one per core.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0, trials: 50, guards: Guards::default(), output_format: None, deterministic: false, threads: 0 }
    }
}

/// Keys accepted in a config file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub format: Option<Format>,
    pub deterministic: Option<bool>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub guards: GuardsFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardsFile {
    pub max_n_ex: Option<usize>,
    pub max_pool_exx: Option<usize>,
    pub max_edges_sample_solver: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: String, source: toml::de::Error },
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

impl Config {
    pub fn apply(&mut self, file: ConfigFile) {
        let g = &mut self.guards;
        self.seed = file.seed.unwrap_or(self.seed);
        self.trials = file.trials.unwrap_or(self.trials);
        self.output_format = file.format.or(self.output_format);
        self.deterministic = file.deterministic.unwrap_or(self.deterministic);
        self.threads = file.threads.unwrap_or(self.threads);
        g.max_n_ex = file.guards.max_n_ex.unwrap_or(g.max_n_ex);
        g.max_pool_exx = file.guards.max_pool_exx.unwrap_or(g.max_pool_exx);
        g.max_edges_sample_solver = file.guards.max_edges_sample_solver.unwrap_or(g.max_edges_sample_solver);
    }

    pub fn load(path: &Path) -> Result<ConfigFile, ConfigError> {
        let p = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: p.clone(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse { path: p, source })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = &self.guards;
        for (name, v) in [
            ("trials", self.trials),
            ("max_n_ex", g.max_n_ex),
            ("max_pool_exx", g.max_pool_exx),
            ("max_edges_sample_solver", g.max_edges_sample_solver),
        ] {
            if v == 0 {
                return Err(ConfigError::NotPositive(name));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let file: ConfigFile = toml::from_str("seed = 7\nformat = \"csv\"\n[guards]\nmax_n_ex = 8\n").unwrap();
        let mut c = Config::default();
        c.apply(file);
        assert_eq!((c.seed, c.trials, c.output_format), (7, 50, Some(Format::Csv)));
        assert_eq!(c.guards, Guards { max_n_ex: 8, ..Guards::default() });
        assert!(toml::from_str::<ConfigFile>("sed = 1").is_err());
        c.trials = 0;
        assert!(c.validate().is_err());
    }
}
