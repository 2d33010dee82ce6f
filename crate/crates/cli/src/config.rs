//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spinring::oracle::DEFAULT_MAX_EXACT_SITES;
use spinring::ChainParams;

use crate::args::{CommonArgs, Format, MethodChoice};
use crate::error::{CliError, CliResult};

/// Everything a subcommand needs. Every field is optional in the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_sites: Option<usize>,
    pub beta_j: Option<f64>,
    pub beta_mub: Option<f64>,
    pub method: Option<MethodChoice>,
    pub sites: Option<[usize; 2]>,
    pub max_exact_n: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_owned(),
            reason: e.to_string(),
        })
    }

    /// File values first, flags win.
    pub fn resolve(common: &CommonArgs) -> CliResult<Self> {
        let base = match &common.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        Ok(Self {
            n_sites: common.n.or(base.n_sites),
            beta_j: common.beta_j.or(base.beta_j),
            beta_mub: common.beta_mub.or(base.beta_mub),
            method: base.method,
            sites: base.sites,
            max_exact_n: common.max_exact_n.or(base.max_exact_n),
            output: common.output.clone().or(base.output),
            format: common.format.or(base.format),
        })
    }

    pub fn params(&self) -> CliResult<ChainParams> {
        let missing = |flag: &str| CliError::Usage(format!("missing required parameter {flag}"));
        let n = self.n_sites.ok_or_else(|| missing("--n"))?;
        let bj = self.beta_j.ok_or_else(|| missing("--beta-j"))?;
        let bmu = self.beta_mub.ok_or_else(|| missing("--beta-mub"))?;
        Ok(ChainParams::new(n, bj, bmu)?)
    }

    pub fn max_exact_n(&self) -> usize {
        self.max_exact_n.unwrap_or(DEFAULT_MAX_EXACT_SITES)
    }

    pub fn format(&self) -> Option<Format> {
        self.format
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(
            &path,
            r#"{"n_sites": 12, "beta_j": 0.5, "beta_mub": 2.0, "method": "exact", "format": "json"}"#,
        )
        .unwrap();
        let common = CommonArgs {
            n: Some(8),
            config: Some(path),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&common).unwrap();
        assert_eq!(cfg.n_sites, Some(8));
        assert_eq!(cfg.beta_j, Some(0.5));
        assert_eq!(cfg.method, Some(MethodChoice::Exact));
        assert_eq!(cfg.format(), Some(Format::Json));
        assert_eq!(cfg.params().unwrap().n_sites(), 8);
    }

    #[test]
    fn unknown_keys_and_missing_values_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"n": 12}"#).unwrap();
        let common = CommonArgs {
            config: Some(path),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(&common).unwrap_err().exit_code(), 2);
        let empty = RunConfig::default();
        assert_eq!(empty.params().unwrap_err().exit_code(), 2);
    }
}
