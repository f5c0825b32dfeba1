//! Run configuration schema: JSON in, validated structs out. Unknown keys
//! are rejected everywhere.

use crate::ensemble::EnsembleConfig;
use crate::error::{Error, Result};
use crate::spectra::LocalLawArm;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Density,
    LocalLaw,
    Deloc,
    Gaps,
    Compare,
    FixedPoint,
    TiTail,
    Laplace,
    Dbm,
    Validate,
    SelfTest,
}

/// Experiment-specific knobs; each experiment reads the subset it needs and
/// falls back to its documented defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentParams {
    /// energy window (sweeps, delocalization, gaps)
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    /// number of energy gridpoints
    pub n_e: Option<usize>,
    /// spectral scale η (sweeps, tail tests, comparison)
    pub eta: Option<f64>,
    /// η grid for the local-law heatmap
    pub eta_grid: Option<Vec<f64>>,
    /// separate scale for diagonal-resolvent statistics
    pub rjj_eta: Option<f64>,
    /// which coupled matrix a sweep runs on
    pub arm: Option<LocalLawArm>,
    /// center energy (gaps, dbm, tail tests)
    pub e_center: Option<f64>,
    /// γ grid for the comparison experiment
    pub gamma_grid: Option<Vec<f64>>,
    /// gaps per trial; default ⌊N^0.6⌋
    pub gaps_per_trial: Option<usize>,
    /// Laplace-check time parameter
    pub t_value: Option<f64>,
    /// Monte Carlo samples per side for scalar checks
    pub samples: Option<usize>,
    /// flow time override (defaults to the coupling time)
    pub s_flow: Option<f64>,
    /// exponent δ of the flow scale η = 2N^{δ-1}
    pub delta: Option<f64>,
    /// η pair for density extrapolation
    pub eta_pair: Option<(f64, f64)>,
    /// quarter-circle grid size for the fixed-point experiment
    pub grid_size: Option<usize>,
}

/// Optional pass/fail thresholds; when present they gate the exit status.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Checks {
    /// local law: bound on the worst per-energy mean |m_N - m_α|
    pub max_mean_mdiff: Option<f64>,
    /// density: bound on |total mass - 1| after the analytic tail completion
    pub max_mass_defect: Option<f64>,
    /// delocalization: bound on √N‖u‖_∞ together with a minimum pass rate
    pub deloc_bound: Option<f64>,
    pub min_pass_fraction: Option<f64>,
    /// gaps: bound on the pooled two-sample KS distance to the GOE reference
    pub max_gap_ks: Option<f64>,
    /// fixed point: bound on the cross-route |m_scalar - m_functional|
    pub max_route_gap: Option<f64>,
    /// tail test: expected slope and tolerance
    pub slope: Option<f64>,
    pub slope_tol: Option<f64>,
    /// Laplace: bound on |log lhs/rhs| minus the lemma's error scale
    pub max_log_ratio_excess: Option<f64>,
    /// dbm/compare: bound on max entries or gaps
    pub max_statistic: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub experiment: Experiment,
    pub ensemble: EnsembleConfig,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub params: ExperimentParams,
    #[serde(default)]
    pub checks: Checks,
}

fn default_trials() -> usize {
    10
}

impl RunConfig {
    /// Parse and validate; all schema and constraint problems surface here.
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config schema: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        // surface the violated inequality by name
        cfg.ensemble
            .validated()
            .map_err(|e| Error::Config(e.to_string()))?;
        if cfg.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<(RunConfig, String)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Ok((Self::from_json(&text)?, text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(experiment: &str) -> String {
        format!(
            r#"{{"schema_version":1,"experiment":"{experiment}","ensemble":{{"n":100,"alpha":1.5,"nu":0.45,"rho":0.1,"seed":7}}}}"#
        )
    }

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_json(&minimal("density")).unwrap();
        assert_eq!(cfg.experiment, Experiment::Density);
        assert_eq!(cfg.trials, 10);
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = r#"{"schema_version":1,"experiment":"density","surprise":1,
            "ensemble":{"n":100,"alpha":1.5,"nu":0.45,"rho":0.1,"seed":7}}"#;
        assert!(RunConfig::from_json(bad).is_err());
        let bad_nested = r#"{"schema_version":1,"experiment":"density",
            "ensemble":{"n":100,"alpha":1.5,"nu":0.45,"rho":0.1,"seed":7,"oops":2}}"#;
        assert!(RunConfig::from_json(bad_nested).is_err());
    }

    #[test]
    fn names_the_violated_inequality() {
        let bad = r#"{"schema_version":1,"experiment":"density",
            "ensemble":{"n":100,"alpha":1.5,"nu":0.39,"rho":0.1,"seed":7}}"#;
        let err = RunConfig::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("1/(4-alpha) < nu"), "{err}");
    }

    #[test]
    fn rejects_wrong_schema_version() {
        let bad = minimal("density").replace("\"schema_version\":1", "\"schema_version\":9");
        assert!(RunConfig::from_json(&bad).is_err());
    }
}
