use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dofcore::{NormalizedParams, Scenario, SPEED_OF_LIGHT};
use crate::simulation::SimulationConfig;

use super::{CliError, Format};

fn speed_of_light() -> f64 {
    SPEED_OF_LIGHT
}

fn one() -> f64 {
    1.0
}

/// Physical scenario in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub radius: f64,
    pub mid_freq: f64,
    pub half_bandwidth: f64,
    pub obs_time: f64,
    #[serde(default = "speed_of_light")]
    pub wave_speed: f64,
    #[serde(default = "one")]
    pub threshold: f64,
    pub snr_alpha_max: f64,
}

impl From<ScenarioConfig> for Scenario {
    fn from(c: ScenarioConfig) -> Self {
        Scenario {
            radius: c.radius,
            mid_freq: c.mid_freq,
            half_bandwidth: c.half_bandwidth,
            obs_time: c.obs_time,
            wave_speed: c.wave_speed,
            threshold: c.threshold,
            snr_alpha_max: c.snr_alpha_max,
        }
    }
}

/// Dimensionless parameters plus the mid-band frequency and wave speed that
/// fix the physical scale.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizedConfig {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub rho: f64,
    #[serde(default = "one")]
    pub mid_freq: f64,
    #[serde(default = "speed_of_light")]
    pub wave_speed: f64,
}

impl NormalizedConfig {
    pub fn params(&self) -> NormalizedParams {
        NormalizedParams {
            a: self.a,
            b: self.b,
            d: self.d,
            rho: self.rho,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    pub rho: Vec<f64>,
    #[serde(default = "one")]
    pub mid_freq: f64,
    #[serde(default = "speed_of_light")]
    pub wave_speed: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Option<ScenarioConfig>,
    pub normalized: Option<NormalizedConfig>,
    pub sweep: Option<SweepConfig>,
    pub simulation: Option<SimulationConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// The scenario block that was supplied, kept for echoing in reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioSource {
    Physical(ScenarioConfig),
    Normalized(NormalizedConfig),
}

impl ScenarioSource {
    pub fn scenario(&self) -> crate::Result<Scenario> {
        let s = match *self {
            ScenarioSource::Physical(c) => c.into(),
            ScenarioSource::Normalized(n) => {
                n.params().validate()?;
                n.params().to_scenario(n.mid_freq, n.wave_speed)
            }
        };
        s.validate()?;
        Ok(s)
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| CliError::parse(format!("invalid config: {e}")))?;
        if cfg.scenario.is_some() && cfg.normalized.is_some() {
            return Err(CliError::parse(
                "config has both `scenario` and `normalized` blocks; give exactly one",
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The single scenario block required by `compute` and `simulate`.
    pub fn scenario_source(&self) -> Result<ScenarioSource, CliError> {
        match (self.scenario, self.normalized) {
            (Some(s), None) => Ok(ScenarioSource::Physical(s)),
            (None, Some(n)) => Ok(ScenarioSource::Normalized(n)),
            _ => Err(CliError::parse(
                "config needs exactly one of `scenario` or `normalized`",
            )),
        }
    }

    pub fn sweep(&self) -> Result<&SweepConfig, CliError> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::parse("config has no `sweep` block"))?;
        for (name, grid) in [("a", &sweep.a), ("b", &sweep.b), ("d", &sweep.d), ("rho", &sweep.rho)] {
            if grid.is_empty() {
                return Err(CliError::parse(format!("sweep grid `{name}` is empty")));
            }
        }
        Ok(sweep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_apply() {
        let cfg = RunConfig::parse(r#"{"normalized": {"a": 1, "b": 0.5, "d": 1, "rho": 1}}"#).unwrap();
        let n = cfg.normalized.unwrap();
        assert_eq!(n.mid_freq, 1.0);
        assert_eq!(n.wave_speed, SPEED_OF_LIGHT);
        let s = RunConfig::parse(
            r#"{"scenario": {"radius": 0.3, "mid_freq": 1e9, "half_bandwidth": 1e8, "obs_time": 1e-6, "snr_alpha_max": 10}}"#,
        )
        .unwrap()
        .scenario_source()
        .unwrap()
        .scenario()
        .unwrap();
        assert_eq!(s.threshold, 1.0);
        assert_eq!(s.wave_speed, SPEED_OF_LIGHT);
    }

    #[test]
    fn mixing_and_typos_rejected() {
        let both = r#"{"scenario": {"radius": 1, "mid_freq": 1, "half_bandwidth": 0, "obs_time": 1, "snr_alpha_max": 1},
                       "normalized": {"a": 1, "b": 0.5, "d": 1, "rho": 1}}"#;
        assert_eq!(RunConfig::parse(both).unwrap_err().code, super::super::EXIT_PARSE);
        let typo = r#"{"normalized": {"a": 1, "b": 0.5, "d": 1, "rh0": 1}}"#;
        assert_eq!(RunConfig::parse(typo).unwrap_err().code, super::super::EXIT_PARSE);
        let none = RunConfig::parse("{}").unwrap();
        assert!(none.scenario_source().is_err());
        assert!(none.sweep().is_err());
    }

    #[test]
    fn empty_grid_rejected() {
        let cfg = RunConfig::parse(r#"{"sweep": {"a": [], "b": [0.5], "d": [1], "rho": [1]}}"#).unwrap();
        assert!(cfg.sweep().is_err());
    }
}
