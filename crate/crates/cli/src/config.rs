//! Run configuration: a scenario, a simulation grid, Monte Carlo settings and
//! output options, stored as JSON.

use std::fs;
use std::path::Path;

use capacity_core::montecarlo::{default_horizon, McSettings};
use capacity_core::{presets, Scenario, TimeGrid};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub n_paths: usize,
    pub seed: u64,
    /// Truncation horizon in years; `null` picks one from the model.
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub format: Format,
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub grid: TimeGrid,
    pub mc: MonteCarlo,
    pub outputs: Outputs,
}

impl RunConfig {
    /// Configuration around a named preset: 40 years at a tenth of a year.
    pub fn preset(name: &str) -> Result<Self, CliError> {
        let scenario = presets::scenario(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown scenario `{name}` (expected one of {})",
                presets::NAMES.join(", ")
            ))
        })?;
        Ok(RunConfig {
            scenario,
            grid: TimeGrid {
                t0: 0.0,
                dt: 0.1,
                n_steps: 400,
            },
            mc: MonteCarlo {
                n_paths: 10_000,
                seed: 20_240_601,
                horizon: None,
            },
            outputs: Outputs {
                format: Format::Csv,
                path: None,
            },
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("config serializes");
        text.push('\n');
        text
    }

    /// Checks every nested invariant before any computation runs.
    pub fn validate(&self) -> Result<(), CliError> {
        self.scenario.validate()?;
        self.grid.validate()?;
        if self.grid.t0 != 0.0 {
            return Err(CliError::Config(format!(
                "grid.t0 must be 0, got {}",
                self.grid.t0
            )));
        }
        if self.grid.steps_in(self.scenario.h).is_none() {
            return Err(capacity_core::Error::Grid(format!(
                "time-to-build {} is not a whole number of steps of {}",
                self.scenario.h, self.grid.dt
            ))
            .into());
        }
        if self.mc.n_paths < 2 {
            return Err(CliError::Config(format!(
                "mc.n_paths must be at least 2, got {}",
                self.mc.n_paths
            )));
        }
        if let Some(h) = self.mc.horizon {
            if !(h > self.scenario.h && h.is_finite()) {
                return Err(CliError::Config(format!(
                    "mc.horizon must exceed the time-to-build {}, got {h}",
                    self.scenario.h
                )));
            }
        }
        Ok(())
    }

    pub fn mc_settings(&self) -> McSettings {
        McSettings {
            n_paths: self.mc.n_paths,
            seed: self.mc.seed,
            horizon: self
                .mc
                .horizon
                .unwrap_or_else(|| default_horizon(&self.scenario.model, self.scenario.rho)),
            dt: self.grid.dt,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for name in presets::NAMES {
            let cfg = RunConfig::preset(name).unwrap();
            cfg.validate().unwrap();
            let text = cfg.to_json();
            assert_eq!(RunConfig::parse(&text).unwrap().to_json(), text);
        }
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = RunConfig::parse("{\n  \"scenario\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
