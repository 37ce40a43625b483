//! The JSON run configuration.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::factorization::PolarGrid;
use crate::fields::{DipoleParams, FieldConfiguration, Vec3};
use crate::holonomy::{LoopPath, Orientation, TimeLeg};

/// A configuration problem, reported with the path of the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config: {}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Phase,
    Verify,
    Potential,
    DiagnoseFactorization,
    Sweep,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExperimentKind::Phase => "phase",
            ExperimentKind::Verify => "verify",
            ExperimentKind::Potential => "potential",
            ExperimentKind::DiagnoseFactorization => "diagnose-factorization",
            ExperimentKind::Sweep => "sweep",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldVariant {
    Wei,
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsConfig {
    pub variant: FieldVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<[f64; 3]>,
}

impl FieldsConfig {
    pub fn wei(lambda: f64, b0: f64) -> Self {
        FieldsConfig { variant: FieldVariant::Wei, lambda: Some(lambda), b0: Some(b0), e: None, b: None }
    }

    pub fn build(&self) -> Result<FieldConfiguration, ConfigError> {
        match self.variant {
            FieldVariant::Wei => {
                for (key, present) in [("e", self.e.is_some()), ("b", self.b.is_some())] {
                    if present {
                        return Err(ConfigError::new(format!("fields.{key}"), "not used by the wei variant"));
                    }
                }
                let lambda = self.lambda.ok_or_else(|| ConfigError::new("fields.lambda", "required for the wei variant"))?;
                let b0 = self.b0.ok_or_else(|| ConfigError::new("fields.b0", "required for the wei variant"))?;
                finite("fields.lambda", lambda)?;
                finite("fields.b0", b0)?;
                Ok(FieldConfiguration::Wei { lambda, b0 })
            }
            FieldVariant::Uniform => {
                for (key, present) in [("lambda", self.lambda.is_some()), ("b0", self.b0.is_some())] {
                    if present {
                        return Err(ConfigError::new(format!("fields.{key}"), "not used by the uniform variant"));
                    }
                }
                let e = self.e.unwrap_or_default();
                let b = self.b.unwrap_or_default();
                for (k, x) in e.iter().enumerate() {
                    finite(&format!("fields.e[{k}]"), *x)?;
                }
                for (k, x) in b.iter().enumerate() {
                    finite(&format!("fields.b[{k}]"), *x)?;
                }
                Ok(FieldConfiguration::Uniform { e: Vec3::from(e), b: Vec3::from(b) })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopConfig {
    #[serde(default = "LoopConfig::default_radius")]
    pub radius: f64,
    #[serde(default = "LoopConfig::default_segments")]
    pub segments: usize,
    /// `+1` counterclockwise, `−1` clockwise.
    #[serde(default = "LoopConfig::default_orientation")]
    pub orientation: i32,
}

impl LoopConfig {
    fn default_radius() -> f64 {
        1.0
    }
    fn default_segments() -> usize {
        1000
    }
    fn default_orientation() -> i32 {
        1
    }

    pub fn build(&self) -> Result<LoopPath, ConfigError> {
        finite("loop.radius", self.radius)?;
        let orientation = Orientation::from_sign(self.orientation)
            .ok_or_else(|| ConfigError::new("loop.orientation", "must be +1 or -1"))?;
        let path = LoopPath::circle(self.radius, self.segments).map_err(|e| {
            let key = if self.segments == 0 { "loop.segments" } else { "loop.radius" };
            ConfigError::new(key, e.to_string())
        })?;
        Ok(path.with_orientation(orientation))
    }
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig {
            radius: Self::default_radius(),
            segments: Self::default_segments(),
            orientation: Self::default_orientation(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeLegConfig {
    #[serde(default)]
    pub tau: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub nr: usize,
    #[serde(default = "GridConfig::default_nphi")]
    pub nphi: usize,
}

impl GridConfig {
    fn default_nphi() -> usize {
        16
    }

    pub fn build(&self) -> Result<PolarGrid, ConfigError> {
        finite("grid.r_min", self.r_min)?;
        finite("grid.r_max", self.r_max)?;
        PolarGrid::new(self.r_min, self.r_max, self.nr, self.nphi).map_err(|e| ConfigError::new("grid", e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Number of loop segments.
    Segments,
    /// Loop radius.
    Radius,
    /// Grid refinement factor applied to `grid.nr − 1` and `grid.nphi`.
    Grid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// Everything a single run needs. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<FieldsConfig>,
    #[serde(default)]
    pub params: DipoleParams,
    #[serde(default, rename = "loop")]
    pub loop_path: LoopConfig,
    #[serde(default)]
    pub time_leg: TimeLegConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of random draws for `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    /// Output directory; not echoed into results.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_DRAWS: usize = 100;

impl RunConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        RunConfig {
            experiment,
            fields: None,
            params: DipoleParams::default(),
            loop_path: LoopConfig::default(),
            time_leg: TimeLegConfig::default(),
            grid: None,
            seed: None,
            draws: None,
            sweep: None,
            out: None,
        }
    }

    /// Parses JSON, reporting the key path of the first schema violation.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::new(path, e.into_inner().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.params;
        for (key, x) in [("params.m", p.m), ("params.alpha_pol", p.alpha_pol), ("params.chi", p.chi), ("params.mu", p.mu)] {
            finite(key, x)?;
        }
        if p.m < 0.0 {
            return Err(ConfigError::new("params.m", "must be non-negative"));
        }
        if let Some(f) = &self.fields {
            f.build()?;
        }
        self.loop_path.build()?;
        self.time_leg()?;
        if let Some(g) = &self.grid {
            g.build()?;
        }

        match self.experiment {
            ExperimentKind::Phase => {
                self.require_fields()?;
            }
            ExperimentKind::Verify => {
                if self.seed.is_none() {
                    return Err(ConfigError::new("seed", "randomized verification requires a seed"));
                }
                if self.draws == Some(0) {
                    return Err(ConfigError::new("draws", "must be at least 1"));
                }
            }
            ExperimentKind::Potential => {
                if self.require_fields()?.wei_parameters().is_none() {
                    return Err(ConfigError::new("fields.variant", "the potential profile needs the wei variant"));
                }
                self.require_grid()?;
            }
            ExperimentKind::DiagnoseFactorization => {
                if self.require_fields()?.wei_parameters().is_none() {
                    return Err(ConfigError::new("fields.variant", "the factorization diagnostics need the wei variant"));
                }
                self.require_grid()?;
            }
            ExperimentKind::Sweep => self.validate_sweep()?,
        }
        Ok(())
    }

    fn validate_sweep(&self) -> Result<(), ConfigError> {
        let sweep = self.sweep.as_ref().ok_or_else(|| ConfigError::new("sweep", "required for the sweep experiment"))?;
        if sweep.values.len() < 3 {
            return Err(ConfigError::new("sweep.values", format!("need at least 3 points, got {}", sweep.values.len())));
        }
        for (k, v) in sweep.values.iter().enumerate() {
            let key = format!("sweep.values[{k}]");
            finite(&key, *v)?;
            if *v <= 0.0 {
                return Err(ConfigError::new(key, "must be positive"));
            }
            if matches!(sweep.axis, SweepAxis::Segments | SweepAxis::Grid) && v.fract() != 0.0 {
                return Err(ConfigError::new(key, "must be an integer for this axis"));
            }
        }
        let fields = self.require_fields()?;
        match sweep.axis {
            SweepAxis::Segments | SweepAxis::Radius => {
                if fields.wei_parameters().is_none() {
                    return Err(ConfigError::new("fields.variant", "segment and radius sweeps compare against the wei closed form"));
                }
            }
            SweepAxis::Grid => {
                self.require_grid()?;
            }
        }
        Ok(())
    }

    pub fn require_fields(&self) -> Result<FieldConfiguration, ConfigError> {
        self.fields
            .as_ref()
            .ok_or_else(|| ConfigError::new("fields", "required for this experiment"))?
            .build()
    }

    pub fn require_grid(&self) -> Result<PolarGrid, ConfigError> {
        self.grid
            .as_ref()
            .ok_or_else(|| ConfigError::new("grid", "required for this experiment"))?
            .build()
    }

    pub fn time_leg(&self) -> Result<TimeLeg, ConfigError> {
        TimeLeg::new(self.time_leg.tau).map_err(|e| ConfigError::new("time_leg.tau", e.to_string()))
    }

    pub fn params(&self) -> DipoleParams {
        self.params
    }

    /// Fills defaults that depend on the experiment so the echoed config is
    /// complete.
    pub fn resolved(&self) -> RunConfig {
        let mut c = self.clone();
        if c.experiment == ExperimentKind::Verify && c.draws.is_none() {
            c.draws = Some(DEFAULT_DRAWS);
        }
        c
    }
}

fn finite(key: &str, x: f64) -> Result<(), ConfigError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(key, format!("must be finite, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_phase_config() {
        let c = RunConfig::from_json(
            r#"{"experiment": "phase", "fields": {"variant": "wei", "lambda": 1, "b0": 1}, "params": {"alpha_pol": 1}}"#,
        )
        .unwrap();
        assert_eq!(c.experiment, ExperimentKind::Phase);
        assert_eq!(c.loop_path, LoopConfig::default());
        assert_eq!(c.params.alpha_pol, 1.0);
    }

    #[test]
    fn unknown_key_reports_path() {
        let err = RunConfig::from_json(r#"{"experiment": "phase", "params": {"alpha": 1}}"#).unwrap_err();
        assert_eq!(err.path, "params.alpha");
        assert!(err.message.contains("alpha"), "{err}");

        let err = RunConfig::from_json(r#"{"experiment": "phase", "bogus": 3}"#).unwrap_err();
        assert!(err.message.contains("bogus"), "{err}");
    }

    #[test]
    fn wei_requires_lambda_and_b0() {
        let err = RunConfig::from_json(r#"{"experiment": "phase", "fields": {"variant": "wei", "b0": 1}}"#).unwrap_err();
        assert_eq!(err.path, "fields.lambda");
        let err = RunConfig::from_json(r#"{"experiment": "phase", "fields": {"variant": "wei", "lambda": 1}}"#).unwrap_err();
        assert_eq!(err.path, "fields.b0");
    }

    #[test]
    fn rejects_bad_values() {
        let err = RunConfig::from_json(r#"{"experiment": "verify"}"#).unwrap_err();
        assert_eq!(err.path, "seed");
        let err = RunConfig::from_json(r#"{"experiment": "phase", "fields": {"variant": "wei", "lambda": 1, "b0": 1}, "loop": {"orientation": 2}}"#)
            .unwrap_err();
        assert_eq!(err.path, "loop.orientation");
        let err = RunConfig::from_json(r#"{"experiment": "phase", "fields": {"variant": "wei", "lambda": 1e999, "b0": 1}}"#)
            .unwrap_err();
        assert!(err.path.starts_with("fields.lambda"), "{err}");
        let err = RunConfig::from_json(
            r#"{"experiment": "sweep", "fields": {"variant": "wei", "lambda": 1, "b0": 1}, "sweep": {"axis": "segments", "values": [10, 100]}}"#,
        )
        .unwrap_err();
        assert_eq!(err.path, "sweep.values");
        let err = RunConfig::from_json(r#"{"experiment": "phase", "fields": {"variant": "wei", "lambda": 1, "b0": 1}, "params": {"m": -1}}"#)
            .unwrap_err();
        assert_eq!(err.path, "params.m");
    }

    #[test]
    fn resolved_fills_draws() {
        let c = RunConfig::from_json(r#"{"experiment": "verify", "seed": 1}"#).unwrap();
        assert_eq!(c.resolved().draws, Some(DEFAULT_DRAWS));
    }
}
