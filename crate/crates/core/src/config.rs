//! JSON configuration file. Every section and field is optional; missing values take the
//! reference defaults. Unknown keys are rejected.
//!
//! ```json
//! {
//!   "aircraft":   { "mass": 1.2 },
//!   "spring":     { "max_travel": 0.35 },
//!   "controller": { "outer": { "ffwd_gain": 1.2 }, "slide_travel": 3.7 },
//!   "simulation": { "design": { "dt": 1e-4 }, "takeoff": { "initial_slack": 1.0 } }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::controller::ControllerParams;
use crate::error::ConfigError;
use crate::params::{
    AircraftParams, AmbientParams, InitConditions, SlidePlantParams, SpringParams, SystemParams,
    TetherParams, WinchParams,
};
use crate::spring_design::StudySettings;
use crate::takeoff::TakeoffConfig;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub design: StudySettings,
    pub initial: InitConditions,
    pub takeoff: TakeoffConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub aircraft: AircraftParams,
    pub tether: TetherParams,
    pub spring: SpringParams,
    pub winch: WinchParams,
    pub slide: SlidePlantParams,
    pub ambient: AmbientParams,
    pub controller: ControllerParams,
    pub simulation: SimulationConfig,
}

impl Config {
    pub fn system(&self) -> SystemParams {
        SystemParams {
            aircraft: self.aircraft,
            tether: self.tether,
            spring: self.spring,
            winch: self.winch,
            slide: self.slide,
            ambient: self.ambient,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let sys = self.system();
        sys.validate()?;
        self.controller.validate(sys.spring.max_travel)?;
        self.simulation.design.validate()?;
        self.simulation.initial.validate()?;
        self.simulation.takeoff.validate(&sys, &self.controller)?;
        Ok(())
    }

    /// Parse and validate. Blank input yields the defaults.
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: Config = if text.trim().is_empty() {
            Config::default()
        } else {
            serde_json::from_str(text)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }
}

pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Config::from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_defaults() {
        let c = Config::from_json_str("").unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(Config::from_json_str("{}").unwrap(), Config::default());
        assert_eq!(c.aircraft.mass, 1.2);
        assert_eq!(c.controller.outer.fbck_max, 120.0);
        assert_eq!(c.controller.slide_travel, 3.7);
    }

    #[test]
    fn negative_travel_rejected_by_name() {
        let err = Config::from_json_str(r#"{"spring": {"max_travel": -1}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("spring.max_travel"), "{msg}");
        assert!(msg.contains("> 0"), "{msg}");
    }

    #[test]
    fn unknown_key_rejected() {
        let err = Config::from_json_str(r#"{"foo": 1}"#).unwrap_err();
        assert!(matches!(err, ConfigError::Parse { .. }));
        assert!(err.to_string().contains("foo"));
        let err = Config::from_json_str("{\n  \"spring\": {\"bar\": 2}\n}").unwrap_err();
        match err {
            ConfigError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn partial_section_keeps_other_defaults() {
        let c = Config::from_json_str(r#"{"spring": {"max_travel": 0.2}}"#).unwrap();
        assert_eq!(c.spring.max_travel, 0.2);
        assert_eq!(c.spring.stiffness, 70.0);
    }

    #[test]
    fn cross_section_bounds_checked() {
        // zone C threshold must sit inside the spring travel
        assert!(Config::from_json_str(r#"{"spring": {"max_travel": 0.08}}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let c = Config::default();
        assert_eq!(Config::from_json_str(&c.to_json_pretty()).unwrap(), c);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_config(Path::new("/nonexistent/cfg.json")).unwrap_err();
        assert!(matches!(err, ConfigError::Io { .. }));
    }
}
