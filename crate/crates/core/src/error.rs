use std::path::PathBuf;

use thiserror::Error;

/// A parameter violated its documented bound.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameter {field}: must be {bound}, got {value}")]
pub struct ParamError {
    pub field: &'static str,
    pub bound: &'static str,
    pub value: f64,
}

impl ParamError {
    pub fn new(field: &'static str, bound: &'static str, value: f64) -> Self {
        Self {
            field,
            bound,
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("degenerate tether length {0} m (must be > 0)")]
    DegenerateTetherLength(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("integration blew up at t = {time} s: non-finite state component {component}")]
    NonFinite { time: f64, component: usize },
    #[error("slide overshoot: position {position} m exceeds rail length {rail_length} m at t = {time} s")]
    SlideOvershoot {
        time: f64,
        position: f64,
        rail_length: f64,
    },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] ParamError),
}

impl From<serde_json::Error> for ConfigError {
    fn from(e: serde_json::Error) -> Self {
        ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
