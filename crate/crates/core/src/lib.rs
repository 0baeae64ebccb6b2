//! Simulation library for a tethered-aircraft take-off ground station: a 1-D model of
//! aircraft, elastic tether, buffer spring and winch; an RK4 integrator; the spring design
//! study; the slide/winch controller; and the closed-loop take-off run.

// `!(x > bound)` is used on purpose in validation so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod controller;
pub mod error;
pub mod integrator;
pub mod io;
pub mod model;
pub mod params;
pub mod spring_design;
pub mod takeoff;
pub mod validation;

pub use config::{load_config, Config};
pub use controller::{ControllerParams, GroundStationController};
pub use error::{ConfigError, ModelError, ParamError, SimError};
pub use integrator::{simulate, StopCondition, Trace, TraceOutcome};
pub use model::DesignState;
pub use params::{InitConditions, SystemParams};
pub use spring_design::{evaluate_spring, sweep, FeasibilityResult, StudySettings, SweepGrid};
pub use takeoff::{run_takeoff, TakeoffConfig, TakeoffResult};
