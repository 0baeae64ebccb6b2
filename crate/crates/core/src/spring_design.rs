//! Feasibility test for a spring travel/stiffness pair, and grid sweeps over such pairs.
//!
//! A design is feasible when, after an initial winch speed deficit loads the tether, the
//! aircraft never drops below its minimum cruise speed before the tether is released again.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ParamError, SimError};
use crate::integrator::{
    simulate, StopCondition, StopPredicate, Trace, TraceOutcome, DEFAULT_DESIGN_DT,
    DEFAULT_FORCE_TOLERANCE,
};
use crate::model::initial_state;
use crate::params::{positive, InitConditions, SystemParams};

/// Numerical settings of the design study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudySettings {
    pub dt: f64,
    pub max_time: f64,
    pub force_tolerance: f64,
}

impl Default for StudySettings {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DESIGN_DT,
            max_time: 10.0,
            force_tolerance: DEFAULT_FORCE_TOLERANCE,
        }
    }
}

impl StudySettings {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("simulation.design.dt", self.dt)?;
        positive("simulation.design.max_time", self.max_time)?;
        positive("simulation.design.force_tolerance", self.force_tolerance)
    }

    pub fn stop_condition(&self) -> StopCondition {
        StopCondition {
            max_time: self.max_time,
            predicate: StopPredicate::TetherReleased {
                force_tolerance: self.force_tolerance,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub min_speed: f64,
    pub t_at_min: f64,
    /// Release instant; `None` when the run timed out or the tether never pulled.
    pub t_star: Option<f64>,
    /// The tether pulled but was not released within the horizon.
    pub timed_out: bool,
    pub feasible: bool,
    pub compression_cycles: usize,
}

/// Number of compression strokes whose rise from the preceding trough exceeds `threshold`.
/// Excursions smaller than `threshold` in either direction are treated as chatter.
pub fn count_compression_cycles(compression: &[f64], threshold: f64) -> usize {
    let mut cycles = 0;
    let mut rising = false;
    let mut trough = compression.first().copied().unwrap_or(0.0);
    let mut peak = trough;
    for &x in compression {
        if rising {
            peak = peak.max(x);
            if x < peak - threshold {
                rising = false;
                trough = x;
            }
        } else {
            trough = trough.min(x);
            if x > trough + threshold {
                rising = true;
                peak = x;
                cycles += 1;
            }
        }
    }
    cycles
}

/// Extract the feasibility figures from a finished design trace.
pub fn assess_trace(params: &SystemParams, trace: &Trace) -> FeasibilityResult {
    let (mut min_speed, mut t_at_min) = (f64::INFINITY, 0.0);
    for (t, s) in trace.times.iter().zip(&trace.states) {
        if s.speed < min_speed {
            min_speed = s.speed;
            t_at_min = *t;
        }
    }
    let compressions: Vec<f64> = trace.states.iter().map(|s| s.spring_compression).collect();
    let compression_cycles = count_compression_cycles(&compressions, params.spring.endstop_margin);
    let above_min = min_speed >= params.aircraft.min_cruise_speed;
    let (t_star, timed_out, feasible) = match trace.outcome {
        TraceOutcome::Stopped { time } => (Some(time), false, above_min),
        // Never excited: the whole horizon counts.
        TraceOutcome::Timeout { loaded: false } => (None, false, above_min),
        TraceOutcome::Timeout { loaded: true } => (None, true, false),
    };
    FeasibilityResult {
        min_speed,
        t_at_min,
        t_star,
        timed_out,
        feasible,
        compression_cycles,
    }
}

/// Run the design model and judge the spring. Returns the trace alongside the result.
pub fn evaluate_spring_traced(
    params: &SystemParams,
    ic: &InitConditions,
    settings: &StudySettings,
) -> Result<(FeasibilityResult, Trace), SimError> {
    params.validate()?;
    ic.validate()?;
    settings.validate()?;
    let s0 = initial_state(ic, &params.winch);
    let trace = simulate(params, s0, settings.dt, &settings.stop_condition())?;
    Ok((assess_trace(params, &trace), trace))
}

pub fn evaluate_spring(
    params: &SystemParams,
    ic: &InitConditions,
    settings: &StudySettings,
) -> Result<FeasibilityResult, SimError> {
    evaluate_spring_traced(params, ic, settings).map(|(r, _)| r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub travel_values: Vec<f64>,
    pub stiffness_values: Vec<f64>,
    pub params: SystemParams,
    pub init: InitConditions,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.travel_values.is_empty() {
            return Err(ParamError::new("sweep.travel_values", "non-empty", 0.0));
        }
        if self.stiffness_values.is_empty() {
            return Err(ParamError::new("sweep.stiffness_values", "non-empty", 0.0));
        }
        for &t in &self.travel_values {
            positive("sweep.travel_values", t)?;
        }
        for &k in &self.stiffness_values {
            positive("sweep.stiffness_values", k)?;
        }
        Ok(())
    }

    /// Grid points in row-major order (travel outer, stiffness inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.travel_values
            .iter()
            .flat_map(|&t| self.stiffness_values.iter().map(move |&k| (t, k)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub travel: f64,
    pub stiffness: f64,
    pub result: Result<FeasibilityResult, SimError>,
}

/// Evaluate every grid point. Per-point failures are recorded and the sweep continues.
/// Parallel and serial execution give identical results in grid order.
pub fn sweep(
    grid: &SweepGrid,
    settings: &StudySettings,
    parallel: bool,
) -> Result<Vec<SweepPoint>, ParamError> {
    grid.validate()?;
    let eval = |&(travel, stiffness): &(f64, f64)| SweepPoint {
        travel,
        stiffness,
        result: evaluate_spring(
            &grid.params.with_spring(travel, stiffness),
            &grid.init,
            settings,
        ),
    };
    let points = grid.points();
    Ok(if parallel {
        points.par_iter().map(eval).collect()
    } else {
        points.iter().map(eval).collect()
    })
}
