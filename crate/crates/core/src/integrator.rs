//! Fixed-step RK4 integration of the design model with a stop predicate.

use serde::Serialize;

use crate::error::SimError;
use crate::model::{design_derivatives, tether_coupling, DesignState, DESIGN_STATE_DIM};
use crate::params::SystemParams;

/// Default design-study step [s].
pub const DEFAULT_DESIGN_DT: f64 = 1e-4;
/// Force below which the tether counts as released [N].
pub const DEFAULT_FORCE_TOLERANCE: f64 = 1e-6;

/// One classical Runge–Kutta step of `y' = f(y)`.
pub fn rk4_step<const N: usize, E, F>(mut f: F, y: &[f64; N], dt: f64) -> Result<[f64; N], E>
where
    F: FnMut(&[f64; N]) -> Result<[f64; N], E>,
{
    let offset = |base: &[f64; N], k: &[f64; N], h: f64| {
        let mut out = *base;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += h * ki;
        }
        out
    };
    let k1 = f(y)?;
    let k2 = f(&offset(y, &k1, 0.5 * dt))?;
    let k3 = f(&offset(y, &k2, 0.5 * dt))?;
    let k4 = f(&offset(y, &k3, dt))?;
    let mut out = *y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Hard bumper: keep the compression in `[0, max_travel]`, dropping velocity into the stop.
pub fn project_spring(compression: &mut f64, rate: &mut f64, max_travel: f64) {
    if *compression < 0.0 {
        *compression = 0.0;
        *rate = rate.max(0.0);
    } else if *compression > max_travel {
        *compression = max_travel;
        *rate = rate.min(0.0);
    }
}

pub(crate) fn check_finite<const N: usize>(y: &[f64; N], time: f64) -> Result<(), SimError> {
    match y.iter().position(|v| !v.is_finite()) {
        Some(component) => Err(SimError::NonFinite { time, component }),
        None => Ok(()),
    }
}

/// RK4 step of the design model followed by the spring projection.
pub fn design_step(
    params: &SystemParams,
    state: &DesignState,
    dt: f64,
    time: f64,
) -> Result<DesignState, SimError> {
    let y = state.to_array();
    let next: [f64; DESIGN_STATE_DIM] = rk4_step(
        |y: &[f64; DESIGN_STATE_DIM]| {
            design_derivatives(&DesignState::from_array(*y), params).map(DesignState::to_array)
        },
        &y,
        dt,
    )?;
    check_finite(&next, time)?;
    let mut s = DesignState::from_array(next);
    project_spring(
        &mut s.spring_compression,
        &mut s.spring_speed,
        params.spring.max_travel,
    );
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopPredicate {
    /// Run until `max_time`.
    Never,
    /// First instant at which the force is below `force_tolerance`, the winch pays out at
    /// least as fast as the aircraft flies, and the force was positive earlier.
    TetherReleased { force_tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopCondition {
    pub max_time: f64,
    pub predicate: StopPredicate,
}

impl StopCondition {
    pub fn released(max_time: f64) -> Self {
        Self {
            max_time,
            predicate: StopPredicate::TetherReleased {
                force_tolerance: DEFAULT_FORCE_TOLERANCE,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TraceOutcome {
    /// The predicate fired at `time`, the last logged step.
    Stopped { time: f64 },
    /// `max_time` reached; `loaded` tells whether the tether ever pulled.
    Timeout { loaded: bool },
}

/// Time-indexed log of the design simulation on a uniform grid `t_k = k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<DesignState>,
    pub tether_force: Vec<f64>,
    pub tether_length: Vec<f64>,
    pub outcome: TraceOutcome,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &DesignState {
        self.states
            .last()
            .expect("trace always holds the initial state")
    }
}

pub fn simulate(
    params: &SystemParams,
    init: DesignState,
    dt: f64,
    stop: &StopCondition,
) -> Result<Trace, SimError> {
    assert!(
        dt > 0.0 && stop.max_time > 0.0,
        "dt and max_time must be positive"
    );
    let steps = (stop.max_time / dt).ceil() as usize;
    let mut trace = Trace {
        dt,
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        tether_force: Vec::with_capacity(steps + 1),
        tether_length: Vec::with_capacity(steps + 1),
        outcome: TraceOutcome::Timeout { loaded: false },
    };
    let mut state = init;
    let mut loaded = false;
    for k in 0..=steps {
        let time = k as f64 * dt;
        if k > 0 {
            state = design_step(params, &state, dt, time)?;
        }
        let c = tether_coupling(&state, params)?;
        trace.times.push(time);
        trace.states.push(state);
        trace.tether_force.push(c.force);
        trace.tether_length.push(c.length);

        if let StopPredicate::TetherReleased { force_tolerance } = stop.predicate {
            let winch_fast = params.winch.radius * state.winch_speed >= state.speed;
            if loaded && c.force < force_tolerance && winch_fast {
                trace.outcome = TraceOutcome::Stopped { time };
                return Ok(trace);
            }
        }
        loaded |= c.force > 0.0;
    }
    trace.outcome = TraceOutcome::Timeout { loaded };
    Ok(trace)
}
