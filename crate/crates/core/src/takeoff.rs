//! Closed-loop take-off: slide acceleration, lift-off, and climb along a straight ray, with
//! the ground-station controller sampled every `T_s` and the plant integrated with RK4 at a
//! finer step under zero-order-hold torques.

use serde::{Deserialize, Serialize};

use crate::controller::{
    ControlOutput, ControllerParams, GroundStationController, Measurements, Zone,
};
use crate::error::{ParamError, SimError};
use crate::integrator::{check_finite, project_spring, rk4_step};
use crate::model::{drag_force, effective_tether_length, spring_acceleration, tether_force};
use crate::params::{positive, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TakeoffConfig {
    /// Aircraft speed at which it leaves the slide [m/s].
    pub takeoff_speed: f64,
    /// Climb angle of the flight path after lift-off [deg].
    pub climb_angle_deg: f64,
    /// Extra tether deployed before the run [m].
    pub initial_slack: f64,
    /// Tether path length between winch and aircraft at the start, without slack [m].
    pub initial_distance: f64,
    /// Plant integration step [s].
    pub dt: f64,
    /// Simulated duration [s].
    pub duration: f64,
}

impl Default for TakeoffConfig {
    fn default() -> Self {
        Self {
            takeoff_speed: 9.0,
            climb_angle_deg: 30.0,
            initial_slack: 1.0,
            initial_distance: 2.0,
            dt: 1e-4,
            duration: 5.0,
        }
    }
}

impl TakeoffConfig {
    pub fn validate(&self, sys: &SystemParams, ctrl: &ControllerParams) -> Result<(), ParamError> {
        if !(self.takeoff_speed > sys.aircraft.min_cruise_speed) {
            return Err(ParamError::new(
                "simulation.takeoff.takeoff_speed",
                "> aircraft.min_cruise_speed",
                self.takeoff_speed,
            ));
        }
        if !(self.climb_angle_deg >= 0.0 && self.climb_angle_deg < 90.0) {
            return Err(ParamError::new(
                "simulation.takeoff.climb_angle_deg",
                "in [0, 90)",
                self.climb_angle_deg,
            ));
        }
        if !(self.initial_slack >= 0.0) {
            return Err(ParamError::new(
                "simulation.takeoff.initial_slack",
                ">= 0",
                self.initial_slack,
            ));
        }
        positive("simulation.takeoff.initial_distance", self.initial_distance)?;
        positive("simulation.takeoff.dt", self.dt)?;
        positive("simulation.takeoff.duration", self.duration)?;
        if !(self.dt <= ctrl.outer.sample_period) {
            return Err(ParamError::new(
                "simulation.takeoff.dt",
                "<= controller.outer.sample_period",
                self.dt,
            ));
        }
        if !(ctrl.slide_travel <= sys.slide.rail_length) {
            return Err(ParamError::new(
                "controller.slide_travel (L)",
                "<= slide.rail_length",
                ctrl.slide_travel,
            ));
        }
        Ok(())
    }

    /// Plant substeps per control period.
    pub fn substeps(&self, sample_period: f64) -> usize {
        ((sample_period / self.dt).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    OnSlide,
    Airborne,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::OnSlide => "on_slide",
            Phase::Airborne => "airborne",
        }
    }
}

const PLANT_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlantState {
    pub phase: Phase,
    pub slide_angle: f64,
    pub slide_speed: f64,
    pub winch_angle: f64,
    pub winch_speed: f64,
    pub spring_compression: f64,
    pub spring_speed: f64,
    /// Distance of the aircraft from the winch along the tether path [m].
    pub aircraft_distance: f64,
    pub aircraft_speed: f64,
}

impl PlantState {
    fn to_array(self) -> [f64; PLANT_DIM] {
        [
            self.slide_angle,
            self.slide_speed,
            self.winch_angle,
            self.winch_speed,
            self.spring_compression,
            self.spring_speed,
            self.aircraft_distance,
            self.aircraft_speed,
        ]
    }

    fn with_array(self, a: [f64; PLANT_DIM]) -> Self {
        Self {
            phase: self.phase,
            slide_angle: a[0],
            slide_speed: a[1],
            winch_angle: a[2],
            winch_speed: a[3],
            spring_compression: a[4],
            spring_speed: a[5],
            aircraft_distance: a[6],
            aircraft_speed: a[7],
        }
    }
}

/// Mechanical power of a motor; negative while braking.
pub fn motor_power(torque: f64, speed: f64) -> f64 {
    torque * speed
}

/// Deployed tether in excess of the aircraft distance; negative when the tether is stretched.
pub fn slack_estimate(aircraft_distance: f64, tether_length: f64) -> f64 {
    tether_length - aircraft_distance
}

/// One logged control step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TakeoffRow {
    pub t: f64,
    pub slide_angle: f64,
    pub slide_speed: f64,
    pub winch_angle: f64,
    pub winch_speed: f64,
    pub spring_compression: f64,
    pub aircraft_distance: f64,
    pub aircraft_speed: f64,
    pub tether_length: f64,
    pub tether_force: f64,
    pub slide_torque: f64,
    pub winch_torque: f64,
    pub slide_power: f64,
    pub winch_power: f64,
    pub zone: Zone,
    pub phase: Phase,
    #[serde(skip)]
    pub winch_ref: f64,
    #[serde(skip)]
    pub ffwd_ref: f64,
    #[serde(skip)]
    pub fbck_ref: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TakeoffResult {
    pub liftoff_time: Option<f64>,
    /// Slide travel at lift-off [m].
    pub liftoff_distance: Option<f64>,
    pub peak_slide_power: f64,
    pub peak_winch_power: f64,
    pub max_spring_compression: f64,
    /// First instant the spring sat at full compression with the force still rising.
    pub stall_risk: Option<f64>,
    /// First contiguous interval during which the issued winch reference came from the
    /// feedforward path.
    pub ffwd_dominance: Option<(f64, f64)>,
    pub first_zone_c: Option<f64>,
    /// Slide motor energy delivered up to lift-off [J].
    pub slide_energy_to_liftoff: f64,
    /// Kinetic energy of the lumped slide mass at lift-off [J].
    pub kinetic_energy_at_liftoff: f64,
    #[serde(skip)]
    pub slack_estimate: Vec<f64>,
    #[serde(skip)]
    pub trace: Vec<TakeoffRow>,
}

struct Plant<'a> {
    sys: &'a SystemParams,
    cfg: &'a TakeoffConfig,
    climb_sin: f64,
}

impl Plant<'_> {
    fn tether(&self, a: &[f64; PLANT_DIM]) -> Result<(f64, f64), SimError> {
        let length = effective_tether_length(&self.sys.winch, a[2], a[4]);
        Ok((tether_force(&self.sys.tether, a[6], length)?, length))
    }

    fn derivatives(
        &self,
        phase: Phase,
        a: &[f64; PLANT_DIM],
        slide_u: f64,
        winch_u: f64,
    ) -> Result<[f64; PLANT_DIM], SimError> {
        let sys = self.sys;
        let (force, _) = self.tether(a)?;
        let rs = sys.slide.drum_radius;
        let ac = &sys.aircraft;
        let drag = drag_force(ac, &sys.ambient, a[7]);
        let thrust = ac.max_thrust;

        let slide_accel;
        let aircraft_accel;
        match phase {
            Phase::OnSlide => {
                let inertia = sys.slide.equivalent_mass * rs * rs;
                slide_accel = (slide_u - sys.slide.rot_friction * a[1]
                    + rs * (thrust - drag - force))
                    / inertia;
                aircraft_accel = rs * slide_accel;
            }
            Phase::Airborne => {
                let inertia = (sys.slide.equivalent_mass - ac.mass) * rs * rs;
                slide_accel = (slide_u - sys.slide.rot_friction * a[1]) / inertia;
                let gravity = ac.mass * sys.ambient.gravity * self.climb_sin;
                aircraft_accel = (thrust - drag - gravity - force) / ac.mass;
            }
        }
        let w = &sys.winch;
        let winch_accel = (winch_u + w.radius * force - w.rot_friction * a[3]) / w.inertia;
        let spring_accel = spring_acceleration(&sys.spring, a[4], a[5], force);
        Ok([
            a[1],
            slide_accel,
            a[3],
            winch_accel,
            a[5],
            spring_accel,
            a[7],
            aircraft_accel,
        ])
    }

    fn tie_to_slide(&self, s: &mut PlantState) {
        let rs = self.sys.slide.drum_radius;
        s.aircraft_distance = self.cfg.initial_distance + rs * s.slide_angle;
        s.aircraft_speed = rs * s.slide_speed;
    }
}

/// Simulate a take-off maneuver with the controller in the loop.
pub fn run_takeoff(
    cfg: &TakeoffConfig,
    sys: &SystemParams,
    ctrl: &ControllerParams,
) -> Result<TakeoffResult, SimError> {
    sys.validate()?;
    ctrl.validate(sys.spring.max_travel)?;
    cfg.validate(sys, ctrl)?;

    let plant = Plant {
        sys,
        cfg,
        climb_sin: cfg.climb_angle_deg.to_radians().sin(),
    };
    let ts = ctrl.outer.sample_period;
    let substeps = cfg.substeps(ts);
    let dt = ts / substeps as f64;
    let steps = (cfg.duration / ts).round() as usize;
    let rs = sys.slide.drum_radius;
    let max_travel = sys.spring.max_travel;

    let mut state = PlantState {
        phase: Phase::OnSlide,
        slide_angle: 0.0,
        slide_speed: 0.0,
        winch_angle: (cfg.initial_distance + cfg.initial_slack) / sys.winch.radius,
        winch_speed: 0.0,
        spring_compression: 0.0,
        spring_speed: 0.0,
        aircraft_distance: cfg.initial_distance,
        aircraft_speed: 0.0,
    };
    let mut controller = GroundStationController::takeoff(*ctrl, rs, state.spring_compression);

    let mut trace = Vec::with_capacity(steps + 1);
    let mut liftoff = None;
    let mut stall_risk = None;
    let mut slide_energy = 0.0;
    let (mut prev_force, _) = plant.tether(&state.to_array())?;

    for k in 0..=steps {
        let t = k as f64 * ts;
        let out: ControlOutput = controller.step(&Measurements {
            slide_angle: state.slide_angle,
            slide_speed: state.slide_speed,
            winch_speed: state.winch_speed,
            spring_compression: state.spring_compression,
        });
        let (force, length) = plant.tether(&state.to_array())?;
        trace.push(TakeoffRow {
            t,
            slide_angle: state.slide_angle,
            slide_speed: state.slide_speed,
            winch_angle: state.winch_angle,
            winch_speed: state.winch_speed,
            spring_compression: state.spring_compression,
            aircraft_distance: state.aircraft_distance,
            aircraft_speed: state.aircraft_speed,
            tether_length: length,
            tether_force: force,
            slide_torque: out.slide_torque,
            winch_torque: out.winch_torque,
            slide_power: motor_power(out.slide_torque, state.slide_speed),
            winch_power: motor_power(out.winch_torque, state.winch_speed),
            zone: out.zone,
            phase: state.phase,
            winch_ref: out.winch_ref,
            ffwd_ref: out.ffwd_ref,
            fbck_ref: out.fbck_ref,
        });
        if k == steps {
            break;
        }

        for j in 0..substeps {
            let time = t + (j + 1) as f64 * dt;
            let phase = state.phase;
            if phase == Phase::OnSlide {
                slide_energy += motor_power(out.slide_torque, state.slide_speed) * dt;
            }
            let next = rk4_step(
                |a: &[f64; PLANT_DIM]| {
                    plant.derivatives(phase, a, out.slide_torque, out.winch_torque)
                },
                &state.to_array(),
                dt,
            )?;
            check_finite(&next, time)?;
            state = state.with_array(next);
            project_spring(
                &mut state.spring_compression,
                &mut state.spring_speed,
                max_travel,
            );
            if state.phase == Phase::OnSlide {
                plant.tie_to_slide(&mut state);
                if state.aircraft_speed >= cfg.takeoff_speed {
                    state.phase = Phase::Airborne;
                    liftoff = Some((time, rs * state.slide_angle, state.slide_speed));
                }
            }
            let slide_position = rs * state.slide_angle;
            if slide_position > sys.slide.rail_length {
                return Err(SimError::SlideOvershoot {
                    time,
                    position: slide_position,
                    rail_length: sys.slide.rail_length,
                });
            }
            let (force, _) = plant.tether(&state.to_array())?;
            if stall_risk.is_none() && state.spring_compression >= max_travel && force > prev_force
            {
                stall_risk = Some(time);
            }
            prev_force = force;
        }
    }

    let peak = |f: fn(&TakeoffRow) -> f64| trace.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let peak_slide_power = peak(|r| r.slide_power);
    let peak_winch_power = peak(|r| r.winch_power);
    let max_spring_compression = peak(|r| r.spring_compression);
    let ffwd_dominance = dominance_interval(&trace);
    let first_zone_c = trace.iter().find(|r| r.zone == Zone::C).map(|r| r.t);
    let slack = trace
        .iter()
        .map(|r| slack_estimate(r.aircraft_distance, r.tether_length))
        .collect();
    let kinetic = liftoff.map_or(0.0, |(_, _, omega)| {
        0.5 * sys.slide.equivalent_mass * (rs * omega).powi(2)
    });

    Ok(TakeoffResult {
        liftoff_time: liftoff.map(|l| l.0),
        liftoff_distance: liftoff.map(|l| l.1),
        peak_slide_power,
        peak_winch_power,
        max_spring_compression,
        stall_risk,
        ffwd_dominance,
        first_zone_c,
        slide_energy_to_liftoff: slide_energy,
        kinetic_energy_at_liftoff: kinetic,
        slack_estimate: slack,
        trace,
    })
}

fn dominance_interval(trace: &[TakeoffRow]) -> Option<(f64, f64)> {
    let active = |r: &TakeoffRow| r.slide_speed > 0.0 && r.ffwd_ref > r.fbck_ref;
    let start = trace.iter().position(active)?;
    let end = trace[start..]
        .iter()
        .position(|r| !active(r))
        .map_or(trace.len() - 1, |i| start + i);
    Some((trace[start].t, trace[end].t))
}
