//! One-dimensional aircraft / tether / buffer spring / winch model used to size the spring.
//!
//! The aircraft flies straight away from the ground station with full thrust while the
//! winch reels out with full torque. The tether is a unilateral spring whose stiffness
//! scales with the inverse of its deployed length; its length is the winch payout plus
//! twice the spring compression (the tether loops around the sprung pulley).

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::params::{
    AircraftParams, AmbientParams, InitConditions, SpringParams, SystemParams, TetherParams,
    WinchParams,
};

pub const DESIGN_STATE_DIM: usize = 6;

/// Continuous state of the spring design model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DesignState {
    /// Aircraft position x [m].
    pub position: f64,
    /// Aircraft speed [m/s].
    pub speed: f64,
    /// Spring compression x_s [m].
    pub spring_compression: f64,
    /// Spring compression rate [m/s].
    pub spring_speed: f64,
    /// Winch angle θ_w [rad].
    pub winch_angle: f64,
    /// Winch angular speed [rad/s].
    pub winch_speed: f64,
}

impl DesignState {
    pub fn to_array(self) -> [f64; DESIGN_STATE_DIM] {
        [
            self.position,
            self.speed,
            self.spring_compression,
            self.spring_speed,
            self.winch_angle,
            self.winch_speed,
        ]
    }

    pub fn from_array(a: [f64; DESIGN_STATE_DIM]) -> Self {
        Self {
            position: a[0],
            speed: a[1],
            spring_compression: a[2],
            spring_speed: a[3],
            winch_angle: a[4],
            winch_speed: a[5],
        }
    }
}

/// Tether stiffness K_t = F_t / (eps_t * l) for a deployed length `length`.
pub fn tether_stiffness(tether: &TetherParams, length: f64) -> Result<f64, ModelError> {
    if !(length > 0.0) {
        return Err(ModelError::DegenerateTetherLength(length));
    }
    Ok(tether.breaking_load / (tether.breaking_elongation * length))
}

/// Tether pulling force for aircraft distance `distance` and deployed length `length`.
/// Never negative: a slack tether cannot push.
pub fn tether_force(tether: &TetherParams, distance: f64, length: f64) -> Result<f64, ModelError> {
    let k = tether_stiffness(tether, length)?;
    Ok((k * (distance - length)).max(0.0))
}

/// Deployed tether length: winch payout plus twice the spring compression.
pub fn effective_tether_length(
    winch: &WinchParams,
    winch_angle: f64,
    spring_compression: f64,
) -> f64 {
    winch.radius * winch_angle + 2.0 * spring_compression
}

/// Viscous friction coefficient of the spring carriage. The high-friction branch is active
/// only while moving into an endstop band.
pub fn spring_friction(spring: &SpringParams, compression: f64, compression_rate: f64) -> f64 {
    let low = compression <= spring.endstop_margin && compression_rate < 0.0;
    let high = compression > spring.max_travel - spring.endstop_margin && compression_rate > 0.0;
    if low || high {
        spring.endstop_gain * spring.free_friction
    } else {
        spring.free_friction
    }
}

/// Aerodynamic drag along the flight path [N].
pub fn drag_force(aircraft: &AircraftParams, ambient: &AmbientParams, speed: f64) -> f64 {
    0.5 * ambient.air_density * aircraft.drag_coeff * aircraft.effective_area * speed * speed.abs()
}

/// Carriage acceleration under tether force `force` (doubled by the pulley loop).
pub fn spring_acceleration(spring: &SpringParams, compression: f64, rate: f64, force: f64) -> f64 {
    let beta = spring_friction(spring, compression, rate);
    (2.0 * force - beta * rate - spring.stiffness * compression) / spring.carriage_mass
}

/// Tether force and the two accelerations it produces, computed from one force value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetherCoupling {
    pub force: f64,
    pub length: f64,
    /// Deceleration of the aircraft due to the tether, F/m.
    pub aircraft_term: f64,
    /// Drive term on the spring carriage, 2F/m_s.
    pub spring_term: f64,
}

pub fn tether_coupling(
    state: &DesignState,
    params: &SystemParams,
) -> Result<TetherCoupling, ModelError> {
    let length =
        effective_tether_length(&params.winch, state.winch_angle, state.spring_compression);
    let force = tether_force(&params.tether, state.position, length)?;
    Ok(TetherCoupling {
        force,
        length,
        aircraft_term: force / params.aircraft.mass,
        spring_term: 2.0 * force / params.spring.carriage_mass,
    })
}

/// Time derivative of the design state with full thrust and full reel-out torque.
pub fn design_derivatives(
    state: &DesignState,
    params: &SystemParams,
) -> Result<DesignState, ModelError> {
    let c = tether_coupling(state, params)?;
    let ac = &params.aircraft;
    let w = &params.winch;
    let drag = drag_force(ac, &params.ambient, state.speed);
    let accel = (ac.max_thrust - drag) / ac.mass - c.aircraft_term;
    let spring_accel = spring_acceleration(
        &params.spring,
        state.spring_compression,
        state.spring_speed,
        c.force,
    );
    let winch_accel =
        (w.max_torque + w.radius * c.force - w.rot_friction * state.winch_speed) / w.inertia;
    Ok(DesignState {
        position: state.speed,
        speed: accel,
        spring_compression: state.spring_speed,
        spring_speed: spring_accel,
        winch_angle: state.winch_speed,
        winch_speed: winch_accel,
    })
}

/// Initial state: aircraft flying at `ic.speed`, tether exactly unloaded with the spring at
/// rest, winch slower than the aircraft by `ic.speed_deficit`.
pub fn initial_state(ic: &InitConditions, winch: &WinchParams) -> DesignState {
    DesignState {
        position: ic.position,
        speed: ic.speed,
        spring_compression: 0.0,
        spring_speed: 0.0,
        winch_angle: ic.position / winch.radius,
        winch_speed: (ic.speed - ic.speed_deficit) / winch.radius,
    }
}

/// Speed at which full thrust balances drag with a slack tether.
pub fn terminal_speed(aircraft: &AircraftParams, ambient: &AmbientParams) -> f64 {
    (2.0 * aircraft.max_thrust
        / (ambient.air_density * aircraft.drag_coeff * aircraft.effective_area))
        .sqrt()
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn defaults() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn stiffness_examples() {
        let t = TetherParams::default();
        assert_relative_eq!(
            tether_stiffness(&t, 20.0).unwrap(),
            11250.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            tether_stiffness(&t, 40.0).unwrap(),
            5625.0,
            max_relative = 1e-12
        );
        assert!(tether_stiffness(&t, 0.0).is_err());
        assert!(tether_stiffness(&t, -1.0).is_err());
        assert!(tether_stiffness(&t, f64::NAN).is_err());
    }

    #[test]
    fn force_examples() {
        let t = TetherParams::default();
        assert_eq!(tether_force(&t, 19.0, 20.0).unwrap(), 0.0);
        assert_eq!(tether_force(&t, 20.0, 20.0).unwrap(), 0.0);
        // 4500 / (0.02 * 20) * 0.1 evaluated by hand.
        assert_relative_eq!(
            tether_force(&t, 20.1, 20.0).unwrap(),
            1125.0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn length_examples() {
        let w = WinchParams::default();
        assert_relative_eq!(
            effective_tether_length(&w, 200.0, 0.0),
            20.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            effective_tether_length(&w, 200.0, 0.35),
            20.7,
            max_relative = 1e-12
        );
        assert_eq!(effective_tether_length(&w, 0.0, 0.0), 0.0);
    }

    #[test]
    fn friction_branches() {
        let s = SpringParams::default();
        assert_eq!(spring_friction(&s, 0.1, 3.0), 1e-4);
        assert_eq!(spring_friction(&s, 0.1, -3.0), 1e-4);
        assert_relative_eq!(
            spring_friction(&s, 0.0005, -0.1),
            100.0,
            max_relative = 1e-12
        );
        assert_eq!(spring_friction(&s, 0.0005, 0.1), 1e-4);
        assert_relative_eq!(
            spring_friction(&s, 0.3495, 0.1),
            100.0,
            max_relative = 1e-12
        );
        assert_eq!(spring_friction(&s, 0.3495, -0.1), 1e-4);
    }

    #[test]
    fn slack_derivatives() {
        let p = defaults();
        let s = DesignState {
            position: 19.0,
            speed: 0.0,
            spring_compression: 0.0,
            spring_speed: 0.0,
            winch_angle: 200.0,
            winch_speed: 30.0,
        };
        let d = design_derivatives(&s, &p).unwrap();
        assert_relative_eq!(d.speed, 10.0 / 1.2, max_relative = 1e-12);
        assert_eq!(d.spring_speed, 0.0);
        assert_relative_eq!(
            d.winch_speed,
            (13.0 - 0.01 * 30.0) / 0.1,
            max_relative = 1e-12
        );
        assert_eq!(d.position, 0.0);
        assert_eq!(d.winch_angle, 30.0);
    }

    #[test]
    fn thrust_drag_equilibrium() {
        let p = defaults();
        let v = terminal_speed(&p.aircraft, &p.ambient);
        let s = DesignState {
            position: 10.0,
            speed: v,
            winch_angle: 200.0,
            ..Default::default()
        };
        let d = design_derivatives(&s, &p).unwrap();
        assert!(d.speed.abs() < 1e-12, "{}", d.speed);
    }

    #[test]
    fn initial_state_example() {
        let ic = InitConditions::default();
        let w = WinchParams::default();
        let s = initial_state(&ic, &w);
        assert_relative_eq!(s.winch_angle, 200.0, max_relative = 1e-12);
        assert_relative_eq!(s.winch_speed, 60.0, max_relative = 1e-12);
        let c = tether_coupling(&s, &defaults()).unwrap();
        assert_eq!(c.force, 0.0);
    }

    #[test]
    fn coupling_shares_one_force() {
        let p = defaults();
        let s = DesignState {
            position: 20.05,
            speed: 10.0,
            spring_compression: 0.0,
            spring_speed: 0.0,
            winch_angle: 200.0,
            winch_speed: 60.0,
        };
        let c = tether_coupling(&s, &p).unwrap();
        assert!(c.force > 0.0);
        assert_relative_eq!(
            c.aircraft_term * p.aircraft.mass,
            c.force,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            c.spring_term * p.spring.carriage_mass,
            2.0 * c.force,
            max_relative = 1e-12
        );
        let d = design_derivatives(&s, &p).unwrap();
        let drag = drag_force(&p.aircraft, &p.ambient, 10.0);
        assert_relative_eq!(
            d.speed,
            (10.0 - drag) / 1.2 - c.aircraft_term,
            max_relative = 1e-12
        );
    }

    #[test]
    fn degenerate_length_propagates() {
        let p = defaults();
        let s = DesignState::default();
        assert!(design_derivatives(&s, &p).is_err());
    }

    mod props {
        use proptest::prelude::*;

        use super::super::*;

        proptest! {
            #[test]
            fn force_never_negative(x in -100.0f64..100.0, l in 1e-3f64..100.0) {
                let t = TetherParams::default();
                prop_assert!(tether_force(&t, x, l).unwrap() >= 0.0);
            }

            #[test]
            fn stiffness_strictly_decreasing(l in 1e-3f64..100.0, dl in 1e-3f64..10.0) {
                let t = TetherParams::default();
                prop_assert!(tether_stiffness(&t, l + dl).unwrap() < tether_stiffness(&t, l).unwrap());
            }

            #[test]
            fn derivatives_deterministic(x in 15.0f64..25.0, v in 0.0f64..20.0, xs in 0.0f64..0.35,
                                         vs in -2.0f64..2.0, th in 150.0f64..250.0, om in 0.0f64..150.0) {
                let p = SystemParams::default();
                let s = DesignState { position: x, speed: v, spring_compression: xs, spring_speed: vs,
                                      winch_angle: th, winch_speed: om };
                let a = design_derivatives(&s, &p).unwrap().to_array();
                let b = design_derivatives(&s, &p).unwrap().to_array();
                prop_assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
            }
        }
    }
}
