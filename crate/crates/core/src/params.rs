//! Physical parameters of the aircraft, tether, buffer spring, winch, slide and ambient.
//!
//! Every struct carries its reference defaults and a `validate` method
//! that names the offending field and the violated bound.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;

pub(crate) fn positive(field: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::new(field, "> 0", value))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AircraftParams {
    /// Effective area A [m²].
    pub effective_area: f64,
    /// Drag coefficient C_D, held constant (fixed angle of attack).
    pub drag_coeff: f64,
    /// Mass m [kg].
    pub mass: f64,
    /// Maximum propeller thrust [N].
    pub max_thrust: f64,
    /// Minimum cruise speed [m/s]; below it the aircraft stalls.
    pub min_cruise_speed: f64,
}

impl Default for AircraftParams {
    fn default() -> Self {
        Self {
            effective_area: 0.3,
            drag_coeff: 0.05,
            mass: 1.2,
            max_thrust: 10.0,
            min_cruise_speed: 7.0,
        }
    }
}

impl AircraftParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("aircraft.effective_area (A)", self.effective_area)?;
        positive("aircraft.drag_coeff (C_D)", self.drag_coeff)?;
        positive("aircraft.mass (m)", self.mass)?;
        positive("aircraft.max_thrust (T_max)", self.max_thrust)?;
        positive("aircraft.min_cruise_speed (v_min)", self.min_cruise_speed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TetherParams {
    /// Breaking load [N].
    pub breaking_load: f64,
    /// Elongation at breaking load (dimensionless strain).
    pub breaking_elongation: f64,
}

impl Default for TetherParams {
    fn default() -> Self {
        Self {
            breaking_load: 4500.0,
            breaking_elongation: 0.02,
        }
    }
}

impl TetherParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("tether.breaking_load (F_t)", self.breaking_load)?;
        let e = self.breaking_elongation;
        if !(e > 0.0 && e < 1.0) {
            return Err(ParamError::new(
                "tether.breaking_elongation (eps_t)",
                "in (0, 1)",
                e,
            ));
        }
        Ok(())
    }
}

/// Sprung pulley carriage that buffers tether tension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpringParams {
    /// Spring stiffness K_s [N/m].
    pub stiffness: f64,
    /// Mass of the moving plate carrying the pulley [kg].
    pub carriage_mass: f64,
    /// Viscous friction away from the travel limits [kg/s].
    pub free_friction: f64,
    /// Friction multiplier near the travel limits (bumpers).
    pub endstop_gain: f64,
    /// Width of the high-friction band at each end [m].
    pub endstop_margin: f64,
    /// Maximum compression x̄_s [m].
    pub max_travel: f64,
}

impl Default for SpringParams {
    fn default() -> Self {
        Self {
            stiffness: 70.0,
            carriage_mass: 2.0,
            free_friction: 1e-4,
            endstop_gain: 1e6,
            endstop_margin: 0.001,
            max_travel: 0.35,
        }
    }
}

impl SpringParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("spring.stiffness (K_s)", self.stiffness)?;
        positive("spring.carriage_mass (m_s)", self.carriage_mass)?;
        positive("spring.free_friction (beta_s)", self.free_friction)?;
        positive("spring.max_travel (x̄_s)", self.max_travel)?;
        if !(self.endstop_gain >= 10.0) {
            return Err(ParamError::new(
                "spring.endstop_gain (gamma_s)",
                ">= 10",
                self.endstop_gain,
            ));
        }
        let d = self.endstop_margin;
        if !(d > 0.0 && d < self.max_travel / 2.0) {
            return Err(ParamError::new(
                "spring.endstop_margin (delta_s)",
                "in (0, max_travel/2)",
                d,
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WinchParams {
    /// Drum radius R_w [m].
    pub radius: f64,
    /// Motor torque applied during the spring design study [N·m].
    pub max_torque: f64,
    /// Moment of inertia J_w [kg·m²].
    pub inertia: f64,
    /// Rotational viscous friction β_w [kg·m²/s].
    pub rot_friction: f64,
}

impl Default for WinchParams {
    fn default() -> Self {
        Self {
            radius: 0.1,
            max_torque: 13.0,
            inertia: 0.1,
            rot_friction: 0.01,
        }
    }
}

impl WinchParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("winch.radius (R_w)", self.radius)?;
        positive("winch.max_torque (T_w)", self.max_torque)?;
        positive("winch.inertia (J_w)", self.inertia)?;
        positive("winch.rot_friction (beta_w)", self.rot_friction)
    }
}

/// Linear motion system: slide on rails driven by its own drum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlidePlantParams {
    /// Slide drum radius R_s [m].
    pub drum_radius: f64,
    /// Lumped translational mass of slide drum, slide and aircraft [kg].
    pub equivalent_mass: f64,
    /// Rotational viscous friction at the drum [kg·m²/s].
    pub rot_friction: f64,
    /// Usable rail length measured from the start position [m].
    pub rail_length: f64,
}

impl Default for SlidePlantParams {
    fn default() -> Self {
        Self {
            drum_radius: 0.1,
            equivalent_mass: 11.2,
            rot_friction: 0.01,
            rail_length: 4.0,
        }
    }
}

impl SlidePlantParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("slide.drum_radius (R_s)", self.drum_radius)?;
        positive("slide.equivalent_mass", self.equivalent_mass)?;
        positive("slide.rot_friction", self.rot_friction)?;
        positive("slide.rail_length", self.rail_length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmbientParams {
    /// Air density ρ [kg/m³].
    pub air_density: f64,
    /// Gravitational acceleration [m/s²], used only by the climb phase.
    pub gravity: f64,
}

impl Default for AmbientParams {
    fn default() -> Self {
        Self {
            air_density: 1.2,
            gravity: 9.81,
        }
    }
}

impl AmbientParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("ambient.air_density (rho)", self.air_density)?;
        positive("ambient.gravity (g)", self.gravity)
    }
}

/// All physical constants of the system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    pub aircraft: AircraftParams,
    pub tether: TetherParams,
    pub spring: SpringParams,
    pub winch: WinchParams,
    pub slide: SlidePlantParams,
    pub ambient: AmbientParams,
}

impl SystemParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        self.aircraft.validate()?;
        self.tether.validate()?;
        self.spring.validate()?;
        self.winch.validate()?;
        self.slide.validate()?;
        self.ambient.validate()
    }

    /// Copy with a different spring travel and stiffness; used by the design sweep.
    pub fn with_spring(mut self, max_travel: f64, stiffness: f64) -> Self {
        self.spring.max_travel = max_travel;
        self.spring.stiffness = stiffness;
        self
    }
}

/// Initial condition of the spring design study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitConditions {
    /// Initial aircraft position x_0 [m] (equals the initial tether length).
    pub position: f64,
    /// Initial aircraft speed [m/s].
    pub speed: f64,
    /// Initial winch speed deficit with respect to the aircraft [m/s].
    pub speed_deficit: f64,
}

impl Default for InitConditions {
    fn default() -> Self {
        Self {
            position: 20.0,
            speed: 10.0,
            speed_deficit: 4.0,
        }
    }
}

impl InitConditions {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("simulation.initial.position (x_0)", self.position)?;
        positive("simulation.initial.speed (v_0)", self.speed)?;
        if !self.speed_deficit.is_finite() {
            return Err(ParamError::new(
                "simulation.initial.speed_deficit",
                "finite",
                self.speed_deficit,
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SystemParams::default().validate().unwrap();
        InitConditions::default().validate().unwrap();
    }

    #[test]
    fn negative_travel_names_field() {
        let mut p = SystemParams::default();
        p.spring.max_travel = -1.0;
        let err = p.validate().unwrap_err();
        assert!(err.to_string().contains("spring.max_travel"));
        assert!(err.to_string().contains("> 0"));
    }

    #[test]
    fn endstop_gain_must_dominate() {
        let p = SpringParams {
            endstop_gain: 5.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn endstop_margin_bounded_by_half_travel() {
        let p = SpringParams {
            endstop_margin: 0.2,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn tether_elongation_in_unit_interval() {
        let t = TetherParams {
            breaking_elongation: 1.0,
            ..Default::default()
        };
        assert!(t.validate().is_err());
    }
}
