//! Ground-station control stack.
//!
//! Inner loops: slide position via static state feedback, winch speed via proportional
//! feedback, both torque-saturated. Outer loop: the winch speed reference is the larger of a
//! feedforward latch on the slide speed and an integral action on the spring compression,
//! the latter arbitrated over three compression zones.

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::params::positive;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SlideGains {
    /// Position gain [N·m/rad].
    pub position_gain: f64,
    /// Speed gain [N·m·s/rad].
    pub speed_gain: f64,
    /// Peak torque [N·m].
    pub torque_limit: f64,
}

impl Default for SlideGains {
    fn default() -> Self {
        Self {
            position_gain: 14.0,
            speed_gain: 2.5,
            torque_limit: 26.0,
        }
    }
}

impl SlideGains {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("controller.slide.position_gain", self.position_gain)?;
        positive("controller.slide.speed_gain", self.speed_gain)?;
        positive("controller.slide.torque_limit", self.torque_limit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WinchGains {
    /// Speed gain [N·m·s/rad].
    pub speed_gain: f64,
    /// Torque limit [N·m].
    pub torque_limit: f64,
}

impl Default for WinchGains {
    fn default() -> Self {
        Self {
            speed_gain: 1.0,
            torque_limit: 13.0,
        }
    }
}

impl WinchGains {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("controller.winch.speed_gain", self.speed_gain)?;
        positive("controller.winch.torque_limit", self.torque_limit)
    }
}

/// Parameters of the outer winch speed reference generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WinchOuterParams {
    /// Feedforward gain on the slide speed.
    pub ffwd_gain: f64,
    /// Upper bound of zone A [m].
    pub zone_a_limit: f64,
    /// Lower bound of zone C [m].
    pub zone_c_limit: f64,
    /// Compression at which the zone A ramp reaches its nominal rate [m].
    pub zone_a_anchor: f64,
    /// Compression at which the zone C ramp reaches its nominal rate [m].
    pub zone_c_anchor: f64,
    /// Lowest feedback reference [rad/s].
    pub fbck_min: f64,
    /// Highest feedback reference [rad/s].
    pub fbck_max: f64,
    /// Reference ramp rate in zone A [rad/s²], negative.
    pub zone_a_accel: f64,
    /// Reference ramp rate in zone C [rad/s²], positive.
    pub zone_c_accel: f64,
    /// Control sample period [s].
    pub sample_period: f64,
}

impl Default for WinchOuterParams {
    fn default() -> Self {
        Self {
            ffwd_gain: 1.2,
            zone_a_limit: 0.05,
            zone_c_limit: 0.1,
            zone_a_anchor: 0.025,
            zone_c_anchor: 0.2,
            fbck_min: -10.0,
            fbck_max: 120.0,
            zone_a_accel: -100.0,
            zone_c_accel: 30.0,
            sample_period: 0.001,
        }
    }
}

impl WinchOuterParams {
    /// Checks the ordering constraints against the spring travel `max_travel`.
    pub fn validate(&self, max_travel: f64) -> Result<(), ParamError> {
        if !(self.ffwd_gain >= 0.0) {
            return Err(ParamError::new(
                "controller.outer.ffwd_gain",
                ">= 0",
                self.ffwd_gain,
            ));
        }
        positive("controller.outer.zone_a_limit", self.zone_a_limit)?;
        if !(self.zone_c_limit > self.zone_a_limit && self.zone_c_limit < max_travel) {
            return Err(ParamError::new(
                "controller.outer.zone_c_limit",
                "in (zone_a_limit, spring.max_travel)",
                self.zone_c_limit,
            ));
        }
        if !(self.zone_a_anchor < self.zone_a_limit) {
            return Err(ParamError::new(
                "controller.outer.zone_a_anchor",
                "< zone_a_limit",
                self.zone_a_anchor,
            ));
        }
        if !(self.zone_c_anchor > self.zone_c_limit) {
            return Err(ParamError::new(
                "controller.outer.zone_c_anchor",
                "> zone_c_limit",
                self.zone_c_anchor,
            ));
        }
        if !(self.fbck_min < 0.0) {
            return Err(ParamError::new(
                "controller.outer.fbck_min",
                "< 0",
                self.fbck_min,
            ));
        }
        positive("controller.outer.fbck_max", self.fbck_max)?;
        if !(self.zone_a_accel < 0.0) {
            return Err(ParamError::new(
                "controller.outer.zone_a_accel",
                "< 0",
                self.zone_a_accel,
            ));
        }
        positive("controller.outer.zone_c_accel", self.zone_c_accel)?;
        positive("controller.outer.sample_period", self.sample_period)
    }
}

/// Full controller configuration, including the take-off slide travel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerParams {
    pub slide: SlideGains,
    pub winch: WinchGains,
    pub outer: WinchOuterParams,
    /// Slide travel commanded at take-off [m].
    pub slide_travel: f64,
}

impl Default for ControllerParams {
    fn default() -> Self {
        Self {
            slide: SlideGains::default(),
            winch: WinchGains::default(),
            outer: WinchOuterParams::default(),
            slide_travel: 3.7,
        }
    }
}

impl ControllerParams {
    pub fn validate(&self, max_travel: f64) -> Result<(), ParamError> {
        self.slide.validate()?;
        self.winch.validate()?;
        self.outer.validate(max_travel)?;
        positive("controller.slide_travel (L)", self.slide_travel)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Zone {
    /// Spring practically uncompressed: slow down, eventually reel in.
    A,
    /// Low force: hold the winch.
    B,
    /// High force: reel out.
    C,
}

impl Zone {
    pub fn as_str(self) -> &'static str {
        match self {
            Zone::A => "A",
            Zone::B => "B",
            Zone::C => "C",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WinchControllerState {
    pub prev_fbck_ref: f64,
    pub zone: Zone,
}

impl WinchControllerState {
    /// Winch at rest before take-off.
    pub fn initial(compression: f64, p: &WinchOuterParams) -> Self {
        Self {
            prev_fbck_ref: 0.0,
            zone: classify_zone(compression, p),
        }
    }
}

pub fn slide_torque(position_ref: f64, position: f64, speed: f64, g: &SlideGains) -> f64 {
    let u = g.position_gain * (position_ref - position) - g.speed_gain * speed;
    u.clamp(-g.torque_limit, g.torque_limit)
}

pub fn winch_torque(speed_ref: f64, speed: f64, g: &WinchGains) -> f64 {
    (g.speed_gain * (speed_ref - speed)).clamp(-g.torque_limit, g.torque_limit)
}

pub fn winch_ffwd(slide_speed: f64, gain: f64) -> f64 {
    gain * slide_speed
}

/// Zone A is `[0, a)`, B is `[a, c)`, C is `[c, ∞)`.
pub fn classify_zone(compression: f64, p: &WinchOuterParams) -> Zone {
    if compression < p.zone_a_limit {
        Zone::A
    } else if compression < p.zone_c_limit {
        Zone::B
    } else {
        Zone::C
    }
}

/// One step of the feedback reference. In zone A the output is clamped to
/// `[fbck_min, 0]`, in zone C to `[0, fbck_max]`, so entering either zone re-saturates a
/// reference of the wrong sign immediately.
pub fn winch_fbck(
    st: WinchControllerState,
    compression: f64,
    p: &WinchOuterParams,
) -> (f64, WinchControllerState) {
    let zone = classify_zone(compression, p);
    let prev = st.prev_fbck_ref;
    let next = match zone {
        Zone::A => {
            let scale = (compression - p.zone_a_limit) / (p.zone_a_anchor - p.zone_a_limit);
            (prev + p.sample_period * p.zone_a_accel * scale)
                .max(p.fbck_min)
                .min(0.0)
        }
        Zone::B => prev,
        Zone::C => {
            let scale = (compression - p.zone_c_limit) / (p.zone_c_anchor - p.zone_c_limit);
            (prev + p.sample_period * p.zone_c_accel * scale)
                .min(p.fbck_max)
                .max(0.0)
        }
    };
    (
        next,
        WinchControllerState {
            prev_fbck_ref: next,
            zone,
        },
    )
}

/// Feedforward is used only while the slide moves forward and only if it exceeds feedback.
pub fn combine_refs(ffwd: f64, fbck: f64, slide_speed: f64) -> f64 {
    if slide_speed > 0.0 {
        ffwd.max(fbck)
    } else {
        fbck
    }
}

/// Outputs of one control update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput {
    pub slide_torque: f64,
    pub winch_torque: f64,
    pub winch_ref: f64,
    pub ffwd_ref: f64,
    pub fbck_ref: f64,
    pub zone: Zone,
}

impl ControlOutput {
    /// The issued reference came from the feedforward path.
    pub fn ffwd_active(&self, slide_speed: f64) -> bool {
        slide_speed > 0.0 && self.ffwd_ref > self.fbck_ref
    }
}

/// Measurements sampled by the drives and the potentiometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurements {
    pub slide_angle: f64,
    pub slide_speed: f64,
    pub winch_speed: f64,
    pub spring_compression: f64,
}

/// Automatic-mode ground-station controller stepped every sample period.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundStationController {
    params: ControllerParams,
    slide_angle_ref: f64,
    state: WinchControllerState,
}

impl GroundStationController {
    /// Controller that has just issued the take-off position step `slide_travel / drum_radius`.
    pub fn takeoff(params: ControllerParams, drum_radius: f64, initial_compression: f64) -> Self {
        Self {
            slide_angle_ref: params.slide_travel / drum_radius,
            state: WinchControllerState::initial(initial_compression, &params.outer),
            params,
        }
    }

    pub fn state(&self) -> WinchControllerState {
        self.state
    }

    pub fn params(&self) -> &ControllerParams {
        &self.params
    }

    pub fn step(&mut self, m: &Measurements) -> ControlOutput {
        let p = &self.params;
        let (fbck, next) = winch_fbck(self.state, m.spring_compression, &p.outer);
        self.state = next;
        let ffwd = winch_ffwd(m.slide_speed, p.outer.ffwd_gain);
        let winch_ref = combine_refs(ffwd, fbck, m.slide_speed);
        ControlOutput {
            slide_torque: slide_torque(
                self.slide_angle_ref,
                m.slide_angle,
                m.slide_speed,
                &p.slide,
            ),
            winch_torque: winch_torque(winch_ref, m.winch_speed, &p.winch),
            winch_ref,
            ffwd_ref: ffwd,
            fbck_ref: fbck,
            zone: next.zone,
        }
    }
}

/// Manual mode: operator references passed straight to the inner loops.
pub fn manual_torques(
    slide_angle_ref: f64,
    winch_speed_ref: f64,
    m: &Measurements,
    p: &ControllerParams,
) -> (f64, f64) {
    (
        slide_torque(slide_angle_ref, m.slide_angle, m.slide_speed, &p.slide),
        winch_torque(winch_speed_ref, m.winch_speed, &p.winch),
    )
}
