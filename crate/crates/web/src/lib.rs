//! Browser bindings. Each export takes plain numbers or comma-separated lists and returns a
//! JSON document with the curves to plot; errors come back as a thrown JS string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use awe_takeoff::controller::{
    classify_zone, winch_fbck, ControllerParams, WinchControllerState, Zone,
};
use awe_takeoff::spring_design::evaluate_spring_traced;
use awe_takeoff::takeoff::{run_takeoff, TakeoffConfig};
use awe_takeoff::{InitConditions, StudySettings, SystemParams};

/// Points per curve sent to the page; traces are decimated to about this many.
const PLOT_POINTS: usize = 600;

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("not a number: {s:?}")))
        .collect()
}

fn stride(len: usize) -> usize {
    len.div_ceil(PLOT_POINTS).max(1)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plot data serializes")
}

#[derive(Serialize)]
struct SpringRun {
    travel: f64,
    min_speed: f64,
    t_at_min: f64,
    t_star: Option<f64>,
    feasible: bool,
    cycles: usize,
    t: Vec<f64>,
    speed: Vec<f64>,
    compression: Vec<f64>,
}

/// Design-model comparison for a list of spring travels at one stiffness.
pub fn spring_comparison_json(travels: &str, stiffness: f64) -> Result<String, String> {
    let base = SystemParams::default();
    let settings = StudySettings::default();
    let mut runs = Vec::new();
    for travel in parse_list(travels)? {
        let p = base.with_spring(travel, stiffness);
        let (r, tr) = evaluate_spring_traced(&p, &InitConditions::default(), &settings)
            .map_err(|e| e.to_string())?;
        let k = stride(tr.len());
        runs.push(SpringRun {
            travel,
            min_speed: r.min_speed,
            t_at_min: r.t_at_min,
            t_star: r.t_star,
            feasible: r.feasible,
            cycles: r.compression_cycles,
            t: tr.times.iter().step_by(k).copied().collect(),
            speed: tr.states.iter().step_by(k).map(|s| s.speed).collect(),
            compression: tr
                .states
                .iter()
                .step_by(k)
                .map(|s| s.spring_compression)
                .collect(),
        });
    }
    Ok(to_json(
        &serde_json::json!({ "v_min": base.aircraft.min_cruise_speed, "runs": runs }),
    ))
}

/// Take-off run with adjustable feedforward gain, initial slack and climb angle.
/// Speeds are converted to m/s at the drum surface for comparison.
pub fn takeoff_json(
    ffwd_gain: f64,
    initial_slack: f64,
    climb_angle_deg: f64,
) -> Result<String, String> {
    let sys = SystemParams::default();
    let mut ctrl = ControllerParams::default();
    ctrl.outer.ffwd_gain = ffwd_gain;
    let cfg = TakeoffConfig {
        initial_slack,
        climb_angle_deg,
        duration: 2.0,
        ..Default::default()
    };
    let r = run_takeoff(&cfg, &sys, &ctrl).map_err(|e| e.to_string())?;
    let k = stride(r.trace.len());
    let rows: Vec<_> = r.trace.iter().step_by(k).collect();
    let col = |f: &dyn Fn(&awe_takeoff::takeoff::TakeoffRow) -> f64| {
        rows.iter().map(|r| f(r)).collect::<Vec<_>>()
    };
    let (rs, rw) = (sys.slide.drum_radius, sys.winch.radius);
    Ok(to_json(&serde_json::json!({
        "liftoff_time": r.liftoff_time,
        "liftoff_distance": r.liftoff_distance,
        "peak_slide_power": r.peak_slide_power,
        "peak_winch_power": r.peak_winch_power,
        "stall_risk": r.stall_risk,
        "ffwd_dominance": r.ffwd_dominance,
        "t": col(&|r| r.t),
        "slide_speed": col(&|r| rs * r.slide_speed),
        "winch_speed": col(&|r| rw * r.winch_speed),
        "aircraft_speed": col(&|r| r.aircraft_speed),
        "spring_compression": col(&|r| r.spring_compression),
        "tether_force": col(&|r| r.tether_force),
        "slide_power": col(&|r| r.slide_power),
        "winch_power": col(&|r| r.winch_power),
        "slack": rows.iter().map(|r| r.tether_length - r.aircraft_distance).collect::<Vec<_>>(),
    })))
}

/// Feedback reference produced by holding each listed compression for `hold_steps`
/// controller samples, starting from `initial_ref`.
pub fn feedback_reference_json(
    compressions: &str,
    hold_steps: u32,
    initial_ref: f64,
) -> Result<String, String> {
    let p = ControllerParams::default().outer;
    let levels = parse_list(compressions)?;
    if levels.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err("compressions must be >= 0".into());
    }
    let mut st = WinchControllerState {
        prev_fbck_ref: initial_ref.clamp(p.fbck_min, p.fbck_max),
        zone: levels.first().map_or(Zone::B, |x| classify_zone(*x, &p)),
    };
    let (mut t, mut x, mut r, mut z) = (vec![0.0], vec![], vec![st.prev_fbck_ref], vec![]);
    let mut k = 0u64;
    for level in levels {
        for _ in 0..hold_steps {
            let (next, s) = winch_fbck(st, level, &p);
            st = s;
            k += 1;
            t.push(k as f64 * p.sample_period);
            x.push(level);
            r.push(next);
            z.push(s.zone.as_str());
        }
    }
    Ok(to_json(&serde_json::json!({
        "t": t, "compression": x, "reference": r, "zone": z,
        "zone_a_limit": p.zone_a_limit, "zone_c_limit": p.zone_c_limit,
        "fbck_min": p.fbck_min, "fbck_max": p.fbck_max,
    })))
}

#[wasm_bindgen]
pub fn spring_comparison(travels: &str, stiffness: f64) -> Result<String, JsValue> {
    spring_comparison_json(travels, stiffness).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn takeoff(
    ffwd_gain: f64,
    initial_slack: f64,
    climb_angle_deg: f64,
) -> Result<String, JsValue> {
    takeoff_json(ffwd_gain, initial_slack, climb_angle_deg).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn feedback_reference(
    compressions: &str,
    hold_steps: u32,
    initial_ref: f64,
) -> Result<String, JsValue> {
    feedback_reference_json(compressions, hold_steps, initial_ref).map_err(JsValue::from)
}
