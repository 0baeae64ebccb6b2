//! CSV output. Fixed column order, header row, shortest round-trip decimal floats
//! (locale-independent), so identical runs give byte-identical files.

use std::io::Write;

use crate::integrator::{Trace, TraceOutcome};
use crate::spring_design::{FeasibilityResult, SweepPoint};
use crate::takeoff::{TakeoffResult, TakeoffRow};

pub const DESIGN_TRACE_HEADER: [&str; 9] = [
    "t",
    "x",
    "x_dot",
    "x_s",
    "x_s_dot",
    "theta_w",
    "theta_w_dot",
    "tether_force",
    "tether_length",
];

pub const TAKEOFF_TRACE_HEADER: [&str; 16] = [
    "t",
    "theta_s",
    "theta_s_dot",
    "theta_w",
    "theta_w_dot",
    "x_s",
    "aircraft_distance",
    "aircraft_speed",
    "tether_length",
    "tether_force",
    "slide_torque",
    "winch_torque",
    "slide_power",
    "winch_power",
    "zone",
    "phase",
];

pub const FEASIBILITY_HEADER: [&str; 9] = [
    "travel",
    "stiffness",
    "min_speed",
    "t_at_min",
    "t_star",
    "timed_out",
    "feasible",
    "compression_cycles",
    "error",
];

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_design_trace<W: Write>(out: W, trace: &Trace) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DESIGN_TRACE_HEADER)?;
    for (i, s) in trace.states.iter().enumerate() {
        w.write_record([
            num(trace.times[i]),
            num(s.position),
            num(s.speed),
            num(s.spring_compression),
            num(s.spring_speed),
            num(s.winch_angle),
            num(s.winch_speed),
            num(trace.tether_force[i]),
            num(trace.tether_length[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_takeoff_trace<W: Write>(out: W, rows: &[TakeoffRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TAKEOFF_TRACE_HEADER)?;
    for r in rows {
        w.write_record([
            num(r.t),
            num(r.slide_angle),
            num(r.slide_speed),
            num(r.winch_angle),
            num(r.winch_speed),
            num(r.spring_compression),
            num(r.aircraft_distance),
            num(r.aircraft_speed),
            num(r.tether_length),
            num(r.tether_force),
            num(r.slide_torque),
            num(r.winch_torque),
            num(r.slide_power),
            num(r.winch_power),
            r.zone.as_str().to_string(),
            r.phase.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn feasibility_record(
    travel: f64,
    stiffness: f64,
    r: &Result<FeasibilityResult, String>,
) -> Vec<String> {
    match r {
        Ok(f) => vec![
            num(travel),
            num(stiffness),
            num(f.min_speed),
            num(f.t_at_min),
            opt(f.t_star),
            f.timed_out.to_string(),
            f.feasible.to_string(),
            f.compression_cycles.to_string(),
            String::new(),
        ],
        Err(e) => {
            let mut v = vec![num(travel), num(stiffness)];
            v.extend(std::iter::repeat_n(String::new(), 6));
            v.push(e.clone());
            v
        }
    }
}

/// One row per grid point; failed points keep their coordinates and carry the error text.
pub fn write_feasibility<W: Write>(out: W, points: &[SweepPoint]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FEASIBILITY_HEADER)?;
    for p in points {
        let r = p.result.clone().map_err(|e| e.to_string());
        w.write_record(feasibility_record(p.travel, p.stiffness, &r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn outcome_label(outcome: &TraceOutcome) -> &'static str {
    match outcome {
        TraceOutcome::Stopped { .. } => "released",
        TraceOutcome::Timeout { loaded: true } => "timeout",
        TraceOutcome::Timeout { loaded: false } => "never_loaded",
    }
}

/// `quantity,value` summary of a take-off run.
pub fn write_takeoff_summary<W: Write>(out: W, r: &TakeoffResult) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["quantity", "value"])?;
    let (ff_start, ff_end) = match r.ffwd_dominance {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let rows: [(&str, String); 12] = [
        ("liftoff_time", opt(r.liftoff_time)),
        ("liftoff_distance", opt(r.liftoff_distance)),
        ("peak_slide_power", num(r.peak_slide_power)),
        ("peak_winch_power", num(r.peak_winch_power)),
        ("max_spring_compression", num(r.max_spring_compression)),
        ("stall_risk_time", opt(r.stall_risk)),
        ("ffwd_dominance_start", opt(ff_start)),
        ("ffwd_dominance_end", opt(ff_end)),
        ("first_zone_c_time", opt(r.first_zone_c)),
        ("slide_energy_to_liftoff", num(r.slide_energy_to_liftoff)),
        (
            "kinetic_energy_at_liftoff",
            num(r.kinetic_energy_at_liftoff),
        ),
        ("samples", r.trace.len().to_string()),
    ];
    for (k, v) in rows {
        w.write_record([k.to_string(), v])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{simulate, StopCondition};
    use crate::model::initial_state;
    use crate::params::{InitConditions, SystemParams};

    #[test]
    fn design_trace_has_header_and_rows() {
        let p = SystemParams::default();
        let s0 = initial_state(&InitConditions::default(), &p.winch);
        let tr = simulate(&p, s0, 1e-3, &StopCondition::released(0.01)).unwrap();
        let mut buf = Vec::new();
        write_design_trace(&mut buf, &tr).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), DESIGN_TRACE_HEADER.join(","));
        assert_eq!(lines.count(), tr.len());
        assert!(text.contains("\n0,20,10,0,0,200,60,0,20\n"));
    }

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789e10, -2.5] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn failed_point_keeps_coordinates() {
        let rec = feasibility_record(0.1, 70.0, &Err("boom".into()));
        assert_eq!(rec.len(), FEASIBILITY_HEADER.len());
        assert_eq!(rec[0], "0.1");
        assert_eq!(rec[8], "boom");
    }
}
