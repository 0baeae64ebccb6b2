//! Acceptance gate. One PASS/FAIL line per criterion; exits nonzero if any fails.
//! Runs without the libtest harness so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use awe_takeoff::controller::{ControllerParams, Zone};
use awe_takeoff::io::{write_feasibility, write_takeoff_trace};
use awe_takeoff::params::{InitConditions, SystemParams};
use awe_takeoff::spring_design::{
    evaluate_spring_traced, sweep, FeasibilityResult, StudySettings, SweepGrid,
};
use awe_takeoff::takeoff::{run_takeoff, Phase, TakeoffConfig, TakeoffResult};
use awe_takeoff::validation::{
    controller_properties, rk4_observed_order, InputSource, DEFAULT_SEED, DEFAULT_SEQUENCES,
};
use awe_takeoff::Trace;

const TRAVELS: [f64; 3] = [0.05, 0.2, 0.35];

struct Gate {
    failed: usize,
}

impl Gate {
    fn check(&mut self, id: &str, pass: bool, detail: String) {
        println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed += 1;
        }
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target
}

fn default_takeoff() -> (TakeoffResult, Duration) {
    let start = Instant::now();
    let r = run_takeoff(
        &TakeoffConfig::default(),
        &SystemParams::default(),
        &ControllerParams::default(),
    )
    .expect("default take-off run");
    (r, start.elapsed())
}

fn spring_runs(dt: f64) -> Vec<(FeasibilityResult, Trace)> {
    let base = SystemParams::default();
    let settings = StudySettings {
        dt,
        ..Default::default()
    };
    TRAVELS
        .iter()
        .map(|&x| {
            evaluate_spring_traced(
                &base.with_spring(x, base.spring.stiffness),
                &InitConditions::default(),
                &settings,
            )
            .expect("spring run")
        })
        .collect()
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn slide_sizing(g: &mut Gate) {
    let (r, elapsed) = default_takeoff();
    let t = r.liftoff_time.unwrap_or(f64::NAN);
    let d = r.liftoff_distance.unwrap_or(f64::NAN);
    g.check(
        "1 slide sizing",
        within(t, 0.38, 0.05) && within(d, 1.7, 0.05) && elapsed < Duration::from_secs(1),
        format!(
            "9 m/s at t = {t:.4} s (0.38 ± 5%) over {d:.4} m (1.7 ± 5%), runtime {elapsed:.2?}"
        ),
    );
}

fn spring_comparison(g: &mut Gate) {
    let start = Instant::now();
    let runs = spring_runs(StudySettings::default().dt);
    let elapsed = start.elapsed();
    let min: Vec<f64> = runs.iter().map(|r| r.0.min_speed).collect();
    let t_min: Vec<f64> = runs.iter().map(|r| r.0.t_at_min).collect();
    let cycles: Vec<usize> = runs.iter().map(|r| r.0.compression_cycles).collect();
    let v_min = SystemParams::default().aircraft.min_cruise_speed;
    let slow = elapsed < Duration::from_secs(10);

    g.check(
        "2a min speed increasing in travel",
        strictly_increasing(&min) && slow,
        format!("min speeds {min:?} m/s for travels {TRAVELS:?} m"),
    );
    g.check(
        "2b stall dip only for short travel",
        min[0] < v_min && min[2] >= v_min && slow,
        format!(
            "0.05 m: {:.4}, 0.35 m: {:.4} against {v_min} m/s",
            min[0], min[2]
        ),
    );
    g.check(
        "2c time of minimum increasing in travel",
        strictly_increasing(&t_min) && slow,
        format!("times of minimum {t_min:?} s"),
    );
    g.check(
        "2d cycle count non-decreasing",
        cycles.windows(2).all(|w| w[1] >= w[0]) && slow,
        format!("cycles {cycles:?}, runtime {elapsed:.2?}"),
    );
}

fn peak_powers(g: &mut Gate) {
    let (r, elapsed) = default_takeoff();
    let (ps, pw) = (r.peak_slide_power, r.peak_winch_power);
    let fast = elapsed < Duration::from_secs(5);
    g.check(
        "3a peak slide power",
        within(ps, 2110.0, 0.2) && fast,
        format!("{ps:.1} W, band [1688, 2532] W"),
    );
    g.check(
        "3b peak winch power",
        within(pw, 1260.0, 0.2) && fast,
        format!("{pw:.1} W, band [1008, 1512] W"),
    );
    g.check(
        "3c slide/winch peak ratio",
        ps / pw > 1.5,
        format!("{:.3} (> 1.5)", ps / pw),
    );
}

fn controller_suite(g: &mut Gate) {
    let start = Instant::now();
    let checks = controller_properties(&mut InputSource::seeded(DEFAULT_SEED), DEFAULT_SEQUENCES);
    let elapsed = start.elapsed();
    for c in &checks {
        g.check(&format!("4 {}", c.name), c.passed, c.detail.clone());
    }
    g.check(
        "4 suite runtime",
        elapsed < Duration::from_secs(5),
        format!("{elapsed:.2?} (< 5 s)"),
    );
}

fn numerical_suite(g: &mut Gate) {
    let order = rk4_observed_order(0.02, 10.0);
    g.check(
        "5a rk4 observed order",
        order >= 3.9,
        format!("{order:.4} (>= 3.9)"),
    );

    let fine = spring_runs(1e-4);
    let coarse = spring_runs(1e-3);
    let rel = fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (f.0.min_speed - c.0.min_speed).abs() / f.0.min_speed)
        .fold(0.0, f64::max);
    g.check(
        "5b min speed dt convergence",
        rel < 0.005,
        format!("max relative difference {rel:.3e} (< 0.5%)"),
    );

    let mut bad_force = 0usize;
    let mut bad_compression = 0usize;
    for (travel, (_, tr)) in TRAVELS.iter().cycle().zip(fine.iter().chain(&coarse)) {
        bad_force += tr
            .tether_force
            .iter()
            .filter(|f| f.is_nan() || **f < 0.0)
            .count();
        bad_compression += tr
            .states
            .iter()
            .filter(|s| !(0.0..=*travel).contains(&s.spring_compression))
            .count();
    }
    let to = default_takeoff().0;
    let to_travel = SystemParams::default().spring.max_travel;
    bad_force += to
        .trace
        .iter()
        .filter(|r| r.tether_force.is_nan() || r.tether_force < 0.0)
        .count();
    bad_compression += to
        .trace
        .iter()
        .filter(|r| !(0.0..=to_travel).contains(&r.spring_compression))
        .count();
    g.check(
        "5c tether force non-negative",
        bad_force == 0,
        format!("{bad_force} negative samples"),
    );
    g.check(
        "5d compression within travel",
        bad_compression == 0,
        format!("{bad_compression} samples outside [0, x̄_s]"),
    );
}

fn determinism(g: &mut Gate) {
    let csv = || {
        let mut buf = Vec::new();
        write_takeoff_trace(&mut buf, &default_takeoff().0.trace).unwrap();
        buf
    };
    let (a, b) = (csv(), csv());
    g.check(
        "6a take-off CSV byte-identical",
        a == b,
        format!("{} bytes", a.len()),
    );

    let grid = SweepGrid {
        travel_values: TRAVELS.to_vec(),
        stiffness_values: vec![35.0, 70.0, 140.0],
        params: SystemParams::default(),
        init: InitConditions::default(),
    };
    let settings = StudySettings::default();
    let serial = sweep(&grid, &settings, false).unwrap();
    let parallel = sweep(&grid, &settings, true).unwrap();
    let bytes = |pts| {
        let mut buf = Vec::new();
        write_feasibility(&mut buf, pts).unwrap();
        buf
    };
    g.check(
        "6b sweep serial equals parallel",
        serial == parallel && bytes(&serial) == bytes(&parallel),
        format!("{} grid points", serial.len()),
    );
}

fn takeoff_invariants(g: &mut Gate) {
    let (r, _) = default_takeoff();
    let ff = r.ffwd_dominance;
    g.check(
        "T1 feedforward dominance early",
        matches!(ff, Some((_, end)) if end < 1.0),
        format!("interval {ff:?} s (nonempty, ends before 1 s)"),
    );

    let airborne = r.trace.iter().position(|row| row.phase == Phase::Airborne);
    let monotone =
        airborne.is_none_or(|k| r.trace[k..].iter().all(|row| row.phase == Phase::Airborne));
    let radius = SystemParams::default().slide.drum_radius;
    let tied = r
        .trace
        .iter()
        .filter(|row| row.phase == Phase::OnSlide)
        .all(|row| row.aircraft_speed == radius * row.slide_speed);
    g.check(
        "T2 phase monotone, speed tied on slide",
        monotone && tied,
        format!("airborne from sample {airborne:?}"),
    );

    // Thrust acts on the lumped mass from the first instant, so its work is an input too.
    let thrust_work =
        SystemParams::default().aircraft.max_thrust * r.liftoff_distance.unwrap_or(f64::NAN);
    let losses = r.slide_energy_to_liftoff + thrust_work - r.kinetic_energy_at_liftoff;
    g.check(
        "T3 slide energy losses non-negative",
        losses >= 0.0,
        format!(
            "motor {:.2} J + thrust {thrust_work:.2} J - kinetic {:.2} J = {losses:.2} J",
            r.slide_energy_to_liftoff, r.kinetic_energy_at_liftoff
        ),
    );

    let slack0 = TakeoffConfig::default().initial_slack;
    let consistent = r.slack_estimate.len() == r.trace.len()
        && r.slack_estimate
            .iter()
            .zip(&r.trace)
            .all(|(s, row)| *s == row.tether_length - row.aircraft_distance)
        && (r.slack_estimate[0] - slack0).abs() < 1e-12;
    g.check(
        "T4 slack estimate consistent",
        consistent,
        format!("initial slack {:.6} m", r.slack_estimate[0]),
    );

    let mut no_ffwd = ControllerParams::default();
    no_ffwd.outer.ffwd_gain = 0.0;
    let r0 = run_takeoff(
        &TakeoffConfig::default(),
        &SystemParams::default(),
        &no_ffwd,
    )
    .expect("gamma = 0 run");
    let zone_c_on_slide = r0
        .trace
        .iter()
        .any(|row| row.phase == Phase::OnSlide && row.zone == Zone::C);
    g.check(
        "T5 without feedforward spring reaches zone C on the slide",
        zone_c_on_slide,
        format!(
            "first zone C at {:?} s, lift-off at {:?} s",
            r0.first_zone_c, r0.liftoff_time
        ),
    );
}

fn main() -> ExitCode {
    let mut g = Gate { failed: 0 };
    slide_sizing(&mut g);
    spring_comparison(&mut g);
    peak_powers(&mut g);
    controller_suite(&mut g);
    numerical_suite(&mut g);
    determinism(&mut g);
    takeoff_invariants(&mut g);
    if g.failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", g.failed);
        ExitCode::FAILURE
    }
}
