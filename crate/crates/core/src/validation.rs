//! Property suite behind the `validate` subcommand: controller invariants over randomized
//! input sequences and the numerical health checks of the integrator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::controller::{
    combine_refs, slide_torque, winch_fbck, winch_torque, ControllerParams, WinchControllerState,
    Zone,
};
use crate::integrator::rk4_step;
use crate::params::{InitConditions, SystemParams};
use crate::spring_design::{evaluate_spring_traced, StudySettings};

pub const DEFAULT_SEED: u64 = 0x5EED_CAFE;
pub const DEFAULT_SEQUENCES: usize = 1_000_000;
const SEQUENCE_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

/// Source of test inputs in `[0, 1)`.
pub enum InputSource {
    /// ChaCha8 stream with a fixed seed.
    Seeded(Box<ChaCha8Rng>),
    /// Weyl's quadratic sequence `frac(n² α)` with `α = 1/φ`, in 64-bit fixed point:
    /// equidistributed, with far less correlation between neighbours than `frac(n α)`.
    /// No random number generator involved.
    Seedless { n: u64 },
}

impl InputSource {
    pub fn seeded(seed: u64) -> Self {
        InputSource::Seeded(Box::new(ChaCha8Rng::seed_from_u64(seed)))
    }

    pub fn seedless() -> Self {
        InputSource::Seedless { n: 0 }
    }

    pub fn unit(&mut self) -> f64 {
        match self {
            InputSource::Seeded(rng) => rng.random::<f64>(),
            InputSource::Seedless { n } => {
                // floor(2^64 / phi)
                const ALPHA: u64 = 0x9E37_79B9_7F4A_7C15;
                *n += 1;
                let x = n.wrapping_mul(*n).wrapping_mul(ALPHA);
                (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
            }
        }
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// Controller properties at the default gains and limits, `sequences` random sequences each.
pub fn controller_properties(src: &mut InputSource, sequences: usize) -> Vec<Check> {
    let ctrl = ControllerParams::default();
    let p = ctrl.outer;
    let travel = SystemParams::default().spring.max_travel;
    let mut checks = Vec::new();

    let mut worst = (f64::INFINITY, f64::NEG_INFINITY);
    let mut sign_violations = 0usize;
    for _ in 0..sequences {
        let mut st = WinchControllerState {
            prev_fbck_ref: src.range(p.fbck_min, p.fbck_max),
            zone: Zone::B,
        };
        for _ in 0..SEQUENCE_LEN {
            let (r, next) = winch_fbck(st, src.range(0.0, travel), &p);
            worst = (worst.0.min(r), worst.1.max(r));
            if (next.zone == Zone::A && r > 0.0) || (next.zone == Zone::C && r < 0.0) {
                sign_violations += 1;
            }
            st = next;
        }
    }
    checks.push(Check::new(
        "feedback reference bounded",
        worst.0 >= p.fbck_min && worst.1 <= p.fbck_max && sign_violations == 0,
        format!(
            "{sequences} sequences, range [{}, {}], zone sign violations {sign_violations}",
            worst.0, worst.1
        ),
    ));

    let mut drift = 0usize;
    for _ in 0..sequences / 100 {
        let start = src.range(p.fbck_min, p.fbck_max);
        let mut st = WinchControllerState {
            prev_fbck_ref: start,
            zone: Zone::B,
        };
        for _ in 0..100 {
            st = winch_fbck(st, src.range(p.zone_a_limit, p.zone_c_limit), &p).1;
        }
        if st.prev_fbck_ref.to_bits() != start.to_bits() {
            drift += 1;
        }
    }
    checks.push(Check::new(
        "zone B holds reference",
        drift == 0,
        format!(
            "{} sequences of 100 steps, {drift} drifted",
            sequences / 100
        ),
    ));

    let mut bad_entry = 0usize;
    for _ in 0..sequences {
        let pos = WinchControllerState {
            prev_fbck_ref: src.range(f64::MIN_POSITIVE, p.fbck_max),
            zone: Zone::B,
        };
        if winch_fbck(pos, src.range(0.0, p.zone_a_limit), &p).0 > 0.0 {
            bad_entry += 1;
        }
        let neg = WinchControllerState {
            prev_fbck_ref: src.range(p.fbck_min, -f64::MIN_POSITIVE),
            zone: Zone::B,
        };
        if winch_fbck(neg, src.range(p.zone_c_limit, travel), &p).0 < 0.0 {
            bad_entry += 1;
        }
    }
    checks.push(Check::new(
        "zone entry re-saturation",
        bad_entry == 0,
        format!("{sequences} entries into A and C each, {bad_entry} kept the wrong sign"),
    ));

    let mut mismatches = 0usize;
    for i in 0..sequences {
        let ffwd = src.range(-200.0, 200.0);
        let fbck = src.range(p.fbck_min, p.fbck_max);
        let slide_speed = match i % 4 {
            0 => 0.0,
            _ => src.range(-100.0, 100.0),
        };
        let expected = if slide_speed > 0.0 {
            ffwd.max(fbck)
        } else {
            fbck
        };
        if combine_refs(ffwd, fbck, slide_speed).to_bits() != expected.to_bits() {
            mismatches += 1;
        }
    }
    checks.push(Check::new(
        "reference arbitration",
        mismatches == 0,
        format!("{sequences} samples, {mismatches} mismatches"),
    ));

    let mut peak = (0.0f64, 0.0f64);
    for _ in 0..sequences {
        let us = slide_torque(
            src.range(-100.0, 100.0),
            src.range(-100.0, 100.0),
            src.range(-500.0, 500.0),
            &ctrl.slide,
        );
        let uw = winch_torque(
            src.range(-500.0, 500.0),
            src.range(-500.0, 500.0),
            &ctrl.winch,
        );
        peak = (peak.0.max(us.abs()), peak.1.max(uw.abs()));
    }
    checks.push(Check::new(
        "torque saturation",
        peak.0 <= ctrl.slide.torque_limit && peak.1 <= ctrl.winch.torque_limit,
        format!("max |u_s| = {}, max |u_w| = {}", peak.0, peak.1),
    ));
    checks
}

/// Observed convergence order of RK4 on `x'' = -x` from step `dt` to `dt/2`.
pub fn rk4_observed_order(dt: f64, t_end: f64) -> f64 {
    let err = |h: f64| {
        let n = (t_end / h).round() as usize;
        let mut y = [1.0, 0.0];
        for _ in 0..n {
            y = rk4_step(|y: &[f64; 2]| Ok::<_, ()>([y[1], -y[0]]), &y, h).unwrap();
        }
        (y[0] - (n as f64 * h).cos()).abs()
    };
    (err(dt) / err(dt / 2.0)).log2()
}

pub fn numerical_properties() -> Vec<Check> {
    let mut checks = Vec::new();
    let order = rk4_observed_order(0.02, 10.0);
    checks.push(Check::new(
        "rk4 observed order",
        order >= 3.9,
        format!("order {order:.4}"),
    ));

    let base = SystemParams::default();
    let ic = InitConditions::default();
    let mut worst_rel = 0.0f64;
    let mut bad_samples = 0usize;
    for travel in [0.05, 0.2, 0.35] {
        let p = base.with_spring(travel, base.spring.stiffness);
        let coarse = StudySettings {
            dt: 1e-3,
            ..Default::default()
        };
        let fine = StudySettings::default();
        match (
            evaluate_spring_traced(&p, &ic, &coarse),
            evaluate_spring_traced(&p, &ic, &fine),
        ) {
            (Ok((a, ta)), Ok((b, tb))) => {
                worst_rel = worst_rel.max((a.min_speed - b.min_speed).abs() / b.min_speed);
                for tr in [&ta, &tb] {
                    bad_samples += tr.tether_force.iter().filter(|f| !(**f >= 0.0)).count();
                    bad_samples += tr
                        .states
                        .iter()
                        .filter(|s| !(0.0..=travel).contains(&s.spring_compression))
                        .count();
                }
            }
            _ => bad_samples += 1,
        }
    }
    checks.push(Check::new(
        "min speed converged in dt",
        worst_rel < 0.005,
        format!("max relative change dt=1e-3 vs 1e-4: {worst_rel:.3e}"),
    ));
    checks.push(Check::new(
        "force and compression in range",
        bad_samples == 0,
        format!("{bad_samples} bad samples"),
    ));
    checks
}

pub fn run_all(src: &mut InputSource, sequences: usize) -> Vec<Check> {
    let mut checks = controller_properties(src, sequences);
    checks.extend(numerical_properties());
    checks
}
