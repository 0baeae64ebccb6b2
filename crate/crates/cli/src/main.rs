use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use awe_takeoff::config::{load_config, Config};
use awe_takeoff::error::{ConfigError, ParamError, SimError};
use awe_takeoff::io;
use awe_takeoff::spring_design::{evaluate_spring_traced, sweep, SweepGrid, SweepPoint};
use awe_takeoff::takeoff::run_takeoff;
use awe_takeoff::validation::{run_all, InputSource, DEFAULT_SEED, DEFAULT_SEQUENCES};
use clap::{Args, Parser, Subcommand};

/// Output directory used when `--out` is not given.
const OUT_ENV: &str = "AWE_TAKEOFF_OUT";
const COMPARE_TRAVELS: [f64; 3] = [0.05, 0.2, 0.35];

#[derive(Parser)]
#[command(
    name = "awe-takeoff",
    version,
    about = "Ground-station take-off simulation"
)]
struct Cli {
    /// JSON config file, or "default" for the built-in parameters.
    #[arg(long, global = true, default_value = "default")]
    config: String,
    /// Output directory [default: $AWE_TAKEOFF_OUT or ./out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Integration step [s]; overrides the config for the selected run.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Use a deterministic low-discrepancy sequence instead of the seeded generator.
    #[arg(long, global = true)]
    seedless: bool,
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design model at spring travels 0.05, 0.2 and 0.35 m: one trace each plus a summary.
    SpringCompare,
    /// Feasibility over a travel x stiffness grid.
    Sweep(SweepArgs),
    /// Closed-loop take-off run: trace and summary.
    Takeoff,
    /// Controller property suite and numerical checks.
    Validate {
        #[arg(long, default_value_t = DEFAULT_SEQUENCES)]
        sequences: usize,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Spring travel values [m], comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35])]
    travel: Vec<f64>,
    /// Spring stiffness values [N/m], comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [35.0, 70.0, 140.0])]
    stiffness: Vec<f64>,
    /// Evaluate grid points one after another.
    #[arg(long)]
    serial: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("cannot write {path}: {message}")]
    Write { path: PathBuf, message: String },
    #[error("{0} validation checks failed")]
    Validation(usize),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) | CliError::Param(_) => "config",
            CliError::Sim(_) => "simulation",
            CliError::Write { .. } => "io",
            CliError::Validation(_) => "validation",
        }
    }
}

struct Ctx {
    cfg: Config,
    out: PathBuf,
    quiet: bool,
}

impl Ctx {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }

    fn write<E: std::fmt::Display>(
        &self,
        name: &str,
        f: impl FnOnce(BufWriter<File>) -> Result<(), E>,
    ) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        let err = |message: String| CliError::Write {
            path: path.clone(),
            message,
        };
        std::fs::create_dir_all(&self.out).map_err(|e| err(e.to_string()))?;
        let file = File::create(&path).map_err(|e| err(e.to_string()))?;
        f(BufWriter::new(file)).map_err(|e| err(e.to_string()))?;
        self.say(format!("wrote {}", path.display()));
        Ok(path)
    }
}

fn build_config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = if cli.config == "default" {
        Config::default()
    } else {
        load_config(Path::new(&cli.config))?
    };
    if let Some(dt) = cli.dt {
        match cli.command {
            Command::Takeoff => cfg.simulation.takeoff.dt = dt,
            _ => cfg.simulation.design.dt = dt,
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn spring_compare(ctx: &Ctx) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let sys = cfg.system();
    let mut points = Vec::new();
    for travel in COMPARE_TRAVELS {
        let p = sys.with_spring(travel, sys.spring.stiffness);
        let (result, trace) =
            evaluate_spring_traced(&p, &cfg.simulation.initial, &cfg.simulation.design)?;
        ctx.write(&format!("spring_travel_{travel}.csv"), |w| {
            io::write_design_trace(w, &trace)
        })?;
        ctx.say(format!(
            "travel {travel} m: min speed {:.4} m/s at {:.4} s, feasible {}",
            result.min_speed, result.t_at_min, result.feasible
        ));
        points.push(SweepPoint {
            travel,
            stiffness: p.spring.stiffness,
            result: Ok(result),
        });
    }
    ctx.write("spring_compare.csv", |w| io::write_feasibility(w, &points))?;
    Ok(())
}

fn run_sweep(ctx: &Ctx, args: &SweepArgs) -> Result<(), CliError> {
    let grid = SweepGrid {
        travel_values: args.travel.clone(),
        stiffness_values: args.stiffness.clone(),
        params: ctx.cfg.system(),
        init: ctx.cfg.simulation.initial,
    };
    let points = sweep(&grid, &ctx.cfg.simulation.design, !args.serial)?;
    let feasible = points
        .iter()
        .filter(|p| matches!(&p.result, Ok(r) if r.feasible))
        .count();
    ctx.write("feasibility.csv", |w| io::write_feasibility(w, &points))?;
    ctx.say(format!(
        "{feasible} of {} grid points feasible",
        points.len()
    ));
    Ok(())
}

fn takeoff(ctx: &Ctx) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let r = run_takeoff(&cfg.simulation.takeoff, &cfg.system(), &cfg.controller)?;
    ctx.write("takeoff_trace.csv", |w| {
        io::write_takeoff_trace(w, &r.trace)
    })?;
    ctx.write("takeoff_summary.csv", |w| io::write_takeoff_summary(w, &r))?;
    match (r.liftoff_time, r.liftoff_distance) {
        (Some(t), Some(d)) => ctx.say(format!("lift-off at {t:.4} s after {d:.4} m")),
        _ => ctx.say("no lift-off within the simulated horizon"),
    }
    ctx.say(format!(
        "peak power: slide {:.1} W, winch {:.1} W",
        r.peak_slide_power, r.peak_winch_power
    ));
    if let Some(t) = r.stall_risk {
        ctx.say(format!(
            "stall risk: spring fully compressed with rising force at {t:.4} s"
        ));
    }
    Ok(())
}

fn validate(ctx: &Ctx, seedless: bool, sequences: usize) -> Result<(), CliError> {
    let mut src = if seedless {
        InputSource::seedless()
    } else {
        InputSource::seeded(DEFAULT_SEED)
    };
    let checks = run_all(&mut src, sequences);
    for c in &checks {
        ctx.say(format!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    match checks.iter().filter(|c| !c.passed).count() {
        0 => Ok(()),
        n => Err(CliError::Validation(n)),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let ctx = Ctx {
        cfg: build_config(cli)?,
        out: cli
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out")),
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::SpringCompare => spring_compare(&ctx),
        Command::Sweep(args) => run_sweep(&ctx, args),
        Command::Takeoff => takeoff(&ctx),
        Command::Validate { sequences } => validate(&ctx, cli.seedless, *sequences),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
