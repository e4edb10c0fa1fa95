//! Command-line front end.
//!
//! Output files are plain CSV with a leading comment line
//! `# msrdme <version> config_sha256=<hex> seed=<seed>`. Floats use the
//! shortest representation that round-trips, so reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::builtins::Scenario;
use crate::config::{parse_config, RunConfig};
use crate::error::Error;
use crate::harness::{sample_grid, sweep_epsilon, sweep_h, Axis, Group, SweepResult, SweepSettings};
use crate::mesh::regularity_report;
use crate::model::{Applicability, Exponent};
use crate::poisson::derive_registry;
use crate::sim::{simulate_exact, simulate_hybrid_with, simulate_splitstep, SplitStepConfig, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "msrdme", version, about = "Coupled exact, hybrid and split-step RDME simulation")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Global seed; overrides `experiment.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for replicate ensembles.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory; overrides `output`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// One coupled run of all three simulators, written as a trajectory CSV.
    Simulate,
    /// Multiscale error against ε over `experiment.eps_grid`.
    SweepEpsilon,
    /// Split-step error against h over `experiment.h_grid`.
    SweepH,
    /// Print the mesh regularity constants.
    ValidateMesh,
    /// Print the effective exponents and predicted orders.
    PredictOrders,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Config(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

struct Context {
    cfg: RunConfig,
    seed: u64,
    header: String,
    out: PathBuf,
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_CONFIG;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(m)) => {
            let _ = writeln!(stderr, "config error: {m}");
            EXIT_CONFIG
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_RUNTIME
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn std::io::Write) -> Result<(), Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("--config <path> is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let cfg = parse_config(&text).map_err(|e| Failure::Config(e.to_string()))?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let seed = cli.seed.unwrap_or(cfg.experiment.seed);
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let header = format!("# msrdme {} config_sha256={hex} seed={seed}\n", env!("CARGO_PKG_VERSION"));
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let ctx = Context { cfg, seed, header, out };
    match cli.command {
        Command::Simulate => simulate(&ctx, stdout),
        Command::SweepEpsilon => sweep(&ctx, Axis::Epsilon, stdout),
        Command::SweepH => sweep(&ctx, Axis::StepH, stdout),
        Command::ValidateMesh => validate_mesh(&ctx, stdout),
        Command::PredictOrders => predict(&ctx, stdout),
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), body)?;
    Ok(())
}

fn scenario(ctx: &Context) -> Result<Scenario, Failure> {
    Ok(ctx.cfg.scenario(ctx.cfg.reference_epsilon())?)
}

fn simulate(ctx: &Context, stdout: &mut dyn std::io::Write) -> Result<(), Failure> {
    let e = &ctx.cfg.experiment;
    let sc = scenario(ctx)?;
    let dt = e.sample_dt.unwrap_or(e.h);
    let mut times = vec![0.0];
    times.extend(sample_grid(e.final_time, Some(dt)).map_err(|err| Failure::Config(err.to_string()))?);
    let half = e.h / 2.0;
    if times.iter().any(|&t| ((t / half).round() * half - t).abs() > 1e-9 * t.max(1.0)) {
        return Err(Failure::Config("experiment.sample_dt must be a multiple of h/2".into()));
    }
    let Scenario { model, mesh, init } = &sc;
    let mut registry = derive_registry(ctx.seed, 0, model, mesh);
    let exact = simulate_exact(model, mesh, &mut registry, init, &times)?;
    let hybrid = simulate_hybrid_with(model, mesh, &mut registry, init, &times, ctx.cfg.hybrid_config())?;
    let split = SplitStepConfig {
        h: e.h,
        ode_substeps: e.ode_substeps,
    };
    let splitstep = simulate_splitstep(model, mesh, &mut registry, init, &times, split)?;

    let mut csv = ctx.header.clone();
    csv.push_str("simulator,time,species,voxel,value\n");
    for (name, traj) in [("exact", &exact), ("hybrid", &hybrid), ("splitstep", &splitstep)] {
        write_trajectory(&mut csv, name, traj, &sc);
    }
    write_file(&ctx.out, "trajectory.csv", &csv)?;
    let _ = writeln!(
        stdout,
        "events: exact {}, hybrid {}, splitstep {}",
        exact.event_count, hybrid.event_count, splitstep.event_count
    );
    Ok(())
}

fn write_trajectory(csv: &mut String, name: &str, traj: &Trajectory, sc: &Scenario) {
    let model = &sc.model;
    let meso = model.meso_species();
    let macro_ = model.macro_species();
    for (t, st) in traj.sample_times.iter().zip(&traj.states) {
        for (i, s) in model.species().iter().enumerate() {
            for j in 0..st.voxels {
                let value = match meso.iter().position(|&m| m == i) {
                    Some(g) => st.meso(g, j).to_string(),
                    None => {
                        let g = macro_.iter().position(|&m| m == i).unwrap();
                        format!("{:?}", st.macro_value(g, j))
                    }
                };
                let _ = writeln!(csv, "{name},{t:?},{},{j},{value}", s.name);
            }
        }
    }
}

fn sweep(ctx: &Context, axis: Axis, stdout: &mut dyn std::io::Write) -> Result<(), Failure> {
    let e = &ctx.cfg.experiment;
    let settings = SweepSettings {
        replicates: e.replicates.unwrap_or(match axis {
            Axis::Epsilon => 2000,
            Axis::StepH => 5000,
        }),
        final_time: e.final_time,
        sample_dt: e.sample_dt,
        seed: ctx.seed,
        options: ctx.cfg.coupled_options(),
    };
    let result = match axis {
        Axis::Epsilon => {
            let grid = e
                .eps_grid
                .as_ref()
                .ok_or_else(|| Failure::Config("experiment.eps_grid is required for sweep-epsilon".into()))?;
            sweep_epsilon(|eps| ctx.cfg.scenario(eps), grid, &settings)?
        }
        Axis::StepH => {
            let grid = e
                .h_grid
                .as_ref()
                .ok_or_else(|| Failure::Config("experiment.h_grid is required for sweep-h".into()))?;
            sweep_h(&scenario(ctx)?, grid, &settings)?
        }
    };
    let stem = match axis {
        Axis::Epsilon => "sweep_epsilon",
        Axis::StepH => "sweep_h",
    };
    write_file(&ctx.out, &format!("{stem}.csv"), &sweep_csv(&ctx.header, &result))?;
    write_file(&ctx.out, &format!("{stem}_timeseries.csv"), &timeseries_csv(&ctx.header, &result))?;
    let summary = summary_text(&ctx.header, &result);
    write_file(&ctx.out, &format!("{stem}_summary.txt"), &summary)?;
    let _ = stdout.write_all(summary.as_bytes());
    match &result.aborted {
        Some(msg) => Err(Failure::Runtime(format!("sweep aborted, partial results written: {msg}"))),
        None => Ok(()),
    }
}

/// One row per grid point and group, estimates at the final time.
pub fn sweep_csv(header: &str, r: &SweepResult) -> String {
    let mut s = header.to_string();
    s.push_str("axis_value,group,rms,rms_stderr,M,S2,N\n");
    for p in &r.points {
        for (g, est) in Group::ALL.iter().zip(&p.estimates) {
            let _ = writeln!(
                s,
                "{:?},{},{:?},{:?},{:?},{:?},{}",
                p.axis_value,
                g.name(),
                est.rms,
                est.rms_stderr,
                est.m,
                est.s2,
                est.n
            );
        }
    }
    s
}

pub fn timeseries_csv(header: &str, r: &SweepResult) -> String {
    let mut s = header.to_string();
    s.push_str("axis_value,time,group,rms,rms_stderr,M,S2,N\n");
    for p in &r.points {
        for (t, ests) in &p.series {
            for (g, est) in Group::ALL.iter().zip(ests) {
                let _ = writeln!(
                    s,
                    "{:?},{t:?},{},{:?},{:?},{:?},{:?},{}",
                    p.axis_value,
                    g.name(),
                    est.rms,
                    est.rms_stderr,
                    est.m,
                    est.s2,
                    est.n
                );
            }
        }
    }
    s
}

fn half(e: Exponent) -> String {
    match e {
        Exponent::Finite(q) => Exponent::Finite(q / 2).to_string(),
        Exponent::Infinite => "inf".into(),
    }
}

pub fn summary_text(header: &str, r: &SweepResult) -> String {
    let p = &r.prediction;
    let mut s = header.to_string();
    let _ = writeln!(s, "axis: {}", r.axis.name());
    let _ = writeln!(s, "u = {}, v = {}, applicable = {}", p.u, p.v, p.applicable);
    let predicted = |g: Group| -> String {
        if p.applicable == Applicability::None {
            return "none".into();
        }
        match (r.axis, g) {
            (Axis::Epsilon, Group::Meso) => half(p.multiscale_meso),
            (Axis::Epsilon, Group::Macro) => half(p.multiscale_macro),
            (Axis::Epsilon, Group::All) => half(p.multiscale_meso.min(p.multiscale_macro)),
            (Axis::StepH, Group::Macro) => "1".into(),
            (Axis::StepH, _) => "1/2".into(),
        }
    };
    for g in Group::ALL {
        let fit = match r.slope(g) {
            Some(f) => format!("{:.4} +/- {:.4} ({} points)", f.slope, f.stderr, f.points),
            None => "n/a".into(),
        };
        let _ = writeln!(s, "{}: rms slope {fit}, predicted {}", g.name(), predicted(g));
    }
    if r.max_meso_distance == 0.0 {
        let _ = writeln!(s, "meso error identically zero");
    }
    if let Some(msg) = &r.aborted {
        let _ = writeln!(s, "aborted: {msg}");
    }
    s
}

fn validate_mesh(ctx: &Context, stdout: &mut dyn std::io::Write) -> Result<(), Failure> {
    let sc = scenario(ctx)?;
    let r = regularity_report(&sc.mesh);
    let mut s = String::new();
    let _ = writeln!(s, "voxels: {}", sc.mesh.num_voxels());
    let _ = writeln!(s, "mean volume: {:?}", r.mean_volume);
    let _ = writeln!(s, "m_V (min volume / mean): {:?}", r.min_volume_ratio);
    let _ = writeln!(s, "M_V (max volume / mean): {:?}", r.max_volume_ratio);
    let _ = writeln!(s, "M_D (max degree): {}", r.max_degree);
    match r.shape_bounds {
        Some((lo, hi)) => {
            let _ = writeln!(s, "shape bounds: {lo:?} .. {hi:?}");
        }
        None => {
            let _ = writeln!(s, "shape bounds: n/a");
        }
    }
    stdout.write_all(s.as_bytes())?;
    Ok(())
}

fn predict(ctx: &Context, stdout: &mut dyn std::io::Write) -> Result<(), Failure> {
    let sc = scenario(ctx)?;
    let p = sc.model.predict_orders();
    let mut s = String::new();
    let _ = writeln!(s, "u = {}", p.u);
    let _ = writeln!(s, "v = {}", p.v);
    let _ = writeln!(s, "multiscale mse exponent (meso): {}", p.multiscale_meso);
    let _ = writeln!(s, "multiscale mse exponent (macro): {}", p.multiscale_macro);
    let _ = writeln!(s, "split-step h coefficient exponent (meso): {}", p.splitstep_meso);
    let _ = writeln!(s, "split-step h^2 coefficient exponent (macro): {}", p.splitstep_macro);
    let _ = writeln!(s, "applicable = {}", p.applicable);
    stdout.write_all(s.as_bytes())?;
    Ok(())
}
