//! Coupled Monte Carlo error measurement.
//!
//! For each replicate one [`PathRegistry`] is derived and consumed by the
//! exact, hybrid and split-step simulators in that order, so the measured
//! distances are pathwise. Replicates run on the rayon pool and are gathered
//! by index, which keeps every estimate independent of scheduling.

use rayon::prelude::*;

use crate::builtins::Scenario;
use crate::error::{contract, Error, Result};
use crate::model::OrderPrediction;
use crate::poisson::{derive_registry, splitmix64};
use crate::sim::{
    simulate_exact, simulate_hybrid_with, simulate_splitstep, HybridConfig, HybridState, SplitStepConfig,
};

/// Species group over which a squared distance is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Meso,
    Macro,
    All,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::Meso, Group::Macro, Group::All];

    pub fn name(self) -> &'static str {
        match self {
            Group::Meso => "meso",
            Group::Macro => "macro",
            Group::All => "all",
        }
    }
}

/// Squared Euclidean distances between two scaled states, split by group.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SquaredDistance {
    pub meso: f64,
    pub macro_: f64,
}

impl SquaredDistance {
    pub fn between(a: &HybridState, b: &HybridState) -> Self {
        let meso = a
            .meso
            .iter()
            .zip(&b.meso)
            .map(|(&x, &y)| {
                let d = x as f64 - y as f64;
                d * d
            })
            .sum();
        let macro_ = a
            .macro_values
            .iter()
            .zip(&b.macro_values)
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        Self { meso, macro_ }
    }

    pub fn get(&self, g: Group) -> f64 {
        match g {
            Group::Meso => self.meso,
            Group::Macro => self.macro_,
            Group::All => self.meso + self.macro_,
        }
    }
}

/// How the simulators of one replicate obtain their Poisson paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// All simulators read the same registry.
    Shared,
    /// The hybrid and split-step runs use an unrelated registry. Only useful
    /// as a control showing what the coupling buys.
    Independent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledOptions {
    /// Run the exact simulator and report `‖X̄ − Z̄‖²`.
    pub exact: bool,
    /// Split-step sizes to compare against the hybrid, `‖Z̄ − Y^(h)‖²`.
    pub split_steps: Vec<f64>,
    pub ode_substeps: usize,
    pub hybrid: HybridConfig,
    pub coupling: Coupling,
}

impl Default for CoupledOptions {
    fn default() -> Self {
        Self {
            exact: true,
            split_steps: Vec::new(),
            ode_substeps: 8,
            hybrid: HybridConfig::default(),
            coupling: Coupling::Shared,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledSample {
    pub replicate: u64,
    /// `‖X̄ − Z̄‖²` per sample time, when the exact simulator ran.
    pub multiscale: Option<Vec<SquaredDistance>>,
    /// `‖Z̄ − Y^(h)‖²` per sample time, one entry per split step.
    pub splitting: Vec<Vec<SquaredDistance>>,
}

/// Runs the coupled simulators for one replicate.
pub fn coupled_replicate(
    scenario: &Scenario,
    opts: &CoupledOptions,
    global_seed: u64,
    replicate: u64,
    sample_times: &[f64],
) -> Result<CoupledSample> {
    let last = sample_times.last().copied().unwrap_or(0.0);
    for &h in &opts.split_steps {
        if !(h > 0.0) {
            return Err(contract(format!("split step must be positive, got {h}")));
        }
        if last < h {
            return Err(contract(format!(
                "final time {last} is shorter than the split step {h}"
            )));
        }
        for &s in sample_times {
            let k = (s / h).round();
            if (k * h - s).abs() > 1e-9 * s.max(1.0) {
                return Err(contract(format!("sample time {s} is not a multiple of h = {h}")));
            }
        }
    }
    let annotate = |e: Error| Error::Replicate {
        replicate,
        source: Box::new(e),
    };
    let Scenario { model, mesh, init } = scenario;
    let mut registry = derive_registry(global_seed, replicate, model, mesh);

    let exact = if opts.exact {
        Some(simulate_exact(model, mesh, &mut registry, init, sample_times).map_err(annotate)?)
    } else {
        None
    };
    if opts.coupling == Coupling::Independent {
        registry = derive_registry(splitmix64(global_seed ^ 0x1d3f_5a7c_9b2e_4f61), replicate, model, mesh);
    }
    let hybrid =
        simulate_hybrid_with(model, mesh, &mut registry, init, sample_times, opts.hybrid).map_err(annotate)?;
    let multiscale = exact.map(|x| {
        x.states
            .iter()
            .zip(&hybrid.states)
            .map(|(a, b)| SquaredDistance::between(a, b))
            .collect()
    });
    let mut splitting = Vec::with_capacity(opts.split_steps.len());
    for &h in &opts.split_steps {
        let cfg = SplitStepConfig {
            h,
            ode_substeps: opts.ode_substeps,
        };
        let split = simulate_splitstep(model, mesh, &mut registry, init, sample_times, cfg).map_err(annotate)?;
        splitting.push(
            hybrid
                .states
                .iter()
                .zip(&split.states)
                .map(|(a, b)| SquaredDistance::between(a, b))
                .collect(),
        );
    }
    Ok(CoupledSample {
        replicate,
        multiscale,
        splitting,
    })
}

/// Mean `M` and unbiased dispersion `S²` of squared errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmsEstimate {
    pub m: f64,
    pub s2: f64,
    pub n: usize,
    pub rms: f64,
    /// Delta-method standard error of `√M`.
    pub rms_stderr: f64,
}

pub fn rms_estimate(squared: &[f64]) -> Result<RmsEstimate> {
    let n = squared.len();
    if n < 2 {
        return Err(contract(format!("need at least 2 samples, got {n}")));
    }
    let m = squared.iter().sum::<f64>() / n as f64;
    let s2 = squared.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    let rms = m.sqrt();
    let rms_stderr = if rms > 0.0 {
        (s2 / n as f64).sqrt() / (2.0 * rms)
    } else {
        0.0
    };
    Ok(RmsEstimate {
        m,
        s2,
        n,
        rms,
        rms_stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the residual variance.
    pub stderr: f64,
    /// Points that entered the fit.
    pub points: usize,
}

/// Ordinary least squares of `log_y` on `log_x`. Non-finite points (a zero
/// RMS gives `-∞`) are dropped with a warning.
pub fn fit_slope(log_x: &[f64], log_y: &[f64]) -> Result<SlopeFit> {
    if log_x.len() != log_y.len() {
        return Err(contract("x and y must have the same length"));
    }
    let pts: Vec<(f64, f64)> = log_x
        .iter()
        .zip(log_y)
        .filter(|(x, y)| {
            let ok = x.is_finite() && y.is_finite();
            if !ok {
                log::warn!("dropping non-finite point ({x}, {y}) from slope fit");
            }
            ok
        })
        .map(|(&x, &y)| (x, y))
        .collect();
    let n = pts.len();
    if n < 3 {
        return Err(contract(format!("slope fit needs at least 3 finite points, got {n}")));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(contract("slope fit needs at least two distinct x values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        stderr,
        points: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Epsilon,
    StepH,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Epsilon => "epsilon",
            Axis::StepH => "h",
        }
    }
}

/// Estimates at one grid point: final time first, then the full series.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub axis_value: f64,
    /// Indexed like [`Group::ALL`], at the final sample time.
    pub estimates: [RmsEstimate; 3],
    /// Per sample time, indexed like [`Group::ALL`].
    pub series: Vec<(f64, [RmsEstimate; 3])>,
}

impl SweepPoint {
    pub fn estimate(&self, g: Group) -> &RmsEstimate {
        &self.estimates[Group::ALL.iter().position(|&x| x == g).unwrap()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Axis,
    pub points: Vec<SweepPoint>,
    /// Fitted RMS slope per group, `None` when fewer than 3 finite points.
    pub slopes: [Option<SlopeFit>; 3],
    pub prediction: OrderPrediction,
    /// Set when a grid point failed; `points` then holds the completed prefix.
    pub aborted: Option<String>,
    /// Largest meso-group squared distance seen in any replicate at any time.
    pub max_meso_distance: f64,
}

impl SweepResult {
    pub fn slope(&self, g: Group) -> Option<&SlopeFit> {
        self.slopes[Group::ALL.iter().position(|&x| x == g).unwrap()].as_ref()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub replicates: usize,
    pub final_time: f64,
    /// Output grid spacing; `None` samples the final time only.
    pub sample_dt: Option<f64>,
    pub seed: u64,
    pub options: CoupledOptions,
}

pub(crate) fn sample_grid(final_time: f64, dt: Option<f64>) -> Result<Vec<f64>> {
    if !(final_time > 0.0 && final_time.is_finite()) {
        return Err(contract(format!("final time must be positive, got {final_time}")));
    }
    match dt {
        None => Ok(vec![final_time]),
        Some(dt) => {
            if !(dt > 0.0) {
                return Err(contract("sample spacing must be positive"));
            }
            let n = (final_time / dt).round();
            if (n * dt - final_time).abs() > 1e-9 * final_time.max(1.0) {
                return Err(contract(format!("final time {final_time} is not a multiple of {dt}")));
            }
            Ok((1..=n as u64).map(|k| k as f64 * dt).collect())
        }
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(contract(format!("a sweep needs at least 3 grid points, got {}", grid.len())));
    }
    if grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(contract("grid values must be positive"));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(contract("grid must be decreasing"));
    }
    Ok(())
}

fn estimates_from(per_rep: &[Vec<SquaredDistance>], times: &[f64]) -> Result<Vec<(f64, [RmsEstimate; 3])>> {
    times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut out = [None; 3];
            for (gi, g) in Group::ALL.iter().enumerate() {
                let xs: Vec<f64> = per_rep.iter().map(|d| d[k].get(*g)).collect();
                out[gi] = Some(rms_estimate(&xs)?);
            }
            Ok((t, out.map(Option::unwrap)))
        })
        .collect()
}

fn run_replicates<F>(n: usize, f: F) -> Result<Vec<CoupledSample>>
where
    F: Fn(u64) -> Result<CoupledSample> + Sync + Send,
{
    (0..n as u64).into_par_iter().map(f).collect()
}

fn fit_all(axis: &[f64], points: &[SweepPoint]) -> [Option<SlopeFit>; 3] {
    let lx: Vec<f64> = axis.iter().map(|x| x.ln()).collect();
    Group::ALL.map(|g| {
        let ly: Vec<f64> = points.iter().map(|p| p.estimate(g).rms.ln()).collect();
        fit_slope(&lx[..ly.len()], &ly).ok()
    })
}

fn max_meso(samples: &[Vec<SquaredDistance>]) -> f64 {
    samples
        .iter()
        .flat_map(|s| s.iter().map(|d| d.meso))
        .fold(0.0, f64::max)
}

/// Multiscale error `‖X̄ − Z̄‖` as a function of `ε`.
pub fn sweep_epsilon<F>(family: F, eps_grid: &[f64], settings: &SweepSettings) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<Scenario>,
{
    check_grid(eps_grid)?;
    if settings.replicates < 2 {
        return Err(contract("a sweep needs at least 2 replicates"));
    }
    let times = sample_grid(settings.final_time, settings.sample_dt)?;
    let opts = CoupledOptions {
        exact: true,
        ..settings.options.clone()
    };
    let prediction = family(eps_grid[0])?.model.predict_orders();
    let mut points = Vec::new();
    let mut aborted = None;
    let mut max_meso_distance: f64 = 0.0;
    for &eps in eps_grid {
        let outcome = family(eps).and_then(|scenario| {
            let samples = run_replicates(settings.replicates, |rep| {
                coupled_replicate(&scenario, &opts, settings.seed, rep, &times)
            })?;
            let ms: Vec<Vec<SquaredDistance>> = samples.into_iter().map(|s| s.multiscale.unwrap()).collect();
            Ok((estimates_from(&ms, &times)?, max_meso(&ms)))
        });
        match outcome {
            Ok((series, mm)) => {
                max_meso_distance = max_meso_distance.max(mm);
                points.push(SweepPoint {
                    axis_value: eps,
                    estimates: series.last().unwrap().1,
                    series,
                });
            }
            Err(e) => {
                log::error!("epsilon sweep aborted at eps = {eps}: {e}");
                aborted = Some(format!("eps = {eps}: {e}"));
                break;
            }
        }
    }
    Ok(SweepResult {
        axis: Axis::Epsilon,
        slopes: fit_all(eps_grid, &points),
        points,
        prediction,
        aborted,
        max_meso_distance,
    })
}

/// Splitting error `‖Z̄ − Y^(h)‖` as a function of `h` at fixed `ε`.
pub fn sweep_h(scenario: &Scenario, h_grid: &[f64], settings: &SweepSettings) -> Result<SweepResult> {
    check_grid(h_grid)?;
    if settings.replicates < 2 {
        return Err(contract("a sweep needs at least 2 replicates"));
    }
    let times = sample_grid(settings.final_time, settings.sample_dt)?;
    let opts = CoupledOptions {
        exact: false,
        split_steps: h_grid.to_vec(),
        ..settings.options.clone()
    };
    let prediction = scenario.model.predict_orders();
    let (points, aborted, max_meso_distance) = match run_replicates(settings.replicates, |rep| {
        coupled_replicate(scenario, &opts, settings.seed, rep, &times)
    }) {
        Ok(samples) => {
            let mut points = Vec::new();
            let mut mm: f64 = 0.0;
            for (k, &h) in h_grid.iter().enumerate() {
                let per_rep: Vec<Vec<SquaredDistance>> =
                    samples.iter().map(|s| s.splitting[k].clone()).collect();
                mm = mm.max(max_meso(&per_rep));
                let series = estimates_from(&per_rep, &times)?;
                points.push(SweepPoint {
                    axis_value: h,
                    estimates: series.last().unwrap().1,
                    series,
                });
            }
            (points, None, mm)
        }
        Err(Error::Contract(msg)) => return Err(Error::Contract(msg)),
        Err(e) => {
            log::error!("h sweep aborted: {e}");
            (Vec::new(), Some(e.to_string()), 0.0)
        }
    };
    Ok(SweepResult {
        axis: Axis::StepH,
        slopes: fit_all(h_grid, &points),
        points,
        prediction,
        aborted,
        max_meso_distance,
    })
}

/// Ensemble estimate of `E[sup_t ‖X̄(t)‖₁^p]` over the output grid, from
/// exact trajectories.
pub fn moment_diagnostic(
    scenario: &Scenario,
    p: u32,
    replicates: usize,
    final_time: f64,
    sample_dt: f64,
    seed: u64,
) -> Result<f64> {
    if !(1..=4).contains(&p) {
        return Err(contract(format!("moment order must be in 1..=4, got {p}")));
    }
    if replicates == 0 {
        return Err(contract("need at least one replicate"));
    }
    let mut times = vec![0.0];
    times.extend(sample_grid(final_time, Some(sample_dt))?);
    let Scenario { model, mesh, init } = scenario;
    let sups: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|rep| {
            let mut registry = derive_registry(seed, rep, model, mesh);
            let traj = simulate_exact(model, mesh, &mut registry, init, &times)?;
            Ok(traj.states.iter().map(|s| s.l1_norm()).fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    Ok(sups.iter().map(|s| s.powi(p as i32)).sum::<f64>() / replicates as f64)
}
