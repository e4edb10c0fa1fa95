use crate::error::{contract, Error, Result};
use crate::mesh::Mesh;
use crate::model::Model;
use crate::poisson::PathRegistry;

use super::exact::checked_rate;
use super::network::{Clocks, JumpScope, Network};
use super::ode::DriftSystem;
use super::{check_sample_times, HybridConfig, HybridState, Trajectory};

/// Hybrid process: macroscopic species follow the drift, mesoscopic species
/// jump on the shared Poisson paths.
///
/// Channels whose rates only read mesoscopic counts are handled like the
/// exact simulator. Channels reading a macroscopic value have their internal
/// time integrated together with the ODE; crossings of the next arrival are
/// located by safeguarded Newton iteration on the step length.
pub fn simulate_hybrid(
    model: &Model,
    mesh: &Mesh,
    registry: &mut PathRegistry,
    init: &HybridState,
    sample_times: &[f64],
) -> Result<Trajectory> {
    simulate_hybrid_with(model, mesh, registry, init, sample_times, HybridConfig::default())
}

pub fn simulate_hybrid_with(
    model: &Model,
    mesh: &Mesh,
    registry: &mut PathRegistry,
    init: &HybridState,
    sample_times: &[f64],
    cfg: HybridConfig,
) -> Result<Trajectory> {
    check_sample_times(sample_times)?;
    if !(cfg.max_step > 0.0 && cfg.event_tol > 0.0) {
        return Err(contract("hybrid step and event tolerance must be positive"));
    }
    let net = Network::build(model, mesh, registry, JumpScope::MesoOnly)?;
    let drift = DriftSystem::new(model, mesh);
    let counts = init.to_unscaled(model)?;
    let mut clocks = Clocks::new(&net, registry);
    let flows: Vec<usize> = (0..net.channels.len()).filter(|&c| net.channels[c].flowing).collect();
    for c in 0..net.channels.len() {
        if !net.channels[c].flowing {
            let a = checked_rate(&net, c, &counts, 0.0)?;
            clocks.set_rate(c, 0.0, a);
        }
    }
    let dim = drift.macro_positions().len() + flows.len();
    let mut sim = Hybrid {
        rhs: Rhs {
            work: counts.clone(),
            net,
            drift,
            flows,
            t: 0.0,
        },
        cfg,
        counts,
        t: 0.0,
        clocks,
        rk: Rk4::new(dim),
        y0: vec![0.0; dim],
        y1: vec![0.0; dim],
        ys: vec![0.0; dim],
        dy: vec![0.0; dim],
        events: 0,
    };

    let mut states = Vec::with_capacity(sample_times.len());
    for &s in sample_times {
        sim.advance_to(s, registry)?;
        states.push(HybridState::from_unscaled(model, &sim.counts, sim.rhs.net.nvox, s));
    }
    Ok(Trajectory {
        sample_times: sample_times.to_vec(),
        states,
        event_count: sim.events,
    })
}

/// Right-hand side of the augmented system: macroscopic drift followed by
/// the rates of the flowing channels.
pub(super) struct Rhs<'a> {
    pub net: Network<'a>,
    pub drift: DriftSystem<'a>,
    pub flows: Vec<usize>,
    /// Full state vector with the macroscopic entries overwritten per evaluation.
    pub work: Vec<f64>,
    /// Current time, for diagnostics only.
    pub t: f64,
}

impl Rhs<'_> {
    fn macro_len(&self) -> usize {
        self.drift.macro_positions().len()
    }

    fn eval(&mut self, y: &[f64], out: &mut [f64]) -> Result<()> {
        let m = self.macro_len();
        for (idx, &p) in self.drift.macro_positions().iter().enumerate() {
            self.work[p] = y[idx];
        }
        self.drift.eval(&self.work, &mut out[..m]);
        for (f, &c) in self.flows.iter().enumerate() {
            out[m + f] = self.net.rate(c, &self.work);
        }
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::Simulation {
                time: self.t,
                message: "non-finite drift".into(),
            });
        }
        Ok(())
    }
}

/// Classical fourth-order Runge–Kutta with preallocated stages.
pub(super) struct Rk4 {
    k: [Vec<f64>; 4],
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Self {
            k: [vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]],
            stage: vec![0.0; dim],
        }
    }

    /// Derivative at the start of the step, as left by the last call to
    /// [`Rk4::first_stage`].
    pub fn k1(&self) -> &[f64] {
        &self.k[0]
    }

    pub fn first_stage(&mut self, rhs: &mut Rhs<'_>, y0: &[f64]) -> Result<()> {
        rhs.eval(y0, &mut self.k[0])
    }

    /// One step of length `dt`; `first_stage` must have been called on `y0`
    /// and is reused, so several step lengths can be tried from one start.
    pub fn step(&mut self, rhs: &mut Rhs<'_>, y0: &[f64], dt: f64, out: &mut [f64]) -> Result<()> {
        let [k1, k2, k3, k4] = &mut self.k;
        let stage = &mut self.stage;
        for i in 0..y0.len() {
            stage[i] = y0[i] + 0.5 * dt * k1[i];
        }
        rhs.eval(stage, k2)?;
        for i in 0..y0.len() {
            stage[i] = y0[i] + 0.5 * dt * k2[i];
        }
        rhs.eval(stage, k3)?;
        for i in 0..y0.len() {
            stage[i] = y0[i] + dt * k3[i];
        }
        rhs.eval(stage, k4)?;
        for i in 0..y0.len() {
            out[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(())
    }
}

struct Hybrid<'a> {
    rhs: Rhs<'a>,
    cfg: HybridConfig,
    counts: Vec<f64>,
    t: f64,
    clocks: Clocks,
    rk: Rk4,
    y0: Vec<f64>,
    y1: Vec<f64>,
    ys: Vec<f64>,
    dy: Vec<f64>,
    events: u64,
}

impl Hybrid<'_> {
    fn advance_to(&mut self, target: f64, registry: &mut PathRegistry) -> Result<()> {
        loop {
            let (c, tau) = self.clocks.peek().unwrap_or((usize::MAX, f64::INFINITY));
            let end = tau.min(target);
            if let Some(f) = self.flow_until(end)? {
                let c = self.rhs.flows[f];
                self.fire(c, registry)?;
                continue;
            }
            if tau <= target {
                self.t = tau;
                self.fire(c, registry)?;
            } else {
                self.t = target.max(self.t);
                return Ok(());
            }
        }
    }

    fn fire(&mut self, c: usize, registry: &mut PathRegistry) -> Result<()> {
        let t = self.t;
        let net = &self.rhs.net;
        self.clocks.fire(c, t, net.channels[c].reg, registry);
        net.apply(c, &mut self.counts, t)?;
        self.rhs.work.copy_from_slice(&self.counts);
        for &dep in &net.dependents[c] {
            if !net.channels[dep].flowing {
                let a = checked_rate(net, dep, &self.counts, t)?;
                self.clocks.set_rate(dep, t, a);
            }
        }
        self.events += 1;
        Ok(())
    }

    /// Integrates the flow from the current time up to `end`, stopping early
    /// if a flowing channel reaches its next arrival. Returns that channel's
    /// position in `flows`.
    fn flow_until(&mut self, end: f64) -> Result<Option<usize>> {
        if self.rhs.drift.is_trivial() {
            self.t = self.t.max(end);
            return Ok(None);
        }
        let m = self.rhs.macro_len();
        while self.t < end {
            self.rhs.t = self.t;
            let tol = self.cfg.event_tol * (1.0 + self.t);
            let mut dt = (end - self.t).min(self.cfg.max_step);
            let mut to_end = dt == end - self.t;

            self.load_y0();
            self.rk.first_stage(&mut self.rhs, &self.y0)?;
            for (f, &c) in self.rhs.flows.iter().enumerate() {
                let gap = self.clocks.clocks[c].next_arrival - self.y0[m + f];
                let a = self.rk.k1()[m + f];
                if gap <= 0.0 {
                    return Ok(Some(f));
                }
                if a > 0.0 {
                    let predicted = gap / a;
                    if predicted <= tol {
                        return Ok(Some(f));
                    }
                    if predicted < dt {
                        dt = predicted;
                        to_end = false;
                    }
                }
            }

            self.rk.step(&mut self.rhs, &self.y0, dt, &mut self.y1)?;

            let mut winner: Option<(usize, f64)> = None;
            for f in 0..self.rhs.flows.len() {
                let target = self.clocks.clocks[self.rhs.flows[f]].next_arrival;
                if self.y1[m + f] >= target {
                    let tau = self.locate(dt, f, target, tol)?;
                    if winner.is_none_or(|(_, best)| tau < best) {
                        winner = Some((f, tau));
                    }
                }
            }
            match winner {
                None => {
                    self.commit_y1();
                    self.t = if to_end { end } else { self.t + dt };
                }
                Some((f, tau)) => {
                    self.rk.step(&mut self.rhs, &self.y0, tau, &mut self.y1)?;
                    self.commit_y1();
                    self.t += tau;
                    return Ok(Some(f));
                }
            }
        }
        Ok(None)
    }

    /// Step length in `(0, dt]` at which flow `f`'s internal time reaches
    /// `target`, given `y1` is the state after the full step `dt`.
    fn locate(&mut self, dt: f64, f: usize, target: f64, tol: f64) -> Result<f64> {
        let m = self.rhs.macro_len();
        let (mut lo, mut hi) = (0.0, dt);
        let g0 = self.y0[m + f] - target;
        let g1 = self.y1[m + f] - target;
        let mut tau = if g1 > g0 { dt * (-g0) / (g1 - g0) } else { dt };
        for _ in 0..100 {
            self.rk.step(&mut self.rhs, &self.y0, tau, &mut self.ys)?;
            let g = self.ys[m + f] - target;
            if g >= 0.0 {
                hi = tau;
            } else {
                lo = tau;
            }
            self.rhs.eval(&self.ys, &mut self.dy)?;
            let rate = self.dy[m + f];
            let mut next = if rate > 0.0 { tau - g / rate } else { 0.5 * (lo + hi) };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - tau).abs() <= tol || hi - lo <= tol {
                return Ok(if g >= 0.0 { tau } else { next.min(hi) });
            }
            tau = next;
        }
        Ok(tau)
    }

    fn load_y0(&mut self) {
        let m = self.rhs.macro_len();
        for (idx, &p) in self.rhs.drift.macro_positions().iter().enumerate() {
            self.y0[idx] = self.counts[p];
        }
        for (f, &c) in self.rhs.flows.iter().enumerate() {
            self.y0[m + f] = self.clocks.clocks[c].internal;
        }
    }

    fn commit_y1(&mut self) {
        let m = self.rhs.macro_len();
        for (idx, &p) in self.rhs.drift.macro_positions().iter().enumerate() {
            // absorbs integrator overshoot below zero
            self.counts[p] = self.y1[idx].max(0.0);
        }
        for (f, &c) in self.rhs.flows.iter().enumerate() {
            self.clocks.clocks[c].internal = self.y1[m + f];
        }
    }
}
