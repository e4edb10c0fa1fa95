use crate::error::{contract, Result};
use crate::mesh::Mesh;
use crate::model::Model;
use crate::poisson::PathRegistry;

use super::exact::checked_rate;
use super::network::{Clocks, JumpScope, Network};
use super::ode::DriftSystem;
use super::{check_sample_times, HybridState, SplitStepConfig, Trajectory};

/// Split-step approximation driven by the kernel `σ_h`.
///
/// On `[mh, mh + h/2)` only the stochastic part runs, at twice the rate and
/// with macroscopic values frozen; on `[mh + h/2, (m+1)h)` only the drift
/// runs, doubled, with `ode_substeps` fixed RK4 substeps. Internal times of
/// the stochastic channels do not advance during deterministic half-steps.
/// Sample times must be multiples of `h/2`.
pub fn simulate_splitstep(
    model: &Model,
    mesh: &Mesh,
    registry: &mut PathRegistry,
    init: &HybridState,
    sample_times: &[f64],
    cfg: SplitStepConfig,
) -> Result<Trajectory> {
    check_sample_times(sample_times)?;
    if !(cfg.h > 0.0 && cfg.h.is_finite()) || cfg.ode_substeps == 0 {
        return Err(contract("split step needs h > 0 and at least one ODE substep"));
    }
    let half = cfg.h / 2.0;
    let mut sample_steps = Vec::with_capacity(sample_times.len());
    for &s in sample_times {
        let k = (s / half).round();
        if (k * half - s).abs() > 1e-9 * s.max(1.0) {
            return Err(contract(format!("sample time {s} is not a multiple of h/2 = {half}")));
        }
        sample_steps.push(k as u64);
    }

    let net = Network::build(model, mesh, registry, JumpScope::MesoOnly)?;
    let drift = DriftSystem::new(model, mesh);
    let mut counts = init.to_unscaled(model)?;
    let mut clocks = Clocks::new(&net, registry);
    let mut ode = HalfStepOde::new(&drift, &counts);

    let mut states = Vec::with_capacity(sample_times.len());
    let mut next_sample = 0;
    let mut events = 0u64;
    let mut k = 0u64;
    while next_sample < sample_times.len() {
        while next_sample < sample_times.len() && sample_steps[next_sample] == k {
            states.push(HybridState::from_unscaled(model, &counts, net.nvox, sample_times[next_sample]));
            next_sample += 1;
        }
        if next_sample == sample_times.len() {
            break;
        }
        let start = k as f64 * half;
        let end = (k + 1) as f64 * half;
        if k % 2 == 0 {
            events += stochastic_half(&net, &mut clocks, &mut counts, registry, start, end)?;
        } else if !drift.is_trivial() {
            ode.run(&drift, &mut counts, 2.0, half, cfg.ode_substeps, start)?;
        }
        k += 1;
    }

    Ok(Trajectory {
        sample_times: sample_times.to_vec(),
        states,
        event_count: events,
    })
}

/// Next-event simulation on `[start, end)` at doubled, frozen-drift rates.
fn stochastic_half(
    net: &Network<'_>,
    clocks: &mut Clocks,
    counts: &mut [f64],
    registry: &mut PathRegistry,
    start: f64,
    end: f64,
) -> Result<u64> {
    for c in 0..net.channels.len() {
        let a = checked_rate(net, c, counts, start)?;
        clocks.set_rate(c, start, 2.0 * a);
    }
    let mut events = 0;
    while let Some((c, tau)) = clocks.peek() {
        if tau >= end {
            break;
        }
        clocks.fire(c, tau, net.channels[c].reg, registry);
        net.apply(c, counts, tau)?;
        for &dep in &net.dependents[c] {
            let a = checked_rate(net, dep, counts, tau)?;
            clocks.set_rate(dep, tau, 2.0 * a);
        }
        events += 1;
    }
    for c in 0..net.channels.len() {
        clocks.set_rate(c, end, 0.0);
    }
    Ok(events)
}

/// Fixed-step RK4 on the macroscopic entries with mesoscopic counts frozen.
struct HalfStepOde {
    y: Vec<f64>,
    stage: Vec<f64>,
    k: [Vec<f64>; 4],
    work: Vec<f64>,
}

impl HalfStepOde {
    fn new(drift: &DriftSystem<'_>, counts: &[f64]) -> Self {
        let m = drift.macro_positions().len();
        Self {
            y: vec![0.0; m],
            stage: vec![0.0; m],
            k: [vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]],
            work: counts.to_vec(),
        }
    }

    fn eval(&mut self, drift: &DriftSystem<'_>, y: &[f64], scale: f64, out_idx: usize, t: f64) -> Result<()> {
        for (idx, &p) in drift.macro_positions().iter().enumerate() {
            self.work[p] = y[idx];
        }
        let out = &mut self.k[out_idx];
        drift.eval(&self.work, out);
        for x in out.iter_mut() {
            *x *= scale;
            if !x.is_finite() {
                return Err(crate::error::Error::Simulation {
                    time: t,
                    message: "non-finite drift".into(),
                });
            }
        }
        Ok(())
    }

    fn run(
        &mut self,
        drift: &DriftSystem<'_>,
        counts: &mut [f64],
        scale: f64,
        duration: f64,
        substeps: usize,
        t0: f64,
    ) -> Result<()> {
        self.work.copy_from_slice(counts);
        for (idx, &p) in drift.macro_positions().iter().enumerate() {
            self.y[idx] = counts[p];
        }
        let dt = duration / substeps as f64;
        let m = self.y.len();
        for s in 0..substeps {
            let t = t0 + s as f64 * dt;
            let y = self.y.clone();
            self.eval(drift, &y, scale, 0, t)?;
            for i in 0..m {
                self.stage[i] = y[i] + 0.5 * dt * self.k[0][i];
            }
            let st = self.stage.clone();
            self.eval(drift, &st, scale, 1, t)?;
            for i in 0..m {
                self.stage[i] = y[i] + 0.5 * dt * self.k[1][i];
            }
            let st = self.stage.clone();
            self.eval(drift, &st, scale, 2, t)?;
            for i in 0..m {
                self.stage[i] = y[i] + dt * self.k[2][i];
            }
            let st = self.stage.clone();
            self.eval(drift, &st, scale, 3, t)?;
            for i in 0..m {
                let next = y[i] + dt / 6.0 * (self.k[0][i] + 2.0 * self.k[1][i] + 2.0 * self.k[2][i] + self.k[3][i]);
                self.y[i] = next.max(0.0);
            }
        }
        for (idx, &p) in drift.macro_positions().iter().enumerate() {
            counts[p] = self.y[idx];
        }
        Ok(())
    }
}
