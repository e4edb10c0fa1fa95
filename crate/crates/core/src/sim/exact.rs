use crate::error::{contract, Error, Result};
use crate::mesh::Mesh;
use crate::model::Model;
use crate::poisson::PathRegistry;

use super::network::{Clocks, JumpScope, Network};
use super::{check_sample_times, is_macro, HybridState, Trajectory};

/// Exact scaled jump process by next-event selection over all channels.
///
/// Channel `c` fires when its internal time `∫ rate_c ds` reaches the next
/// arrival of its Poisson path. `init`'s macroscopic values must lie on the
/// `ε` lattice. Run on [`Model::all_meso`] for the unscaled chain.
pub fn simulate_exact(
    model: &Model,
    mesh: &Mesh,
    registry: &mut PathRegistry,
    init: &HybridState,
    sample_times: &[f64],
) -> Result<Trajectory> {
    check_sample_times(sample_times)?;
    let net = Network::build(model, mesh, registry, JumpScope::All)?;
    let mut counts = init.to_unscaled(model)?;
    let d = net.d;
    for (p, x) in counts.iter().enumerate() {
        if is_macro(model, p % d) && x.fract() != 0.0 {
            return Err(contract(format!(
                "macroscopic value at position {p} is not a multiple of epsilon"
            )));
        }
    }

    let mut clocks = Clocks::new(&net, registry);
    for c in 0..net.channels.len() {
        let a = checked_rate(&net, c, &counts, 0.0)?;
        clocks.set_rate(c, 0.0, a);
    }

    let mut states = Vec::with_capacity(sample_times.len());
    let mut next_sample = 0;
    let mut events = 0u64;
    loop {
        let (c, tau) = clocks.peek().unwrap_or((usize::MAX, f64::INFINITY));
        while next_sample < sample_times.len() && sample_times[next_sample] < tau {
            let s = sample_times[next_sample];
            states.push(HybridState::from_unscaled(model, &counts, net.nvox, s));
            next_sample += 1;
        }
        if next_sample == sample_times.len() {
            break;
        }
        clocks.fire(c, tau, net.channels[c].reg, registry);
        net.apply(c, &mut counts, tau)?;
        for &dep in &net.dependents[c] {
            let a = checked_rate(&net, dep, &counts, tau)?;
            clocks.set_rate(dep, tau, a);
        }
        events += 1;
    }

    Ok(Trajectory {
        sample_times: sample_times.to_vec(),
        states,
        event_count: events,
    })
}

#[inline]
pub(super) fn checked_rate(net: &Network<'_>, c: usize, counts: &[f64], t: f64) -> Result<f64> {
    let a = net.rate(c, counts);
    if a.is_finite() {
        Ok(a)
    } else {
        Err(Error::Simulation {
            time: t,
            message: format!("non-finite rate on channel {:?}", net.channels[c].kind),
        })
    }
}
