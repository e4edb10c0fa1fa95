//! Channel tables shared by the three simulators.
//!
//! State vectors are unscaled and voxel-major: entry `j * D + i` holds the
//! molecule count of species `i` in voxel `j`.

use crate::error::{contract, Error, Result};
use crate::mesh::Mesh;
use crate::model::{Model, ScaleGroup};
use crate::poisson::{ChannelId, PathRegistry};

use super::heap::IndexedHeap;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Kind {
    Reaction { r: usize, j: usize },
    #[allow(dead_code)] // `to` is read through Debug in diagnostics
    Transport { i: usize, from: usize, to: usize, q: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct Channel {
    pub kind: Kind,
    /// Position of the channel's path in the registry.
    pub reg: usize,
    /// Rate depends on a continuously evolving macroscopic value.
    pub flowing: bool,
}

/// Which species a stochastic firing updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum JumpScope {
    /// Every species jumps (exact process).
    All,
    /// Only mesoscopic species jump; macroscopic ones follow the drift.
    MesoOnly,
}

pub(crate) struct Network<'a> {
    pub model: &'a Model,
    pub mesh: &'a Mesh,
    pub d: usize,
    pub nvox: usize,
    pub channels: Vec<Channel>,
    /// Per channel: `(position, delta)` pairs applied on firing.
    pub updates: Vec<Vec<(usize, f64)>>,
    /// Per channel: channels whose rate must be refreshed after it fires.
    pub dependents: Vec<Vec<usize>>,
}

impl<'a> Network<'a> {
    pub fn build(model: &'a Model, mesh: &'a Mesh, registry: &PathRegistry, scope: JumpScope) -> Result<Self> {
        check_compatible(model, mesh)?;
        let d = model.num_species();
        let nvox = mesh.num_voxels();
        let jumps = |i: usize| scope == JumpScope::All || model.group(i) == ScaleGroup::Meso;
        let lookup = |id: ChannelId| {
            registry
                .index_of(id)
                .ok_or_else(|| contract(format!("registry has no path for channel {id:?}")))
        };

        let stochastic_reactions: Vec<usize> = match scope {
            JumpScope::All => (0..model.num_reactions()).collect(),
            JumpScope::MesoOnly => model.reactions_affecting(ScaleGroup::Meso),
        };

        let mut channels = Vec::new();
        let mut updates = Vec::new();
        for &r in &stochastic_reactions {
            let law = &model.reactions()[r].rate_law;
            let flowing = scope == JumpScope::MesoOnly
                && law.reactants().iter().any(|&i| model.group(i) == ScaleGroup::Macro);
            for j in 0..nvox {
                let reg = lookup(ChannelId::Reaction { reaction: r, voxel: j })?;
                channels.push(Channel {
                    kind: Kind::Reaction { r, j },
                    reg,
                    flowing,
                });
                let upd = model.reactions()[r]
                    .stoich
                    .iter()
                    .enumerate()
                    .filter(|&(i, &n)| n != 0 && jumps(i))
                    .map(|(i, &n)| (j * d + i, -(n as f64)))
                    .collect();
                updates.push(upd);
            }
        }
        for i in 0..d {
            if !jumps(i) {
                continue;
            }
            let scale = model.hop_scale(i);
            for e in mesh.edges(i) {
                let reg = lookup(ChannelId::Transport {
                    species: i,
                    from: e.from,
                    to: e.to,
                })?;
                channels.push(Channel {
                    kind: Kind::Transport {
                        i,
                        from: e.from,
                        to: e.to,
                        q: scale * e.rate,
                    },
                    reg,
                    flowing: false,
                });
                updates.push(vec![(e.from * d + i, -1.0), (e.to * d + i, 1.0)]);
            }
        }

        // readers[p]: channels whose rate reads state position p
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); nvox * d];
        for (c, ch) in channels.iter().enumerate() {
            match ch.kind {
                Kind::Reaction { r, j } => {
                    for i in model.reactions()[r].rate_law.reactants() {
                        readers[j * d + i].push(c);
                    }
                }
                Kind::Transport { i, from, .. } => readers[from * d + i].push(c),
            }
        }
        let dependents = updates
            .iter()
            .enumerate()
            .map(|(c, upd)| {
                let mut deps: Vec<usize> = std::iter::once(c)
                    .chain(upd.iter().flat_map(|&(p, _)| readers[p].iter().copied()))
                    .collect();
                deps.sort_unstable();
                deps.dedup();
                deps
            })
            .collect();

        Ok(Self {
            model,
            mesh,
            d,
            nvox,
            channels,
            updates,
            dependents,
        })
    }

    #[inline]
    pub fn rate(&self, c: usize, counts: &[f64]) -> f64 {
        match self.channels[c].kind {
            Kind::Reaction { r, j } => {
                self.model
                    .propensity_unchecked(r, &counts[j * self.d..(j + 1) * self.d], self.mesh.volume(j))
            }
            Kind::Transport { i, from, q, .. } => q * counts[from * self.d + i].max(0.0),
        }
    }

    /// Applies channel `c`'s state change.
    pub fn apply(&self, c: usize, counts: &mut [f64], t: f64) -> Result<()> {
        for &(p, delta) in &self.updates[c] {
            counts[p] += delta;
            if counts[p] < 0.0 {
                return Err(Error::Invariant(format!(
                    "negative count at position {p} after firing channel {:?} at t = {t}",
                    self.channels[c].kind
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_compatible(model: &Model, mesh: &Mesh) -> Result<()> {
    if mesh.num_species() != model.num_species() {
        return Err(contract(format!(
            "mesh lists transport for {} species, model has {}",
            mesh.num_species(),
            model.num_species()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Clock {
    pub rate: f64,
    /// Integrated rate up to `t_last`.
    pub internal: f64,
    pub t_last: f64,
    pub fired: usize,
    pub next_arrival: f64,
}

/// Next-event bookkeeping for channels whose rates are piecewise constant.
///
/// Each channel's internal time is only brought up to date when its rate
/// changes, so untouched channels keep bit-identical firing times no matter
/// what else happens in the system.
pub(crate) struct Clocks {
    pub clocks: Vec<Clock>,
    heap: IndexedHeap,
}

impl Clocks {
    pub fn new(net: &Network<'_>, registry: &mut PathRegistry) -> Self {
        let clocks: Vec<Clock> = net
            .channels
            .iter()
            .map(|ch| Clock {
                rate: 0.0,
                internal: 0.0,
                t_last: 0.0,
                fired: 0,
                next_arrival: registry.path_mut(ch.reg).arrival(0),
            })
            .collect();
        let heap = IndexedHeap::new(vec![f64::INFINITY; clocks.len()]);
        Self { clocks, heap }
    }

    pub fn peek(&self) -> Option<(usize, f64)> {
        self.heap.peek()
    }

    /// Changes channel `c`'s rate at absolute time `t`.
    #[inline]
    pub fn set_rate(&mut self, c: usize, t: f64, rate: f64) {
        let ck = &mut self.clocks[c];
        ck.internal += ck.rate * (t - ck.t_last);
        ck.t_last = t;
        ck.rate = rate;
        let key = if rate > 0.0 {
            t + ((ck.next_arrival - ck.internal) / rate).max(0.0)
        } else {
            f64::INFINITY
        };
        self.heap.update(c, key);
    }

    /// Records that channel `c` reached its pending arrival at time `t`.
    /// The caller refreshes rates afterwards.
    pub fn fire(&mut self, c: usize, t: f64, reg: usize, registry: &mut PathRegistry) {
        let ck = &mut self.clocks[c];
        ck.internal = ck.next_arrival;
        ck.t_last = t;
        ck.fired += 1;
        ck.next_arrival = registry.path_mut(reg).arrival(ck.fired);
    }
}
