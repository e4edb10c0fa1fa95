//! Unit-rate Poisson arrival streams addressed by event channel.
//!
//! Every channel owns a ChaCha8 stream. The 256-bit key is derived from
//! `(global_seed, replicate)` and the 64-bit stream id from the channel
//! address, both through a SplitMix64 chain:
//!
//! ```text
//! key words   k_w = splitmix64(splitmix64(global_seed ^ W_w) ^ replicate), w = 0..4
//! stream id   reaction (r, j):       mix(mix(mix(TAG_R) ^ r) ^ j)
//!             transport (i, j, k):   mix(mix(mix(mix(TAG_T) ^ i) ^ j) ^ k)
//! ```
//!
//! Gaps are `Exp(1)` draws from `rand_distr::Exp1`. Because every stream is a
//! pure function of its address, channels can be created in any order and
//! re-queried at earlier internal times without affecting one another.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{contract, Result};
use crate::mesh::Mesh;
use crate::model::Model;

const KEY_WORDS: [u64; 4] = [
    0x243f_6a88_85a3_08d3,
    0x1319_8a2e_0370_7344,
    0xa409_3822_299f_31d0,
    0x082e_fa98_ec4e_6c89,
];
const TAG_REACTION: u64 = 0x5245_4143_5449_4f4e;
const TAG_TRANSPORT: u64 = 0x5452_414e_5350_4f52;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Address of one event channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelId {
    Reaction { reaction: usize, voxel: usize },
    Transport { species: usize, from: usize, to: usize },
}

impl ChannelId {
    fn stream_id(self) -> u64 {
        match self {
            ChannelId::Reaction { reaction, voxel } => {
                let h = splitmix64(TAG_REACTION);
                let h = splitmix64(h ^ reaction as u64);
                splitmix64(h ^ voxel as u64)
            }
            ChannelId::Transport { species, from, to } => {
                let h = splitmix64(TAG_TRANSPORT);
                let h = splitmix64(h ^ species as u64);
                let h = splitmix64(h ^ from as u64);
                splitmix64(h ^ to as u64)
            }
        }
    }
}

fn replicate_key(global_seed: u64, replicate: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    for (w, chunk) in key.chunks_exact_mut(8).enumerate() {
        let word = splitmix64(splitmix64(global_seed ^ KEY_WORDS[w]) ^ replicate);
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    key
}

/// Lazily extended arrival times `0 < t_1 < t_2 < ...` of a unit-rate
/// Poisson process. Cached arrivals are never modified.
#[derive(Debug, Clone)]
pub struct PoissonPath {
    channel: ChannelId,
    rng: ChaCha8Rng,
    arrivals: Vec<f64>,
}

impl PoissonPath {
    pub fn new(global_seed: u64, replicate: u64, channel: ChannelId) -> Self {
        let mut rng = ChaCha8Rng::from_seed(replicate_key(global_seed, replicate));
        rng.set_stream(channel.stream_id());
        Self {
            channel,
            rng,
            arrivals: Vec::new(),
        }
    }

    pub fn channel(&self) -> ChannelId {
        self.channel
    }

    /// Arrivals generated so far.
    pub fn arrivals(&self) -> &[f64] {
        &self.arrivals
    }

    fn extend(&mut self) -> f64 {
        let last = self.arrivals.last().copied().unwrap_or(0.0);
        let gap: f64 = Exp1.sample(&mut self.rng);
        let mut next = last + gap;
        if next <= last {
            next = last.next_up();
        }
        self.arrivals.push(next);
        next
    }

    /// The `n`-th arrival, zero based.
    #[inline]
    pub fn arrival(&mut self, n: usize) -> f64 {
        while self.arrivals.len() <= n {
            self.extend();
        }
        self.arrivals[n]
    }

    fn extend_past(&mut self, t: f64) {
        while self.arrivals.last().is_none_or(|&a| a <= t) {
            self.extend();
        }
    }

    /// `Π(t)`: number of arrivals in `(0, t]`.
    pub fn count_up_to(&mut self, t: f64) -> Result<u64> {
        check_time(t)?;
        self.extend_past(t);
        Ok(self.arrivals.partition_point(|&a| a <= t) as u64)
    }

    /// Smallest arrival strictly greater than `t`.
    pub fn next_arrival_after(&mut self, t: f64) -> Result<f64> {
        check_time(t)?;
        self.extend_past(t);
        Ok(self.arrivals[self.arrivals.partition_point(|&a| a <= t)])
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(contract(format!("internal time must be finite and nonnegative, got {t}")))
    }
}

/// All channel paths of one replicate.
#[derive(Debug, Clone)]
pub struct PathRegistry {
    global_seed: u64,
    replicate: u64,
    channels: Vec<ChannelId>,
    index: HashMap<ChannelId, usize>,
    paths: Vec<Option<PoissonPath>>,
}

impl PathRegistry {
    pub fn new(global_seed: u64, replicate: u64, channels: Vec<ChannelId>) -> Self {
        let index = channels.iter().enumerate().map(|(n, &c)| (c, n)).collect();
        let paths = vec![None; channels.len()];
        Self {
            global_seed,
            replicate,
            channels,
            index,
            paths,
        }
    }

    pub fn global_seed(&self) -> u64 {
        self.global_seed
    }

    pub fn replicate(&self) -> u64 {
        self.replicate
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[ChannelId] {
        &self.channels
    }

    pub fn index_of(&self, channel: ChannelId) -> Option<usize> {
        self.index.get(&channel).copied()
    }

    /// Path at registry position `idx`, created on first use.
    pub fn path_mut(&mut self, idx: usize) -> &mut PoissonPath {
        let (seed, rep, channel) = (self.global_seed, self.replicate, self.channels[idx]);
        self.paths[idx].get_or_insert_with(|| PoissonPath::new(seed, rep, channel))
    }

    pub fn path(&mut self, channel: ChannelId) -> Option<&mut PoissonPath> {
        let idx = self.index_of(channel)?;
        Some(self.path_mut(idx))
    }
}

/// Channel list for a model on a mesh: every `(reaction, voxel)` pair,
/// followed by every transport edge with positive rate, species by species.
pub fn enumerate_channels(model: &Model, mesh: &Mesh) -> Vec<ChannelId> {
    let mut channels = Vec::new();
    for reaction in 0..model.num_reactions() {
        for voxel in 0..mesh.num_voxels() {
            channels.push(ChannelId::Reaction { reaction, voxel });
        }
    }
    for species in 0..mesh.num_species() {
        for e in mesh.edges(species) {
            channels.push(ChannelId::Transport {
                species,
                from: e.from,
                to: e.to,
            });
        }
    }
    channels
}

pub fn derive_registry(global_seed: u64, replicate: u64, model: &Model, mesh: &Mesh) -> PathRegistry {
    PathRegistry::new(global_seed, replicate, enumerate_channels(model, mesh))
}
