//! Deterministic part of the hybrid and split-step dynamics.

use crate::mesh::Mesh;
use crate::model::{Model, ScaleGroup};

const NONE: usize = usize::MAX;

/// Reaction and transport drift of the macroscopic entries, evaluated on
/// unscaled voxel-major state vectors.
pub(crate) struct DriftSystem<'a> {
    model: &'a Model,
    mesh: &'a Mesh,
    d: usize,
    macro_pos: Vec<usize>,
    pos_to_macro: Vec<usize>,
    /// `(reaction, [(species, -stoich)])` for reactions touching macro species.
    reaction_terms: Vec<(usize, Vec<(usize, f64)>)>,
    /// `(from macro index, to macro index, physical rate)`
    edges: Vec<(usize, usize, f64)>,
}

impl<'a> DriftSystem<'a> {
    pub fn new(model: &'a Model, mesh: &'a Mesh) -> Self {
        let d = model.num_species();
        let nvox = mesh.num_voxels();
        let mut macro_pos = Vec::new();
        let mut pos_to_macro = vec![NONE; d * nvox];
        for j in 0..nvox {
            for i in 0..d {
                if model.group(i) == ScaleGroup::Macro {
                    pos_to_macro[j * d + i] = macro_pos.len();
                    macro_pos.push(j * d + i);
                }
            }
        }
        let reaction_terms = model
            .reactions_affecting(ScaleGroup::Macro)
            .into_iter()
            .map(|r| {
                let terms = model.reactions()[r]
                    .stoich
                    .iter()
                    .enumerate()
                    .filter(|&(i, &n)| n != 0 && model.group(i) == ScaleGroup::Macro)
                    .map(|(i, &n)| (i, -(n as f64)))
                    .collect();
                (r, terms)
            })
            .collect();
        let mut edges = Vec::new();
        for i in 0..d {
            if model.group(i) != ScaleGroup::Macro {
                continue;
            }
            let scale = model.hop_scale(i);
            for e in mesh.edges(i) {
                edges.push((pos_to_macro[e.from * d + i], pos_to_macro[e.to * d + i], scale * e.rate));
            }
        }
        Self {
            model,
            mesh,
            d,
            macro_pos,
            pos_to_macro,
            reaction_terms,
            edges,
        }
    }

    pub fn macro_positions(&self) -> &[usize] {
        &self.macro_pos
    }

    pub fn macro_index(&self, pos: usize) -> Option<usize> {
        let m = self.pos_to_macro[pos];
        (m != NONE).then_some(m)
    }

    pub fn is_trivial(&self) -> bool {
        self.macro_pos.is_empty()
    }

    /// Unscaled `dX/dt` for every macroscopic entry.
    pub fn eval(&self, counts: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        let d = self.d;
        for j in 0..self.mesh.num_voxels() {
            let local = &counts[j * d..(j + 1) * d];
            let vol = self.mesh.volume(j);
            for (r, terms) in &self.reaction_terms {
                let w = self.model.propensity_unchecked(*r, local, vol);
                if w == 0.0 {
                    continue;
                }
                for &(i, delta) in terms {
                    out[self.pos_to_macro[j * d + i]] += delta * w;
                }
            }
        }
        for &(from, to, q) in &self.edges {
            let flux = q * counts[self.macro_pos[from]].max(0.0);
            out[from] -= flux;
            out[to] += flux;
        }
    }
}
