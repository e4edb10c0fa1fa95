#![allow(dead_code)]

use msrdme::builtins::{self, Scenario};
use msrdme::mesh::{periodic_1d_mesh, Mesh};
use msrdme::model::{Model, RateKind, RateLaw, Rational, ReactionDef, ScaleGroup, SpeciesDef};
use msrdme::sim::HybridState;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn single_voxel(species: usize, volume: f64) -> Mesh {
    Mesh::new(vec![volume], vec![Vec::new(); species], 1, None).unwrap()
}

/// `A → ∅` at unary rate 1 in one voxel.
pub fn linear_death(n: u64) -> Scenario {
    let model = Model::new(
        vec![SpeciesDef::new("A", ScaleGroup::Meso, int(0), 0.0)],
        vec![ReactionDef::new(vec![1], RateLaw::new(RateKind::Unary(0), 1.0, int(0)))],
        1.0,
    )
    .unwrap();
    let mesh = single_voxel(1, 1.0);
    let init = HybridState::from_counts(&model, &[vec![n]]).unwrap();
    Scenario { model, mesh, init }
}

/// The isomerization model with B relabelled mesoscopic, so no species is
/// continuous. Same layout, B counts `round(value/ε)`.
pub fn isomerization_all_meso(eps: f64) -> Scenario {
    let base = builtins::isomerization(eps).unwrap();
    let model = base.model.all_meso();
    let counts: Vec<Vec<u64>> = (0..2)
        .map(|i| {
            (0..builtins::VOXELS)
                .map(|j| {
                    let lo = j < builtins::VOXELS / 2;
                    match (i, lo) {
                        (0, true) => 10,
                        (0, false) => 20,
                        (_, true) => (20.0 / eps).round() as u64,
                        (_, false) => (10.0 / eps).round() as u64,
                    }
                })
                .collect()
        })
        .collect();
    let init = HybridState::from_counts(&model, &counts).unwrap();
    Scenario {
        model,
        mesh: base.mesh,
        init,
    }
}

/// `A ⇌ B` with both species macroscopic in one voxel: a linear ODE.
pub fn macro_isomerization(eps: f64, a0: u64, b0: u64) -> Scenario {
    let model = Model::new(
        vec![
            SpeciesDef::new("A", ScaleGroup::Macro, int(0), 0.0),
            SpeciesDef::new("B", ScaleGroup::Macro, int(0), 0.0),
        ],
        vec![
            ReactionDef::new(vec![1, -1], RateLaw::new(RateKind::Unary(0), 1.0, int(0))),
            ReactionDef::new(vec![-1, 1], RateLaw::new(RateKind::Unary(1), 1.0, int(1))),
        ],
        eps,
    )
    .unwrap();
    let mesh = single_voxel(2, 0.1);
    let init = HybridState::from_counts(&model, &[vec![a0], vec![b0]]).unwrap();
    Scenario { model, mesh, init }
}

/// Pure diffusion of one meso and one macro species on the 10-voxel ring.
pub fn transport_only(eps: f64) -> Scenario {
    let model = Model::new(
        vec![
            SpeciesDef::new("M", ScaleGroup::Meso, int(0), 1.0),
            SpeciesDef::new("C", ScaleGroup::Macro, int(0), 1.0),
        ],
        Vec::new(),
        eps,
    )
    .unwrap();
    let mesh = periodic_1d_mesh(10, 1.0, &[1.0, 1.0]).unwrap();
    let init = builtins::two_level_layout(&model, 10, 10, 20).unwrap();
    Scenario { model, mesh, init }
}

pub fn grid(dt: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 * dt).collect()
}
