//! Reference models on the 10-voxel periodic unit interval.

use crate::error::{contract, Result};
use crate::mesh::{periodic_1d_mesh, Mesh};
use crate::model::{Model, RateKind, RateLaw, Rational, ReactionDef, ScaleGroup, SpeciesDef};
use crate::sim::HybridState;

pub const VOXELS: usize = 10;
pub const LENGTH: f64 = 1.0;

/// A model with its geometry and initial state at one value of `ε`.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub model: Model,
    pub mesh: Mesh,
    pub init: HybridState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// A, C abundant; B, D low copy number.
    Convergent,
    /// B, D abundant; A, C low copy number.
    Divergent,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Initial layout: the first half of the voxels holds `lo`, the second half
/// `hi` for mesoscopic species; macroscopic species get `hi/ε` then `lo/ε`.
pub fn two_level_layout(model: &Model, voxels: usize, lo: u64, hi: u64) -> Result<HybridState> {
    let eps = model.epsilon();
    let counts: Vec<Vec<u64>> = (0..model.num_species())
        .map(|i| {
            (0..voxels)
                .map(|j| {
                    let first_half = j < voxels / 2;
                    match (model.group(i), first_half) {
                        (ScaleGroup::Meso, true) => lo,
                        (ScaleGroup::Meso, false) => hi,
                        (ScaleGroup::Macro, true) => (hi as f64 / eps).round() as u64,
                        (ScaleGroup::Macro, false) => (lo as f64 / eps).round() as u64,
                    }
                })
                .collect()
        })
        .collect();
    HybridState::from_counts(model, &counts)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(contract(format!("epsilon must lie in (0, 1], got {epsilon}")))
    }
}

fn mesh_for(model: &Model) -> Result<Mesh> {
    let rates: Vec<f64> = model.species().iter().map(|s| s.base_hop_rate).collect();
    periodic_1d_mesh(VOXELS, LENGTH, &rates)
}

/// `A ⇌ B` with `A → B` at rate `A` and `B → A` at rate `ε B`; A hops at
/// 1/2 per direction, B is immobile and macroscopic.
pub fn isomerization(epsilon: f64) -> Result<Scenario> {
    check_epsilon(epsilon)?;
    let species = vec![
        SpeciesDef::new("A", ScaleGroup::Meso, int(0), 0.5),
        SpeciesDef::new("B", ScaleGroup::Macro, int(0), 0.0),
    ];
    let reactions = vec![
        ReactionDef::new(vec![1, -1], RateLaw::new(RateKind::Unary(0), 1.0, int(0))),
        ReactionDef::new(vec![-1, 1], RateLaw::new(RateKind::Unary(1), 1.0, int(1))),
    ];
    let model = Model::new(species, reactions, epsilon)?;
    let mesh = mesh_for(&model)?;
    let init = two_level_layout(&model, VOXELS, 10, 20)?;
    Ok(Scenario { model, mesh, init })
}

/// Catalytic network over species `[A, B, C, D]`:
/// `A + B → C + B`, `C + D → A + D`, `B → D`, `D → B`.
pub fn catalytic(epsilon: f64, orientation: Orientation) -> Result<Scenario> {
    check_epsilon(epsilon)?;
    let slow = int(-1); // hop rate ε
    let (species, bimolecular_p) = match orientation {
        Orientation::Convergent => (
            vec![
                SpeciesDef::new("A", ScaleGroup::Macro, slow, 1.0),
                SpeciesDef::new("B", ScaleGroup::Meso, int(0), 1.0),
                SpeciesDef::new("C", ScaleGroup::Macro, slow, 1.0),
                SpeciesDef::new("D", ScaleGroup::Meso, int(0), 1.0),
            ],
            int(0),
        ),
        Orientation::Divergent => (
            vec![
                SpeciesDef::new("A", ScaleGroup::Meso, slow, 1.0),
                SpeciesDef::new("B", ScaleGroup::Macro, slow, 1.0),
                SpeciesDef::new("C", ScaleGroup::Meso, slow, 1.0),
                SpeciesDef::new("D", ScaleGroup::Macro, slow, 1.0),
            ],
            Rational::new(1, 4),
        ),
    };
    let reactions = vec![
        ReactionDef::new(
            vec![1, 0, -1, 0],
            RateLaw::new(RateKind::BinaryHetero(0, 1), 0.01, bimolecular_p),
        ),
        ReactionDef::new(
            vec![-1, 0, 1, 0],
            RateLaw::new(RateKind::BinaryHetero(2, 3), 0.01, bimolecular_p),
        ),
        ReactionDef::new(vec![0, 1, 0, -1], RateLaw::new(RateKind::Unary(1), 1.0, int(0))),
        ReactionDef::new(vec![0, -1, 0, 1], RateLaw::new(RateKind::Unary(3), 0.9, int(0))),
    ];
    let model = Model::new(species, reactions, epsilon)?;
    let mesh = mesh_for(&model)?;
    let init = two_level_layout(&model, VOXELS, 10, 20)?;
    Ok(Scenario { model, mesh, init })
}
