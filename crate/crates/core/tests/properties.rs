mod common;

use common::*;
use msrdme::builtins::{catalytic, isomerization, Orientation};
use msrdme::model::{Model, RateKind, RateLaw, ReactionDef, ScaleGroup, SpeciesDef};
use msrdme::poisson::derive_registry;
use msrdme::sim::{simulate_exact, simulate_hybrid, simulate_splitstep, SplitStepConfig};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = RateKind> {
    prop_oneof![
        Just(RateKind::Constant),
        (0usize..3).prop_map(RateKind::Unary),
        (0usize..3, 0usize..3).prop_filter_map("distinct", |(a, b)| (a != b).then_some(RateKind::BinaryHetero(a, b))),
        (0usize..3).prop_map(RateKind::BinaryHomo),
    ]
}

fn three_species(kind: RateKind, k: f64) -> Model {
    Model::new(
        vec![
            SpeciesDef::new("A", ScaleGroup::Meso, int(0), 0.0),
            SpeciesDef::new("B", ScaleGroup::Macro, int(0), 0.0),
            SpeciesDef::new("C", ScaleGroup::Meso, int(0), 0.0),
        ],
        vec![ReactionDef::new(vec![1, -1, 0], RateLaw::new(kind, k, int(0)))],
        1.0,
    )
    .unwrap()
}

proptest! {
    #[test]
    fn propensities_are_nonnegative(
        kind in kind_strategy(),
        k in 0.0f64..10.0,
        x in proptest::collection::vec(0.0f64..50.0, 3),
        vol in 0.01f64..10.0,
    ) {
        let m = three_species(kind, k);
        prop_assert!(m.propensity(0, &x, vol).unwrap() >= 0.0);
    }

    #[test]
    fn density_dependent_scaling(
        k in 0.01f64..10.0,
        x in proptest::collection::vec(0.0f64..50.0, 3),
        vol in 0.01f64..10.0,
        c in 0.1f64..10.0,
    ) {
        let unary = three_species(RateKind::Unary(0), k);
        let hetero = three_species(RateKind::BinaryHetero(0, 2), k);
        let cx: Vec<f64> = x.iter().map(|v| c * v).collect();
        prop_assert_eq!(unary.propensity(0, &x, vol).unwrap(), unary.propensity(0, &x, c * vol).unwrap());
        let lhs = hetero.propensity(0, &cx, c * vol).unwrap();
        let rhs = c * hetero.propensity(0, &x, vol).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn exponents_ignore_ordering(shift in 0usize..4, flip in proptest::bool::ANY) {
        for sc in [isomerization(0.1).unwrap(), catalytic(0.1, Orientation::Divergent).unwrap()] {
            let m = &sc.model;
            let d = m.num_species();
            let perm: Vec<usize> = (0..d).map(|i| (i + shift) % d).collect();
            let species: Vec<SpeciesDef> = perm.iter().map(|&i| m.species()[i].clone()).collect();
            let pos = |old: usize| perm.iter().position(|&p| p == old).unwrap();
            let mut reactions: Vec<ReactionDef> = m
                .reactions()
                .iter()
                .map(|rx| {
                    let stoich = perm.iter().map(|&i| rx.stoich[i]).collect();
                    let kind = match rx.rate_law.kind {
                        RateKind::Constant => RateKind::Constant,
                        RateKind::Unary(a) => RateKind::Unary(pos(a)),
                        RateKind::BinaryHetero(a, b) => RateKind::BinaryHetero(pos(a), pos(b)),
                        RateKind::BinaryHomo(a) => RateKind::BinaryHomo(pos(a)),
                    };
                    ReactionDef::new(stoich, RateLaw { kind, ..rx.rate_law.clone() })
                })
                .collect();
            if flip {
                reactions.reverse();
            }
            let other = Model::new(species, reactions, m.epsilon()).unwrap();
            prop_assert_eq!(other.effective_exponents(), m.effective_exponents());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_states_are_nonnegative(seed in 0u64..1_000_000, eps in 0.01f64..1.0) {
        let sc = catalytic(eps, Orientation::Convergent).unwrap();
        let times = grid(0.5, 4);
        let mut reg = derive_registry(seed, 0, &sc.model, &sc.mesh);
        let x = simulate_exact(&sc.model, &sc.mesh, &mut reg, &sc.init, &times).unwrap();
        let z = simulate_hybrid(&sc.model, &sc.mesh, &mut reg, &sc.init, &times).unwrap();
        let y = simulate_splitstep(&sc.model, &sc.mesh, &mut reg, &sc.init, &times, SplitStepConfig::new(0.5)).unwrap();
        for traj in [x, z, y] {
            for st in &traj.states {
                prop_assert!(st.macro_values.iter().all(|v| *v >= 0.0 && v.is_finite()));
            }
        }
    }

    #[test]
    fn hybrid_replays_exact_without_macro_species(seed in 0u64..1_000_000) {
        let sc = isomerization_all_meso(0.1);
        let times = grid(0.5, 2);
        let mut r1 = derive_registry(seed, 0, &sc.model, &sc.mesh);
        let mut r2 = derive_registry(seed, 0, &sc.model, &sc.mesh);
        let x = simulate_exact(&sc.model, &sc.mesh, &mut r1, &sc.init, &times).unwrap();
        let z = simulate_hybrid(&sc.model, &sc.mesh, &mut r2, &sc.init, &times).unwrap();
        prop_assert_eq!(x, z);
    }
}
