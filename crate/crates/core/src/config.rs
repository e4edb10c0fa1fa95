//! JSON run configuration.
//!
//! The document has three sections: `model` (a builtin name or an explicit
//! species/reaction list), an optional `mesh` for explicit models, and
//! `experiment` with the sweep and integrator settings. Unknown keys are
//! rejected everywhere. Parsing collects every semantic problem it finds and
//! reports each one with a path into the document.
//!
//! Initial values are given in scaled units: counts for mesoscopic species,
//! concentrations `ε·count` for macroscopic ones. Stoichiometry follows the
//! update `X ← X − stoich`, so products carry negative entries.

use std::fmt;

use serde::Deserialize;

use crate::builtins::{self, Orientation, Scenario};
use crate::error::Result;
use crate::harness::{CoupledOptions, Coupling};
use crate::mesh::{periodic_1d_mesh, Edge, Mesh};
use crate::model::{Model, RateKind, RateLaw, Rational, ReactionDef, ScaleGroup, SpeciesDef};
use crate::sim::{HybridConfig, HybridState};

/// One problem found while reading a config, located by a JSON path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, issue) in self.0.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    #[serde(default)]
    pub mesh: Option<MeshSection>,
    #[serde(default)]
    pub experiment: Experiment,
    /// Output directory; the `--out` flag takes precedence.
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Isomerization,
    CatalyticConvergent,
    CatalyticDivergent,
}

/// Either `builtin` alone, or `species` with `reactions`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default)]
    pub builtin: Option<Builtin>,
    #[serde(default)]
    pub species: Option<Vec<SpeciesSpec>>,
    #[serde(default)]
    pub reactions: Option<Vec<ReactionSpec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Meso,
    Macro,
}

/// Integer or `"a/b"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Text(String),
}

impl Default for RationalSpec {
    fn default() -> Self {
        RationalSpec::Int(0)
    }
}

impl RationalSpec {
    fn parse(&self) -> std::result::Result<Rational, String> {
        match self {
            RationalSpec::Int(n) => Ok(Rational::from_integer(*n)),
            RationalSpec::Text(s) => {
                let s = s.trim();
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: i64 = n.parse().map_err(|_| format!("not a rational number: {s:?}"))?;
                let d: i64 = d.parse().map_err(|_| format!("not a rational number: {s:?}"))?;
                if d == 0 {
                    return Err(format!("zero denominator in {s:?}"));
                }
                Ok(Rational::new(n, d))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Uniform(f64),
    PerVoxel(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesSpec {
    pub name: String,
    pub group: GroupSpec,
    /// Transport exponent `μ`.
    #[serde(default)]
    pub mu: RationalSpec,
    /// Base hop rate `q̄` per molecule and direction.
    #[serde(default)]
    pub hop_rate: f64,
    #[serde(default)]
    pub initial: Option<InitialSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSpec {
    Constant,
    Unary,
    Binary,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReactionSpec {
    pub kind: KindSpec,
    /// Reactant names: none, one, or two (the same name twice for `2A`).
    #[serde(default)]
    pub reactants: Vec<String>,
    pub k_bar: f64,
    #[serde(default)]
    pub p: RationalSpec,
    pub stoich: std::collections::BTreeMap<String, i64>,
}

/// Either a periodic interval (`voxels`, `length`) or explicit `volumes`
/// with directed `edges` shared by every mobile species, each hopping at its
/// own `q̄`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    #[serde(default)]
    pub voxels: Option<usize>,
    #[serde(default)]
    pub length: Option<f64>,
    #[serde(default)]
    pub volumes: Option<Vec<f64>>,
    #[serde(default)]
    pub edges: Option<Vec<[usize; 2]>>,
    #[serde(default = "one")]
    pub dimension: usize,
    #[serde(default)]
    pub diameters: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CouplingSpec {
    #[default]
    Shared,
    Independent,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Experiment {
    /// Scale parameter for single-model commands.
    pub epsilon: Option<f64>,
    pub eps_grid: Option<Vec<f64>>,
    pub h_grid: Option<Vec<f64>>,
    /// Replicates; defaults to 2000 for ε-sweeps and 5000 for h-sweeps.
    pub replicates: Option<usize>,
    pub final_time: f64,
    /// Output spacing; sweeps default to the final time only.
    pub sample_dt: Option<f64>,
    pub seed: u64,
    /// Split step for `simulate`.
    pub h: f64,
    pub ode_substeps: usize,
    pub max_step: f64,
    pub event_tol: f64,
    pub coupling: CouplingSpec,
}

impl Default for Experiment {
    fn default() -> Self {
        let hybrid = HybridConfig::default();
        Self {
            epsilon: None,
            eps_grid: None,
            h_grid: None,
            replicates: None,
            final_time: 1.0,
            sample_dt: None,
            seed: 0,
            h: 0.0625,
            ode_substeps: 8,
            max_step: hybrid.max_step,
            event_tol: hybrid.event_tol,
            coupling: CouplingSpec::Shared,
        }
    }
}


/// Parses and validates a config document.
pub fn parse_config(text: &str) -> std::result::Result<RunConfig, ConfigErrors> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigErrors(vec![ConfigIssue {
            path,
            message: e.into_inner().to_string(),
        }])
    })?;
    let issues = cfg.validate();
    if issues.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigErrors(issues))
    }
}

struct Issues(Vec<ConfigIssue>);

impl Issues {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(ConfigIssue {
            path: path.into(),
            message: message.into(),
        });
    }

    fn check(&mut self, ok: bool, path: impl Into<String>, message: impl Into<String>) {
        if !ok {
            self.push(path, message);
        }
    }
}

fn check_grid(out: &mut Issues, path: &str, grid: &[f64], upper: f64) {
    out.check(grid.len() >= 3, path, "grid needs at least 3 points");
    for (k, x) in grid.iter().enumerate() {
        out.check(
            x.is_finite() && *x > 0.0 && *x <= upper,
            format!("{path}[{k}]"),
            format!("value must lie in (0, {upper}]"),
        );
    }
    out.check(grid.windows(2).all(|w| w[1] < w[0]), path, "grid must be decreasing");
}

fn is_multiple(t: f64, dt: f64) -> bool {
    let n = (t / dt).round();
    n >= 1.0 && (n * dt - t).abs() <= 1e-9 * t.max(1.0)
}

impl RunConfig {
    fn validate(&self) -> Vec<ConfigIssue> {
        let mut out = Issues(Vec::new());
        let m = &self.model;
        match (&m.builtin, &m.species, &m.reactions) {
            (Some(_), None, None) => {
                out.check(self.mesh.is_none(), "mesh", "builtin models carry their own mesh");
            }
            (None, Some(species), Some(reactions)) => {
                self.validate_custom(species, reactions, &mut out);
            }
            (Some(_), _, _) => out.push("model", "give either builtin or species and reactions, not both"),
            _ => out.push("model", "needs either builtin or both species and reactions"),
        }
        self.validate_experiment(&mut out);
        if out.0.is_empty() {
            if let Err(e) = self.scenario(self.reference_epsilon()) {
                out.push("model", e.to_string());
            }
        }
        out.0
    }

    fn validate_custom(&self, species: &[SpeciesSpec], reactions: &[ReactionSpec], out: &mut Issues) {
        let voxels = self.mesh_voxels();
        for (i, s) in species.iter().enumerate() {
            let path = format!("model.species[{i}]");
            out.check(!s.name.is_empty(), format!("{path}.name"), "name must not be empty");
            out.check(
                species[..i].iter().all(|o| o.name != s.name),
                format!("{path}.name"),
                format!("duplicate species name {:?}", s.name),
            );
            if let Err(e) = s.mu.parse() {
                out.push(format!("{path}.mu"), e);
            }
            out.check(
                s.hop_rate.is_finite() && s.hop_rate >= 0.0,
                format!("{path}.hop_rate"),
                "must be finite and non-negative",
            );
            let values: Vec<f64> = match &s.initial {
                None => Vec::new(),
                Some(InitialSpec::Uniform(x)) => vec![*x],
                Some(InitialSpec::PerVoxel(v)) => {
                    if let Some(j) = voxels {
                        out.check(
                            v.len() == j,
                            format!("{path}.initial"),
                            format!("expected {j} values, one per voxel, got {}", v.len()),
                        );
                    }
                    v.clone()
                }
            };
            for x in values {
                if !(x.is_finite() && x >= 0.0) {
                    out.push(format!("{path}.initial"), "values must be finite and non-negative");
                    break;
                }
                if s.group == GroupSpec::Meso && x.fract() != 0.0 {
                    out.push(format!("{path}.initial"), "mesoscopic counts must be integers");
                    break;
                }
            }
        }
        let known = |n: &str| species.iter().any(|s| s.name == n);
        for (r, rx) in reactions.iter().enumerate() {
            let path = format!("model.reactions[{r}]");
            out.check(
                rx.k_bar.is_finite() && rx.k_bar >= 0.0,
                format!("{path}.k_bar"),
                format!("rate constant must be finite and non-negative, got {}", rx.k_bar),
            );
            if let Err(e) = rx.p.parse() {
                out.push(format!("{path}.p"), e);
            }
            let want = match rx.kind {
                KindSpec::Constant => 0,
                KindSpec::Unary => 1,
                KindSpec::Binary => 2,
            };
            out.check(
                rx.reactants.len() == want,
                format!("{path}.reactants"),
                format!("a {:?} reaction needs {want} reactants", rx.kind).to_lowercase(),
            );
            for (k, n) in rx.reactants.iter().enumerate() {
                out.check(known(n), format!("{path}.reactants[{k}]"), format!("unknown species {n:?}"));
            }
            for n in rx.stoich.keys() {
                out.check(known(n), format!("{path}.stoich.{n}"), format!("unknown species {n:?}"));
            }
        }
        match &self.mesh {
            None => out.push("mesh", "explicit models need a mesh section"),
            Some(mesh) => match (mesh.voxels, mesh.length, &mesh.volumes, &mesh.edges) {
                (Some(v), Some(l), None, None) => {
                    out.check(v >= 2, "mesh.voxels", "a periodic mesh needs at least 2 voxels");
                    out.check(l.is_finite() && l > 0.0, "mesh.length", "must be positive");
                    out.check(mesh.diameters.is_none(), "mesh.diameters", "only for explicit meshes");
                    out.check(mesh.dimension == 1, "mesh.dimension", "a periodic interval is one-dimensional");
                }
                (None, None, Some(_), Some(_)) => {}
                _ => out.push("mesh", "give either voxels and length, or volumes and edges"),
            },
        }
    }

    fn validate_experiment(&self, out: &mut Issues) {
        let e = &self.experiment;
        if let Some(eps) = e.epsilon {
            out.check(eps.is_finite() && eps > 0.0 && eps <= 1.0, "experiment.epsilon", "must lie in (0, 1]");
        }
        if let Some(g) = &e.eps_grid {
            check_grid(out, "experiment.eps_grid", g, 1.0);
        }
        if let Some(g) = &e.h_grid {
            check_grid(out, "experiment.h_grid", g, f64::INFINITY);
            for (k, h) in g.iter().enumerate() {
                out.check(
                    *h > 0.0 && is_multiple(e.final_time, *h),
                    format!("experiment.h_grid[{k}]"),
                    "final_time must be a multiple of every step",
                );
                if let Some(dt) = e.sample_dt {
                    out.check(
                        *h > 0.0 && is_multiple(dt, *h),
                        format!("experiment.h_grid[{k}]"),
                        "sample_dt must be a multiple of every step",
                    );
                }
            }
        }
        if let Some(n) = e.replicates {
            out.check(n >= 2, "experiment.replicates", "need at least 2 replicates");
        }
        out.check(
            e.final_time.is_finite() && e.final_time > 0.0,
            "experiment.final_time",
            "must be positive",
        );
        if let Some(dt) = e.sample_dt {
            out.check(
                dt.is_finite() && dt > 0.0 && is_multiple(e.final_time, dt),
                "experiment.sample_dt",
                "must be positive and divide final_time",
            );
        }
        out.check(e.h.is_finite() && e.h > 0.0, "experiment.h", "must be positive");
        out.check(e.ode_substeps >= 1, "experiment.ode_substeps", "must be at least 1");
        out.check(e.max_step.is_finite() && e.max_step > 0.0, "experiment.max_step", "must be positive");
        out.check(e.event_tol.is_finite() && e.event_tol > 0.0, "experiment.event_tol", "must be positive");
    }

    fn mesh_voxels(&self) -> Option<usize> {
        let mesh = self.mesh.as_ref()?;
        mesh.voxels.or(mesh.volumes.as_ref().map(Vec::len))
    }

    /// `ε` for commands that need a single model: `epsilon`, else the first
    /// grid value, else 1.
    pub fn reference_epsilon(&self) -> f64 {
        let e = &self.experiment;
        e.epsilon
            .or_else(|| e.eps_grid.as_ref().and_then(|g| g.first().copied()))
            .unwrap_or(1.0)
    }

    /// Model, mesh and initial state at scale `epsilon`.
    pub fn scenario(&self, epsilon: f64) -> Result<Scenario> {
        if let Some(b) = self.model.builtin {
            return match b {
                Builtin::Isomerization => builtins::isomerization(epsilon),
                Builtin::CatalyticConvergent => builtins::catalytic(epsilon, Orientation::Convergent),
                Builtin::CatalyticDivergent => builtins::catalytic(epsilon, Orientation::Divergent),
            };
        }
        let bad = |m: String| crate::Error::Config(m);
        let species_spec = self.model.species.as_deref().unwrap_or_default();
        let reaction_spec = self.model.reactions.as_deref().unwrap_or_default();
        let index = |n: &str| {
            species_spec
                .iter()
                .position(|s| s.name == n)
                .ok_or_else(|| bad(format!("unknown species {n:?}")))
        };
        let species = species_spec
            .iter()
            .map(|s| {
                let group = match s.group {
                    GroupSpec::Meso => ScaleGroup::Meso,
                    GroupSpec::Macro => ScaleGroup::Macro,
                };
                Ok(SpeciesDef::new(&s.name, group, s.mu.parse().map_err(bad)?, s.hop_rate))
            })
            .collect::<Result<Vec<_>>>()?;
        let reactions = reaction_spec
            .iter()
            .map(|rx| {
                let kind = match (rx.kind, rx.reactants.as_slice()) {
                    (KindSpec::Constant, []) => RateKind::Constant,
                    (KindSpec::Unary, [a]) => RateKind::Unary(index(a)?),
                    (KindSpec::Binary, [a, b]) if a == b => RateKind::BinaryHomo(index(a)?),
                    (KindSpec::Binary, [a, b]) => RateKind::BinaryHetero(index(a)?, index(b)?),
                    _ => return Err(bad("reactant count does not match the reaction kind".into())),
                };
                let mut stoich = vec![0; species_spec.len()];
                for (n, &c) in &rx.stoich {
                    stoich[index(n)?] = c;
                }
                Ok(ReactionDef::new(
                    stoich,
                    RateLaw::new(kind, rx.k_bar, rx.p.parse().map_err(bad)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let model = Model::new(species, reactions, epsilon)?;
        let mesh = self.build_mesh(&model)?;
        let init = self.initial_state(&model, mesh.num_voxels())?;
        Ok(Scenario { model, mesh, init })
    }

    fn build_mesh(&self, model: &Model) -> Result<Mesh> {
        let spec = self
            .mesh
            .as_ref()
            .ok_or_else(|| crate::Error::Config("explicit models need a mesh section".into()))?;
        let rates: Vec<f64> = model.species().iter().map(|s| s.base_hop_rate).collect();
        match (spec.voxels, spec.length, &spec.volumes, &spec.edges) {
            (Some(j), Some(l), None, None) => periodic_1d_mesh(j, l, &rates),
            (None, None, Some(volumes), Some(edges)) => {
                let per_species = rates
                    .iter()
                    .map(|&q| {
                        if q > 0.0 {
                            edges.iter().map(|&[from, to]| Edge { from, to, rate: q }).collect()
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                Mesh::new(volumes.clone(), per_species, spec.dimension, spec.diameters.clone())
            }
            _ => Err(crate::Error::Config(
                "mesh needs either voxels and length, or volumes and edges".into(),
            )),
        }
    }

    fn initial_state(&self, model: &Model, voxels: usize) -> Result<HybridState> {
        let eps = model.epsilon();
        let species = self.model.species.as_deref().unwrap_or_default();
        let counts = species
            .iter()
            .map(|s| {
                let scaled: Vec<f64> = match &s.initial {
                    None => vec![0.0; voxels],
                    Some(InitialSpec::Uniform(x)) => vec![*x; voxels],
                    Some(InitialSpec::PerVoxel(v)) if v.len() == voxels => v.clone(),
                    Some(InitialSpec::PerVoxel(_)) => {
                        return Err(crate::Error::Config(format!(
                            "species {:?}: initial values need one entry per voxel",
                            s.name
                        )))
                    }
                };
                Ok(scaled
                    .iter()
                    .map(|&x| match s.group {
                        GroupSpec::Meso => x as u64,
                        GroupSpec::Macro => (x / eps).round() as u64,
                    })
                    .collect())
            })
            .collect::<Result<Vec<Vec<u64>>>>()?;
        HybridState::from_counts(model, &counts)
    }

    pub fn hybrid_config(&self) -> HybridConfig {
        HybridConfig {
            max_step: self.experiment.max_step,
            event_tol: self.experiment.event_tol,
        }
    }

    /// Options for the harness; split steps are filled in per command.
    pub fn coupled_options(&self) -> CoupledOptions {
        CoupledOptions {
            exact: true,
            split_steps: Vec::new(),
            ode_substeps: self.experiment.ode_substeps,
            hybrid: self.hybrid_config(),
            coupling: match self.experiment.coupling {
                CouplingSpec::Shared => Coupling::Shared,
                CouplingSpec::Independent => Coupling::Independent,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn issues(text: &str) -> Vec<ConfigIssue> {
        parse_config(text).unwrap_err().0
    }

    #[test]
    fn builtin_sweep_config() {
        let cfg = parse_config(
            r#"{"model": {"builtin": "isomerization"},
                "experiment": {"eps_grid": [1e-1, 1e-2, 1e-3], "replicates": 100}}"#,
        )
        .unwrap();
        assert_eq!(cfg.model.builtin, Some(Builtin::Isomerization));
        assert_eq!(cfg.experiment.replicates, Some(100));
        assert_eq!(cfg.reference_epsilon(), 0.1);
        assert_eq!(cfg.experiment.final_time, 1.0);
    }

    #[test]
    fn increasing_grid_is_rejected() {
        let e = issues(r#"{"model": {"builtin": "isomerization"}, "experiment": {"eps_grid": [1e-3, 1e-2, 1e-1]}}"#);
        assert!(e.iter().any(|i| i.path == "experiment.eps_grid" && i.message == "grid must be decreasing"));
    }

    #[test]
    fn sample_grid_must_fit_every_step() {
        let e = issues(
            r#"{"model": {"builtin": "isomerization"}, "experiment": {"h_grid": [0.5, 0.25, 0.125], "sample_dt": 0.25}}"#,
        );
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].path, "experiment.h_grid[0]");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = issues(r#"{"model": {"builtin": "isomerization"}, "experimnt": {}}"#);
        assert!(e[0].message.contains("unknown field"));
        let e = issues(r#"{"model": {"builtin": "isomerization"}, "experiment": {"seeed": 1}}"#);
        assert_eq!(e[0].path, "experiment.seeed");
        assert!(e[0].message.contains("seeed"));
    }

    #[test]
    fn type_errors_carry_a_path() {
        let e = issues(r#"{"model": {"builtin": "isomerization"}, "experiment": {"final_time": "one"}}"#);
        assert_eq!(e[0].path, "experiment.final_time");
    }

    const CUSTOM: &str = r#"{
        "model": {
            "species": [
                {"name": "A", "group": "meso", "hop_rate": 0.5, "initial": [10,10,20,20]},
                {"name": "B", "group": "macro", "initial": 2.5}
            ],
            "reactions": [
                {"kind": "unary", "reactants": ["A"], "k_bar": 1.0, "stoich": {"A": 1, "B": -1}},
                {"kind": "unary", "reactants": ["B"], "k_bar": K, "p": "1/1", "stoich": {"A": -1, "B": 1}}
            ]
        },
        "mesh": {"voxels": 4, "length": 1.0},
        "experiment": {"epsilon": 0.1}
    }"#;

    #[test]
    fn custom_model_builds() {
        let cfg = parse_config(&CUSTOM.replace('K', "1.0")).unwrap();
        let sc = cfg.scenario(0.1).unwrap();
        assert_eq!(sc.model.num_species(), 2);
        assert!((sc.model.rate_constant(1) - 0.1).abs() < 1e-15);
        assert_eq!(sc.mesh.num_voxels(), 4);
        assert_eq!(sc.init.meso, vec![10, 10, 20, 20]);
        assert!(sc.init.macro_values.iter().all(|&x| (x - 2.5).abs() < 1e-12));
        let (u, v) = sc.model.effective_exponents();
        assert_eq!(u.to_string(), "0");
        assert_eq!(v.to_string(), "1");
    }

    #[test]
    fn negative_rate_constant_names_the_field() {
        let e = issues(&CUSTOM.replace('K', "-1.0"));
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].path, "model.reactions[1].k_bar");
    }

    #[test]
    fn builtin_with_mesh_is_rejected() {
        let e = issues(r#"{"model": {"builtin": "isomerization"}, "mesh": {"voxels": 4, "length": 1}}"#);
        assert_eq!(e[0].path, "mesh");
    }

    #[test]
    fn rationals() {
        assert_eq!(RationalSpec::Text("-3/4".into()).parse().unwrap(), Rational::new(-3, 4));
        assert_eq!(RationalSpec::Text("2".into()).parse().unwrap(), Rational::from_integer(2));
        assert!(RationalSpec::Text("1/0".into()).parse().is_err());
        assert!(RationalSpec::Text("0.25".into()).parse().is_err());
    }
}
