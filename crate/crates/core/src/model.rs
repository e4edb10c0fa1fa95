//! Reaction network definition, scale annotations and propensity evaluation.
//!
//! Counts handed to [`Model::propensity`] are always *unscaled* molecule
//! numbers, regardless of the species' scale group. The simulators convert
//! scaled macroscopic values (`ε · count`) back before evaluating rates.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;

use crate::error::{contract, Error, Result};

pub type Rational = Ratio<i64>;

/// Copy-number regime of a species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScaleGroup {
    /// Low copy number, kept discrete (`S_i = 1`).
    Meso,
    /// High copy number, represented by `ε · count` (`S_i = 1/ε`).
    Macro,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesDef {
    pub name: String,
    pub group: ScaleGroup,
    /// Physical hop rate is `ε^{-μ} · base_hop_rate`.
    pub transport_exponent: Rational,
    /// Per molecule, per direction. Zero means immobile.
    pub base_hop_rate: f64,
}

impl SpeciesDef {
    pub fn new(name: &str, group: ScaleGroup, transport_exponent: Rational, base_hop_rate: f64) -> Self {
        Self {
            name: name.to_owned(),
            group,
            transport_exponent,
            base_hop_rate,
        }
    }
}

/// Mass-action rate law shapes. Indices refer to species positions in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    Constant,
    Unary(usize),
    BinaryHetero(usize, usize),
    BinaryHomo(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateLaw {
    pub kind: RateKind,
    /// `k̄`; the physical constant is `k̄ · ε^p`.
    pub base_constant: f64,
    /// `p`
    pub epsilon_exponent: Rational,
}

impl RateLaw {
    pub fn new(kind: RateKind, base_constant: f64, epsilon_exponent: Rational) -> Self {
        Self {
            kind,
            base_constant,
            epsilon_exponent,
        }
    }

    /// Reactant multiset: the species whose counts enter the propensity.
    pub fn reactants(&self) -> Vec<usize> {
        match self.kind {
            RateKind::Constant => vec![],
            RateKind::Unary(a) => vec![a],
            RateKind::BinaryHetero(a, b) => vec![a, b],
            RateKind::BinaryHomo(a) => vec![a, a],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionDef {
    /// Column of the stoichiometric matrix. A firing updates `X ← X − stoich`.
    pub stoich: Vec<i64>,
    pub rate_law: RateLaw,
}

impl ReactionDef {
    pub fn new(stoich: Vec<i64>, rate_law: RateLaw) -> Self {
        Self { stoich, rate_law }
    }
}

/// Validated reaction network at a fixed scale separation `ε`.
#[derive(Debug, Clone)]
pub struct Model {
    species: Vec<SpeciesDef>,
    reactions: Vec<ReactionDef>,
    epsilon: f64,
    rate_constants: Vec<f64>,
    hop_scales: Vec<f64>,
}

/// `ε^q` for a rational exponent, exact for integer powers.
pub fn epsilon_pow(epsilon: f64, q: Rational) -> f64 {
    if q.is_integer() {
        epsilon.powi(q.to_integer() as i32)
    } else {
        epsilon.powf(*q.numer() as f64 / *q.denom() as f64)
    }
}

impl Model {
    pub fn new(species: Vec<SpeciesDef>, reactions: Vec<ReactionDef>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidModel(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        let d = species.len();
        for (i, s) in species.iter().enumerate() {
            if !(s.base_hop_rate >= 0.0 && s.base_hop_rate.is_finite()) {
                return Err(Error::InvalidModel(format!(
                    "species {i} ({}): hop rate must be finite and >= 0",
                    s.name
                )));
            }
        }
        for (r, rx) in reactions.iter().enumerate() {
            if rx.stoich.len() != d {
                return Err(Error::InvalidModel(format!(
                    "reaction {r}: stoichiometry has length {}, expected {d}",
                    rx.stoich.len()
                )));
            }
            if rx.stoich.iter().all(|&n| n == 0) {
                return Err(Error::InvalidModel(format!("reaction {r}: stoichiometry is all zero")));
            }
            let k = rx.rate_law.base_constant;
            if !(k >= 0.0 && k.is_finite()) {
                return Err(Error::InvalidModel(format!("reaction {r}: rate constant must be finite and >= 0")));
            }
            if let Some(&bad) = rx.rate_law.reactants().iter().find(|&&i| i >= d) {
                return Err(Error::InvalidModel(format!("reaction {r}: unknown reactant index {bad}")));
            }
        }
        let rate_constants = reactions
            .iter()
            .map(|rx| rx.rate_law.base_constant * epsilon_pow(epsilon, rx.rate_law.epsilon_exponent))
            .collect();
        let hop_scales = species
            .iter()
            .map(|s| epsilon_pow(epsilon, -s.transport_exponent))
            .collect();
        Ok(Self {
            species,
            reactions,
            epsilon,
            rate_constants,
            hop_scales,
        })
    }

    pub fn species(&self) -> &[SpeciesDef] {
        &self.species
    }

    pub fn reactions(&self) -> &[ReactionDef] {
        &self.reactions
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    /// Physical rate constant `k̄ · ε^p` of reaction `r`.
    pub fn rate_constant(&self, r: usize) -> f64 {
        self.rate_constants[r]
    }

    /// Factor `ε^{-μ_i}` applied to the base hop rates of species `i`.
    pub fn hop_scale(&self, i: usize) -> f64 {
        self.hop_scales[i]
    }

    pub fn group(&self, i: usize) -> ScaleGroup {
        self.species[i].group
    }

    pub fn meso_species(&self) -> Vec<usize> {
        (0..self.species.len()).filter(|&i| self.group(i) == ScaleGroup::Meso).collect()
    }

    pub fn macro_species(&self) -> Vec<usize> {
        (0..self.species.len()).filter(|&i| self.group(i) == ScaleGroup::Macro).collect()
    }

    /// Same network with every species treated as mesoscopic.
    pub fn all_meso(&self) -> Model {
        let species = self
            .species
            .iter()
            .cloned()
            .map(|mut s| {
                s.group = ScaleGroup::Meso;
                s
            })
            .collect();
        Model::new(species, self.reactions.clone(), self.epsilon).expect("relabelled model stays valid")
    }

    /// Propensity `w_rj` for reaction `r` in a voxel of the given volume.
    ///
    /// Negative raw values (possible for continuous counts in the homodimer
    /// law) are clamped to zero.
    pub fn propensity(&self, r: usize, counts: &[f64], volume: f64) -> Result<f64> {
        if r >= self.reactions.len() {
            return Err(contract(format!("unknown reaction index {r}")));
        }
        if counts.len() != self.species.len() {
            return Err(contract(format!(
                "count vector has length {}, expected {}",
                counts.len(),
                self.species.len()
            )));
        }
        if let Some(x) = counts.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(contract(format!("counts must be finite and nonnegative, got {x}")));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(contract(format!("voxel volume must be positive, got {volume}")));
        }
        Ok(self.propensity_unchecked(r, counts, volume))
    }

    #[inline]
    pub(crate) fn propensity_unchecked(&self, r: usize, counts: &[f64], volume: f64) -> f64 {
        let k = self.rate_constants[r];
        let raw = match self.reactions[r].rate_law.kind {
            RateKind::Constant => k * volume,
            RateKind::Unary(a) => k * counts[a],
            RateKind::BinaryHetero(a, b) => k * counts[a] * counts[b] / volume,
            RateKind::BinaryHomo(a) => k * counts[a] * (counts[a] - 1.0) / volume,
        };
        raw.max(0.0)
    }

    /// `ν_r = -p + (number of macroscopic reactants)`.
    pub fn nu(&self, r: usize) -> Rational {
        let law = &self.reactions[r].rate_law;
        let macro_reactants = law
            .reactants()
            .into_iter()
            .filter(|&i| self.group(i) == ScaleGroup::Macro)
            .count() as i64;
        -law.epsilon_exponent + Rational::from_integer(macro_reactants)
    }

    /// Reactions whose stoichiometry touches some species of `group`.
    pub fn reactions_affecting(&self, group: ScaleGroup) -> Vec<usize> {
        (0..self.reactions.len())
            .filter(|&r| {
                self.reactions[r]
                    .stoich
                    .iter()
                    .enumerate()
                    .any(|(i, &n)| n != 0 && self.group(i) == group)
            })
            .collect()
    }

    /// Effective exponents `(u, v)` governing the predicted error orders.
    pub fn effective_exponents(&self) -> (Exponent, Exponent) {
        let group_min = |group: ScaleGroup| {
            let from_reactions = self
                .reactions_affecting(group)
                .into_iter()
                .map(|r| Exponent::Finite(-self.nu(r)));
            let from_transport = (0..self.species.len())
                .filter(|&i| self.group(i) == group)
                .map(|i| Exponent::Finite(-self.species[i].transport_exponent));
            from_reactions.chain(from_transport).min().unwrap_or(Exponent::Infinite)
        };
        let u = group_min(ScaleGroup::Meso);
        let v = Exponent::Finite(Rational::from_integer(1)) + group_min(ScaleGroup::Macro);
        (u, v)
    }

    pub fn predict_orders(&self) -> OrderPrediction {
        let (u, v) = self.effective_exponents();
        predict_orders(u, v)
    }
}

/// Rational exponent extended with `+∞` (minimum over an empty set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Exponent::Finite(Rational::new(numer, denom))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Finite(q) => *q.numer() as f64 / *q.denom() as f64,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    fn scale(self, by: Rational) -> Self {
        match self {
            Exponent::Finite(q) => Exponent::Finite(q * by),
            Exponent::Infinite => Exponent::Infinite,
        }
    }

    fn is_negative(self) -> bool {
        matches!(self, Exponent::Finite(q) if q < Rational::from_integer(0))
    }

    fn is_positive(self) -> bool {
        match self {
            Exponent::Finite(q) => q > Rational::from_integer(0),
            Exponent::Infinite => true,
        }
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        match (self, rhs) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
            (Exponent::Finite(_), Exponent::Infinite) => Ordering::Less,
            (Exponent::Infinite, Exponent::Finite(_)) => Ordering::Greater,
            (Exponent::Infinite, Exponent::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Exponent::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

/// Which error theorems have their exponent hypotheses met.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applicability {
    /// `u < 0` or `v < 0`: no rate is predicted.
    None,
    /// `u ≥ 0, v ≥ 0`: the bounded-process results apply.
    Bounded,
    /// `u ≥ 0, v > 0`: the unbounded results apply as well.
    Unbounded,
}

impl fmt::Display for Applicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Applicability::None => "none",
            Applicability::Bounded => "bounded",
            Applicability::Unbounded => "unbounded",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderPrediction {
    pub u: Exponent,
    pub v: Exponent,
    /// MSE exponent of the multiscale error in ε for the macro term, `1 + v`.
    pub multiscale_macro: Exponent,
    /// MSE exponent of the multiscale error in ε for the meso term, `1/2 + v/2 + u`.
    pub multiscale_meso: Exponent,
    /// ε-exponent of the coefficient of `h` in the split-step MSE, `min(2u, u + v)`.
    pub splitstep_meso: Exponent,
    /// ε-exponent of the coefficient of `h²` in the split-step MSE, `2v`.
    pub splitstep_macro: Exponent,
    pub applicable: Applicability,
}

pub fn predict_orders(u: Exponent, v: Exponent) -> OrderPrediction {
    let half = Rational::new(1, 2);
    let one = Exponent::Finite(Rational::from_integer(1));
    let two = Rational::from_integer(2);
    let applicable = if u.is_negative() || v.is_negative() {
        Applicability::None
    } else if v.is_positive() {
        Applicability::Unbounded
    } else {
        Applicability::Bounded
    };
    OrderPrediction {
        u,
        v,
        multiscale_macro: one + v,
        multiscale_meso: Exponent::Finite(half) + v.scale(half) + u,
        splitstep_meso: u.scale(two).min(u + v),
        splitstep_macro: v.scale(two),
        applicable,
    }
}
