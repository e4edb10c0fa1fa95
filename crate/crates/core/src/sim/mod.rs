//! Pathwise-coupled simulators: exact jump process, hybrid PDMP and
//! split-step scheme. All three read their randomness from the same
//! [`PathRegistry`](crate::poisson::PathRegistry), one unit-rate Poisson
//! path per event channel, evaluated in operational time.

mod exact;
mod heap;
mod hybrid;
mod network;
mod ode;
mod splitstep;

pub use exact::simulate_exact;
pub use hybrid::{simulate_hybrid, simulate_hybrid_with};
pub use splitstep::simulate_splitstep;

use crate::error::{contract, Result};
use crate::mesh::Mesh;
use crate::model::{Model, ScaleGroup};

/// Snapshot of the scaled state: integer counts for mesoscopic species and
/// `ε · count` for macroscopic species. Rows follow the model's species order
/// within each group; columns are voxels.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    pub time: f64,
    pub voxels: usize,
    /// `meso[g * voxels + j]`
    pub meso: Vec<u64>,
    /// `macro_values[g * voxels + j]`
    pub macro_values: Vec<f64>,
}

impl HybridState {
    pub fn zeros(model: &Model, voxels: usize) -> Self {
        Self {
            time: 0.0,
            voxels,
            meso: vec![0; model.meso_species().len() * voxels],
            macro_values: vec![0.0; model.macro_species().len() * voxels],
        }
    }

    /// Builds a state from unscaled counts given per species (model order) and voxel.
    pub fn from_counts(model: &Model, counts: &[Vec<u64>]) -> Result<Self> {
        if counts.len() != model.num_species() {
            return Err(contract("one count row per species required"));
        }
        let voxels = counts.first().map_or(0, Vec::len);
        if counts.iter().any(|row| row.len() != voxels) {
            return Err(contract("count rows must have equal length"));
        }
        let eps = model.epsilon();
        let mut st = Self::zeros(model, voxels);
        for (g, &i) in model.meso_species().iter().enumerate() {
            st.meso[g * voxels..(g + 1) * voxels].copy_from_slice(&counts[i]);
        }
        for (g, &i) in model.macro_species().iter().enumerate() {
            for j in 0..voxels {
                st.macro_values[g * voxels + j] = eps * counts[i][j] as f64;
            }
        }
        Ok(st)
    }

    pub fn meso(&self, g: usize, j: usize) -> u64 {
        self.meso[g * self.voxels + j]
    }

    pub fn macro_value(&self, g: usize, j: usize) -> f64 {
        self.macro_values[g * self.voxels + j]
    }

    /// `‖·‖₁` of the scaled state.
    pub fn l1_norm(&self) -> f64 {
        self.meso.iter().map(|&n| n as f64).sum::<f64>() + self.macro_values.iter().map(|x| x.abs()).sum::<f64>()
    }

    /// Total number of molecules, macroscopic values converted back with `1/ε`.
    pub fn total_unscaled(&self, epsilon: f64) -> f64 {
        self.meso.iter().map(|&n| n as f64).sum::<f64>() + self.macro_values.iter().sum::<f64>() / epsilon
    }

    /// Unscaled voxel-major state vector. Macroscopic values that sit on the
    /// `ε` lattice (to 1e-9 relative) are snapped to the integer count.
    pub(crate) fn to_unscaled(&self, model: &Model) -> Result<Vec<f64>> {
        let d = model.num_species();
        let nvox = self.voxels;
        let meso = model.meso_species();
        let macro_ = model.macro_species();
        if self.meso.len() != meso.len() * nvox || self.macro_values.len() != macro_.len() * nvox {
            return Err(contract("state shape does not match model"));
        }
        let eps = model.epsilon();
        let mut counts = vec![0.0; d * nvox];
        for (g, &i) in meso.iter().enumerate() {
            for j in 0..nvox {
                counts[j * d + i] = self.meso(g, j) as f64;
            }
        }
        for (g, &i) in macro_.iter().enumerate() {
            for j in 0..nvox {
                let x = self.macro_value(g, j);
                if !(x.is_finite() && x >= 0.0) {
                    return Err(contract(format!("macroscopic value must be finite and >= 0, got {x}")));
                }
                let raw = x / eps;
                let snapped = raw.round();
                counts[j * d + i] = if (snapped * eps - x).abs() <= 1e-9 * x.max(eps) {
                    snapped
                } else {
                    raw
                };
            }
        }
        Ok(counts)
    }

    pub(crate) fn from_unscaled(model: &Model, counts: &[f64], nvox: usize, time: f64) -> Self {
        let d = model.num_species();
        let eps = model.epsilon();
        let mut st = Self::zeros(model, nvox);
        st.time = time;
        for (g, &i) in model.meso_species().iter().enumerate() {
            for j in 0..nvox {
                st.meso[g * nvox + j] = counts[j * d + i].round() as u64;
            }
        }
        for (g, &i) in model.macro_species().iter().enumerate() {
            for j in 0..nvox {
                st.macro_values[g * nvox + j] = eps * counts[j * d + i];
            }
        }
        st
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub sample_times: Vec<f64>,
    pub states: Vec<HybridState>,
    pub event_count: u64,
}

/// Settings of the hybrid integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridConfig {
    /// Maximum RK4 step between events.
    pub max_step: f64,
    /// Event localisation tolerance is `event_tol * (1 + t)`.
    pub event_tol: f64,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            max_step: 0.01,
            event_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStepConfig {
    pub h: f64,
    /// Fixed RK4 substeps per deterministic half-step.
    pub ode_substeps: usize,
}

impl SplitStepConfig {
    pub fn new(h: f64) -> Self {
        Self { h, ode_substeps: 8 }
    }
}

/// `σ_h(t) = 1 − 2 (⌊t / (h/2)⌋ mod 2)`
pub fn sigma_kernel(t: f64, h: f64) -> i32 {
    let k = (t / (h / 2.0)).floor() as i64;
    1 - 2 * k.rem_euclid(2) as i32
}

/// Time derivative of the scaled macroscopic values, `|G2| × J` row-major.
pub fn drift(model: &Model, mesh: &Mesh, state: &HybridState) -> Result<Vec<f64>> {
    network::check_compatible(model, mesh)?;
    let counts = state.to_unscaled(model)?;
    let sys = ode::DriftSystem::new(model, mesh);
    let mut out = vec![0.0; sys.macro_positions().len()];
    sys.eval(&counts, &mut out);
    let eps = model.epsilon();
    let nvox = mesh.num_voxels();
    let d = model.num_species();
    let mut scaled = vec![0.0; out.len()];
    for (g, &i) in model.macro_species().iter().enumerate() {
        for j in 0..nvox {
            let m = sys.macro_index(j * d + i).expect("macro position");
            scaled[g * nvox + j] = eps * out[m];
        }
    }
    Ok(scaled)
}

pub(crate) fn check_sample_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(contract("sample times must be finite and nonnegative"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(contract("sample times must be nondecreasing"));
    }
    Ok(())
}

pub(crate) fn is_macro(model: &Model, i: usize) -> bool {
    model.group(i) == ScaleGroup::Macro
}
