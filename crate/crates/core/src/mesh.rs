//! Voxel geometry and transport adjacency.

use crate::error::{contract, Error, Result};

/// Directed hop `from → to` with base rate `q̄` per molecule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    voxel_volumes: Vec<f64>,
    total_volume: f64,
    /// `edges[i]` lists the hops available to species `i`.
    edges: Vec<Vec<Edge>>,
    dimension: usize,
    voxel_diameters: Option<Vec<f64>>,
}

impl Mesh {
    pub fn new(
        voxel_volumes: Vec<f64>,
        edges: Vec<Vec<Edge>>,
        dimension: usize,
        voxel_diameters: Option<Vec<f64>>,
    ) -> Result<Self> {
        let nvox = voxel_volumes.len();
        if nvox == 0 {
            return Err(Error::InvalidModel("mesh has no voxels".into()));
        }
        if dimension == 0 {
            return Err(Error::InvalidModel("mesh dimension must be positive".into()));
        }
        if let Some(v) = voxel_volumes.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidModel(format!("voxel volume must be positive, got {v}")));
        }
        for (i, list) in edges.iter().enumerate() {
            for e in list {
                if e.from >= nvox || e.to >= nvox {
                    return Err(Error::InvalidModel(format!(
                        "species {i}: edge {} -> {} outside mesh of {nvox} voxels",
                        e.from, e.to
                    )));
                }
                if e.from == e.to {
                    return Err(Error::InvalidModel(format!("species {i}: self edge at voxel {}", e.from)));
                }
                if !(e.rate.is_finite() && e.rate > 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "species {i}: edge {} -> {} needs a positive rate",
                        e.from, e.to
                    )));
                }
            }
        }
        if let Some(d) = &voxel_diameters {
            if d.len() != nvox || d.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(Error::InvalidModel("voxel diameters must be positive, one per voxel".into()));
            }
        }
        let total_volume = voxel_volumes.iter().sum();
        Ok(Self {
            voxel_volumes,
            total_volume,
            edges,
            dimension,
            voxel_diameters,
        })
    }

    pub fn num_voxels(&self) -> usize {
        self.voxel_volumes.len()
    }

    pub fn num_species(&self) -> usize {
        self.edges.len()
    }

    pub fn volume(&self, j: usize) -> f64 {
        self.voxel_volumes[j]
    }

    pub fn volumes(&self) -> &[f64] {
        &self.voxel_volumes
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn edges(&self, species: usize) -> &[Edge] {
        &self.edges[species]
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn voxel_diameters(&self) -> Option<&[f64]> {
        self.voxel_diameters.as_deref()
    }
}

/// Ring of `voxels` equal segments on `[0, length)`; species `i` hops to
/// each neighbour at rate `hop_rates[i]`.
pub fn periodic_1d_mesh(voxels: usize, length: f64, hop_rates: &[f64]) -> Result<Mesh> {
    if voxels < 2 {
        return Err(contract(format!("a periodic mesh needs at least 2 voxels, got {voxels}")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(contract(format!("domain length must be positive, got {length}")));
    }
    let width = length / voxels as f64;
    let edges = hop_rates
        .iter()
        .map(|&rate| {
            if rate <= 0.0 {
                return Vec::new();
            }
            let mut list = Vec::with_capacity(2 * voxels);
            for j in 0..voxels {
                let left = (j + voxels - 1) % voxels;
                let right = (j + 1) % voxels;
                if left == right {
                    // two-voxel ring: both neighbours are the same voxel
                    list.push(Edge {
                        from: j,
                        to: right,
                        rate: 2.0 * rate,
                    });
                } else {
                    list.push(Edge { from: j, to: left, rate });
                    list.push(Edge { from: j, to: right, rate });
                }
            }
            list
        })
        .collect();
    Mesh::new(vec![width; voxels], edges, 1, Some(vec![width; voxels]))
}

/// Uniformity and connectivity constants of a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub mean_volume: f64,
    pub min_volume_ratio: f64,
    pub max_volume_ratio: f64,
    /// Largest number of distinct targets reachable from one voxel by one species.
    pub max_degree: usize,
    /// Shape bounds `min/max (diameter^d / V_j)`, only with diameters.
    pub shape_bounds: Option<(f64, f64)>,
}

pub fn regularity_report(mesh: &Mesh) -> RegularityReport {
    let nvox = mesh.num_voxels();
    let mean_volume = mesh.total_volume() / nvox as f64;
    let (lo, hi) = mesh
        .volumes()
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));

    let mut max_degree = 0;
    for s in 0..mesh.num_species() {
        let mut targets: Vec<Vec<usize>> = vec![Vec::new(); nvox];
        for e in mesh.edges(s) {
            if !targets[e.from].contains(&e.to) {
                targets[e.from].push(e.to);
            }
        }
        max_degree = max_degree.max(targets.iter().map(Vec::len).max().unwrap_or(0));
    }

    let shape_bounds = mesh.voxel_diameters().map(|diam| {
        let d = mesh.dimension() as i32;
        diam.iter()
            .zip(mesh.volumes())
            .map(|(h, v)| h.powi(d) / v)
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), x| (lo.min(x), hi.max(x)))
    });

    RegularityReport {
        mean_volume,
        min_volume_ratio: lo / mean_volume,
        max_volume_ratio: hi / mean_volume,
        max_degree,
        shape_bounds,
    }
}
