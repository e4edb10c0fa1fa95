//! Multiscale simulation of spatial stochastic reaction-transport kinetics.
//!
//! The crate couples three dynamics through shared Poisson paths: the exact
//! jump process on a voxel lattice, its hybrid approximation where abundant
//! species become continuous, and a split-step discretisation of the hybrid.
//! The [`harness`] module measures the distances between them across sweeps
//! of the scale parameter `ε` or the step `h`.

pub mod builtins;
pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod mesh;
pub mod model;
pub mod poisson;
pub mod sim;

pub use error::{Error, Result};
