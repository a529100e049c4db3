//! Simulation and verification toolkit for recovering a hidden matching
//! between two noisy Gaussian point clouds.

pub mod augmenting;
pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod greedy;
pub mod lap;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod theory;
pub mod tracking;
pub mod verify;

pub use error::{Error, Result};
