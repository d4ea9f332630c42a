//! Two flux-tunable transmons coupled directly and through two fixed
//! resonators: circuit parameters, the truncated Hamiltonian and its
//! spectrum, Schrieffer-Wolff effective couplings, the perturbative static
//! ZZ interaction and the sweeps built on them.

pub mod analysis;
pub mod circuit;
pub mod config;
pub mod error;
pub mod hamiltonian;
pub mod perturbation;
pub mod pole;
pub mod spectrum;
pub mod zz;

pub use error::{Error, Result};
