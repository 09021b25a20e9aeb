//! Non-perturbative simulation of one-dimensional matter coupled to a
//! discretized multimode photon continuum in the long-wavelength limit.
//!
//! The crate solves the length-gauge light-matter Hamiltonian exactly (up to
//! controlled basis truncations) for free particles, a bound soft-well atom
//! and a clamped-nuclei H2 model, and derives the quantities that make the
//! multimode coupling physical: the dressed normal modes of the photon
//! sector, the resulting mass renormalization, ground-state observables,
//! polaritonic potential-energy surfaces and the quality of common
//! approximation schemes against the full calculation.
//!
//! Modules follow the pipeline order: [`linalg`] supplies the symmetric
//! eigensolvers, [`continuum`] builds photon continua and their dressed
//! modes, [`matter`] discretizes the matter systems, [`assembler`] forms and
//! solves the coupled Hamiltonians, [`observables`] reduces coupled states
//! to measurable quantities, and [`popes`] scans molecular potential-energy
//! surfaces.

pub mod assembler;
pub mod continuum;
pub mod error;
pub mod linalg;
pub mod matter;
pub mod observables;
pub mod popes;

pub use error::{Error, Result};
