//! Numerical laboratory for entanglement produced by molecular dissociation
//! and atom-pair collisions.
//!
//! Units throughout are `ħ = 1`; masses, rates and lengths are dimensionless.
//!
//! | module | content |
//! |--------|---------|
//! | [`numerics`] | sine integral, grids, Schmidt spectra, split-step propagation, birth-death master equation |
//! | [`gaussian_epr`] | two-particle Gaussian states and their EPR measures |
//! | [`collision`] | double-delta scattering and collisional entropy change |
//! | [`dissociation`] | Raman dissociation wavepacket, harmonic confinement |
//! | [`fluorescence`] | cooperative fluorescence of Dicke pairs |
//! | [`superbeats`] | fine-structure superbeats in alkali-dimer fluorescence |
//! | [`teleportation`] | Wigner-function smoothing and fidelity |
//! | [`cavity`] | entanglement-controlled cavity temperature |
//! | [`cli`] | experiment runner behind the `molqi` binary |

pub mod cavity;
pub mod cli;
pub mod collision;
pub mod dissociation;
pub mod error;
pub mod fluorescence;
pub mod gaussian_epr;
pub mod numerics;
pub mod superbeats;
pub mod teleportation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
