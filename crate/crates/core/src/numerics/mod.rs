//! Shared numerical kernels used by the physics modules.

pub mod birth_death;
pub mod grid;
pub mod quadrature;
pub mod schmidt;
pub mod special;
pub mod split_step;

pub use birth_death::{birth_death_lindblad, mean_photon_number, thermal_distribution};
pub use grid::{ComplexGrid1D, ComplexGrid2D, EntropyBase, ProbabilitySpectrum};
pub use schmidt::{binary_entropy, schmidt_spectrum, vn_entropy};
pub use special::sine_integral;
pub use split_step::split_step_propagate;
