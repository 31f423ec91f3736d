//! Schmidt decomposition of sampled two-particle amplitudes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::grid::{ComplexGrid2D, EntropyBase, ProbabilitySpectrum};
use crate::{Error, Result};

pub const NORM_TOLERANCE: f64 = 1e-8;

/// Reduced-state eigenvalues of a normalized two-particle grid state.
///
/// The amplitude matrix is scaled by `√(dx₁dx₂)` so that its squared
/// singular values are the eigenvalues of the single-particle reduced
/// density operator.
pub fn schmidt_spectrum(psi: &ComplexGrid2D) -> Result<ProbabilitySpectrum> {
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Precondition(format!(
            "two-particle state must be normalized to 1 within {NORM_TOLERANCE:e}, norm is {norm}"
        )));
    }
    let scale = (psi.dx1() * psi.dx2()).sqrt();
    singular_weights(psi.samples(), scale).and_then(ProbabilitySpectrum::from_weights)
}

/// Squared singular values of `scale · m`. Purely real matrices take the
/// faster real decomposition.
pub fn singular_weights(m: &DMatrix<Complex64>, scale: f64) -> Result<Vec<f64>> {
    let sv = if m.iter().all(|z| z.im == 0.0) {
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re * scale).singular_values()
    } else {
        (m * Complex64::new(scale, 0.0)).singular_values()
    };
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::Accuracy("singular value decomposition did not converge".into()));
    }
    Ok(sv.iter().map(|s| s * s).collect())
}

/// Von Neumann entropy `-Σ εₙ log εₙ`, with `0·log 0 = 0`.
pub fn vn_entropy(spec: &ProbabilitySpectrum, base: EntropyBase) -> f64 {
    -spec
        .values()
        .iter()
        .filter(|&&e| e > 0.0)
        .map(|&e| e * base.log(e))
        .sum::<f64>()
}

/// Binary entropy `-p log p - (1-p) log(1-p)`.
pub fn binary_entropy(p: f64, base: EntropyBase) -> f64 {
    [p, 1.0 - p]
        .into_iter()
        .filter(|&e| e > 0.0)
        .map(|e| -e * base.log(e))
        .sum()
}
