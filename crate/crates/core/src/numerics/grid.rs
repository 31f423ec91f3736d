//! Sampled wavefunctions on uniform grids.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub const MIN_SAMPLES: usize = 16;

/// Default number of points for 1D grids.
pub const DEFAULT_POINTS: usize = 2048;

/// A wavefunction sampled at `x0 + i·dx`, `i = 0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid1D {
    samples: Vec<Complex64>,
    x0: f64,
    dx: f64,
}

impl ComplexGrid1D {
    pub fn new(samples: Vec<Complex64>, x0: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::Precondition(format!("grid spacing must be positive, got {dx}")));
        }
        if samples.len() < MIN_SAMPLES {
            return Err(Error::Precondition(format!(
                "grid needs at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Precondition("grid samples must be finite".into()));
        }
        Ok(Self { samples, x0, dx })
    }

    /// Samples `f` on `n` points centred on zero with spacing `dx`.
    pub fn from_fn<F: Fn(f64) -> Complex64>(n: usize, dx: f64, f: F) -> Result<Self> {
        let x0 = -0.5 * dx * n as f64;
        let samples = (0..n).map(|i| f(x0 + i as f64 * dx)).collect();
        Self::new(samples, x0, dx)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.x(i))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.samples.iter_mut().for_each(|z| *z /= n);
        }
    }

    /// `⟨self|other⟩` on a shared grid.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.len(), other.len(), "grids differ in length");
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.dx
    }

    /// Mean and standard deviation of `|ψ(x)|²`.
    pub fn position_moments(&self) -> (f64, f64) {
        let norm = self.norm_sqr();
        let mean = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, z)| self.x(i) * z.norm_sqr())
            .sum::<f64>()
            * self.dx
            / norm;
        let var = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, z)| (self.x(i) - mean).powi(2) * z.norm_sqr())
            .sum::<f64>()
            * self.dx
            / norm;
        (mean, var.sqrt())
    }
}

/// Two-particle amplitude `ψ(x₁, x₂)`; rows index `x₁`, columns `x₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid2D {
    samples: DMatrix<Complex64>,
    dx1: f64,
    dx2: f64,
}

impl ComplexGrid2D {
    pub fn new(samples: DMatrix<Complex64>, dx1: f64, dx2: f64) -> Result<Self> {
        if !(dx1 > 0.0 && dx2 > 0.0) {
            return Err(Error::Precondition("grid spacings must be positive".into()));
        }
        if samples.nrows() == 0 || samples.ncols() == 0 {
            return Err(Error::Precondition("empty two-particle grid".into()));
        }
        let g = Self { samples, dx1, dx2 };
        if !g.norm_sqr().is_finite() {
            return Err(Error::Precondition("two-particle grid has non-finite norm".into()));
        }
        Ok(g)
    }

    /// Samples `f(x₁, x₂)` on the given coordinate lists.
    pub fn from_fn<F: Fn(f64, f64) -> Complex64>(x1: &[f64], x2: &[f64], f: F) -> Result<Self> {
        if x1.len() < 2 || x2.len() < 2 {
            return Err(Error::Precondition("each axis needs at least two points".into()));
        }
        let dx1 = x1[1] - x1[0];
        let dx2 = x2[1] - x2[0];
        let samples = DMatrix::from_fn(x1.len(), x2.len(), |i, j| f(x1[i], x2[j]));
        Self::new(samples, dx1, dx2)
    }

    pub fn samples(&self) -> &DMatrix<Complex64> {
        &self.samples
    }

    pub fn dx1(&self) -> f64 {
        self.dx1
    }

    pub fn dx2(&self) -> f64 {
        self.dx2
    }

    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx1 * self.dx2
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.samples /= Complex64::new(n, 0.0);
        }
    }

    /// Multiplies column `j` by `phase(x₂_j)`; a local unitary on particle 2.
    pub fn apply_local_phase_2<F: Fn(usize) -> f64>(&mut self, phase: F) {
        for j in 0..self.samples.ncols() {
            let u = Complex64::from_polar(1.0, phase(j));
            self.samples.column_mut(j).iter_mut().for_each(|z| *z *= u);
        }
    }
}

/// Eigenvalues of a reduced density matrix, descending, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilitySpectrum {
    values: Vec<f64>,
}

impl ProbabilitySpectrum {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    /// Renormalizes, clips round-off negatives to zero, and sorts descending.
    pub fn from_weights<I: IntoIterator<Item = f64>>(weights: I) -> Result<Self> {
        let mut values: Vec<f64> = weights.into_iter().map(|v| v.max(0.0)).collect();
        let total: f64 = values.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Precondition("spectrum has no positive weight".into()));
        }
        values.iter_mut().for_each(|v| *v /= total);
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Σ εₙ²`, the purity of the reduced state.
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|e| e * e).sum()
    }

    /// `1 / Σ εₙ²`, the effective number of Schmidt modes.
    pub fn effective_rank(&self) -> f64 {
        1.0 / self.purity()
    }
}

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyBase {
    #[default]
    Nats,
    Bits,
}

impl EntropyBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            EntropyBase::Nats => x.ln(),
            EntropyBase::Bits => x.log2(),
        }
    }

    pub fn convert_from_nats(self, s: f64) -> f64 {
        match self {
            EntropyBase::Nats => s,
            EntropyBase::Bits => s / std::f64::consts::LN_2,
        }
    }
}
