//! Strang-split Fourier propagation of 1D wavefunctions.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::ComplexGrid1D;
use crate::{Error, Result};

/// Fraction of the momentum band, measured from the Nyquist edge, that must
/// stay empty.
const EDGE_BAND: f64 = 0.1;
/// Maximum probability allowed inside that band.
const EDGE_PROBABILITY: f64 = 1e-6;
const NORM_DRIFT: f64 = 1e-8;

/// FFT-ordered angular wavenumbers for `n` samples with spacing `dx`.
pub fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dx);
    (0..n)
        .map(|i| if i < n.div_ceil(2) { i as f64 } else { i as f64 - n as f64 } * dk)
        .collect()
}

/// Probability carried by wavenumbers within [`EDGE_BAND`] of the Nyquist edge.
pub fn edge_probability(psi: &ComplexGrid1D) -> f64 {
    let n = psi.len();
    let mut buf = psi.samples().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let k = wavenumbers(n, psi.dx());
    let k_nyq = PI / psi.dx();
    let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
    let edge: f64 = buf
        .iter()
        .zip(&k)
        .filter(|(_, &k)| k.abs() > (1.0 - EDGE_BAND) * k_nyq)
        .map(|(z, _)| z.norm_sqr())
        .sum();
    edge / total
}

fn check_aliasing(psi: &ComplexGrid1D, when: &str) -> Result<()> {
    let p = edge_probability(psi);
    if p > EDGE_PROBABILITY {
        return Err(Error::Accuracy(format!(
            "momentum content near the Nyquist edge {when} propagation is {p:.3e}; refine the grid"
        )));
    }
    Ok(())
}

/// Reusable propagator for a fixed grid, potential, mass and step.
pub struct SplitStepper {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    half_potential: Vec<Complex64>,
    kinetic: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl SplitStepper {
    pub fn new(n: usize, dx: f64, potential: &[f64], mass: f64, dt: f64) -> Result<Self> {
        if potential.len() != n {
            return Err(Error::Precondition(format!(
                "potential has {} samples, grid has {n}",
                potential.len()
            )));
        }
        if !(mass > 0.0) {
            return Err(Error::Precondition(format!("mass must be positive, got {mass}")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let half_potential = potential
            .iter()
            .map(|&v| Complex64::from_polar(1.0, -0.5 * v * dt))
            .collect();
        let inv_n = 1.0 / n as f64;
        let kinetic = wavenumbers(n, dx)
            .into_iter()
            .map(|k| Complex64::from_polar(inv_n, -k * k / (2.0 * mass) * dt))
            .collect();
        let scratch = vec![Complex64::default(); forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len())];
        Ok(Self { forward, inverse, half_potential, kinetic, scratch })
    }

    /// Advances `samples` by `steps` Strang steps, fusing adjacent half
    /// potential kicks.
    pub fn run(&mut self, samples: &mut [Complex64], steps: usize) {
        if steps == 0 {
            return;
        }
        mul_assign(samples, &self.half_potential);
        for s in 0..steps {
            self.forward.process_with_scratch(samples, &mut self.scratch);
            mul_assign(samples, &self.kinetic);
            self.inverse.process_with_scratch(samples, &mut self.scratch);
            if s + 1 < steps {
                for (z, h) in samples.iter_mut().zip(&self.half_potential) {
                    *z *= h * h;
                }
            }
        }
        mul_assign(samples, &self.half_potential);
    }
}

fn mul_assign(a: &mut [Complex64], b: &[Complex64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x *= y);
}

/// Evolves `psi` under `H = p²/2m + V(x)` for `steps` steps of size `dt`
/// (negative `dt` runs backwards).
///
/// Fails with an accuracy error if the state reaches the momentum-grid edge
/// before or after propagation, or if the norm drifts by more than 1e-8.
pub fn split_step_propagate(
    psi: &ComplexGrid1D,
    potential: &[f64],
    mass: f64,
    dt: f64,
    steps: usize,
) -> Result<ComplexGrid1D> {
    check_aliasing(psi, "before")?;
    let mut stepper = SplitStepper::new(psi.len(), psi.dx(), potential, mass, dt)?;
    let mut out = psi.clone();
    stepper.run(out.samples_mut(), steps);
    let (n0, n1) = (psi.norm_sqr(), out.norm_sqr());
    if (n1 - n0).abs() > NORM_DRIFT * n0.max(1.0) {
        return Err(Error::Accuracy(format!("norm drifted from {n0} to {n1}")));
    }
    check_aliasing(&out, "after")?;
    Ok(out)
}
