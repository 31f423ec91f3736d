//! Continuous-variable teleportation as Gaussian smoothing of the Wigner
//! function.
//!
//! With `α = x/λ + ipλ` the teleported state is
//!
//! ```text
//! W_out(α) = ∫ G_σ(α − β) W_in(β) d²β,   G_σ(α) = exp(−|α|²/σ²)/(πσ²)
//! ```
//!
//! where `σ = e^{−2s_E}`, `s_E = 1/(2Δx_EΔp_E)` and `λ² = Δx_E/Δp_E`, so
//! each quadrature receives variance `σ²/2` in the scaled metric.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::numerics::grid::ComplexGrid1D;
use crate::numerics::split_step::wavenumbers;
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-6;
/// Probability allowed outside the Wigner momentum window or at the grid edge.
const SUPPORT_TOL: f64 = 1e-10;
/// Fraction of `∫|W|` allowed in the outer frame after smoothing.
const WRAP_TOL: f64 = 1e-8;
const FRAME: f64 = 0.05;

/// Wigner function sampled on a uniform `(x, p)` lattice; rows index `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    x0: f64,
    dx: f64,
    p0: f64,
    dp: f64,
    values: DMatrix<f64>,
}

impl WignerGrid {
    pub fn new(x0: f64, dx: f64, p0: f64, dp: f64, values: DMatrix<f64>) -> Result<Self> {
        if !(dx > 0.0 && dp > 0.0) {
            return Err(Error::Precondition("phase-space spacings must be positive".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition("Wigner values must be finite".into()));
        }
        Ok(Self { x0, dx, p0, dp, values })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dp(&self) -> f64 {
        self.dp
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p0 + j as f64 * self.dp
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.shape()
    }

    pub fn integral(&self) -> f64 {
        self.values.sum() * self.dx * self.dp
    }

    /// `∫W dp` at each `x`.
    pub fn x_marginal(&self) -> Vec<f64> {
        self.values.row_iter().map(|r| r.sum() * self.dp).collect()
    }

    /// `∫W dx` at each `p`.
    pub fn p_marginal(&self) -> Vec<f64> {
        self.values.column_iter().map(|c| c.sum() * self.dx).collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values.min()
    }

    /// Row of `W` at position `x`, linearly interpolated between rows.
    pub fn row_at(&self, x: f64) -> Result<Vec<f64>> {
        let (nx, _) = self.shape();
        let s = (x - self.x0) / self.dx;
        if !(s >= 0.0 && s <= (nx - 1) as f64) {
            return Err(Error::Domain(format!("x = {x} lies outside the grid")));
        }
        let i = (s.floor() as usize).min(nx - 2);
        let f = s - i as f64;
        Ok(self
            .values
            .row(i)
            .iter()
            .zip(self.values.row(i + 1).iter())
            .map(|(a, b)| (1.0 - f) * a + f * b)
            .collect())
    }

    fn same_lattice(&self, other: &Self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        self.shape() == other.shape()
            && close(self.x0, other.x0)
            && close(self.dx, other.dx)
            && close(self.p0, other.p0)
            && close(self.dp, other.dp)
    }

    fn check_normalized(&self, what: &str) -> Result<()> {
        let n = self.integral();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Precondition(format!("{what} has ∫∫W = {n}, expected 1")));
        }
        Ok(())
    }
}

/// Position and momentum errors of the teleportation process.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ErrorBudget {
    pub dx_e: f64,
    pub dp_e: f64,
}

impl ErrorBudget {
    pub fn new(dx_e: f64, dp_e: f64) -> Result<Self> {
        if !(dx_e > 0.0 && dp_e > 0.0 && dx_e.is_finite() && dp_e.is_finite()) {
            return Err(Error::Precondition(format!("error widths must be positive, got ({dx_e}, {dp_e})")));
        }
        Ok(Self { dx_e, dp_e })
    }

    /// Balanced budget (`λ = 1`) with the given error squeezing.
    pub fn from_squeezing(s_e: f64) -> Result<Self> {
        let d = (0.5 / s_e).sqrt();
        Self::new(d, d)
    }

    pub fn squeezing(&self) -> f64 {
        0.5 / (self.dx_e * self.dp_e)
    }

    pub fn sigma(&self) -> f64 {
        (-2.0 * self.squeezing()).exp()
    }

    pub fn lambda(&self) -> f64 {
        (self.dx_e / self.dp_e).sqrt()
    }

    /// Smoothing standard deviations `(σ_x, σ_p)` in physical units.
    pub fn quadrature_widths(&self) -> (f64, f64) {
        let s = self.sigma() / 2f64.sqrt();
        let l = self.lambda();
        (s * l, s / l)
    }
}

/// `W(x, p) = (1/π) ∫ ψ*(x + y) ψ(x − y) e^{2ipy} dy`.
///
/// The momentum lattice has spacing `π/(N dx)` and covers `|p| < π/(2dx)`,
/// so `ψ` must be band-limited to half its own Nyquist range.
pub fn wigner_of_pure_state(psi: &ComplexGrid1D) -> Result<WignerGrid> {
    let n = psi.len();
    let dx = psi.dx();
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Precondition(format!("state norm is {norm}, expected 1")));
    }
    check_support(psi)?;

    let s = psi.samples();
    let half = n as isize / 2;
    let fft = FftPlanner::new().plan_fft_inverse(n);
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            let j = j as isize;
            for m in -(half - 1)..half {
                let (a, b) = (j + m, j - m);
                if a < 0 || b < 0 || a >= n as isize || b >= n as isize {
                    continue;
                }
                buf[m.rem_euclid(n as isize) as usize] = s[a as usize].conj() * s[b as usize];
            }
            fft.process(&mut buf);
            // FFT order to ascending p
            (0..n).map(|k| buf[(k + n - n / 2) % n].re * dx / PI).collect()
        })
        .collect();
    let values = DMatrix::from_fn(n, n, |i, k| rows[i][k]);
    let dp = PI / (n as f64 * dx);
    WignerGrid::new(psi.x0(), dx, -((n / 2) as f64) * dp, dp, values)
}

fn check_support(psi: &ComplexGrid1D) -> Result<()> {
    let n = psi.len();
    let frame = ((n as f64 * FRAME) as usize).max(1);
    let edge: f64 = psi.samples()[..frame]
        .iter()
        .chain(&psi.samples()[n - frame..])
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        * psi.dx();
    if edge > SUPPORT_TOL {
        return Err(Error::Accuracy(format!("probability {edge:.3e} at the grid edge; widen the grid")));
    }
    let mut buf = psi.samples().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let k = wavenumbers(n, psi.dx());
    let k_max = 0.5 * PI / psi.dx();
    let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
    let outside: f64 = buf.iter().zip(&k).filter(|(_, k)| k.abs() >= k_max).map(|(z, _)| z.norm_sqr()).sum();
    if outside / total > SUPPORT_TOL {
        return Err(Error::Accuracy(format!(
            "momentum probability {:.3e} beyond π/(2dx) = {k_max}; halve dx",
            outside / total
        )));
    }
    Ok(())
}

/// Convolves `W_in` with `G_σ` in the scaled metric of `err`.
///
/// The convolution is spectral and exact for a grid-resolved `W`. When `σ`
/// is below a tenth of the scaled lattice spacing the input is returned
/// unchanged.
pub fn teleport_smooth(w_in: &WignerGrid, err: &ErrorBudget) -> Result<WignerGrid> {
    w_in.check_normalized("input Wigner function")?;
    let (sx, sp) = err.quadrature_widths();
    let l = err.lambda();
    let sigma = err.sigma();
    if sigma < 0.1 * (w_in.dx / l).min(w_in.dp * l) {
        return Ok(w_in.clone());
    }
    let mut values = w_in.values.clone();
    gaussian_filter_rows(&mut values, w_in.dp, sp);
    values.transpose_mut();
    gaussian_filter_rows(&mut values, w_in.dx, sx);
    values.transpose_mut();
    let out = WignerGrid::new(w_in.x0, w_in.dx, w_in.p0, w_in.dp, values)?;
    let wrap = frame_weight(&out);
    if wrap > WRAP_TOL {
        return Err(Error::Accuracy(format!(
            "smoothed Wigner function carries {wrap:.3e} of its weight at the grid edge; \
             widen the position grid or reduce σ"
        )));
    }
    Ok(out)
}

/// Periodic Gaussian filter of standard deviation `width` along each row.
fn gaussian_filter_rows(values: &mut DMatrix<f64>, step: f64, width: f64) {
    let (nr, nc) = values.shape();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(nc);
    let inv = planner.plan_fft_inverse(nc);
    let damp: Vec<f64> = wavenumbers(nc, step)
        .iter()
        .map(|k| (-0.5 * k * k * width * width).exp() / nc as f64)
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); nc];
    for r in 0..nr {
        for (c, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(values[(r, c)], 0.0);
        }
        fwd.process(&mut buf);
        buf.iter_mut().zip(&damp).for_each(|(b, d)| *b *= d);
        inv.process(&mut buf);
        for (c, b) in buf.iter().enumerate() {
            values[(r, c)] = b.re;
        }
    }
}

fn frame_weight(w: &WignerGrid) -> f64 {
    let (nx, np) = w.shape();
    let fx = ((nx as f64 * FRAME) as usize).max(1);
    let fp = ((np as f64 * FRAME) as usize).max(1);
    let total: f64 = w.values.iter().map(|v| v.abs()).sum();
    let mut edge = 0.0;
    for i in 0..nx {
        for j in 0..np {
            if i < fx || i >= nx - fx || j < fp || j >= np - fp {
                edge += w.values[(i, j)].abs();
            }
        }
    }
    edge / total
}

/// `F = 2π ∫∫ W_a W_b dx dp`, clamped to `[0, 1 + 1e-6]`.
pub fn fidelity(a: &WignerGrid, b: &WignerGrid) -> Result<f64> {
    if !a.same_lattice(b) {
        return Err(Error::Precondition("Wigner functions live on different lattices".into()));
    }
    let f = 2.0 * PI * a.values.dot(&b.values) * a.dx * a.dp;
    Ok(f.clamp(0.0, 1.0 + NORM_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FidelityPoint {
    pub s_e: f64,
    pub sigma: f64,
    pub fidelity: f64,
}

/// Fidelity of the teleported state with the input over a range of error
/// squeezings, at fixed error ratio `λ`.
pub fn fidelity_curve(psi: &ComplexGrid1D, s_values: &[f64], lambda: f64) -> Result<Vec<FidelityPoint>> {
    if !(lambda > 0.0) {
        return Err(Error::Precondition(format!("λ must be positive, got {lambda}")));
    }
    let w_in = wigner_of_pure_state(psi)?;
    s_values
        .par_iter()
        .map(|&s_e| {
            if !(s_e > 0.0) {
                return Err(Error::Precondition(format!("error squeezing must be positive, got {s_e}")));
            }
            let d = (0.5 / s_e).sqrt();
            let err = ErrorBudget::new(d * lambda, d / lambda)?;
            let w_out = teleport_smooth(&w_in, &err)?;
            Ok(FidelityPoint { s_e, sigma: err.sigma(), fidelity: fidelity(&w_in, &w_out)? })
        })
        .collect()
}

/// Interference visibility of a two-lobe state with lobes at `±x_sep`:
/// `|∫W(0,p) e^{−2i x_sep p} dp| / ∫W(x_sep,p) dp`.
pub fn fringe_contrast(w: &WignerGrid, x_sep: f64) -> Result<f64> {
    let mid = w.row_at(0.0)?;
    let lobe = w.row_at(x_sep)?;
    let osc: Complex64 = mid
        .iter()
        .enumerate()
        .map(|(j, v)| Complex64::from_polar(*v, -2.0 * x_sep * w.p(j)))
        .sum();
    let den: f64 = lobe.iter().sum();
    if den <= 0.0 {
        return Err(Error::Domain("no probability at the lobe position".into()));
    }
    Ok(osc.norm() / den)
}

/// Cat state `N(g(x − d) ± g(x + d))` with `g` the oscillator ground state.
pub fn cat_state(n: usize, dx: f64, d: f64, odd: bool) -> Result<ComplexGrid1D> {
    let sign = if odd { -1.0 } else { 1.0 };
    let g = |x: f64| (-0.5 * x * x).exp() * PI.powf(-0.25);
    let mut psi = ComplexGrid1D::from_fn(n, dx, |x| Complex64::new(g(x - d) + sign * g(x + d), 0.0))?;
    psi.normalize();
    Ok(psi)
}

/// Gaussian `exp(−(x−x_c)²/(4σ²) + ip_c x)` normalized on the grid.
pub fn gaussian_state(n: usize, dx: f64, x_c: f64, p_c: f64, width: f64) -> Result<ComplexGrid1D> {
    let mut psi = ComplexGrid1D::from_fn(n, dx, |x| {
        Complex64::from_polar((-(x - x_c).powi(2) / (4.0 * width * width)).exp(), p_c * x)
    })?;
    psi.normalize();
    Ok(psi)
}
