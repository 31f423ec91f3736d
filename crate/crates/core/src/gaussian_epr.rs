//! Bipartite Gaussian wavepackets and their EPR-proximity measures.
//!
//! The state is a product of a centre-of-mass Gaussian in
//! `x_cm = (x₁+x₂)/2` and a relative Gaussian in `x_rel = x₁−x₂`. Each
//! collective mode is tracked by its covariance `(⟨x²⟩, ⟨{x,p}/2⟩, ⟨p²⟩)`
//! with respect to the canonically conjugate momenta `P = p₁+p₂` and
//! `p = (p₁−p₂)/2`. At `t = 0` both modes are minimum-uncertainty.
//!
//! Single-particle quantities follow from `x₁ = x_cm + x_rel/2`,
//! `x₂ = x_cm − x_rel/2`, `p₁ = P/2 + p`, `p₂ = P/2 − p`, so with
//! `a² = ⟨x_cm²⟩`, `b² = ⟨x_rel²⟩`:
//!
//! ```text
//! Var(x₁|x₂) = Var x₁ − Cov(x₁,x₂)²/Var x₂ = 4a²b² / (4a² + b²)
//! Var(p₁|p₂) = 4A²B² / (A² + 4B²),   A² = ⟨P²⟩, B² = ⟨p²⟩
//! Var p₁     = A²/4 + B²
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numerics::{schmidt_spectrum, vn_entropy, ComplexGrid2D, EntropyBase, ProbabilitySpectrum};
use crate::{Error, Result};

/// Second moments of one collective Gaussian mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCovariance {
    pub xx: f64,
    pub xp: f64,
    pub pp: f64,
}

impl ModeCovariance {
    /// Minimum-uncertainty mode with position standard deviation `dx`.
    pub fn minimum_uncertainty(dx: f64) -> Self {
        Self { xx: dx * dx, xp: 0.0, pp: 1.0 / (4.0 * dx * dx) }
    }

    /// Ballistic evolution for time `t` with mode mass `m`.
    pub fn free(self, m: f64, t: f64) -> Self {
        let v = t / m;
        Self { xx: self.xx + 2.0 * v * self.xp + v * v * self.pp, xp: self.xp + v * self.pp, pp: self.pp }
    }

    /// Evolution in a harmonic well of frequency `omega` with mode mass `m`.
    pub fn harmonic(self, m: f64, omega: f64, t: f64) -> Self {
        let (s, c) = (omega * t).sin_cos();
        let mw = m * omega;
        // x(t) = c x + s/(mω) p,  p(t) = −mω s x + c p
        let xx = c * c * self.xx + 2.0 * c * s / mw * self.xp + s * s / (mw * mw) * self.pp;
        let xp = -c * s * mw * self.xx + (c * c - s * s) * self.xp + c * s / mw * self.pp;
        let pp = s * s * mw * mw * self.xx - 2.0 * c * s * mw * self.xp + c * c * self.pp;
        Self { xx, xp, pp }
    }

    /// Complex exponent `α` of `ψ(x) ∝ exp(−α x²)` for this pure mode.
    fn exponent(self) -> Complex64 {
        Complex64::new(1.0 / (4.0 * self.xx), -self.xp / (2.0 * self.xx))
    }
}

/// Bipartite Gaussian of equal-mass particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleGaussian {
    cm: ModeCovariance,
    rel: ModeCovariance,
    mass: f64,
    t: f64,
}

/// Conditional statistics of particle 1 given a sharp outcome for particle 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conditional {
    /// `⟨x₁ | x₂ = a⟩`.
    pub mean_x1: f64,
    /// Standard deviation of `P(x₁ | x₂ = a)`; independent of `a`.
    pub dx1: f64,
    /// Standard deviation of `P(p₁ | p₂ = a)`; independent of `a`.
    pub dp1: f64,
}

/// The three EPR-proximity measures of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprMeasures {
    pub squeezing: f64,
    pub schmidt_number: f64,
    /// Entropy in nats.
    pub entropy: f64,
}

/// Exact and asymptotic entanglement entropy of a Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEntropy {
    /// From the numerical Schmidt spectrum of the sampled state.
    pub exact: f64,
    /// `log s`, valid when `Δx_cm ≫ Δx_rel`.
    pub asymptotic: f64,
    pub base: EntropyBase,
}

/// How a two-particle Gaussian is sampled for Schmidt decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    /// Half-width of the box in single-particle position standard deviations.
    pub position_sigmas: f64,
    /// Nyquist wavenumber in single-particle momentum standard deviations.
    pub momentum_sigmas: f64,
    pub max_points: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { position_sigmas: 7.0, momentum_sigmas: 7.0, max_points: 2048 }
    }
}

impl TwoParticleGaussian {
    /// Minimum-uncertainty state with the given collective position widths.
    pub fn new(dx_cm: f64, dx_rel: f64, mass: f64) -> Result<Self> {
        for (name, v) in [("dx_cm", dx_cm), ("dx_rel", dx_rel), ("mass", mass)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Precondition(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self {
            cm: ModeCovariance::minimum_uncertainty(dx_cm),
            rel: ModeCovariance::minimum_uncertainty(dx_rel),
            mass,
            t: 0.0,
        })
    }

    /// Separable state where each particle has position spread `sigma`.
    pub fn product(sigma: f64, mass: f64) -> Result<Self> {
        Self::new(sigma / std::f64::consts::SQRT_2, std::f64::consts::SQRT_2 * sigma, mass)
    }

    pub(crate) fn from_modes(cm: ModeCovariance, rel: ModeCovariance, mass: f64, t: f64) -> Self {
        Self { cm, rel, mass, t }
    }

    pub fn cm(&self) -> ModeCovariance {
        self.cm
    }

    pub fn rel(&self) -> ModeCovariance {
        self.rel
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dx_cm(&self) -> f64 {
        self.cm.xx.sqrt()
    }

    pub fn dx_rel(&self) -> f64 {
        self.rel.xx.sqrt()
    }

    /// Spread of `P = p₁ + p₂`.
    pub fn dp_cm(&self) -> f64 {
        self.cm.pp.sqrt()
    }

    /// Spread of `p = (p₁ − p₂)/2`.
    pub fn dp_rel(&self) -> f64 {
        self.rel.pp.sqrt()
    }

    pub fn dx1(&self) -> f64 {
        (self.cm.xx + self.rel.xx / 4.0).sqrt()
    }

    /// Unconditional single-particle momentum spread `√(⟨P²⟩/4 + ⟨p²⟩)`.
    pub fn dp1(&self) -> f64 {
        (self.cm.pp / 4.0 + self.rel.pp).sqrt()
    }

    pub fn conditional_variances(&self, a: f64) -> Conditional {
        let (a2, b2) = (self.cm.xx, self.rel.xx);
        let var_x = a2 + b2 / 4.0;
        let cov_x = a2 - b2 / 4.0;
        let (pa2, pb2) = (self.cm.pp, self.rel.pp);
        Conditional {
            mean_x1: cov_x / var_x * a,
            dx1: (4.0 * a2 * b2 / (4.0 * a2 + b2)).sqrt(),
            dp1: (4.0 * pa2 * pb2 / (pa2 + 4.0 * pb2)).sqrt(),
        }
    }

    /// `(min(2Δx_cm, Δx_rel), min(2Δ[(p₁+p₂)/2], Δ[p₁−p₂]))`, the limiting
    /// conditional widths near the two ideal EPR states.
    pub fn epr_limit_widths(&self) -> (f64, f64) {
        let dx = (2.0 * self.dx_cm()).min(self.dx_rel());
        let dp = self.dp_cm().min(2.0 * self.dp_rel());
        (dx, dp)
    }

    /// `s = ħ / (2 Δx₁⁽ᶜ⁾ Δp₁⁽ᶜ⁾)`.
    pub fn squeezing_parameter(&self) -> f64 {
        let c = self.conditional_variances(0.0);
        1.0 / (2.0 * c.dx1 * c.dp1)
    }

    /// `K = Δp₁ / Δp₁⁽ᶜ⁾`.
    pub fn schmidt_number(&self) -> f64 {
        self.dp1() / self.conditional_variances(0.0).dp1
    }

    /// Free flight of both particles for an additional time `dt`.
    pub fn free_evolve(&self, dt: f64) -> Result<Self> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::Precondition(format!("free evolution needs t ≥ 0, got {dt}")));
        }
        Ok(Self {
            cm: self.cm.free(2.0 * self.mass, dt),
            rel: self.rel.free(0.5 * self.mass, dt),
            mass: self.mass,
            t: self.t + dt,
        })
    }

    /// `ψ(x₁, x₂)` up to normalization.
    pub fn amplitude(&self, x1: f64, x2: f64) -> Complex64 {
        let xc = 0.5 * (x1 + x2);
        let xr = x1 - x2;
        (-(self.cm.exponent() * xc * xc) - self.rel.exponent() * xr * xr).exp()
    }

    /// Samples the state on a square grid chosen by `policy` and normalizes it.
    pub fn sample_grid(&self, policy: GridPolicy) -> Result<ComplexGrid2D> {
        let half = policy.position_sigmas * self.dx1();
        let dx_max = std::f64::consts::PI / (policy.momentum_sigmas * self.dp1());
        let n = ((2.0 * half / dx_max).ceil() as usize).max(32);
        if n > policy.max_points {
            return Err(Error::Accuracy(format!(
                "resolving both Δx₁={:.3e} and Δp₁={:.3e} needs {n} points per axis (limit {})",
                self.dx1(),
                self.dp1(),
                policy.max_points
            )));
        }
        let dx = 2.0 * half / n as f64;
        let xs: Vec<f64> = (0..n).map(|i| -half + (i as f64 + 0.5) * dx).collect();
        let mut grid = ComplexGrid2D::from_fn(&xs, &xs, |a, b| self.amplitude(a, b))?;
        grid.normalize();
        Ok(grid)
    }

    pub fn schmidt_spectrum(&self, policy: GridPolicy) -> Result<ProbabilitySpectrum> {
        schmidt_spectrum(&self.sample_grid(policy)?)
    }

    pub fn entropy(&self, base: EntropyBase, policy: GridPolicy) -> Result<GaussianEntropy> {
        let spec = self.schmidt_spectrum(policy)?;
        Ok(GaussianEntropy {
            exact: vn_entropy(&spec, base),
            asymptotic: base.log(self.squeezing_parameter()),
            base,
        })
    }

    pub fn measures(&self, policy: GridPolicy) -> Result<EprMeasures> {
        Ok(EprMeasures {
            squeezing: self.squeezing_parameter(),
            schmidt_number: self.schmidt_number(),
            entropy: self.entropy(EntropyBase::Nats, policy)?.exact,
        })
    }
}

/// Exact Schmidt spectrum of a two-mode Gaussian with Schmidt number `k`:
/// `εₙ = (1−q) qⁿ` with `q = (K−1)/(K+1)`, so that `1/Σεₙ² = K`.
pub fn gaussian_ladder(k: f64, terms: usize) -> Vec<f64> {
    let q = (k - 1.0) / (k + 1.0);
    (0..terms).map(|n| (1.0 - q) * q.powi(n as i32)).collect()
}

/// Closed-form entropy of [`gaussian_ladder`] summed to infinity.
pub fn gaussian_ladder_entropy(k: f64, base: EntropyBase) -> f64 {
    if k <= 1.0 {
        return 0.0;
    }
    let q = (k - 1.0) / (k + 1.0);
    let nats = -(1.0 - q).ln() - q * q.ln() / (1.0 - q);
    base.convert_from_nats(nats)
}

/// Exact entropy of a pure two-mode Gaussian via the determinant of the
/// single-particle covariance matrix.
pub fn covariance_entropy(state: &TwoParticleGaussian, base: EntropyBase) -> f64 {
    let (cm, rel) = (state.cm(), state.rel());
    let var_x = cm.xx + rel.xx / 4.0;
    let var_p = cm.pp / 4.0 + rel.pp;
    let cov_xp = cm.xp / 2.0 + rel.xp / 2.0;
    let nu = 2.0 * (var_x * var_p - cov_xp * cov_xp).sqrt();
    gaussian_ladder_entropy(nu, base)
}

/// Amplitude matrix of the state on arbitrary axes, for external oracles.
pub fn amplitude_matrix(state: &TwoParticleGaussian, x1: &[f64], x2: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(x1.len(), x2.len(), |i, j| state.amplitude(x1[i], x2[j]))
}
