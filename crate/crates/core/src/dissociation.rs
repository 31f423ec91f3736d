//! Raman-dissociation wavepackets and their confinement in receding
//! harmonic wells.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::gaussian_epr::TwoParticleGaussian;
use crate::numerics::quadrature::GaussLegendre;
use crate::numerics::special::legendre;
use crate::{Error, Result};

/// Parameters of the expanding relative-motion wavepacket.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RamanParams {
    pub omega_eff: f64,
    /// Relative velocity of the fragments.
    pub v: f64,
    /// Relative wavenumber; the reduced mass is `k/v`.
    pub k: f64,
    /// Phase shifts `(δ₀, δ₂)`.
    #[serde(default)]
    pub phase_shifts: [f64; 2],
}

impl RamanParams {
    pub fn new(omega_eff: f64, v: f64, k: f64) -> Result<Self> {
        for (name, x) in [("omega_eff", omega_eff), ("v", v), ("k", k)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Precondition(format!("{name} must be positive, got {x}")));
            }
        }
        Ok(Self { omega_eff, v, k, phase_shifts: [0.0; 2] })
    }

    /// Relative energy `k²/2μ = kv/2` of the packet centre.
    pub fn energy(&self) -> f64 {
        0.5 * self.k * self.v
    }

    fn envelope(&self, r: f64, t: f64) -> f64 {
        (0.5 * self.omega_eff * (t - r / self.v)).sin()
    }
}

/// Relative wavefunction at `(r, θ)` and time `t`, unnormalized.
pub fn raman_wavepacket(r: f64, theta: f64, t: f64, p: &RamanParams) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    if r > p.v * t {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let z = theta.cos();
    let radial = Complex64::new(0.0, 2.0 * p.k * r).inv() * p.envelope(r, t);
    let sum: Complex64 = [0usize, 2]
        .iter()
        .zip(p.phase_shifts)
        .map(|(&l, delta)| {
            let lf = l as f64;
            let ang = ((2.0 * lf + 1.0) / (4.0 * PI)).sqrt() * legendre(l, z);
            let phase = p.k * r - 0.5 * PI * lf + delta - p.energy() * t;
            Complex64::from_polar(ang, phase)
        })
        .sum();
    Ok(sum * radial)
}

/// `∫|φ|² d³r` over the causal support `r ≤ vt`.
pub fn wavepacket_norm(p: &RamanParams, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    // r²|φ|² integrated over angles leaves Σₗ sin²(·)/(4k²), two partial waves
    let rule = GaussLegendre::new(16);
    let len = p.v * t;
    let panels = ((len * p.omega_eff / p.v) / PI).ceil().max(1.0) as usize * 4;
    2.0 * rule.integrate(|r| p.envelope(r, t).powi(2), 0.0, len, panels) / (4.0 * p.k * p.k)
}

/// Radial momentum amplitude `∫₀^{vt} u(r) e^{−ipr} dr` of the `l = 0`
/// channel, `u = r φ₀`, by composite Gauss-Legendre quadrature.
pub fn radial_momentum_amplitude(p: &RamanParams, t: f64, q: f64) -> Complex64 {
    let rule = GaussLegendre::new(24);
    let len = p.v * t;
    let scale = (p.k + q.abs() + p.omega_eff / p.v) * len / PI;
    let panels = (scale.ceil() as usize).max(8);
    let (xs, ws) = rule.composite(0.0, len, panels);
    let phase0 = Complex64::from_polar(1.0, p.phase_shifts[0] - p.energy() * t) / Complex64::new(0.0, 2.0 * p.k);
    xs.iter()
        .zip(&ws)
        .map(|(&r, &w)| Complex64::from_polar(w * p.envelope(r, t), (p.k - q) * r))
        .sum::<Complex64>()
        * phase0
        / (4.0 * PI).sqrt()
}

/// Half-width of the momentum band used by [`momentum_spread`].
///
/// The sharp inner edge of the wavepacket leaves `|ũ(p)|² ∝ p⁻²` tails, so
/// the unrestricted variance diverges; the spread is taken over
/// `|p − k| ≤ 3(Ω/2v + 2π/vt)`, which covers both envelope sidebands and the
/// finite-length broadening.
pub fn momentum_band(p: &RamanParams, t: f64) -> f64 {
    3.0 * (0.5 * p.omega_eff / p.v + 2.0 * PI / (p.v * t))
}

/// Standard deviation of the `l = 0` radial-momentum distribution within
/// [`momentum_band`].
pub fn momentum_spread(p: &RamanParams, t: f64) -> Result<f64> {
    if !(t * p.omega_eff >= 2.0 * PI) {
        return Err(Error::Validity(format!(
            "envelope not developed: t·Ω_eff = {} < 2π",
            t * p.omega_eff
        )));
    }
    let band = momentum_band(p, t);
    let rule = GaussLegendre::new(16);
    // resolve oscillations of period ~2π/(vt) in the distribution
    let panels = ((2.0 * band * p.v * t / PI).ceil() as usize).max(16);
    let (qs, ws) = rule.composite(p.k - band, p.k + band, panels);
    let dens: Vec<f64> = qs.iter().map(|&q| radial_momentum_amplitude(p, t, q).norm_sqr()).collect();
    Ok(band_limited_std(&qs, &ws, &dens))
}

/// [`momentum_spread`] averaged over 16 equally spaced start times in one
/// envelope period `[t, t + 2π/Ω)`.
///
/// The pointwise spread carries a ripple from the inner edge term, whose
/// weight follows `sin²(Ωt/2)`; the average removes it.
pub fn momentum_spread_averaged(p: &RamanParams, t: f64) -> Result<f64> {
    const PHASES: usize = 16;
    let period = 2.0 * PI / p.omega_eff;
    let mut acc = 0.0;
    for j in 0..PHASES {
        acc += momentum_spread(p, t + period * j as f64 / PHASES as f64)?;
    }
    Ok(acc / PHASES as f64)
}

pub(crate) fn band_limited_std(qs: &[f64], ws: &[f64], dens: &[f64]) -> f64 {
    let m0: f64 = ws.iter().zip(dens).map(|(w, d)| w * d).sum();
    let m1: f64 = qs.iter().zip(ws).zip(dens).map(|((q, w), d)| q * w * d).sum::<f64>() / m0;
    let m2: f64 = qs.iter().zip(ws).zip(dens).map(|((q, w), d)| (q - m1).powi(2) * w * d).sum::<f64>() / m0;
    m2.sqrt()
}

/// Double-parabolic trap holding each fragment in its own well.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrapParams {
    pub omega: f64,
    pub x0: f64,
    /// Single-particle mass `m`; the modes carry `M = 2m` and `μ = m/2`.
    pub mass: f64,
    #[serde(default)]
    pub v_recede: f64,
}

impl TrapParams {
    pub fn new(omega: f64, x0: f64, mass: f64, v_recede: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Precondition(format!("trap frequency must be positive, got {omega}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Precondition(format!("mass must be positive, got {mass}")));
        }
        if !x0.is_finite() || !v_recede.is_finite() {
            return Err(Error::Precondition("well offset and recession speed must be finite".into()));
        }
        Ok(Self { omega, x0, mass, v_recede })
    }

    pub fn total_mass(&self) -> f64 {
        2.0 * self.mass
    }

    pub fn reduced_mass(&self) -> f64 {
        0.5 * self.mass
    }

    /// Oscillator ground-state position widths `(cm, rel)`.
    pub fn ground_widths(&self) -> (f64, f64) {
        let w = |m: f64| (1.0 / (2.0 * m * self.omega)).sqrt();
        (w(self.total_mass()), w(self.reduced_mass()))
    }
}

/// Evolves both collective modes for time `t` in their harmonic wells.
///
/// The relative well is centred at `x0`; the offset moves the mean only, so
/// the covariances are those of a centred oscillator. In the frame
/// co-moving with receding wells the same law applies.
pub fn harmonic_confinement_evolve(state: &TwoParticleGaussian, trap: &TrapParams, t: f64) -> Result<TwoParticleGaussian> {
    if (state.mass() - trap.mass).abs() > 1e-12 * trap.mass {
        return Err(Error::Precondition(format!(
            "state mass {} differs from trap mass {}",
            state.mass(),
            trap.mass
        )));
    }
    if !t.is_finite() {
        return Err(Error::Precondition("evolution time must be finite".into()));
    }
    Ok(TwoParticleGaussian::from_modes(
        state.cm().harmonic(trap.total_mass(), trap.omega, t),
        state.rel().harmonic(trap.reduced_mass(), trap.omega, t),
        state.mass(),
        state.t() + t,
    ))
}

/// Well centres `(x₁, x₂) = (+(x₀+vt)/2, −(x₀+vt)/2)`.
pub fn receding_well_frame(trap: &TrapParams, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(Error::Precondition(format!("time must be non-negative, got {t}")));
    }
    let h = 0.5 * (trap.x0 + trap.v_recede * t);
    Ok((h, -h))
}
