//! Fine-structure superbeats in the fluorescence of dissociating alkali
//! dimers.
//!
//! Basis: `|I⟩` (the `Σ` state) and `|II⟩` (the `Π` combination). The
//! adiabatic states `|−⟩`, `|+⟩` are the lower and upper eigenvectors of
//!
//! ```text
//! H = [ V_Σ        √2δ/3     ]
//!     [ √2δ/3      V_Π − δ/3 ]
//! ```

use nalgebra::{Matrix2, Vector2};

use crate::fluorescence::{cumulative_cooperative, instantaneous_rate, Branch, DeltaLambda, Parity};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AdiabaticModel {
    pub c3: f64,
    /// Fine-structure splitting.
    pub delta: f64,
    pub parity: Parity,
    /// `V_Π / V_Σ`.
    #[serde(default = "default_anisotropy")]
    pub anisotropy: f64,
}

fn default_anisotropy() -> f64 {
    -0.5
}

impl AdiabaticModel {
    pub fn new(c3: f64, delta: f64, parity: Parity) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Precondition(format!("fine-structure splitting must be positive, got {delta}")));
        }
        if !c3.is_finite() {
            return Err(Error::Precondition("C3 must be finite".into()));
        }
        Ok(Self { c3, delta, parity, anisotropy: default_anisotropy() })
    }

    /// `(V_Σ, V_Π)` at separation `r`; `V_Σ = ∓2C3/R³` for `u`/`g`.
    pub fn potentials(&self, r: f64) -> (f64, f64) {
        let sign = match self.parity {
            Parity::U => -1.0,
            Parity::G => 1.0,
        };
        let vs = sign * 2.0 * self.c3 / (r * r * r);
        (vs, self.anisotropy * vs)
    }

    /// Separation at which `|V_Σ − V_Π| = ratio·δ`.
    pub fn separation_for_ratio(&self, ratio: f64) -> f64 {
        let v_coeff = (2.0 * self.c3 * (1.0 - self.anisotropy)).abs();
        (v_coeff / (ratio * self.delta)).cbrt()
    }
}

pub fn adiabatic_matrix(r: f64, m: &AdiabaticModel) -> Result<Matrix2<f64>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("separation must be positive, got {r}")));
    }
    let (vs, vp) = m.potentials(r);
    let off = 2f64.sqrt() * m.delta / 3.0;
    Ok(Matrix2::new(vs, off, off, vp - m.delta / 3.0))
}

/// Eigenvalues and eigenvectors of a real symmetric 2×2 matrix,
/// `(λ₋, |−⟩, λ₊, |+⟩)` with `λ₋ ≤ λ₊`.
pub fn eigen_2x2(h: &Matrix2<f64>) -> (f64, Vector2<f64>, f64, Vector2<f64>) {
    let (a, b, d) = (h[(0, 0)], h[(0, 1)], h[(1, 1)]);
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let rad = half.hypot(b);
    let (lo, hi) = (mean - rad, mean + rad);
    // half-angle form stays accurate when b is tiny
    let theta = 0.5 * b.atan2(half);
    let (s, c) = theta.sin_cos();
    let upper = Vector2::new(c, s);
    let lower = Vector2::new(-s, c);
    (lo, lower, hi, upper)
}

/// Adiabatic states at both ends of the coupling region and their overlap
/// with the analytic limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenpairLimits {
    pub r_small: f64,
    pub r_large: f64,
    pub minus_small: Vector2<f64>,
    pub plus_small: Vector2<f64>,
    pub minus_large: Vector2<f64>,
    pub plus_large: Vector2<f64>,
    /// `|⟨−|limit⟩|` and `|⟨+|limit⟩|` at small separation.
    pub overlap_small: (f64, f64),
    /// The same at large separation.
    pub overlap_large: (f64, f64),
}

/// `(|I⟩ − √2|II⟩)/√3` and `(√2|I⟩ + |II⟩)/√3`.
pub fn large_separation_states() -> (Vector2<f64>, Vector2<f64>) {
    let s3 = 3f64.sqrt();
    let s2 = 2f64.sqrt();
    (Vector2::new(1.0 / s3, -s2 / s3), Vector2::new(s2 / s3, 1.0 / s3))
}

/// Small-separation limits: for `u` the lower state is `|I⟩`, for `g` it
/// is `|II⟩`.
pub fn small_separation_states(parity: Parity) -> (Vector2<f64>, Vector2<f64>) {
    let one = Vector2::new(1.0, 0.0);
    let two = Vector2::new(0.0, 1.0);
    match parity {
        Parity::U => (one, two),
        Parity::G => (two, one),
    }
}

const LIMIT_RATIO: f64 = 1e3;
const LIMIT_OVERLAP: f64 = 0.999;

pub fn eigenpair_limits(m: &AdiabaticModel) -> Result<EigenpairLimits> {
    if m.c3 == 0.0 {
        return Err(Error::Precondition("C3 must be nonzero".into()));
    }
    let r_small = m.separation_for_ratio(LIMIT_RATIO);
    let r_large = m.separation_for_ratio(1.0 / LIMIT_RATIO);
    let (_, ms, _, ps) = eigen_2x2(&adiabatic_matrix(r_small, m)?);
    let (_, ml, _, pl) = eigen_2x2(&adiabatic_matrix(r_large, m)?);
    let (es_m, es_p) = small_separation_states(m.parity);
    let (el_m, el_p) = large_separation_states();
    let out = EigenpairLimits {
        r_small,
        r_large,
        minus_small: ms,
        plus_small: ps,
        minus_large: ml,
        plus_large: pl,
        overlap_small: (ms.dot(&es_m).abs(), ps.dot(&es_p).abs()),
        overlap_large: (ml.dot(&el_m).abs(), pl.dot(&el_p).abs()),
    };
    let worst = [out.overlap_small.0, out.overlap_small.1, out.overlap_large.0, out.overlap_large.1]
        .into_iter()
        .fold(1.0, f64::min);
    if worst < LIMIT_OVERLAP {
        return Err(Error::Validity(format!("adiabatic limit not reached: overlap {worst}")));
    }
    Ok(out)
}

/// A cooperative rate function `G(t)` entering the superbeat formula.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GFunction {
    Constant { value: f64 },
    /// `sign · γ_ΔΛ(ξ̇t)/γ` from the receding-pair cooperative rates.
    Ringing { delta_lambda: DeltaLambda, xi_dot: f64, branch: Branch },
}

impl GFunction {
    pub fn value(&self, t: f64) -> Result<f64> {
        match *self {
            GFunction::Constant { value } => Ok(value),
            GFunction::Ringing { delta_lambda, xi_dot, branch } => {
                Ok(branch.sign() * instantaneous_rate(xi_dot * t, delta_lambda)?)
            }
        }
    }

    /// `∫_{t0}^{t} G dt'`.
    pub fn integral(&self, t0: f64, t: f64) -> Result<f64> {
        match *self {
            GFunction::Constant { value } => Ok(value * (t - t0)),
            GFunction::Ringing { delta_lambda, xi_dot, branch } => {
                let raw = if xi_dot == 0.0 {
                    t - t0
                } else {
                    (cumulative_cooperative(xi_dot * t, delta_lambda)?
                        - cumulative_cooperative(xi_dot * t0, delta_lambda)?)
                        / xi_dot
                };
                Ok(branch.sign() * raw)
            }
        }
    }

    fn bound(&self) -> f64 {
        match *self {
            GFunction::Constant { value } => value.abs(),
            GFunction::Ringing { .. } => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperbeatParams {
    /// Coherence amplitude `A(t_D)`.
    pub amplitude: f64,
    pub phase: f64,
    pub t_delay: f64,
    pub g_plus: GFunction,
    pub g_minus: GFunction,
    pub g_coherence: GFunction,
    pub gamma: f64,
    /// Beat energy `ε`.
    pub epsilon: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
}

impl SuperbeatParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.amplitude, self.phase, self.t_delay, self.gamma, self.epsilon, self.rho_plus, self.rho_minus]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Precondition("superbeat parameters must be finite".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::Precondition(format!("γ must be positive, got {}", self.gamma)));
        }
        if self.rho_plus < 0.0 || self.rho_minus < 0.0 || self.rho_plus + self.rho_minus > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!(
                "populations ρ₊₊={} ρ₋₋={} must be non-negative with sum ≤ 1",
                self.rho_plus, self.rho_minus
            )));
        }
        let cap = 2.0 * (self.rho_plus * self.rho_minus).sqrt();
        if !(self.amplitude >= 0.0 && self.amplitude <= 1.0 && self.amplitude <= cap + 1e-12) {
            return Err(Error::Precondition(format!(
                "coherence amplitude {} exceeds 2√(ρ₊₊ρ₋₋) = {cap}",
                self.amplitude
            )));
        }
        for g in [self.g_plus, self.g_minus, self.g_coherence] {
            if !g.bound().is_finite() {
                return Err(Error::Precondition("G functions must be bounded".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperbeatCurve {
    pub t: Vec<f64>,
    /// `Ṗ/γ`.
    pub rate: Vec<f64>,
    /// Contribution of the two population terms.
    pub populations: Vec<f64>,
    /// Contribution of the coherence term.
    pub coherence: Vec<f64>,
}

/// Emission rate with population and coherence terms, sampled on `t_grid`
/// (which starts at `t_D`).
pub fn emission_rate_superbeats(t_grid: &[f64], p: &SuperbeatParams) -> Result<SuperbeatCurve> {
    p.validate()?;
    if t_grid.is_empty() || (t_grid[0] - p.t_delay).abs() > 1e-12 * p.t_delay.abs().max(1.0) {
        return Err(Error::Precondition("time grid must start at the delay time t_D".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition("time grid must be strictly ascending".into()));
    }
    let td = p.t_delay;
    let mut c = SuperbeatCurve { t: t_grid.to_vec(), rate: vec![], populations: vec![], coherence: vec![] };
    for &t in t_grid {
        let (gp, gm) = (p.g_plus.integral(td, t)?, p.g_minus.integral(td, t)?);
        let dt = t - td;
        let pop = (1.0 + p.g_plus.value(t)?) * p.rho_plus * (-p.gamma * (dt + gp)).exp()
            + (1.0 + p.g_minus.value(t)?) * p.rho_minus * (-p.gamma * (dt + gm)).exp();
        let coh = p.amplitude
            * p.g_coherence.value(t)?
            * (p.epsilon * dt + p.phase).cos()
            * (-p.gamma * (dt + gp + gm)).exp();
        c.populations.push(pop);
        c.coherence.push(coh);
        c.rate.push(pop + coh);
    }
    Ok(c)
}

/// Probability emitted from the `|±⟩` populations between `t_D` and `t`.
pub fn population_emitted(p: &SuperbeatParams, t: f64) -> Result<f64> {
    let td = p.t_delay;
    let e = |g: &GFunction, rho: f64| -> Result<f64> {
        Ok(rho * (1.0 - (-p.gamma * (t - td + g.integral(td, t)?)).exp()))
    };
    Ok(e(&p.g_plus, p.rho_plus)? + e(&p.g_minus, p.rho_minus)?)
}

/// `Ṗ/γ` at onset, `1 + wA cos φ`.
pub fn initial_rate(w: i8, amplitude: f64, phase: f64) -> Result<f64> {
    if w != 1 && w != -1 {
        return Err(Error::Precondition(format!("parity sign must be ±1, got {w}")));
    }
    if amplitude.abs() > 1.0 {
        return Err(Error::Precondition(format!("|A| must not exceed 1, got {amplitude}")));
    }
    Ok(1.0 + f64::from(w) * amplitude * phase.cos())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(parity: Parity) -> AdiabaticModel {
        AdiabaticModel::new(1.0, 0.01, parity).unwrap()
    }

    #[test]
    fn no_fine_structure_is_diagonal() {
        let m = AdiabaticModel { delta: 0.0, ..model(Parity::U) };
        let h = adiabatic_matrix(2.0, &m).unwrap();
        assert_eq!(h[(0, 1)], 0.0);
        let (_, lo, _, hi) = eigen_2x2(&h);
        assert!((lo.x.abs() - 1.0).abs() < 1e-15 && (hi.y.abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_identity() {
        let m = model(Parity::G);
        for r in [0.5, 1.0, 4.0, 20.0] {
            let h = adiabatic_matrix(r, &m).unwrap();
            let (vs, vp) = m.potentials(r);
            assert!((h.trace() - (vs + vp - m.delta / 3.0)).abs() < 1e-15);
        }
        assert!(matches!(adiabatic_matrix(0.0, &m), Err(Error::Domain(_))));
    }

    #[test]
    fn limits_recovered_both_parities() {
        for parity in [Parity::U, Parity::G] {
            let l = eigenpair_limits(&model(parity)).unwrap();
            assert!(l.overlap_large.0 >= 0.999 && l.overlap_large.1 >= 0.999);
            assert!(l.overlap_small.0 >= 0.999 && l.overlap_small.1 >= 0.999);
        }
    }

    #[test]
    fn initial_rate_values() {
        assert_eq!(initial_rate(1, 0.0, 0.3).unwrap(), 1.0);
        assert_eq!(initial_rate(1, 1.0, 0.0).unwrap(), 2.0);
        assert_eq!(initial_rate(-1, 1.0, 0.0).unwrap(), 0.0);
        assert!(initial_rate(0, 0.5, 0.0).is_err());
    }

    #[test]
    fn coherence_bounded_by_populations() {
        let p = SuperbeatParams {
            amplitude: 0.9,
            phase: 0.0,
            t_delay: 0.0,
            g_plus: GFunction::Constant { value: 0.0 },
            g_minus: GFunction::Constant { value: 0.0 },
            g_coherence: GFunction::Constant { value: 1.0 },
            gamma: 1.0,
            epsilon: 20.0,
            rho_plus: 0.9,
            rho_minus: 0.1,
        };
        assert!(p.validate().is_err());
    }
}
