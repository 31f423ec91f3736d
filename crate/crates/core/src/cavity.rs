//! Cavity field pumped by dissociated atom pairs.
//!
//! The field obeys a birth-death master equation with excitation and
//! de-excitation coefficients
//!
//! ```text
//! R_e = g·r₊/2 + η n̄,   R_d = g·r₋/2 + η(n̄ + 1),   r± = 1 + C ± w/2
//! ```
//!
//! and relaxes to a thermal state at the effective temperature `T_c`
//! defined by `e^{−ν/T_c} = R_e/R_d`.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::numerics::birth_death::{birth_death_lindblad, mean_photon_number, LEAKAGE_TOLERANCE};
use crate::{Error, Result};

const TRACE_TOL: f64 = 1e-10;

/// Two-atom density matrix in the basis `{|ee⟩, |eg⟩, |ge⟩, |gg⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerDensity4(Matrix4<Complex64>);

impl DimerDensity4 {
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        let herm = (rho - rho.adjoint()).camax();
        if herm > TRACE_TOL {
            return Err(Error::Precondition(format!("density matrix not Hermitian (deviation {herm:.3e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Precondition(format!("density matrix trace is {tr}")));
        }
        let min = rho.symmetric_eigenvalues().min();
        if min < -TRACE_TOL {
            return Err(Error::Precondition(format!("density matrix has eigenvalue {min:.3e}")));
        }
        Ok(Self(rho))
    }

    pub fn from_pure(amps: [Complex64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(amps);
        let n = v.norm_squared();
        Self::new(v * v.adjoint() / Complex64::new(n, 0.0))
    }

    /// `(|ge⟩ ± |eg⟩)/√2`.
    pub fn bell_psi(plus: bool) -> Self {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let b = if plus { a } else { -a };
        Self::from_pure([Complex64::new(0.0, 0.0), b, a, Complex64::new(0.0, 0.0)]).expect("Bell state is valid")
    }

    /// `½|ge⟩⟨ge| + ½|eg⟩⟨eg|`.
    pub fn mixed_single_excitation() -> Self {
        let mut m = Matrix4::zeros();
        m[(1, 1)] = Complex64::new(0.5, 0.0);
        m[(2, 2)] = Complex64::new(0.5, 0.0);
        Self(m)
    }

    /// Product state `|a⟩|b⟩` with `true` meaning excited.
    pub fn product(a: bool, b: bool) -> Self {
        let idx = match (a, b) {
            (true, true) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (false, false) => 3,
        };
        let mut m = Matrix4::zeros();
        m[(idx, idx)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct InversionCoherence {
    pub w: f64,
    pub c: f64,
    pub entangled: bool,
}

pub fn inversion_coherence(rho: &DimerDensity4) -> InversionCoherence {
    let m = rho.matrix();
    let r23 = m[(1, 2)];
    InversionCoherence {
        w: 2.0 * (m[(0, 0)].re - m[(3, 3)].re),
        c: 2.0 * r23.re,
        entangled: r23.norm_sqr() > m[(0, 0)].re * m[(3, 3)].re,
    }
}

/// `1 − |w|/2`.
pub fn coherence_bound(w: f64) -> Result<f64> {
    if !(w.abs() <= 2.0) {
        return Err(Error::Domain(format!("inversion must satisfy |w| ≤ 2, got {w}")));
    }
    Ok(1.0 - 0.5 * w.abs())
}

/// How `(w, C)` enter the pumping coefficients.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateConvention {
    /// `r± = 1 + C ± w/2`.
    #[default]
    Halved,
    /// `1 + C ± w` in place of `r±`.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CavityParams {
    pub g_eff: f64,
    pub eta: f64,
    pub nbar: f64,
    /// Mode frequency; sets the absolute temperature scale.
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default)]
    pub convention: RateConvention,
}

fn default_nu() -> f64 {
    1.0
}

impl CavityParams {
    pub fn new(g_eff: f64, eta: f64, nbar: f64) -> Result<Self> {
        let p = Self { g_eff, eta, nbar, nu: 1.0, convention: RateConvention::Halved };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g_eff >= 0.0 && self.eta > 0.0 && self.nbar >= 0.0 && self.nu > 0.0) {
            return Err(Error::Precondition(format!(
                "need g_eff ≥ 0, η > 0, n̄ ≥ 0, ν > 0; got {self:?}"
            )));
        }
        if ![self.g_eff, self.eta, self.nbar, self.nu].iter().all(|x| x.is_finite()) {
            return Err(Error::Precondition("cavity parameters must be finite".into()));
        }
        Ok(())
    }

    /// Environment temperature from `n̄ = 1/(e^{ν/T} − 1)`.
    pub fn temperature(&self) -> f64 {
        if self.nbar == 0.0 {
            0.0
        } else {
            self.nu / (1.0 + 1.0 / self.nbar).ln()
        }
    }
}

/// `(R_e, R_d)`.
pub fn rate_coefficients(w: f64, c: f64, p: &CavityParams) -> Result<(f64, f64)> {
    p.validate()?;
    let bound = coherence_bound(w)?;
    if c.abs() > bound + 1e-12 {
        return Err(Error::Precondition(format!("|C| = {} exceeds 1 − |w|/2 = {bound}", c.abs())));
    }
    let (up, down) = match p.convention {
        RateConvention::Halved => (1.0 + c + 0.5 * w, 1.0 + c - 0.5 * w),
        RateConvention::Full => (1.0 + c + w, 1.0 + c - w),
    };
    Ok((0.5 * p.g_eff * up + p.eta * p.nbar, 0.5 * p.g_eff * down + p.eta * (p.nbar + 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CavitySteadyState {
    pub n_ss: f64,
    /// Infinite when the environment is at `T = 0` and the dimers pump.
    pub tc_over_t: f64,
    pub tc: f64,
}

pub fn steady_state(w: f64, c: f64, p: &CavityParams) -> Result<CavitySteadyState> {
    let (re, rd) = rate_coefficients(w, c, p)?;
    if re >= rd {
        return Err(Error::Divergence(format!("R_e = {re} ≥ R_d = {rd}: above maser threshold")));
    }
    let n_ss = re / (rd - re);
    let tc = if re == 0.0 { 0.0 } else { p.nu / (rd / re).ln() };
    let tc_over_t = if p.nbar == 0.0 {
        if re == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        ((p.nbar + 1.0) / p.nbar).ln() / (rd / re).ln()
    };
    Ok(CavitySteadyState { n_ss, tc_over_t, tc })
}

/// Long-time photon-number distribution of the pumped cavity, started in
/// vacuum. Returns the distribution and its mean.
pub fn steady_state_lindblad(w: f64, c: f64, p: &CavityParams) -> Result<(Vec<f64>, f64)> {
    let (re, rd) = rate_coefficients(w, c, p)?;
    if re >= rd {
        return Err(Error::Divergence(format!("R_e = {re} ≥ R_d = {rd}: above maser threshold")));
    }
    let n_ss = re / (rd - re);
    let n = fock_truncation(n_ss);
    let mut p0 = vec![0.0; n];
    p0[0] = 1.0;
    let dist = birth_death_lindblad(&p0, re, rd, 40.0 / (rd - re))?;
    let mean = mean_photon_number(&dist);
    Ok((dist, mean))
}

/// `max(20 + 10 n_ss, N_leak)` where the geometric tail above `N_leak`
/// drops below the leakage tolerance.
pub fn fock_truncation(n_ss: f64) -> usize {
    let base = (20.0 + 10.0 * n_ss).ceil() as usize;
    if n_ss <= 0.0 {
        return base;
    }
    let r = n_ss / (n_ss + 1.0);
    let leak = ((0.01 * LEAKAGE_TOLERANCE).ln() / r.ln()).ceil() as usize + 1;
    base.max(leak)
}

/// `C > −1 − (n̄ + ½)w`.
pub fn heating_condition(w: f64, c: f64, nbar: f64) -> bool {
    c > -1.0 - (nbar + 0.5) * w
}

/// Bath seen by each atom during the transit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomBath {
    /// Spontaneous decay towards `|g⟩`.
    #[default]
    Vacuum,
    /// Relaxation towards the thermal atomic state at the cavity
    /// environment's `n̄`.
    Thermal,
}

fn single_atom_kraus(damping: f64, excited_fraction: f64) -> Vec<Matrix2<Complex64>> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let keep = (1.0 - damping).sqrt();
    let jump = damping.sqrt();
    let (a, b) = ((1.0 - excited_fraction).sqrt(), excited_fraction.sqrt());
    // basis (e, g)
    let mut ops = vec![
        Matrix2::new(r(keep), r(0.0), r(0.0), r(1.0)) * r(a),
        Matrix2::new(r(0.0), r(0.0), r(jump), r(0.0)) * r(a),
    ];
    if excited_fraction > 0.0 {
        ops.push(Matrix2::new(r(1.0), r(0.0), r(0.0), r(keep)) * r(b));
        ops.push(Matrix2::new(r(0.0), r(jump), r(0.0), r(0.0)) * r(b));
    }
    ops
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Two-qubit Kraus operators of independent damping with probability
/// `1 − e^{−γt}` on each atom.
pub fn transit_kraus(gamma: f64, t: f64, bath: AtomBath, nbar: f64) -> Result<Vec<Matrix4<Complex64>>> {
    if !(gamma >= 0.0 && t >= 0.0 && nbar >= 0.0) {
        return Err(Error::Precondition(format!("need γ, t, n̄ ≥ 0; got γ={gamma}, t={t}, n̄={nbar}")));
    }
    let damping = -(-gamma * t).exp_m1();
    let excited = match bath {
        AtomBath::Vacuum => 0.0,
        AtomBath::Thermal => nbar / (2.0 * nbar + 1.0),
    };
    let single = single_atom_kraus(damping, excited);
    Ok(single.iter().flat_map(|a| single.iter().map(move |b| kron(a, b))).collect())
}

pub fn transit_decay_map(rho: &DimerDensity4, gamma: f64, t: f64) -> Result<DimerDensity4> {
    transit_map(rho, gamma, t, AtomBath::Vacuum, 0.0)
}

pub fn transit_map(rho: &DimerDensity4, gamma: f64, t: f64, bath: AtomBath, nbar: f64) -> Result<DimerDensity4> {
    let out = transit_kraus(gamma, t, bath, nbar)?
        .iter()
        .fold(Matrix4::zeros(), |acc, k| acc + k * rho.matrix() * k.adjoint());
    DimerDensity4::new(out)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TemperaturePoint {
    pub gamma_t: f64,
    pub w: f64,
    pub c: f64,
    /// `None` above the maser threshold.
    pub tc_over_t: Option<f64>,
    pub n_ss: Option<f64>,
}

/// `T_c/T` after the pair has decayed for `γt` before pumping the cavity.
pub fn temperature_curve(
    rho0: &DimerDensity4,
    gamma_t: &[f64],
    p: &CavityParams,
    bath: AtomBath,
) -> Result<Vec<TemperaturePoint>> {
    p.validate()?;
    gamma_t
        .par_iter()
        .map(|&gt| {
            let rho = transit_map(rho0, 1.0, gt, bath, p.nbar)?;
            let ic = inversion_coherence(&rho);
            // decay can push C a rounding error past the bound
            let c = ic.c.clamp(-coherence_bound(ic.w)?, coherence_bound(ic.w)?);
            let (tc_over_t, n_ss) = match steady_state(ic.w, c, p) {
                Ok(s) => (Some(s.tc_over_t), Some(s.n_ss)),
                Err(Error::Divergence(_)) => (None, None),
                Err(e) => return Err(e),
            };
            Ok(TemperaturePoint { gamma_t: gt, w: ic.w, c: ic.c, tc_over_t, n_ss })
        })
        .collect()
}

/// Curves for `|Ψ⁺⟩` and `ρ_mix`.
pub fn bell_mix_curves(
    gamma_t: &[f64],
    p: &CavityParams,
    bath: AtomBath,
) -> Result<(Vec<TemperaturePoint>, Vec<TemperaturePoint>)> {
    Ok((
        temperature_curve(&DimerDensity4::bell_psi(true), gamma_t, p, bath)?,
        temperature_curve(&DimerDensity4::mixed_single_excitation(), gamma_t, p, bath)?,
    ))
}
