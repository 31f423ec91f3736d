//! Cooperative fluorescence of two receding, singly excited fragments.
//!
//! With `ξ = kR(t) = ξ̇t` and
//! `H(ξ) = (ξ cos ξ − sin ξ)/ξ³`, the time-averaged rates are
//!
//! ```text
//! ΔΛ = 0:  γ[1 ± (3/2)(Si(ξ)/ξ + H(ξ))]
//! ΔΛ = 1:  γ[1 ± (3/4)(Si(ξ)/ξ − H(ξ))]
//! ```
//!
//! and differentiating `t·rate` gives the instantaneous cooperative rates
//! `γ₀(ξ) = −3γH(ξ)` and `γ₁(ξ) = (3/2)γ(sin ξ/ξ + H(ξ))`.

use crate::numerics::special::{sinc, sine_integral};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    G,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MolecularSpin {
    Singlet,
    Triplet,
}

/// `|ΔΛ|` of the molecular transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DeltaLambda {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

/// Which cooperative branch a Dicke state decays on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `γ + γ(t)`, the superradiant triplet `|1,0⟩`.
    Plus,
    /// `γ − γ(t)`, the subradiant singlet `|0,0⟩`.
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Collective pseudospin label `|s, s_z⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeLabel {
    s: u8,
    sz: i8,
}

impl DickeLabel {
    pub fn new(s: u8, sz: i8) -> Result<Self> {
        match (s, sz) {
            (0, 0) | (1, -1..=1) => Ok(Self { s, sz }),
            _ => Err(Error::Precondition(format!("no Dicke state |{s},{sz}⟩ for two atoms"))),
        }
    }

    pub fn s(&self) -> u8 {
        self.s
    }

    pub fn sz(&self) -> i8 {
        self.sz
    }

    /// Branch of a singly excited (`s_z = 0`) state.
    pub fn branch(&self) -> Option<Branch> {
        match (self.s, self.sz) {
            (1, 0) => Some(Branch::Plus),
            (0, 0) => Some(Branch::Minus),
            _ => None,
        }
    }
}

/// Dicke state reached by dissociating a dimer of the given symmetry.
pub fn dicke_from_symmetry(parity: Parity, spin: MolecularSpin) -> DickeLabel {
    let triplet_like = matches!(
        (spin, parity),
        (MolecularSpin::Singlet, Parity::U) | (MolecularSpin::Triplet, Parity::G)
    );
    if triplet_like {
        DickeLabel { s: 1, sz: 0 }
    } else {
        DickeLabel { s: 0, sz: 0 }
    }
}

/// `(ξ cos ξ − sin ξ)/ξ³`, with its Taylor series near zero.
pub fn h_function(xi: f64) -> f64 {
    if xi.abs() < 0.1 {
        let x2 = xi * xi;
        -1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0))
    } else {
        (xi * xi.cos() - xi.sin()) / (xi * xi * xi)
    }
}

/// `Si(ξ)/ξ`, equal to 1 at zero.
fn si_over_xi(xi: f64) -> Result<f64> {
    if xi == 0.0 {
        Ok(1.0)
    } else {
        Ok(sine_integral(xi)? / xi)
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::Domain(format!("ξ must be finite and non-negative, got {xi}")));
    }
    Ok(())
}

fn mean_cooperative(xi: f64, dl: DeltaLambda) -> Result<f64> {
    let si = si_over_xi(xi)?;
    let h = h_function(xi);
    Ok(match dl {
        DeltaLambda::Zero => 1.5 * (si + h),
        DeltaLambda::One => 0.75 * (si - h),
    })
}

/// `∫₀^ξ γ_ΔΛ(ξ')/γ dξ'`.
pub fn cumulative_cooperative(xi: f64, dl: DeltaLambda) -> Result<f64> {
    check_xi(xi)?;
    Ok(xi * mean_cooperative(xi, dl)?)
}

/// `γ ± (1/t)∫₀ᵗ γ_ΔΛ dt'` in units of `γ`.
pub fn averaged_rate(xi: f64, dl: DeltaLambda, branch: Branch) -> Result<f64> {
    check_xi(xi)?;
    Ok(1.0 + branch.sign() * mean_cooperative(xi, dl)?)
}

/// Cooperative rate `γ_ΔΛ(ξ)` in units of `γ`.
pub fn instantaneous_rate(xi: f64, dl: DeltaLambda) -> Result<f64> {
    check_xi(xi)?;
    let h = h_function(xi);
    Ok(match dl {
        DeltaLambda::Zero => -3.0 * h,
        DeltaLambda::One => 1.5 * (sinc(xi) + h),
    })
}

/// A dissociating dimer and the transition it fluoresces on.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TransitionSpec {
    pub parity: Parity,
    pub spin: MolecularSpin,
    pub delta_lambda: DeltaLambda,
    pub gamma: f64,
    /// `ξ̇ = k v`.
    pub xi_dot: f64,
}

impl TransitionSpec {
    pub fn new(parity: Parity, spin: MolecularSpin, delta_lambda: DeltaLambda, gamma: f64, xi_dot: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Precondition(format!("γ must be positive, got {gamma}")));
        }
        if !(xi_dot >= 0.0 && xi_dot.is_finite()) {
            return Err(Error::Precondition(format!("ξ̇ must be non-negative, got {xi_dot}")));
        }
        Ok(Self { parity, spin, delta_lambda, gamma, xi_dot })
    }

    pub fn branch(&self) -> Branch {
        dicke_from_symmetry(self.parity, self.spin).branch().expect("singly excited Dicke state")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionCurve {
    pub t: Vec<f64>,
    pub xi: Vec<f64>,
    /// `Ṗ/γ`.
    pub rate: Vec<f64>,
    /// Population of the initial Dicke state.
    pub population: Vec<f64>,
    /// Emitted probability `P(t) = 1 − ρ(t)`.
    pub emitted: Vec<f64>,
    /// `ξ` intervals where the rate went negative.
    pub anomalies: Vec<(f64, f64)>,
}

fn anomalies(xi: &[f64], rate: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, &r) in rate.iter().enumerate() {
        match (r < 0.0, start) {
            (true, None) => start = Some(xi[i]),
            (false, Some(s)) => {
                out.push((s, xi[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, *xi.last().unwrap()));
    }
    out
}

/// Emission from a pair prepared in the Dicke state selected by `spec`,
/// sampled at `t_grid` (ascending from zero).
///
/// The population decays as `exp(−t·averaged_rate(ξ(t)))`, the closed-form
/// cumulative integral of `γ ± γ(ξ)`.
pub fn emission_curve(spec: &TransitionSpec, t_grid: &[f64]) -> Result<EmissionCurve> {
    check_grid(t_grid)?;
    let branch = spec.branch();
    let mut c = EmissionCurve {
        t: t_grid.to_vec(),
        xi: Vec::with_capacity(t_grid.len()),
        rate: Vec::with_capacity(t_grid.len()),
        population: Vec::with_capacity(t_grid.len()),
        emitted: Vec::with_capacity(t_grid.len()),
        anomalies: Vec::new(),
    };
    for &t in t_grid {
        let xi = spec.xi_dot * t;
        let rho = (-spec.gamma * t * averaged_rate(xi, spec.delta_lambda, branch)?).exp();
        let inst = 1.0 + branch.sign() * instantaneous_rate(xi, spec.delta_lambda)?;
        c.xi.push(xi);
        c.rate.push(inst * rho);
        c.population.push(rho);
        c.emitted.push(1.0 - rho);
    }
    c.anomalies = anomalies(&c.xi, &c.rate);
    Ok(c)
}

/// Rate `Ṗ/γ` against `ξ` with decay switched off (`γ/ξ̇ → 0`, `ρ ≡ 1`).
pub fn ringing_curve(dl: DeltaLambda, branch: Branch, xi_grid: &[f64]) -> Result<EmissionCurve> {
    check_grid(xi_grid)?;
    let rate = xi_grid
        .iter()
        .map(|&xi| instantaneous_rate(xi, dl).map(|g| 1.0 + branch.sign() * g))
        .collect::<Result<Vec<_>>>()?;
    let n = xi_grid.len();
    Ok(EmissionCurve {
        t: xi_grid.to_vec(),
        xi: xi_grid.to_vec(),
        anomalies: anomalies(xi_grid, &rate),
        rate,
        population: vec![1.0; n],
        emitted: vec![0.0; n],
    })
}

fn check_grid(g: &[f64]) -> Result<()> {
    if g.len() < 2 || g[0] != 0.0 || g.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition("time grid must start at 0 and be strictly ascending".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_mapping() {
        let l = |p, s| dicke_from_symmetry(p, s);
        assert_eq!(l(Parity::U, MolecularSpin::Singlet), DickeLabel::new(1, 0).unwrap());
        assert_eq!(l(Parity::G, MolecularSpin::Singlet), DickeLabel::new(0, 0).unwrap());
        assert_eq!(l(Parity::G, MolecularSpin::Triplet), DickeLabel::new(1, 0).unwrap());
        assert_eq!(l(Parity::U, MolecularSpin::Triplet), DickeLabel::new(0, 0).unwrap());
        assert!(DickeLabel::new(0, 1).is_err());
    }

    #[test]
    fn h_series_meets_closed_form() {
        let x: f64 = 0.0999999;
        let a = h_function(x);
        let b = (x * x.cos() - x.sin()) / x.powi(3);
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn coincident_limits() {
        for dl in [DeltaLambda::Zero, DeltaLambda::One] {
            assert!((averaged_rate(0.0, dl, Branch::Plus).unwrap() - 2.0).abs() < 1e-15);
            assert!(averaged_rate(0.0, dl, Branch::Minus).unwrap().abs() < 1e-15);
            assert!((averaged_rate(1e-4, dl, Branch::Plus).unwrap() - 2.0).abs() < 1e-6);
            assert!((instantaneous_rate(0.0, dl).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cooperative_bound() {
        for i in 0..=10_000 {
            let xi = 0.01 * i as f64;
            for dl in [DeltaLambda::Zero, DeltaLambda::One] {
                assert!(instantaneous_rate(xi, dl).unwrap().abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn static_pair_superradiates() {
        let spec = TransitionSpec::new(Parity::U, MolecularSpin::Singlet, DeltaLambda::Zero, 1.0, 0.0).unwrap();
        let t: Vec<f64> = (0..=200).map(|i| 0.1 * i as f64).collect();
        let c = emission_curve(&spec, &t).unwrap();
        for (ti, r) in t.iter().zip(&c.rate) {
            assert!((r - 2.0 * (-2.0 * ti).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn negative_xi_rejected() {
        assert!(matches!(averaged_rate(-1.0, DeltaLambda::Zero, Branch::Plus), Err(Error::Domain(_))));
    }
}
