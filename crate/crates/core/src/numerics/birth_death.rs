//! Photon-number sector of the single-mode gain/loss master equation.
//!
//! `ṗₙ = G[n pₙ₋₁ − (n+1) pₙ] + L[(n+1) pₙ₊₁ − n pₙ]` on a truncated Fock
//! space `n = 0..N`. The top level has no outgoing birth, so total
//! probability is conserved exactly by the generator.
//!
//! Integration uses uniformization: with `Λ` at least the largest exit
//! rate, `P = 1 + Q/Λ` is a stochastic matrix and
//! `p(t) = Σₖ Poisson(Λt; k) Pᵏ p(0)`. Every partial sum is a non-negative
//! combination of probability vectors, so positivity holds at every step.

use crate::{Error, Result};

const NORMALIZATION_TOLERANCE: f64 = 1e-9;
/// Maximum allowed population of the highest retained Fock level.
pub const LEAKAGE_TOLERANCE: f64 = 1e-8;
/// Poisson mean per uniformization chunk.
const CHUNK_MEAN: f64 = 32.0;

/// Thermal (Bose-Einstein) distribution with mean `nbar` on `n` levels.
pub fn thermal_distribution(nbar: f64, n: usize) -> Vec<f64> {
    let r = nbar / (nbar + 1.0);
    let mut p: Vec<f64> = (0..n).map(|k| (1.0 - r) * r.powi(k as i32)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}

pub fn mean_photon_number(p: &[f64]) -> f64 {
    p.iter().enumerate().map(|(n, v)| n as f64 * v).sum()
}

fn validate(p: &[f64], gain: f64, loss: f64, t: f64) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::Precondition("Fock space needs at least two levels".into()));
    }
    if p.iter().any(|&v| !(v >= 0.0)) {
        return Err(Error::Precondition("photon-number distribution must be non-negative".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Precondition(format!("distribution sums to {total}, not 1")));
    }
    if !(gain >= 0.0 && loss > 0.0 && t >= 0.0) || !t.is_finite() {
        return Err(Error::Precondition(format!(
            "need gain ≥ 0, loss > 0, finite t ≥ 0; got gain={gain}, loss={loss}, t={t}"
        )));
    }
    if gain >= loss {
        return Err(Error::Divergence(format!(
            "gain {gain} ≥ loss {loss}: photon number grows without bound"
        )));
    }
    Ok(())
}

/// Applies the uniformized jump matrix `P = 1 + Q/Λ` to `v`.
fn jump(v: &[f64], out: &mut [f64], gain: f64, loss: f64, lambda: f64) {
    let n = v.len();
    for k in 0..n {
        let birth_out = if k + 1 < n { gain * (k + 1) as f64 } else { 0.0 };
        let exit = birth_out + loss * k as f64;
        let mut acc = v[k] * (1.0 - exit / lambda);
        if k > 0 {
            acc += gain * k as f64 * v[k - 1] / lambda;
        }
        if k + 1 < n {
            acc += loss * (k + 1) as f64 * v[k + 1] / lambda;
        }
        out[k] = acc;
    }
}

/// Evolves the photon-number distribution `p` for time `t`.
///
/// Errors: `gain ≥ loss` is a divergence; population above
/// [`LEAKAGE_TOLERANCE`] in the top level is an accuracy error.
pub fn birth_death_lindblad(p: &[f64], gain: f64, loss: f64, t: f64) -> Result<Vec<f64>> {
    validate(p, gain, loss, t)?;
    let n = p.len();
    let max_exit = (0..n)
        .map(|k| if k + 1 < n { gain * (k + 1) as f64 } else { 0.0 } + loss * k as f64)
        .fold(0.0, f64::max);
    let lambda = max_exit.max(loss) * 1.05;
    let total_mean = lambda * t;
    let chunks = (total_mean / CHUNK_MEAN).ceil().max(1.0) as usize;
    let mu = total_mean / chunks as f64;

    let mut state = p.to_vec();
    let mut v = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut acc = vec![0.0; n];
    for _ in 0..chunks {
        v.copy_from_slice(&state);
        let mut weight = (-mu).exp();
        let mut cumulative = weight;
        acc.iter_mut().zip(&v).for_each(|(a, x)| *a = weight * x);
        let mut k = 0usize;
        while 1.0 - cumulative > 1e-17 && k < 10_000 {
            k += 1;
            jump(&v, &mut next, gain, loss, lambda);
            std::mem::swap(&mut v, &mut next);
            weight *= mu / k as f64;
            cumulative += weight;
            acc.iter_mut().zip(&v).for_each(|(a, x)| *a += weight * x);
        }
        let total: f64 = acc.iter().sum();
        state.iter_mut().zip(&acc).for_each(|(s, a)| *s = a.max(0.0) / total);
    }
    let top = state[n - 1];
    if top > LEAKAGE_TOLERANCE {
        return Err(Error::Accuracy(format!(
            "population {top:.3e} in the highest Fock level {}; enlarge the truncation",
            n - 1
        )));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_decay_reaches_vacuum() {
        let p0 = thermal_distribution(1.0, 60);
        let p = birth_death_lindblad(&p0, 0.0, 1.0, 40.0).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detailed_balance_gives_thermal_state() {
        let nbar = 0.7;
        let mut p0 = vec![0.0; 60];
        p0[0] = 1.0;
        let loss = 1.0;
        let gain = loss * nbar / (nbar + 1.0);
        let p = birth_death_lindblad(&p0, gain, loss, 60.0).unwrap();
        assert!((mean_photon_number(&p) - nbar).abs() < 1e-6);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn divergence_flagged() {
        let p0 = thermal_distribution(0.1, 20);
        assert!(matches!(birth_death_lindblad(&p0, 1.0, 1.0, 1.0), Err(Error::Divergence(_))));
    }

    #[test]
    fn truncation_leak_flagged() {
        let p0 = thermal_distribution(0.1, 8);
        let r = birth_death_lindblad(&p0, 0.9, 1.0, 50.0);
        assert!(matches!(r, Err(Error::Accuracy(_))));
    }

    #[test]
    fn zero_time_is_identity() {
        let p0 = thermal_distribution(0.3, 30);
        let p = birth_death_lindblad(&p0, 0.2, 1.0, 0.0).unwrap();
        for (a, b) in p.iter().zip(&p0) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
