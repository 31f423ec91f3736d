//! Entanglement generated by one-dimensional elastic collisions.
//!
//! The relative motion obeys `−ψ'' + V(x)ψ = k²ψ` with
//! `V(x) = g[δ(x−a) + δ(x+a)]`, i.e. the reduced mass is folded into `g`
//! and the relative energy is `k²`. Particle momenta `k₁, k₂` relate to the
//! relative momentum by `k = (k₁ − k₂)/2`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::numerics::schmidt::singular_weights;
use crate::numerics::{binary_entropy, vn_entropy, EntropyBase, ProbabilitySpectrum};
use crate::{Error, Result};

const UNITARITY_TOLERANCE: f64 = 1e-8;
const NORM_TOLERANCE: f64 = 1e-10;

/// Two identical delta spikes at `x = ±a`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DoubleDeltaPotential {
    pub strength: f64,
    pub a: f64,
}

impl DoubleDeltaPotential {
    pub fn new(strength: f64, a: f64) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::Precondition(format!("strength must be finite, got {strength}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Precondition(format!("half-spacing a must be positive, got {a}")));
        }
        Ok(Self { strength, a })
    }

    /// `|T(k)|²` for any real `k`, using parity for `k < 0` and the
    /// `k → 0` limit at zero.
    pub fn transmission_probability(&self, k: f64) -> f64 {
        if k == 0.0 {
            return if self.strength == 0.0 { 1.0 } else { 0.0 };
        }
        amplitudes(k.abs(), self).0.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub t: Complex64,
    pub r: Complex64,
    pub k: f64,
}

/// Transfer matrix across one spike at `x0`, mapping left `(A, B)` to
/// right `(C, D)` coefficients of `A e^{ikx} + B e^{−ikx}`.
fn spike_matrix(k: f64, strength: f64, x0: f64) -> [[Complex64; 2]; 2] {
    let beta = Complex64::new(0.0, -strength / (2.0 * k));
    let one = Complex64::new(1.0, 0.0);
    let ph = Complex64::from_polar(1.0, 2.0 * k * x0);
    [[one + beta, beta * ph.conj()], [-beta * ph, one - beta]]
}

fn amplitudes(k: f64, pot: &DoubleDeltaPotential) -> (Complex64, Complex64) {
    let l = spike_matrix(k, pot.strength, -pot.a);
    let r = spike_matrix(k, pot.strength, pot.a);
    let m21 = r[1][0] * l[0][0] + r[1][1] * l[1][0];
    let m22 = r[1][0] * l[0][1] + r[1][1] * l[1][1];
    (m22.inv(), -m21 / m22)
}

/// Transmission and reflection amplitudes for a wave incident from the left.
pub fn scattering_amplitudes(k: f64, pot: &DoubleDeltaPotential) -> Result<ScatteringAmplitudes> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("scattering needs k > 0, got {k}")));
    }
    let (t, r) = amplitudes(k, pot);
    Ok(ScatteringAmplitudes { t, r, k })
}

/// `Σ bᵢ |kᵢ⟩|−kᵢ⟩` in the centre-of-mass frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSuperposition {
    amplitudes: Vec<Complex64>,
    momenta: Vec<f64>,
}

impl ChannelSuperposition {
    pub fn new(amplitudes: Vec<Complex64>, momenta: Vec<f64>) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() != momenta.len() {
            return Err(Error::Precondition("need one amplitude per channel momentum".into()));
        }
        if momenta.iter().any(|&k| !(k > 0.0)) || momenta.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("channel momenta must be positive and strictly increasing".into()));
        }
        let norm: f64 = amplitudes.iter().map(|b| b.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Precondition(format!("channel weights sum to {norm}, not 1")));
        }
        Ok(Self { amplitudes, momenta })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }
}

/// The two terms of the discrete-channel entropy change, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteEntropyChange {
    /// `−Σ_f pf log₂ pf` of the final channel populations.
    pub scattered: f64,
    /// `Σᵢ |bᵢ|² log₂|bᵢ|²`.
    pub classical: f64,
}

impl DiscreteEntropyChange {
    pub fn total(&self) -> f64 {
        self.scattered + self.classical
    }
}

/// Entropy change of one particle when `channels` scatter through `s`.
///
/// `s` is a square unitary on the final channel set; its first
/// `channels.len()` columns correspond to the input channels.
pub fn delta_s1_discrete(channels: &ChannelSuperposition, s: &DMatrix<Complex64>) -> Result<DiscreteEntropyChange> {
    let n = s.nrows();
    if s.ncols() != n || n < channels.amplitudes.len() {
        return Err(Error::Precondition(format!(
            "scattering matrix is {}×{}, needs to be square with at least {} channels",
            s.nrows(),
            s.ncols(),
            channels.amplitudes.len()
        )));
    }
    let dev = (s.adjoint() * s - DMatrix::<Complex64>::identity(n, n)).camax();
    if dev > UNITARITY_TOLERANCE {
        return Err(Error::Precondition(format!("scattering matrix deviates from unitarity by {dev:.3e}")));
    }
    let scattered = -(0..n)
        .map(|f| {
            let amp: Complex64 = channels.amplitudes.iter().enumerate().map(|(i, b)| b * s[(f, i)]).sum();
            amp.norm_sqr()
        })
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum::<f64>();
    let classical = channels
        .amplitudes
        .iter()
        .map(|b| b.norm_sqr())
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum();
    Ok(DiscreteEntropyChange { scattered, classical })
}

/// Second derivative of `f` at `x` by Ridders' extrapolation of central
/// differences, starting from step `h`. Returns the estimate and its error.
pub(crate) fn ridders_second_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> (f64, f64) {
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const NTAB: usize = 24;
    let fx = f(x);
    let d2 = |h: f64| (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
    let mut a = vec![vec![0.0; NTAB]; NTAB];
    let mut hh = h;
    a[0][0] = d2(hh);
    let mut best = a[0][0];
    let mut err = f64::INFINITY;
    for i in 1..NTAB {
        hh /= CON;
        a[0][i] = d2(hh);
        let mut fac = CON2;
        for j in 1..=i {
            // central second differences have an h² error series
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let e = (a[j][i] - a[j - 1][i]).abs().max((a[j][i] - a[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    (best, err)
}

/// `d²|T|²/dk²` at `k`.
pub fn transmission_curvature(k: f64, pot: &DoubleDeltaPotential) -> f64 {
    let h = 0.05 * k.abs().max(1e-3);
    ridders_second_derivative(|q| pot.transmission_probability(q), k, h).0
}

/// Transmitted and reflected Schmidt weights to second order in the
/// single-particle momentum spread `dk`.
pub fn second_order_eigenvalues(k0: f64, dk: f64, pot: &DoubleDeltaPotential) -> Result<(f64, f64)> {
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(Error::Domain(format!("k0 must be positive, got {k0}")));
    }
    if !(dk >= 0.0 && dk.is_finite()) {
        return Err(Error::Precondition(format!("momentum spread must be non-negative, got {dk}")));
    }
    let t0 = pot.transmission_probability(k0);
    let eps_t = if dk == 0.0 { t0 } else { t0 + 0.25 * dk * dk * transmission_curvature(k0, pot) };
    if !(0.0..=1.0).contains(&eps_t) {
        return Err(Error::Validity(format!(
            "second-order transmitted weight {eps_t} outside [0, 1]; Δk={dk} is too large for the expansion"
        )));
    }
    Ok((eps_t, 1.0 - eps_t))
}

/// Binary entropy (bits) of [`second_order_eigenvalues`].
pub fn delta_s1_second(k0: f64, dk: f64, pot: &DoubleDeltaPotential) -> Result<f64> {
    let (t, _) = second_order_eigenvalues(k0, dk, pot)?;
    Ok(binary_entropy(t, EntropyBase::Bits))
}

/// A transmission resonance and its full width at `|T|² = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ResonanceInfo {
    pub k_res: f64,
    pub gamma: f64,
}

const SCAN_POINTS: usize = 20_000;

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-14 * hi.abs().max(1.0) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Bisection for `f(x) = level` given a bracket with opposite signs.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, level: f64) -> f64 {
    let flo = f(lo) - level;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) - level).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Transmission maxima reaching `|T|² = 1` in `(k_lo, k_hi)`, ascending.
///
/// Lobes whose flanking minima lie above `1/2` have no half-maximum width
/// and are skipped.
pub fn find_resonances(pot: &DoubleDeltaPotential, k_window: (f64, f64)) -> Result<Vec<ResonanceInfo>> {
    let (lo, hi) = k_window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Precondition(format!("invalid momentum window ({lo}, {hi})")));
    }
    if pot.strength == 0.0 {
        return Ok(Vec::new());
    }
    let f = |k: f64| pot.transmission_probability(k);
    let dk = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let ks: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + i as f64 * dk).collect();
    let ts: Vec<f64> = ks.iter().map(|&k| f(k)).collect();

    // local extrema on the dense scan
    let mut maxima = Vec::new();
    let mut minima = vec![0usize];
    for i in 1..SCAN_POINTS - 1 {
        if ts[i] >= ts[i - 1] && ts[i] > ts[i + 1] {
            maxima.push(i);
        } else if ts[i] <= ts[i - 1] && ts[i] < ts[i + 1] {
            minima.push(i);
        }
    }
    minima.push(SCAN_POINTS - 1);

    let mut out = Vec::new();
    for &i in &maxima {
        let k_res = golden_max(f, ks[i - 1], ks[i + 1]);
        if (f(k_res) - 1.0).abs() > 1e-8 {
            continue;
        }
        let left = *minima.iter().rev().find(|&&m| m < i).unwrap_or(&0);
        let right = *minima.iter().find(|&&m| m > i).unwrap_or(&(SCAN_POINTS - 1));
        if ts[left] >= 0.5 || ts[right] >= 0.5 {
            continue;
        }
        let kl = bisect(f, ks[left], k_res, 0.5);
        let kr = bisect(f, k_res, ks[right], 0.5);
        out.push(ResonanceInfo { k_res, gamma: kr - kl });
    }
    Ok(out)
}

/// Sampling of the two-particle momentum amplitude in the wavepacket scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    /// Half-width of each block in units of `σ`.
    pub sigmas: f64,
    /// Minimum number of points per `σ`.
    pub points_per_sigma: f64,
    /// Minimum number of points per resonance width `Γ`.
    pub points_per_gamma: f64,
    pub max_points: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self { sigmas: 7.0, points_per_sigma: 6.0, points_per_gamma: 4.0, max_points: 1200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScanPoint {
    pub k0: f64,
    /// Entropy change of one particle, bits.
    pub delta_s1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyScan {
    pub points: Vec<ScanPoint>,
    pub resonances: Vec<ResonanceInfo>,
    /// `log₂(σ/Γ)` for each entry of `resonances`.
    pub estimates: Vec<f64>,
}

fn gaussian_amplitude(q: f64, sigma: f64) -> f64 {
    (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25) * (-q * q / (4.0 * sigma * sigma)).exp()
}

/// Single-particle entropy (bits) after two Gaussian packets of momentum
/// spread `sigma`, centred at `±k0`, collide through `pot`.
///
/// The initial state is a product, so this is also the entropy change.
/// Transmitted and reflected waves occupy disjoint momentum sectors, which
/// requires `|k0| ≥ 6σ`.
pub fn wavepacket_entropy(k0: f64, sigma: f64, pot: &DoubleDeltaPotential, grid: ScanGrid, gamma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Precondition(format!("σ must be positive, got {sigma}")));
    }
    if k0.abs() < 6.0 * sigma {
        return Err(Error::Precondition(format!(
            "|k0| = {} < 6σ = {}: transmitted and reflected sectors overlap",
            k0.abs(),
            6.0 * sigma
        )));
    }
    let step = (sigma / grid.points_per_sigma).min(gamma / grid.points_per_gamma);
    let half = grid.sigmas * sigma;
    let n = (2.0 * half / step).ceil() as usize + 1;
    if n > grid.max_points {
        return Err(Error::Accuracy(format!(
            "resolving σ={sigma} and Γ={gamma} needs {n} momentum points per axis (limit {})",
            grid.max_points
        )));
    }
    let dq = 2.0 * half / (n - 1) as f64;
    let q: Vec<f64> = (0..n).map(|i| -half + i as f64 * dq).collect();
    let phi: Vec<f64> = q.iter().map(|&x| gaussian_amplitude(x, sigma)).collect();

    // rows: particle 1 offsets, columns: particle 2 offsets
    let mut mt = DMatrix::<Complex64>::zeros(n, n);
    let mut mr = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // transmitted: k₁ = k0 + qᵢ, k₂ = −k0 + qⱼ
            let kt = k0 + 0.5 * (q[i] - q[j]);
            let (t, _) = if kt > 0.0 { amplitudes(kt, pot) } else { amplitudes(-kt, pot) };
            mt[(i, j)] = t * (phi[i] * phi[j]);
            // reflected: k₁' = −k0 + qᵢ from k₂, k₂' = k0 + qⱼ from k₁
            let kr = k0 + 0.5 * (q[j] - q[i]);
            let (_, r) = if kr > 0.0 { amplitudes(kr, pot) } else { amplitudes(-kr, pot) };
            mr[(i, j)] = r * (phi[j] * phi[i]);
        }
    }
    let mut weights = singular_weights(&mt, dq)?;
    weights.extend(singular_weights(&mr, dq)?);
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::Accuracy(format!("sampled post-collision norm is {total}; widen or refine the grid")));
    }
    let spec = ProbabilitySpectrum::from_weights(weights)?;
    Ok(vn_entropy(&spec, EntropyBase::Bits))
}

/// [`wavepacket_entropy`] over `ks`, in parallel, plus the `log₂(σ/Γ)`
/// estimate for each resonance inside the scanned range.
pub fn wavepacket_entropy_scan(ks: &[f64], sigma: f64, pot: &DoubleDeltaPotential, grid: ScanGrid) -> Result<EntropyScan> {
    if ks.is_empty() {
        return Err(Error::Precondition("empty momentum scan".into()));
    }
    let lo = ks.iter().map(|k| k.abs()).fold(f64::INFINITY, f64::min);
    let hi = ks.iter().map(|k| k.abs()).fold(0.0, f64::max);
    // window extended so resonances at the scan edges are still found
    let pad = 0.05 * (hi - lo).max(hi * 0.1);
    let resonances = find_resonances(pot, ((lo - pad).max(1e-6), hi + pad))?;
    let gamma = resonances.iter().map(|r| r.gamma).fold(f64::INFINITY, f64::min);
    let gamma = if gamma.is_finite() { gamma } else { f64::INFINITY };
    let points = ks
        .par_iter()
        .map(|&k0| wavepacket_entropy(k0, sigma, pot, grid, gamma).map(|s| ScanPoint { k0, delta_s1: s }))
        .collect::<Result<Vec<_>>>()?;
    let estimates = resonances.iter().map(|r| (sigma / r.gamma).log2()).collect();
    Ok(EntropyScan { points, resonances, estimates })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot() -> DoubleDeltaPotential {
        DoubleDeltaPotential::new(5.0, 1.0).unwrap()
    }

    #[test]
    fn free_particle_transmits() {
        let p = DoubleDeltaPotential::new(0.0, 1.0).unwrap();
        let s = scattering_amplitudes(1.7, &p).unwrap();
        assert!((s.t - 1.0).norm() < 1e-15);
        assert!(s.r.norm() < 1e-15);
    }

    #[test]
    fn unitarity_on_scan() {
        for i in 1..2000 {
            let s = scattering_amplitudes(0.01 * i as f64, &pot()).unwrap();
            assert!((s.t.norm_sqr() + s.r.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn single_spike_limit() {
        // spikes merged at the origin act as one spike of strength 2g
        let p = DoubleDeltaPotential::new(3.0, 1e-9).unwrap();
        let k = 1.3;
        let t = scattering_amplitudes(k, &p).unwrap().t;
        let expect = 1.0 / (1.0 + (2.0 * 3.0 / (2.0 * k)).powi(2));
        assert!((t.norm_sqr() - expect).abs() < 1e-8);
    }

    #[test]
    fn zero_momentum_is_domain_error() {
        assert!(matches!(scattering_amplitudes(0.0, &pot()), Err(Error::Domain(_))));
    }

    #[test]
    fn discrete_trivial_cases() {
        let one = ChannelSuperposition::new(vec![Complex64::new(1.0, 0.0)], vec![1.0]).unwrap();
        let th = 0.3f64;
        let s = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(th.cos(), 0.0), Complex64::new(-th.sin(), 0.0), Complex64::new(th.sin(), 0.0), Complex64::new(th.cos(), 0.0)],
        );
        let d = delta_s1_discrete(&one, &DMatrix::identity(1, 1)).unwrap();
        assert_eq!(d.total(), 0.0);
        assert_eq!(d.classical, 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let two = ChannelSuperposition::new(vec![Complex64::new(h, 0.0); 2], vec![1.0, 2.0]).unwrap();
        let d = delta_s1_discrete(&two, &DMatrix::identity(2, 2)).unwrap();
        assert!(d.total().abs() < 1e-12);
        let bad = s.clone() * Complex64::new(1.1, 0.0);
        assert!(delta_s1_discrete(&two, &bad).is_err());
    }

    #[test]
    fn zeroth_order_and_curvature_sign() {
        let r = find_resonances(&pot(), (0.5, 4.0)).unwrap();
        assert!(!r.is_empty());
        let k = r[0].k_res;
        let (t, rr) = second_order_eigenvalues(k, 0.0, &pot()).unwrap();
        assert!((t - 1.0).abs() < 1e-8 && rr.abs() < 1e-8);
        assert!(transmission_curvature(k, &pot()) < 0.0);
        let (t2, _) = second_order_eigenvalues(k, r[0].gamma / 5.0, &pot()).unwrap();
        assert!(t2 < 1.0);
        assert!(delta_s1_second(k, 0.0, &pot()).unwrap() < 1e-6);
    }

    #[test]
    fn curvature_matches_polynomial() {
        let (d, _) = ridders_second_derivative(|x| x.powi(4) - 3.0 * x * x, 1.5, 0.3);
        assert!((d - (12.0 * 2.25 - 6.0)).abs() < 1e-9);
    }

    #[test]
    fn resonances_narrow_with_strength() {
        let w5 = find_resonances(&pot(), (0.5, 4.0)).unwrap();
        let w10 = find_resonances(&DoubleDeltaPotential::new(10.0, 1.0).unwrap(), (0.5, 4.0)).unwrap();
        assert!(w10[0].gamma < w5[0].gamma);
        assert!(find_resonances(&DoubleDeltaPotential::new(0.0, 1.0).unwrap(), (0.5, 4.0)).unwrap().is_empty());
    }

    #[test]
    fn free_scan_has_no_entanglement() {
        let p = DoubleDeltaPotential::new(0.0, 1.0).unwrap();
        let s = wavepacket_entropy_scan(&[2.0, 3.0], 0.1, &p, ScanGrid::default()).unwrap();
        assert!(s.points.iter().all(|p| p.delta_s1.abs() < 1e-8));
    }

    #[test]
    fn overlapping_sectors_rejected() {
        assert!(wavepacket_entropy(0.5, 0.1, &pot(), ScanGrid::default(), 1.0).is_err());
    }
}
