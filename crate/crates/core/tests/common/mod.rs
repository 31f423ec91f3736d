//! Independent numerical oracles shared by the oracle and acceptance tiers.
//!
//! Each oracle recomputes a library quantity by a different method and
//! reports the discrepancy together with the tolerance it must meet.

#![allow(dead_code)]

use std::f64::consts::PI;

use molqi::cavity::{self, AtomBath, CavityParams, DimerDensity4};
use molqi::collision::{self, DoubleDeltaPotential, ScanGrid};
use molqi::dissociation::{self, RamanParams};
use molqi::fluorescence::{self, DeltaLambda};
use molqi::gaussian_epr::{self, ModeCovariance, TwoParticleGaussian};
use molqi::numerics::grid::{ComplexGrid1D, EntropyBase};
use molqi::numerics::{birth_death_lindblad, sine_integral, split_step_propagate};
use molqi::superbeats::{self, AdiabaticModel};
use molqi::teleportation::{self, ErrorBudget};
use molqi::Complex64;
use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};

#[derive(Debug, Clone, Copy)]
pub struct Check {
    pub name: &'static str,
    pub error: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tol
    }

    pub fn assert(&self) {
        assert!(self.passed(), "{}: error {:.3e} exceeds {:.1e}", self.name, self.error, self.tol);
    }
}

pub type Oracle = fn() -> Check;

pub fn all() -> Vec<Oracle> {
    vec![
        split_step_free_gaussian,
        split_step_harmonic_mode,
        sine_integral_simpson,
        cumulative_rate_simpson,
        raman_closed_form_transform,
        raman_closed_form_spread,
        double_delta_linear_system,
        second_order_gaussian_average,
        collision_reduced_density,
        gaussian_reduced_density,
        gaussian_grid_conditioning,
        transit_lindblad_vacuum,
        transit_lindblad_thermal,
        transit_kraus_closed_form,
        cavity_lindblad_steady_state,
        birth_death_rk4_transient,
        wigner_direct_convolution,
        cat_noise_channel,
        gaussian_offset_fidelity,
        adiabatic_eigen_oracle,
    ]
}

// ---------------------------------------------------------------- integrators

pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Classical fourth-order Runge-Kutta for `y' = f(y)` on a vector space.
pub fn rk4<T, F>(y0: T, f: F, t: f64, steps: usize) -> T
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(&T) -> T,
{
    let h = t / steps as f64;
    let mut y = y0;
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&(y.clone() + k1.clone() * (0.5 * h)));
        let k3 = f(&(y.clone() + k2.clone() * (0.5 * h)));
        let k4 = f(&(y.clone() + k3.clone() * h));
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    y
}

/// Entropy (in `base`) of the reduced density matrix `M M† · scale²`,
/// diagonalized as a Hermitian kernel.
pub fn kernel_entropy(blocks: &[DMatrix<Complex64>], scale: f64, base: EntropyBase) -> (f64, f64) {
    let mut total = 0.0;
    let mut s = 0.0;
    for m in blocks {
        let rho = m * m.adjoint() * Complex64::new(scale * scale, 0.0);
        for e in rho.symmetric_eigenvalues().iter().filter(|&&e| e > 1e-300) {
            total += e;
            s -= e * base.log(*e);
        }
    }
    (s, total)
}

// ---------------------------------------------------------------- split-step

pub fn split_step_free_gaussian() -> Check {
    let (s0, m, t) = (1.0, 1.0, 2.0);
    let psi0 = ComplexGrid1D::from_fn(1024, 0.05, |x| {
        Complex64::new((2.0 * PI * s0 * s0).powf(-0.25) * (-x * x / (4.0 * s0 * s0)).exp(), 0.0)
    })
    .unwrap();
    let out = split_step_propagate(&psi0, &vec![0.0; 1024], m, t / 200.0, 200).unwrap();
    let exact = |x: f64| {
        let z = Complex64::new(1.0, t / (2.0 * m * s0 * s0));
        (2.0 * PI * s0 * s0).powf(-0.25) / z.sqrt() * (-(x * x) / (4.0 * s0 * s0 * z)).exp()
    };
    let err = out.xs().zip(out.samples()).map(|(x, z)| (z - exact(x)).norm()).fold(0.0, f64::max);
    Check { name: "split-step free Gaussian vs closed form", error: err, tol: 1e-8 }
}

pub fn split_step_harmonic_mode() -> Check {
    let (m, w, s0, t) = (2.0, 1.0, 0.3, 1.3);
    let n = 1024;
    let dx = 0.01;
    let psi0 = ComplexGrid1D::from_fn(n, dx, |x| Complex64::new((-x * x / (4.0 * s0 * s0)).exp(), 0.0)).unwrap();
    let mut psi0 = psi0;
    psi0.normalize();
    let v: Vec<f64> = psi0.xs().map(|x| 0.5 * m * w * w * x * x).collect();
    let steps = 4000;
    let out = split_step_propagate(&psi0, &v, m, t / steps as f64, steps).unwrap();
    let (_, sd) = out.position_moments();
    let expect = ModeCovariance::minimum_uncertainty(s0).harmonic(m, w, t).xx.sqrt();
    Check { name: "split-step harmonic width vs mode covariance", error: (sd - expect).abs(), tol: 1e-6 }
}

// ---------------------------------------------------------------- quadrature

pub fn sine_integral_simpson() -> Check {
    let f = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    let err = [0.3, 2.0, 7.5, 40.0, 150.0]
        .iter()
        .map(|&x| (sine_integral(x).unwrap() - adaptive_simpson(&f, 0.0, x, 1e-13)).abs())
        .fold(0.0, f64::max);
    Check { name: "sine integral vs adaptive Simpson", error: err, tol: 1e-10 }
}

pub fn cumulative_rate_simpson() -> Check {
    let mut err: f64 = 0.0;
    for dl in [DeltaLambda::Zero, DeltaLambda::One] {
        let f = |x: f64| fluorescence::instantaneous_rate(x, dl).unwrap();
        for xi in [0.5, 3.0, 17.0, 60.0] {
            let q = adaptive_simpson(&f, 0.0, xi, 1e-13);
            err = err.max((fluorescence::cumulative_cooperative(xi, dl).unwrap() - q).abs());
        }
    }
    Check { name: "cumulative cooperative rate vs adaptive Simpson", error: err, tol: 1e-9 }
}

/// `∫₀^{vt} sin(Ω(t − r/v)/2) e^{−i(q−k)r} dr` times the channel prefactor.
pub fn raman_transform_closed_form(p: &RamanParams, t: f64, q: f64) -> Complex64 {
    let alpha = 0.5 * p.omega_eff;
    let beta = alpha / p.v;
    let len = p.v * t;
    let s = q - p.k;
    let i = Complex64::new(0.0, 1.0);
    let edge = Complex64::from_polar(1.0, -s * len);
    let t1 = (Complex64::from_polar(1.0, alpha * t) - edge) / (i * (s + beta));
    let t2 = (Complex64::from_polar(1.0, -alpha * t) - edge) / (i * (s - beta));
    let u = (t1 - t2) / (2.0 * i);
    let phase0 = Complex64::from_polar(1.0, p.phase_shifts[0] - p.energy() * t) / Complex64::new(0.0, 2.0 * p.k);
    u * phase0 / (4.0 * PI).sqrt()
}

pub fn raman_closed_form_transform() -> Check {
    let p = RamanParams::new(2.0, 1.0, 20.0).unwrap();
    let t = 9.0;
    let mut err: f64 = 0.0;
    for j in 0..41 {
        let q = 16.03 + 0.2 * j as f64;
        let a = dissociation::radial_momentum_amplitude(&p, t, q);
        let b = raman_transform_closed_form(&p, t, q);
        err = err.max((a - b).norm() / b.norm().max(1e-3));
    }
    Check { name: "Raman momentum amplitude: quadrature vs closed form", error: err, tol: 1e-10 }
}

pub fn raman_closed_form_spread() -> Check {
    let p = RamanParams::new(2.0, 1.0, 20.0).unwrap();
    let t = 10.0;
    let band = dissociation::momentum_band(&p, t);
    let n = 40001;
    let h = 2.0 * band / (n - 1) as f64;
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for j in 0..n {
        let q = p.k - band + j as f64 * h;
        let w = if j == 0 || j == n - 1 { 0.5 * h } else { h };
        let d = raman_transform_closed_form(&p, t, q + 1e-9).norm_sqr() * w;
        m0 += d;
        m1 += q * d;
        m2 += q * q * d;
    }
    let mean = m1 / m0;
    let sd = (m2 / m0 - mean * mean).sqrt();
    let lib = dissociation::momentum_spread(&p, t).unwrap();
    Check { name: "Raman band-limited spread vs closed-form transform", error: (lib - sd).abs() / sd, tol: 1e-6 }
}

// ---------------------------------------------------------------- collision

/// `t` from the 4×4 matching conditions of `ψ'' + k²ψ = κ[δ(x+a) + δ(x−a)]ψ`.
pub fn double_delta_t_linear(k: f64, kappa: f64, a: f64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    let e = |x: f64| Complex64::from_polar(1.0, k * x);
    // unknowns r, A, B, t
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    let mut rhs = DVector::<Complex64>::zeros(4);
    let x = -a;
    // continuity at −a: e(x) + r e(−x) = A e(x) + B e(−x)
    m[(0, 0)] = e(-x);
    m[(0, 1)] = -e(x);
    m[(0, 2)] = -e(-x);
    rhs[0] = -e(x);
    // derivative jump at −a: ψ'(+) − ψ'(−) = κ ψ
    m[(1, 0)] = i * k * e(-x) - kappa * e(-x);
    m[(1, 1)] = i * k * e(x);
    m[(1, 2)] = -i * k * e(-x);
    rhs[1] = i * k * e(x) + kappa * e(x);
    let x = a;
    // continuity at a: A e(x) + B e(−x) = t e(x)
    m[(2, 1)] = e(x);
    m[(2, 2)] = e(-x);
    m[(2, 3)] = -e(x);
    // jump at a: ik t e(x) − ik(A e(x) − B e(−x)) = κ t e(x)
    m[(3, 1)] = -i * k * e(x);
    m[(3, 2)] = i * k * e(-x);
    m[(3, 3)] = i * k * e(x) - kappa * e(x);
    let sol = m.lu().solve(&rhs).unwrap();
    (sol[3], sol[0])
}

pub fn double_delta_linear_system() -> Check {
    let mut err: f64 = 0.0;
    for (kappa, a) in [(5.0, 1.0), (30.0, 1.0), (2.0, 0.7)] {
        let pot = DoubleDeltaPotential::new(kappa, a).unwrap();
        for j in 0..50 {
            let k = 0.2 + 0.17 * j as f64;
            let amp = collision::scattering_amplitudes(k, &pot).unwrap();
            let (t, r) = double_delta_t_linear(k, kappa, a);
            err = err.max((amp.t - t).norm()).max((amp.r - r).norm());
        }
    }
    Check { name: "double-delta amplitudes vs matching conditions", error: err, tol: 1e-10 }
}

pub fn second_order_gaussian_average() -> Check {
    let pot = DoubleDeltaPotential::new(5.0, 1.0).unwrap();
    let res = collision::find_resonances(&pot, (0.5, 2.0)).unwrap()[0];
    let dk = res.gamma / 50.0;
    let (eps, _) = collision::second_order_eigenvalues(res.k_res, dk, &pot).unwrap();
    // relative momentum has variance dk²/2
    let s = dk / 2f64.sqrt();
    let f = |q: f64| {
        pot.transmission_probability(res.k_res + q) * (-q * q / (2.0 * s * s)).exp() / (2.0 * PI * s * s).sqrt()
    };
    let avg = adaptive_simpson(&f, -10.0 * s, 10.0 * s, 1e-14);
    Check { name: "second-order transmitted weight vs Gaussian average", error: ((eps - avg) / avg).abs(), tol: 1e-4 }
}

pub fn collision_reduced_density() -> Check {
    let (kappa, a) = (5.0, 1.0);
    let pot = DoubleDeltaPotential::new(kappa, a).unwrap();
    let (k0, sigma) = (3.4, 0.2);
    let lib = collision::wavepacket_entropy(k0, sigma, &pot, ScanGrid::default(), f64::INFINITY).unwrap();
    let n = 121;
    let half = 7.0 * sigma;
    let dq = 2.0 * half / (n - 1) as f64;
    let q: Vec<f64> = (0..n).map(|i| -half + i as f64 * dq).collect();
    let phi = |x: f64| (2.0 * PI * sigma * sigma).powf(-0.25) * (-x * x / (4.0 * sigma * sigma)).exp();
    let mt = DMatrix::from_fn(n, n, |i, j| double_delta_t_linear(k0 + 0.5 * (q[i] - q[j]), kappa, a).0 * phi(q[i]) * phi(q[j]));
    let mr = DMatrix::from_fn(n, n, |i, j| double_delta_t_linear(k0 + 0.5 * (q[j] - q[i]), kappa, a).1 * phi(q[i]) * phi(q[j]));
    let (s, _) = kernel_entropy(&[mt, mr], dq, EntropyBase::Bits);
    Check { name: "wavepacket entropy vs reduced-density kernel", error: (lib - s).abs(), tol: 1e-8 }
}

// ---------------------------------------------------------------- Gaussian EPR

pub fn gaussian_reduced_density() -> Check {
    let st = TwoParticleGaussian::new(2.0, 0.5, 1.0).unwrap();
    let n = 220;
    let half = 7.0 * st.dx1();
    let dx = 2.0 * half / n as f64;
    let xs: Vec<f64> = (0..n).map(|i| -half + (i as f64 + 0.5) * dx).collect();
    let m = gaussian_epr::amplitude_matrix(&st, &xs, &xs);
    let (s, total) = kernel_entropy(&[m], dx, EntropyBase::Nats);
    let s = (s + total.ln() * total) / total;
    let closed = gaussian_epr::covariance_entropy(&st, EntropyBase::Nats);
    let lib = st.entropy(EntropyBase::Nats, Default::default()).unwrap().exact;
    let ladder = gaussian_epr::gaussian_ladder_entropy(st.schmidt_number(), EntropyBase::Nats);
    let err = (lib - s).abs().max((closed - s).abs()).max((ladder - s).abs());
    Check { name: "Gaussian entropy: SVD, kernel, ladder, covariance", error: err, tol: 1e-8 }
}

pub fn gaussian_grid_conditioning() -> Check {
    let st = TwoParticleGaussian::new(1.7, 0.4, 1.0).unwrap().free_evolve(0.8).unwrap();
    let a = 0.9;
    let c = st.conditional_variances(a);
    let n = 4001;
    let half = 12.0;
    let h = 2.0 * half / (n - 1) as f64;
    let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for j in 0..n {
        let x = -half + j as f64 * h;
        let d = st.amplitude(x, a).norm_sqr();
        m0 += d;
        m1 += x * d;
        m2 += x * x * d;
    }
    let mean = m1 / m0;
    let sd = (m2 / m0 - mean * mean).sqrt();
    let err = (mean - c.mean_x1).abs().max((sd - c.dx1).abs());
    Check { name: "conditional position statistics vs grid conditioning", error: err, tol: 1e-8 }
}

// ---------------------------------------------------------------- Kraus and Lindblad

fn lindblad_two_atom(rho0: &Matrix4<Complex64>, gamma: f64, excited: f64, t: f64) -> Matrix4<Complex64> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let lower = Matrix2::new(c(0.0), c(0.0), c(1.0), c(0.0));
    let raise = lower.adjoint();
    let id = Matrix2::identity();
    let kron = |a: &Matrix2<Complex64>, b: &Matrix2<Complex64>| Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)]);
    let ops = [
        kron(&lower, &id) * c((gamma * (1.0 - excited)).sqrt()),
        kron(&id, &lower) * c((gamma * (1.0 - excited)).sqrt()),
        kron(&raise, &id) * c((gamma * excited).sqrt()),
        kron(&id, &raise) * c((gamma * excited).sqrt()),
    ];
    #[derive(Clone)]
    struct M(Matrix4<Complex64>);
    impl std::ops::Add for M {
        type Output = M;
        fn add(self, o: M) -> M {
            M(self.0 + o.0)
        }
    }
    impl std::ops::Mul<f64> for M {
        type Output = M;
        fn mul(self, s: f64) -> M {
            M(self.0 * Complex64::new(s, 0.0))
        }
    }
    let out = rk4(
        M(*rho0),
        |r: &M| {
            M(ops.iter().fold(Matrix4::zeros(), |acc, l| {
                let ld = l.adjoint();
                acc + l * r.0 * ld - (ld * l * r.0 + r.0 * ld * l) * c(0.5)
            }))
        },
        t,
        2000,
    );
    out.0
}

fn random_dimer_state() -> DimerDensity4 {
    let c = Complex64::new;
    let v = [c(0.3, 0.1), c(0.5, -0.2), c(0.4, 0.3), c(0.2, -0.1)];
    let u = [c(0.1, 0.0), c(-0.6, 0.1), c(0.2, 0.2), c(0.5, 0.0)];
    let a = nalgebra::Vector4::from(v);
    let b = nalgebra::Vector4::from(u);
    let m = a * a.adjoint() * c(0.7, 0.0) / c(a.norm_squared(), 0.0) + b * b.adjoint() * c(0.3, 0.0) / c(b.norm_squared(), 0.0);
    DimerDensity4::new(m).unwrap()
}

pub fn transit_lindblad_vacuum() -> Check {
    let rho = random_dimer_state();
    let (gamma, t) = (1.3, 0.7);
    let lib = cavity::transit_decay_map(&rho, gamma, t).unwrap();
    let ode = lindblad_two_atom(rho.matrix(), gamma, 0.0, t);
    Check { name: "vacuum transit channel vs two-atom Lindblad", error: (lib.matrix() - ode).camax(), tol: 1e-10 }
}

pub fn transit_lindblad_thermal() -> Check {
    let rho = random_dimer_state();
    let (gamma, t, nbar) = (0.8, 1.1, 0.4);
    let lib = cavity::transit_map(&rho, gamma, t, AtomBath::Thermal, nbar).unwrap();
    let ode = lindblad_two_atom(rho.matrix(), gamma, nbar / (2.0 * nbar + 1.0), t);
    Check { name: "thermal transit channel vs two-atom Lindblad", error: (lib.matrix() - ode).camax(), tol: 1e-10 }
}

pub fn transit_kraus_closed_form() -> Check {
    let out = cavity::transit_decay_map(&DimerDensity4::bell_psi(true), 1.0, 0.1).unwrap();
    let ic = cavity::inversion_coherence(&out);
    let d = (-0.1f64).exp();
    let err = (ic.w + 2.0 * (1.0 - d)).abs().max((ic.c - d).abs());
    Check { name: "Bell-state decay vs closed form", error: err, tol: 1e-12 }
}

#[derive(Clone)]
pub struct Dist(pub Vec<f64>);

impl std::ops::Add for Dist {
    type Output = Dist;
    fn add(self, o: Dist) -> Dist {
        Dist(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Mul<f64> for Dist {
    type Output = Dist;
    fn mul(self, s: f64) -> Dist {
        Dist(self.0.iter().map(|a| a * s).collect())
    }
}

/// Truncated birth-death master equation integrated with RK4.
pub fn birth_death_rk4(p0: &[f64], gain: f64, loss: f64, t: f64, steps: usize) -> Vec<f64> {
    let n = p0.len();
    rk4(
        Dist(p0.to_vec()),
        |p: &Dist| {
            let p = &p.0;
            Dist(
                (0..n)
                    .map(|k| {
                        let up = if k + 1 < n { gain * (k + 1) as f64 } else { 0.0 };
                        let mut d = -(up + loss * k as f64) * p[k];
                        if k > 0 {
                            d += gain * k as f64 * p[k - 1];
                        }
                        if k + 1 < n {
                            d += loss * (k + 1) as f64 * p[k + 1];
                        }
                        d
                    })
                    .collect(),
            )
        },
        t,
        steps,
    )
    .0
}

pub fn cavity_lindblad_steady_state() -> Check {
    let p = CavityParams::new(10.0, 1.0, 0.05).unwrap();
    let mut err: f64 = 0.0;
    for (w, c) in [(0.0, 0.5), (0.0, 0.0), (-1.0, 0.0), (0.1, -0.3)] {
        let (re, rd) = cavity::rate_coefficients(w, c, &p).unwrap();
        let n = 200;
        let mut p0 = vec![0.0; n];
        p0[0] = 1.0;
        let dist = birth_death_rk4(&p0, re, rd, 40.0 / (rd - re), 200_000);
        let mean: f64 = dist.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
        let ss = cavity::steady_state(w, c, &p).unwrap();
        err = err.max((mean - ss.n_ss).abs() / ss.n_ss.max(1.0));
    }
    Check { name: "steady photon number vs RK4 master equation", error: err, tol: 1e-6 }
}

pub fn birth_death_rk4_transient() -> Check {
    let n = 80;
    let p0 = molqi::numerics::thermal_distribution(2.0, n);
    let (gain, loss, t) = (0.6, 1.4, 0.9);
    let lib = birth_death_lindblad(&p0, gain, loss, t).unwrap();
    let ode = birth_death_rk4(&p0, gain, loss, t, 20_000);
    let err = lib.iter().zip(&ode).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Check { name: "uniformized birth-death vs RK4", error: err, tol: 1e-10 }
}

// ---------------------------------------------------------------- teleportation

pub fn wigner_direct_convolution() -> Check {
    let width = 0.8;
    let psi = teleportation::gaussian_state(256, 0.1, 0.3, 0.0, width).unwrap();
    let w = teleportation::wigner_of_pure_state(&psi).unwrap();
    let err_budget = ErrorBudget::new(2.0, 1.6).unwrap();
    let out = teleportation::teleport_smooth(&w, &err_budget).unwrap();
    let (sx, sp) = err_budget.quadrature_widths();
    let g = |x: f64, p: f64| (-(x * x) / (2.0 * sx * sx) - p * p / (2.0 * sp * sp)).exp() / (2.0 * PI * sx * sp);
    let (nx, np) = w.shape();
    let mut err: f64 = 0.0;
    for &(i, j) in &[(128, 128), (120, 131), (140, 110), (100, 150)] {
        let (x, p) = (w.x(i), w.p(j));
        let mut acc = 0.0;
        for a in 0..nx {
            for b in 0..np {
                acc += w.values()[(a, b)] * g(x - w.x(a), p - w.p(b));
            }
        }
        acc *= w.dx() * w.dp();
        err = err.max((acc - out.values()[(i, j)]).abs());
        // closed form: Gaussian with widened variances
        let vx = width * width + sx * sx;
        let vp = 1.0 / (4.0 * width * width) + sp * sp;
        let exact = (-(x - 0.3).powi(2) / (2.0 * vx) - p * p / (2.0 * vp)).exp() / (2.0 * PI * (vx * vp).sqrt());
        err = err.max((exact - out.values()[(i, j)]).abs());
    }
    Check { name: "Wigner smoothing vs direct 2D convolution", error: err, tol: 1e-6 }
}

/// `∫ G(u, v) |⟨ψ|D(u, v)|ψ⟩|² du dv` on the sample lattice.
pub fn noise_channel_fidelity(psi: &ComplexGrid1D, sx: f64, sp: f64) -> f64 {
    let s = psi.samples();
    let n = s.len();
    let dx = psi.dx();
    let mu = (8.0 * sx / dx).ceil() as isize;
    let nv = 801;
    let vmax = 8.0 * sp;
    let dv = 2.0 * vmax / (nv - 1) as f64;
    let mut total = 0.0;
    for m in -mu..=mu {
        let u = m as f64 * dx;
        let gu = (-(u * u) / (2.0 * sx * sx)).exp() / ((2.0 * PI).sqrt() * sx);
        if gu < 1e-18 {
            continue;
        }
        for jv in 0..nv {
            let v = -vmax + jv as f64 * dv;
            let mut chi = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let src = i as isize - m;
                if src < 0 || src >= n as isize {
                    continue;
                }
                chi += s[i].conj() * Complex64::from_polar(1.0, v * psi.x(i)) * s[src as usize];
            }
            chi *= dx;
            let gv = (-(v * v) / (2.0 * sp * sp)).exp() / ((2.0 * PI).sqrt() * sp);
            total += gu * gv * chi.norm_sqr() * dx * dv;
        }
    }
    total
}

pub fn cat_noise_channel() -> Check {
    let psi = teleportation::cat_state(256, 0.1, 2.5, true).unwrap();
    let w = teleportation::wigner_of_pure_state(&psi).unwrap();
    let budget = ErrorBudget::from_squeezing(0.6).unwrap();
    let out = teleportation::teleport_smooth(&w, &budget).unwrap();
    let f = teleportation::fidelity(&w, &out).unwrap();
    let (sx, sp) = budget.quadrature_widths();
    let g = noise_channel_fidelity(&psi, sx, sp);
    Check { name: "cat-state fidelity vs Gaussian displacement channel", error: (f - g).abs(), tol: 1e-6 }
}

pub fn gaussian_offset_fidelity() -> Check {
    let width = 0.9;
    let d = 1.3;
    let a = teleportation::gaussian_state(256, 0.1, -0.5 * d, 0.0, width).unwrap();
    let b = teleportation::gaussian_state(256, 0.1, 0.5 * d, 0.0, width).unwrap();
    let f = teleportation::fidelity(
        &teleportation::wigner_of_pure_state(&a).unwrap(),
        &teleportation::wigner_of_pure_state(&b).unwrap(),
    )
    .unwrap();
    let exact = (-d * d / (4.0 * width * width)).exp();
    Check { name: "offset Gaussian fidelity vs closed-form overlap", error: (f - exact).abs(), tol: 1e-6 }
}

// ---------------------------------------------------------------- superbeats

pub fn adiabatic_eigen_oracle() -> Check {
    let mut err: f64 = 0.0;
    for parity in [molqi::fluorescence::Parity::G, molqi::fluorescence::Parity::U] {
        let m = AdiabaticModel::new(1.0, 0.3, parity).unwrap();
        for j in 0..30 {
            let r = 0.5 + 0.3 * j as f64;
            let h = superbeats::adiabatic_matrix(r, &m).unwrap();
            let (lo, vlo, hi, vhi) = superbeats::eigen_2x2(&h);
            let eig = nalgebra::SymmetricEigen::new(h);
            let (i_lo, i_hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
            err = err
                .max((lo - eig.eigenvalues[i_lo]).abs())
                .max((hi - eig.eigenvalues[i_hi]).abs())
                .max(1.0 - vlo.dot(&eig.eigenvectors.column(i_lo)).abs())
                .max(1.0 - vhi.dot(&eig.eigenvectors.column(i_hi)).abs());
        }
    }
    Check { name: "adiabatic eigenpairs vs symmetric eigensolver", error: err, tol: 1e-12 }
}
