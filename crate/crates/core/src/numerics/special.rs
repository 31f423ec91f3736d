//! Special functions.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::{Error, Result};

/// Below this argument the Maclaurin series is used; above it the
/// continued fraction for the auxiliary functions.
const SERIES_CUTOFF: f64 = 4.0;

/// Sine integral `Si(x) = ∫₀ˣ sin(u)/u du`, absolute error below 1e-10
/// (in practice ~1e-15).
///
/// Odd in `x`. Non-finite input is a domain error.
pub fn sine_integral(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Si(x) needs finite x, got {x}")));
    }
    let ax = x.abs();
    let si = if ax < SERIES_CUTOFF {
        si_series(ax)
    } else {
        si_auxiliary(ax)
    };
    Ok(si.copysign(x))
}

fn si_series(x: f64) -> f64 {
    // Σ (-1)^n x^(2n+1) / ((2n+1)(2n+1)!)
    let x2 = x * x;
    let mut term = x; // x^(2n+1)/(2n+1)!
    let mut sum = x;
    for n in 1..60 {
        let k = (2 * n) as f64;
        term *= -x2 / (k * (k + 1.0));
        let contrib = term / (k + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Si(x) = π/2 + Im[e^{-ix} h(x)]` where `h = e^{ix} E₁(ix)` is evaluated
/// with the modified Lentz continued fraction
/// `1/(1+ix - 1²/(3+ix - 2²/(5+ix - …)))`.
fn si_auxiliary(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let h = Complex64::new(x.cos(), -x.sin()) * h;
    FRAC_PI_2 + h.im
}

/// Legendre polynomial `P_l(z)` by the three-term recurrence.
pub fn legendre(l: usize, z: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => z,
        _ => {
            let (mut p0, mut p1) = (1.0, z);
            for n in 1..l {
                let nf = n as f64;
                let p2 = ((2.0 * nf + 1.0) * z * p1 - nf * p0) / (nf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
