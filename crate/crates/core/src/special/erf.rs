//! Error function of complex argument and the Faddeeva function
//! `w(z) = exp(-z²) erfc(-iz)`.
//!
//! Two evaluation routes are combined:
//!
//! * near the origin, and in the strip `Re(z)² < 1.5`, the Maclaurin series of
//!   `erf` is summed; there the series loses at most `|z|·√π·exp(2 Re(z)²)`
//!   relative to the result;
//! * elsewhere in the right half-plane `erfc(z) = exp(-z²) w(iz)` with `w`
//!   from its Laplace continued fraction, evaluated by the modified Lentz
//!   method until the convergents agree to rounding.
//!
//! The left half-plane follows from `erf(-z) = -erf(z)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Componentwise bound on `|Re z|` and `|Im z|` accepted by [`erf_complex`].
pub const WORKING_RANGE: f64 = 30.0;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const SERIES_RADIUS: f64 = 2.0;
const STRIP_RE2: f64 = 1.5;

fn uses_series(z: Complex64) -> bool {
    z.norm() <= SERIES_RADIUS || z.re * z.re < STRIP_RE2
}

fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let min_terms = z2.norm().ceil() as usize + 2;
    for n in 1..20_000usize {
        term *= -z2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if n > min_terms && contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}

/// Laplace continued fraction for `w(u)`, valid for `Im u > 0`:
/// `w(u) = (i/√π) / (u - (1/2)/(u - 1/(u - (3/2)/(u - ...))))`.
fn faddeeva_cf(u: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = u;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..100_000usize {
        let a = -(n as f64) * 0.5;
        d = u + d * a;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = u + c.inv() * a;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    Complex64::new(0.0, INV_SQRT_PI) / f
}

/// `erfc(z)` for `Re z >= 0` outside the series region.
fn erfc_cf(z: Complex64) -> Complex64 {
    let iz = Complex64::new(-z.im, z.re);
    (-z * z).exp() * faddeeva_cf(iz)
}

pub(crate) fn erf_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return -erf_unchecked(-z);
    }
    if uses_series(z) {
        erf_series(z)
    } else {
        1.0 - erfc_cf(z)
    }
}

pub(crate) fn erfc_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return 2.0 - erfc_unchecked(-z);
    }
    if uses_series(z) {
        1.0 - erf_series(z)
    } else {
        erfc_cf(z)
    }
}

fn check_range(z: Complex64) -> Result<()> {
    if !(z.re.abs() <= WORKING_RANGE && z.im.abs() <= WORKING_RANGE) {
        return Err(Error::Range(format!(
            "erf argument {z} outside |Re|, |Im| <= {WORKING_RANGE}"
        )));
    }
    Ok(())
}

fn check_finite(z: Complex64, w: Complex64) -> Result<Complex64> {
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::Range(format!("erf({z}) overflows double precision")))
    }
}

/// Error function of a complex argument.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    check_range(z)?;
    check_finite(z, erf_unchecked(z))
}

/// Complementary error function `1 - erf(z)` evaluated without cancellation
/// in the right half-plane.
pub fn erfc_complex(z: Complex64) -> Result<Complex64> {
    check_range(z)?;
    check_finite(z, erfc_unchecked(z))
}

/// Faddeeva function `w(z) = exp(-z²) erfc(-iz)`.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        // w(z) = 2 exp(-z²) - w(-z)
        return 2.0 * (-z * z).exp() - faddeeva(-z);
    }
    // -iz has real part Im z >= 0
    let miz = Complex64::new(z.im, -z.re);
    if uses_series(miz) {
        (-z * z).exp() * (1.0 - erf_series(miz))
    } else {
        faddeeva_cf(z)
    }
}

/// `erf(a) - erf(b)` arranged so that arguments on the same side of the
/// imaginary axis are differenced through `erfc`, which keeps the tails of
/// far-away Gaussians accurate.
pub(crate) fn erf_difference(a: Complex64, b: Complex64) -> Complex64 {
    if a.re >= 0.0 && b.re >= 0.0 {
        erfc_unchecked(b) - erfc_unchecked(a)
    } else if a.re <= 0.0 && b.re <= 0.0 {
        erfc_unchecked(-a) - erfc_unchecked(-b)
    } else {
        erf_unchecked(a) - erf_unchecked(b)
    }
}

/// `∫₀^{2π} e^{inx} N(x; mu, sigma) dx` for `n ∈ {0, 1}`.
///
/// `n = 0` is the Gaussian mass on `[0, 2π]`,
/// `½ (erf(mu/(σ√2)) - erf((mu-2π)/(σ√2)))`; `n = 1` is
/// `½ exp(i mu - σ²/2) (erf((mu + iσ²)/(√2σ)) - erf((mu - 2π + iσ²)/(√2σ)))`.
pub fn gaussian_segment_moment(mu: f64, sigma: f64, n: u32) -> Result<Complex64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return crate::error::domain(format!("sigma must be positive, got {sigma}"));
    }
    if !mu.is_finite() {
        return crate::error::domain(format!("mu must be finite, got {mu}"));
    }
    let scale = std::f64::consts::SQRT_2 * sigma;
    match n {
        0 => {
            let a = Complex64::new(mu / scale, 0.0);
            let b = Complex64::new((mu - 2.0 * PI) / scale, 0.0);
            Ok(Complex64::new(0.5 * erf_difference(a, b).re, 0.0))
        }
        1 => {
            let s2 = sigma * sigma;
            let a = Complex64::new(mu, s2) / scale;
            let b = Complex64::new(mu - 2.0 * PI, s2) / scale;
            let prefactor = Complex64::new(-0.5 * s2, mu).exp() * 0.5;
            Ok(prefactor * erf_difference(a, b))
        }
        _ => crate::error::domain(format!("segment moment order must be 0 or 1, got {n}")),
    }
}
