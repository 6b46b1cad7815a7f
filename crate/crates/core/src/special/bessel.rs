//! Modified Bessel functions of the first kind and the ratio `A(x) = I1(x)/I0(x)`.
//!
//! Below [`SERIES_LIMIT`] the ascending power series is summed (all terms are
//! positive, so there is no cancellation). Above it the Hankel asymptotic
//! expansion of `e^{-x} I_n(x)` is used; at the switch point its smallest term
//! is below `e^{-2x} ≈ 4e-18`, so both branches agree to rounding.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Switch point between power series and asymptotic expansion.
pub const SERIES_LIMIT: f64 = 20.0;

/// Largest argument accepted by [`bessel_ratio_inv`]: values `y >= 1 - 1e-14`
/// are rejected because the concentration diverges.
pub const RATIO_INV_MAX: f64 = 1.0 - 1e-14;

const MAX_TERMS: usize = 1000;

/// Ascending power series for `I_n(x)`.
fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / f64::from(k);
    }
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + f64::from(order)));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

fn series_scaled(order: u32, x: f64) -> f64 {
    series(order, x) * (-x).exp()
}

/// Hankel expansion of `e^{-x} I_n(x)` for large `x`.
fn asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(order) * f64::from(order);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        // divergent tail: stop at the smallest term
        if mag > prev {
            break;
        }
        sum += term;
        if mag <= 1e-17 * sum.abs() {
            break;
        }
        prev = mag;
    }
    sum / (2.0 * PI * x).sqrt()
}

/// `e^{-x} I_order(x)`; finite for all `x >= 0`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("bessel_i requires finite x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    if x < SERIES_LIMIT {
        Ok(series_scaled(order, x))
    } else {
        Ok(asymptotic_scaled(order, x))
    }
}

/// Modified Bessel function of the first kind `I_order(x)`.
///
/// Overflows to `+inf` beyond `x ≈ 713`; use [`bessel_i_scaled`] there.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(order, x)?;
    if x < SERIES_LIMIT {
        return Ok(if x == 0.0 { scaled } else { series(order, x) });
    }
    Ok(scaled * x.exp())
}

/// `I_order(x) / I_0(x)`, i.e. the modulus of the `order`-th circular moment of
/// a von Mises density with concentration `x`.
pub fn bessel_ratio_n(order: u32, x: f64) -> Result<f64> {
    if order == 0 {
        bessel_i_scaled(0, x)?;
        return Ok(1.0);
    }
    let num = bessel_i_scaled(order, x)?;
    let den = bessel_i_scaled(0, x)?;
    Ok(num / den)
}

/// `A(x) = I_1(x) / I_0(x)`.
pub fn bessel_ratio(x: f64) -> Result<f64> {
    bessel_ratio_n(1, x)
}

/// Derivative `A'(x) = 1 - A(x)/x - A(x)^2`.
fn bessel_ratio_derivative(x: f64, a: f64) -> f64 {
    if x < 1e-8 {
        0.5
    } else {
        1.0 - a / x - a * a
    }
}

/// Inverse of [`bessel_ratio`]: the concentration `κ >= 0` with `A(κ) = y`.
///
/// Safeguarded Newton iteration inside a bisection bracket. The bracket starts
/// at `[0, 1e6]` and is widened to `1/(1-y)` when `y` exceeds `A(1e6)`.
pub fn bessel_ratio_inv(y: f64) -> Result<f64> {
    if !(0.0..RATIO_INV_MAX).contains(&y) {
        return domain(format!("A^-1 requires 0 <= y < 1 - 1e-14, got {y}"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0_f64;
    let mut hi = 1e6_f64.max(1.0 / (1.0 - y));

    // Initial guess from the Banerjee-type approximation.
    let mut x = (y * (2.0 - y * y) / (1.0 - y * y)).clamp(lo, hi);
    for _ in 0..200 {
        let a = bessel_ratio(x)?;
        let r = a - y;
        if r == 0.0 {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = bessel_ratio_derivative(x, a);
        let mut next = x - r / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 1e-15 * x.max(1e-300) || hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let residual = (bessel_ratio(x)? - y).abs();
    if residual > 1e-12 {
        return Err(crate::Error::Numerical(format!(
            "A^-1({y}) did not converge: residual {residual:e}"
        )));
    }
    Ok(x)
}
