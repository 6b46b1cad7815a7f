use std::f64::consts::{PI, TAU};

use crate::distributions::wrap_angle;
use crate::error::{domain, Error, Result};
use crate::special::ComplexValue;

/// Grid size of the default periodic quadrature rule.
pub const QUADRATURE_POINTS: usize = 1 << 14;

/// Shortest arc between two angles, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (wrap_angle(a) - wrap_angle(b)).abs();
    d.min(TAU - d).min(PI)
}

/// Root mean square of the angular distances.
pub fn angular_rmse(estimates: &[f64], truths: &[f64]) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::LengthMismatch(estimates.len(), truths.len()));
    }
    if estimates.is_empty() {
        return domain("RMSE of an empty sequence");
    }
    let ss: f64 = estimates
        .iter()
        .zip(truths)
        .map(|(&e, &t)| angular_distance(e, t).powi(2))
        .sum();
    Ok((ss / estimates.len() as f64).sqrt())
}

/// Trapezoidal rule on `n` equispaced points over `[0, 2π)`. Converges
/// geometrically for smooth periodic integrands.
pub fn periodic_integral(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = TAU / n as f64;
    (0..n).map(|i| f(h * i as f64)).sum::<f64>() * h
}

/// Complex version of [`periodic_integral`].
pub fn periodic_integral_c(f: impl Fn(f64) -> ComplexValue, n: usize) -> ComplexValue {
    let h = TAU / n as f64;
    (0..n).map(|i| f(h * i as f64)).sum::<ComplexValue>() * h
}

/// `∫ e^{inx} f(x) dx` of a density given by its logarithm.
pub fn numeric_moment(ln_f: impl Fn(f64) -> f64, order: u32, n: usize) -> ComplexValue {
    let k = f64::from(order);
    periodic_integral_c(|x| ComplexValue::from_polar(ln_f(x).exp(), k * x), n)
}

/// `∫ f ln(f/g)` for densities given by their logarithms.
///
/// Working in log space keeps far tails, where either density underflows,
/// finite.
pub fn numeric_kld_ln(ln_true: impl Fn(f64) -> f64, ln_fit: impl Fn(f64) -> f64, n: usize) -> Result<f64> {
    // a nonfinite log-density poisons the sum with NaN
    let v = periodic_integral(
        |x| {
            let (a, b) = (ln_true(x), ln_fit(x));
            if !a.is_finite() || !b.is_finite() {
                return f64::NAN;
            }
            a.exp() * (a - b)
        },
        n,
    );
    if v.is_nan() {
        return domain("densities must be positive on the quadrature grid");
    }
    Ok(v.max(0.0))
}

/// `∫ f ln(f/g)` on the default grid; both pdfs must be positive there.
pub fn numeric_kld(f_true: impl Fn(f64) -> f64, f_fit: impl Fn(f64) -> f64) -> Result<f64> {
    numeric_kld_ln(|x| f_true(x).ln(), |x| f_fit(x).ln(), QUADRATURE_POINTS)
}

/// `∫ (f - g)²` on the default grid.
pub fn numeric_l2(f_true: impl Fn(f64) -> f64, f_fit: impl Fn(f64) -> f64) -> Result<f64> {
    numeric_l2_n(f_true, f_fit, QUADRATURE_POINTS)
}

pub fn numeric_l2_n(f_true: impl Fn(f64) -> f64, f_fit: impl Fn(f64) -> f64, n: usize) -> Result<f64> {
    let v = periodic_integral(
        |x| {
            let (a, b) = (f_true(x), f_fit(x));
            if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
                return f64::NAN;
            }
            (a - b) * (a - b)
        },
        n,
    );
    if v.is_nan() {
        return domain("densities must be finite and nonnegative on the quadrature grid");
    }
    Ok(v)
}

/// Median of a nonempty slice; NaNs sort last.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
