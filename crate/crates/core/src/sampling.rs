//! Deterministic Dirac approximations that preserve circular moments
//! exactly, plus the naive wrapped unscented sampler they replace.

use std::f64::consts::SQRT_2;

use crate::distributions::{CircularDensity, CircularMoments, WrappedDiracMixture, WrappedNormal};
use crate::error::{domain, Error, Result};
use crate::special::ComplexValue;

/// Discriminants in `[-DISCRIMINANT_TOL, 0)` are treated as tangency.
const DISCRIMINANT_TOL: f64 = 1e-12;
/// Cosines this close outside `[-1, 1]` are clamped back.
const COSINE_TOL: f64 = 1e-12;
/// Values of `4(1-|m1|) - (1-|m2|)` below this are dominated by rounding.
const SHAPE_RESOLUTION: f64 = 64.0 * f64::EPSILON;

/// Default center-weight interpolation for the 5-component scheme.
pub const DEFAULT_LAMBDA: f64 = 0.5;

/// Which deterministic sampler to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampler {
    /// Three equally weighted components matching `m1`.
    Wd3,
    /// Five components matching `m1` and `m2`. `fallback` degrades to
    /// [`Sampler::Wd3`] when the moment pair is infeasible instead of
    /// failing.
    Wd5 { lambda: f64, fallback: bool },
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::Wd5 {
            lambda: DEFAULT_LAMBDA,
            fallback: false,
        }
    }
}

impl Sampler {
    pub fn wd5(lambda: f64) -> Self {
        Sampler::Wd5 {
            lambda,
            fallback: false,
        }
    }

    /// Sample from a moment set. [`Sampler::Wd5`] requires `m2`.
    pub fn sample(&self, moments: &CircularMoments) -> Result<WrappedDiracMixture> {
        match *self {
            Sampler::Wd3 => sample_wd3(moments.m1),
            Sampler::Wd5 { lambda, fallback } => {
                let m2 = moments
                    .m2
                    .ok_or_else(|| Error::Domain("5-component sampling needs m2".into()))?;
                match sample_wd5(moments.m1, m2, lambda) {
                    Err(Error::InfeasibleMoments(_)) if fallback => sample_wd3(moments.m1),
                    other => other,
                }
            }
        }
    }

    /// Sample a density through its circular moments.
    pub fn sample_density<D: CircularDensity>(&self, d: &D) -> Result<WrappedDiracMixture> {
        self.sample(&d.moments())
    }
}

/// Three equally weighted components at `μ - α, μ, μ + α` with
/// `α = arccos(3|m1|/2 - 1/2)`.
pub fn sample_wd3(m1: ComplexValue) -> Result<WrappedDiracMixture> {
    let r = m1.norm();
    if !(r <= 1.0 + COSINE_TOL) {
        return domain(format!("|m1| must not exceed 1, got {r}"));
    }
    let mu = m1.arg();
    let alpha = offset_angle(1.5 * (1.0 - r).max(0.0));
    WrappedDiracMixture::equally_weighted(vec![mu - alpha, mu, mu + alpha])
}

/// Five symmetric components matching the first two moments.
///
/// Both moduli enter the weight and position formulas; the phase of `m1`
/// only supplies the final shift. Returns [`Error::InfeasibleMoments`] when
/// no such mixture exists for the given `lambda`.
///
/// The formulas are evaluated in terms of `u = 1 - |m1|` and
/// `v = 1 - |m2|`, which keeps them accurate for concentrated densities.
/// With `x_i = 1 - d_i` the position constraints read `d1 + d2 = 2a` and
/// `d1² + d2² = 4a - b` for `a = u/(1-γ5)`, `b = v/(1-γ5)`.
pub fn sample_wd5(m1: ComplexValue, m2: ComplexValue, lambda: f64) -> Result<WrappedDiracMixture> {
    if !(0.0..=1.0).contains(&lambda) {
        return domain(format!("lambda must lie in [0, 1], got {lambda}"));
    }
    let mu = m1.arg();
    let (r1, r2) = (m1.norm(), m2.norm());
    if !(r1 <= 1.0 + COSINE_TOL && r2 <= 1.0 + COSINE_TOL) {
        return domain(format!("moment moduli must not exceed 1, got {r1}, {r2}"));
    }
    let (u, v) = (1.0 - r1, 1.0 - r2);
    let weights_for = |g5: f64| {
        let g = (1.0 - g5) / 4.0;
        vec![g, g, g, g, g5]
    };
    // limit of the center weight as the spread vanishes
    let g5_limit = (1.0 + lambda) / 3.0;

    if u <= 0.0 {
        return WrappedDiracMixture::new(weights_for(g5_limit), vec![mu; 5]);
    }

    // 4u - v vanishes quadratically in the spread; below this it is noise
    let shape = 4.0 * u - v;
    let g5 = if shape <= SHAPE_RESOLUTION {
        g5_limit
    } else {
        // γ5_min = 1 - 4u²/(4u - v), γ5_max = 1 - 2u²/(4u - v)
        1.0 - (4.0 - 2.0 * lambda) * u * u / shape
    };
    if !(g5 > 0.0 && g5 < 1.0) {
        return Err(Error::InfeasibleMoments(format!(
            "center weight {g5} outside (0, 1) for |m1| = {r1}, |m2| = {r2}"
        )));
    }

    let rest = 1.0 - g5;
    let (a, b) = (u / rest, v / rest);
    // (d1 - d2)²/4; the quadratic's discriminant is 16 times this
    let mut half_gap_sq = 0.5 * (4.0 * a - b) - a * a;
    if half_gap_sq < 0.0 {
        if 16.0 * half_gap_sq < -DISCRIMINANT_TOL {
            return Err(Error::InfeasibleMoments(format!(
                "negative discriminant {} for |m1| = {r1}, |m2| = {r2}",
                16.0 * half_gap_sq
            )));
        }
        half_gap_sq = 0.0;
    }
    let half_gap = half_gap_sq.sqrt();
    let d1 = clamp_offset(a + half_gap)?;
    let d2 = clamp_offset(a - half_gap)?;
    let (p1, p2) = (offset_angle(d1), offset_angle(d2));
    WrappedDiracMixture::new(weights_for(g5), vec![mu - p1, mu + p1, mu - p2, mu + p2, mu])
}

/// `arccos(1 - d)` written as `2 asin(sqrt(d/2))`, which stays accurate
/// near `d = 0`.
fn offset_angle(d: f64) -> f64 {
    2.0 * (0.5 * d).sqrt().min(1.0).asin()
}

/// `d = 1 - cos φ` must lie in `[0, 2]`.
fn clamp_offset(d: f64) -> Result<f64> {
    if (-COSINE_TOL..=2.0 + COSINE_TOL).contains(&d) {
        Ok(d.clamp(0.0, 2.0))
    } else {
        Err(Error::InfeasibleMoments(format!(
            "cosine {} outside [-1, 1]",
            1.0 - d
        )))
    }
}

/// Unscented points of the unwrapped Gaussian, `μ` and `μ ± √2 σ`
/// with weights `1/2, 1/4, 1/4`, reduced modulo 2π.
///
/// Ignores wrapping entirely, so for large `σ` the moments are badly off.
pub fn naive_wrapped_gaussian_samples(d: &WrappedNormal) -> WrappedDiracMixture {
    let spread = SQRT_2 * d.sigma();
    let mu = d.mu();
    WrappedDiracMixture::new(vec![0.5, 0.25, 0.25], vec![mu, mu - spread, mu + spread])
        .expect("fixed positive weights")
}
