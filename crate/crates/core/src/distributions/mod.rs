//! Circular probability distributions on `S¹ = [0, 2π)`.
//!
//! The wrapped normal ([`WrappedNormal`]) and von Mises ([`VonMises`])
//! families are both determined by their first circular moment
//! `m1 = E[exp(ix)]`, which is what makes moment matching between them, and
//! against discrete [`WrappedDiracMixture`] approximations, possible.
//!
//! For a circular pdf the Fourier coefficients are `c_k = m_{-k} / (2π)`.

mod dirac;
mod ops;
mod von_mises;
mod wrapped_normal;

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special::ComplexValue;

pub use dirac::WrappedDiracMixture;
pub use ops::{
    convolve_moments, vm_convolve, vm_multiply, wn_convolve, wn_multiply_moment_based, wn_multiply_via_vm,
    wn_product_first_moment, DEFAULT_PRODUCT_TRUNCATION,
};
pub use von_mises::VonMises;
pub use wrapped_normal::WrappedNormal;

/// Moduli within this distance of 0 or 1 are treated as degenerate by the
/// moment-matching constructors.
pub const MOMENT_EPS: f64 = 1e-14;

/// Reduce any real number into `[0, 2π)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce any real number into `[-π, π)`.
#[inline]
pub fn wrap_signed(x: f64) -> f64 {
    let r = wrap_angle(x + PI) - PI;
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// A point on the unit circle, stored in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Self {
        Angle(wrap_angle(radians))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `exp(i·n·self)`.
    pub fn phasor(self, n: i32) -> ComplexValue {
        ComplexValue::from_polar(1.0, f64::from(n) * self.0)
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::new(x)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

/// First and (optionally) second circular moment of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularMoments {
    pub m1: ComplexValue,
    pub m2: Option<ComplexValue>,
}

impl CircularMoments {
    pub fn new(m1: ComplexValue, m2: Option<ComplexValue>) -> Result<Self> {
        let bad = |m: ComplexValue| !(m.norm() <= 1.0 + 1e-12) || !m.re.is_finite();
        if bad(m1) || m2.is_some_and(bad) {
            return Err(Error::Domain(format!(
                "circular moments must have modulus <= 1: m1 = {m1}, m2 = {m2:?}"
            )));
        }
        Ok(CircularMoments { m1, m2 })
    }

    pub fn first(m1: ComplexValue) -> Result<Self> {
        Self::new(m1, None)
    }

    /// Moments of a point mass at `at`.
    pub fn point_mass(at: f64) -> Self {
        CircularMoments {
            m1: ComplexValue::from_polar(1.0, at),
            m2: Some(ComplexValue::from_polar(1.0, 2.0 * at)),
        }
    }

    /// Circular mean `atan2(Im m1, Re m1)` reduced into `[0, 2π)`.
    pub fn mean_direction(&self) -> f64 {
        wrap_angle(self.m1.arg())
    }
}

/// Densities with closed-form circular moments.
pub trait CircularDensity {
    /// Probability density at `x` (any real, interpreted modulo 2π).
    fn pdf(&self, x: f64) -> f64;

    /// Natural logarithm of the density.
    fn ln_pdf(&self, x: f64) -> f64 {
        self.pdf(x).ln()
    }

    /// `m_n = E[exp(inx)]`; `moment(0) == 1`.
    fn moment(&self, n: u32) -> ComplexValue;

    /// Location parameter in `[0, 2π)`.
    fn location(&self) -> f64;

    fn moments(&self) -> CircularMoments {
        CircularMoments {
            m1: self.moment(1),
            m2: Some(self.moment(2)),
        }
    }
}

/// Random sampling; deterministic for a fixed seed.
pub trait RandomDraw {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64;

    /// `count` draws from a ChaCha8 stream seeded with `seed`.
    fn draw_random(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.draw(&mut rng)).collect()
    }
}

/// A circular density used as a noise term or as a prior.
#[derive(Debug, Clone, PartialEq)]
pub enum CircularDistribution {
    WrappedNormal(WrappedNormal),
    VonMises(VonMises),
    Dirac(WrappedDiracMixture),
}

impl CircularDistribution {
    pub fn moment(&self, n: u32) -> ComplexValue {
        match self {
            CircularDistribution::WrappedNormal(d) => d.moment(n),
            CircularDistribution::VonMises(d) => d.moment(n),
            CircularDistribution::Dirac(d) => d.moment(n),
        }
    }

    pub fn moments(&self) -> CircularMoments {
        CircularMoments {
            m1: self.moment(1),
            m2: Some(self.moment(2)),
        }
    }
}

impl From<WrappedNormal> for CircularDistribution {
    fn from(d: WrappedNormal) -> Self {
        CircularDistribution::WrappedNormal(d)
    }
}

impl From<VonMises> for CircularDistribution {
    fn from(d: VonMises) -> Self {
        CircularDistribution::VonMises(d)
    }
}

impl From<WrappedDiracMixture> for CircularDistribution {
    fn from(d: WrappedDiracMixture) -> Self {
        CircularDistribution::Dirac(d)
    }
}

fn check_matchable(m1: ComplexValue) -> Result<f64> {
    let r = m1.norm();
    if !(r > MOMENT_EPS && r < 1.0 - MOMENT_EPS) {
        return Err(Error::DegenerateMoment { modulus: r });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_reduction() {
        assert_eq!(Angle::new(-1e-18).value(), 0.0);
        assert!((Angle::new(-0.5).value() - (TAU - 0.5)).abs() < 1e-15);
        assert!((Angle::new(7.0).value() - (7.0 - TAU)).abs() < 1e-15);
        assert!((wrap_signed(3.5) - (3.5 - TAU)).abs() < 1e-15);
        assert_eq!(wrap_signed(-PI), -PI);
    }

    #[test]
    fn moment_set_validation() {
        assert!(CircularMoments::first(ComplexValue::new(1.2, 0.0)).is_err());
        let p = CircularMoments::point_mass(1.0);
        assert!((p.m1.norm() - 1.0).abs() < 1e-15);
        assert!((p.mean_direction() - 1.0).abs() < 1e-15);
    }
}
