use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_matchable, wrap_angle, wrap_signed, CircularDensity, RandomDraw, VonMises};
use crate::error::{domain, Result};
use crate::special::{bessel_ratio, bessel_ratio_inv, ComplexValue};

/// Wrapped normal density `WN(mu, sigma)`: a Gaussian wrapped around the
/// circle with overlapping mass summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedNormal {
    mu: f64,
    sigma: f64,
}

impl WrappedNormal {
    /// `mu` is reduced into `[0, 2π)`; `sigma` must be positive and finite.
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return domain(format!("WN sigma must be positive and finite, got {sigma}"));
        }
        if !mu.is_finite() {
            return domain(format!("WN mu must be finite, got {mu}"));
        }
        Ok(WrappedNormal {
            mu: wrap_angle(mu),
            sigma,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Number of wrapping terms on each side of the central one.
    ///
    /// With the offset reduced to `[-π, π]`, the first omitted term sits at
    /// least `(2K+1)π ≥ 7.5σ` away, so the omitted tail is below `1e-12`.
    pub fn wrap_terms(&self) -> i32 {
        let k = (7.5 * self.sigma / TAU).ceil() as i32 + 1;
        k.max(3)
    }

    /// The WN with first circular moment `m1`:
    /// `WN(atan2(Im m1, Re m1), sqrt(-2 ln |m1|))`.
    pub fn from_moment(m1: ComplexValue) -> Result<Self> {
        let r = check_matchable(m1)?;
        let sigma = (-2.0 * r.ln()).sqrt();
        WrappedNormal::new(m1.arg(), sigma)
    }

    /// The WN with the same first moment as `vm`.
    pub fn from_von_mises(vm: &VonMises) -> Result<Self> {
        let a = bessel_ratio(vm.kappa())?;
        let r = check_matchable(ComplexValue::new(a, 0.0))?;
        WrappedNormal::new(vm.mu(), (-2.0 * r.ln()).sqrt())
    }

    /// The VM with the same first moment, `VM(mu, A⁻¹(exp(-σ²/2)))`.
    pub fn to_von_mises(&self) -> Result<VonMises> {
        let r = (-0.5 * self.sigma * self.sigma).exp();
        let r = check_matchable(ComplexValue::new(r, 0.0))?;
        VonMises::new(self.mu, bessel_ratio_inv(r)?)
    }

    /// Density of `x ↦ f(c - x)`: location `c - mu`, same spread.
    pub fn mirror_shift(&self, c: f64) -> Self {
        WrappedNormal {
            mu: wrap_angle(c - self.mu),
            sigma: self.sigma,
        }
    }
}

impl CircularDensity for WrappedNormal {
    fn pdf(&self, x: f64) -> f64 {
        let d = wrap_signed(x - self.mu);
        let two_var = 2.0 * self.sigma * self.sigma;
        let k_max = self.wrap_terms();
        let sum: f64 = (-k_max..=k_max)
            .map(|k| {
                let t = d + TAU * f64::from(k);
                (-t * t / two_var).exp()
            })
            .sum();
        sum / ((2.0 * PI).sqrt() * self.sigma)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        let d = wrap_signed(x - self.mu);
        let two_var = 2.0 * self.sigma * self.sigma;
        let k_max = self.wrap_terms();
        // k = 0 dominates for d in [-π, π)
        let lead = -d * d / two_var;
        let rest: f64 = (-k_max..=k_max)
            .filter(|&k| k != 0)
            .map(|k| {
                let t = d + TAU * f64::from(k);
                ((d * d - t * t) / two_var).exp()
            })
            .sum();
        lead + rest.ln_1p() - ((2.0 * PI).sqrt() * self.sigma).ln()
    }

    fn moment(&self, n: u32) -> ComplexValue {
        let n = f64::from(n);
        ComplexValue::from_polar((-0.5 * n * n * self.sigma * self.sigma).exp(), n * self.mu)
    }

    fn location(&self) -> f64 {
        self.mu
    }
}

impl RandomDraw for WrappedNormal {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        wrap_angle(self.mu + self.sigma * z)
    }
}
