use std::f64::consts::{PI, TAU};

use rand::Rng;

use super::{check_matchable, wrap_angle, CircularDensity, RandomDraw, WrappedNormal};
use crate::error::{domain, Result};
use crate::special::{bessel_i_scaled, bessel_ratio_inv, bessel_ratio_n, ComplexValue};

/// Von Mises density `VM(mu, kappa) ∝ exp(kappa cos(x - mu))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
}

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return domain(format!("VM kappa must be positive and finite, got {kappa}"));
        }
        if !mu.is_finite() {
            return domain(format!("VM mu must be finite, got {mu}"));
        }
        Ok(VonMises {
            mu: wrap_angle(mu),
            kappa,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `VM(atan2(Im m1, Re m1), A⁻¹(|m1|))`.
    pub fn from_moment(m1: ComplexValue) -> Result<Self> {
        let r = check_matchable(m1)?;
        VonMises::new(m1.arg(), bessel_ratio_inv(r)?)
    }

    pub fn from_wrapped_normal(wn: &WrappedNormal) -> Result<Self> {
        wn.to_von_mises()
    }

    pub fn to_wrapped_normal(&self) -> Result<WrappedNormal> {
        WrappedNormal::from_von_mises(self)
    }

    /// Density of `x ↦ f(c - x)`.
    pub fn mirror_shift(&self, c: f64) -> Self {
        VonMises {
            mu: wrap_angle(c - self.mu),
            kappa: self.kappa,
        }
    }

    fn ln_norm(&self) -> f64 {
        // ln(2π I0(κ)) = ln(2π e^{-κ}I0(κ)) + κ; the κ is folded into the exponent
        (TAU * bessel_i_scaled(0, self.kappa).expect("kappa > 0")).ln()
    }
}

impl CircularDensity for VonMises {
    fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        self.kappa * ((x - self.mu).cos() - 1.0) - self.ln_norm()
    }

    fn moment(&self, n: u32) -> ComplexValue {
        let r = bessel_ratio_n(n, self.kappa).expect("kappa > 0");
        ComplexValue::from_polar(r, f64::from(n) * self.mu)
    }

    fn location(&self) -> f64 {
        self.mu
    }
}

impl RandomDraw for VonMises {
    /// Best & Fisher rejection sampler with a wrapped Cauchy envelope.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let k = self.kappa;
        if k < 1e-8 {
            return rng.random::<f64>() * TAU;
        }
        let tau = 1.0 + (1.0 + 4.0 * k * k).sqrt();
        let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * k);
        let r = (1.0 + rho * rho) / (2.0 * rho);
        loop {
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            let z = (PI * u1).cos();
            let f = (1.0 + r * z) / (r + z);
            let c = k * (r - f);
            if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
                let u3: f64 = rng.random();
                let theta = f.clamp(-1.0, 1.0).acos();
                let signed = if u3 > 0.5 { theta } else { -theta };
                return wrap_angle(self.mu + signed);
            }
        }
    }
}
