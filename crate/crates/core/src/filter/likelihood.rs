use std::f64::consts::TAU;

use nalgebra::{Matrix2, Vector2};

use crate::distributions::CircularDensity;
use crate::error::{domain, Result};

/// Measurement likelihood `f(z | x)`, evaluated in log space.
///
/// `-inf` marks zero likelihood; values must never be NaN.
pub trait Likelihood<Z: ?Sized> {
    fn ln_likelihood(&self, z: &Z, x: f64) -> f64;

    fn likelihood(&self, z: &Z, x: f64) -> f64 {
        self.ln_likelihood(z, x).exp()
    }
}

/// Adapts a closure returning `ln f(z | x)`.
#[derive(Debug, Clone, Copy)]
pub struct LogLikelihoodFn<F>(pub F);

impl<Z: ?Sized, F: Fn(&Z, f64) -> f64> Likelihood<Z> for LogLikelihoodFn<F> {
    fn ln_likelihood(&self, z: &Z, x: f64) -> f64 {
        (self.0)(z, x)
    }
}

/// Density of an additive measurement noise `v = z - h(x)`.
pub trait MeasurementNoise<Z> {
    fn ln_pdf_residual(&self, z: &Z, predicted: &Z) -> f64;
}

/// Circular noise on an angle measurement; the residual wraps.
impl<D: CircularDensity> MeasurementNoise<f64> for D {
    fn ln_pdf_residual(&self, z: &f64, predicted: &f64) -> f64 {
        self.ln_pdf(z - predicted)
    }
}

/// Zero-mean bivariate Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianNoise2 {
    precision: Matrix2<f64>,
    ln_norm: f64,
}

impl GaussianNoise2 {
    /// `cov` must be symmetric positive definite.
    pub fn new(cov: Matrix2<f64>) -> Result<Self> {
        if (cov[(0, 1)] - cov[(1, 0)]).abs() > 1e-12 * cov.abs().max() {
            return domain("noise covariance must be symmetric");
        }
        let Some(chol) = cov.cholesky() else {
            return domain("noise covariance must be positive definite");
        };
        let det = cov.determinant();
        Ok(GaussianNoise2 {
            precision: chol.inverse(),
            ln_norm: -(TAU.ln()) - 0.5 * det.ln(),
        })
    }

    /// `N(0, η I)`.
    pub fn isotropic(eta: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return domain(format!("noise variance must be positive, got {eta}"));
        }
        Self::new(Matrix2::identity() * eta)
    }
}

impl MeasurementNoise<[f64; 2]> for GaussianNoise2 {
    fn ln_pdf_residual(&self, z: &[f64; 2], predicted: &[f64; 2]) -> f64 {
        let r = Vector2::new(z[0] - predicted[0], z[1] - predicted[1]);
        self.ln_norm - 0.5 * (r.transpose() * self.precision * r)[(0, 0)]
    }
}

/// `f(z | x) = f^v(z - h(x))`.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveLikelihood<H, N> {
    pub h: H,
    pub noise: N,
}

impl<Z, H, N> Likelihood<Z> for AdditiveLikelihood<H, N>
where
    H: Fn(f64) -> Z,
    N: MeasurementNoise<Z>,
{
    fn ln_likelihood(&self, z: &Z, x: f64) -> f64 {
        self.noise.ln_pdf_residual(z, &(self.h)(x))
    }
}

/// Likelihood of the additive model `z = h(x) + v`.
pub fn make_additive_likelihood<Z, H, N>(h: H, noise: N) -> AdditiveLikelihood<H, N>
where
    H: Fn(f64) -> Z,
    N: MeasurementNoise<Z>,
{
    AdditiveLikelihood { h, noise }
}

/// `[cos x, sin x]`.
pub fn unit_circle(x: f64) -> [f64; 2] {
    let (s, c) = x.sin_cos();
    [c, s]
}
