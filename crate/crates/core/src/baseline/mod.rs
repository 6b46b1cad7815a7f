//! Baseline estimators that ignore (or only patch over) the circular
//! geometry: a 1D UKF with wrapping, a 2D UKF on the embedded unit vector,
//! and a sequential importance resampling particle filter.

mod particle;
mod ukf1d;
mod ukf2d;

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};

pub use particle::{systematic_resample, ParticleSet, UpdateReport, DEGENERACY_MASS};
pub use ukf1d::{reposition, Ukf1d};
pub use ukf2d::Ukf2d;

/// Spread parameter of the symmetric sigma-point set.
pub const UT_KAPPA: f64 = 1.0;

/// Gaussian mean and covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState<const N: usize> {
    pub mean: SVector<f64, N>,
    pub cov: SMatrix<f64, N, N>,
}

impl<const N: usize> GaussianState<N> {
    /// `cov` must be symmetric within `1e-12` (relative) and positive
    /// semidefinite within `-1e-12`.
    pub fn new(mean: SVector<f64, N>, cov: SMatrix<f64, N, N>) -> Result<Self> {
        let scale = cov.abs().max().max(1.0);
        if (cov - cov.transpose()).abs().max() > 1e-12 * scale {
            return Err(Error::Numerical("covariance is not symmetric".into()));
        }
        let shifted = cov + SMatrix::<f64, N, N>::identity() * (1e-12 * scale);
        if shifted.cholesky().is_none() {
            return Err(Error::Numerical("covariance is not positive semidefinite".into()));
        }
        Ok(GaussianState { mean, cov })
    }
}

/// Symmetric `2N + 1` sigma points with weights `κ/(N+κ)` and
/// `1/(2(N+κ))`; the matrix square root is a Cholesky factor.
pub(crate) fn sigma_points<const N: usize>(
    mean: &SVector<f64, N>,
    cov: &SMatrix<f64, N, N>,
) -> Result<(Vec<SVector<f64, N>>, Vec<f64>)> {
    let n = N as f64;
    let scaled = cov * (n + UT_KAPPA);
    let chol = scaled
        .cholesky()
        .ok_or_else(|| Error::Numerical("covariance not positive definite".into()))?;
    let l = chol.l();
    let mut points = Vec::with_capacity(2 * N + 1);
    let mut weights = Vec::with_capacity(2 * N + 1);
    points.push(*mean);
    weights.push(UT_KAPPA / (n + UT_KAPPA));
    for i in 0..N {
        let col = l.column(i).into_owned();
        points.push(mean + col);
        points.push(mean - col);
        weights.push(0.5 / (n + UT_KAPPA));
        weights.push(0.5 / (n + UT_KAPPA));
    }
    Ok((points, weights))
}
