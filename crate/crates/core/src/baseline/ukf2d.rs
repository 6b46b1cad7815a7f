use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use super::{sigma_points, GaussianState};
use crate::error::{Error, Result};

/// Mean norms below this cannot be projected to the unit circle.
const PROJECTION_MIN_NORM: f64 = 1e-12;

/// UKF on the embedded state `[cos θ, sin θ]`. Only the mean is projected
/// back to the unit circle after each step; the covariance is kept as the
/// transform produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ukf2d {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
}

impl Ukf2d {
    /// Starts from `mean`, projected to the unit circle, with a covariance
    /// in the plane.
    pub fn new(mean: Vector2<f64>, cov: Matrix2<f64>) -> Result<Self> {
        let s = GaussianState::new(mean, cov)?;
        let mut f = Ukf2d {
            mean: s.mean,
            cov: s.cov,
        };
        f.project()?;
        Ok(f)
    }

    /// Embedding of `WN(θ, σ)`-like uncertainty: covariance of
    /// `[cos x, sin x]` for `x ~ N(θ, σ²)`.
    pub fn from_angle(theta: f64, sigma: f64) -> Result<Self> {
        let s2 = sigma * sigma;
        let (s, c) = theta.sin_cos();
        let e1 = (-0.5 * s2).exp();
        let e4 = (-2.0 * s2).exp();
        // E[cos²x], E[sin²x], E[cos x sin x] minus the outer product of the mean
        let cc = 0.5 * (1.0 + e4 * (2.0 * theta).cos());
        let ss = 0.5 * (1.0 - e4 * (2.0 * theta).cos());
        let cs = 0.5 * e4 * (2.0 * theta).sin();
        let m = Vector2::new(c * e1, s * e1);
        let cov = Matrix2::new(cc, cs, cs, ss) - m * m.transpose();
        Self::new(Vector2::new(c, s), cov)
    }

    pub fn angle(&self) -> f64 {
        crate::distributions::wrap_angle(self.mean[1].atan2(self.mean[0]))
    }

    fn project(&mut self) -> Result<()> {
        let n = self.mean.norm();
        if !(n >= PROJECTION_MIN_NORM) {
            return Err(Error::Numerical(format!(
                "mean {:?} too close to the origin to project",
                self.mean
            )));
        }
        self.mean /= n;
        Ok(())
    }

    /// Prediction for `θ ↦ a(θ) + w` with `w ~ N(0, noise_var)`.
    ///
    /// The rotation noise enters through an augmented sigma-point set over
    /// `[x, w]`; each point keeps its radius and rotates its angle.
    pub fn predict(&mut self, a: impl Fn(f64) -> f64, noise_var: f64) -> Result<()> {
        self.predict_arbitrary(|theta, w| a(theta) + w, noise_var)
    }

    /// Prediction for `θ ↦ a(θ, w)` with `w ~ N(0, noise_var)`.
    pub fn predict_arbitrary(&mut self, a: impl Fn(f64, f64) -> f64, noise_var: f64) -> Result<()> {
        let mut aug_mean = Vector3::zeros();
        aug_mean.fixed_rows_mut::<2>(0).copy_from(&self.mean);
        let mut aug_cov = Matrix3::zeros();
        aug_cov.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.cov);
        aug_cov[(2, 2)] = noise_var;

        let (points, weights) = if noise_var > 0.0 {
            sigma_points(&aug_mean, &aug_cov)?
        } else {
            let (p, w) = sigma_points(&self.mean, &self.cov)?;
            (p.into_iter().map(|v| Vector3::new(v[0], v[1], 0.0)).collect(), w)
        };
        let ys: Vec<Vector2<f64>> = points
            .iter()
            .map(|p| {
                let r = p[0].hypot(p[1]);
                let theta = p[1].atan2(p[0]);
                let (s, c) = a(theta, p[2]).sin_cos();
                Vector2::new(r * c, r * s)
            })
            .collect();
        let mean: Vector2<f64> = ys.iter().zip(&weights).map(|(y, w)| y * *w).sum();
        let cov: Matrix2<f64> = ys
            .iter()
            .zip(&weights)
            .map(|(y, w)| (y - mean) * (y - mean).transpose() * *w)
            .sum();
        self.mean = mean;
        self.cov = 0.5 * (cov + cov.transpose());
        self.project()
    }

    /// Linear update for `z = x + v`, `v ~ N(0, meas_cov)`.
    pub fn update(&mut self, z: &Vector2<f64>, meas_cov: &Matrix2<f64>) -> Result<()> {
        let s = self.cov + meas_cov;
        let s_inv = s
            .try_inverse()
            .ok_or_else(|| Error::Numerical("innovation covariance is singular".into()))?;
        let gain = self.cov * s_inv;
        self.mean += gain * (z - self.mean);
        let cov = (Matrix2::identity() - gain) * self.cov;
        self.cov = 0.5 * (cov + cov.transpose());
        self.project()
    }
}
