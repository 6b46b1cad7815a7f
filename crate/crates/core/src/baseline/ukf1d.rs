use nalgebra::{Matrix1, SMatrix, SVector, Vector1};

use super::{sigma_points, GaussianState};
use crate::distributions::{wrap_angle, wrap_signed};
use crate::error::{Error, Result};

/// UKF on the raw angle. The mean is reduced into `[0, 2π)` after every
/// step, and circular measurement components are moved by a multiple of
/// 2π to within π of their prediction before the gain is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ukf1d {
    pub mean: f64,
    pub var: f64,
}

impl Ukf1d {
    pub fn new(mean: f64, var: f64) -> Result<Self> {
        if !(var > 0.0) || !var.is_finite() {
            return Err(Error::Numerical(format!("variance must be positive, got {var}")));
        }
        Ok(Ukf1d {
            mean: wrap_angle(mean),
            var,
        })
    }

    pub fn state(&self) -> GaussianState<1> {
        GaussianState {
            mean: Vector1::new(self.mean),
            cov: Matrix1::new(self.var),
        }
    }

    fn points(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if !(self.var > 0.0) || !self.var.is_finite() {
            return Err(Error::Numerical(format!(
                "variance must be positive, got {}",
                self.var
            )));
        }
        let (p, w) = sigma_points(&Vector1::new(self.mean), &Matrix1::new(self.var))?;
        Ok((p.into_iter().map(|v| v[0]).collect(), w))
    }

    /// `x ↦ a(x) + w` with `Var(w) = noise_var`.
    pub fn predict(&mut self, a: impl Fn(f64) -> f64, noise_var: f64) -> Result<()> {
        let (points, weights) = self.points()?;
        let center = a(points[0]);
        // propagated points stay on the branch of the propagated center
        let ys: Vec<f64> = points
            .iter()
            .map(|&x| center + wrap_signed(a(x) - center))
            .collect();
        let mean: f64 = ys.iter().zip(&weights).map(|(y, w)| w * y).sum();
        let var: f64 = ys
            .iter()
            .zip(&weights)
            .map(|(y, w)| w * (y - mean) * (y - mean))
            .sum::<f64>()
            + noise_var;
        *self = Ukf1d::new(mean, var)?;
        Ok(())
    }

    /// Update with an angle measurement `z = h(x) + v`, `Var(v) = meas_var`.
    pub fn update_angle(&mut self, z: f64, h: impl Fn(f64) -> f64, meas_var: f64) -> Result<()> {
        self.update::<1>(
            &Vector1::new(z),
            |x| Vector1::new(h(x)),
            &Matrix1::new(meas_var),
            &[true],
        )
    }

    /// Update with a measurement vector whose components listed in
    /// `circular` are angles.
    pub fn update<const M: usize>(
        &mut self,
        z: &SVector<f64, M>,
        h: impl Fn(f64) -> SVector<f64, M>,
        meas_cov: &SMatrix<f64, M, M>,
        circular: &[bool; M],
    ) -> Result<()> {
        let (points, weights) = self.points()?;
        let center = h(points[0]);
        let unwrap = |mut v: SVector<f64, M>| {
            for i in 0..M {
                if circular[i] {
                    v[i] = center[i] + wrap_signed(v[i] - center[i]);
                }
            }
            v
        };
        let ys: Vec<SVector<f64, M>> = points.iter().map(|&x| unwrap(h(x))).collect();
        let z_hat: SVector<f64, M> = ys.iter().zip(&weights).map(|(y, w)| y * *w).sum();

        let mut s = *meas_cov;
        let mut cross = SMatrix::<f64, 1, M>::zeros();
        for ((y, w), x) in ys.iter().zip(&weights).zip(&points) {
            let dy = y - z_hat;
            s += dy * dy.transpose() * *w;
            cross += (dy.transpose()) * (*w * (x - self.mean));
        }
        let s_inv = s
            .try_inverse()
            .ok_or_else(|| Error::Numerical("innovation covariance is singular".into()))?;
        let gain = cross * s_inv;

        let mut innovation = z - z_hat;
        for i in 0..M {
            if circular[i] {
                innovation[i] = wrap_signed(innovation[i]);
            }
        }
        let mean = self.mean + (gain * innovation)[0];
        let var = self.var - (gain * s * gain.transpose())[0];
        *self = Ukf1d::new(mean, var)?;
        Ok(())
    }
}

/// `z` moved by a multiple of 2π to lie within π of `reference`.
pub fn reposition(z: f64, reference: f64) -> f64 {
    reference + wrap_signed(z - reference)
}
