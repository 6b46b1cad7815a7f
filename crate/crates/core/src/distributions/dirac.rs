use super::{wrap_angle, CircularMoments};
use crate::error::{domain, Error, Result};
use crate::special::ComplexValue;

/// Weighted point masses on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct WrappedDiracMixture {
    weights: Vec<f64>,
    positions: Vec<f64>,
}

impl WrappedDiracMixture {
    /// Positions are reduced into `[0, 2π)` and weights normalized to sum to
    /// one. Every weight must be positive and finite.
    pub fn new(weights: Vec<f64>, positions: Vec<f64>) -> Result<Self> {
        if weights.len() != positions.len() {
            return Err(Error::LengthMismatch(weights.len(), positions.len()));
        }
        if weights.is_empty() {
            return domain("a wrapped Dirac mixture needs at least one component");
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return domain(format!("Dirac weights must be positive and finite, got {w}"));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return domain("Dirac positions must be finite");
        }
        let total: f64 = weights.iter().sum();
        Ok(WrappedDiracMixture {
            weights: weights.into_iter().map(|w| w / total).collect(),
            positions: positions.into_iter().map(wrap_angle).collect(),
        })
    }

    /// `L` components with equal weight.
    pub fn equally_weighted(positions: Vec<f64>) -> Result<Self> {
        let n = positions.len();
        Self::new(vec![1.0; n], positions)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights.iter().copied().zip(self.positions.iter().copied())
    }

    /// `Σ γ_j exp(i n β_j)`.
    pub fn moment(&self, n: u32) -> ComplexValue {
        let n = f64::from(n);
        self.iter().map(|(w, b)| ComplexValue::from_polar(w, n * b)).sum()
    }

    pub fn moments(&self) -> CircularMoments {
        CircularMoments {
            m1: self.moment(1),
            m2: Some(self.moment(2)),
        }
    }

    /// Apply `f` to every position, keeping the weights.
    pub fn map_positions(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.weights.clone(),
            self.positions.iter().map(|&b| f(b)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_component_moment() {
        let d = WrappedDiracMixture::new(vec![1.0], vec![0.8]).unwrap();
        for n in 1..4 {
            let expected = ComplexValue::from_polar(1.0, 0.8 * n as f64);
            assert!((d.moment(n) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn normalizes_and_validates() {
        let d = WrappedDiracMixture::new(vec![2.0, 6.0], vec![-1.0, 1.0]).unwrap();
        assert_eq!(d.weights(), &[0.25, 0.75]);
        assert!(d.positions()[0] > 5.0);
        assert!(WrappedDiracMixture::new(vec![1.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(WrappedDiracMixture::new(vec![1.0], vec![0.0, 1.0]).is_err());
        assert!(WrappedDiracMixture::new(vec![], vec![]).is_err());
    }
}
