use super::FilterState;
use crate::distributions::{
    convolve_moments, vm_convolve, wn_convolve, CircularDistribution, WrappedDiracMixture,
};
use crate::error::{domain, Error, Result};
use crate::sampling::Sampler;

/// System function of an additive model, `x ↦ a(x)`.
pub type AdditiveFn = dyn Fn(f64) -> f64 + Send + Sync;
/// System function of a general model, `(x, w) ↦ a(x, w)`.
pub type ArbitraryFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// `x_{k+1} = a(x_k, w_k)` in its three supported shapes.
pub enum SystemModel {
    /// `x + w`.
    Identity { noise: CircularDistribution },
    /// `a(x) + w`.
    Additive {
        function: Box<AdditiveFn>,
        noise: CircularDistribution,
    },
    /// `a(x, w)` with a discrete noise approximation.
    Arbitrary {
        function: Box<ArbitraryFn>,
        noise: DiscreteNoise,
    },
}

impl std::fmt::Debug for SystemModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SystemModel::Identity { noise } => f.debug_struct("Identity").field("noise", noise).finish(),
            SystemModel::Additive { noise, .. } => f.debug_struct("Additive").field("noise", noise).finish(),
            SystemModel::Arbitrary { noise, .. } => {
                f.debug_struct("Arbitrary").field("noise", noise).finish()
            }
        }
    }
}

/// Weighted noise values, not necessarily angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteNoise {
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl DiscreteNoise {
    /// Weights are normalized; all must be positive and finite.
    pub fn new(weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if weights.len() != values.len() {
            return Err(Error::LengthMismatch(weights.len(), values.len()));
        }
        if weights.is_empty() {
            return domain("discrete noise needs at least one value");
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return domain("discrete noise weights must be positive and values finite");
        }
        let total: f64 = weights.iter().sum();
        Ok(DiscreteNoise {
            weights: weights.into_iter().map(|w| w / total).collect(),
            values,
        })
    }

    /// Deterministic samples of a circular noise density; a Dirac mixture
    /// is taken as is.
    pub fn from_circular(noise: &CircularDistribution, sampler: &Sampler) -> Result<Self> {
        let wd = match noise {
            CircularDistribution::Dirac(d) => d.clone(),
            other => sampler.sample(&other.moments())?,
        };
        Ok(DiscreteNoise {
            weights: wd.weights().to_vec(),
            values: wd.positions().to_vec(),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `x_{k+1} = x_k + w_k`: convolution of state and noise.
///
/// Same-family WN and VM pairs use their closed forms; every other pairing
/// goes through the moment product and a fit to the state's backend.
pub fn predict_identity(state: &FilterState, noise: &CircularDistribution) -> Result<FilterState> {
    match (state, noise) {
        (FilterState::WrappedNormal(s), CircularDistribution::WrappedNormal(n)) => {
            Ok(FilterState::WrappedNormal(wn_convolve(s, n)))
        }
        (FilterState::VonMises(s), CircularDistribution::VonMises(n)) => {
            Ok(FilterState::VonMises(vm_convolve(s, n)?))
        }
        _ => FilterState::fit(
            state.backend(),
            convolve_moments(&state.moments(), &noise.moments()),
        ),
    }
}

/// `x_{k+1} = a(x_k) + w_k`.
///
/// The state is sampled deterministically and pushed through `a`; the
/// propagated mixture's moments are multiplied with the noise moments and
/// fitted. Fitting after the product keeps a propagated point mass valid.
pub fn predict_nonlinear_additive<F: Fn(f64) -> f64 + ?Sized>(
    state: &FilterState,
    a: &F,
    noise: &CircularDistribution,
    sampler: &Sampler,
) -> Result<FilterState> {
    let wd = sampler.sample(&state.moments())?.map_positions(a)?;
    FilterState::fit(state.backend(), convolve_moments(&wd.moments(), &noise.moments()))
}

/// `x_{k+1} = a(x_k, w_k)`: Cartesian product of state and noise samples.
pub fn predict_arbitrary<F: Fn(f64, f64) -> f64 + ?Sized>(
    state: &FilterState,
    a: &F,
    noise: &DiscreteNoise,
    sampler: &Sampler,
) -> Result<FilterState> {
    let wd = sampler.sample(&state.moments())?;
    let n = wd.len() * noise.weights.len();
    let mut weights = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    for (gw, bw) in noise.weights.iter().zip(&noise.values) {
        for (g, b) in wd.iter() {
            weights.push(g * gw);
            positions.push(a(b, *bw));
        }
    }
    let propagated = WrappedDiracMixture::new(weights, positions)?;
    FilterState::fit_mixture(state.backend(), &propagated)
}
