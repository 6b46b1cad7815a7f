//! Recursive Bayesian filtering of a circular state.
//!
//! Prediction and update are free functions over an immutable
//! [`FilterState`]; [`CircularFilter`] bundles a state with its sampler and
//! progression settings for step-by-step use.

mod likelihood;
mod predict;
mod update;

use crate::distributions::{
    CircularDensity, CircularMoments, VonMises, WrappedDiracMixture, WrappedNormal,
    DEFAULT_PRODUCT_TRUNCATION,
};
use crate::error::{Error, Result};
use crate::sampling::Sampler;
use crate::special::ComplexValue;

pub use likelihood::{
    make_additive_likelihood, unit_circle, AdditiveLikelihood, GaussianNoise2, Likelihood, LogLikelihoodFn,
    MeasurementNoise,
};
pub use predict::{
    predict_arbitrary, predict_identity, predict_nonlinear_additive, DiscreteNoise, SystemModel,
};
pub use update::{update_identity, update_progressive, ProgressionTrace, MAX_PROGRESSION_STEPS};

/// Default threshold on the post-reweigh min/max weight ratio.
pub const DEFAULT_PROGRESSION_THRESHOLD: f64 = 0.2;

/// Which family a filter fits to the result of each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    WrappedNormal,
    VonMises,
    /// Retain the first two circular moments without fitting a density.
    Moments,
}

/// The current estimate. Exactly one representation is active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterState {
    WrappedNormal(WrappedNormal),
    VonMises(VonMises),
    Moments(CircularMoments),
}

impl FilterState {
    pub fn backend(&self) -> Backend {
        match self {
            FilterState::WrappedNormal(_) => Backend::WrappedNormal,
            FilterState::VonMises(_) => Backend::VonMises,
            FilterState::Moments(_) => Backend::Moments,
        }
    }

    pub fn moments(&self) -> CircularMoments {
        match self {
            FilterState::WrappedNormal(d) => d.moments(),
            FilterState::VonMises(d) => d.moments(),
            FilterState::Moments(m) => *m,
        }
    }

    pub fn first_moment(&self) -> ComplexValue {
        self.moments().m1
    }

    /// Circular mean in `[0, 2π)`.
    pub fn mean(&self) -> f64 {
        match self {
            FilterState::WrappedNormal(d) => d.location(),
            FilterState::VonMises(d) => d.location(),
            FilterState::Moments(m) => m.mean_direction(),
        }
    }

    /// Fit `moments` with the given backend by first-moment matching.
    pub fn fit(backend: Backend, moments: CircularMoments) -> Result<FilterState> {
        Ok(match backend {
            Backend::WrappedNormal => FilterState::WrappedNormal(WrappedNormal::from_moment(moments.m1)?),
            Backend::VonMises => FilterState::VonMises(VonMises::from_moment(moments.m1)?),
            Backend::Moments => FilterState::Moments(CircularMoments::new(moments.m1, moments.m2)?),
        })
    }

    /// Fit a Dirac mixture with the given backend.
    pub fn fit_mixture(backend: Backend, wd: &WrappedDiracMixture) -> Result<FilterState> {
        Self::fit(backend, wd.moments())
    }
}

impl From<WrappedNormal> for FilterState {
    fn from(d: WrappedNormal) -> Self {
        FilterState::WrappedNormal(d)
    }
}

impl From<VonMises> for FilterState {
    fn from(d: VonMises) -> Self {
        FilterState::VonMises(d)
    }
}

impl From<CircularMoments> for FilterState {
    fn from(m: CircularMoments) -> Self {
        FilterState::Moments(m)
    }
}

/// A circular filter: current state plus the settings its steps use.
#[derive(Debug, Clone)]
pub struct CircularFilter {
    state: FilterState,
    pub sampler: Sampler,
    pub progression_threshold: f64,
    pub product_truncation: u32,
}

impl CircularFilter {
    /// Defaults: 5-component sampling with `λ = 0.5`, `R = 0.2`, and a
    /// 5 × 5 product truncation.
    pub fn new(initial: impl Into<FilterState>) -> Self {
        CircularFilter {
            state: initial.into(),
            sampler: Sampler::default(),
            progression_threshold: DEFAULT_PROGRESSION_THRESHOLD,
            product_truncation: DEFAULT_PRODUCT_TRUNCATION,
        }
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn with_progression_threshold(mut self, r: f64) -> Self {
        self.progression_threshold = r;
        self
    }

    pub fn state(&self) -> &FilterState {
        &self.state
    }

    pub fn set_state(&mut self, state: impl Into<FilterState>) {
        self.state = state.into();
    }

    pub fn mean(&self) -> f64 {
        self.state.mean()
    }

    /// Prediction with any of the supported system models.
    pub fn predict(&mut self, model: &SystemModel) -> Result<()> {
        self.state = match model {
            SystemModel::Identity { noise } => predict_identity(&self.state, noise)?,
            SystemModel::Additive { function, noise } => {
                predict_nonlinear_additive(&self.state, function.as_ref(), noise, &self.sampler)?
            }
            SystemModel::Arbitrary { function, noise } => {
                predict_arbitrary(&self.state, function.as_ref(), noise, &self.sampler)?
            }
        };
        Ok(())
    }

    /// Closed-form update for `z = x + v` with circular `v`.
    pub fn update_identity(
        &mut self,
        z: f64,
        noise: &crate::distributions::CircularDistribution,
    ) -> Result<()> {
        self.state = update_identity(&self.state, z, noise, self.product_truncation)?;
        Ok(())
    }

    /// Progressive update for an arbitrary likelihood.
    pub fn update_progressive<Z: ?Sized, L: Likelihood<Z> + ?Sized>(
        &mut self,
        z: &Z,
        likelihood: &L,
    ) -> Result<ProgressionTrace> {
        let (state, trace) = update_progressive(
            &self.state,
            z,
            likelihood,
            self.progression_threshold,
            &self.sampler,
        )?;
        self.state = state;
        Ok(trace)
    }
}

pub(crate) fn unsupported<T>(what: impl Into<String>) -> Result<T> {
    Err(Error::Unsupported(what.into()))
}
