use super::{unsupported, FilterState, Likelihood};
use crate::distributions::{
    vm_multiply, wn_multiply_moment_based, CircularDistribution, WrappedDiracMixture,
};
use crate::error::{domain, Error, Result};
use crate::sampling::Sampler;

/// Safety cap on partial steps per progressive update.
pub const MAX_PROGRESSION_STEPS: usize = 1000;

/// `z = x + v`: multiply the prior with the mirrored, shifted noise density.
///
/// The noise family must match the backend; the moment backend has no
/// closed-form product and is rejected.
pub fn update_identity(
    state: &FilterState,
    z: f64,
    noise: &CircularDistribution,
    trunc: u32,
) -> Result<FilterState> {
    match (state, noise) {
        (FilterState::WrappedNormal(p), CircularDistribution::WrappedNormal(n)) => Ok(
            FilterState::WrappedNormal(wn_multiply_moment_based(p, &n.mirror_shift(z), trunc)?),
        ),
        (FilterState::VonMises(p), CircularDistribution::VonMises(n)) => {
            Ok(FilterState::VonMises(vm_multiply(p, &n.mirror_shift(z))?))
        }
        (FilterState::Moments(_), _) => {
            unsupported("identity update needs a WN or VM state; use the progressive update")
        }
        _ => unsupported("identity update needs noise of the same family as the state"),
    }
}

/// Step sizes and post-reweigh weight ratios of one progressive update.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProgressionTrace {
    pub lambdas: Vec<f64>,
    /// `min γ / max γ` of the reweighed samples after each step.
    pub weight_ratios: Vec<f64>,
}

impl ProgressionTrace {
    pub fn steps(&self) -> usize {
        self.lambdas.len()
    }

    pub fn total(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// Whether the exponents sum to one and every step kept the ratio
    /// at or above `r`, both up to `tol`.
    pub fn satisfies(&self, r: f64, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol
            && self.lambdas.iter().all(|&l| l > 0.0 && l <= 1.0)
            && self.weight_ratios.iter().all(|&q| q >= r * (1.0 - tol))
    }
}

/// Progressive update: the likelihood is applied as `f^{λ_1} ⋯ f^{λ_s}`
/// with each `λ_n` small enough that the reweighed sample weights keep a
/// min/max ratio of at least `r`.
///
/// The estimate is resampled and refitted after every partial step.
pub fn update_progressive<Z: ?Sized, L: Likelihood<Z> + ?Sized>(
    state: &FilterState,
    z: &Z,
    likelihood: &L,
    r: f64,
    sampler: &Sampler,
) -> Result<(FilterState, ProgressionTrace)> {
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("progression threshold must lie in (0, 1), got {r}"));
    }
    let backend = state.backend();
    let mut current = *state;
    let mut trace = ProgressionTrace::default();
    let mut done = 0.0;

    loop {
        if trace.steps() == MAX_PROGRESSION_STEPS {
            return Err(Error::ProgressionStall(format!(
                "no convergence within {MAX_PROGRESSION_STEPS} steps, progress {done}"
            )));
        }
        let wd = sampler.sample(&current.moments())?;
        let ln_f: Vec<f64> = wd
            .positions()
            .iter()
            .map(|&b| likelihood.ln_likelihood(z, b))
            .collect();
        if ln_f.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::Numerical("likelihood returned NaN or +inf".into()));
        }
        let f_max = ln_f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if f_max == f64::NEG_INFINITY {
            return Err(Error::ZeroLikelihood);
        }
        let f_min = ln_f.iter().copied().fold(f64::INFINITY, f64::min);

        let remaining = 1.0 - done;
        let spread = f_max - f_min;
        let lambda = if spread <= 0.0 {
            remaining
        } else {
            let (g_min, g_max) = wd
                .weights()
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), &g| (lo.min(g), hi.max(g)));
            let bound = (r.ln() + (g_max / g_min).ln()) / -spread;
            if !(bound > 0.0) {
                return Err(Error::ProgressionStall(format!(
                    "step bound {bound} not positive (weight ratio {}, threshold {r})",
                    g_min / g_max
                )));
            }
            bound.min(remaining)
        };
        let last = lambda >= remaining;

        let ln_g: Vec<f64> = wd
            .iter()
            .zip(&ln_f)
            .map(|((g, _), lf)| g.ln() + lambda * lf)
            .collect();
        let top = ln_g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = ln_g.iter().map(|v| (v - top).exp()).collect();
        let w_min = weights.iter().copied().fold(f64::INFINITY, f64::min);
        // weights are scaled so the largest is exactly one
        trace.lambdas.push(lambda);
        trace.weight_ratios.push(w_min);

        let reweighed = WrappedDiracMixture::new(
            weights.into_iter().map(|w| w.max(f64::MIN_POSITIVE)).collect(),
            wd.positions().to_vec(),
        )?;
        current = FilterState::fit_mixture(backend, &reweighed)?;
        if last {
            return Ok((current, trace));
        }
        done += lambda;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{VonMises, WrappedNormal};
    use crate::filter::LogLikelihoodFn;
    use std::f64::consts::PI;

    #[test]
    fn vm_identity_update_adds_concentration() {
        let prior = FilterState::VonMises(VonMises::new(0.0, 1.0).unwrap());
        let noise = CircularDistribution::VonMises(VonMises::new(0.0, 2.0).unwrap());
        let post = update_identity(&prior, 0.0, &noise, 2).unwrap();
        let FilterState::VonMises(vm) = post else { panic!() };
        assert!(vm.mu().abs() < 1e-15 && (vm.kappa() - 3.0).abs() < 1e-14);

        let noise = CircularDistribution::VonMises(VonMises::new(0.0, 1.0).unwrap());
        assert_eq!(
            update_identity(&prior, PI, &noise, 2),
            Err(Error::DegenerateProduct)
        );
    }

    #[test]
    fn mismatched_families_rejected() {
        let prior = FilterState::VonMises(VonMises::new(0.0, 1.0).unwrap());
        let noise = CircularDistribution::WrappedNormal(WrappedNormal::new(0.0, 1.0).unwrap());
        assert!(matches!(
            update_identity(&prior, 0.0, &noise, 2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn flat_likelihood_is_one_step() {
        let prior = FilterState::WrappedNormal(WrappedNormal::new(1.0, 0.8).unwrap());
        let lik = LogLikelihoodFn(|_: &f64, _x: f64| -0.7);
        let (post, trace) = update_progressive(&prior, &0.0, &lik, 0.2, &Sampler::default()).unwrap();
        assert_eq!(trace.lambdas, vec![1.0]);
        assert!((post.first_moment() - prior.first_moment()).norm() < 1e-12);
    }

    #[test]
    fn zero_likelihood_reported() {
        let prior = FilterState::WrappedNormal(WrappedNormal::new(1.0, 0.8).unwrap());
        let lik = LogLikelihoodFn(|_: &f64, _x: f64| f64::NEG_INFINITY);
        assert_eq!(
            update_progressive(&prior, &0.0, &lik, 0.2, &Sampler::default()).unwrap_err(),
            Error::ZeroLikelihood
        );
    }

    #[test]
    fn narrow_likelihood_takes_several_steps() {
        let prior = FilterState::WrappedNormal(WrappedNormal::new(0.0, 1.0).unwrap());
        let lik = LogLikelihoodFn(|z: &f64, x: f64| -(1.0 - (x - z).cos()) / 0.01);
        let (_, trace) = update_progressive(&prior, &0.5, &lik, 0.2, &Sampler::default()).unwrap();
        assert!(trace.steps() > 1);
        assert!(trace.satisfies(0.2, 1e-12));
    }
}
