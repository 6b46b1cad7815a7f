use serde::Serialize;

use super::metrics::{numeric_kld_ln, periodic_integral_c, QUADRATURE_POINTS};
use crate::distributions::{CircularDensity, WrappedNormal};
use crate::error::Result;
use crate::sampling::{naive_wrapped_gaussian_samples, Sampler, DEFAULT_LAMBDA};
use crate::special::ComplexValue;

/// Sampling method compared in the propagation experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagationSampler {
    Wd3,
    Wd5,
    Naive,
}

impl PropagationSampler {
    pub const ALL: [PropagationSampler; 3] = [Self::Wd3, Self::Wd5, Self::Naive];

    pub fn name(self) -> &'static str {
        match self {
            Self::Wd3 => "wd3",
            Self::Wd5 => "wd5",
            Self::Naive => "naive",
        }
    }
}

/// One cell of the propagation experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagationRow {
    pub c: f64,
    pub sigma: f64,
    pub sampler: PropagationSampler,
    pub m1_error: f64,
    pub m2_error: f64,
    /// KLD from the true pushforward to the WN matched to the sampled `m1`.
    pub kld: f64,
}

/// `g(x) = x + c sin x`, a bijection of the circle for `|c| < 1`.
pub fn nonlinearity(c: f64) -> impl Fn(f64) -> f64 + Copy {
    move |x| x + c * x.sin()
}

/// Moments of the pushforward of `prior` through `g` as
/// `∫ e^{i n g(x)} f(x) dx`, which needs no inverse of `g`.
pub fn pushforward_moment(prior: &WrappedNormal, g: impl Fn(f64) -> f64, n: u32) -> ComplexValue {
    let k = f64::from(n);
    periodic_integral_c(
        |x| ComplexValue::from_polar(prior.pdf(x), k * g(x)),
        QUADRATURE_POINTS,
    )
}

/// KLD from the pushforward of `prior` through `g(x) = x + c sin x` to
/// `fit`, written as an integral over the prior:
/// `∫ f(x) [ln f(x) - ln g'(x) - ln q(g(x))] dx`.
pub fn pushforward_kld(prior: &WrappedNormal, c: f64, fit: &WrappedNormal) -> Result<f64> {
    let g = nonlinearity(c);
    numeric_kld_ln(
        |x| prior.ln_pdf(x),
        |x| fit.ln_pdf(g(x)) + (1.0 + c * x.cos()).ln(),
        QUADRATURE_POINTS,
    )
}

/// One `(c, σ, sampler)` cell with the prior `WN(0, σ)`.
pub fn propagation_cell(c: f64, sigma: f64, sampler: PropagationSampler) -> Result<PropagationRow> {
    let prior = WrappedNormal::new(0.0, sigma)?;
    let g = nonlinearity(c);
    let wd = match sampler {
        PropagationSampler::Wd3 => Sampler::Wd3.sample_density(&prior)?,
        PropagationSampler::Wd5 => Sampler::wd5(DEFAULT_LAMBDA).sample_density(&prior)?,
        PropagationSampler::Naive => naive_wrapped_gaussian_samples(&prior),
    }
    .map_positions(g)?;
    let (true1, true2) = (pushforward_moment(&prior, g, 1), pushforward_moment(&prior, g, 2));
    let m1 = wd.moment(1);
    let fit = WrappedNormal::from_moment(m1)?;
    Ok(PropagationRow {
        c,
        sigma,
        sampler,
        m1_error: (m1 - true1).norm(),
        m2_error: (wd.moment(2) - true2).norm(),
        kld: pushforward_kld(&prior, c, &fit)?,
    })
}

/// All cells in `c`-major, then `σ`, then sampler order.
pub fn run_propagation_experiment(
    c_grid: &[f64],
    sigmas: &[f64],
    samplers: &[PropagationSampler],
) -> Result<Vec<PropagationRow>> {
    use rayon::prelude::*;
    let cells: Vec<(f64, f64, PropagationSampler)> = c_grid
        .iter()
        .flat_map(|&c| {
            sigmas
                .iter()
                .flat_map(move |&s| samplers.iter().map(move |&m| (c, s, m)))
        })
        .collect();
    cells
        .par_iter()
        .map(|&(c, s, m)| propagation_cell(c, s, m))
        .collect()
}

/// `n` equispaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_is_exact_for_wd5() {
        let row = propagation_cell(0.0, 1.0, PropagationSampler::Wd5).unwrap();
        assert!(row.m1_error < 1e-9 && row.m2_error < 1e-9);
        assert!(row.kld < 1e-10);
    }

    #[test]
    fn wd3_is_worse_under_nonlinearity() {
        let a = propagation_cell(0.7, 1.0, PropagationSampler::Wd3).unwrap();
        let b = propagation_cell(0.7, 1.0, PropagationSampler::Wd5).unwrap();
        assert!(b.m1_error < a.m1_error);
        assert!(a.m2_error > 1e-6);
    }
}
