use rand::Rng;

use crate::distributions::{wrap_angle, RandomDraw};
use crate::error::{domain, Error, Result};
use crate::filter::Likelihood;
use crate::special::ComplexValue;

/// An update counts as degenerate when the particles other than the
/// heaviest carry less than this much mass.
pub const DEGENERACY_MASS: f64 = 1e-3;

/// Weighted particles on the circle; weights always sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    particles: Vec<f64>,
    weights: Vec<f64>,
}

/// Diagnostics of one reweigh-and-resample step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateReport {
    /// Effective sample size `1 / Σ w²` before resampling.
    pub effective_size: f64,
    pub degenerate: bool,
}

impl ParticleSet {
    /// Equally weighted particles.
    pub fn new(particles: Vec<f64>) -> Result<Self> {
        if particles.is_empty() {
            return domain("a particle set needs at least one particle");
        }
        let n = particles.len();
        Ok(ParticleSet {
            particles: particles.into_iter().map(wrap_angle).collect(),
            weights: vec![1.0 / n as f64; n],
        })
    }

    /// `count` independent draws from `prior`.
    pub fn sample<D: RandomDraw, R: Rng + ?Sized>(prior: &D, count: usize, rng: &mut R) -> Result<Self> {
        Self::new((0..count).map(|_| prior.draw(rng)).collect())
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn particles(&self) -> &[f64] {
        &self.particles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted first circular moment.
    pub fn first_moment(&self) -> ComplexValue {
        self.particles
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| ComplexValue::from_polar(w, x))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        wrap_angle(self.first_moment().arg())
    }

    /// Propagate every particle through `a` with its own noise draw.
    pub fn predict<D: RandomDraw, R: Rng + ?Sized>(
        &mut self,
        a: impl Fn(f64, f64) -> f64,
        noise: &D,
        rng: &mut R,
    ) {
        for x in &mut self.particles {
            let w = noise.draw(rng);
            *x = wrap_angle(a(*x, w));
        }
    }

    /// Reweigh by the likelihood, then resample systematically back to
    /// equal weights.
    ///
    /// Fails with [`Error::ParticleDegeneracy`] when no particle has
    /// positive finite weight.
    pub fn update<Z: ?Sized, L: Likelihood<Z> + ?Sized, R: Rng + ?Sized>(
        &mut self,
        likelihood: &L,
        z: &Z,
        rng: &mut R,
    ) -> Result<UpdateReport> {
        let ln_w: Vec<f64> = self
            .particles
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w.ln() + likelihood.ln_likelihood(z, x))
            .collect();
        let top = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() || ln_w.iter().any(|v| v.is_nan()) {
            return Err(Error::ParticleDegeneracy);
        }
        let mut w: Vec<f64> = ln_w.iter().map(|v| (v - top).exp()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);

        let heaviest = w.iter().copied().fold(0.0, f64::max);
        let report = UpdateReport {
            effective_size: 1.0 / w.iter().map(|v| v * v).sum::<f64>(),
            degenerate: 1.0 - heaviest < DEGENERACY_MASS,
        };
        let offspring = systematic_resample(&w, rng.random::<f64>());
        self.particles = offspring.iter().map(|&i| self.particles[i]).collect();
        let n = self.particles.len();
        self.weights = vec![1.0 / n as f64; n];
        Ok(report)
    }
}

/// Systematic resampling: indices selected by the comb
/// `(u + i) / n`, `i = 0..n`, with a single offset `u ∈ [0, 1)`.
pub fn systematic_resample(weights: &[f64], u: f64) -> Vec<usize> {
    let n = weights.len();
    let mut out = Vec::with_capacity(n);
    let mut cumulative = weights[0];
    let mut j = 0;
    for i in 0..n {
        let point = (u + i as f64) / n as f64;
        while point > cumulative && j + 1 < n {
            j += 1;
            cumulative += weights[j];
        }
        out.push(j);
    }
    out
}
