//! Convolution and multiplication of circular densities.

use std::f64::consts::TAU;

use super::{CircularMoments, VonMises, WrappedNormal};
use crate::error::{domain, Error, Result};
use crate::special::{bessel_ratio, bessel_ratio_inv, gaussian_segment_moment, ComplexValue};

/// Wrapping indices `j, k ∈ [-2, 2]`, i.e. 5 × 5 summands.
pub const DEFAULT_PRODUCT_TRUNCATION: u32 = 2;

/// Relative cancellation below which a VM product counts as uniform.
const PRODUCT_CANCELLATION: f64 = 1e-12;

/// Moments of the sum of two independent circular random variables:
/// `m_n = m_n(a) · m_n(b)`.
///
/// The second moment is carried only if both inputs carry it.
pub fn convolve_moments(a: &CircularMoments, b: &CircularMoments) -> CircularMoments {
    CircularMoments {
        m1: a.m1 * b.m1,
        m2: a.m2.zip(b.m2).map(|(x, y)| x * y),
    }
}

/// Exact WN convolution: locations add, variances add.
pub fn wn_convolve(a: &WrappedNormal, b: &WrappedNormal) -> WrappedNormal {
    WrappedNormal::new(a.mu() + b.mu(), a.sigma().hypot(b.sigma()))
        .expect("sum of valid WN parameters is valid")
}

/// VM convolution by first-moment matching: `κ = A⁻¹(A(κ₁)·A(κ₂))`.
pub fn vm_convolve(a: &VonMises, b: &VonMises) -> Result<VonMises> {
    let r = bessel_ratio(a.kappa())? * bessel_ratio(b.kappa())?;
    VonMises::new(a.mu() + b.mu(), bessel_ratio_inv(r)?)
}

/// Exact renormalized VM product.
///
/// Fails with [`Error::DegenerateProduct`] when the two concentration
/// vectors cancel, leaving a uniform density.
pub fn vm_multiply(a: &VonMises, b: &VonMises) -> Result<VonMises> {
    let m = ComplexValue::from_polar(a.kappa(), a.mu()) + ComplexValue::from_polar(b.kappa(), b.mu());
    let kappa = m.norm();
    if kappa <= PRODUCT_CANCELLATION * (a.kappa() + b.kappa()) {
        return Err(Error::DegenerateProduct);
    }
    VonMises::new(m.arg(), kappa)
}

/// WN product approximated through the VM family: convert both factors,
/// multiply exactly, convert back.
pub fn wn_multiply_via_vm(a: &WrappedNormal, b: &WrappedNormal) -> Result<WrappedNormal> {
    let p = vm_multiply(&a.to_von_mises()?, &b.to_von_mises()?)?;
    p.to_wrapped_normal()
}

/// First circular moment of the renormalized product `WN(a) · WN(b)`.
///
/// Each factor is expanded into its wrapped Gaussians with index in
/// `[-trunc, trunc]`; every pairwise Gaussian product is integrated exactly
/// over `[0, 2π)` with the complex error function.
pub fn wn_product_first_moment(a: &WrappedNormal, b: &WrappedNormal, trunc: u32) -> Result<ComplexValue> {
    if trunc == 0 {
        return domain("product truncation must be at least 1");
    }
    let (s1, s2) = (a.sigma() * a.sigma(), b.sigma() * b.sigma());
    let total = s1 + s2;
    let sigma = (s1 * s2 / total).sqrt();
    let t = trunc as i32;

    let mut terms = Vec::with_capacity(((2 * t + 1) * (2 * t + 1)) as usize);
    for j in -t..=t {
        let m1 = a.mu() + TAU * f64::from(j);
        for k in -t..=t {
            let m2 = b.mu() + TAU * f64::from(k);
            let mu = (m1 * s2 + m2 * s1) / total;
            let ln_w = -0.5 * (m1 - m2) * (m1 - m2) / total;
            terms.push((ln_w, mu));
        }
    }
    // common factors of w(j,k) cancel in the ratio; shift logs for range
    let ln_max = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);

    let mut num = ComplexValue::new(0.0, 0.0);
    let mut den = 0.0;
    for (ln_w, mu) in terms {
        let w = (ln_w - ln_max).exp();
        if w == 0.0 {
            continue;
        }
        num += w * gaussian_segment_moment(mu, sigma, 1)?;
        den += w * gaussian_segment_moment(mu, sigma, 0)?.re;
    }
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::Numerical(format!(
            "product normalizer vanished for {a:?} and {b:?}"
        )));
    }
    Ok(num / den)
}

/// WN product fitted by matching the exact first moment of the true
/// renormalized product.
pub fn wn_multiply_moment_based(a: &WrappedNormal, b: &WrappedNormal, trunc: u32) -> Result<WrappedNormal> {
    WrappedNormal::from_moment(wn_product_first_moment(a, b, trunc)?)
}
