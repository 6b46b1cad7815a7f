use std::f64::consts::TAU;

use serde::Serialize;

use super::metrics::{numeric_kld_ln, numeric_l2_n, periodic_integral, QUADRATURE_POINTS};
use crate::distributions::{
    wn_multiply_moment_based, wn_multiply_via_vm, CircularDensity, WrappedNormal, DEFAULT_PRODUCT_TRUNCATION,
};
use crate::error::{Error, Result};

/// Product approximation compared in the multiplication experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMethod {
    ViaVm,
    MomentBased,
}

impl ProductMethod {
    pub const ALL: [ProductMethod; 2] = [Self::ViaVm, Self::MomentBased];

    pub fn apply(self, a: &WrappedNormal, b: &WrappedNormal) -> Result<WrappedNormal> {
        match self {
            Self::ViaVm => wn_multiply_via_vm(a, b),
            Self::MomentBased => wn_multiply_moment_based(a, b, DEFAULT_PRODUCT_TRUNCATION),
        }
    }
}

/// One `(σ1, σ2, μ2, method)` cell. `degenerate` rows carry NaN metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplicationRow {
    pub mu1: f64,
    pub sigma1: f64,
    pub mu2: f64,
    pub sigma2: f64,
    pub method: ProductMethod,
    pub kld: f64,
    pub l2: f64,
    pub degenerate: bool,
}

/// Log-density of the renormalized product, tabulated on the default grid
/// and returned as a closure over the exact pointwise value.
pub fn true_product_ln_pdf(a: &WrappedNormal, b: &WrappedNormal) -> Result<impl Fn(f64) -> f64> {
    let (a, b) = (*a, *b);
    let ln_raw = move |x: f64| a.ln_pdf(x) + b.ln_pdf(x);
    let n = QUADRATURE_POINTS;
    let h = TAU / n as f64;
    let peak = (0..n)
        .map(|i| ln_raw(h * i as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    let z = periodic_integral(|x| (ln_raw(x) - peak).exp(), n);
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Numerical("product normalizer vanished".into()));
    }
    let ln_norm = peak + z.ln();
    Ok(move |x: f64| ln_raw(x) - ln_norm)
}

/// Compare one method against the true product.
pub fn multiplication_cell(
    a: &WrappedNormal,
    b: &WrappedNormal,
    method: ProductMethod,
) -> Result<MultiplicationRow> {
    let row = |kld, l2, degenerate| MultiplicationRow {
        mu1: a.mu(),
        sigma1: a.sigma(),
        mu2: b.mu(),
        sigma2: b.sigma(),
        method,
        kld,
        l2,
        degenerate,
    };
    let fit = match method.apply(a, b) {
        Ok(f) => f,
        Err(Error::DegenerateProduct | Error::DegenerateMoment { .. }) => {
            return Ok(row(f64::NAN, f64::NAN, true));
        }
        Err(e) => return Err(e),
    };
    let ln_true = true_product_ln_pdf(a, b)?;
    let kld = numeric_kld_ln(&ln_true, |x| fit.ln_pdf(x), QUADRATURE_POINTS)?;
    let l2 = numeric_l2_n(|x| ln_true(x).exp(), |x| fit.pdf(x), QUADRATURE_POINTS)?;
    Ok(row(kld, l2, false))
}

/// Grid with `μ1` fixed and `μ2 = μ1 + 2π i / mu2_points`. Rows are ordered
/// by `σ1`, `σ2`, `μ2`, method.
pub fn run_multiplication_experiment(
    mu1: f64,
    sigma1s: &[f64],
    sigma2s: &[f64],
    mu2_points: usize,
) -> Result<Vec<MultiplicationRow>> {
    use rayon::prelude::*;
    let mut cells = Vec::new();
    for &s1 in sigma1s {
        for &s2 in sigma2s {
            for i in 0..mu2_points {
                let mu2 = mu1 + TAU * i as f64 / mu2_points as f64;
                for m in ProductMethod::ALL {
                    cells.push((s1, s2, mu2, m));
                }
            }
        }
    }
    cells
        .par_iter()
        .map(|&(s1, s2, mu2, m)| {
            let a = WrappedNormal::new(mu1, s1)?;
            let b = WrappedNormal::new(mu2, s2)?;
            multiplication_cell(&a, &b, m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_case_is_near_exact() {
        // the VM route drifts past 1e-3 from sigma = 0.5 on
        let a = WrappedNormal::new(1.0, 0.4).unwrap();
        for m in ProductMethod::ALL {
            let row = multiplication_cell(&a, &a, m).unwrap();
            assert!(!row.degenerate && row.kld < 1e-3, "{row:?}");
        }
    }

    #[test]
    fn true_product_is_normalized() {
        let a = WrappedNormal::new(0.0, 0.1).unwrap();
        let b = WrappedNormal::new(3.0, 0.2).unwrap();
        let f = true_product_ln_pdf(&a, &b).unwrap();
        let mass = periodic_integral(|x| f(x).exp(), QUADRATURE_POINTS);
        assert!((mass - 1.0).abs() < 1e-12);
    }
}
