//! Scalar special functions: modified Bessel functions, the Bessel ratio
//! `A(x)` and its inverse, and the complex error function.

mod bessel;
mod erf;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_ratio, bessel_ratio_inv, bessel_ratio_n, RATIO_INV_MAX, SERIES_LIMIT,
};
pub use erf::{erf_complex, erfc_complex, faddeeva, gaussian_segment_moment, WORKING_RANGE};

/// Complex values (circular moments, error function arguments).
pub type ComplexValue = num_complex::Complex64;
