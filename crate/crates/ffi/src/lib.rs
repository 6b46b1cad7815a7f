//! C ABI for `circular_filter`.
//!
//! Every fallible function returns a [`CfStatus`]; results go through out
//! pointers that are written only on success. The message of the most
//! recent failure on the calling thread is available from
//! [`cf_last_error_message`]. Library panics are caught at the boundary
//! and reported as [`CfStatus::Panic`]. Callbacks use the plain C ABI and
//! must not unwind.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use circular_filter::distributions::{CircularDistribution, VonMises, WrappedNormal};
use circular_filter::filter::{
    predict_arbitrary, predict_nonlinear_additive, update_progressive, CircularFilter, DiscreteNoise,
    FilterState, LogLikelihoodFn,
};
use circular_filter::sampling::Sampler;
use circular_filter::special;
use circular_filter::Error;

/// Outcome of a call. `CF_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Range = 3,
    DegenerateMoment = 4,
    DegenerateProduct = 5,
    InfeasibleMoments = 6,
    ZeroLikelihood = 7,
    ProgressionStall = 8,
    ParticleDegeneracy = 9,
    Numerical = 10,
    Unsupported = 11,
    LengthMismatch = 12,
    Panic = 13,
}

impl From<&Error> for CfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => CfStatus::Domain,
            Error::Range(_) => CfStatus::Range,
            Error::DegenerateMoment { .. } => CfStatus::DegenerateMoment,
            Error::DegenerateProduct => CfStatus::DegenerateProduct,
            Error::InfeasibleMoments(_) => CfStatus::InfeasibleMoments,
            Error::ZeroLikelihood => CfStatus::ZeroLikelihood,
            Error::ProgressionStall(_) => CfStatus::ProgressionStall,
            Error::ParticleDegeneracy => CfStatus::ParticleDegeneracy,
            Error::Numerical(_) => CfStatus::Numerical,
            Error::Unsupported(_) => CfStatus::Unsupported,
            Error::LengthMismatch(..) => CfStatus::LengthMismatch,
        }
    }
}

/// Deterministic sampler selection.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfSampler {
    Wd3 = 0,
    Wd5 = 1,
}

/// `x ↦ a(x)`; `user_data` is passed through unchanged.
pub type CfAdditiveFn = Option<unsafe extern "C" fn(x: f64, user_data: *mut c_void) -> f64>;
/// `(x, w) ↦ a(x, w)`.
pub type CfArbitraryFn = Option<unsafe extern "C" fn(x: f64, w: f64, user_data: *mut c_void) -> f64>;
/// `x ↦ ln f(z | x)` for the measurement the caller has bound; `-inf` is
/// allowed, NaN is not.
pub type CfLogLikelihoodFn = Option<unsafe extern "C" fn(x: f64, user_data: *mut c_void) -> f64>;

/// Opaque filter handle.
pub struct CfFilter {
    inner: CircularFilter,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Failure inside a boundary function.
enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

type Outcome = Result<(), Fail>;

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Outcome) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_last_error(format!("{what} must not be null"));
            CfStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_last_error(e.to_string());
            CfStatus::from(&e)
        }
        Err(_) => {
            set_last_error("panic inside the library".into());
            CfStatus::Panic
        }
    }
}

unsafe fn filter_mut<'a>(f: *mut CfFilter) -> Result<&'a mut CfFilter, Fail> {
    f.as_mut().ok_or(Fail::Null("filter handle"))
}

unsafe fn filter_ref<'a>(f: *const CfFilter) -> Result<&'a CfFilter, Fail> {
    f.as_ref().ok_or(Fail::Null("filter handle"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Outcome {
    if out.is_null() {
        return Err(Fail::Null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cf_status_name(status: CfStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        CfStatus::Ok => b"ok\0",
        CfStatus::NullPointer => b"null pointer\0",
        CfStatus::Domain => b"domain error\0",
        CfStatus::Range => b"argument outside working range\0",
        CfStatus::DegenerateMoment => b"degenerate moment\0",
        CfStatus::DegenerateProduct => b"degenerate product\0",
        CfStatus::InfeasibleMoments => b"infeasible moments\0",
        CfStatus::ZeroLikelihood => b"zero likelihood\0",
        CfStatus::ProgressionStall => b"progression stall\0",
        CfStatus::ParticleDegeneracy => b"particle degeneracy\0",
        CfStatus::Numerical => b"numerical error\0",
        CfStatus::Unsupported => b"unsupported operation\0",
        CfStatus::LengthMismatch => b"length mismatch\0",
        CfStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}

fn new_filter(state: Result<FilterState, Error>, out: *mut *mut CfFilter) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("output pointer"));
        }
        let handle = Box::new(CfFilter {
            inner: CircularFilter::new(state?),
        });
        unsafe { out.write(Box::into_raw(handle)) };
        Ok(())
    })
}

/// New filter with a wrapped normal estimate. Free with [`cf_filter_free`].
#[no_mangle]
pub unsafe extern "C" fn cf_filter_new_wn(mu: f64, sigma: f64, out: *mut *mut CfFilter) -> CfStatus {
    new_filter(WrappedNormal::new(mu, sigma).map(Into::into), out)
}

/// New filter with a von Mises estimate. Free with [`cf_filter_free`].
#[no_mangle]
pub unsafe extern "C" fn cf_filter_new_vm(mu: f64, kappa: f64, out: *mut *mut CfFilter) -> CfStatus {
    new_filter(VonMises::new(mu, kappa).map(Into::into), out)
}

/// Release a handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_free(filter: *mut CfFilter) {
    if !filter.is_null() {
        drop(Box::from_raw(filter));
    }
}

/// Choose the deterministic sampler. `lambda` is used by WD5 only.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_set_sampler(
    filter: *mut CfFilter,
    sampler: CfSampler,
    lambda: f64,
) -> CfStatus {
    guard(|| {
        let f = filter_mut(filter)?;
        f.inner.sampler = match sampler {
            CfSampler::Wd3 => Sampler::Wd3,
            CfSampler::Wd5 => {
                if !(0.0..=1.0).contains(&lambda) {
                    return Err(Error::Domain(format!("lambda must lie in [0, 1], got {lambda}")).into());
                }
                Sampler::wd5(lambda)
            }
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cf_filter_set_progression_threshold(filter: *mut CfFilter, r: f64) -> CfStatus {
    guard(|| {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("threshold must lie in (0, 1), got {r}")).into());
        }
        filter_mut(filter)?.inner.progression_threshold = r;
        Ok(())
    })
}

/// Prediction for `x ↦ a(x) + w` with `w ~ WN(noise_mu, noise_sigma)`.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_predict_additive(
    filter: *mut CfFilter,
    a: CfAdditiveFn,
    user_data: *mut c_void,
    noise_mu: f64,
    noise_sigma: f64,
) -> CfStatus {
    guard(|| {
        let f = filter_mut(filter)?;
        let a = a.ok_or(Fail::Null("system function"))?;
        let noise = CircularDistribution::from(WrappedNormal::new(noise_mu, noise_sigma)?);
        let g = |x: f64| unsafe { a(x, user_data) };
        let next = predict_nonlinear_additive(f.inner.state(), &g, &noise, &f.inner.sampler)?;
        f.inner.set_state(next);
        Ok(())
    })
}

/// Prediction for `x ↦ a(x, w)` with `w ~ WN(noise_mu, noise_sigma)`,
/// sampled with the filter's sampler.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_predict_arbitrary(
    filter: *mut CfFilter,
    a: CfArbitraryFn,
    user_data: *mut c_void,
    noise_mu: f64,
    noise_sigma: f64,
) -> CfStatus {
    guard(|| {
        let f = filter_mut(filter)?;
        let a = a.ok_or(Fail::Null("system function"))?;
        let noise = CircularDistribution::from(WrappedNormal::new(noise_mu, noise_sigma)?);
        let samples = DiscreteNoise::from_circular(&noise, &f.inner.sampler)?;
        let g = |x: f64, w: f64| unsafe { a(x, w, user_data) };
        let next = predict_arbitrary(f.inner.state(), &g, &samples, &f.inner.sampler)?;
        f.inner.set_state(next);
        Ok(())
    })
}

/// Closed-form update for `z = x + v`, `v ~ WN(noise_mu, noise_sigma)`;
/// needs a wrapped normal estimate.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_update_identity_wn(
    filter: *mut CfFilter,
    z: f64,
    noise_mu: f64,
    noise_sigma: f64,
) -> CfStatus {
    guard(|| {
        let f = filter_mut(filter)?;
        Ok(f.inner
            .update_identity(z, &WrappedNormal::new(noise_mu, noise_sigma)?.into())?)
    })
}

/// Closed-form update for `z = x + v`, `v ~ VM(noise_mu, noise_kappa)`;
/// needs a von Mises estimate.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_update_identity_vm(
    filter: *mut CfFilter,
    z: f64,
    noise_mu: f64,
    noise_kappa: f64,
) -> CfStatus {
    guard(|| {
        let f = filter_mut(filter)?;
        Ok(f.inner
            .update_identity(z, &VonMises::new(noise_mu, noise_kappa)?.into())?)
    })
}

/// Progressive update with a caller-supplied log-likelihood. On success
/// the number of partial steps is written to `steps_out` unless it is null.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_update_progressive(
    filter: *mut CfFilter,
    ln_likelihood: CfLogLikelihoodFn,
    user_data: *mut c_void,
    steps_out: *mut usize,
) -> CfStatus {
    guard(|| {
        let f = filter_mut(filter)?;
        let l = ln_likelihood.ok_or(Fail::Null("likelihood"))?;
        let lik = LogLikelihoodFn(|_: &(), x: f64| unsafe { l(x, user_data) });
        let (next, trace) = update_progressive(
            f.inner.state(),
            &(),
            &lik,
            f.inner.progression_threshold,
            &f.inner.sampler,
        )?;
        f.inner.set_state(next);
        if !steps_out.is_null() {
            steps_out.write(trace.steps());
        }
        Ok(())
    })
}

/// Circular mean of the estimate in `[0, 2π)`.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_mean(filter: *const CfFilter, out: *mut f64) -> CfStatus {
    guard(|| write(out, filter_ref(filter)?.inner.mean()))
}

/// First circular moment of the estimate.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_first_moment(
    filter: *const CfFilter,
    re: *mut f64,
    im: *mut f64,
) -> CfStatus {
    guard(|| {
        let m = filter_ref(filter)?.inner.state().first_moment();
        if re.is_null() || im.is_null() {
            return Err(Fail::Null("output pointer"));
        }
        write(re, m.re)?;
        write(im, m.im)
    })
}

/// Concentration parameter of the estimate: `sigma` for a wrapped normal,
/// `kappa` for a von Mises.
#[no_mangle]
pub unsafe extern "C" fn cf_filter_concentration(filter: *const CfFilter, out: *mut f64) -> CfStatus {
    guard(|| {
        let v = match filter_ref(filter)?.inner.state() {
            FilterState::WrappedNormal(d) => d.sigma(),
            FilterState::VonMises(d) => d.kappa(),
            FilterState::Moments(_) => {
                return Err(Error::Unsupported("moment state has no concentration".into()).into())
            }
        };
        write(out, v)
    })
}

#[no_mangle]
pub unsafe extern "C" fn cf_bessel_i(n: u32, x: f64, out: *mut f64) -> CfStatus {
    guard(|| write(out, special::bessel_i(n, x)?))
}

/// `I1(x) / I0(x)`.
#[no_mangle]
pub unsafe extern "C" fn cf_bessel_ratio(x: f64, out: *mut f64) -> CfStatus {
    guard(|| write(out, special::bessel_ratio(x)?))
}

/// Inverse of [`cf_bessel_ratio`] on `[0, 1)`.
#[no_mangle]
pub unsafe extern "C" fn cf_bessel_ratio_inv(y: f64, out: *mut f64) -> CfStatus {
    guard(|| write(out, special::bessel_ratio_inv(y)?))
}

/// Complex error function.
#[no_mangle]
pub unsafe extern "C" fn cf_erf_complex(re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> CfStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(Fail::Null("output pointer"));
        }
        let w = special::erf_complex(special::ComplexValue::new(re, im))?;
        write(out_re, w.re)?;
        write(out_im, w.im)
    })
}
