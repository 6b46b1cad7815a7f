use std::ffi::{c_void, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use circular_filter_ffi::*;

unsafe extern "C" fn drift(x: f64, _: *mut c_void) -> f64 {
    x + 0.1 * x.sin() + 0.15
}

unsafe extern "C" fn drift_inside(x: f64, w: f64, _: *mut c_void) -> f64 {
    x + 0.1 * (x + w).sin() + 0.15
}

/// Gaussian log-likelihood of a unit-vector measurement bound via
/// `user_data`.
unsafe extern "C" fn unit_vector_likelihood(x: f64, user: *mut c_void) -> f64 {
    let z = &*(user as *const [f64; 2]);
    let (dx, dy) = (z[0] - x.cos(), z[1] - x.sin());
    -0.5 * (dx * dx + dy * dy) / 0.1
}

unsafe extern "C" fn not_a_number(_: f64, _: *mut c_void) -> f64 {
    f64::NAN
}

unsafe fn new_wn(mu: f64, sigma: f64) -> *mut CfFilter {
    let mut f = ptr::null_mut();
    assert_eq!(cf_filter_new_wn(mu, sigma, &mut f), CfStatus::Ok);
    assert!(!f.is_null());
    f
}

#[test]
fn progressive_cycle_moves_toward_measurement() {
    unsafe {
        let f = new_wn(0.0, 1.0);
        assert_eq!(
            cf_filter_predict_additive(f, Some(drift), ptr::null_mut(), 0.0, 0.2),
            CfStatus::Ok
        );
        let mut z = [1.0f64.cos(), 1.0f64.sin()];
        let mut steps = 0usize;
        let st = cf_filter_update_progressive(
            f,
            Some(unit_vector_likelihood),
            (&mut z as *mut [f64; 2]).cast(),
            &mut steps,
        );
        assert_eq!(st, CfStatus::Ok);
        assert!(steps >= 1);
        let mut mean = f64::NAN;
        assert_eq!(cf_filter_mean(f, &mut mean), CfStatus::Ok);
        assert!(mean > 0.5 && mean < 1.2, "mean {mean}");
        let mut sigma = f64::NAN;
        assert_eq!(cf_filter_concentration(f, &mut sigma), CfStatus::Ok);
        assert!(sigma > 0.0 && sigma < 1.0);
        cf_filter_free(f);
    }
}

#[test]
fn arbitrary_prediction_and_identity_updates() {
    unsafe {
        let f = new_wn(0.5, 0.4);
        assert_eq!(
            cf_filter_predict_arbitrary(f, Some(drift_inside), ptr::null_mut(), 0.0, 0.2),
            CfStatus::Ok
        );
        assert_eq!(cf_filter_update_identity_wn(f, 0.8, 0.0, 0.3), CfStatus::Ok);
        // a VM noise model does not match a WN estimate
        assert_eq!(
            cf_filter_update_identity_vm(f, 0.8, 0.0, 2.0),
            CfStatus::Unsupported
        );
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(cf_filter_first_moment(f, &mut re, &mut im), CfStatus::Ok);
        assert!(re.hypot(im) > 0.7 && re.hypot(im) < 1.0);
        cf_filter_free(f);

        let mut g = ptr::null_mut();
        assert_eq!(cf_filter_new_vm(1.0, 2.0, &mut g), CfStatus::Ok);
        assert_eq!(cf_filter_update_identity_vm(g, 1.0, 0.0, 3.0), CfStatus::Ok);
        let mut kappa = 0.0;
        assert_eq!(cf_filter_concentration(g, &mut kappa), CfStatus::Ok);
        assert!((kappa - 5.0).abs() < 1e-12);
        cf_filter_free(g);
    }
}

#[test]
fn invalid_arguments_and_nulls() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(cf_filter_new_wn(0.0, -1.0, &mut f), CfStatus::Domain);
        assert!(f.is_null());
        let msg = CStr::from_ptr(cf_last_error_message()).to_str().unwrap();
        assert!(msg.contains("domain"), "{msg}");
        assert_eq!(cf_filter_new_wn(0.0, 1.0, ptr::null_mut()), CfStatus::NullPointer);

        let mut mean = 0.0;
        assert_eq!(cf_filter_mean(ptr::null(), &mut mean), CfStatus::NullPointer);
        let f = new_wn(0.0, 1.0);
        assert_eq!(cf_filter_mean(f, ptr::null_mut()), CfStatus::NullPointer);
        assert_eq!(
            cf_filter_predict_additive(f, None, ptr::null_mut(), 0.0, 0.2),
            CfStatus::NullPointer
        );
        assert_eq!(cf_filter_set_sampler(f, CfSampler::Wd5, 2.0), CfStatus::Domain);
        assert_eq!(cf_filter_set_sampler(f, CfSampler::Wd3, 0.0), CfStatus::Ok);
        assert_eq!(cf_filter_set_progression_threshold(f, 1.0), CfStatus::Domain);
        cf_filter_free(f);
        cf_filter_free(ptr::null_mut());
    }
}

#[test]
fn failing_callback_leaves_state_unchanged() {
    unsafe {
        let f = new_wn(0.0, 1.0);
        let st = cf_filter_update_progressive(f, Some(not_a_number), ptr::null_mut(), ptr::null_mut());
        assert_eq!(st, CfStatus::Numerical);
        // the estimate is untouched after the failed call
        let mut sigma = 0.0;
        assert_eq!(cf_filter_concentration(f, &mut sigma), CfStatus::Ok);
        assert_eq!(sigma, 1.0);
        cf_filter_free(f);
    }
}

#[test]
fn scalar_functions() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(cf_bessel_i(0, 0.0, &mut v), CfStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(cf_bessel_ratio(5.0, &mut v), CfStatus::Ok);
        let mut k = 0.0;
        assert_eq!(cf_bessel_ratio_inv(v, &mut k), CfStatus::Ok);
        assert!((k - 5.0).abs() < 1e-8);
        assert_eq!(cf_bessel_ratio_inv(1.5, &mut k), CfStatus::Domain);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(cf_erf_complex(1.0, 0.0, &mut re, &mut im), CfStatus::Ok);
        assert!((re - 0.842_700_792_949_714_9).abs() < 1e-15 && im == 0.0);
        let name = CStr::from_ptr(cf_status_name(CfStatus::ProgressionStall));
        assert_eq!(name.to_str().unwrap(), "progression stall");
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/circular_filter.h");
    let text = std::fs::read_to_string(&header).expect("header generated by the build script");
    for name in [
        "cf_filter_new_wn",
        "cf_filter_update_progressive",
        "CF_STATUS_PROGRESSION_STALL",
        "typedef struct CfFilter CfFilter",
        "CfLogLikelihoodFn",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // syntax check with whichever C compiler is installed
    for cc in ["cc", "clang", "gcc"] {
        if let Ok(out) = Command::new(cc)
            .args(["-fsyntax-only", "-x", "c"])
            .arg(&header)
            .output()
        {
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            return;
        }
    }
}
