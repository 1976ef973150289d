use std::ffi::{CStr, CString};
use std::ptr;

use chermite_ffi::*;

fn c(re: f64, im: f64) -> ChComplex {
    ChComplex { re, im }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ch_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn chp_eval_matches_small_cases() {
    let mut out = ChComplex::default();
    let st = unsafe { ch_chp_eval(1, 1, c(1.0, 0.0), 1.0, &mut out) };
    assert_eq!(st, ChStatus::Ok);
    assert!((out.re - 0.0).abs() < 1e-15 && out.im.abs() < 1e-15);

    let st = unsafe { ch_chp_eval(2, 0, c(0.0, 1.0), 2.0, &mut out) };
    assert_eq!(st, ChStatus::Ok);
    assert!((out.re + 4.0).abs() < 1e-14, "{out:?}");
    assert_eq!(last_error(), "");
}

#[test]
fn domain_errors_set_status_and_message() {
    let mut out = ChComplex { re: 7.0, im: 7.0 };
    let st = unsafe { ch_chp_eval(1, 1, c(1.0, 0.0), -1.0, &mut out) };
    assert_eq!(st, ChStatus::Domain);
    assert!(!last_error().is_empty());
    assert_eq!(out, ChComplex { re: 7.0, im: 7.0 });
}

#[test]
fn null_out_pointer_is_reported() {
    let st = unsafe { ch_chp_eval(1, 1, c(1.0, 0.0), 1.0, ptr::null_mut()) };
    assert_eq!(st, ChStatus::NullPointer);
    assert!(last_error().contains("out"));
}

#[test]
fn real_special_functions() {
    assert_eq!(ch_real_hermite(3, 2.0), 40.0);
    assert!((ch_laguerre(2, 0.0, 1.0) + 0.5).abs() < 1e-15);
}

#[test]
fn poly_handles_round_trip() {
    unsafe {
        let p = ch_poly_new_chp(2, 1);
        let r = ch_poly_new_rodrigues(2, 1);
        assert_eq!(ch_poly_equal(p, r), 1);
        assert_eq!(ch_poly_equal(p, ptr::null()), -1);

        let lap = ch_poly_laplacian(p);
        let expect = ch_poly_scale_nu(p, 2);
        assert_eq!(ch_poly_equal(lap, expect), 1);

        let s = ch_poly_to_string(p);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        ch_string_free(s);
        assert!(text.contains("zbar"), "{text}");
        assert!(ch_poly_term_count(p) >= 2);

        let mut a = ChComplex::default();
        let mut b = ChComplex::default();
        assert_eq!(ch_poly_eval(p, c(0.3, -0.4), 1.5, 0, &mut a), ChStatus::Ok);
        assert_eq!(ch_poly_eval(p, c(0.3, -0.4), 1.5, 1, &mut b), ChStatus::Ok);
        let mut d = ChComplex::default();
        ch_chp_eval(2, 1, c(0.3, -0.4), 1.5, &mut d);
        assert!((a.re - d.re).abs() < 1e-13 && (a.im - d.im).abs() < 1e-13);
        assert!((b.re - d.re).abs() < 1e-13 && (b.im - d.im).abs() < 1e-13);

        for h in [p, r, lap, expect] {
            ch_poly_free(h);
        }
        ch_poly_free(ptr::null_mut());
    }
}

#[test]
fn kernel_series_agrees_with_closed_form() {
    let args = ChKernelArgs { u: c(0.3, 0.1), v: c(-0.2, 0.05), z: c(0.4, 0.2), w: c(-0.1, 0.3), nu: 1.2, nu_prime: 0.8 };
    let mut closed = ChComplex::default();
    let mut series = ChSeries::default();
    unsafe {
        assert_eq!(ch_mehler1_closed(&args, &mut closed), ChStatus::Ok);
        assert_eq!(ch_mehler1_series(&args, 80, 1e-12, &mut series), ChStatus::Ok);
    }
    let d = ((closed.re - series.value.re).powi(2) + (closed.im - series.value.im).powi(2)).sqrt();
    assert!(d < 1e-9 * (1.0 + closed.re.hypot(closed.im)), "{closed:?} {series:?}");

    let heat = ChHeatArgs { t: 0.7, z: c(0.2, 0.1), z0: c(-0.1, 0.3), nu: 1.0 };
    let mut hc = ChComplex::default();
    let mut hs = ChSeries::default();
    unsafe {
        assert_eq!(ch_heat_kernel_closed(&heat, &mut hc), ChStatus::Ok);
        assert_eq!(ch_heat_kernel_series(&heat, 120, 1e-12, &mut hs), ChStatus::Ok);
    }
    assert!((hc.re - hs.value.re).abs() < 1e-9 && (hc.im - hs.value.im).abs() < 1e-9);
}

#[test]
fn series_non_convergence_status() {
    let args = ChKernelArgs { u: c(0.9, 0.0), v: c(0.9, 0.0), z: c(1.0, 0.0), w: c(1.0, 0.0), nu: 1.0, nu_prime: 1.0 };
    let mut s = ChSeries::default();
    let st = unsafe { ch_mehler1_series(&args, 3, 1e-12, &mut s) };
    assert_eq!(st, ChStatus::NonConvergence);
}

#[test]
fn quadrature_through_rule_handle() {
    unsafe {
        let mut rule = ptr::null_mut();
        assert_eq!(ch_rule_new(64, 1.0, &mut rule), ChStatus::Ok);
        let mut q = 0.0;
        let mut e = 0.0;
        assert_eq!(ch_norm_squared_quad(rule, 3, 2, 1.3, &mut q), ChStatus::Ok);
        assert_eq!(ch_norm_squared_closed(3, 2, 1.3, &mut e), ChStatus::Ok);
        assert!((q - e).abs() <= 1e-8 * e);

        let (alpha, beta) = (c(0.3, 0.2), c(-0.1, 0.4));
        let mut gq = ChComplex::default();
        let mut gc = ChComplex::default();
        assert_eq!(ch_gaussian_integral_quad(rule, 1.5, alpha, beta, &mut gq), ChStatus::Ok);
        assert_eq!(ch_gaussian_integral_closed(1.5, alpha, beta, &mut gc), ChStatus::Ok);
        assert!((gq.re - gc.re).abs() < 1e-10 && (gq.im - gc.im).abs() < 1e-10);

        assert_eq!(ch_norm_squared_quad(ptr::null(), 1, 1, 1.0, &mut q), ChStatus::NullPointer);
        ch_rule_free(rule);

        let mut bad = ptr::null_mut();
        assert_ne!(ch_rule_new(0, 1.0, &mut bad), ChStatus::Ok);
        assert!(bad.is_null());
    }
}

#[test]
fn suite_runs_and_exposes_reports() {
    unsafe {
        assert_eq!(ch_identity_count(), 22);
        let first = CStr::from_ptr(ch_identity_name(0)).to_str().unwrap();
        assert_eq!(first, "MEHLER_REAL");
        assert!(ch_identity_name(22).is_null());

        let names = [CString::new("EGF").unwrap(), CString::new("ZERO_VALUE").unwrap()];
        let ptrs: Vec<_> = names.iter().map(|s| s.as_ptr()).collect();
        let mut suite = ptr::null_mut();
        assert_eq!(ch_suite_run(7, 3, ptrs.as_ptr(), ptrs.len(), &mut suite), ChStatus::Ok);
        assert_eq!(ch_suite_len(suite), 6);
        assert_eq!(ch_suite_unexpected_failures(suite), 0);
        let line = CStr::from_ptr(ch_suite_report_json(suite, 0)).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["identity_id"], "EGF");
        assert!(ch_suite_report_json(suite, 6).is_null());
        ch_suite_free(suite);

        let bogus = [CString::new("NOPE").unwrap()];
        let bp: Vec<_> = bogus.iter().map(|s| s.as_ptr()).collect();
        let mut s2 = ptr::null_mut();
        assert_eq!(ch_suite_run(7, 1, bp.as_ptr(), 1, &mut s2), ChStatus::InvalidArgument);
        assert!(s2.is_null());
    }
}
