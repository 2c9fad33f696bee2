use std::ffi::CStr;
use std::ptr;

use neumann_sto_ffi::*;

fn blank() -> NstoOutcome {
    NstoOutcome { value: 0.0, terms_used: 0, converged: false, est_rel_error: 0.0 }
}

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    unsafe {
        nsto_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn l_with_default_settings() {
    let mut out = blank();
    let st = unsafe { nsto_l(30, 0, 0, 0.1, ptr::null(), &mut out) };
    assert_eq!(st, NstoStatus::Ok);
    assert!(out.converged);
    assert!(((out.value - 9.72733864877071e-4) / out.value).abs() < 1e-14);
}

#[test]
fn w_through_context_handle() {
    let mut ctx = ptr::null_mut();
    let mut settings = ptr::null_mut();
    unsafe {
        assert_eq!(nsto_w_context_new(5.0, 10.0, &mut ctx), NstoStatus::Ok);
        assert_eq!(nsto_settings_new(2e-16, 200, 25, &mut settings), NstoStatus::Ok);
        let mut out = blank();
        assert_eq!(nsto_w(ctx, 8, 0, 0, 60, settings, &mut out), NstoStatus::Ok);
        assert!(out.converged);
        assert!(((out.value - 1.07428909373431e-11) / out.value).abs() < 1e-13);
        nsto_settings_free(settings);
        nsto_w_context_free(ctx);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut out = blank();
    unsafe {
        assert_eq!(nsto_l(3, 5, 0, 1.0, ptr::null(), &mut out), NstoStatus::Domain);
        assert!(last_error().contains("sigma"));
        assert_eq!(nsto_l(3, 0, 0, 1.0, ptr::null(), ptr::null_mut()), NstoStatus::NullPointer);
        let mut s = ptr::null_mut();
        assert_eq!(nsto_settings_new(0.0, 200, 25, &mut s), NstoStatus::InvalidSettings);
        assert!(s.is_null());
        let mut ctx = ptr::null_mut();
        assert_eq!(nsto_w_context_new(-1.0, 1.0, &mut ctx), NstoStatus::Domain);
        nsto_w_context_free(ptr::null_mut());
        nsto_settings_free(ptr::null_mut());
    }
}

#[test]
fn neumann_sum_terminates_for_zero_beta() {
    let req = NstoGenericRequest { p1: 0, q1: 0, p2: 0, q2: 0, sigma: 0, alpha1: 2.0, alpha2: 2.0, beta1: 0.0, beta2: 1.0, r: 2.0 };
    let mut out = blank();
    assert_eq!(unsafe { nsto_neumann_sum(&req, ptr::null(), &mut out) }, NstoStatus::Ok);
    assert_eq!(out.terms_used, 1);
    assert!(out.converged && out.value > 0.0);
}

#[test]
fn eta_and_k_integrals() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(nsto_eta_integral(0, 0, 0, 0.0, &mut v), NstoStatus::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(nsto_k_integral(0, 0, 0, 2.0, &mut v), NstoStatus::Ok);
        assert!((v - (-2.0f64).exp() / 2.0).abs() < 1e-16);
    }
}

#[test]
fn oracle_string_and_small_buffer() {
    let mut buf = [0 as std::ffi::c_char; 96];
    let mut digits = 0u32;
    unsafe {
        let st = nsto_oracle_l(60, 0, 0, 1.0, 20, buf.as_mut_ptr(), buf.len(), &mut digits);
        assert_eq!(st, NstoStatus::Ok);
        let s = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(digits >= 20);
        assert!(((s.parse::<f64>().unwrap() - 1.00458613132488e-4) / 1e-4).abs() < 1e-14, "{s}");
        let mut tiny = [0 as std::ffi::c_char; 4];
        let st = nsto_oracle_l(60, 0, 0, 1.0, 20, tiny.as_mut_ptr(), tiny.len(), ptr::null_mut());
        assert_eq!(st, NstoStatus::BufferTooSmall);
    }
}
