//! C interface to `neumann-sto`.
//!
//! Every function returns an [`NstoStatus`]; results are written through
//! out-pointers. On failure the message of the last error on the calling
//! thread is available from [`nsto_last_error`]. Handles are opaque and
//! must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use neumann_sto::hp_oracle::{oracle_l, oracle_w, OracleConfig, OracleValue};
use neumann_sto::lmu_engine::{l_raised, LRequest};
use neumann_sto::neumann_driver::{eta_integral, k_integral, neumann_sum, GenericIntegralRequest, DEFAULT_MU_SWITCH};
use neumann_sto::wmu_engine::{w_sigma_large_order, BasicIntegralCache, WParams};
use neumann_sto::{Error, ExpansionSettings, SeriesOutcome};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NstoStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Overflow = 3,
    NoConvergence = 4,
    SeriesDiverged = 5,
    Precision = 6,
    InvalidSettings = 7,
    BufferTooSmall = 8,
    Internal = 9,
    Panic = 10,
}

impl From<&Error> for NstoStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain { .. } => NstoStatus::Domain,
            Error::Overflow { .. } => NstoStatus::Overflow,
            Error::NoConvergence { .. } | Error::Truncation { .. } => NstoStatus::NoConvergence,
            Error::TailDivergence { .. } | Error::SeriesCap { .. } => NstoStatus::SeriesDiverged,
            Error::Precision { .. } => NstoStatus::Precision,
            Error::Settings(_) => NstoStatus::InvalidSettings,
            _ => NstoStatus::Internal,
        }
    }
}

/// Outcome of a truncated series.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NstoOutcome {
    pub value: f64,
    pub terms_used: u32,
    pub converged: bool,
    pub est_rel_error: f64,
}

impl From<SeriesOutcome> for NstoOutcome {
    fn from(o: SeriesOutcome) -> Self {
        Self { value: o.value, terms_used: o.terms_used as u32, converged: o.converged, est_rel_error: o.est_rel_error }
    }
}

/// Parameters of a generic two-centre integral.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NstoGenericRequest {
    pub p1: u32,
    pub q1: u32,
    pub p2: u32,
    pub q2: u32,
    pub sigma: u32,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub r: f64,
}

/// Series settings and the order switch of the Neumann driver.
pub struct NstoSettings {
    series: ExpansionSettings,
    mu_switch: usize,
}

/// Cached basic integrals at one `(α₁, α₂)`.
pub struct NstoWContext {
    cache: BasicIntegralCache,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard<F: FnOnce() -> Result<(), NstoStatus>>(f: F) -> NstoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NstoStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside neumann-sto".into());
            NstoStatus::Panic
        }
    }
}

fn fail(e: Error) -> NstoStatus {
    let s = NstoStatus::from(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> NstoStatus {
    set_error(format!("{what} is null"));
    NstoStatus::NullPointer
}

unsafe fn settings_or_default(s: *const NstoSettings) -> (ExpansionSettings, usize) {
    match s.as_ref() {
        Some(s) => (s.series, s.mu_switch),
        None => (ExpansionSettings::default(), DEFAULT_MU_SWITCH),
    }
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn nsto_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates settings: relative tolerance, term cap and order switch.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_settings_new(rel_tol: f64, max_terms: u32, mu_switch: u32, out: *mut *mut NstoSettings) -> NstoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let series = ExpansionSettings { rel_tol, max_terms: max_terms as usize, ..ExpansionSettings::default() };
        let series = ExpansionSettings { divergence_window: series.divergence_window.min(series.max_terms.max(1)), ..series };
        series.validate().map_err(fail)?;
        *out = Box::into_raw(Box::new(NstoSettings { series, mu_switch: mu_switch as usize }));
        Ok(())
    })
}

/// Releases settings created by [`nsto_settings_new`]. Null is ignored.
///
/// # Safety
/// `s` must come from [`nsto_settings_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nsto_settings_free(s: *mut NstoSettings) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `L_μ^σ(p, α)`. Null `settings` selects the defaults.
///
/// # Safety
/// `settings` must be null or a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_l(
    mu: u32,
    sigma: u32,
    p: u32,
    alpha: f64,
    settings: *const NstoSettings,
    out: *mut NstoOutcome,
) -> NstoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (series, mu_switch) = settings_or_default(settings);
        let req = LRequest::new(mu as usize, sigma as usize, p as usize, alpha).map_err(fail)?;
        *out = l_raised(&req, &series, mu_switch).map_err(fail)?.into();
        Ok(())
    })
}

/// Creates a context for `W` evaluations at `(α₁, α₂)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_w_context_new(alpha1: f64, alpha2: f64, out: *mut *mut NstoWContext) -> NstoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cache = BasicIntegralCache::new(alpha1, alpha2).map_err(fail)?;
        *out = Box::into_raw(Box::new(NstoWContext { cache }));
        Ok(())
    })
}

/// Releases a context. Null is ignored.
///
/// # Safety
/// `ctx` must come from [`nsto_w_context_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn nsto_w_context_free(ctx: *mut NstoWContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// `W_μ^σ(p₁, p₂; α₁, α₂)` by the large-order engine at the context's
/// exponents. A non-converged series is reported through `out->converged`.
///
/// # Safety
/// `ctx` must be a live handle used by one thread at a time; `settings`
/// null or live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_w(
    ctx: *mut NstoWContext,
    p1: u32,
    p2: u32,
    sigma: u32,
    mu: u32,
    settings: *const NstoSettings,
    out: *mut NstoOutcome,
) -> NstoStatus {
    guard(|| {
        let ctx = ctx.as_mut().ok_or_else(|| null("ctx"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (series, _) = settings_or_default(settings);
        let (a1, a2) = (ctx.cache.alpha1(), ctx.cache.alpha2());
        let params = WParams::new(p1 as usize, p2 as usize, sigma as usize, a1, a2, mu as usize).map_err(fail)?;
        *out = w_sigma_large_order(&params, &mut ctx.cache, &series).map_err(fail)?.into();
        Ok(())
    })
}

/// η-integral `i_μ^σ(q, β)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_eta_integral(mu: u32, sigma: u32, q: u32, beta: f64, out: *mut f64) -> NstoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = eta_integral(mu as usize, sigma as usize, q as usize, beta).map_err(fail)?;
        Ok(())
    })
}

/// `k_μ^σ(p, α)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_k_integral(mu: u32, sigma: u32, p: u32, alpha: f64, out: *mut f64) -> NstoStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = k_integral(mu as usize, sigma as usize, p as usize, alpha).map_err(fail)?;
        Ok(())
    })
}

/// The Neumann series of a generic integral.
///
/// # Safety
/// `req` must be valid for reads; `settings` null or live; `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_neumann_sum(
    req: *const NstoGenericRequest,
    settings: *const NstoSettings,
    out: *mut NstoOutcome,
) -> NstoStatus {
    guard(|| {
        let r = req.as_ref().ok_or_else(|| null("req"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (series, mu_switch) = settings_or_default(settings);
        let req = GenericIntegralRequest {
            p1: r.p1 as usize,
            q1: r.q1 as usize,
            p2: r.p2 as usize,
            q2: r.q2 as usize,
            sigma: r.sigma as usize,
            alpha1: r.alpha1,
            alpha2: r.alpha2,
            beta1: r.beta1,
            beta2: r.beta2,
            r: r.r,
        };
        *out = neumann_sum(&req, mu_switch, &series).map_err(fail)?.into();
        Ok(())
    })
}

unsafe fn write_oracle(v: OracleValue, buf: *mut c_char, len: usize, digits: *mut u32) -> Result<(), NstoStatus> {
    let s = v.to_decimal();
    if let Some(d) = digits.as_mut() {
        *d = v.digits;
    }
    if buf.is_null() {
        return Err(null("buf"));
    }
    if s.len() + 1 > len {
        set_error(format!("decimal value needs {} bytes", s.len() + 1));
        return Err(NstoStatus::BufferTooSmall);
    }
    std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn oracle_config(target_digits: u32) -> Result<OracleConfig, NstoStatus> {
    let cfg = OracleConfig { target_digits, working_digits: target_digits + 20, ..OracleConfig::default() };
    cfg.validate().map_err(fail)?;
    Ok(cfg)
}

/// Oracle `L_μ^σ(p, α)` as a decimal string certified to `*digits` digits.
///
/// # Safety
/// `buf` must be valid for `len` bytes; `digits` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nsto_oracle_l(
    mu: u32,
    sigma: u32,
    p: u32,
    alpha: f64,
    target_digits: u32,
    buf: *mut c_char,
    len: usize,
    digits: *mut u32,
) -> NstoStatus {
    guard(|| {
        let cfg = oracle_config(target_digits)?;
        let v = oracle_l(mu as usize, sigma as usize, p as usize, alpha, &cfg).map_err(fail)?;
        write_oracle(v, buf, len, digits)
    })
}

/// Oracle `W_μ^σ(p₁, p₂; α₁, α₂)` as a decimal string.
///
/// # Safety
/// As [`nsto_oracle_l`].
#[no_mangle]
pub unsafe extern "C" fn nsto_oracle_w(
    p1: u32,
    p2: u32,
    sigma: u32,
    alpha1: f64,
    alpha2: f64,
    mu: u32,
    target_digits: u32,
    buf: *mut c_char,
    len: usize,
    digits: *mut u32,
) -> NstoStatus {
    guard(|| {
        let cfg = oracle_config(target_digits)?;
        let params = WParams::new(p1 as usize, p2 as usize, sigma as usize, alpha1, alpha2, mu as usize).map_err(fail)?;
        let v = oracle_w(&params, &cfg).map_err(fail)?;
        write_oracle(v, buf, len, digits)
    })
}
