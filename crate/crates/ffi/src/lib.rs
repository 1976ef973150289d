//! C ABI for `chermite`.
//!
//! Conventions:
//!
//! * Fallible functions return a [`ChStatus`] and write results through out
//!   pointers. On failure the out pointers are left untouched and
//!   [`ch_last_error_message`] describes the problem.
//! * Objects (`ChPoly`, `ChRule`, `ChSuite`) are opaque handles created by a
//!   `*_new`/`*_run` function and released by the matching `*_free`.
//! * Strings returned as `char *` are owned by the caller and must be released
//!   with [`ch_string_free`].
//! * No panic crosses the boundary; one is reported as `CH_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chermite::hermite::{self, EvalPoint};
use chermite::kernels::{self, HeatArgs, KernelArgs, SeriesValue, TruncationSpec};
use chermite::quadrature::{self, IntegralRepParams, QuadratureRule};
use chermite::tripoly::TriPoly;
use chermite::verify::{self, IdentityId, SampleSpec, SuiteResult};
use chermite::{Error, C64};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChStatus {
    Ok = 0,
    /// An argument lies outside the region where the quantity is defined.
    Domain = 1,
    /// A truncated series did not settle below its tail tolerance.
    NonConvergence = 2,
    InvalidArgument = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChComplex {
    pub re: f64,
    pub im: f64,
}

impl From<ChComplex> for C64 {
    fn from(z: ChComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

impl From<C64> for ChComplex {
    fn from(z: C64) -> Self {
        ChComplex { re: z.re, im: z.im }
    }
}

/// Arguments of the generating-function and Mehler kernels. Unused fields
/// are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChKernelArgs {
    pub u: ChComplex,
    pub v: ChComplex,
    pub z: ChComplex,
    pub w: ChComplex,
    pub nu: f64,
    pub nu_prime: f64,
}

impl From<&ChKernelArgs> for KernelArgs {
    fn from(a: &ChKernelArgs) -> Self {
        KernelArgs { u: a.u.into(), v: a.v.into(), z: a.z.into(), w: a.w.into(), nu: a.nu, nu_prime: a.nu_prime }
    }
}

/// Arguments of the heat kernel `K_nu(t; z, z0)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChHeatArgs {
    pub t: f64,
    pub z: ChComplex,
    pub z0: ChComplex,
    pub nu: f64,
}

impl From<&ChHeatArgs> for HeatArgs {
    fn from(a: &ChHeatArgs) -> Self {
        HeatArgs { t: a.t, z: a.z.into(), z0: a.z0.into(), nu: a.nu }
    }
}

/// Value and tail estimate of a truncated series.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChSeries {
    pub value: ChComplex,
    pub tail: f64,
    pub max_order: usize,
}

impl From<SeriesValue> for ChSeries {
    fn from(s: SeriesValue) -> Self {
        ChSeries { value: s.value.into(), tail: s.tail, max_order: s.max_order }
    }
}

/// Exact polynomial in `z`, `zbar` and `nu` with integer coefficients.
pub struct ChPoly {
    inner: TriPoly,
}

/// Tensor-product Gauss–Hermite rule.
pub struct ChRule {
    inner: QuadratureRule,
}

/// Reports of a verification run.
pub struct ChSuite {
    inner: SuiteResult,
    json: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Message for the most recent failure on the calling thread; empty after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

struct Fail(ChStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) => ChStatus::Domain,
            Error::NonConvergence { .. } => ChStatus::NonConvergence,
            Error::InvalidArgument(_) => ChStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(ChStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, records any failure, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ChStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            ChStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            ChStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(name))
}

fn trunc(max_order: usize, tail_tol: f64) -> Result<TruncationSpec, Fail> {
    Ok(TruncationSpec::new(max_order, tail_tol)?)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer returned by this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Polynomials and special functions
// ---------------------------------------------------------------------------

/// `H^nu_{m,n}(z, zbar)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_chp_eval(m: u32, n: u32, z: ChComplex, nu: f64, out: *mut ChComplex) -> ChStatus {
    guard(|| {
        let v = hermite::chp_eval(m, n, EvalPoint::new(z.into(), nu)?);
        write(out, "out", v.into())
    })
}

/// `H^nu_{m,n}(0) = (-nu)^m m! delta_{m,n}`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_chp_zero_value(m: u32, n: u32, nu: f64, out: *mut ChComplex) -> ChStatus {
    guard(|| write(out, "out", hermite::chp_zero_value(m, n, nu)?.into()))
}

/// Physicists' Hermite polynomial `H_n(x)`.
#[no_mangle]
pub extern "C" fn ch_real_hermite(n: u32, x: f64) -> f64 {
    hermite::real_hermite_eval(n, x)
}

/// Generalised Laguerre polynomial `L^(alpha)_n(x)`.
#[no_mangle]
pub extern "C" fn ch_laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    hermite::laguerre_eval(n, alpha, x)
}

/// The explicit-sum polynomial `H^nu_{m,n}`.
#[no_mangle]
pub extern "C" fn ch_poly_new_chp(m: u32, n: u32) -> *mut ChPoly {
    catch_unwind(|| Box::into_raw(Box::new(ChPoly { inner: hermite::chp_poly(m, n) }))).unwrap_or(ptr::null_mut())
}

/// `H^nu_{m,n}` by repeated differentiation of the Gaussian.
#[no_mangle]
pub extern "C" fn ch_poly_new_rodrigues(m: u32, n: u32) -> *mut ChPoly {
    catch_unwind(|| Box::into_raw(Box::new(ChPoly { inner: hermite::chp_poly_rodrigues(m, n) })))
        .unwrap_or(ptr::null_mut())
}

/// The magnetic Laplacian applied to `p`, as a new polynomial; null if `p` is null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_poly_laplacian(p: *const ChPoly) -> *mut ChPoly {
    match p.as_ref() {
        Some(p) => catch_unwind(AssertUnwindSafe(|| {
            Box::into_raw(Box::new(ChPoly { inner: hermite::magnetic_laplacian_apply(&p.inner) }))
        }))
        .unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    }
}

/// `p` multiplied by `k * nu`; null if `p` is null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_poly_scale_nu(p: *const ChPoly, k: i64) -> *mut ChPoly {
    match p.as_ref() {
        Some(p) => {
            let scaled = p.inner.mul_monomial(chermite::tripoly::Monomial::new(0, 0, 1)).scale(&k.into());
            Box::into_raw(Box::new(ChPoly { inner: scaled }))
        }
        None => ptr::null_mut(),
    }
}

/// 1 if the polynomials are identical, 0 if not, -1 if either is null.
///
/// # Safety
/// Both pointers must be null or live handles.
#[no_mangle]
pub unsafe extern "C" fn ch_poly_equal(a: *const ChPoly, b: *const ChPoly) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => i32::from(a.inner == b.inner),
        _ => -1,
    }
}

/// Number of nonzero terms, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_poly_term_count(p: *const ChPoly) -> usize {
    p.as_ref().map_or(0, |p| p.inner.len())
}

/// Evaluates `p` at `(z, conj(z), nu)`. With `exact` nonzero the sum is
/// formed in rational arithmetic and rounded once.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_poly_eval(
    p: *const ChPoly,
    z: ChComplex,
    nu: f64,
    exact: i32,
    out: *mut ChComplex,
) -> ChStatus {
    guard(|| {
        let p = borrow(p, "p")?;
        let (z, nu) = (C64::from(z), nu);
        let v = if exact != 0 { p.inner.eval_exact(z, nu) } else { p.inner.eval(z, nu) };
        write(out, "out", v.into())
    })
}

/// Canonical text form, e.g. `nu^2*z*zbar - nu`. Free with [`ch_string_free`].
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_poly_to_string(p: *const ChPoly) -> *mut c_char {
    p.as_ref().map_or(ptr::null_mut(), |p| into_c_string(p.inner.to_string()))
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ch_poly_free(p: *mut ChPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

macro_rules! closed_kernel {
    ($(#[$doc:meta])* $name:ident, $args:ty, $conv:ty, $f:path) => {
        $(#[$doc])*
        ///
        /// # Safety
        /// `args` must point to a valid struct and `out` be valid for writes.
        #[no_mangle]
        pub unsafe extern "C" fn $name(args: *const $args, out: *mut ChComplex) -> ChStatus {
            guard(|| {
                let a = <$conv>::from(borrow(args, "args")?);
                write(out, "out", $f(&a)?.into())
            })
        }
    };
}

macro_rules! series_kernel {
    ($(#[$doc:meta])* $name:ident, $args:ty, $conv:ty, $f:path) => {
        $(#[$doc])*
        ///
        /// # Safety
        /// `args` must point to a valid struct and `out` be valid for writes.
        #[no_mangle]
        pub unsafe extern "C" fn $name(
            args: *const $args,
            max_order: usize,
            tail_tol: f64,
            out: *mut ChSeries,
        ) -> ChStatus {
            guard(|| {
                let a = <$conv>::from(borrow(args, "args")?);
                write(out, "out", $f(&a, trunc(max_order, tail_tol)?)?.into())
            })
        }
    };
}

closed_kernel!(
    /// `exp(nu(u z + v zbar - u v))`.
    ch_egf_closed, ChKernelArgs, KernelArgs, kernels::egf_closed
);
series_kernel!(
    /// `sum u^m v^n / (m! n!) H_{m,n}(z)`.
    ch_egf_series, ChKernelArgs, KernelArgs, kernels::egf_series
);
closed_kernel!(
    /// First Mehler kernel in closed form; needs `|u| < 1`.
    ch_mehler1_closed, ChKernelArgs, KernelArgs, kernels::mehler1_closed
);
series_kernel!(
    /// First Mehler kernel as a double series.
    ch_mehler1_series, ChKernelArgs, KernelArgs, kernels::mehler1_series
);
closed_kernel!(
    /// Second Mehler kernel in closed form; needs `uv` real and `nu nu' uv < 1`.
    ch_mehler2_closed, ChKernelArgs, KernelArgs, kernels::mehler2_closed
);
series_kernel!(
    /// Second Mehler kernel as a double series.
    ch_mehler2_series, ChKernelArgs, KernelArgs, kernels::mehler2_series
);
closed_kernel!(
    /// Heat kernel of the magnetic Laplacian; needs `t > 0`.
    ch_heat_kernel_closed, ChHeatArgs, HeatArgs, kernels::heat_kernel_closed
);
series_kernel!(
    /// Heat kernel as its spectral double series.
    ch_heat_kernel_series, ChHeatArgs, HeatArgs, kernels::heat_kernel_series
);

/// Classical Mehler kernel `E_t(x, y)`; needs `|t| < 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_classical_mehler_closed(t: f64, x: f64, y: f64, out: *mut f64) -> ChStatus {
    guard(|| write(out, "out", kernels::classical_mehler_closed(t, x, y)?))
}

/// `sum t^n H_n(x) H_n(y) / (2^n n!)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_classical_mehler_series(
    t: f64,
    x: f64,
    y: f64,
    max_order: usize,
    tail_tol: f64,
    out: *mut ChSeries,
) -> ChStatus {
    guard(|| write(out, "out", kernels::classical_mehler_series(t, x, y, trunc(max_order, tail_tol)?)?.into()))
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Creates a rule with `nodes_per_axis` nodes per axis for the weight
/// `exp(-scale |xi|^2)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_rule_new(nodes_per_axis: usize, scale: f64, out: *mut *mut ChRule) -> ChStatus {
    guard(|| {
        let rule = QuadratureRule::new(nodes_per_axis, scale)?;
        write(out, "out", Box::into_raw(Box::new(ChRule { inner: rule })))
    })
}

/// # Safety
/// `rule` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ch_rule_free(rule: *mut ChRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// `int exp(-gamma|xi|^2 + alpha xi + beta conj(xi))` by quadrature. The rule
/// is rescaled to `gamma`; only its node count is used.
///
/// # Safety
/// `rule` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_gaussian_integral_quad(
    rule: *const ChRule,
    gamma: f64,
    alpha: ChComplex,
    beta: ChComplex,
    out: *mut ChComplex,
) -> ChStatus {
    guard(|| {
        let r = borrow(rule, "rule")?;
        let v = quadrature::gaussian_integral_quad(gamma, alpha.into(), beta.into(), &r.inner)?;
        write(out, "out", v.into())
    })
}

/// `(pi/gamma) exp(alpha beta / gamma)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_gaussian_integral_closed(
    gamma: f64,
    alpha: ChComplex,
    beta: ChComplex,
    out: *mut ChComplex,
) -> ChStatus {
    guard(|| write(out, "out", quadrature::gaussian_integral_closed(gamma, alpha.into(), beta.into())?.into()))
}

/// `int |H^nu_{m,n}|^2 exp(-nu|z|^2)` by quadrature with the rule rescaled to `nu`.
///
/// # Safety
/// `rule` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_norm_squared_quad(
    rule: *const ChRule,
    m: u32,
    n: u32,
    nu: f64,
    out: *mut f64,
) -> ChStatus {
    guard(|| {
        let r = borrow(rule, "rule")?;
        let scaled = r.inner.with_scale(nu)?;
        write(out, "out", quadrature::norm_squared_quad(m, n, nu, &scaled)?)
    })
}

/// `(pi/nu) nu^(m+n) m! n!`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_norm_squared_closed(m: u32, n: u32, nu: f64, out: *mut f64) -> ChStatus {
    guard(|| write(out, "out", quadrature::norm_squared_closed(m, n, nu)?))
}

/// `H^nu_{m,n}(z)` with `nu = alpha beta / mu` from its integral representation.
///
/// # Safety
/// `rule` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_chp_integral_rep(
    rule: *const ChRule,
    m: u32,
    n: u32,
    z: ChComplex,
    mu: f64,
    alpha: ChComplex,
    beta: ChComplex,
    out: *mut ChComplex,
) -> ChStatus {
    guard(|| {
        let r = borrow(rule, "rule")?;
        let params = IntegralRepParams::new(mu, alpha.into(), beta.into())?;
        let scaled = r.inner.with_scale(mu)?;
        write(out, "out", quadrature::chp_integral_rep(m, n, z.into(), &params, &scaled)?.into())
    })
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Number of identities in the catalog.
#[no_mangle]
pub extern "C" fn ch_identity_count() -> usize {
    IdentityId::ALL.len()
}

/// Name of catalog entry `index` as a static string, or null when out of range.
#[no_mangle]
pub extern "C" fn ch_identity_name(index: usize) -> *const c_char {
    static NAMES: std::sync::OnceLock<Vec<CString>> = std::sync::OnceLock::new();
    let names = NAMES.get_or_init(|| IdentityId::ALL.iter().map(|id| CString::new(id.as_str()).unwrap()).collect());
    names.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

/// Runs the verification suite. `ids` holds `n_ids` identity names; pass
/// `n_ids = 0` to run the whole catalog.
///
/// # Safety
/// `ids` must point to `n_ids` valid C strings (or be null when `n_ids` is 0)
/// and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ch_suite_run(
    seed: u64,
    samples_per_identity: usize,
    ids: *const *const c_char,
    n_ids: usize,
    out: *mut *mut ChSuite,
) -> ChStatus {
    guard(|| {
        let ids = if n_ids == 0 {
            IdentityId::ALL.to_vec()
        } else {
            if ids.is_null() {
                return Err(null("ids"));
            }
            std::slice::from_raw_parts(ids, n_ids)
                .iter()
                .map(|&p| {
                    if p.is_null() {
                        return Err(null("identity name"));
                    }
                    let s = CStr::from_ptr(p)
                        .to_str()
                        .map_err(|_| Fail(ChStatus::InvalidArgument, "identity name is not UTF-8".into()))?;
                    Ok(s.parse::<IdentityId>()?)
                })
                .collect::<Result<Vec<_>, Fail>>()?
        };
        let spec = SampleSpec { seed, samples_per_identity, ids, max_order: None };
        let inner = verify::run_suite(&spec);
        let json = inner
            .reports
            .iter()
            .map(|r| CString::new(r.to_json_line()).expect("JSON has no NUL"))
            .collect();
        write(out, "out", Box::into_raw(Box::new(ChSuite { inner, json })))
    })
}

/// Number of reports, or 0 for null.
///
/// # Safety
/// `suite` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_suite_len(suite: *const ChSuite) -> usize {
    suite.as_ref().map_or(0, |s| s.inner.reports.len())
}

/// Report `index` as one line of JSON, owned by the suite; null when out of range.
///
/// # Safety
/// `suite` must be null or a live handle. The string lives as long as the suite.
#[no_mangle]
pub unsafe extern "C" fn ch_suite_report_json(suite: *const ChSuite, index: usize) -> *const c_char {
    suite
        .as_ref()
        .and_then(|s| s.json.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// Reports whose outcome differs from what their identity expects: a failure
/// for an ordinary identity, or an unconfirmed mismatch for an expected-fail
/// one. Returns `(size_t)-1` for null.
///
/// # Safety
/// `suite` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ch_suite_unexpected_failures(suite: *const ChSuite) -> usize {
    suite.as_ref().map_or(usize::MAX, |s| s.inner.summary.unexpected_failures)
}

/// # Safety
/// `suite` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ch_suite_free(suite: *mut ChSuite) {
    if !suite.is_null() {
        drop(Box::from_raw(suite));
    }
}
