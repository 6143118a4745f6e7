//! C ABI over the regpet library.
//!
//! Series and cocycle evaluators are opaque heap handles created by
//! `regpet_*_new`-style constructors and released with the matching
//! `*_free`.  Every fallible call returns a [`RegpetStatus`]; on failure the
//! message is kept per thread and read back with [`regpet_last_error`].
//! Strings handed out by the library are released with [`regpet_string_free`].

use num_complex::Complex64;
use num_traits::ToPrimitive;
use regpet::cmtraces;
use regpet::cocycle::{CocycleEvaluator, CocycleSettings};
use regpet::kloosterman;
use regpet::lseries::{self, ConstantTerm};
use regpet::qseries::{self, QSeries};
use regpet::regprod::{self, RouteBSettings};
use regpet::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegpetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Series order or coefficient coverage insufficient for the request.
    OrderTooSmall = 3,
    /// Quadrature, rounding or conditioning failure.
    Numerical = 4,
    Unsupported = 5,
    /// Malformed JSON or non UTF-8 input.
    Parse = 6,
    Io = 7,
    /// A Rust panic was caught at the boundary.
    Panic = 8,
}

/// Exact Laurent q-expansion with rational coefficients.
pub struct RegpetSeries(QSeries);

/// Evaluator for the error-of-modularity cocycle of a form of weight k <= 0.
pub struct RegpetCocycle(CocycleEvaluator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RegpetStatus {
    match e {
        Error::OrderTooSmall { .. } | Error::Coverage(_) => RegpetStatus::OrderTooSmall,
        Error::Accuracy(_)
        | Error::Quadrature(_)
        | Error::IllConditioned(_)
        | Error::Rounding { .. }
        | Error::ZeroLeading => RegpetStatus::Numerical,
        Error::Unsupported(_) => RegpetStatus::Unsupported,
        Error::Io(_) => RegpetStatus::Io,
        _ => RegpetStatus::InvalidArgument,
    }
}

struct Fail(RegpetStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RegpetStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> RegpetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RegpetStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            RegpetStatus::Panic
        }
    }
}

unsafe fn series<'a>(p: *const RegpetSeries) -> Result<&'a QSeries, Fail> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null("series"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_series(out: *mut *mut RegpetSeries, s: QSeries) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(RegpetSeries(s))));
    Ok(())
}

unsafe fn put_complex(re: *mut f64, im: *mut f64, z: Complex64) -> Result<(), Fail> {
    if re.is_null() || im.is_null() {
        return Err(null("output pointer"));
    }
    re.write(z.re);
    im.write(z.im);
    Ok(())
}

/// Message of the last failure on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn regpet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Short static description of a status code.
#[no_mangle]
pub extern "C" fn regpet_status_str(s: RegpetStatus) -> *const c_char {
    let t: &'static [u8] = match s {
        RegpetStatus::Ok => b"ok\0",
        RegpetStatus::NullPointer => b"null pointer\0",
        RegpetStatus::InvalidArgument => b"invalid argument\0",
        RegpetStatus::OrderTooSmall => b"series order too small\0",
        RegpetStatus::Numerical => b"numerical failure\0",
        RegpetStatus::Unsupported => b"unsupported\0",
        RegpetStatus::Parse => b"parse error\0",
        RegpetStatus::Io => b"io error\0",
        RegpetStatus::Panic => b"internal panic\0",
    };
    t.as_ptr().cast()
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn regpet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Faber basis element q^{-m} + O(q) of weight 0, known below exponent `order`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_faber(m: i64, order: i64, out: *mut *mut RegpetSeries) -> RegpetStatus {
    guard(|| put_series(out, qseries::faber_basis(m, order)?))
}

/// Weakly holomorphic basis element q^{-m} + O(q) of even weight k < 0.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_wh(k: i64, m: i64, order: i64, out: *mut *mut RegpetSeries) -> RegpetStatus {
    guard(|| put_series(out, qseries::wh_basis(k, m, order)?))
}

/// The discriminant function.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_delta(order: i64, out: *mut *mut RegpetSeries) -> RegpetStatus {
    guard(|| put_series(out, qseries::delta(order)))
}

/// The weight 4 Eisenstein series.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_e4(order: i64, out: *mut *mut RegpetSeries) -> RegpetStatus {
    guard(|| put_series(out, qseries::e4(order)))
}

/// J = j - 744.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_hauptmodul(order: i64, out: *mut *mut RegpetSeries) -> RegpetStatus {
    guard(|| put_series(out, cmtraces::hauptmodul(order)))
}

/// Parse a series from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_from_json(json: *const c_char, out: *mut *mut RegpetSeries) -> RegpetStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| Fail(RegpetStatus::Parse, e.to_string()))?;
        let j = serde_json::from_str(text).map_err(|e| Fail(RegpetStatus::Parse, e.to_string()))?;
        put_series(out, QSeries::from_json(&j)?)
    })
}

/// Serialize a series to JSON; release the result with `regpet_string_free`.
///
/// # Safety
/// `s` must be a live series handle; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_to_json(s: *const RegpetSeries, out: *mut *mut c_char) -> RegpetStatus {
    guard(|| {
        let text = serde_json::to_string(&series(s)?.to_json()).map_err(|e| Fail(RegpetStatus::Parse, e.to_string()))?;
        let c = CString::new(text).map_err(|e| Fail(RegpetStatus::Parse, e.to_string()))?;
        put(out, c.into_raw())
    })
}

/// Twice the weight of a series.
///
/// # Safety
/// `s` must be a live series handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_weight2(s: *const RegpetSeries, out: *mut i64) -> RegpetStatus {
    guard(|| put(out, series(s)?.weight2()))
}

/// Coefficient at exponent n as a double.  Exponents outside the known range
/// are an error; known exponents with no stored term give 0.
///
/// # Safety
/// `s` must be a live series handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_coeff(s: *const RegpetSeries, n: i64, out: *mut f64) -> RegpetStatus {
    guard(|| {
        let c = series(s)?.coeff(n).ok_or_else(|| Fail(RegpetStatus::OrderTooSmall, format!("exponent {n} beyond the series order")))?;
        put(out, c.to_f64().unwrap_or(f64::NAN))
    })
}

/// Exact coefficient at exponent n as "p/q" or "p"; release with
/// `regpet_string_free`.
///
/// # Safety
/// `s` must be a live series handle; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_coeff_exact(s: *const RegpetSeries, n: i64, out: *mut *mut c_char) -> RegpetStatus {
    guard(|| {
        let c = series(s)?.coeff(n).ok_or_else(|| Fail(RegpetStatus::OrderTooSmall, format!("exponent {n} beyond the series order")))?;
        put(out, CString::new(c.to_string()).unwrap_or_default().into_raw())
    })
}

/// Evaluate the truncated series at tau = re + i im.
///
/// # Safety
/// `s` must be a live series handle; outputs valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_eval(s: *const RegpetSeries, re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> RegpetStatus {
    guard(|| {
        if im <= 0.0 || !re.is_finite() || !im.is_finite() {
            return Err(Fail(RegpetStatus::InvalidArgument, "tau must lie in the upper half plane".into()));
        }
        put_complex(out_re, out_im, series(s)?.eval(Complex64::new(re, im)))
    })
}

/// Release a series handle.
///
/// # Safety
/// `s` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn regpet_series_free(s: *mut RegpetSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Regularized inner product of two level-one forms of the same weight by the
/// truncated-domain route.  `err` receives the error estimate and may be null.
///
/// # Safety
/// `f`, `g` must be live series handles; `re`, `im` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_inner_product(
    f: *const RegpetSeries,
    g: *const RegpetSeries,
    re: *mut f64,
    im: *mut f64,
    err: *mut f64,
) -> RegpetStatus {
    guard(|| {
        let r = regprod::product_route_b_scalar(series(f)?, series(g)?, &RouteBSettings::default())?;
        put_complex(re, im, r.value)?;
        if !err.is_null() {
            err.write(r.err);
        }
        Ok(())
    })
}

/// Completed L-series L*(s) split at t0.  With `drop_constant` the constant
/// term is left out, which makes s = 0 and s = k admissible.
///
/// # Safety
/// `g` must be a live series handle; `re`, `im` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_lstar(
    g: *const RegpetSeries,
    s: f64,
    t0: f64,
    drop_constant: bool,
    re: *mut f64,
    im: *mut f64,
) -> RegpetStatus {
    guard(|| {
        let conv = if drop_constant { ConstantTerm::Dropped } else { ConstantTerm::Full };
        put_complex(re, im, lseries::lstar(series(g)?, s, t0, conv)?.value())
    })
}

/// Trace of a weight-0 form over CM points of discriminant d < 0, or over
/// closed geodesics of discriminant d > 0.
///
/// # Safety
/// `f` must be a live series handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_trace(f: *const RegpetSeries, d: i64, out: *mut f64) -> RegpetStatus {
    guard(|| {
        let f = series(f)?;
        let t = if d < 0 { cmtraces::cm_trace(f, d)? } else { cmtraces::cycle_trace(f, d)? };
        put(out, t.value)
    })
}

/// Kloosterman sum K(m, n; c).
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_kloosterman(m: i64, n: i64, c: u64, out: *mut f64) -> RegpetStatus {
    guard(|| put(out, kloosterman::kloosterman_sum(m, n, c)?))
}

/// Build a cocycle evaluator for a level-one form of even weight k <= 0.
/// `height` <= 0 selects the default cut-off height.
///
/// # Safety
/// `f` must be a live series handle; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn regpet_cocycle_new(f: *const RegpetSeries, height: f64, out: *mut *mut RegpetCocycle) -> RegpetStatus {
    guard(|| {
        let mut s = CocycleSettings::default();
        if height > 0.0 {
            s.height = height;
        }
        let ev = CocycleEvaluator::new(series(f)?, s)?;
        put(out, Box::into_raw(Box::new(RegpetCocycle(ev))))
    })
}

unsafe fn cocycle<'a>(p: *const RegpetCocycle) -> Result<&'a CocycleEvaluator, Fail> {
    p.as_ref().map(|c| &c.0).ok_or_else(|| null("cocycle"))
}

/// The non-holomorphic completion g_f at tau.
///
/// # Safety
/// `c` must be a live cocycle handle; outputs valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_cocycle_g(c: *const RegpetCocycle, re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> RegpetStatus {
    guard(|| put_complex(out_re, out_im, cocycle(c)?.g_f(Complex64::new(re, im))?))
}

/// The error of modularity F_S at tau.
///
/// # Safety
/// `c` must be a live cocycle handle; outputs valid for writing.
#[no_mangle]
pub unsafe extern "C" fn regpet_cocycle_fs(c: *const RegpetCocycle, re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> RegpetStatus {
    guard(|| put_complex(out_re, out_im, cocycle(c)?.f_s(Complex64::new(re, im))?))
}

/// Release a cocycle handle.
///
/// # Safety
/// `c` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn regpet_cocycle_free(c: *mut RegpetCocycle) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}
