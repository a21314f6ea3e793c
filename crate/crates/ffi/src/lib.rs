//! C ABI over the `sato-tate` library.
//!
//! Histograms cross the boundary as opaque `StHistogram` handles owned by the
//! caller and released with [`st_histogram_free`]. Every fallible function
//! returns an [`StStatus`]; on failure a description is available from
//! [`st_last_error`] on the same thread. Exact rationals are returned as
//! `num/den` strings that must be released with [`st_string_free`].
//!
//! The header `include/sato_tate.h` is regenerated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use sato_tate::cache::{load_cached, load_or_compute, write_cache};
use sato_tate::{
    ExactRational, Interval, MeasureSpec, ScanStrategy, TraceHistogram,
};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    SingularCurve = 4,
    Io = 5,
    CorruptCache = 6,
    InvalidHistogram = 7,
    Divergent = 8,
    Panic = 9,
}

/// Opaque trace histogram for one prime.
pub struct StHistogram(TraceHistogram);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &sato_tate::Error) -> StStatus {
    use sato_tate::Error::*;
    match err {
        InvalidArgument(_) => StStatus::InvalidArgument,
        NotAdmissiblePrime(_) => StStatus::NotPrime,
        SingularCurve { .. } => StStatus::SingularCurve,
        NumeratorPole(_) => StStatus::Divergent,
        CorruptCache { .. } => StStatus::CorruptCache,
        InvalidHistogram { .. } => StStatus::InvalidHistogram,
        Io { .. } => StStatus::Io,
    }
}

impl From<sato_tate::Error> for Failure {
    fn from(err: sato_tate::Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

struct Failure(StStatus, String);

fn null(what: &str) -> Failure {
    Failure(StStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            StStatus::Panic
        }
    }
}

unsafe fn hist_ref<'a>(h: *const StHistogram) -> Result<&'a TraceHistogram, Failure> {
    h.as_ref().map(|h| &h.0).ok_or_else(|| null("histogram"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn path_arg(s: *const c_char) -> Result<PathBuf, Failure> {
    if s.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(StStatus::InvalidArgument, format!("path is not UTF-8: {e}")))?;
    Ok(PathBuf::from(s))
}

fn rational_string(x: &ExactRational) -> *mut c_char {
    CString::new(x.to_string()).map_or(ptr::null_mut(), CString::into_raw)
}

fn interval(lo: f64, hi: f64) -> Result<Interval, Failure> {
    Ok(Interval::new(lo, hi)?)
}

/// Static description of a status code. Never NULL; do not free.
#[no_mangle]
pub extern "C" fn st_status_message(status: StStatus) -> *const c_char {
    let s: &'static CStr = match status {
        StStatus::Ok => c"ok",
        StStatus::NullPointer => c"null pointer argument",
        StStatus::InvalidArgument => c"invalid argument",
        StStatus::NotPrime => c"not a prime >= 5",
        StStatus::SingularCurve => c"singular curve",
        StStatus::Io => c"I/O error",
        StStatus::CorruptCache => c"corrupt cache file",
        StStatus::InvalidHistogram => c"invalid histogram",
        StStatus::Divergent => c"divergent Gamma ratio",
        StStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn st_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Scans every curve `y^2 = x^3 + a x + b` over `F_p`. With `orbits` set, one
/// curve per twist orbit is scanned instead.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_scan(p: u64, orbits: bool, out: *mut *mut StHistogram) -> StStatus {
    guard(|| {
        let strategy = if orbits {
            ScanStrategy::TwistOrbits
        } else {
            ScanStrategy::Direct
        };
        let hist = sato_tate::family_histogram_with(p, strategy)?;
        write_out(out, Box::into_raw(Box::new(StHistogram(hist))), "out")
    })
}

/// Loads the cached histogram for `p` from `dir`. When `compute` is set a
/// missing or invalid cache is recomputed and written back.
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_load(
    dir: *const c_char,
    p: u64,
    compute: bool,
    out: *mut *mut StHistogram,
) -> StStatus {
    guard(|| {
        let dir = path_arg(dir)?;
        let hist = if compute {
            load_or_compute(&dir, p, ScanStrategy::Direct)?.hist
        } else {
            load_cached(&dir, p)?
        };
        write_out(out, Box::into_raw(Box::new(StHistogram(hist))), "out")
    })
}

/// Writes the histogram's cache file into `dir`.
///
/// # Safety
/// `h` must be a live handle and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_save(h: *const StHistogram, dir: *const c_char) -> StStatus {
    guard(|| {
        let hist = hist_ref(h)?;
        write_cache(&path_arg(dir)?, hist)?;
        Ok(())
    })
}

/// Releases a histogram handle. NULL is ignored.
///
/// # Safety
/// `h` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_free(h: *mut StHistogram) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// The prime, or 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_prime(h: *const StHistogram) -> u64 {
    h.as_ref().map_or(0, |h| h.0.p())
}

/// `V_p = p (p - 1)`, or 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_family_size(h: *const StHistogram) -> u64 {
    h.as_ref().map_or(0, |h| h.0.v_p())
}

/// Number of nonzero buckets, or 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_len(h: *const StHistogram) -> usize {
    h.as_ref().map_or(0, |h| h.0.counts().len())
}

/// The `index`-th bucket in ascending trace order.
///
/// # Safety
/// `h` must be a live handle; `trace` and `count` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_histogram_bucket(
    h: *const StHistogram,
    index: usize,
    trace: *mut i64,
    count: *mut u64,
) -> StStatus {
    guard(|| {
        let hist = hist_ref(h)?;
        let (t, c) = hist.buckets().nth(index).ok_or_else(|| {
            Failure(
                StStatus::InvalidArgument,
                format!("bucket index {index} out of range ({} buckets)", hist.counts().len()),
            )
        })?;
        write_out(trace, t, "trace")?;
        write_out(count, c, "count")
    })
}

/// `M_p(2R)`. `value` receives the nearest double; `exact`, when not NULL,
/// receives a newly allocated `num/den` string.
///
/// # Safety
/// `h` must be a live handle; `value` must be valid for writing; `exact` must
/// be NULL or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_empirical_moment(
    h: *const StHistogram,
    r: u32,
    value: *mut f64,
    exact: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let m = sato_tate::empirical_moment(hist_ref(h)?, r);
        write_out(value, m.to_f64(), "value")?;
        if !exact.is_null() {
            exact.write(rational_string(&m));
        }
        Ok(())
    })
}

/// `sum_n cos(2 m theta_n)` computed exactly; see [`st_empirical_moment`] for
/// the output conventions.
///
/// # Safety
/// As for [`st_empirical_moment`].
#[no_mangle]
pub unsafe extern "C" fn st_expsum_exact(
    h: *const StHistogram,
    m: u64,
    value: *mut f64,
    exact: *mut *mut c_char,
) -> StStatus {
    guard(|| {
        let s = sato_tate::expsum_exact(hist_ref(h)?, m)?;
        write_out(value, s.to_f64(), "value")?;
        if !exact.is_null() {
            exact.write(rational_string(&s));
        }
        Ok(())
    })
}

/// Sets `is_zero` when the moment expansion identity holds exactly at `m`.
///
/// # Safety
/// `h` must be a live handle; `is_zero` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_moment_identity_holds(
    h: *const StHistogram,
    m: u64,
    is_zero: *mut bool,
) -> StStatus {
    guard(|| {
        let res = sato_tate::moment_identity_residual(hist_ref(h)?, m)?;
        write_out(is_zero, res.is_zero(), "is_zero")
    })
}

/// Sato-Tate discrepancy `|N_I - V_p mu(I)|` of `[lo, hi)`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_discrepancy(h: *const StHistogram, lo: f64, hi: f64, out: *mut f64) -> StStatus {
    guard(|| {
        let d = sato_tate::discrepancy(hist_ref(h)?, interval(lo, hi)?, &MeasureSpec::sato_tate());
        write_out(out, d, "out")
    })
}

/// Erdős–Turán bound on the Sato-Tate discrepancy of `[lo, hi)` with cutoff `m_cutoff`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_et_bound(
    h: *const StHistogram,
    lo: f64,
    hi: f64,
    m_cutoff: u64,
    out: *mut f64,
) -> StStatus {
    guard(|| {
        let b = sato_tate::et_bound(hist_ref(h)?, interval(lo, hi)?, &MeasureSpec::sato_tate(), m_cutoff)?;
        write_out(out, b, "out")
    })
}

/// `max(1, floor((3 - c - epsilon) / 6 * ln V_p))`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_optimal_m(v_p: u64, c: f64, epsilon: f64, out: *mut u64) -> StStatus {
    guard(|| write_out(out, sato_tate::optimal_m(v_p, c, epsilon)?, "out"))
}

/// The identity sum for `m` by direct summation, as a `num/den` string.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_s_m_direct(m: u64, out: *mut *mut c_char) -> StStatus {
    guard(|| write_out(out, rational_string(&sato_tate::s_m_direct(m)?), "out"))
}

/// The identity sum for `m` through Gauss's hypergeometric closed form.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_s_m_hyper(m: u64, out: *mut *mut c_char) -> StStatus {
    guard(|| write_out(out, rational_string(&sato_tate::s_m_hyper(m)?), "out"))
}

/// The `r`-th Catalan number as a decimal string.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn st_catalan(r: u64, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let c = ExactRational::from_integer(sato_tate::catalan(r));
        write_out(out, rational_string(&c), "out")
    })
}
