//! C ABI over `cayleymc`.
//!
//! Tuples cross the boundary as opaque `CmcTuple` handles freed with
//! `cmc_tuple_free`; strings returned by the library are freed with
//! `cmc_string_free`. Every entry point returns a `CmcStatus`; on failure the
//! message is available from `cmc_last_error` until the next call on the same
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cayleymc::cayley::{cayley_solution, trace_field, CayleyParams};
use cayleymc::convolution::{induced_pushforward, middle_convolve, ConvolutionScalar, CoverCharacter};
use cayleymc::elliptic::{check_flow, LegendreCurve};
use cayleymc::exactalg::{CycNum, Fp, Fp2, Rat};
use cayleymc::mcg::{orbit, OrbitSize};
use cayleymc::monodromy::{is_irreducible, star_check, MonodromyTuple};
use cayleymc::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameter = 4,
    Precondition = 5,
    Computation = 6,
    Panic = 7,
}

/// Opaque monodromy tuple.
pub struct CmcTuple(MonodromyTuple);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CmcStatus {
    match e {
        Error::Parse(_) => CmcStatus::Parse,
        Error::Parameter(_) => CmcStatus::InvalidParameter,
        Error::Precondition(_) | Error::OffCurve => CmcStatus::Precondition,
        _ => CmcStatus::Computation,
    }
}

struct Fail(CmcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CmcStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CmcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CmcStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(CmcStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(CmcStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn read_tuple<'a>(t: *const CmcTuple) -> Result<&'a MonodromyTuple, Fail> {
    t.as_ref().map(|t| &t.0).ok_or_else(|| Fail(CmcStatus::NullPointer, "null tuple".into()))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(CmcStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_tuple(out: *mut *mut CmcTuple, t: MonodromyTuple) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(CmcStatus::NullPointer, "null output pointer".into()));
    }
    out.write(Box::into_raw(Box::new(CmcTuple(t))));
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cmc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `t` must be null or a handle returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cmc_tuple_free(t: *mut CmcTuple) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Cayley tuple for rational parameters written like `"1/3"`.
///
/// # Safety
/// `alpha` and `beta` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_cayley_solution(
    alpha: *const c_char,
    beta: *const c_char,
    out: *mut *mut CmcTuple,
) -> CmcStatus {
    guard(|| {
        let p = CayleyParams::parse(read_str(alpha)?, read_str(beta)?)?;
        write_tuple(out, cayley_solution(&p)?)
    })
}

/// Induced tuple of the character `(a, b)` of order dividing `m`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_pushforward(m: u64, a: i64, b: i64, out: *mut *mut CmcTuple) -> CmcStatus {
    guard(|| write_tuple(out, induced_pushforward(&CoverCharacter::new(m, a, b)?)?))
}

/// Middle convolution with the scalar `exp(2πi·k/n)`.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_middle_convolve(
    t: *const CmcTuple,
    k: i64,
    n: u64,
    out: *mut *mut CmcTuple,
) -> CmcStatus {
    guard(|| {
        let t = read_tuple(t)?;
        if n == 0 {
            return Err(Fail(CmcStatus::InvalidParameter, "scalar order must be positive".into()));
        }
        let c = ConvolutionScalar::new(CycNum::root_of_unity(n, k))?;
        write_tuple(out, middle_convolve(t, &c)?.descended())
    })
}

/// Parses `{"M0": ..., "M1": ..., "Mlambda": ...}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_tuple_from_json(json: *const c_char, out: *mut *mut CmcTuple) -> CmcStatus {
    guard(|| {
        let t: MonodromyTuple =
            serde_json::from_str(read_str(json)?).map_err(|e| Fail(CmcStatus::Parse, e.to_string()))?;
        write_tuple(out, t)
    })
}

/// # Safety
/// `t` must be a live handle; `out` must be writable. Free the result with
/// `cmc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cmc_tuple_to_json(t: *const CmcTuple, out: *mut *mut c_char) -> CmcStatus {
    guard(|| {
        let s = serde_json::to_string(read_tuple(t)?).map_err(|e| Fail(CmcStatus::Computation, e.to_string()))?;
        write(out, CString::new(s).expect("JSON has no nul bytes").into_raw())
    })
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_tuple_rank(t: *const CmcTuple, out: *mut usize) -> CmcStatus {
    guard(|| write(out, read_tuple(t)?.rank()))
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_star_check(t: *const CmcTuple, out: *mut bool) -> CmcStatus {
    guard(|| write(out, star_check(read_tuple(t)?)))
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_is_irreducible(t: *const CmcTuple, out: *mut bool) -> CmcStatus {
    guard(|| write(out, is_irreducible(read_tuple(t)?)))
}

/// # Safety
/// `t` must be a live handle; `degree` and `conductor` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_trace_field(t: *const CmcTuple, degree: *mut u64, conductor: *mut u64) -> CmcStatus {
    guard(|| {
        let tf = trace_field(read_tuple(t)?)?;
        write(degree, tf.degree)?;
        write(conductor, tf.conductor)
    })
}

/// Pure braid orbit size; `finite` is false when `bound` was exceeded.
///
/// # Safety
/// `t` must be a live handle; `size` and `finite` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_orbit_size(t: *const CmcTuple, bound: usize, size: *mut usize, finite: *mut bool) -> CmcStatus {
    guard(|| {
        let r = orbit(read_tuple(t)?, bound)?;
        let n = r.points.len();
        write(size, n)?;
        write(finite, matches!(r.size, OrbitSize::Finite(_)))
    })
}

/// Samples points of `y² = x(x − 1)(x − λ)` over `𝔽_{q²}` and counts those
/// with `g_p(x(P)) = x([p]P)`.
///
/// # Safety
/// `lambda` must be a nul-terminated rational like `"-1/3"`; `agreeing` and
/// `fixes_branch_points` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cmc_flow_check(
    lambda: *const c_char,
    p: u32,
    q: u64,
    samples: usize,
    seed: u64,
    agreeing: *mut usize,
    fixes_branch_points: *mut bool,
) -> CmcStatus {
    guard(|| {
        let l: Rat = read_str(lambda)?.parse()?;
        let e = LegendreCurve::new(Fp2::from_base(Fp::from_rat(&l, q)?))?;
        let (_, check) = check_flow(&e, p, samples, seed)?;
        write(agreeing, check.agreeing)?;
        write(fixes_branch_points, check.fixes_branch_points)
    })
}
