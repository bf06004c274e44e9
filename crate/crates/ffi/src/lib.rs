//! C ABI for `mixint`.
//!
//! Objects cross the boundary as opaque handles built from the library's JSON
//! formats. Every fallible call returns a [`MixintStatus`]; on failure the
//! message is kept per thread and read with [`mixint_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mixint::mixed_integral::{mixed_integral, quermassintegral};
use mixint::{BallApprox, Error, LayerCake, Polytope, RadialAlphaProfile};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixintStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidInput = 4,
    Divergent = 5,
    Panic = 6,
}

/// Opaque convex body.
pub struct MixintPolytope(Polytope);
/// Opaque layer cake.
pub struct MixintCake(LayerCake);
/// Opaque radial α-concave profile.
pub struct MixintProfile(RadialAlphaProfile);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MixintStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Json(_) | Error::Input { .. } => MixintStatus::InvalidJson,
            Error::Divergent(_) => MixintStatus::Divergent,
            _ => MixintStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MixintStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MixintStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MixintStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(MixintStatus::NullPointer, "null pointer argument".into())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn parse<T: serde::de::DeserializeOwned>(json: *const c_char) -> Result<T, Failure> {
    if json.is_null() {
        return Err(null());
    }
    let s = CStr::from_ptr(json).to_str().map_err(|e| Failure(MixintStatus::InvalidUtf8, e.to_string()))?;
    serde_json::from_str(s).map_err(|e| Failure(MixintStatus::InvalidJson, e.to_string()))
}

unsafe fn handles<'a, H>(items: *const *const H, len: usize) -> Result<Vec<&'a H>, Failure> {
    if items.is_null() {
        return Err(null());
    }
    std::slice::from_raw_parts(items, len).iter().map(|&h| deref(h)).collect()
}

fn ball(dim: usize, facets: usize) -> Result<BallApprox, Failure> {
    Ok(if facets == 0 { BallApprox::default_for(dim)? } else { BallApprox::new(dim, facets)? })
}

fn boxed<T>(value: T, slot: &mut *mut T) {
    *slot = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn mixint_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mixint_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by a `*_to_json` call.
///
/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn mixint_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a NUL-terminated string; `out_handle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixint_polytope_from_json(json: *const c_char, out_handle: *mut *mut MixintPolytope) -> MixintStatus {
    guard(|| {
        let slot = out(out_handle)?;
        boxed(MixintPolytope(parse(json)?), slot);
        Ok(())
    })
}

/// # Safety
/// `p` must come from `mixint_polytope_from_json` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn mixint_polytope_free(p: *mut MixintPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixint_polytope_volume(p: *const MixintPolytope, out_value: *mut f64) -> MixintStatus {
    guard(|| {
        *out(out_value)? = deref(p)?.0.volume();
        Ok(())
    })
}

/// `V(K_1, …, K_n)` of `len` bodies.
///
/// # Safety
/// `bodies` must point to `len` valid handles.
#[no_mangle]
pub unsafe extern "C" fn mixint_mixed_volume(bodies: *const *const MixintPolytope, len: usize, out_value: *mut f64) -> MixintStatus {
    guard(|| {
        let refs: Vec<&Polytope> = handles(bodies, len)?.into_iter().map(|h| &h.0).collect();
        *out(out_value)? = mixint::mixed_volume(&refs)?;
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out_handle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixint_cake_from_json(json: *const c_char, out_handle: *mut *mut MixintCake) -> MixintStatus {
    guard(|| {
        let slot = out(out_handle)?;
        boxed(MixintCake(parse(json)?), slot);
        Ok(())
    })
}

/// # Safety
/// `c` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn mixint_cake_free(c: *mut MixintCake) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixint_cake_integral(c: *const MixintCake, out_value: *mut f64) -> MixintStatus {
    guard(|| {
        *out(out_value)? = deref(c)?.0.integral();
        Ok(())
    })
}

/// `V(f_1, …, f_n)` of `len` cakes.
///
/// # Safety
/// `cakes` must point to `len` valid handles.
#[no_mangle]
pub unsafe extern "C" fn mixint_mixed_integral(cakes: *const *const MixintCake, len: usize, out_value: *mut f64) -> MixintStatus {
    guard(|| {
        let refs: Vec<&LayerCake> = handles(cakes, len)?.into_iter().map(|h| &h.0).collect();
        *out(out_value)? = mixed_integral(&refs)?.value;
        Ok(())
    })
}

/// `W_k(f)` against the polytopal ball with `ball_facets` facets (0 = default).
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixint_quermassintegral(c: *const MixintCake, k: usize, ball_facets: usize, out_value: *mut f64) -> MixintStatus {
    guard(|| {
        let f = &deref(c)?.0;
        *out(out_value)? = quermassintegral(f, k, &ball(f.dim(), ball_facets)?)?;
        Ok(())
    })
}

/// Symmetric decreasing rearrangement; the result is a new handle.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixint_rearrange(c: *const MixintCake, ball_facets: usize, out_handle: *mut *mut MixintCake) -> MixintStatus {
    guard(|| {
        let slot = out(out_handle)?;
        let f = &deref(c)?.0;
        boxed(MixintCake(mixint::rearrange::rearrange(f, &ball(f.dim(), ball_facets)?)?), slot);
        Ok(())
    })
}

/// # Safety
/// Handles and out-pointers must be valid; free the string with `mixint_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mixint_cake_to_json(c: *const MixintCake, out_json: *mut *mut c_char) -> MixintStatus {
    guard(|| {
        let slot = out(out_json)?;
        let s = serde_json::to_string(&deref(c)?.0).map_err(Error::from)?;
        *slot = CString::new(s).map_err(|e| Failure(MixintStatus::InvalidInput, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out_handle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mixint_profile_from_json(json: *const c_char, out_handle: *mut *mut MixintProfile) -> MixintStatus {
    guard(|| {
        let slot = out(out_handle)?;
        boxed(MixintProfile(parse(json)?), slot);
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn mixint_profile_free(p: *mut MixintProfile) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `f(r)` for a radial profile.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixint_profile_eval(p: *const MixintProfile, r: f64, out_value: *mut f64) -> MixintStatus {
    guard(|| {
        *out(out_value)? = deref(p)?.0.eval(r);
        Ok(())
    })
}

/// α-sum of two profiles with the same α and dimension; the result is a new handle.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mixint_alpha_sum(
    a: *const MixintProfile,
    b: *const MixintProfile,
    out_handle: *mut *mut MixintProfile,
) -> MixintStatus {
    guard(|| {
        let slot = out(out_handle)?;
        boxed(MixintProfile(deref(a)?.0.alpha_sum(&deref(b)?.0)?), slot);
        Ok(())
    })
}

/// # Safety
/// Handles and out-pointers must be valid; free the string with `mixint_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mixint_profile_to_json(p: *const MixintProfile, out_json: *mut *mut c_char) -> MixintStatus {
    guard(|| {
        let slot = out(out_json)?;
        let s = serde_json::to_string(&deref(p)?.0).map_err(Error::from)?;
        *slot = CString::new(s).map_err(|e| Failure(MixintStatus::InvalidInput, e.to_string()))?.into_raw();
        Ok(())
    })
}
