//! C ABI over the `nilpow` engine.
//!
//! Every entry point returns a [`NilpowStatus`]; results go through out
//! parameters. On failure, [`nilpow_last_error`] describes the most recent
//! error on the calling thread. Handles are opaque and owned by the caller,
//! who releases them with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nilpow::certify::{self, Certificate, Verdict};
use nilpow::{Algebra, AlgebraSpec, DerivedTower, Error, FieldSpec, PrimeField, Rationals};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilpowStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    NotFound = 4,
    Internal = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilpowVerdict {
    Verified = 0,
    Inconclusive = 1,
}

enum Engine {
    Prime(Algebra<PrimeField>),
    Rational(Algebra<Rationals>),
}

macro_rules! with_engine {
    ($engine:expr, $alg:ident => $body:expr) => {
        match $engine {
            Engine::Prime($alg) => $body,
            Engine::Rational($alg) => $body,
        }
    };
}

/// A validated presentation together with its word basis.
pub struct NilpowSpec {
    engine: Engine,
}

pub struct NilpowCertificate {
    cert: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> NilpowStatus {
    match err {
        Error::BudgetExceeded { .. } => NilpowStatus::BudgetExceeded,
        Error::InternalSoundnessFailure(_) => NilpowStatus::Internal,
        _ => NilpowStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (NilpowStatus, String)>) -> NilpowStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NilpowStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside nilpow");
            NilpowStatus::Panic
        }
    }
}

fn fail(err: Error) -> (NilpowStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (NilpowStatus, String) {
    (NilpowStatus::NullPointer, format!("{what} is null"))
}

unsafe fn spec_ref<'a>(spec: *const NilpowSpec) -> Result<&'a NilpowSpec, (NilpowStatus, String)> {
    spec.as_ref().ok_or_else(|| null("spec"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nilpow_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nilpow_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a presentation with `m` generators of nil exponents `nil[0..m]`.
/// `field` is `"fp:<p>"` or `"q"`; NULL means F_32003. `budget` caps the
/// dimension of any component touched; 0 selects the default.
///
/// # Safety
/// `nil` must point to `m` readable values, `field` must be NULL or a
/// NUL-terminated string, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nilpow_spec_new(
    nil: *const u32,
    m: usize,
    field: *const c_char,
    max_degree: usize,
    budget: u64,
    out: *mut *mut NilpowSpec,
) -> NilpowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if nil.is_null() {
            return Err(null("nil"));
        }
        let nil = std::slice::from_raw_parts(nil, m).to_vec();
        let field = if field.is_null() {
            FieldSpec::default()
        } else {
            let s = CStr::from_ptr(field)
                .to_str()
                .map_err(|_| (NilpowStatus::InvalidArgument, "field is not UTF-8".to_string()))?;
            s.parse().map_err(fail)?
        };
        let spec = AlgebraSpec::new(nil, field, max_degree).map_err(fail)?;
        let engine = match field {
            FieldSpec::Prime(p) => {
                Engine::Prime(Algebra::new(spec, PrimeField::new(p).map_err(fail)?).map_err(fail)?)
            }
            FieldSpec::Rationals => Engine::Rational(Algebra::new(spec, Rationals).map_err(fail)?),
        };
        let engine = if budget == 0 {
            engine
        } else {
            match engine {
                Engine::Prime(a) => Engine::Prime(a.with_budget(budget)),
                Engine::Rational(a) => Engine::Rational(a.with_budget(budget)),
            }
        };
        *out = Box::into_raw(Box::new(NilpowSpec { engine }));
        Ok(())
    })
}

/// # Safety
/// `spec` must be NULL or a handle from [`nilpow_spec_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nilpow_spec_free(spec: *mut NilpowSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Number of normal words of length `degree`, i.e. `dim A_degree`.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilpow_normal_word_count(
    spec: *const NilpowSpec,
    degree: usize,
    out: *mut u64,
) -> NilpowStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if out.is_null() {
            return Err(null("out"));
        }
        with_engine!(&spec.engine, alg => {
            if degree == 0 || degree > alg.max_degree() {
                return Err(fail(Error::DegreeOutOfRange { degree, max_degree: alg.max_degree() }));
            }
            *out = alg.dim(degree);
        });
        Ok(())
    })
}

/// Writes `dim A^[level]_d` for `d = 1..=D` into `out[0..D]`; `len` must
/// be at least `D`.
///
/// # Safety
/// `spec` must be a live handle and `out` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn nilpow_derived_dims(
    spec: *const NilpowSpec,
    level: usize,
    out: *mut u64,
    len: usize,
) -> NilpowStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if out.is_null() {
            return Err(null("out"));
        }
        with_engine!(&spec.engine, alg => {
            let d = alg.max_degree();
            if len < d {
                return Err((NilpowStatus::InvalidArgument, format!("buffer holds {len} values, need {d}")));
            }
            let mut tower = DerivedTower::new(alg);
            tower.ensure(level, d).map_err(fail)?;
            let dst = std::slice::from_raw_parts_mut(out, d);
            for (e, slot) in dst.iter_mut().enumerate() {
                *slot = tower.level(level).dim_at(e + 1) as u64;
            }
        });
        Ok(())
    })
}

/// Least `n ≤ D` with `A_n ⊆ id(A^[k])`. Returns `NotFound` (and writes 0)
/// when the ideal does not fill any component through `D`.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilpow_nilpotency_index(
    spec: *const NilpowSpec,
    k: usize,
    out: *mut usize,
) -> NilpowStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = 0;
        let n = with_engine!(&spec.engine, alg => {
            let mut tower = DerivedTower::new(alg);
            certify::nilpotency_index(&mut tower, k).map_err(fail)?.n
        });
        match n {
            Some(n) => {
                *out = n;
                Ok(())
            }
            None => Err((NilpowStatus::NotFound, format!("A/id(A^[{k}]) not nilpotent through the truncation"))),
        }
    })
}

/// Runs the generation pipeline for `A^[i]`, `i ≥ 1`. An inconclusive run
/// still returns `Ok` with a certificate; inspect its verdict.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilpow_certify(
    spec: *const NilpowSpec,
    i: usize,
    seed: u64,
    out: *mut *mut NilpowCertificate,
) -> NilpowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let spec = spec_ref(spec)?;
        let mut cert = with_engine!(&spec.engine, alg => {
            let mut tower = DerivedTower::new(alg);
            certify::certify_generation(&mut tower, i, seed).map_err(fail)?
        });
        cert.timings_ms.clear();
        *out = Box::into_raw(Box::new(NilpowCertificate { cert }));
        Ok(())
    })
}

/// # Safety
/// `cert` must be a live certificate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilpow_certificate_verdict(
    cert: *const NilpowCertificate,
    out: *mut NilpowVerdict,
) -> NilpowStatus {
    guard(|| {
        let cert = cert.as_ref().ok_or_else(|| null("certificate"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match cert.cert.verdict {
            Verdict::Verified => NilpowVerdict::Verified,
            Verdict::Inconclusive => NilpowVerdict::Inconclusive,
        };
        Ok(())
    })
}

/// The certificate as JSON, identical to the CLI output. Release with
/// [`nilpow_string_free`].
///
/// # Safety
/// `cert` must be a live certificate handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nilpow_certificate_json(
    cert: *const NilpowCertificate,
    out: *mut *mut c_char,
) -> NilpowStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let cert = cert.as_ref().ok_or_else(|| null("certificate"))?;
        let json = CString::new(cert.cert.to_json())
            .map_err(|_| (NilpowStatus::Internal, "NUL in certificate".to_string()))?;
        *out = json.into_raw();
        Ok(())
    })
}

/// # Safety
/// `cert` must be NULL or a handle from [`nilpow_certify`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nilpow_certificate_free(cert: *mut NilpowCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nilpow_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
