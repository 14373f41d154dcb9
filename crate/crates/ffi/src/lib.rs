//! C ABI over `osctime`.
//!
//! Vectors live behind an opaque `OsctimeVector` handle. Every fallible call
//! returns an `OsctimeStatus`; the message of the last failure on the calling
//! thread is available from `osctime_last_error`. Strings handed out by this
//! library must be released with `osctime_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use osctime::forms::{ccr_eps_pair, ccr_residual, t_ab_form, t_eps_form, t_hat_form, FormKind};
use osctime::gauss::{EpsParam, GaussVector};
use osctime::povm::{norm_bound_check, tg_form};
use osctime::scalar::{parse_rational, EvalOptions, ExactScalar};
use osctime::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OsctimeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Domain = 4,
    Pole = 5,
    BranchCut = 6,
    SingularPoint = 7,
    EngineMismatch = 8,
    NotExact = 9,
    Tolerance = 10,
    Panic = 11,
}

/// Which form `osctime_form_eval` and `osctime_ccr_residual` use.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OsctimeForm {
    /// Regularized angle form at the given ε.
    TEps = 0,
    /// Continuum form; ε is ignored.
    TAb = 1,
    /// Bounded POVM form truncated at N = 100; ε is ignored.
    TG = 2,
}

/// Opaque Gaussian-moment vector.
pub struct OsctimeVector(GaussVector<ExactScalar>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OsctimeStatus {
    match e {
        Error::Domain(_) => OsctimeStatus::Domain,
        Error::Pole(_) => OsctimeStatus::Pole,
        Error::BranchCut(_) => OsctimeStatus::BranchCut,
        Error::SingularPoint(_) => OsctimeStatus::SingularPoint,
        Error::EngineMismatch(_) => OsctimeStatus::EngineMismatch,
        Error::NotExact(_) => OsctimeStatus::NotExact,
        Error::InvalidArgument(_) => OsctimeStatus::InvalidArgument,
        Error::Parse(_) => OsctimeStatus::Parse,
    }
}

/// Runs `f`, recording errors and panics.
fn guard(f: impl FnOnce() -> Result<(), (OsctimeStatus, String)>) -> OsctimeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OsctimeStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside osctime".into());
            OsctimeStatus::Panic
        }
    }
}

fn lift<T>(r: osctime::Result<T>) -> Result<T, (OsctimeStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (OsctimeStatus, String) {
    (OsctimeStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (OsctimeStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (OsctimeStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn read_vec<'a>(
    p: *const OsctimeVector,
    what: &str,
) -> Result<&'a GaussVector<ExactScalar>, (OsctimeStatus, String)> {
    p.as_ref().map(|v| &v.0).ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, v: T, what: &str) -> Result<(), (OsctimeStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn parse_eps(s: &str) -> Result<EpsParam, (OsctimeStatus, String)> {
    lift(s.parse())
}

/// Message of the last failed call on this thread, or NULL. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn osctime_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn osctime_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `coeff · x^power · exp(i·width·x²/2)`. `coeff` and `width` are exact
/// scalars such as `"1"`, `"1/2i"` or `"3/10+7/10i"`; the width needs a
/// positive imaginary part.
///
/// # Safety
/// `coeff` and `width` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_vector_monomial(
    coeff: *const c_char,
    power: u32,
    width: *const c_char,
    out: *mut *mut OsctimeVector,
) -> OsctimeStatus {
    guard(|| {
        let c: ExactScalar = lift(read_str(coeff, "coeff")?.parse())?;
        let z: ExactScalar = lift(read_str(width, "width")?.parse())?;
        let v = lift(GaussVector::monomial(c, power, z))?;
        write_out(out, Box::into_raw(Box::new(OsctimeVector(v))), "out")
    })
}

/// `x^power ξ_{αi,ε}` for rational `α` and an `ε` with rational square root.
///
/// # Safety
/// `alpha` and `eps` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_vector_xi(
    alpha: *const c_char,
    eps: *const c_char,
    power: u32,
    out: *mut *mut OsctimeVector,
) -> OsctimeStatus {
    guard(|| {
        let a = lift(parse_rational(read_str(alpha, "alpha")?))?;
        let e = parse_eps(read_str(eps, "eps")?)?;
        let v = lift(GaussVector::xi_alpha(&a, &e))?.shift_power(power);
        write_out(out, Box::into_raw(Box::new(OsctimeVector(v))), "out")
    })
}

/// `a + b` as a new handle.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_vector_add(
    a: *const OsctimeVector,
    b: *const OsctimeVector,
    out: *mut *mut OsctimeVector,
) -> OsctimeStatus {
    guard(|| {
        let v = read_vec(a, "a")?.add(read_vec(b, "b")?);
        write_out(out, Box::into_raw(Box::new(OsctimeVector(v))), "out")
    })
}

/// Human-readable form of the vector; free with `osctime_string_free`.
///
/// # Safety
/// `v` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn osctime_vector_to_string(v: *const OsctimeVector) -> *mut c_char {
    match v.as_ref() {
        Some(v) => CString::new(v.0.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `v` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn osctime_vector_free(v: *mut OsctimeVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn osctime_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `⟨ψ, φ⟩`.
///
/// # Safety
/// Handles must be live; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_inner_product(
    psi: *const OsctimeVector,
    phi: *const OsctimeVector,
    re: *mut f64,
    im: *mut f64,
) -> OsctimeStatus {
    guard(|| {
        let v = osctime::gauss::inner_product_exact(read_vec(psi, "psi")?, read_vec(phi, "phi")?).eval();
        write_out(re, v.re, "re")?;
        write_out(im, v.im, "im")
    })
}

/// The form value `𝔱[ψ, φ]`. `eps` is read only for `TEps` and may be NULL otherwise.
///
/// # Safety
/// Handles must be live; `eps` NUL-terminated or NULL; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_form_eval(
    form: OsctimeForm,
    psi: *const OsctimeVector,
    phi: *const OsctimeVector,
    eps: *const c_char,
    re: *mut f64,
    im: *mut f64,
) -> OsctimeStatus {
    guard(|| {
        let (psi, phi) = (read_vec(psi, "psi")?, read_vec(phi, "phi")?);
        let v = match form {
            OsctimeForm::TEps => lift(t_eps_form(psi, phi, &parse_eps(read_str(eps, "eps")?)?))?.value,
            OsctimeForm::TAb => lift(t_ab_form(psi, phi))?.value,
            OsctimeForm::TG => lift(tg_form(&psi.to_c64(), &phi.to_c64(), 100))?.value,
        };
        write_out(re, v.re, "re")?;
        write_out(im, v.im, "im")
    })
}

/// The continued matrix element `𝔱̂(x^a ξ_z, x^b ξ_z)` at `z = z_re + i z_im`.
///
/// # Safety
/// `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_t_hat(
    a: u32,
    b: u32,
    z_re: f64,
    z_im: f64,
    re: *mut f64,
    im: *mut f64,
) -> OsctimeStatus {
    guard(|| {
        let v = lift(t_hat_form(a, b, Complex64::new(z_re, z_im), &EvalOptions::default()))?.value;
        write_out(re, v.re, "re")?;
        write_out(im, v.im, "im")
    })
}

/// `|𝔱[hφ, ψ] − conj(𝔱[hψ, φ]) + i⟨φ, ψ⟩|`. Returns `Tolerance` when it exceeds
/// `tolerance·(1 + |⟨φ, ψ⟩|)`; `residual` is written either way. `TG` is rejected.
///
/// # Safety
/// Handles must be live; `eps` NUL-terminated (for `TEps`) or NULL; `residual` writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_ccr_residual(
    form: OsctimeForm,
    phi: *const OsctimeVector,
    psi: *const OsctimeVector,
    eps: *const c_char,
    tolerance: f64,
    residual: *mut f64,
) -> OsctimeStatus {
    guard(|| {
        let (phi, psi) = (read_vec(phi, "phi")?, read_vec(psi, "psi")?);
        let kind = match form {
            OsctimeForm::TEps => FormKind::TEps(parse_eps(read_str(eps, "eps")?)?),
            OsctimeForm::TAb => FormKind::TAb,
            OsctimeForm::TG => {
                return Err((OsctimeStatus::InvalidArgument, "no ccr check for the bounded form".into()))
            }
        };
        let r = lift(ccr_residual(&kind, phi, psi, tolerance))?;
        write_out(residual, r.residual.norm(), "residual")?;
        if r.pass {
            Ok(())
        } else {
            Err((OsctimeStatus::Tolerance, format!("ccr residual {} above tolerance", r.residual.norm())))
        }
    })
}

/// The `𝔱_ε` CCR residual on `(x^a ξ_{αi,ε}, x^b ξ_{βi,ε})`; works for any
/// positive rational `ε`, falling back to floats when `√ε` is irrational.
///
/// # Safety
/// Strings must be NUL-terminated; `residual` writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_ccr_gaussian_pair(
    eps: *const c_char,
    a: u32,
    b: u32,
    alpha: *const c_char,
    beta: *const c_char,
    tolerance: f64,
    residual: *mut f64,
) -> OsctimeStatus {
    guard(|| {
        let e = parse_eps(read_str(eps, "eps")?)?;
        let al = lift(parse_rational(read_str(alpha, "alpha")?))?;
        let be = lift(parse_rational(read_str(beta, "beta")?))?;
        let one = num_rational::BigRational::from_integer(1.into());
        let r = lift(ccr_eps_pair(&e, (a, b), &al, &be, tolerance, &one))?;
        write_out(residual, r.residual.norm(), "residual")?;
        if r.pass {
            Ok(())
        } else {
            Err((OsctimeStatus::Tolerance, format!("ccr residual {} above tolerance", r.residual.norm())))
        }
    })
}

/// Power-iteration estimate of the norm of the truncated T_G matrix of order `n`.
/// Returns `Tolerance` if the estimate exceeds 2π or fails to converge.
///
/// # Safety
/// `estimate` must be writable.
#[no_mangle]
pub unsafe extern "C" fn osctime_tg_norm(n: usize, estimate: *mut f64) -> OsctimeStatus {
    guard(|| {
        let r = norm_bound_check(n);
        write_out(estimate, r.estimate, "estimate")?;
        if r.pass && r.converged {
            Ok(())
        } else {
            Err((OsctimeStatus::Tolerance, format!("norm estimate {} (converged: {})", r.estimate, r.converged)))
        }
    })
}
