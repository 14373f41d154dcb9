use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use osctime_ffi::*;

fn s(x: &str) -> CString {
    CString::new(x).unwrap()
}

fn xi(alpha: &str, eps: &str, power: u32) -> *mut OsctimeVector {
    let mut out = ptr::null_mut();
    let st = unsafe { osctime_vector_xi(s(alpha).as_ptr(), s(eps).as_ptr(), power, &mut out) };
    assert_eq!(st, OsctimeStatus::Ok);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(osctime_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn form_eval_matches_the_library() {
    let (psi, phi) = (xi("1/4", "1", 2), xi("1/2", "1", 0));
    let (mut re, mut im) = (f64::NAN, f64::NAN);
    let eps = s("1");
    assert_eq!(
        unsafe { osctime_form_eval(OsctimeForm::TEps, psi, phi, eps.as_ptr(), &mut re, &mut im) },
        OsctimeStatus::Ok
    );
    let want = {
        let e = osctime::gauss::EpsParam::one();
        let q = |n: i64, d: i64| num_rational::BigRational::new(n.into(), d.into());
        let a = osctime::gauss::GaussVector::xi_alpha(&q(1, 4), &e).unwrap().shift_power(2);
        let b = osctime::gauss::GaussVector::xi_alpha(&q(1, 2), &e).unwrap();
        osctime::forms::t_eps_form(&a, &b, &e).unwrap().value
    };
    assert_eq!((re, im), (want.re, want.im));

    assert_eq!(
        unsafe { osctime_form_eval(OsctimeForm::TAb, psi, phi, ptr::null(), &mut re, &mut im) },
        OsctimeStatus::Ok
    );
    assert_eq!(
        unsafe { osctime_form_eval(OsctimeForm::TG, psi, phi, ptr::null(), &mut re, &mut im) },
        OsctimeStatus::Ok
    );
    assert!(re.is_finite() && im.is_finite());
    unsafe {
        osctime_vector_free(psi);
        osctime_vector_free(phi);
    }
}

#[test]
fn ccr_through_the_abi() {
    let (phi, psi) = (xi("1/10", "1/4", 2), xi("9/10", "1/4", 4));
    let mut r = f64::NAN;
    let eps = s("1/4");
    assert_eq!(
        unsafe { osctime_ccr_residual(OsctimeForm::TEps, phi, psi, eps.as_ptr(), 1e-10, &mut r) },
        OsctimeStatus::Ok
    );
    assert_eq!(r, 0.0);
    assert_eq!(
        unsafe { osctime_ccr_residual(OsctimeForm::TAb, phi, psi, ptr::null(), 1e-10, &mut r) },
        OsctimeStatus::Ok
    );
    assert_eq!(
        unsafe { osctime_ccr_residual(OsctimeForm::TG, phi, psi, ptr::null(), 1e-10, &mut r) },
        OsctimeStatus::InvalidArgument
    );
    let st = unsafe {
        osctime_ccr_gaussian_pair(s("1/2").as_ptr(), 2, 0, s("1/4").as_ptr(), s("1/2").as_ptr(), 1e-10, &mut r)
    };
    assert_eq!(st, OsctimeStatus::Ok);
    assert!(r < 1e-10);
    unsafe {
        osctime_vector_free(phi);
        osctime_vector_free(psi);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut out = ptr::null_mut();
    let st = unsafe { osctime_vector_xi(s("1").as_ptr(), s("1").as_ptr(), 0, &mut out) };
    assert_eq!(st, OsctimeStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    let st = unsafe { osctime_form_eval(OsctimeForm::TEps, out, out, s("1").as_ptr(), &mut re, &mut im) };
    assert_eq!(st, OsctimeStatus::Domain);
    assert!(last_error().contains("domain"));
    unsafe { osctime_vector_free(out) };

    let st = unsafe { osctime_vector_xi(s("1/3").as_ptr(), s("1/2").as_ptr(), 0, &mut out) };
    assert_eq!(st, OsctimeStatus::NotExact);
    let st = unsafe { osctime_vector_monomial(s("1").as_ptr(), 0, s("x").as_ptr(), &mut out) };
    assert_eq!(st, OsctimeStatus::Parse);
    let st = unsafe { osctime_vector_monomial(s("1").as_ptr(), 0, s("-1/2i").as_ptr(), &mut out) };
    assert_eq!(st, OsctimeStatus::InvalidArgument, "{}", last_error());
    let st = unsafe { osctime_vector_monomial(ptr::null(), 0, s("i").as_ptr(), &mut out) };
    assert_eq!(st, OsctimeStatus::NullPointer);
    assert_eq!(unsafe { osctime_t_hat(0, 0, 0.0, 1.0, &mut re, &mut im) }, OsctimeStatus::SingularPoint);
    assert_eq!(unsafe { osctime_t_hat(0, 0, 0.3, 0.7, ptr::null_mut(), &mut im) }, OsctimeStatus::NullPointer);
    unsafe {
        osctime_vector_free(ptr::null_mut());
        osctime_string_free(ptr::null_mut());
    }
}

#[test]
fn vector_strings_and_sums() {
    let (a, b) = (xi("1/2", "1", 0), xi("1/2", "1", 0));
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { osctime_vector_add(a, b, &mut sum) }, OsctimeStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { osctime_inner_product(sum, a, &mut re, &mut im) }, OsctimeStatus::Ok);
    // ⟨2ξ, ξ⟩ = 2√(2π) for ξ = exp(−x²/4).
    assert!((re - 2.0 * (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12 && im == 0.0);
    let text = unsafe { osctime_vector_to_string(sum) };
    assert!(!text.is_null());
    assert!(unsafe { CStr::from_ptr(text) }.to_str().unwrap().contains('2'));
    unsafe {
        osctime_string_free(text);
        osctime_vector_free(a);
        osctime_vector_free(b);
        osctime_vector_free(sum);
    }
}

#[test]
fn tg_norm_stays_bounded() {
    let mut est = 0.0;
    assert_eq!(unsafe { osctime_tg_norm(40, &mut est) }, OsctimeStatus::Ok);
    assert!(est > std::f64::consts::PI && est < 2.0 * std::f64::consts::PI);
    assert_eq!(unsafe { CStr::from_ptr(osctime_version()) }.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libosctime_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/osctime.h");
    assert!(std::fs::read_to_string(&header).unwrap().contains("osctime_ccr_residual"));
    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; skipping C link");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping C link");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let line = String::from_utf8(out.stdout).unwrap();
    let im: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((im + 3.654462910296333).abs() < 1e-9, "{line}");
}
