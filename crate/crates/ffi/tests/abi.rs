use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cuspenv_ffi::*;

const PSI_D: &str = "param d; x^2 + y^2 + d*y^3 ; y^2 + x^3";
const PSI_1: &str = "x^2 + y^2 + y^3 ; y^2 + x^3";

fn parse(src: &str, order: u32) -> (CuspenvStatus, *mut CuspenvGerm) {
    let c = CString::new(src).unwrap();
    let mut g = ptr::null_mut();
    let status = unsafe { cuspenv_germ_parse(c.as_ptr(), order, &mut g) };
    (status, g)
}

unsafe fn take(s: *mut c_char) -> String {
    let v = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cuspenv_string_free(s);
    v
}

fn last_error() -> String {
    let p = cuspenv_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn determinacy_through_handles() {
    let (status, g) = parse(PSI_D, 8);
    assert_eq!(status, CuspenvStatus::Ok);
    let mut det = CuspenvDeterminacy::default();
    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(cuspenv_germ_determinacy(g, 2, 2, &mut det, &mut text), CuspenvStatus::Ok);
        assert_eq!(take(text), "1280*d");
        assert_eq!(det, CuspenvDeterminacy { certified: true, order: 4 });
        assert_eq!(cuspenv_germ_determinacy(g, 2, 2, &mut det, ptr::null_mut()), CuspenvStatus::Ok);
        let mut canon = ptr::null_mut();
        assert_eq!(cuspenv_germ_canonical(g, &mut canon), CuspenvStatus::Ok);
        assert_eq!(take(canon), PSI_D);
        cuspenv_germ_free(g);
    }
    assert!(cuspenv_last_error().is_null());
}

#[test]
fn codim_and_tags() {
    let (_, g) = parse(PSI_1, 8);
    let mut c = CuspenvCodim::default();
    let mut tags = ptr::null_mut();
    unsafe {
        assert_eq!(cuspenv_germ_codim(g, 6, &mut c), CuspenvStatus::Ok);
        assert_eq!(c, CuspenvCodim { codim: 2, conclusive: true });
        assert_eq!(cuspenv_germ_envelope_tags(g, &mut tags), CuspenvStatus::Ok);
        assert_eq!(take(tags), "semicubic-cusp,semicubic-cusp");
        cuspenv_germ_free(g);
    }
}

#[test]
fn error_codes() {
    let (status, g) = parse("x^2 + 1 ; y", 8);
    assert_eq!((status, g.is_null()), (CuspenvStatus::Parse, true));
    assert!(last_error().contains("constant term"));

    let (status, _) = parse("x ; y", 0);
    assert_eq!(status, CuspenvStatus::Parse);

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cuspenv_germ_parse(ptr::null(), 8, &mut g) }, CuspenvStatus::NullArgument);
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { cuspenv_germ_parse(bad.as_ptr().cast(), 8, &mut g) }, CuspenvStatus::InvalidUtf8);

    let (_, ctf) = parse("alpha: xi; A: 1; B: 1; C: 0; D: 1", 8);
    let mut det = CuspenvDeterminacy::default();
    unsafe {
        assert_eq!(cuspenv_germ_determinacy(ctf, 2, 2, &mut det, ptr::null_mut()), CuspenvStatus::WrongKind);
        assert_eq!(cuspenv_germ_determinacy(ptr::null(), 2, 2, &mut det, ptr::null_mut()), CuspenvStatus::NullArgument);
        assert_eq!(cuspenv_germ_determinacy(ctf, 2, 2, ptr::null_mut(), ptr::null_mut()), CuspenvStatus::NullArgument);
        cuspenv_germ_free(ctf);
        cuspenv_germ_free(ptr::null_mut());
        cuspenv_string_free(ptr::null_mut());
    }

    let (_, flat) = parse("x ; y", 8);
    let mut tags = ptr::null_mut();
    unsafe {
        assert_eq!(cuspenv_germ_envelope_tags(flat, &mut tags), CuspenvStatus::Ok);
        assert_eq!(take(tags), "");
        cuspenv_germ_free(flat);
    }
}

#[test]
fn run_captures_output_and_exit_code() {
    let args: Vec<CString> = ["determinacy", "--germ", "x^2 + y^2 ; y^2 + x^3"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(cuspenv_run(argv.len(), argv.as_ptr(), &mut out), CuspenvStatus::Ok);
        assert_eq!(cuspenv_output_code(out), 2);
        let stdout = CStr::from_ptr(cuspenv_output_stdout(out)).to_str().unwrap();
        assert!(stdout.contains("\"verdict\": \"negative\""));
        cuspenv_output_free(out);

        assert_eq!(cuspenv_run(0, ptr::null(), &mut out), CuspenvStatus::Ok);
        assert_eq!(cuspenv_output_code(out), 1);
        assert!(!CStr::from_ptr(cuspenv_output_stderr(out)).to_bytes().is_empty());
        cuspenv_output_free(out);
        assert_eq!(cuspenv_output_code(ptr::null()), -1);
    }
    let version = unsafe { CStr::from_ptr(cuspenv_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_generated_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libcuspenv_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cuspenv_smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
