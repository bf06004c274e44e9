use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use mixint_ffi::*;

const SQUARE: &str = r#"{"dim":2,"vertices":[[0,0],[1,0],[1,1],[0,1]]}"#;
const BIG_SQUARE: &str = r#"{"dim":2,"vertices":[[0,0],[2,0],[2,2],[0,2]]}"#;
const CAKE: &str = r#"{"dim":2,"layers":[
    {"t":1.0,"body":{"dim":2,"vertices":[[0,0],[1,0],[1,1],[0,1]]}},
    {"t":0.5,"body":{"dim":2,"vertices":[[-1,-1],[2,-1],[2,2],[-1,2]]}}]}"#;
const EXP: &str = r#"{"alpha":0,"n":1,"base":{"breakpoints":[0],"values":[0],"tail_slope":1}}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = mixint_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn polytope_handles() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(mixint_polytope_from_json(c(SQUARE).as_ptr(), &mut a), MixintStatus::Ok);
        assert_eq!(mixint_polytope_from_json(c(BIG_SQUARE).as_ptr(), &mut b), MixintStatus::Ok);
        let mut v = 0.0;
        assert_eq!(mixint_polytope_volume(a, &mut v), MixintStatus::Ok);
        assert_eq!(v, 1.0);
        let bodies = [a as *const _, b as *const _];
        assert_eq!(mixint_mixed_volume(bodies.as_ptr(), 2, &mut v), MixintStatus::Ok);
        assert!((v - 2.0).abs() < 1e-12);
        assert_eq!(mixint_mixed_volume(bodies.as_ptr(), 1, &mut v), MixintStatus::InvalidInput);
        assert!(last_error().contains("expected 2"));
        mixint_polytope_free(a);
        mixint_polytope_free(b);
        mixint_polytope_free(ptr::null_mut());
    }
}

#[test]
fn cake_handles() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(mixint_cake_from_json(c(CAKE).as_ptr(), &mut f), MixintStatus::Ok);
        let mut v = 0.0;
        assert_eq!(mixint_cake_integral(f, &mut v), MixintStatus::Ok);
        assert!((v - 5.0).abs() < 1e-12);
        let pair = [f as *const _, f as *const _];
        assert_eq!(mixint_mixed_integral(pair.as_ptr(), 2, &mut v), MixintStatus::Ok);
        assert!((v - 5.0).abs() < 1e-9);
        assert_eq!(mixint_quermassintegral(f, 0, 0, &mut v), MixintStatus::Ok);
        assert!((v - 5.0).abs() < 1e-9);
        assert_eq!(mixint_quermassintegral(f, 1, 7, &mut v), MixintStatus::InvalidInput);

        let mut star = ptr::null_mut();
        assert_eq!(mixint_rearrange(f, 64, &mut star), MixintStatus::Ok);
        assert_eq!(mixint_cake_integral(star, &mut v), MixintStatus::Ok);
        assert!((v - 5.0).abs() < 1e-12);
        let mut json = ptr::null_mut();
        assert_eq!(mixint_cake_to_json(star, &mut json), MixintStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().starts_with(r#"{"dim":2,"layers""#));
        mixint_string_free(json);
        mixint_cake_free(star);
        mixint_cake_free(f);
    }
}

#[test]
fn profile_handles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(mixint_profile_from_json(c(EXP).as_ptr(), &mut g), MixintStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(mixint_alpha_sum(g, g, &mut h), MixintStatus::Ok);
        let mut v = 0.0;
        assert_eq!(mixint_profile_eval(h, 2.0, &mut v), MixintStatus::Ok);
        // r □ r = r, so e^{-|x|} is idempotent under the log-concave sum
        assert!((v - (-2.0f64).exp()).abs() < 1e-12);
        let mut json = ptr::null_mut();
        assert_eq!(mixint_profile_to_json(h, &mut json), MixintStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("\"alpha\":0"));
        mixint_string_free(json);
        mixint_profile_free(h);
        mixint_profile_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(mixint_polytope_from_json(c("{\"dim\":2,").as_ptr(), &mut p), MixintStatus::InvalidJson);
        assert!(last_error().contains("line 1"));
        assert!(p.is_null());
        assert_eq!(mixint_polytope_from_json(ptr::null(), &mut p), MixintStatus::NullPointer);
        assert_eq!(mixint_polytope_from_json(c(SQUARE).as_ptr(), ptr::null_mut()), MixintStatus::NullPointer);
        let bad_utf8 = [0xffu8, 0];
        assert_eq!(mixint_cake_from_json(bad_utf8.as_ptr().cast(), &mut ptr::null_mut()), MixintStatus::InvalidUtf8);
        let mut v = 0.0;
        assert_eq!(mixint_cake_integral(ptr::null(), &mut v), MixintStatus::NullPointer);
        assert_eq!(mixint_polytope_from_json(c(SQUARE).as_ptr(), &mut p), MixintStatus::Ok);
        assert!(mixint_last_error().is_null());
        mixint_polytope_free(p);
        let version = CStr::from_ptr(mixint_version()).to_str().unwrap();
        assert_eq!(version, env!("CARGO_PKG_VERSION"));
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(crate_dir().join("include/mixint.h")).unwrap();
    for name in [
        "typedef struct MixintPolytope MixintPolytope;",
        "MIXINT_STATUS_INVALID_JSON = 3",
        "mixint_mixed_integral(",
        "mixint_alpha_sum(",
        "mixint_last_error(void)",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Compiles and runs a C program against the header and the static library.
/// Skipped when no C compiler is on the path.
#[test]
fn c_program_links_against_staticlib() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("cc not found; skipping");
        return;
    }
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libmixint_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "mixint.h"
int main(void) {
    MixintPolytope *a = NULL, *b = NULL;
    if (mixint_polytope_from_json("{\"dim\":2,\"vertices\":[[0,0],[1,0],[1,1],[0,1]]}", &a) != MIXINT_STATUS_OK) return 3;
    if (mixint_polytope_from_json("{\"dim\":2,\"vertices\":[[0,0],[2,0],[2,2],[0,2]]}", &b) != MIXINT_STATUS_OK) return 3;
    const MixintPolytope *bodies[2] = {a, b};
    double v = 0.0;
    if (mixint_mixed_volume(bodies, 2, &v) != MIXINT_STATUS_OK) return 4;
    printf("%.6f\n", v);
    if (mixint_polytope_from_json("not json", &a) != MIXINT_STATUS_INVALID_JSON) return 5;
    printf("%s\n", mixint_last_error());
    mixint_polytope_free(a);
    mixint_polytope_free(b);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{:?}", run);
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with("2.000000\n"), "{stdout}");
    assert!(stdout.contains("expected"), "{stdout}");
}
