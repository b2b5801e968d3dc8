use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use edist_ffi::*;

fn text(s: &[u32], sigma: u32) -> *mut EdistText {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { edist_text_new(s.as_ptr(), s.len(), sigma, &mut t) }, EdistStatus::Ok);
    t
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(edist_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn exact_metrics() {
    let x = text(&[10, 8, 19, 19, 4, 13], 26);
    let y = text(&[18, 8, 19, 19, 8, 13, 6], 26);
    let mut v = 0u64;
    for (m, want) in [(EdistMetric::Ed, 3), (EdistMetric::Edd, 5), (EdistMetric::Lcs, 4)] {
        assert_eq!(unsafe { edist_exact(x, y, m, &mut v) }, EdistStatus::Ok);
        assert_eq!(v, want);
    }
    let mut len = 0usize;
    assert_eq!(unsafe { edist_text_len(y, &mut len) }, EdistStatus::Ok);
    assert_eq!(len, 7);
    assert_eq!(unsafe { edist_e_distance(x, x, 2, &mut v) }, EdistStatus::Ok);
    assert_eq!(v, 0);
    unsafe {
        edist_text_free(x);
        edist_text_free(y);
    }
}

#[test]
fn error_codes() {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { edist_text_new([5u32].as_ptr(), 1, 4, &mut t) }, EdistStatus::SymbolOutOfRange);
    assert!(t.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { edist_text_new(ptr::null(), 3, 4, &mut t) }, EdistStatus::NullPointer);
    assert_eq!(unsafe { edist_text_new(ptr::null(), 0, 4, &mut t) }, EdistStatus::Ok);
    let mut v = 0u64;
    assert_eq!(unsafe { edist_exact(t, ptr::null(), EdistMetric::Ed, &mut v) }, EdistStatus::NullPointer);
    assert_eq!(unsafe { edist_exact(t, t, EdistMetric::Ed, ptr::null_mut()) }, EdistStatus::NullPointer);
    let mut tree = ptr::null_mut();
    assert_eq!(unsafe { edist_tree_build(100, 4, 4.0, 1, EdistPreset::Lean, &mut tree) }, EdistStatus::Dimension);
    unsafe {
        edist_text_free(t);
        edist_text_free(ptr::null_mut());
        edist_tree_free(ptr::null_mut());
    }
}

#[test]
fn tree_estimate_matches_dtep() {
    let n = 256;
    let xs: Vec<u32> = (0..n).map(|i| (i * 7 % 13 % 4) as u32).collect();
    let ys: Vec<u32> = xs.iter().map(|&s| (s + 1) % 4).collect();
    let (x, y) = (text(&xs, 4), text(&ys, 4));
    let mut tree = ptr::null_mut();
    assert_eq!(unsafe { edist_tree_build(n, 4, 4.0, 9, EdistPreset::Desk, &mut tree) }, EdistStatus::Ok);
    let mut q = 0u64;
    assert_eq!(unsafe { edist_tree_query_count(tree, &mut q) }, EdistStatus::Ok);
    assert!(q > 0 && q <= n as u64);
    let (mut a, mut b) = (EdistReport::default(), EdistReport::default());
    assert_eq!(unsafe { edist_estimate(x, y, tree, &mut a) }, EdistStatus::Ok);
    assert_eq!(unsafe { edist_dtep(x, y, 4, 4.0, 9, EdistPreset::Desk, &mut b) }, EdistStatus::Ok);
    assert_eq!(a.estimate, b.estimate);
    assert_eq!(a.queries, q);
    assert_eq!(a.decision, b.decision);
    let short = text(&xs[..64], 4);
    assert_eq!(unsafe { edist_estimate(short, short, tree, &mut a) }, EdistStatus::Dimension);
    let (mut est, mut total) = (0.0, 0u64);
    assert_eq!(unsafe { edist_approximate(x, x, 4, 2, EdistPreset::Lean, &mut est, &mut total) }, EdistStatus::Ok);
    assert!(total > 0);
    assert_eq!(unsafe { edist_approximate(x, x, 4, 2, EdistPreset::Lean, ptr::null_mut(), &mut total) }, EdistStatus::NullPointer);
    unsafe {
        edist_tree_free(tree);
        for t in [x, y, short] {
            edist_text_free(t);
        }
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libedist_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let out = std::env::temp_dir().join(format!("edist-smoke-{}", std::process::id()));
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "smoke exited with {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
