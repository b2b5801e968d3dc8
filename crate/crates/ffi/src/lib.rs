//! C ABI over `edist-core`.
//!
//! Every function returns an [`EdistStatus`]; results come back through out
//! pointers. Texts and sample trees are opaque heap handles released with
//! their `_free` function. On failure, [`edist_last_error`] describes the
//! most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use edist_core::estimation::{self, approximate_ed, Constants, Decision, EstimateReport};
use edist_core::etree::{exact_e_distance, pad_pair, TreeParams};
use edist_core::exact;
use edist_core::sampling::{build_sample_tree, SampleTree};
use edist_core::{Error, Text};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdistStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    Dimension = 3,
    SymbolOutOfRange = 4,
    TooLarge = 5,
    AccessViolation = 6,
    TreeMismatch = 7,
    Parse = 8,
    Io = 9,
    Panic = 10,
}

/// Tuning constant presets.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdistPreset {
    Desk = 0,
    Lean = 1,
    Unit = 2,
}

impl EdistPreset {
    fn constants(self) -> Constants {
        match self {
            EdistPreset::Desk => Constants::DESK,
            EdistPreset::Lean => Constants::LEAN,
            EdistPreset::Unit => Constants::UNIT,
        }
    }
}

/// Outcome of one estimation. `decision` is -1 when no decision was taken,
/// 0 for close and 1 for far.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EdistReport {
    pub estimate: f64,
    pub queries: u64,
    pub decision: i32,
    pub millis: f64,
}

impl From<&EstimateReport> for EdistReport {
    fn from(r: &EstimateReport) -> Self {
        EdistReport {
            estimate: r.estimate,
            queries: r.queries_used as u64,
            decision: match r.decision {
                None => -1,
                Some(Decision::Close) => 0,
                Some(Decision::Far) => 1,
            },
            millis: r.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// Opaque string of symbols.
pub struct EdistText(Text);

/// Opaque sample tree.
pub struct EdistTree(SampleTree);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> EdistStatus {
    match e {
        Error::SymbolOutOfRange { .. } => EdistStatus::SymbolOutOfRange,
        Error::Dimension(_) => EdistStatus::Dimension,
        Error::InvalidParam(_) => EdistStatus::InvalidParam,
        Error::AccessViolation { .. } => EdistStatus::AccessViolation,
        Error::TreeMismatch(_) => EdistStatus::TreeMismatch,
        Error::TooLarge(_) => EdistStatus::TooLarge,
        Error::Parse { .. } => EdistStatus::Parse,
        Error::Io(_) => EdistStatus::Io,
    }
}

enum Failure {
    Null,
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EdistStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EdistStatus::Ok,
        Ok(Err(Failure::Null)) => {
            set_error("null pointer argument");
            EdistStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            EdistStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null)
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null);
    }
    out.write(v);
    Ok(())
}

/// Message of the last failed call on this thread (empty if none). The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn edist_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Copies `len` symbols, each below `alphabet_size`, into a new text.
///
/// # Safety
/// `symbols` must point to `len` readable values (it may be null when `len`
/// is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn edist_text_new(
    symbols: *const u32,
    len: usize,
    alphabet_size: u32,
    out: *mut *mut EdistText,
) -> EdistStatus {
    guard(|| {
        let v = if len == 0 {
            Vec::new()
        } else if symbols.is_null() {
            return Err(Failure::Null);
        } else {
            std::slice::from_raw_parts(symbols, len).to_vec()
        };
        let t = Text::new(v, alphabet_size)?;
        write(out, Box::into_raw(Box::new(EdistText(t))))
    })
}

/// # Safety
/// `text` must come from [`edist_text_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn edist_text_free(text: *mut EdistText) {
    if !text.is_null() {
        drop(Box::from_raw(text));
    }
}

/// # Safety
/// `text` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edist_text_len(text: *const EdistText, out: *mut usize) -> EdistStatus {
    guard(|| write(out, deref(text)?.0.len()))
}

/// Exact metric selector for [`edist_exact`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdistMetric {
    Ed = 0,
    Edd = 1,
    Lcs = 2,
}

/// Exact edit distance, indel distance or LCS length.
///
/// # Safety
/// `x`, `y` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edist_exact(
    x: *const EdistText,
    y: *const EdistText,
    metric: EdistMetric,
    out: *mut u64,
) -> EdistStatus {
    guard(|| {
        let (x, y) = (&deref(x)?.0, &deref(y)?.0);
        let v = match metric {
            EdistMetric::Ed => exact::ed(x, y),
            EdistMetric::Edd => exact::edd(x, y),
            EdistMetric::Lcs => exact::lcs(x, y),
        };
        write(out, v as u64)
    })
}

/// Exact E-distance after padding both texts to a common power of `b`.
///
/// # Safety
/// `x`, `y` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edist_e_distance(
    x: *const EdistText,
    y: *const EdistText,
    b: usize,
    out: *mut u64,
) -> EdistStatus {
    guard(|| {
        let (xp, yp, params) = pad_pair(&deref(x)?.0, &deref(y)?.0, b)?;
        write(out, exact_e_distance(&xp, &yp, &params)?)
    })
}

/// Samples a tree for length `n` (a power of `b`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn edist_tree_build(
    n: usize,
    b: usize,
    beta: f64,
    seed: u64,
    preset: EdistPreset,
    out: *mut *mut EdistTree,
) -> EdistStatus {
    guard(|| {
        let params = preset.constants().apply(TreeParams::new(n, b)?).with_beta(beta).with_seed(seed);
        let tree = build_sample_tree(&params)?;
        write(out, Box::into_raw(Box::new(EdistTree(tree))))
    })
}

/// # Safety
/// `tree` must come from [`edist_tree_build`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn edist_tree_free(tree: *mut EdistTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Number of distinct positions of `x` the tree will read.
///
/// # Safety
/// `tree` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edist_tree_query_count(tree: *const EdistTree, out: *mut u64) -> EdistStatus {
    guard(|| write(out, deref(tree)?.0.query_count() as u64))
}

/// Estimates the E-distance over a prebuilt tree and applies the far/close
/// threshold `2n/β`. Both texts must have the tree's length.
///
/// # Safety
/// All handles live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edist_estimate(
    x: *const EdistText,
    y: *const EdistText,
    tree: *const EdistTree,
    out: *mut EdistReport,
) -> EdistStatus {
    guard(|| {
        let tree = &deref(tree)?.0;
        let mut r = estimation::estimate_e_distance(&deref(x)?.0, &deref(y)?.0, tree, &tree.params)?;
        r.decision = Some(estimation::decide(r.estimate, r.n, r.beta));
        write(out, EdistReport::from(&r))
    })
}

/// Pads, samples a fresh tree and decides `ed > n/β` versus small.
///
/// # Safety
/// `x`, `y` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn edist_dtep(
    x: *const EdistText,
    y: *const EdistText,
    b: usize,
    beta: f64,
    seed: u64,
    preset: EdistPreset,
    out: *mut EdistReport,
) -> EdistStatus {
    guard(|| {
        let r = estimation::dtep(&deref(x)?.0, &deref(y)?.0, b, beta, seed, &preset.constants())?;
        write(out, EdistReport::from(&r))
    })
}

/// Approximates ed by scanning β = n, n/2, …; `estimate` is `n/β` of the last
/// far decision (0 if none) and `queries` the total over all runs.
///
/// # Safety
/// `x`, `y` must be live handles; `estimate` and `queries` writable.
#[no_mangle]
pub unsafe extern "C" fn edist_approximate(
    x: *const EdistText,
    y: *const EdistText,
    b: usize,
    seed: u64,
    preset: EdistPreset,
    estimate: *mut f64,
    queries: *mut u64,
) -> EdistStatus {
    guard(|| {
        if estimate.is_null() || queries.is_null() {
            return Err(Failure::Null);
        }
        let a = approximate_ed(&deref(x)?.0, &deref(y)?.0, b, seed, &preset.constants())?;
        write(estimate, a.estimate)?;
        write(queries, a.queries as u64)
    })
}
