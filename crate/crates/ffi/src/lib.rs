//! C ABI over `absaf`.
//!
//! Every fallible call returns an [`AbsafStatus`]; on failure the message is
//! available from [`absaf_last_error`] on the same thread. Handles and
//! strings returned by the library must be released with [`absaf_free`] and
//! [`absaf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use absaf::axioms::{check_jr, AxiomCheck};
use absaf::representability::decide_representable_with;
use absaf::rules::{solve_with, SolveLimits};
use absaf::{Absaf, BallotFormat, Election, Error, Format, RepMode, RuleKind, RuleSpec, Strategy};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsafStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    ResourceLimit = 5,
    Timeout = 6,
    NotRepresentable = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

/// Opaque election: an AF, its ballots and its preferred extensions.
pub struct AbsafElection {
    inner: Election,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AbsafStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. }
            | Error::DuplicateArgument(_)
            | Error::UndeclaredArgument(_)
            | Error::UnknownLabel(_)
            | Error::InvalidBallot(_)
            | Error::Json(_) => AbsafStatus::Parse,
            Error::ResourceLimit(_) => AbsafStatus::ResourceLimit,
            Error::Timeout(_) => AbsafStatus::Timeout,
            Error::NotRepresentable => AbsafStatus::NotRepresentable,
            Error::Io(_) | Error::Generation(_) => AbsafStatus::Internal,
            _ => AbsafStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(AbsafStatus::NullPointer, format!("`{what}` is null"))
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AbsafStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbsafStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AbsafStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(AbsafStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn parsed<T: std::str::FromStr<Err = Error>>(p: *const c_char, what: &str) -> Result<T, Failure> {
    Ok(text(p, what)?.parse::<T>()?)
}

unsafe fn handle<'a>(h: *const AbsafElection) -> Result<&'a Election, Failure> {
    h.as_ref().map(|h| &h.inner).ok_or_else(|| null("election"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn write_indices(indices: &[usize], buf: *mut usize, capacity: usize, len: *mut usize) -> Result<(), Failure> {
    *out(len, "out_len")? = indices.len();
    if indices.len() > capacity {
        return Err(Failure(
            AbsafStatus::BufferTooSmall,
            format!("{} indices do not fit a buffer of {capacity}", indices.len()),
        ));
    }
    if !indices.is_empty() {
        if buf.is_null() {
            return Err(null("out_indices"));
        }
        std::ptr::copy_nonoverlapping(indices.as_ptr(), buf, indices.len());
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn absaf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn absaf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse an AF (`"apx"` or `"tgf"`) and its ballots (`"json"` or `"text"`),
/// enumerate the preferred extensions and return a handle in `out_election`.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out_election` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn absaf_load(
    af_text: *const c_char,
    af_format: *const c_char,
    ballots_text: *const c_char,
    ballots_format: *const c_char,
    out_election: *mut *mut AbsafElection,
) -> AbsafStatus {
    guard(|| {
        let slot = out(out_election, "out_election")?;
        *slot = std::ptr::null_mut();
        let af = absaf::af::parse_af(text(af_text, "af_text")?, parsed::<Format>(af_format, "af_format")?)?;
        let ballots_format = parsed::<BallotFormat>(ballots_format, "ballots_format")?;
        let absaf = Absaf::from_text(af, text(ballots_text, "ballots_text")?, ballots_format)?;
        let inner = Election::new(absaf)?;
        *slot = Box::into_raw(Box::new(AbsafElection { inner }));
        Ok(())
    })
}

/// Release a handle from [`absaf_load`]. Null is ignored.
///
/// # Safety
/// `election` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn absaf_free(election: *mut AbsafElection) {
    if !election.is_null() {
        drop(Box::from_raw(election));
    }
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn absaf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of voters, multiplicities expanded.
///
/// # Safety
/// `election` must be a live handle and `out_n` writable.
#[no_mangle]
pub unsafe extern "C" fn absaf_num_voters(election: *const AbsafElection, out_n: *mut usize) -> AbsafStatus {
    guard(|| {
        *out(out_n, "out_n")? = handle(election)?.n();
        Ok(())
    })
}

/// Number of preferred extensions.
///
/// # Safety
/// `election` must be a live handle and `out_m` writable.
#[no_mangle]
pub unsafe extern "C" fn absaf_num_extensions(election: *const AbsafElection, out_m: *mut usize) -> AbsafStatus {
    guard(|| {
        *out(out_m, "out_m")? = handle(election)?.prf().len();
        Ok(())
    })
}

/// Labels of extension `index` joined by commas, in `out_labels`. Free with
/// [`absaf_string_free`].
///
/// # Safety
/// `election` must be a live handle and `out_labels` writable.
#[no_mangle]
pub unsafe extern "C" fn absaf_extension_labels(
    election: *const AbsafElection,
    index: usize,
    out_labels: *mut *mut c_char,
) -> AbsafStatus {
    guard(|| {
        let slot = out(out_labels, "out_labels")?;
        *slot = std::ptr::null_mut();
        let e = handle(election)?;
        let set = e.prf().get(index).ok_or_else(|| {
            Failure(AbsafStatus::InvalidInput, format!("extension {index} out of range 0..{}", e.prf().len()))
        })?;
        let joined = e.af().labels_of(set).join(",");
        *slot =
            CString::new(joined).map_err(|_| Failure(AbsafStatus::Internal, "label contains NUL".into()))?.into_raw();
        Ok(())
    })
}

/// Select at most `k` extensions with `rule` (`"utilitarian"`,
/// `"egalitarian"`, `"harmonic"`, `"maxcov"`, or `"owa:w1,w2,..."`),
/// `strategy` (`"exact"` or `"greedy"`) and `mode` (`"regular"` or
/// `"core"`). The chosen extension indices go to `out_indices`, which holds
/// `capacity` entries; their count goes to `out_len` even when the buffer is
/// too small. `max_combinations` of 0 and `timeout_seconds <= 0` mean the
/// defaults.
///
/// # Safety
/// `election` must be a live handle, strings NUL-terminated, `out_indices`
/// valid for `capacity` writes, and `out_len`, `out_objective` writable or
/// null where noted.
#[no_mangle]
pub unsafe extern "C" fn absaf_select(
    election: *const AbsafElection,
    rule: *const c_char,
    strategy: *const c_char,
    mode: *const c_char,
    k: usize,
    max_combinations: u64,
    timeout_seconds: f64,
    out_indices: *mut usize,
    capacity: usize,
    out_len: *mut usize,
    out_objective: *mut f64,
) -> AbsafStatus {
    guard(|| {
        let e = handle(election)?;
        let spec = RuleSpec::new(
            parsed::<RuleKind>(rule, "rule")?,
            parsed::<Strategy>(strategy, "strategy")?,
            parsed::<RepMode>(mode, "mode")?,
        );
        let mut limits = SolveLimits::default();
        if max_combinations > 0 {
            limits.max_combinations = max_combinations;
        }
        if timeout_seconds > 0.0 {
            limits.deadline = Some(Instant::now() + Duration::from_secs_f64(timeout_seconds));
        }
        let sel = solve_with(e, k, &spec, limits)?;
        write_indices(&sel.indices, out_indices, capacity, out_len)?;
        if let Some(obj) = out_objective.as_mut() {
            *obj = sel.objective_f64();
        }
        Ok(())
    })
}

/// Decide whether at most `k` extensions represent every voter exactly 1
/// under `mode`. `out_representable` receives the answer; when it is true a
/// witness outcome goes to `out_indices` as in [`absaf_select`].
///
/// # Safety
/// As for [`absaf_select`].
#[no_mangle]
pub unsafe extern "C" fn absaf_decide_representable(
    election: *const AbsafElection,
    k: usize,
    mode: *const c_char,
    max_combinations: u64,
    out_representable: *mut bool,
    out_indices: *mut usize,
    capacity: usize,
    out_len: *mut usize,
) -> AbsafStatus {
    guard(|| {
        let e = handle(election)?;
        let mode = parsed::<RepMode>(mode, "mode")?;
        let answer = out(out_representable, "out_representable")?;
        let cap =
            if max_combinations == 0 { absaf::representability::DEFAULT_MAX_COMBINATIONS } else { max_combinations };
        let found = decide_representable_with(e, k, mode, cap)?;
        *answer = found.is_some();
        let indices: Vec<usize> = match &found {
            Some(o) => o.viewpoints.iter().filter_map(|v| e.extension_index(v)).collect(),
            None => Vec::new(),
        };
        write_indices(&indices, out_indices, capacity, out_len)
    })
}

/// Check justified representation for the outcome made of the `len`
/// extensions in `indices`, judged against committee size `k`. On a
/// violation `out_extension` (if non-null) receives the extension whose
/// supporters are left out.
///
/// # Safety
/// `indices` must be valid for `len` reads; `out_holds` writable;
/// `out_extension` writable or null.
#[no_mangle]
pub unsafe extern "C" fn absaf_check_jr(
    election: *const AbsafElection,
    indices: *const usize,
    len: usize,
    k: usize,
    mode: *const c_char,
    out_holds: *mut bool,
    out_extension: *mut usize,
) -> AbsafStatus {
    guard(|| {
        let e = handle(election)?;
        let mode = parsed::<RepMode>(mode, "mode")?;
        let holds = out(out_holds, "out_holds")?;
        let chosen = if len == 0 {
            &[][..]
        } else if indices.is_null() {
            return Err(null("indices"));
        } else {
            std::slice::from_raw_parts(indices, len)
        };
        let omega = e.outcome(chosen, k)?;
        match check_jr(e, &omega, mode)? {
            AxiomCheck::Holds => *holds = true,
            AxiomCheck::Violated { extension, .. } => {
                *holds = false;
                if let Some(x) = out_extension.as_mut() {
                    *x = extension;
                }
            }
        }
        Ok(())
    })
}

/// Representation of `voter` (1-based) by extension `index` under `mode`.
///
/// # Safety
/// `election` must be a live handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn absaf_representation(
    election: *const AbsafElection,
    voter: usize,
    index: usize,
    mode: *const c_char,
    out_value: *mut f64,
) -> AbsafStatus {
    guard(|| {
        let e = handle(election)?;
        let mode = parsed::<RepMode>(mode, "mode")?;
        let pi = e
            .prf()
            .get(index)
            .ok_or_else(|| Failure(AbsafStatus::InvalidInput, format!("extension {index} out of range")))?;
        let r = e.rep(voter, pi, mode)?;
        *out(out_value, "out_value")? = *r.numer() as f64 / *r.denom() as f64;
        Ok(())
    })
}
