//! C ABI over the defeasible logic workbench.
//!
//! Theories and conclusion sets are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns a
//! [`DlStatus`]; on failure a description is available from
//! [`dl_last_error`] on the same thread until the next failing call.
//! Strings returned through `char **` out-parameters are released with
//! [`dl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use defeasible::engine::{least_fixpoint, ConclusionSet, Tag, TagSet};
use defeasible::syntax::{add_theories, validate_theory, Theory};
use defeasible::text::{format_conclusions, parse_conclusion, parse_theory_with, print_theory, ParseOptions};
use defeasible::transform::TransformKind;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidTheory = 4,
    UnknownTag = 5,
    UnknownTransform = 6,
    LabelClash = 7,
    Internal = 8,
}

/// A parsed theory.
pub struct DlTheory {
    inner: Theory,
}

/// The conclusions of a theory for a set of tags.
pub struct DlConclusions {
    inner: ConclusionSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(DlStatus, String);

fn remember(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guarded(f: impl FnOnce() -> Result<(), Fail>) -> DlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            remember(message);
            status
        }
        Err(_) => {
            remember("internal error".to_string());
            DlStatus::Internal
        }
    }
}

unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(DlStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(DlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(DlStatus::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(DlStatus::NullArgument, "output pointer is null".to_string()))
    } else {
        Ok(())
    }
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(DlStatus::Internal, "output contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Parses `text` into a new theory. `loose` admits `$` names, as produced by
/// transformations. Structural violations are rejected.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_theory_parse(text: *const c_char, loose: bool, out: *mut *mut DlTheory) -> DlStatus {
    guarded(|| {
        out_ptr(out)?;
        let src = utf8(text, "text")?;
        let d = parse_theory_with(src, ParseOptions { loose }).map_err(|errs| {
            let lines: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
            Fail(DlStatus::ParseError, lines.join("\n"))
        })?;
        let v = validate_theory(&d);
        if !v.is_ok() {
            let lines: Vec<String> = v.violations.iter().map(|x| x.to_string()).collect();
            return Err(Fail(DlStatus::InvalidTheory, lines.join("\n")));
        }
        *out = Box::into_raw(Box::new(DlTheory { inner: d }));
        Ok(())
    })
}

/// Releases a theory. Null is ignored.
///
/// # Safety
/// `theory` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dl_theory_free(theory: *mut DlTheory) {
    if !theory.is_null() {
        drop(Box::from_raw(theory));
    }
}

/// Writes the canonical text of `theory` to `*out`.
///
/// # Safety
/// `theory` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_theory_print(theory: *const DlTheory, out: *mut *mut c_char) -> DlStatus {
    guarded(|| {
        out_ptr(out)?;
        let d = handle(theory, "theory")?;
        give_string(print_theory(&d.inner), out)
    })
}

/// Applies the transformation named `kind` (either spelling, e.g.
/// `block-for-prop` or `def2`) and returns a new theory.
///
/// # Safety
/// `theory` must be a live handle, `kind` a NUL-terminated string and `out`
/// a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_theory_transform(
    theory: *const DlTheory,
    kind: *const c_char,
    out: *mut *mut DlTheory,
) -> DlStatus {
    guarded(|| {
        out_ptr(out)?;
        let d = handle(theory, "theory")?;
        let k: TransformKind = utf8(kind, "kind")?
            .parse()
            .map_err(|e: defeasible::transform::UnknownTransform| Fail(DlStatus::UnknownTransform, e.to_string()))?;
        *out = Box::into_raw(Box::new(DlTheory {
            inner: k.apply(&d.inner),
        }));
        Ok(())
    })
}

/// Returns the union of two label-disjoint theories.
///
/// # Safety
/// Both handles must be live and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_theory_add(
    base: *const DlTheory,
    addition: *const DlTheory,
    out: *mut *mut DlTheory,
) -> DlStatus {
    guarded(|| {
        out_ptr(out)?;
        let (d, a) = (handle(base, "base")?, handle(addition, "addition")?);
        let sum = add_theories(&d.inner, &a.inner).map_err(|e| Fail(DlStatus::LabelClash, e.to_string()))?;
        *out = Box::into_raw(Box::new(DlTheory { inner: sum }));
        Ok(())
    })
}

/// Computes the least fixpoint for the comma separated `tags` (null means
/// every tag). The result keeps only the requested tags.
///
/// # Safety
/// `theory` must be a live handle, `tags` null or a NUL-terminated string,
/// and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_infer(
    theory: *const DlTheory,
    tags: *const c_char,
    out: *mut *mut DlConclusions,
) -> DlStatus {
    guarded(|| {
        out_ptr(out)?;
        let d = handle(theory, "theory")?;
        let wanted = if tags.is_null() {
            TagSet::ALL
        } else {
            let spec = utf8(tags, "tags")?;
            let parsed: Result<Vec<Tag>, _> = spec.split(',').map(|s| s.trim().parse::<Tag>()).collect();
            TagSet::of(&parsed.map_err(|e| Fail(DlStatus::UnknownTag, e.to_string()))?)
        };
        let inner = least_fixpoint(&d.inner, wanted).restrict(wanted);
        *out = Box::into_raw(Box::new(DlConclusions { inner }));
        Ok(())
    })
}

/// Sets `*holds` to 1 when `conclusion` (e.g. `"+pd* q"`) is in the set and
/// to 0 otherwise.
///
/// # Safety
/// `set` must be a live handle, `conclusion` a NUL-terminated string and
/// `holds` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_conclusions_contains(
    set: *const DlConclusions,
    conclusion: *const c_char,
    holds: *mut i32,
) -> DlStatus {
    guarded(|| {
        out_ptr(holds)?;
        let c = handle(set, "set")?;
        let query = parse_conclusion(utf8(conclusion, "conclusion")?)
            .map_err(|e| Fail(DlStatus::ParseError, e.to_string()))?;
        if !c.inner.tags().contains(query.tag) {
            return Err(Fail(DlStatus::UnknownTag, format!("tag {} was not computed", query.tag)));
        }
        *holds = i32::from(c.inner.holds(query.sign, query.tag, &query.literal));
        Ok(())
    })
}

/// Writes the sorted conclusion lines to `*out`.
///
/// # Safety
/// `set` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_conclusions_format(set: *const DlConclusions, out: *mut *mut c_char) -> DlStatus {
    guarded(|| {
        out_ptr(out)?;
        give_string(format_conclusions(&handle(set, "set")?.inner), out)
    })
}

/// Releases a conclusion set. Null is ignored.
///
/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dl_conclusions_free(set: *mut DlConclusions) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
