//! C ABI over the startflow toolchain.
//!
//! Conventions:
//! - Every fallible call returns an [`SfStatus`]; on failure a message is
//!   available from [`sf_last_error`] on the same thread.
//! - Strings passed in are NUL-terminated UTF-8 and borrowed for the call.
//! - Strings handed out are owned by the caller and released with
//!   [`sf_string_free`].
//! - Projects are opaque [`SfProject`] handles released with
//!   [`sf_project_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use startflow::evalkit::{read_defect_forms, read_tam_responses, summarize_defects, summarize_tam};
use startflow::lint::{lint_project, LintConfig};
use startflow::metrics::{action_count, project_metrics, PathOptions};
use startflow::model::{build_graph, Project};
use startflow::render::to_dot;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// The document has syntax errors; see `sf_last_error`.
    ParseError = 3,
    /// A named feature or task does not exist.
    NotFound = 4,
    /// Input is well-formed but rejected (bad config, broken task path,
    /// malformed CSV, empty group).
    Invalid = 5,
    /// An internal failure was caught at the boundary.
    Internal = 6,
}

/// Parsed project. Opaque to C.
pub struct SfProject {
    project: Project,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(SfStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn fail<T>(status: SfStatus, message: impl Into<String>) -> FfiResult<T> {
    Err(Failure(status, message.into()))
}

/// Runs `body`, recording any failure or panic as the thread's last error.
fn guard(body: impl FnOnce() -> FfiResult<()>) -> SfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error");
            SfStatus::Internal
        }
    }
}

unsafe fn borrow_str<'a>(ptr: *const c_char, what: &str) -> FfiResult<&'a str> {
    if ptr.is_null() {
        return fail(SfStatus::NullArgument, format!("{what} is null"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .or_else(|_| fail(SfStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn optional_str<'a>(ptr: *const c_char, what: &str) -> FfiResult<Option<&'a str>> {
    if ptr.is_null() {
        Ok(None)
    } else {
        borrow_str(ptr, what).map(Some)
    }
}

unsafe fn borrow_project<'a>(handle: *const SfProject) -> FfiResult<&'a Project> {
    handle
        .as_ref()
        .map(|h| &h.project)
        .ok_or(Failure(SfStatus::NullArgument, "project handle is null".into()))
}

unsafe fn hand_out(out: *mut *mut c_char, text: String) -> FfiResult<()> {
    if out.is_null() {
        return fail(SfStatus::NullArgument, "output pointer is null");
    }
    let c = CString::new(text).or_else(|_| fail(SfStatus::Internal, "output contains a NUL byte"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn check_out<T>(out: *mut T) -> FfiResult<()> {
    if out.is_null() {
        fail(SfStatus::NullArgument, "output pointer is null")
    } else {
        Ok(())
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

/// Parses `source` into a new project handle stored in `*out`.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_project_parse(source: *const c_char, out: *mut *mut SfProject) -> SfStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let src = borrow_str(source, "source")?;
        match startflow::parse(src) {
            Ok(project) => {
                *out = Box::into_raw(Box::new(SfProject { project }));
                Ok(())
            }
            Err(errors) => {
                let text: Vec<String> = errors.iter().map(ToString::to_string).collect();
                fail(SfStatus::ParseError, text.join("\n"))
            }
        }
    })
}

/// Releases a project handle. Null is ignored.
///
/// # Safety
/// `project` must come from `sf_project_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_project_free(project: *mut SfProject) {
    if !project.is_null() {
        drop(Box::from_raw(project));
    }
}

/// Canonical source text of the project.
///
/// # Safety
/// `project` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_project_format(project: *const SfProject, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let p = borrow_project(project)?;
        hand_out(out, startflow::format(p))
    })
}

/// Lints the project and writes the JSON defect report to `*out`.
/// `config_json` may be null to use the project's own configuration.
///
/// # Safety
/// `project` must be a live handle, `config_json` null or a
/// NUL-terminated string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_project_check(
    project: *const SfProject,
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let p = borrow_project(project)?;
        let config = match optional_str(config_json, "config")? {
            Some(text) => LintConfig::from_json(text).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?,
            None => p.config.clone(),
        };
        hand_out(out, lint_project(p, &config).to_json())
    })
}

/// Graphviz DOT for the whole project, or one feature when `feature` is
/// not null.
///
/// # Safety
/// `project` must be a live handle, `feature` null or a NUL-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_project_dot(
    project: *const SfProject,
    feature: *const c_char,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let p = borrow_project(project)?;
        let filter = optional_str(feature, "feature")?;
        let doc = to_dot(p, filter).or_else(|e| fail(SfStatus::NotFound, e.to_string()))?;
        hand_out(out, doc.text)
    })
}

/// Number of trigger activations in the named task.
///
/// # Safety
/// `project` must be a live handle, `task` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_project_action_count(
    project: *const SfProject,
    task: *const c_char,
    out: *mut usize,
) -> SfStatus {
    guard(|| {
        check_out(out)?;
        let p = borrow_project(project)?;
        let name = borrow_str(task, "task")?;
        let (feature, path) = p
            .task(name)
            .ok_or(Failure(SfStatus::NotFound, format!("no task named `{name}`")))?;
        let flow = build_graph(feature, p).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?;
        *out = action_count(path, &flow).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?;
        Ok(())
    })
}

/// Per-feature metrics table as JSON.
///
/// # Safety
/// `project` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_project_metrics(
    project: *const SfProject,
    forward_only: bool,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let p = borrow_project(project)?;
        let options = if forward_only {
            PathOptions::forward_only()
        } else {
            PathOptions::default()
        };
        let table = project_metrics(p, options).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?;
        hand_out(out, to_json(&table))
    })
}

/// Summarizes defect-form CSV text for one group as JSON.
///
/// # Safety
/// `csv` and `group` must be NUL-terminated strings and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_eval_summarize_csv(
    csv: *const c_char,
    group: *const c_char,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let text = borrow_str(csv, "csv")?;
        let group = borrow_str(group, "group")?;
        let forms = read_defect_forms(text.as_bytes()).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?;
        let summary = summarize_defects(&forms, group).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?;
        hand_out(out, to_json(&summary))
    })
}

/// Summarizes TAM questionnaire CSV text for one group as JSON.
///
/// # Safety
/// `csv` and `group` must be NUL-terminated strings and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sf_tam_summarize_csv(
    csv: *const c_char,
    group: *const c_char,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let text = borrow_str(csv, "csv")?;
        let group = borrow_str(group, "group")?;
        let responses = read_tam_responses(text.as_bytes()).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?;
        let summary = summarize_tam(&responses, group).or_else(|e| fail(SfStatus::Invalid, e.to_string()))?;
        hand_out(out, summary.to_json())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
