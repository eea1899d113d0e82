//! C ABI over the `qiforge` toolkit.
//!
//! Objects are opaque handles created by `qf_*_new`/`qf_*_parse` and released
//! with the matching `qf_*_free`. Every fallible call returns a `QfStatus`;
//! on failure `qf_last_error` describes the problem for the calling thread.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with `qf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qiforge::ball::Ball;
use qiforge::cli::parse_map;
use qiforge::error::Error;
use qiforge::folner::{profile, standard_family, write_profile_csv, FolnerFamily};
use qiforge::group::MarkedGroup;
use qiforge::matching::r_star;
use qiforge::qi::{self, AuditWindow, QIMap};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParameter = 3,
    Parse = 4,
    Budget = 5,
    OutOfRange = 6,
    Unsupported = 7,
    Io = 8,
    Internal = 9,
}

/// A marked group.
pub struct QfGroup(MarkedGroup);

/// An enumerated word-metric ball.
pub struct QfBall(Ball);

/// A map between marked groups.
pub struct QfMap(QIMap);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QfStatus {
    match err {
        Error::Parse(_) | Error::Config(_) => QfStatus::Parse,
        Error::Budget { .. } => QfStatus::Budget,
        Error::OutOfWindow { .. } | Error::WindowTooSmall(_) => QfStatus::OutOfRange,
        Error::UnsupportedMap(_) | Error::NotAmenable(_) | Error::GroupMismatch(_) => QfStatus::Unsupported,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => QfStatus::Io,
        _ => QfStatus::InvalidParameter,
    }
}

struct Fail(QfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), format!("{}: {e}", e.kind()))
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> QfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QfStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal: panic inside qiforge".into());
            QfStatus::Internal
        }
    }
}

fn nonnull<T>(p: *const T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(QfStatus::NullPointer, format!("null pointer: {what}")))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    nonnull(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn to_c(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(QfStatus::Internal, "string contains NUL".into()))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn qf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from a `qiforge` out-parameter and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a group such as `"Z^2"`, `"BS(1,3)"`, `"F_2"`, `"ZxC4"` or `"2Z"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_group_parse(spec: *const c_char, out: *mut *mut QfGroup) -> QfStatus {
    guard(|| {
        nonnull(out, "out")?;
        let g: MarkedGroup = read_str(spec, "spec")?.parse()?;
        *out = Box::into_raw(Box::new(QfGroup(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from `qf_group_parse` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn qf_group_free(g: *mut QfGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical name of the group.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_group_name(g: *const QfGroup, out: *mut *mut c_char) -> QfStatus {
    guard(|| {
        nonnull(g, "group")?;
        nonnull(out, "out")?;
        *out = to_c((*g).0.to_string())?;
        Ok(())
    })
}

/// Enumerates the ball of `radius` around the identity, failing with
/// `Budget` beyond `budget` elements.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_ball_new(g: *const QfGroup, radius: u32, budget: usize, out: *mut *mut QfBall) -> QfStatus {
    guard(|| {
        nonnull(g, "group")?;
        nonnull(out, "out")?;
        let b = Ball::new(&(*g).0, radius, budget)?;
        *out = Box::into_raw(Box::new(QfBall(b)));
        Ok(())
    })
}

/// # Safety
/// `b` must come from `qf_ball_new` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn qf_ball_free(b: *mut QfBall) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Number of elements.
///
/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_ball_size(b: *const QfBall, out: *mut usize) -> QfStatus {
    guard(|| {
        nonnull(b, "ball")?;
        nonnull(out, "out")?;
        *out = (*b).0.len();
        Ok(())
    })
}

fn check_index(b: &Ball, index: usize) -> Result<(), Fail> {
    if index < b.len() {
        Ok(())
    } else {
        Err(Fail(QfStatus::OutOfRange, format!("index {index} beyond {} elements", b.len())))
    }
}

/// Normal form of element `index` (BFS order, 0 is the identity).
///
/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_ball_element(b: *const QfBall, index: usize, out: *mut *mut c_char) -> QfStatus {
    guard(|| {
        nonnull(b, "ball")?;
        nonnull(out, "out")?;
        let b = &(*b).0;
        check_index(b, index)?;
        *out = to_c(b.group().format(b.element(index)))?;
        Ok(())
    })
}

/// Word length of element `index`.
///
/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_ball_distance(b: *const QfBall, index: usize, out: *mut u32) -> QfStatus {
    guard(|| {
        nonnull(b, "ball")?;
        nonnull(out, "out")?;
        let b = &(*b).0;
        check_index(b, index)?;
        *out = b.distance_of(index);
        Ok(())
    })
}

/// Word length of an element given in normal form, if it lies in the ball.
///
/// # Safety
/// `b` must be a live handle, `element` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qf_ball_word_length(b: *const QfBall, element: *const c_char, out: *mut u32) -> QfStatus {
    guard(|| {
        nonnull(b, "ball")?;
        nonnull(out, "out")?;
        let b = &(*b).0;
        let g = b.group().parse_element(read_str(element, "element")?)?;
        *out = b.word_length(&g)?;
        Ok(())
    })
}

/// Parses a map such as `"floor:2:Z"`, `"incl:2Z"`, `"fix:2"`, `"proj:2"`,
/// `"chart:2"`, `"fc:2:2"` or `"extend:2"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_map_parse(spec: *const c_char, out: *mut *mut QfMap) -> QfStatus {
    guard(|| {
        nonnull(out, "out")?;
        let f = parse_map(read_str(spec, "spec")?)?;
        *out = Box::into_raw(Box::new(QfMap(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from `qf_map_parse` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn qf_map_free(f: *mut QfMap) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Image of an element given in normal form.
///
/// # Safety
/// `f` must be a live handle, `element` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qf_map_apply(f: *const QfMap, element: *const c_char, out: *mut *mut c_char) -> QfStatus {
    guard(|| {
        nonnull(f, "map")?;
        nonnull(out, "out")?;
        let f = &(*f).0;
        let x = f.source().parse_element(read_str(element, "element")?)?;
        if !f.source().contains(&x) {
            return Err(Fail(QfStatus::InvalidParameter, "element outside the source subgroup".into()));
        }
        *out = to_c(f.target().format(&f.apply(&x)))?;
        Ok(())
    })
}

/// Minimal matching displacement at window scale `l`, searched up to
/// `r_max`. Writes `-1` when no radius up to `r_max` works.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_r_star(f: *const QfMap, l: u32, r_max: u32, out: *mut i64) -> QfStatus {
    guard(|| {
        nonnull(f, "map")?;
        nonnull(out, "out")?;
        let r = r_star(&(*f).0, l, r_max, &Default::default())?;
        *out = r.map_or(-1, i64::from);
        Ok(())
    })
}

/// Exhaustive check of the map's claimed constants over the source ball of
/// `radius`. Writes the verdict to `out_pass` and, if `out_json` is not
/// NULL, the full report as JSON.
///
/// # Safety
/// `f` must be a live handle, `out_pass` valid, `out_json` valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn qf_audit(
    f: *const QfMap,
    radius: u32,
    budget: usize,
    out_pass: *mut bool,
    out_json: *mut *mut c_char,
) -> QfStatus {
    guard(|| {
        nonnull(f, "map")?;
        nonnull(out_pass, "out_pass")?;
        let f = &(*f).0;
        let window = AuditWindow::new(f, radius, 2 * radius, budget)?;
        let rep = qi::verify_constants(f, f.claimed(), &window)?;
        *out_pass = rep.pass;
        if !out_json.is_null() {
            let mut buf = Vec::new();
            rep.write_json(&mut buf)?;
            *out_json = to_c(String::from_utf8(buf).expect("JSON is UTF-8"))?;
        }
        Ok(())
    })
}

/// Følner profile CSV for `i = 1..=i_max`: the standard family for amenable
/// groups, word balls otherwise.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qf_folner_profile_csv(
    g: *const QfGroup,
    i_max: u32,
    budget: usize,
    out: *mut *mut c_char,
) -> QfStatus {
    guard(|| {
        nonnull(g, "group")?;
        nonnull(out, "out")?;
        let g = &(*g).0;
        let fam = if g.family().is_amenable() {
            standard_family(g)?
        } else {
            FolnerFamily::word_balls(g)
        };
        let rows = profile(&fam, i_max, budget)?;
        let mut buf = Vec::new();
        write_profile_csv(&rows, &mut buf)?;
        *out = to_c(String::from_utf8(buf).expect("CSV is UTF-8"))?;
        Ok(())
    })
}
