//! C ABI over `sunada-lab`.
//!
//! Objects cross the boundary as opaque handles (`SlGroup`, `SlScenario`)
//! created and destroyed by this library. Every fallible call returns an
//! [`SlStatus`]; on failure [`sl_last_error`] describes what went wrong.
//! Strings returned to the caller are owned by the caller and released with
//! [`sl_string_free`]. Panics never unwind across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use sunada_lab::cover::Multigraph;
use sunada_lab::group::{almost_conjugate, is_conjugate_subgroups, PermGroup, Subgroup};
use sunada_lab::magnetic::{build_operator, eigenvalues, ConnectionData, Potential, Turn};
use sunada_lab::scenario::{self, files::GroupFile, Prepared, RunOptions, Scenario};
use sunada_lab::{Error, Permutation};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    /// Success; for verdict-bearing calls, the verdict is positive.
    SlOk = 0,
    /// The call succeeded and the verdict is negative.
    SlNegative = 1,
    /// A null pointer, bad UTF-8 or an out-of-range argument.
    SlInvalidArgument = 2,
    SlValidationFailed = 3,
    SlIo = 4,
    SlParse = 5,
    SlNotAlmostConjugate = 6,
    SlCapExceeded = 7,
    /// Any other library error.
    SlFailed = 8,
    SlPanic = 9,
}

/// Finite permutation group.
pub struct SlGroup(PermGroup);

/// Loaded and validated scenario.
pub struct SlScenario(Scenario);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn status_of(e: &Error) -> SlStatus {
    match e {
        Error::ValidationFailed { .. } => SlStatus::SlValidationFailed,
        Error::Io { .. } => SlStatus::SlIo,
        Error::Json { .. } => SlStatus::SlParse,
        Error::NotAlmostConjugate => SlStatus::SlNotAlmostConjugate,
        Error::CapExceeded { .. } => SlStatus::SlCapExceeded,
        Error::InvalidPermutation(_) | Error::DegreeMismatch { .. } | Error::BadK(_) => {
            SlStatus::SlInvalidArgument
        }
        _ => SlStatus::SlFailed,
    }
}

struct Fail(SlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(SlStatus::SlInvalidArgument, msg.into())
}

/// Runs `f`, recording any error or panic in the thread's last-error slot.
fn guard(f: impl FnOnce() -> Result<SlStatus, Fail>) -> SlStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SlStatus::SlPanic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{name} is not UTF-8")))
}

unsafe fn raw_slice<'a, T>(p: *const T, n: usize, name: &str) -> Result<&'a [T], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(invalid(format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| invalid("output contains a nul byte"))?;
    // SAFETY: callers check `out` for null before reaching here.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Library name and version; static, never freed.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!("sunada-lab ", env!("CARGO_PKG_VERSION"), "\0")
        .as_ptr()
        .cast()
}

/// Message for the last failed call on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a group file (`{"name", "degree", "generators"}`) and enumerates
/// the group.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_group_from_json(
    json: *const c_char,
    out: *mut *mut SlGroup,
) -> SlStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let text = str_arg(json, "json")?;
        let f: GroupFile =
            serde_json::from_str(text).map_err(|e| Fail(SlStatus::SlParse, e.to_string()))?;
        let g = PermGroup::new(&f.name, f.degree, f.permutations("group")?)?;
        *out = Box::into_raw(Box::new(SlGroup(g)));
        Ok(SlStatus::SlOk)
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_group_order(g: *const SlGroup, out: *mut usize) -> SlStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            return Err(invalid("null argument"));
        }
        *out = (*g).0.order();
        Ok(SlStatus::SlOk)
    })
}

/// # Safety
/// `g` must be null or a handle from [`sl_group_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_group_free(g: *mut SlGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

fn subgroup_from_json(g: &PermGroup, text: &str, name: &str) -> Result<Subgroup, Fail> {
    let gens: Vec<Vec<usize>> =
        serde_json::from_str(text).map_err(|e| Fail(SlStatus::SlParse, format!("{name}: {e}")))?;
    let perms = gens
        .iter()
        .map(|images| Permutation::from_images(images))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subgroup::generated(g, perms)?)
}

/// Almost-conjugacy of the subgroups generated by `h1_json` and `h2_json`
/// (each a JSON array of image arrays). Returns `SlOk` when almost
/// conjugate and `SlNegative` otherwise; `conjugate` may be null.
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn sl_almost_conjugate(
    g: *const SlGroup,
    h1_json: *const c_char,
    h2_json: *const c_char,
    conjugate: *mut bool,
) -> SlStatus {
    guard(|| {
        if g.is_null() {
            return Err(invalid("group is null"));
        }
        let g = &(*g).0;
        let h1 = subgroup_from_json(g, str_arg(h1_json, "h1_json")?, "h1_json")?;
        let h2 = subgroup_from_json(g, str_arg(h2_json, "h2_json")?, "h2_json")?;
        if !conjugate.is_null() {
            *conjugate = is_conjugate_subgroups(g, &h1, &h2);
        }
        Ok(if almost_conjugate(g, &h1, &h2).verdict {
            SlStatus::SlOk
        } else {
            SlStatus::SlNegative
        })
    })
}

/// Loads and validates a scenario file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_scenario_load(
    path: *const c_char,
    out: *mut *mut SlScenario,
) -> SlStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let path = str_arg(path, "path")?;
        let s = Scenario::load(Path::new(path))?;
        *out = Box::into_raw(Box::new(SlScenario(s)));
        Ok(SlStatus::SlOk)
    })
}

/// # Safety
/// `s` must be null or a handle from [`sl_scenario_load`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_scenario_free(s: *mut SlScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs the full pipeline with `seed` and the scenario's k range and
/// tolerance. The JSON report is written to `report_json` (free with
/// [`sl_string_free`]). Returns `SlOk` or `SlNegative` by overall verdict.
///
/// # Safety
/// `s` must be a live handle; `report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_scenario_run(
    s: *const SlScenario,
    seed: u64,
    report_json: *mut *mut c_char,
) -> SlStatus {
    guard(|| {
        if s.is_null() || report_json.is_null() {
            return Err(invalid("null argument"));
        }
        let opts = RunOptions {
            seed: Some(seed),
            ..RunOptions::default()
        };
        let (report, _, _) = scenario::run_scenario(&(*s).0, &opts)?;
        let verdict = report.verdict;
        out_string(
            serde_json::to_string(&report).expect("serializable"),
            report_json,
        )?;
        Ok(if verdict {
            SlStatus::SlOk
        } else {
            SlStatus::SlNegative
        })
    })
}

/// Largest per-k spectral gap between the two quotients for
/// `k_lo ≤ k ≤ k_hi`. Returns `SlOk` when every gap is at most `tol`.
///
/// # Safety
/// `s` must be a live handle; `max_gap` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_scenario_compare(
    s: *const SlScenario,
    seed: u64,
    k_lo: i64,
    k_hi: i64,
    tol: f64,
    max_gap: *mut f64,
) -> SlStatus {
    guard(|| {
        if s.is_null() || max_gap.is_null() {
            return Err(invalid("null argument"));
        }
        if k_lo > k_hi {
            return Err(invalid("empty k range"));
        }
        let prep = Prepared::new(&(*s).0, seed)?;
        let r = scenario::compare(&prep, &scenario::k_values((k_lo, k_hi)), tol)?;
        *max_gap = r.max_gap;
        Ok(if r.verdict {
            SlStatus::SlOk
        } else {
            SlStatus::SlNegative
        })
    })
}

/// Sorted eigenvalues of the magnetic operator at tensor power `k` on a
/// multigraph with `edge_count` edges `tails[i] → heads[i]` carrying phase
/// `num[i]/den[i]` of a turn. `potential` (length `vertex_count`) may be
/// null; `out` receives `vertex_count` values.
///
/// # Safety
/// Arrays must hold the stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn sl_magnetic_spectrum(
    vertex_count: usize,
    edge_count: usize,
    tails: *const usize,
    heads: *const usize,
    num: *const i64,
    den: *const i64,
    k: i64,
    potential: *const f64,
    out: *mut f64,
) -> SlStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        let t = raw_slice(tails, edge_count, "tails")?;
        let h = raw_slice(heads, edge_count, "heads")?;
        let p = raw_slice(num, edge_count, "num")?;
        let q = raw_slice(den, edge_count, "den")?;
        let graph = Multigraph::new(
            vertex_count,
            t.iter().copied().zip(h.iter().copied()).collect(),
        )?;
        let turns = p
            .iter()
            .zip(q)
            .map(|(&a, &b)| Turn::new(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        let q = if potential.is_null() {
            Potential::zero(vertex_count)
        } else {
            Potential {
                values: raw_slice(potential, vertex_count, "potential")?.to_vec(),
            }
        };
        let op = build_operator(&graph, &ConnectionData::from_turns(turns), k, &q)?;
        let values = eigenvalues(&op)?;
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
        Ok(SlStatus::SlOk)
    })
}
