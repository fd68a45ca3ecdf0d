//! C interface to polyforge.
//!
//! Polytopes and transformation logs cross the boundary as opaque handles
//! and are exchanged as the same JSON documents the command line tool
//! reads and writes. Every function returns a [`PfStatus`]; on failure the
//! message is available from [`pf_last_error`] on the same thread. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! released with [`pf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polyforge::constructor::{build_tower, c_connected_sum, TowerSize};
use polyforge::enumerative::gc_of_fvector;
use polyforge::error::Error;
use polyforge::fixtures;
use polyforge::geometry::{f_vector_of, Polytope};
use polyforge::io::{digest, LogDocument, PolytopeDocument};
use polyforge::normalizer::{normalize_cube, relate_cubes, TransformLog};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed JSON, bad rationals, wrong schema version or dimensions.
    InvalidInput = 2,
    /// The input violates a precondition, e.g. it is not a cube.
    Precondition = 3,
    /// An exact certificate failed.
    Certificate = 4,
    /// A panic was caught at the boundary.
    Panic = 5,
}

/// Opaque certified polytope.
pub struct PfPolytope(Polytope);

/// Opaque transformation log.
pub struct PfLog(TransformLog);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PfStatus {
    match e {
        Error::Input(_) | Error::SchemaVersion { .. } | Error::DimensionMismatch { .. } | Error::Io(_) => {
            PfStatus::InvalidInput
        }
        e if e.is_certificate_failure() => PfStatus::Certificate,
        _ => PfStatus::Precondition,
    }
}

/// Runs `f`, recording the error message and mapping panics.
fn guard(f: impl FnOnce() -> Result<(), (PfStatus, String)>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            PfStatus::Panic
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (PfStatus, String)>;
}

impl<T> Lift<T> for polyforge::Result<T> {
    fn lift(self) -> Result<T, (PfStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(name: &str) -> (PfStatus, String) {
    (PfStatus::NullPointer, format!("{name} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, (PfStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, (PfStatus, String)> {
    if s.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (PfStatus::InvalidInput, format!("{name}: {e}")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (PfStatus, String)> {
    let c = CString::new(s).map_err(|e| (PfStatus::InvalidInput, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn check_out<T>(out: *mut T, name: &str) -> Result<(), (PfStatus, String)> {
    if out.is_null() {
        Err(null(name))
    } else {
        Ok(())
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and certifies a polytope document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_polytope_from_json(json: *const c_char, out: *mut *mut PfPolytope) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let text = read_str(json, "json")?;
        let doc: PolytopeDocument =
            serde_json::from_str(text).map_err(|e| (PfStatus::InvalidInput, format!("malformed JSON: {e}")))?;
        put(out, PfPolytope(doc.to_polytope().lift()?));
        Ok(())
    })
}

/// Writes the polytope document.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_polytope_to_json(p: *const PfPolytope, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = borrow(p, "p")?;
        let text = serde_json::to_string_pretty(&PolytopeDocument::from_polytope(&p.0))
            .map_err(|e| (PfStatus::InvalidInput, e.to_string()))?;
        put_string(out, text)
    })
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_polytope_free(p: *mut PfPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Dimension, vertex count and facet count; any out-pointer may be null.
///
/// # Safety
/// `p` must be a live handle; non-null out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pf_polytope_counts(
    p: *const PfPolytope,
    dim: *mut usize,
    vertices: *mut usize,
    facets: *mut usize,
) -> PfStatus {
    guard(|| {
        let p = &borrow(p, "p")?.0;
        for (ptr, v) in [(dim, p.dim()), (vertices, p.vertices().len()), (facets, p.facets().len())] {
            if !ptr.is_null() {
                *ptr = v;
            }
        }
        Ok(())
    })
}

/// SHA-256 digest of the canonical facet rows, as hex.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_polytope_digest(p: *const PfPolytope, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        put_string(out, digest(&borrow(p, "p")?.0))
    })
}

/// The cube `[-1, 1]^d`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_standard_cube(d: usize, out: *mut *mut PfPolytope) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        if d == 0 {
            return Err((PfStatus::InvalidInput, "dimension must be positive".into()));
        }
        put(out, PfPolytope(fixtures::standard_cube(d)));
        Ok(())
    })
}

/// A seeded random combinatorial cube.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_random_cube(d: usize, seed: u64, out: *mut *mut PfPolytope) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        put(out, PfPolytope(fixtures::random_cube(d, seed).lift()?));
        Ok(())
    })
}

/// Face numbers `f_0, ..., f_{d-1}`. Writes at most `cap` entries to `buf`
/// and the full length to `len`.
///
/// # Safety
/// `p` must be a live handle, `buf` valid for `cap` entries (or null when
/// `cap` is 0) and `len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_f_vector(p: *const PfPolytope, buf: *mut u64, cap: usize, len: *mut usize) -> PfStatus {
    guard(|| {
        check_out(len, "len")?;
        let f = f_vector_of(borrow(p, "p")?.0.incidence()).lift()?;
        write_slice(f.entries(), buf, cap, len)
    })
}

/// Cubical g-vector `g^c_0, ..., g^c_{floor(d/2)}` of a cubical polytope,
/// written like [`pf_f_vector`].
///
/// # Safety
/// As for [`pf_f_vector`].
#[no_mangle]
pub unsafe extern "C" fn pf_gc_vector(p: *const PfPolytope, buf: *mut i64, cap: usize, len: *mut usize) -> PfStatus {
    guard(|| {
        check_out(len, "len")?;
        let f = f_vector_of(borrow(p, "p")?.0.incidence()).lift()?;
        let g = gc_of_fvector(&f).lift()?;
        write_slice(g.entries(), buf, cap, len)
    })
}

unsafe fn write_slice<T: Copy>(xs: &[T], buf: *mut T, cap: usize, len: *mut usize) -> Result<(), (PfStatus, String)> {
    *len = xs.len();
    if cap > 0 {
        if buf.is_null() {
            return Err(null("buf"));
        }
        for (i, x) in xs.iter().take(cap).enumerate() {
            *buf.add(i) = *x;
        }
    }
    Ok(())
}

/// Normal and projective steps taking a combinatorial cube to the standard
/// cube.
///
/// # Safety
/// `q` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_normalize_cube(q: *const PfPolytope, out: *mut *mut PfLog) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let log = normalize_cube(&borrow(q, "q")?.0).lift()?;
        log.check_bound().lift()?;
        put(out, PfLog(log));
        Ok(())
    })
}

/// Steps taking the cube `a` onto the cube `b`.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_relate_cubes(a: *const PfPolytope, b: *const PfPolytope, out: *mut *mut PfLog) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let log = relate_cubes(&borrow(a, "a")?.0, &borrow(b, "b")?.0).lift()?;
        log.check_bound().lift()?;
        put(out, PfLog(log));
        Ok(())
    })
}

/// Number of steps in the log.
///
/// # Safety
/// `log` must be a live handle and `len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_log_len(log: *const PfLog, len: *mut usize) -> PfStatus {
    guard(|| {
        check_out(len, "len")?;
        *len = borrow(log, "log")?.0.len();
        Ok(())
    })
}

/// The polytope after the last step.
///
/// # Safety
/// `log` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_log_final(log: *const PfLog, out: *mut *mut PfPolytope) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        put(out, PfPolytope(borrow(log, "log")?.0.final_polytope().clone()));
        Ok(())
    })
}

/// The replayable log document.
///
/// # Safety
/// `log` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_log_to_json(log: *const PfLog, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let doc = LogDocument::from_log(&borrow(log, "log")?.0);
        let text = serde_json::to_string_pretty(&doc).map_err(|e| (PfStatus::InvalidInput, e.to_string()))?;
        put_string(out, text)
    })
}

/// Replays a log document and returns the certified result.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_log_replay_json(json: *const c_char, out: *mut *mut PfPolytope) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let doc: LogDocument = serde_json::from_str(read_str(json, "json")?)
            .map_err(|e| (PfStatus::InvalidInput, format!("malformed JSON: {e}")))?;
        put(out, PfPolytope(doc.replay().lift()?));
        Ok(())
    })
}

/// # Safety
/// `log` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_log_free(log: *mut PfLog) {
    if !log.is_null() {
        drop(Box::from_raw(log));
    }
}

/// A tower of cubes with bottom facet projectively `q` and top facet `q2`.
///
/// # Safety
/// `q`, `q2` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_build_tower(q: *const PfPolytope, q2: *const PfPolytope, out: *mut *mut PfPolytope) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let (q, q2) = (&borrow(q, "q")?.0, &borrow(q2, "q2")?.0);
        let t = build_tower(q, q2).lift()?;
        t.check_witnesses(q, q2).lift()?;
        t.check_structure().lift()?;
        put(out, PfPolytope(t.polytope));
        Ok(())
    })
}

/// C-connected sum along facets `f1` of `p1` and `f2` of `p2` with a
/// connector of `cubes` cubes (0 for the default `4d`).
///
/// # Safety
/// `p1`, `p2` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_connected_sum(
    p1: *const PfPolytope,
    f1: usize,
    p2: *const PfPolytope,
    f2: usize,
    cubes: usize,
    out: *mut *mut PfPolytope,
) -> PfStatus {
    guard(|| {
        check_out(out, "out")?;
        let (p1, p2) = (&borrow(p1, "p1")?.0, &borrow(p2, "p2")?.0);
        let n = if cubes == 0 { 4 * p1.dim() } else { cubes };
        let cs = c_connected_sum(p1, f1, p2, f2, TowerSize::Exact(n)).lift()?;
        put(out, PfPolytope(cs.polytope));
        Ok(())
    })
}
