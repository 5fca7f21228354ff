//! C ABI over `mumford-core`.
//!
//! Every entry point returns a [`MumfordStatus`]; results travel through out
//! pointers. Objects are opaque handles released with the matching `_free`
//! function. After a failure, [`mumford_last_error`] describes it on the
//! calling thread. Strings returned by the library must be released with
//! [`mumford_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mumford_core::buildings::{
    bm_group_data, family_presentation, four_fold_cover, polyhedron_from_presentation, solve_tau,
    stable_pairs_check, vertex_links, PolygonalPresentation,
};
use mumford_core::cli::{emit, execute, parse_invocation};
use mumford_core::ktheory::{ck_k_theory, stable_iso_verdict, StableIsoVerdict};
use mumford_core::matrix::BinaryMatrix;
use mumford_core::shift::SFTData;
use mumford_core::triples::{theta_trace, GradingOperator};
use mumford_core::Error;

/// Result of every call. Values from 10 upward mirror the library's error kinds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MumfordStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Panic = 3,
    InvalidGraph = 10,
    InvalidRank = 11,
    InvalidTransitionMatrix = 12,
    EnumerationBudgetExceeded = 13,
    RequiresIrreducible = 14,
    NotAdmissible = 15,
    TruncationTooSmall = 16,
    InvalidParameter = 17,
    SummabilityViolation = 18,
    InsufficientSpectrum = 19,
    RequiresEvenTriple = 20,
    PresentationInvalid = 21,
    RequiresSquares = 22,
    NotBmReducible = 23,
    InvalidTable = 24,
    DegenerateEuclidean = 25,
    InvalidPolygon = 26,
    BracketFailure = 27,
    Overflow = 28,
    NoConvergence = 29,
    Io = 30,
    Parse = 31,
    UnsupportedFormat = 32,
}

impl From<&Error> for MumfordStatus {
    fn from(e: &Error) -> Self {
        use MumfordStatus as S;
        match e {
            Error::InvalidGraph(_) => S::InvalidGraph,
            Error::InvalidRank(_) => S::InvalidRank,
            Error::InvalidTransitionMatrix(_) => S::InvalidTransitionMatrix,
            Error::EnumerationBudgetExceeded { .. } => S::EnumerationBudgetExceeded,
            Error::RequiresIrreducible => S::RequiresIrreducible,
            Error::NotAdmissible(_) => S::NotAdmissible,
            Error::TruncationTooSmall(_) => S::TruncationTooSmall,
            Error::InvalidParameter(_) => S::InvalidParameter,
            Error::SummabilityViolation { .. } => S::SummabilityViolation,
            Error::InsufficientSpectrum { .. } => S::InsufficientSpectrum,
            Error::RequiresEvenTriple => S::RequiresEvenTriple,
            Error::PresentationInvalid(_) => S::PresentationInvalid,
            Error::RequiresSquares(_) => S::RequiresSquares,
            Error::NotBMReducible(_) => S::NotBmReducible,
            Error::InvalidTable(_) => S::InvalidTable,
            Error::DegenerateEuclidean => S::DegenerateEuclidean,
            Error::InvalidPolygon(_) => S::InvalidPolygon,
            Error::BracketFailure { .. } => S::BracketFailure,
            Error::Overflow(_) => S::Overflow,
            Error::NoConvergence(_) => S::NoConvergence,
            Error::Io(_) => S::Io,
            Error::Parse(_) => S::Parse,
            Error::UnsupportedFormat(_) => S::UnsupportedFormat,
        }
    }
}

/// Shift of finite type built from a 0/1 transition matrix.
pub struct MumfordSft {
    inner: SFTData,
}

/// Polygonal presentation.
pub struct MumfordPresentation {
    inner: PolygonalPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

fn guard<F>(f: F) -> MumfordStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MumfordStatus::Ok
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("{name} is null"));
            MumfordStatus::NullArgument
        }
        Ok(Err(Failure::Utf8(name))) => {
            set_last_error(format!("{name} is not valid UTF-8"));
            MumfordStatus::InvalidUtf8
        }
        Ok(Err(Failure::Module(e))) => {
            set_last_error(format!("{}: {e}", e.code()));
            MumfordStatus::from(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MumfordStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

unsafe fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(name))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nuls removed").into_raw()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn mumford_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mumford_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Full Schottky shift of rank `genus`.
///
/// # Safety
/// `out_sft` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mumford_sft_schottky(genus: usize, out_sft: *mut *mut MumfordSft) -> MumfordStatus {
    guard(|| {
        let o = out(out_sft, "out_sft")?;
        *o = Box::into_raw(Box::new(MumfordSft { inner: SFTData::schottky(genus)? }));
        Ok(())
    })
}

/// Shift from a row-major n×n 0/1 matrix.
///
/// # Safety
/// `entries` must point to n·n bytes; `out_sft` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mumford_sft_from_matrix(
    entries: *const u8,
    n: usize,
    out_sft: *mut *mut MumfordSft,
) -> MumfordStatus {
    guard(|| {
        let o = out(out_sft, "out_sft")?;
        let len = n.checked_mul(n).ok_or(Error::Overflow("matrix size".into()))?;
        let e = slice(entries, len, "entries")?;
        let rows: Vec<Vec<u8>> = e.chunks(n.max(1)).map(|r| r.to_vec()).collect();
        let m = BinaryMatrix::from_rows(&rows)?;
        *o = Box::into_raw(Box::new(MumfordSft { inner: SFTData::from_matrix(m)? }));
        Ok(())
    })
}

/// # Safety
/// `sft` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mumford_sft_free(sft: *mut MumfordSft) {
    if !sft.is_null() {
        drop(Box::from_raw(sft));
    }
}

/// Alphabet size.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_sft_size(sft: *const MumfordSft, out_size: *mut usize) -> MumfordStatus {
    guard(|| {
        *out(out_size, "out_size")? = handle(sft, "sft")?.inner.matrix().size();
        Ok(())
    })
}

/// Perron eigenvalue and its logarithm.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_sft_perron(
    sft: *const MumfordSft,
    out_lambda: *mut f64,
    out_delta_h: *mut f64,
) -> MumfordStatus {
    guard(|| {
        let p = handle(sft, "sft")?.inner.perron_data()?;
        *out(out_lambda, "out_lambda")? = p.lambda;
        *out(out_delta_h, "out_delta_h")? = p.delta_h;
        Ok(())
    })
}

/// Ranks of K_0 and K_1, and the number of torsion invariant factors of K_0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_ktheory(
    sft: *const MumfordSft,
    out_k0_rank: *mut usize,
    out_k0_torsion: *mut usize,
    out_k1_rank: *mut usize,
) -> MumfordStatus {
    guard(|| {
        let k = ck_k_theory(handle(sft, "sft")?.inner.matrix());
        *out(out_k0_rank, "out_k0_rank")? = k.k0.rank;
        *out(out_k0_torsion, "out_k0_torsion")? = k.k0.torsion.len();
        *out(out_k1_rank, "out_k1_rank")? = k.k1.rank;
        Ok(())
    })
}

/// K_0 as a display string such as "Z/3 ⊕ Z^1". Free with [`mumford_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_k0_string(sft: *const MumfordSft, out_text: *mut *mut c_char) -> MumfordStatus {
    guard(|| {
        let k = ck_k_theory(handle(sft, "sft")?.inner.matrix());
        *out(out_text, "out_text")? = into_c_string(k.k0.to_string());
        Ok(())
    })
}

/// Writes 1 when the sufficient stable isomorphism criterion holds, else 0.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_stably_isomorphic(
    a: *const MumfordSft,
    b: *const MumfordSft,
    out_verdict: *mut i32,
) -> MumfordStatus {
    guard(|| {
        let v = stable_iso_verdict(handle(a, "a")?.inner.matrix(), handle(b, "b")?.inner.matrix());
        *out(out_verdict, "out_verdict")? = matches!(v, StableIsoVerdict::StablyIsomorphic) as i32;
        Ok(())
    })
}

/// Theta sum Tr e^{−tD²} of the grading truncated at `levels`, with its tail bound.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_theta_trace(
    sft: *const MumfordSft,
    levels: usize,
    t: f64,
    out_partial: *mut f64,
    out_tail_bound: *mut f64,
) -> MumfordStatus {
    guard(|| {
        let d = GradingOperator::from_sft(&handle(sft, "sft")?.inner, levels)?;
        let th = theta_trace(&d, t)?;
        *out(out_partial, "out_partial")? = th.partial;
        *out(out_tail_bound, "out_tail_bound")? = th.tail_bound;
        Ok(())
    })
}

/// Positive root of the exponent equation for polygon weights q_1..q_r.
///
/// # Safety
/// `weights` must point to `len` values; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_solve_tau(
    weights: *const u64,
    len: usize,
    out_x: *mut f64,
    out_residual: *mut f64,
) -> MumfordStatus {
    guard(|| {
        let r = solve_tau(slice(weights, len, "weights")?)?;
        *out(out_x, "out_x")? = r.x;
        *out(out_residual, "out_residual")? = r.residual;
        Ok(())
    })
}

/// The square family over 4q letters.
///
/// # Safety
/// `out_presentation` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mumford_family_presentation(
    q: usize,
    out_presentation: *mut *mut MumfordPresentation,
) -> MumfordStatus {
    guard(|| {
        let o = out(out_presentation, "out_presentation")?;
        *o = Box::into_raw(Box::new(MumfordPresentation { inner: family_presentation(q)? }));
        Ok(())
    })
}

/// Presentation from its JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out_presentation` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mumford_presentation_from_json(
    json: *const c_char,
    out_presentation: *mut *mut MumfordPresentation,
) -> MumfordStatus {
    guard(|| {
        let o = out(out_presentation, "out_presentation")?;
        let p: PolygonalPresentation =
            serde_json::from_str(string(json, "json")?).map_err(|e| Error::Parse(e.to_string()))?;
        *o = Box::into_raw(Box::new(MumfordPresentation { inner: p }));
        Ok(())
    })
}

/// Four-fold cover of a square presentation.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_presentation_cover(
    p: *const MumfordPresentation,
    out_presentation: *mut *mut MumfordPresentation,
) -> MumfordStatus {
    guard(|| {
        let c = four_fold_cover(&handle(p, "presentation")?.inner)?;
        *out(out_presentation, "out_presentation")? = Box::into_raw(Box::new(MumfordPresentation { inner: c }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mumford_presentation_free(p: *mut MumfordPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Vertex, edge and face counts of the assembled polyhedron, and whether
/// every vertex link is complete bipartite (1) or not (0).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_polyhedron_counts(
    p: *const MumfordPresentation,
    out_vertices: *mut usize,
    out_edges: *mut usize,
    out_faces: *mut usize,
    out_complete_links: *mut i32,
) -> MumfordStatus {
    guard(|| {
        let x = polyhedron_from_presentation(&handle(p, "presentation")?.inner)?;
        let c = x.counts();
        *out(out_vertices, "out_vertices")? = c.vertices;
        *out(out_edges, "out_edges")? = c.edges;
        *out(out_faces, "out_faces")? = c.faces;
        *out(out_complete_links, "out_complete_links")? =
            vertex_links(&x).iter().all(|l| l.is_complete_bipartite()) as i32;
        Ok(())
    })
}

/// Whether the stable pairs condition holds (1) or not (0).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_stable_pairs(p: *const MumfordPresentation, out_holds: *mut i32) -> MumfordStatus {
    guard(|| {
        let r = stable_pairs_check(&handle(p, "presentation")?.inner)?;
        *out(out_holds, "out_holds")? = r.holds as i32;
        Ok(())
    })
}

/// Vertex valences of the two trees acted on by the BM group, and its
/// number of relations.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mumford_bm_valences(
    p: *const MumfordPresentation,
    out_horizontal: *mut usize,
    out_vertical: *mut usize,
    out_relations: *mut usize,
) -> MumfordStatus {
    guard(|| {
        let d = bm_group_data(&handle(p, "presentation")?.inner)?;
        *out(out_horizontal, "out_horizontal")? = d.valences.0;
        *out(out_vertical, "out_vertical")? = d.valences.1;
        *out(out_relations, "out_relations")? = d.relations.len();
        Ok(())
    })
}

/// Runs a command-line invocation (without the program name) and returns
/// the report text. Free with [`mumford_string_free`].
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; `out_report` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mumford_run(
    argc: usize,
    argv: *const *const c_char,
    out_report: *mut *mut c_char,
) -> MumfordStatus {
    guard(|| {
        let o = out(out_report, "out_report")?;
        let mut args = vec!["mumford".to_string()];
        for &a in slice(argv, argc, "argv")? {
            args.push(string(a, "argv")?.to_string());
        }
        let plan = parse_invocation(args)?;
        let bytes = emit(&execute(&plan)?, plan.format)?;
        *o = into_c_string(String::from_utf8(bytes).map_err(|_| Failure::Utf8("report"))?);
        Ok(())
    })
}
