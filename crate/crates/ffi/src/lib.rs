//! C ABI for the extremal graph theory library: opaque graph handles,
//! status codes, and a thread-local last-error message.
//!
//! Conventions: every fallible function returns a [`TfStatus`] and writes
//! results through out-pointers; `TF_STATUS_OK` means all out-parameters
//! are valid. Handles returned through `tf_*` constructors must be
//! released with `tf_graph_free`; strings returned by the library must be
//! released with `tf_string_free`. Graphs are immutable, so sharing a
//! handle across threads for reads is safe.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use turanforge::constructions::{self, MultiplierStrategy};
use turanforge::detect::{self, ForbiddenFamily};
use turanforge::graph::Graph;
use turanforge::{bounds, graph6, turan, Error};

/// Status codes mirroring the library's error taxonomy.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TfStatus {
    TfStatusOk = 0,
    /// a precondition on the inputs was violated
    TfStatusDomainError = 1,
    /// a node/trial budget ran out
    TfStatusBudgetExhausted = 2,
    /// internal invariant failure (a bug, not bad input)
    TfStatusInternalError = 3,
    /// malformed input data
    TfStatusParseError = 4,
    /// a required pointer argument was null
    TfStatusNullArgument = 5,
    /// a string argument was not valid UTF-8
    TfStatusInvalidUtf8 = 6,
}

/// Opaque graph handle.
pub struct TfGraph {
    inner: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn status_of(err: &Error) -> TfStatus {
    match err {
        Error::Domain(_) => TfStatus::TfStatusDomainError,
        Error::Budget(_) => TfStatus::TfStatusBudgetExhausted,
        Error::Internal(_) => TfStatus::TfStatusInternalError,
        Error::Parse(_) | Error::Io(_) => TfStatus::TfStatusParseError,
    }
}

/// Message for the most recent failure on this thread. Valid until the
/// next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn tf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a `tf_*` function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn tf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Frees a graph handle. Null is ignored.
///
/// # Safety
/// `g` must have been returned by a `tf_*` constructor and not freed
/// before.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_free(g: *mut TfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

fn wrap<F: FnOnce() -> Result<(), TfStatus>>(f: F) -> TfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TfStatus::TfStatusOk,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            TfStatus::TfStatusInternalError
        }
    }
}

fn lib_err(e: Error) -> TfStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn graph_ref<'a>(g: *const TfGraph) -> Result<&'a Graph, TfStatus> {
    if g.is_null() {
        set_error("null graph handle");
        return Err(TfStatus::TfStatusNullArgument);
    }
    Ok(&(*g).inner)
}

unsafe fn cstr<'a>(s: *const c_char) -> Result<&'a str, TfStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(TfStatus::TfStatusNullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        TfStatus::TfStatusInvalidUtf8
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), TfStatus> {
    if out.is_null() {
        set_error("null out-pointer");
        return Err(TfStatus::TfStatusNullArgument);
    }
    out.write(value);
    Ok(())
}

fn boxed(g: Graph) -> *mut TfGraph {
    Box::into_raw(Box::new(TfGraph { inner: g }))
}

/// Builds a graph from `num_edges` unordered pairs laid out as
/// `u0, v0, u1, v1, ...`. Duplicate edges collapse; loops are rejected.
///
/// # Safety
/// `edges` must point to `2 * num_edges` readable `u32`s (or be null when
/// `num_edges` is 0); `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_from_edge_list(
    n: u32,
    edges: *const u32,
    num_edges: usize,
    out: *mut *mut TfGraph,
) -> TfStatus {
    wrap(|| {
        if edges.is_null() && num_edges > 0 {
            set_error("null edge array");
            return Err(TfStatus::TfStatusNullArgument);
        }
        let pairs: Vec<(usize, usize)> = (0..num_edges)
            .map(|i| {
                (
                    edges.add(2 * i).read() as usize,
                    edges.add(2 * i + 1).read() as usize,
                )
            })
            .collect();
        let g = Graph::from_edge_list(n as usize, &pairs).map_err(lib_err)?;
        write_out(out, boxed(g))
    })
}

/// Decodes a graph6 string.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_from_graph6(
    text: *const c_char,
    out: *mut *mut TfGraph,
) -> TfStatus {
    wrap(|| {
        let s = cstr(text)?;
        let g = graph6::decode(s).map_err(lib_err)?;
        write_out(out, boxed(g))
    })
}

/// Encodes a graph as graph6; the string must be freed with
/// `tf_string_free`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_to_graph6(g: *const TfGraph, out: *mut *mut c_char) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        let enc = graph6::encode(graph).map_err(lib_err)?;
        let c = CString::new(enc).expect("graph6 is ASCII");
        write_out(out, c.into_raw())
    })
}

/// Vertex count; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_vertex_count(g: *const TfGraph) -> u64 {
    if g.is_null() {
        0
    } else {
        (*g).inner.n() as u64
    }
}

/// Edge count; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_edge_count(g: *const TfGraph) -> u64 {
    if g.is_null() {
        0
    } else {
        (*g).inner.edge_count() as u64
    }
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_has_edge(
    g: *const TfGraph,
    u: u32,
    v: u32,
    out: *mut bool,
) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        let (u, v) = (u as usize, v as usize);
        if u >= graph.n() || v >= graph.n() {
            set_error("vertex out of range");
            return Err(TfStatus::TfStatusDomainError);
        }
        write_out(out, u != v && graph.has_edge(u, v))
    })
}

/// Number of common neighbors of two distinct vertices.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_graph_codegree(
    g: *const TfGraph,
    u: u32,
    v: u32,
    out: *mut u64,
) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        let (u, v) = (u as usize, v as usize);
        if u >= graph.n() || v >= graph.n() {
            set_error("vertex out of range");
            return Err(TfStatus::TfStatusDomainError);
        }
        let c = graph.codegree(u, v).map_err(lib_err)?;
        write_out(out, c as u64)
    })
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_count_triangles(g: *const TfGraph, out: *mut u64) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        write_out(out, detect::count_triangles(graph))
    })
}

/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_count_c4(g: *const TfGraph, out: *mut u64) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        write_out(out, detect::count_c4(graph))
    })
}

/// Girth, or -1 when the graph is acyclic.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_girth(g: *const TfGraph, out: *mut i64) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        write_out(out, detect::girth(graph).map_or(-1, |k| k as i64))
    })
}

/// Shortest odd cycle length, or -1 for bipartite graphs and forests.
///
/// # Safety
/// `g` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_odd_girth(g: *const TfGraph, out: *mut i64) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        write_out(out, detect::odd_girth(graph).map_or(-1, |k| k as i64))
    })
}

/// Checks the graph against a forbidden family given in the CLI token
/// syntax, e.g. `"triangle,c5,k{2,3},b3"`.
///
/// # Safety
/// `g` must be a live handle; `family` a valid C string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_is_family_free(
    g: *const TfGraph,
    family: *const c_char,
    out: *mut bool,
) -> TfStatus {
    wrap(|| {
        let graph = graph_ref(g)?;
        let fam = ForbiddenFamily::parse(cstr(family)?).map_err(lib_err)?;
        let rep = detect::is_family_free(graph, &fam).map_err(lib_err)?;
        write_out(out, rep.free)
    })
}

/// Builds the tripartite triangle-free `K_{2,3}`-free graph over `F_q`
/// (prime `q = 2 mod 3`, `q >= 5`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_build_gq(q: u64, out: *mut *mut TfGraph) -> TfStatus {
    wrap(|| {
        let g = constructions::build_gq(q).map_err(lib_err)?;
        write_out(out, boxed(g.into_graph()))
    })
}

/// Builds the `(t+2)`-partite generalization, searching for a valid
/// multiplier table by backtracking within `budget` nodes.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_build_gqt(
    q: u64,
    t: u32,
    budget: u64,
    out: *mut *mut TfGraph,
) -> TfStatus {
    wrap(|| {
        let search = constructions::find_multipliers(
            q,
            t as usize,
            MultiplierStrategy::Backtracking,
            budget,
        )
        .map_err(lib_err)?;
        match search.found {
            Some(ms) => {
                let g = constructions::build_gqt(q, &ms).map_err(lib_err)?;
                write_out(out, boxed(g.into_graph()))
            }
            None if search.exhaustive => {
                set_error("no valid multiplier table exists for these parameters");
                Err(TfStatus::TfStatusDomainError)
            }
            None => {
                set_error("multiplier search ran out of budget");
                Err(TfStatus::TfStatusBudgetExhausted)
            }
        }
    })
}

/// Bipartite incidence graph of the projective plane of prime order `q`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_projective_plane(q: u64, out: *mut *mut TfGraph) -> TfStatus {
    wrap(|| {
        let b = constructions::projective_plane_incidence(q).map_err(lib_err)?;
        write_out(out, boxed(b.graph().clone()))
    })
}

/// Exact Turán number by pruned exhaustive search. On success writes the
/// value and whether the search was exhaustive within the budget; a
/// non-exhaustive search still reports the best value found but returns
/// `TF_STATUS_BUDGET_EXHAUSTED`.
///
/// # Safety
/// `family` must be a valid C string; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn tf_ex_exact(
    n: u32,
    family: *const c_char,
    budget: u64,
    out_value: *mut u64,
    out_exhaustive: *mut bool,
) -> TfStatus {
    wrap(|| {
        let fam = ForbiddenFamily::parse(cstr(family)?).map_err(lib_err)?;
        let r = turan::ex_exact(n as usize, &fam, budget).map_err(lib_err)?;
        write_out(out_value, r.value as u64)?;
        write_out(out_exhaustive, r.exhaustive)?;
        if r.exhaustive {
            Ok(())
        } else {
            set_error("search budget exhausted; value is a lower bound");
            Err(TfStatus::TfStatusBudgetExhausted)
        }
    })
}

/// Exact Zarankiewicz number for an `m` by `n` bipartite host.
///
/// # Safety
/// `family` must be a valid C string; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn tf_z_exact(
    m: u32,
    n: u32,
    family: *const c_char,
    budget: u64,
    out_value: *mut u64,
    out_exhaustive: *mut bool,
) -> TfStatus {
    wrap(|| {
        let fam = ForbiddenFamily::parse(cstr(family)?).map_err(lib_err)?;
        let r = turan::z_exact(m as usize, n as usize, &fam, budget).map_err(lib_err)?;
        write_out(out_value, r.value as u64)?;
        write_out(out_exhaustive, r.exhaustive)?;
        if r.exhaustive {
            Ok(())
        } else {
            set_error("search budget exhausted; value is a lower bound");
            Err(TfStatus::TfStatusBudgetExhausted)
        }
    })
}

/// The density ratio `(t+1)/sqrt(t(t+2))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_density_ratio(t: u64, out: *mut f64) -> TfStatus {
    wrap(|| {
        let v = constructions::density_ratio(t).map_err(lib_err)?;
        write_out(out, v)
    })
}

/// The 4-cycle supersaturation lower bound for a bipartite graph with part
/// sizes `m`, `n` and `e` edges. `*out_applicable` is false (and the value
/// 0) when the precondition `e(e-n) >= n m (m-1)/2` fails.
///
/// # Safety
/// Out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_c4_lower_bound(
    m: u64,
    n: u64,
    e: u64,
    out_value: *mut f64,
    out_applicable: *mut bool,
) -> TfStatus {
    wrap(|| {
        let v = bounds::c4_lower_bound(m, n, e).map_err(lib_err)?;
        match v {
            Some(x) => {
                write_out(
                    out_value,
                    num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN),
                )?;
                write_out(out_applicable, true)
            }
            None => {
                write_out(out_value, 0.0)?;
                write_out(out_applicable, false)
            }
        }
    })
}

/// Expansion depth and least embeddable odd-cycle length for an
/// `(alpha, beta)`-smooth family, with the exponents passed as exact
/// fractions.
///
/// # Safety
/// Out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_expansion_thresholds(
    alpha_num: i64,
    alpha_den: i64,
    beta_num: i64,
    beta_den: i64,
    out_depth: *mut u64,
    out_min_odd_cycle: *mut u64,
) -> TfStatus {
    wrap(|| {
        if alpha_den == 0 || beta_den == 0 {
            set_error("zero denominator");
            return Err(TfStatus::TfStatusDomainError);
        }
        let params = bounds::SmoothnessParams::new(
            num_rational::Rational64::new(alpha_num, alpha_den),
            num_rational::Rational64::new(beta_num, beta_den),
            0.0,
            1.0,
        )
        .map_err(lib_err)?;
        let th = bounds::expansion_thresholds(&params).map_err(lib_err)?;
        write_out(out_depth, th.depth)?;
        write_out(out_min_odd_cycle, th.min_odd_cycle)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    unsafe fn build_edge_list(n: u32, edges: &[u32]) -> *mut TfGraph {
        let mut out: *mut TfGraph = ptr::null_mut();
        let status = tf_graph_from_edge_list(n, edges.as_ptr(), edges.len() / 2, &mut out);
        assert_eq!(status, TfStatus::TfStatusOk);
        out
    }

    #[test]
    fn edge_list_roundtrip() {
        unsafe {
            let g = build_edge_list(3, &[0, 1, 1, 2, 0, 2]);
            assert_eq!(tf_graph_vertex_count(g), 3);
            assert_eq!(tf_graph_edge_count(g), 3);
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tf_graph_to_graph6(g, &mut s), TfStatus::TfStatusOk);
            assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "Bw");
            tf_string_free(s);
            tf_graph_free(g);
        }
    }

    #[test]
    fn loops_rejected_with_message() {
        unsafe {
            let mut out: *mut TfGraph = ptr::null_mut();
            let edges = [0u32, 0u32];
            let status = tf_graph_from_edge_list(2, edges.as_ptr(), 1, &mut out);
            assert_eq!(status, TfStatus::TfStatusDomainError);
            let msg = CStr::from_ptr(tf_last_error_message()).to_str().unwrap();
            assert!(msg.contains("loop"));
        }
    }

    #[test]
    fn graph6_and_counts() {
        unsafe {
            let c5 = CString::new("DqK").unwrap(); // C_5: 0-1-2-3-4-0
            let mut g: *mut TfGraph = ptr::null_mut();
            // build C_5 from edges instead; decode an encoding we produce
            let h = build_edge_list(5, &[0, 1, 1, 2, 2, 3, 3, 4, 0, 4]);
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(tf_graph_to_graph6(h, &mut s), TfStatus::TfStatusOk);
            assert_eq!(tf_graph_from_graph6(s, &mut g), TfStatus::TfStatusOk);
            assert_eq!(tf_graph_edge_count(g), 5);
            let mut girth = 0i64;
            assert_eq!(tf_girth(g, &mut girth), TfStatus::TfStatusOk);
            assert_eq!(girth, 5);
            let mut og = 0i64;
            assert_eq!(tf_odd_girth(g, &mut og), TfStatus::TfStatusOk);
            assert_eq!(og, 5);
            tf_string_free(s);
            tf_graph_free(g);
            tf_graph_free(h);
            drop(c5);
        }
    }

    #[test]
    fn constructions_and_detection() {
        unsafe {
            let mut g: *mut TfGraph = ptr::null_mut();
            assert_eq!(tf_build_gq(5, &mut g), TfStatus::TfStatusOk);
            assert_eq!(tf_graph_vertex_count(g), 75);
            assert_eq!(tf_graph_edge_count(g), 300);
            let mut tri = 1u64;
            assert_eq!(tf_count_triangles(g, &mut tri), TfStatus::TfStatusOk);
            assert_eq!(tri, 0);
            let fam = CString::new("triangle,k{2,3}").unwrap();
            let mut free = false;
            assert_eq!(
                tf_is_family_free(g, fam.as_ptr(), &mut free),
                TfStatus::TfStatusOk
            );
            assert!(free);
            tf_graph_free(g);

            let mut bad: *mut TfGraph = ptr::null_mut();
            assert_eq!(tf_build_gq(7, &mut bad), TfStatus::TfStatusDomainError);

            let mut pg: *mut TfGraph = ptr::null_mut();
            assert_eq!(tf_projective_plane(2, &mut pg), TfStatus::TfStatusOk);
            assert_eq!(tf_graph_vertex_count(pg), 14);
            let mut girth = 0i64;
            assert_eq!(tf_girth(pg, &mut girth), TfStatus::TfStatusOk);
            assert_eq!(girth, 6);
            tf_graph_free(pg);

            let mut gqt: *mut TfGraph = ptr::null_mut();
            assert_eq!(
                tf_build_gqt(5, 1, 1_000_000, &mut gqt),
                TfStatus::TfStatusOk
            );
            assert_eq!(tf_graph_edge_count(gqt), 300);
            tf_graph_free(gqt);
        }
    }

    #[test]
    fn searches_and_bounds() {
        unsafe {
            let fam = CString::new("c4").unwrap();
            let mut value = 0u64;
            let mut exhaustive = false;
            assert_eq!(
                tf_ex_exact(5, fam.as_ptr(), 1_000_000, &mut value, &mut exhaustive),
                TfStatus::TfStatusOk
            );
            assert_eq!(value, 6);
            assert!(exhaustive);

            let fam = CString::new("k{2,2}").unwrap();
            assert_eq!(
                tf_z_exact(3, 3, fam.as_ptr(), 1_000_000, &mut value, &mut exhaustive),
                TfStatus::TfStatusOk
            );
            assert_eq!(value, 6);

            let mut ratio = 0.0f64;
            assert_eq!(tf_density_ratio(1, &mut ratio), TfStatus::TfStatusOk);
            assert!((ratio - 2.0 / 3.0f64.sqrt()).abs() < 1e-12);

            let mut bound = 0.0f64;
            let mut applicable = false;
            assert_eq!(
                tf_c4_lower_bound(3, 3, 9, &mut bound, &mut applicable),
                TfStatus::TfStatusOk
            );
            assert!(applicable);
            assert!((bound - 9.0).abs() < 1e-12);
            assert_eq!(
                tf_c4_lower_bound(3, 3, 3, &mut bound, &mut applicable),
                TfStatus::TfStatusOk
            );
            assert!(!applicable);

            let (mut depth, mut k0) = (0u64, 0u64);
            assert_eq!(
                tf_expansion_thresholds(3, 2, 1, 1, &mut depth, &mut k0),
                TfStatus::TfStatusOk
            );
            assert_eq!((depth, k0), (2, 9));
        }
    }

    #[test]
    fn null_handling() {
        unsafe {
            assert_eq!(tf_graph_vertex_count(ptr::null()), 0);
            let mut out = 0u64;
            assert_eq!(
                tf_count_triangles(ptr::null(), &mut out),
                TfStatus::TfStatusNullArgument
            );
            tf_graph_free(ptr::null_mut());
            tf_string_free(ptr::null_mut());
        }
    }
}
