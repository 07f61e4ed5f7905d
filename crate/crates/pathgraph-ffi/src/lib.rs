//! C ABI over the pathgraph library.
//!
//! The API hands out an opaque [`PgGraph`] handle holding either
//! representation. Every function returns a [`PgStatus`] code; output
//! values go through out-pointers. Path indices are the caller's
//! original 1-based input order, exactly as in the instance file.
//!
//! The committed header `include/pathgraph.h` mirrors these
//! declarations; `cbindgen --config cbindgen.toml` regenerates it.
//!
//! # Safety
//!
//! Pointers passed in must be valid for the call: handles must come
//! from this library and not have been freed, strings must be
//! NUL-terminated, and buffers must cover the advertised capacity. All
//! entry points catch panics and turn them into
//! [`PgStatus::InternalError`] rather than unwinding across the
//! boundary.

use pathgraph::blob::{self, LoadedGraph};
use pathgraph::instance::InstanceFile;
use pathgraph::treeprep::{prepare, PathSet};
use pathgraph::{Error, LevelStructure, SuccinctPathGraph};
use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    IoError = 4,
    BlobError = 5,
    IndexOutOfRange = 6,
    InvalidMode = 7,
    BufferTooSmall = 8,
    InternalError = 9,
}

/// Which representation a handle holds (or should be built).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgMode {
    Succinct = 0,
    Level = 1,
}

/// Opaque graph handle.
pub struct PgGraph {
    inner: LoadedGraph,
}

fn status_of(err: &Error) -> PgStatus {
    match err {
        Error::Parse { .. }
        | Error::InvalidTree(_)
        | Error::EndpointOutOfRange(..)
        | Error::Invalid(_) => PgStatus::ParseError,
        Error::Blob(_) => PgStatus::BlobError,
        Error::Io(_) => PgStatus::IoError,
    }
}

fn guard(f: impl FnOnce() -> PgStatus) -> PgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => PgStatus::InternalError,
    }
}

/// # Safety
/// `ptr` must be a valid NUL-terminated string.
unsafe fn path_arg<'a>(ptr: *const c_char) -> Result<&'a Path, PgStatus> {
    if ptr.is_null() {
        return Err(PgStatus::NullArgument);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => Err(PgStatus::InvalidUtf8),
    }
}

unsafe fn graph_arg<'a>(g: *const PgGraph) -> Result<&'a PgGraph, PgStatus> {
    g.as_ref().ok_or(PgStatus::NullArgument)
}

fn emit(out: *mut *mut PgGraph, graph: LoadedGraph) -> PgStatus {
    let boxed = Box::new(PgGraph { inner: graph });
    unsafe { *out = Box::into_raw(boxed) };
    PgStatus::Ok
}

/// Builds a representation from a text instance file. `mode` takes a
/// [`PgMode`] value; anything else yields `InvalidMode` (the parameter
/// is deliberately a plain integer so garbage from C stays defined).
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid
/// pointer; on `Ok` the handle must eventually go to [`pg_free`].
#[no_mangle]
pub unsafe extern "C" fn pg_build_from_file(
    path: *const c_char,
    mode: u32,
    out: *mut *mut PgGraph,
) -> PgStatus {
    if out.is_null() {
        return PgStatus::NullArgument;
    }
    let mode = match mode {
        0 => PgMode::Succinct,
        1 => PgMode::Level,
        _ => return PgStatus::InvalidMode,
    };
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(code) => return code,
    };
    guard(|| {
        let file = match InstanceFile::read(path) {
            Ok(f) => f,
            Err(e) => return status_of(&e),
        };
        let built = prepare(&file.tree).and_then(|pt| {
            let ps = PathSet::from_original(&pt, &file.paths)?;
            Ok(match mode {
                PgMode::Succinct => LoadedGraph::Succinct(SuccinctPathGraph::build(pt, &ps)?),
                PgMode::Level => LoadedGraph::Level(LevelStructure::build(pt, &ps)?),
            })
        });
        match built {
            Ok(g) => emit(out, g),
            Err(e) => status_of(&e),
        }
    })
}

/// Loads a serialized representation; the blob tag picks the kind.
///
/// # Safety
/// As [`pg_build_from_file`].
#[no_mangle]
pub unsafe extern "C" fn pg_load_file(path: *const c_char, out: *mut *mut PgGraph) -> PgStatus {
    if out.is_null() {
        return PgStatus::NullArgument;
    }
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(code) => return code,
    };
    guard(|| {
        let bytes = match std::fs::read(path) {
            Ok(b) => b,
            Err(_) => return PgStatus::IoError,
        };
        match blob::load_any(&bytes) {
            Ok(g) => emit(out, g),
            Err(e) => status_of(&e),
        }
    })
}

/// Serializes the handle to a file.
///
/// # Safety
/// `g` must be a live handle, `path` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pg_save_file(g: *const PgGraph, path: *const c_char) -> PgStatus {
    let graph = match graph_arg(g) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(code) => return code,
    };
    guard(|| {
        let bytes = match &graph.inner {
            LoadedGraph::Succinct(s) => blob::save_succinct(s),
            LoadedGraph::Level(l) => blob::save_level(l),
        };
        match std::fs::write(path, bytes) {
            Ok(()) => PgStatus::Ok,
            Err(_) => PgStatus::IoError,
        }
    })
}

/// Number of paths (graph vertices).
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_vertex_count(g: *const PgGraph, out: *mut u32) -> PgStatus {
    let graph = match graph_arg(g) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if out.is_null() {
        return PgStatus::NullArgument;
    }
    *out = graph.inner.path_count();
    PgStatus::Ok
}

/// Which representation the handle holds.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_kind(g: *const PgGraph, out: *mut PgMode) -> PgStatus {
    let graph = match graph_arg(g) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if out.is_null() {
        return PgStatus::NullArgument;
    }
    *out = match graph.inner {
        LoadedGraph::Succinct(_) => PgMode::Succinct,
        LoadedGraph::Level(_) => PgMode::Level,
    };
    PgStatus::Ok
}

fn check_index(graph: &PgGraph, i: u32) -> Result<(), PgStatus> {
    if i >= 1 && i <= graph.inner.path_count() {
        Ok(())
    } else {
        Err(PgStatus::IndexOutOfRange)
    }
}

/// True in `*out` iff vertices `i` and `j` (1-based input indices) are
/// adjacent; a vertex is adjacent to itself.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_adjacent(
    g: *const PgGraph,
    i: u32,
    j: u32,
    out: *mut bool,
) -> PgStatus {
    let graph = match graph_arg(g) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if out.is_null() {
        return PgStatus::NullArgument;
    }
    if let Err(code) = check_index(graph, i).and_then(|_| check_index(graph, j)) {
        return code;
    }
    guard(|| {
        *out = graph.inner.adjacent_input(i, j);
        PgStatus::Ok
    })
}

/// Degree of vertex `i` in `*out`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_degree(g: *const PgGraph, i: u32, out: *mut u64) -> PgStatus {
    let graph = match graph_arg(g) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if out.is_null() {
        return PgStatus::NullArgument;
    }
    if let Err(code) = check_index(graph, i) {
        return code;
    }
    guard(|| {
        *out = graph.inner.degree_input(i);
        PgStatus::Ok
    })
}

/// Writes the ascending neighbour list of `i` into `buf` and its length
/// into `*len`. With a null `buf` only the length is reported; with a
/// too-small capacity the length is set and `BufferTooSmall` returned.
///
/// # Safety
/// `g` must be a live handle, `len` a valid pointer and `buf` valid for
/// `cap` entries when non-null.
#[no_mangle]
pub unsafe extern "C" fn pg_neighbourhood(
    g: *const PgGraph,
    i: u32,
    buf: *mut u32,
    cap: usize,
    len: *mut usize,
) -> PgStatus {
    let graph = match graph_arg(g) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if len.is_null() {
        return PgStatus::NullArgument;
    }
    if let Err(code) = check_index(graph, i) {
        return code;
    }
    guard(|| {
        let nbr = graph.inner.neighbours_input(i);
        *len = nbr.len();
        if buf.is_null() {
            return PgStatus::Ok;
        }
        if cap < nbr.len() {
            return PgStatus::BufferTooSmall;
        }
        std::ptr::copy_nonoverlapping(nbr.as_ptr(), buf, nbr.len());
        PgStatus::Ok
    })
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pg_free(g: *mut PgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}
