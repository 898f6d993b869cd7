//! C ABI for `dmt-core`.
//!
//! Complexes and Morse functions cross the boundary as opaque handles that
//! the caller frees with the matching `*_free` function. Every fallible call
//! returns a [`DmtStatus`]; on failure the message is available from
//! [`dmt_last_error`] on the same thread until the next failing call.
//! Strings returned by the library are freed with [`dmt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use dmt_core::generate::random_instance;
use dmt_core::io::{emit_complex_scx, emit_scx, parse_off, parse_scx, to_dot};
use dmt_core::minmax::{dgcat, mountain_pass};
use dmt_core::{DmtError, Limits, MorseFunction, SimplicialComplex};

/// An immutable simplicial complex.
pub struct DmtComplex(Arc<SimplicialComplex>);

/// A validated discrete Morse function together with its complex.
pub struct DmtMorse(MorseFunction);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not UTF-8, or a buffer was too small.
    InvalidArgument = 2,
    /// The input text could not be parsed.
    Parse = 3,
    /// The input is well formed but not a valid complex or function.
    InvalidInput = 4,
    /// The values break the Morse conditions.
    NotMorse = 5,
    /// The complex is above the exhaustive-search bound.
    TooLarge = 6,
    /// The arguments do not satisfy the operation's preconditions.
    Precondition = 7,
    /// No admissible edge path joins the two minima.
    NoPath = 8,
    /// A checked theorem or property did not hold on this input.
    TheoremViolation = 9,
    /// An internal invariant failed; please report it.
    Internal = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(err: &DmtError) -> DmtStatus {
    use DmtError::*;
    match err {
        Parse { .. } => DmtStatus::Parse,
        EmptyInput | MalformedSimplex { .. } | MissingValue(_) | NonFiniteValue(_) => DmtStatus::InvalidInput,
        MorseConditionViolated(_) => DmtStatus::NotMorse,
        TooLargeForEnumeration { .. } => DmtStatus::TooLarge,
        NoPathExists => DmtStatus::NoPath,
        TheoremViolation(_)
        | ClosureViolated { .. }
        | DeformationViolated(_)
        | ReassemblyFailure(_)
        | PropertyViolation(_)
        | SignatureMismatch(_) => DmtStatus::TheoremViolation,
        AcyclicityBug | ProofFailure(_) | Overflow => DmtStatus::Internal,
        SimplexNotInComplex(_)
        | ChainDimensionMismatch { .. }
        | ComplexMismatch
        | InvalidMatching(_)
        | NotFreeFace { .. }
        | NotCollapsible
        | CriticalValueInWindow(_)
        | PreconditionViolated(_)
        | NotACriticalVertex(_)
        | EmptyFamily
        | NotLocalMinima(_) => DmtStatus::Precondition,
    }
}

/// Runs `body`, turning errors and panics into a status plus last-error text.
fn guard(body: impl FnOnce() -> Result<(), (DmtStatus, String)>) -> DmtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DmtStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {message}"));
            DmtStatus::Internal
        }
    }
}

fn lib_err(err: DmtError) -> (DmtStatus, String) {
    (status_of(&err), format!("{}: {err}", err.kind()))
}

fn null(what: &str) -> (DmtStatus, String) {
    (DmtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Result<&'a str, (DmtStatus, String)> {
    if text.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| (DmtStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (DmtStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (DmtStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(text: String) -> Result<*mut c_char, (DmtStatus, String)> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| (DmtStatus::Internal, "output contains a NUL byte".into()))
}

/// Copies `values` into `buf` (capacity `cap`) and stores the full length in
/// `out_len`. Fails with `InvalidArgument` when `cap` is too small, after
/// storing the needed length.
unsafe fn write_slice<T: Copy>(values: &[T], buf: *mut T, cap: usize, out_len: *mut usize) -> Result<(), (DmtStatus, String)> {
    write_out(out_len, values.len(), "out_len")?;
    if values.len() > cap {
        return Err((
            DmtStatus::InvalidArgument,
            format!("buffer holds {cap} entries, {} needed", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// The message of the last failing call on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dmt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dmt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dmt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `c` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dmt_complex_free(c: *mut DmtComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `m` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dmt_morse_free(m: *mut DmtMorse) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Parses `.scx` text. The complex is always stored in `out_complex`; the
/// function is stored in `out_morse` when the text carries values and null
/// otherwise. `out_morse` may be null when the caller only wants the complex.
///
/// # Safety
/// `text` must be a NUL-terminated string; the out pointers must be valid
/// for writes or null where allowed.
#[no_mangle]
pub unsafe extern "C" fn dmt_parse_scx(
    text: *const c_char,
    out_complex: *mut *mut DmtComplex,
    out_morse: *mut *mut DmtMorse,
) -> DmtStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        if out_complex.is_null() {
            return Err(null("out_complex"));
        }
        let (k, f) = parse_scx(text).map_err(lib_err)?;
        out_complex.write(Box::into_raw(Box::new(DmtComplex(Arc::new(k)))));
        if !out_morse.is_null() {
            out_morse.write(f.map_or(ptr::null_mut(), |f| Box::into_raw(Box::new(DmtMorse(f)))));
        }
        Ok(())
    })
}

/// Parses an OFF mesh into the closure of its faces.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_parse_off(text: *const c_char, out: *mut *mut DmtComplex) -> DmtStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let k = parse_off(text).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(DmtComplex(Arc::new(k)))), "out")
    })
}

/// Number of simplices.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dmt_complex_len(c: *const DmtComplex) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// Dimension, or -1 for a null handle or the empty complex.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dmt_complex_dim(c: *const DmtComplex) -> i64 {
    c.as_ref().and_then(|c| c.0.dim()).map_or(-1, |d| d as i64)
}

/// Euler characteristic.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_complex_euler(c: *const DmtComplex, out: *mut i64) -> DmtStatus {
    guard(|| {
        let c = deref(c, "complex")?;
        write_out(out, c.0.euler_characteristic(), "out")
    })
}

/// Betti numbers over the two-element field, one per dimension.
///
/// # Safety
/// `c` must be a live handle, `buf` valid for `cap` writes (or null when
/// `cap` is 0) and `out_len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_complex_betti(
    c: *const DmtComplex,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> DmtStatus {
    guard(|| {
        let c = deref(c, "complex")?;
        write_slice(&c.0.betti_numbers_mod2(), buf, cap, out_len)
    })
}

/// Discrete geometric category of the whole complex by exhaustive search.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_complex_dgcat(c: *const DmtComplex, out: *mut i64) -> DmtStatus {
    guard(|| {
        let c = deref(c, "complex")?;
        let r = dgcat(&c.0, &c.0, &Limits::default()).map_err(lib_err)?;
        write_out(out, r.dgcat, "out")
    })
}

/// The complex as `.scx` text without values.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_complex_to_scx(c: *const DmtComplex, out: *mut *mut c_char) -> DmtStatus {
    guard(|| {
        let c = deref(c, "complex")?;
        write_out(out, into_c_string(emit_complex_scx(&c.0))?, "out")
    })
}

/// A random Morse function on `c`, deterministic in `seed`.
///
/// # Safety
/// `c` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_morse_random(c: *const DmtComplex, seed: u64, out: *mut *mut DmtMorse) -> DmtStatus {
    guard(|| {
        let c = deref(c, "complex")?;
        let f = MorseFunction::random(Arc::clone(&c.0), seed);
        write_out(out, Box::into_raw(Box::new(DmtMorse(f))), "out")
    })
}

/// A random connected complex on at most `max_vertices` vertices with a
/// random Morse function on it.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_random_instance(
    seed: u64,
    max_vertices: usize,
    max_dim: usize,
    out: *mut *mut DmtMorse,
) -> DmtStatus {
    guard(|| {
        if max_vertices == 0 {
            return Err((DmtStatus::InvalidArgument, "max_vertices must be positive".into()));
        }
        let f = random_instance(seed, max_vertices, max_dim);
        write_out(out, Box::into_raw(Box::new(DmtMorse(f))), "out")
    })
}

/// A new handle to the complex the function lives on.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_morse_complex(m: *const DmtMorse, out: *mut *mut DmtComplex) -> DmtStatus {
    guard(|| {
        let m = deref(m, "morse")?;
        write_out(out, Box::into_raw(Box::new(DmtComplex(m.0.complex_arc()))), "out")
    })
}

/// Number of critical simplices in each dimension `0..=dim`.
///
/// # Safety
/// `m` must be a live handle, `buf` valid for `cap` writes (or null when
/// `cap` is 0) and `out_len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_morse_critical_counts(
    m: *const DmtMorse,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> DmtStatus {
    guard(|| {
        let m = deref(m, "morse")?;
        let top = m.0.complex().dim().unwrap_or(0);
        let mut counts = vec![0usize; top + 1];
        for s in m.0.critical_cells() {
            counts[s.dim()] += 1;
        }
        write_slice(&counts, buf, cap, out_len)
    })
}

/// The mountain-pass value between the critical vertices `min0` (lower) and
/// `min1`, with the vertices of the critical edge carrying it.
///
/// # Safety
/// `m` must be a live handle; `out_value` and `out_edge` (two entries) must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_mountain_pass(
    m: *const DmtMorse,
    min0: usize,
    min1: usize,
    out_value: *mut f64,
    out_edge: *mut usize,
) -> DmtStatus {
    guard(|| {
        let m = deref(m, "morse")?;
        if out_value.is_null() || out_edge.is_null() {
            return Err(null("output"));
        }
        let mp = mountain_pass(&m.0, min1, min0).map_err(lib_err)?;
        out_value.write(mp.value);
        ptr::copy_nonoverlapping(mp.edge.vertices().as_ptr(), out_edge, 2);
        Ok(())
    })
}

/// The function as `.scx` text.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_morse_to_scx(m: *const DmtMorse, out: *mut *mut c_char) -> DmtStatus {
    guard(|| {
        let m = deref(m, "morse")?;
        write_out(out, into_c_string(emit_scx(&m.0))?, "out")
    })
}

/// The Hasse diagram in DOT, with critical cells and gradient pairs marked.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dmt_morse_to_dot(m: *const DmtMorse, out: *mut *mut c_char) -> DmtStatus {
    guard(|| {
        let m = deref(m, "morse")?;
        let dot = to_dot(m.0.complex(), Some(&m.0)).map_err(lib_err)?;
        write_out(out, into_c_string(dot)?, "out")
    })
}
