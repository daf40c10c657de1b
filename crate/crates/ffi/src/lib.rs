//! C ABI over `refinv`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` or
//! computing functions and released with the matching `*_free`. Every
//! fallible call returns a [`RefinvStatus`]; on failure a message is kept per
//! thread and can be read with [`refinv_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use refinv::closure::{explore, numeric_verify, ClosureError, ClosureReport};
use refinv::invariants::{z_value, InvariantError};
use refinv::numcore::{NumError, RMatrix};
use refinv::reflection::{
    fundamental_matrix, fundamental_matrix_derivative, y_direct, ReflectionError, ReflectionSystem,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Singular = 4,
    Numerical = 5,
    Unsupported = 6,
    NotClosed = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Dense row-major real matrix.
pub struct RefinvMatrix(RMatrix);

/// System `F u'(t) + G u'(-t) + A u(t) + B u(-t) = 0`.
pub struct RefinvSystem(ReflectionSystem);

/// Result of a closure search.
pub struct RefinvClosureReport(ClosureReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(RefinvStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(RefinvStatus::NullPointer, format!("{what} is null"))
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure(RefinvStatus::InvalidArgument, message.into())
    }
}

fn num_status(e: &NumError) -> RefinvStatus {
    match e {
        NumError::NotSquare { .. } | NumError::DimensionMismatch(_) => {
            RefinvStatus::DimensionMismatch
        }
        NumError::SingularMatrix { .. } => RefinvStatus::Singular,
        NumError::SeriesDiverged { .. } | NumError::NonFiniteState { .. } => {
            RefinvStatus::Numerical
        }
        NumError::Unsupported(_) => RefinvStatus::Unsupported,
        NumError::InvalidArgument(_) => RefinvStatus::InvalidArgument,
    }
}

impl From<NumError> for Failure {
    fn from(e: NumError) -> Self {
        Failure(num_status(&e), e.to_string())
    }
}

impl From<ReflectionError> for Failure {
    fn from(e: ReflectionError) -> Self {
        let status = match &e {
            ReflectionError::DimensionMismatch(_) => RefinvStatus::DimensionMismatch,
            ReflectionError::Num(n) => num_status(n),
            _ => RefinvStatus::Singular,
        };
        Failure(status, e.to_string())
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        let status = match &e {
            InvariantError::DimensionMismatch(_) => RefinvStatus::DimensionMismatch,
            InvariantError::ConditioningWarning { .. } | InvariantError::UnsupportedIndex(_) => {
                RefinvStatus::Unsupported
            }
            InvariantError::SingularMatrix => RefinvStatus::Singular,
            InvariantError::Num(n) => num_status(n),
        };
        Failure(status, e.to_string())
    }
}

impl From<ClosureError> for Failure {
    fn from(e: ClosureError) -> Self {
        let status = match &e {
            ClosureError::NotClosed { .. } => RefinvStatus::NotClosed,
            ClosureError::DimensionMismatch { .. } => RefinvStatus::DimensionMismatch,
            ClosureError::Reflection(r) => Failure::from(r.clone()).0,
            ClosureError::Invariant(i) => Failure::from(i.clone()).0,
            ClosureError::Num(n) => num_status(n),
        };
        Failure(status, e.to_string())
    }
}

/// Runs `body`, records any failure or panic and converts it to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RefinvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            clear_error();
            RefinvStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {message}"));
            RefinvStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null("out"));
    }
    *out = value;
    Ok(())
}

/// Copies `text` and a NUL into `buf` when it fits; `needed` receives the
/// full size including the NUL either way.
unsafe fn copy_text(
    text: &str,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> Result<(), Failure> {
    let size = text.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || len < size {
        return Err(Failure(
            RefinvStatus::BufferTooSmall,
            format!("buffer of {len} bytes, {size} needed"),
        ));
    }
    ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn refinv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`.
///
/// Returns the message size including the NUL, or 0 when there is no error.
/// The copy is truncated to `len - 1` bytes when `buf` is too small.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn refinv_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len() + 1
        }
    })
}

/// Creates a `rows x cols` matrix from `rows * cols` row-major values.
///
/// # Safety
/// `data` must be valid for `rows * cols` reads; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut RefinvMatrix,
) -> RefinvStatus {
    guard(|| {
        if data.is_null() {
            return Err(Failure::null("data"));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Failure::invalid("rows * cols overflows"))?;
        let values = std::slice::from_raw_parts(data, len).to_vec();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Failure::invalid("matrix entries must be finite"));
        }
        store(out, RefinvMatrix(RMatrix::from_vec(rows, cols, values)?))
    })
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn refinv_matrix_free(m: *mut RefinvMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Writes the dimensions of `m`.
///
/// # Safety
/// `m` must be a live matrix handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_matrix_dims(
    m: *const RefinvMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> RefinvStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        write_out(rows, m.0.rows())?;
        write_out(cols, m.0.cols())
    })
}

/// Copies the row-major entries of `m` into `buf` of `len` values.
///
/// # Safety
/// `m` must be a live matrix handle; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn refinv_matrix_copy_data(
    m: *const RefinvMatrix,
    buf: *mut f64,
    len: usize,
) -> RefinvStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        let data = m.0.data();
        if buf.is_null() {
            return Err(Failure::null("buf"));
        }
        if len < data.len() {
            return Err(Failure(
                RefinvStatus::BufferTooSmall,
                format!("buffer of {len} values, {} needed", data.len()),
            ));
        }
        ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
        Ok(())
    })
}

/// Creates a reflection system from its four `n x n` coefficients. The
/// matrices are copied; `F - G` and `F + G` must be invertible.
///
/// # Safety
/// All matrix arguments must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_system_new(
    f: *const RefinvMatrix,
    g: *const RefinvMatrix,
    a: *const RefinvMatrix,
    b: *const RefinvMatrix,
    out: *mut *mut RefinvSystem,
) -> RefinvStatus {
    guard(|| {
        let sys = ReflectionSystem::new(
            deref(f, "F")?.0.clone(),
            deref(g, "G")?.0.clone(),
            deref(a, "A")?.0.clone(),
            deref(b, "B")?.0.clone(),
        )?;
        sys.operators()?;
        store(out, RefinvSystem(sys))
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn refinv_system_free(sys: *mut RefinvSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Writes the dimension `n` of `sys`.
///
/// # Safety
/// `sys` must be a live handle; `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_system_dim(
    sys: *const RefinvSystem,
    n: *mut usize,
) -> RefinvStatus {
    guard(|| write_out(n, deref(sys, "system")?.0.dim()))
}

/// `E = (F - G)^-1 (A - B) (F + G)^-1 (A + B)` as a new matrix.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_system_e(
    sys: *const RefinvSystem,
    out: *mut *mut RefinvMatrix,
) -> RefinvStatus {
    guard(|| {
        let ops = deref(sys, "system")?.0.operators()?;
        store(out, RefinvMatrix(ops.e))
    })
}

/// `M+ = (F + G)^-1 (A + B)` as a new matrix.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_system_m_plus(
    sys: *const RefinvSystem,
    out: *mut *mut RefinvMatrix,
) -> RefinvStatus {
    guard(|| {
        let ops = deref(sys, "system")?.0.operators()?;
        store(out, RefinvMatrix(ops.m_plus))
    })
}

/// Fundamental matrix `X(t)` with `X(0) = I`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_fundamental_matrix(
    sys: *const RefinvSystem,
    t: f64,
    out: *mut *mut RefinvMatrix,
) -> RefinvStatus {
    guard(|| {
        let x = fundamental_matrix(&deref(sys, "system")?.0, t)?;
        store(out, RefinvMatrix(x))
    })
}

/// Derivative `X'(t)` of the fundamental matrix.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_fundamental_derivative(
    sys: *const RefinvSystem,
    t: f64,
    out: *mut *mut RefinvMatrix,
) -> RefinvStatus {
    guard(|| {
        let dx = fundamental_matrix_derivative(&deref(sys, "system")?.0, t)?;
        store(out, RefinvMatrix(dx))
    })
}

/// `Y(t) = X(t)^-1 X'(t)`, which solves `Y' = E - Y^2`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_riccati_y(
    sys: *const RefinvSystem,
    t: f64,
    out: *mut *mut RefinvMatrix,
) -> RefinvStatus {
    guard(|| {
        let y = y_direct(&deref(sys, "system")?.0, t)?;
        store(out, RefinvMatrix(y))
    })
}

/// Crossed invariant `Z_{m_1..m_N}(X_1..X_N)`: the coefficient of
/// `a_1^m_1 .. a_N^m_N` in `det(I + sum a_i X_i)`.
///
/// # Safety
/// `ms` and `xs` must be valid for `count` reads and every `xs[i]` a live
/// matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_z_value(
    ms: *const i64,
    xs: *const *const RefinvMatrix,
    count: usize,
    out: *mut f64,
) -> RefinvStatus {
    guard(|| {
        if count == 0 {
            return Err(Failure::invalid("at least one matrix is required"));
        }
        if ms.is_null() {
            return Err(Failure::null("ms"));
        }
        if xs.is_null() {
            return Err(Failure::null("xs"));
        }
        let ms = std::slice::from_raw_parts(ms, count);
        let mut mats = Vec::with_capacity(count);
        for (i, &p) in std::slice::from_raw_parts(xs, count).iter().enumerate() {
            mats.push(deref(p, &format!("xs[{i}]"))?.0.clone());
        }
        write_out(out, z_value(ms, &mats)?)
    })
}

/// Closure search over second derivatives of determinant invariants of an
/// `n x n` fundamental matrix, up to `max_depth` rounds.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_closure_explore(
    n: usize,
    max_depth: usize,
    out: *mut *mut RefinvClosureReport,
) -> RefinvStatus {
    guard(|| {
        if n == 0 {
            return Err(Failure::invalid("n must be positive"));
        }
        store(out, RefinvClosureReport(explore(n, max_depth)))
    })
}

/// Releases a closure report. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn refinv_closure_free(report: *mut RefinvClosureReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Writes whether the search closed and how many states it holds.
///
/// # Safety
/// `report` must be a live handle; `closed` and `states` must be writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_closure_summary(
    report: *const RefinvClosureReport,
    closed: *mut bool,
    states: *mut usize,
) -> RefinvStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        write_out(closed, r.closed)?;
        write_out(states, r.states.len())
    })
}

/// Copies the report as JSON into `buf`. `needed` (optional) receives the
/// size including the NUL; a short buffer gives `BUFFER_TOO_SMALL`.
///
/// # Safety
/// `report` must be a live handle; `buf` must be null or valid for `len`
/// bytes; `needed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_closure_to_json(
    report: *const RefinvClosureReport,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> RefinvStatus {
    guard(|| {
        let json = deref(report, "report")?.0.to_json().to_string();
        copy_text(&json, buf, len, needed)
    })
}

/// Largest deviation of the closed transition system from second
/// differences of the states along `sys`, over `count` times.
///
/// # Safety
/// `report` and `sys` must be live handles; `ts` valid for `count` reads;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn refinv_closure_verify(
    report: *const RefinvClosureReport,
    sys: *const RefinvSystem,
    ts: *const f64,
    count: usize,
    h: f64,
    out: *mut f64,
) -> RefinvStatus {
    guard(|| {
        let r = &deref(report, "report")?.0;
        let s = &deref(sys, "system")?.0;
        if ts.is_null() {
            return Err(Failure::null("ts"));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::invalid("h must be positive"));
        }
        let grid = std::slice::from_raw_parts(ts, count);
        write_out(out, numeric_verify(r, s, grid, h)?)
    })
}
