//! C ABI for mufkit.
//!
//! Objects cross the boundary as opaque heap handles that the caller releases
//! with the matching `*_free` function. Every fallible call returns a
//! [`MufStatus`]; on failure a description is available from
//! [`mufkit_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mufkit::constructions::{mub_prime, real_fiducial_family_d3};
use mufkit::frames::Frame;
use mufkit::linalg::dft_matrix;
use mufkit::muf::certify_muf_system;
use mufkit::sic::{is_fiducial, qubit_fiducial, search_fiducial, SearchConfig};
use mufkit::uncertainty::{clifford_conjugator, uncertainty_certificate, zauner_operator};
use mufkit::{ComplexMatrix, ComplexVector, MufError, Tolerance, C64};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MufStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidDimension = 2,
    DimensionMismatch = 3,
    NotUnit = 4,
    NotAFrame = 5,
    UnsupportedDimension = 6,
    IndexOutOfRange = 7,
    InvalidInput = 8,
    Infeasible = 9,
    ConstructionFailure = 10,
    Panic = 11,
}

/// Opaque complex vector.
pub struct MufVector(ComplexVector);

/// Opaque square complex matrix.
pub struct MufMatrix(ComplexMatrix);

/// Opaque ordered list of frames.
pub struct MufFrames(Vec<Frame>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &MufError) -> MufStatus {
    match e {
        MufError::InvalidDimension(_) | MufError::DimensionTooLarge { .. } => MufStatus::InvalidDimension,
        MufError::DimensionMismatch { .. } => MufStatus::DimensionMismatch,
        MufError::NotUnit { .. } => MufStatus::NotUnit,
        MufError::NotAFrame { .. } | MufError::NotOrthonormal(_) => MufStatus::NotAFrame,
        MufError::UnsupportedDimension { .. } | MufError::Inapplicable(_) => MufStatus::UnsupportedDimension,
        MufError::IndexOutOfRange(_) => MufStatus::IndexOutOfRange,
        MufError::Infeasible { .. } | MufError::NotParameterizable(_) => MufStatus::Infeasible,
        MufError::ConstructionFailure { .. } => MufStatus::ConstructionFailure,
        _ => MufStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), MufError>) -> MufStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MufStatus::Ok,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            MufStatus::Panic
        }
    }
}

fn null() -> MufError {
    MufError::InvalidInput("null pointer argument".into())
}

fn tolerance(eps: f64) -> Result<Tolerance, MufError> {
    if eps == 0.0 {
        Ok(Tolerance::from_env())
    } else {
        Tolerance::new(eps)
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, MufError> {
    p.as_ref().ok_or_else(null)
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), MufError> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) {
    if !out.is_null() {
        *out = value;
    }
}

fn with_null_check(status: MufStatus, any_null: bool) -> MufStatus {
    if any_null {
        set_error("null pointer argument");
        MufStatus::NullPointer
    } else {
        status
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mufkit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mufkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a vector from `dim` real and imaginary parts. `im` may be null.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `dim` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn mufkit_vector_new(
    re: *const f64,
    im: *const f64,
    dim: usize,
    out: *mut *mut MufVector,
) -> MufStatus {
    let status = guard(|| {
        if re.is_null() {
            return Err(null());
        }
        let re = std::slice::from_raw_parts(re, dim);
        let entries = (0..dim)
            .map(|i| C64::new(re[i], if im.is_null() { 0.0 } else { *im.add(i) }))
            .collect();
        store(out, MufVector(ComplexVector::new(entries)?))
    });
    with_null_check(status, re.is_null() || out.is_null())
}

/// # Safety
/// `v` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_vector_dim(v: *const MufVector) -> usize {
    v.as_ref().map_or(0, |v| v.0.dim())
}

/// # Safety
/// `v` must be a live handle; `re` and `im` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_vector_get(v: *const MufVector, index: usize, re: *mut f64, im: *mut f64) -> MufStatus {
    let status = guard(|| {
        let v = deref(v)?;
        if index >= v.0.dim() {
            return Err(MufError::IndexOutOfRange(format!("index {index} >= {}", v.0.dim())));
        }
        let z = v.0.get(index);
        write(re, z.re);
        write(im, z.im);
        Ok(())
    });
    with_null_check(status, v.is_null())
}

/// # Safety
/// `v` must be a handle from this library or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mufkit_vector_free(v: *mut MufVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `m` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_matrix_dim(m: *const MufMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_matrix_get(
    m: *const MufMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> MufStatus {
    let status = guard(|| {
        let m = deref(m)?;
        let d = m.0.dim();
        if row >= d || col >= d {
            return Err(MufError::IndexOutOfRange(format!("({row}, {col}) outside {d}x{d}")));
        }
        let z = m.0.get(row, col);
        write(re, z.re);
        write(im, z.im);
        Ok(())
    });
    with_null_check(status, m.is_null())
}

/// # Safety
/// `m` must be a handle from this library or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mufkit_matrix_free(m: *mut MufMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Unitary DFT matrix `F_{jk} = ω^{jk}/√d`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mufkit_dft_matrix(dim: usize, out: *mut *mut MufMatrix) -> MufStatus {
    with_null_check(guard(|| store(out, MufMatrix(dft_matrix(dim)?))), out.is_null())
}

/// Zauner operator of dimension `dim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mufkit_zauner_operator(dim: usize, out: *mut *mut MufMatrix) -> MufStatus {
    with_null_check(guard(|| store(out, MufMatrix(zauner_operator(dim)?))), out.is_null())
}

/// Unitary `U` with `U (X Z^k) U† = τ^{-k} Z` for prime `dim`. An `eps` of 0
/// selects the default tolerance.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mufkit_clifford_conjugator(dim: usize, k: usize, eps: f64, out: *mut *mut MufMatrix) -> MufStatus {
    let status = guard(|| store(out, MufMatrix(clifford_conjugator(dim, k, tolerance(eps)?)?)));
    with_null_check(status, out.is_null())
}

/// The analytic qubit fiducial.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mufkit_qubit_fiducial(out: *mut *mut MufVector) -> MufStatus {
    with_null_check(guard(|| store(out, MufVector(qubit_fiducial()))), out.is_null())
}

/// Real fiducial of the one-parameter family in dimension 3.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mufkit_d3_real_fiducial(r0: f64, out: *mut *mut MufVector) -> MufStatus {
    with_null_check(guard(|| store(out, MufVector(real_fiducial_family_d3(r0)?))), out.is_null())
}

/// Largest deviation of `|⟨φ|X^j Z^k|φ⟩|²` from `1/(d+1)` and whether it is
/// within `eps` (0 for the default).
///
/// # Safety
/// `v` must be a live handle; output pointers must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_is_fiducial(
    v: *const MufVector,
    eps: f64,
    max_overlap_error: *mut f64,
    is_fiducial_out: *mut bool,
) -> MufStatus {
    let status = guard(|| {
        let r = is_fiducial(&deref(v)?.0, tolerance(eps)?)?;
        write(max_overlap_error, r.max_overlap_error);
        write(is_fiducial_out, r.is_fiducial);
        Ok(())
    });
    with_null_check(status, v.is_null())
}

/// Seeded multi-start search for a fiducial in dimension `dim`.
///
/// # Safety
/// `out` must be writable; `residual` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_search_fiducial(
    dim: usize,
    seed: u64,
    restarts: usize,
    eps: f64,
    out: *mut *mut MufVector,
    residual: *mut f64,
) -> MufStatus {
    let status = guard(|| {
        let mut config = SearchConfig::new(dim, seed);
        config.restarts = restarts;
        config.tolerance = tolerance(eps)?;
        let r = search_fiducial(&config)?;
        write(residual, r.residual);
        store(out, MufVector(r.fiducial))
    });
    with_null_check(status, out.is_null())
}

/// The `d + 1` mutually unbiased bases for prime `dim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mufkit_mub_prime(dim: usize, out: *mut *mut MufFrames) -> MufStatus {
    with_null_check(guard(|| store(out, MufFrames(mub_prime(dim)?))), out.is_null())
}

/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_frames_count(f: *const MufFrames) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// Number of vectors in frame `index`, or 0 when out of range.
///
/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_frames_size(f: *const MufFrames, index: usize) -> usize {
    f.as_ref().and_then(|f| f.0.get(index)).map_or(0, |fr| fr.len())
}

/// Copies vector `vector` of frame `frame` into a new vector handle.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mufkit_frames_vector(
    f: *const MufFrames,
    frame: usize,
    vector: usize,
    out: *mut *mut MufVector,
) -> MufStatus {
    let status = guard(|| {
        let v = deref(f)?
            .0
            .get(frame)
            .and_then(|fr| fr.vectors().get(vector))
            .ok_or_else(|| MufError::IndexOutOfRange(format!("frame {frame} vector {vector}")))?;
        store(out, MufVector(v.clone()))
    });
    with_null_check(status, f.is_null() || out.is_null())
}

/// # Safety
/// `f` must be a handle from this library or null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mufkit_frames_free(f: *mut MufFrames) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Certifies the frames as mutually unbiased; reports the common overlap and
/// the largest deviation from it.
///
/// # Safety
/// `f` must be a live handle; output pointers must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_certify_frames(
    f: *const MufFrames,
    eps: f64,
    overlap: *mut f64,
    max_deviation: *mut f64,
    certified: *mut bool,
) -> MufStatus {
    let status = guard(|| {
        let r = certify_muf_system(&deref(f)?.0, tolerance(eps)?)?;
        write(overlap, r.overlap);
        write(max_deviation, r.max_deviation);
        write(certified, r.certified);
        Ok(())
    });
    with_null_check(status, f.is_null())
}

/// Sum of quadratic Rényi entropies of `v` over `d + 1` bases, with the
/// lower bound `(d+1) log2((d+1)/2)` and whether the bound is attained.
///
/// # Safety
/// Handles must be live; output pointers must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mufkit_entropy_certificate(
    v: *const MufVector,
    bases: *const MufFrames,
    eps: f64,
    entropy_sum: *mut f64,
    bound: *mut f64,
    saturated: *mut bool,
) -> MufStatus {
    let status = guard(|| {
        let r = uncertainty_certificate(&deref(v)?.0, &deref(bases)?.0, tolerance(eps)?)?;
        write(entropy_sum, r.entropy_sum);
        write(bound, r.bound);
        write(saturated, r.saturated);
        Ok(())
    });
    with_null_check(status, v.is_null() || bases.is_null())
}
