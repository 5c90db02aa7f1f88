//! C ABI for the beamspace library.
//!
//! Beam vectors and families are opaque handles created and destroyed by
//! this library; every fallible call returns a [`BsStatus`] and leaves a
//! human-readable diagnostic retrievable with [`bs_last_error_message`].
//! All functions are safe to call from any thread; the diagnostic is
//! thread-local.

use std::cell::RefCell;
use std::ffi::CStr;
use std::os::raw::c_char;
use std::path::Path;

use beamspace::{
    autocorrelation, beampattern, canonicalize, enumerate_family, io, same_beampattern,
    select_subset, spheroidal_mother, ArrayGeometry, BeamVector, DesignSpec, EnumerateOptions,
    Error, Family, UniformityMetric,
};
use num_complex::Complex64;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments failed validation (geometry, lengths, ranges, subset size).
    InvalidArgument = 2,
    /// The first or last weight is (near) zero, so the beam polynomial drops
    /// degree and the root space is not defined.
    DegenerateInput = 3,
    /// An iterative solve failed: no feasible minimax design, ambiguous
    /// dominant subspace, or eigeniteration stall.
    SolverFailure = 4,
    /// The request exceeds a hard cap (family enumeration width, polynomial
    /// degree).
    TooLarge = 5,
    /// A file could not be parsed.
    ParseError = 6,
    /// A file could not be read or written.
    IoError = 7,
}

/// Opaque beamforming weight vector handle.
pub struct BsBeamVector {
    inner: BeamVector,
}

/// Opaque pattern-equivalent family handle.
pub struct BsFamily {
    inner: Family,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(error: &Error) -> BsStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = error.to_string());
    match error {
        Error::DegenerateEndpoints { .. } => BsStatus::DegenerateInput,
        Error::SolverFailure { .. }
        | Error::AmbiguousDesign { .. }
        | Error::EigenNoConvergence { .. } => BsStatus::SolverFailure,
        Error::FamilyTooLarge { .. } | Error::DegreeTooHigh { .. } => BsStatus::TooLarge,
        Error::Parse { .. } => BsStatus::ParseError,
        Error::Io(_) => BsStatus::IoError,
        _ => BsStatus::InvalidArgument,
    }
}

fn fail_null(what: &str) -> BsStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = format!("null argument: {what}"));
    BsStatus::NullArgument
}

fn ok() -> BsStatus {
    LAST_ERROR.with(|slot| slot.borrow_mut().clear());
    BsStatus::Ok
}

/// Copies the calling thread's last diagnostic into `buffer` (NUL
/// terminated, truncated to `capacity` bytes) and returns the full message
/// length in bytes, excluding the terminator. A null or empty buffer only
/// queries the length.
///
/// # Safety
/// `buffer` must be null or valid for `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn bs_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buffer.cast::<u8>(), n);
            *buffer.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn path_from(ptr: *const c_char) -> Result<&'static Path, BsStatus> {
    if ptr.is_null() {
        return Err(fail_null("path"));
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = "path is not valid UTF-8".to_string());
            Err(BsStatus::InvalidArgument)
        }
    }
}

unsafe fn emit_vector(out: *mut *mut BsBeamVector, vector: BeamVector) -> BsStatus {
    *out = Box::into_raw(Box::new(BsBeamVector { inner: vector }));
    ok()
}

/// Creates a beam vector for `elements` array elements at `spacing`
/// wavelengths from split real/imaginary weight arrays.
///
/// # Safety
/// `re` and `im` must point to `elements` readable doubles; `out` must be a
/// valid destination for the handle. Free with [`bs_beam_vector_free`].
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_new(
    elements: usize,
    spacing: f64,
    re: *const f64,
    im: *const f64,
    out: *mut *mut BsBeamVector,
) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    if re.is_null() || im.is_null() {
        return fail_null("re/im");
    }
    let geometry = match ArrayGeometry::new(elements, spacing) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };
    let weights = (0..elements)
        .map(|i| Complex64::new(*re.add(i), *im.add(i)))
        .collect();
    match BeamVector::new(geometry, weights) {
        Ok(v) => emit_vector(out, v),
        Err(e) => fail(&e),
    }
}

/// Releases a beam vector handle; null is a no-op.
///
/// # Safety
/// `vector` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_free(vector: *mut BsBeamVector) {
    if !vector.is_null() {
        drop(Box::from_raw(vector));
    }
}

/// Number of array elements, or 0 for a null handle.
///
/// # Safety
/// `vector` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_elements(vector: *const BsBeamVector) -> usize {
    vector.as_ref().map_or(0, |v| v.inner.len())
}

/// Element spacing in wavelengths, or 0 for a null handle.
///
/// # Safety
/// `vector` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_spacing(vector: *const BsBeamVector) -> f64 {
    vector
        .as_ref()
        .map_or(0.0, |v| v.inner.geometry().spacing())
}

/// Copies the complex weights into split `re`/`im` arrays of length
/// [`bs_beam_vector_elements`].
///
/// # Safety
/// `vector` must be a valid handle; `re` and `im` must be writable for that
/// many doubles.
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_weights(
    vector: *const BsBeamVector,
    re: *mut f64,
    im: *mut f64,
) -> BsStatus {
    let Some(v) = vector.as_ref() else {
        return fail_null("vector");
    };
    if re.is_null() || im.is_null() {
        return fail_null("re/im");
    }
    for (i, w) in v.inner.weights().iter().enumerate() {
        *re.add(i) = w.re;
        *im.add(i) = w.im;
    }
    ok()
}

/// Reads a beam vector from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_read(
    path: *const c_char,
    out: *mut *mut BsBeamVector,
) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match io::read_beam_vector(path) {
        Ok(v) => emit_vector(out, v),
        Err(e) => fail(&e),
    }
}

/// Writes a beam vector to a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `vector` a valid handle.
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_write(
    path: *const c_char,
    vector: *const BsBeamVector,
) -> BsStatus {
    let Some(v) = vector.as_ref() else {
        return fail_null("vector");
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match io::write_beam_vector(path, &v.inner) {
        Ok(()) => ok(),
        Err(e) => fail(&e),
    }
}

/// Returns the canonical-phase form of a vector as a new handle.
///
/// # Safety
/// `vector` must be a valid handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_beam_vector_canonicalize(
    vector: *const BsBeamVector,
    out: *mut *mut BsBeamVector,
) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    let Some(v) = vector.as_ref() else {
        return fail_null("vector");
    };
    emit_vector(out, canonicalize(&v.inner))
}

/// Copies the autocorrelation lags `r_0 .. r_{M-1}` into split arrays of
/// length [`bs_beam_vector_elements`].
///
/// # Safety
/// `vector` must be a valid handle; `re` and `im` writable for M doubles.
#[no_mangle]
pub unsafe extern "C" fn bs_autocorrelation(
    vector: *const BsBeamVector,
    re: *mut f64,
    im: *mut f64,
) -> BsStatus {
    let Some(v) = vector.as_ref() else {
        return fail_null("vector");
    };
    if re.is_null() || im.is_null() {
        return fail_null("re/im");
    }
    for (i, lag) in autocorrelation(&v.inner).lags().iter().enumerate() {
        *re.add(i) = lag.re;
        *im.add(i) = lag.im;
    }
    ok()
}

/// Evaluates the beampattern at `count` angles (degrees) into `powers`.
///
/// # Safety
/// `vector` must be a valid handle; `angles_deg` readable and `powers`
/// writable for `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn bs_beampattern(
    vector: *const BsBeamVector,
    angles_deg: *const f64,
    count: usize,
    powers: *mut f64,
) -> BsStatus {
    let Some(v) = vector.as_ref() else {
        return fail_null("vector");
    };
    if angles_deg.is_null() || powers.is_null() {
        return fail_null("angles_deg/powers");
    }
    let angles = std::slice::from_raw_parts(angles_deg, count);
    match beampattern(&v.inner, angles) {
        Ok(values) => {
            std::ptr::copy_nonoverlapping(values.as_ptr(), powers, count);
            ok()
        }
        Err(e) => fail(&e),
    }
}

/// Tests whether two vectors generate the same beampattern within a relative
/// tolerance on autocorrelation lags.
///
/// # Safety
/// `a` and `b` must be valid handles; `same` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_same_beampattern(
    a: *const BsBeamVector,
    b: *const BsBeamVector,
    rel_tol: f64,
    same: *mut bool,
) -> BsStatus {
    let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
        return fail_null("a/b");
    };
    if same.is_null() {
        return fail_null("same");
    }
    match same_beampattern(&a.inner, &b.inner, rel_tol) {
        Ok(result) => {
            *same = result;
            ok()
        }
        Err(e) => fail(&e),
    }
}

/// Designs the dominant-subspace sector mother vector for a uniform linear
/// array: `elements` at `spacing` wavelengths, sector
/// `[sector_lo_deg, sector_hi_deg]`, squared norm `total_power`.
///
/// # Safety
/// `out` must be a valid destination for the handle.
#[no_mangle]
pub unsafe extern "C" fn bs_spheroidal_design(
    elements: usize,
    spacing: f64,
    sector_lo_deg: f64,
    sector_hi_deg: f64,
    total_power: f64,
    out: *mut *mut BsBeamVector,
) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    let design = ArrayGeometry::new(elements, spacing)
        .and_then(|g| DesignSpec::for_sector(g, sector_lo_deg, sector_hi_deg, total_power))
        .and_then(|spec| spheroidal_mother(&spec));
    match design {
        Ok(v) => emit_vector(out, v),
        Err(e) => fail(&e),
    }
}

/// Enumerates the pattern-equivalent family of `mother`. `sample = 0` sweeps
/// all `2^(M-1)` flip masks; a positive `sample` draws that many masks
/// seeded by `seed` (required beyond 24 elements).
///
/// # Safety
/// `mother` must be a valid handle; `out` a valid destination. Free with
/// [`bs_family_free`].
#[no_mangle]
pub unsafe extern "C" fn bs_enumerate(
    mother: *const BsBeamVector,
    sample: usize,
    seed: u64,
    out: *mut *mut BsFamily,
) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    let Some(m) = mother.as_ref() else {
        return fail_null("mother");
    };
    let options = EnumerateOptions {
        sample: (sample > 0).then_some(sample),
        seed,
    };
    match enumerate_family(&m.inner, &options) {
        Ok(family) => {
            *out = Box::into_raw(Box::new(BsFamily { inner: family }));
            ok()
        }
        Err(e) => fail(&e),
    }
}

/// Releases a family handle; null is a no-op.
///
/// # Safety
/// `family` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bs_family_free(family: *mut BsFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Number of distinct members, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn bs_family_count(family: *const BsFamily) -> usize {
    family.as_ref().map_or(0, |f| f.inner.distinct_count())
}

/// Returns the mother vector as a new handle.
///
/// # Safety
/// `family` must be a valid handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_family_mother(
    family: *const BsFamily,
    out: *mut *mut BsBeamVector,
) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    let Some(f) = family.as_ref() else {
        return fail_null("family");
    };
    emit_vector(out, f.inner.mother().clone())
}

/// Returns member `index` as a new handle.
///
/// # Safety
/// `family` must be a valid handle; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_family_member(
    family: *const BsFamily,
    index: usize,
    out: *mut *mut BsBeamVector,
) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    let Some(f) = family.as_ref() else {
        return fail_null("family");
    };
    match f.inner.members().get(index) {
        Some(member) => emit_vector(out, member.vector.clone()),
        None => {
            LAST_ERROR.with(|slot| {
                *slot.borrow_mut() = format!(
                    "member index {index} out of range ({} members)",
                    f.inner.distinct_count()
                )
            });
            BsStatus::InvalidArgument
        }
    }
}

/// Stores member `index`'s flip mask (bit `i` = root `i` flipped) in `bits`.
///
/// # Safety
/// `family` must be a valid handle; `bits` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_family_member_mask(
    family: *const BsFamily,
    index: usize,
    bits: *mut u64,
) -> BsStatus {
    let Some(f) = family.as_ref() else {
        return fail_null("family");
    };
    if bits.is_null() {
        return fail_null("bits");
    }
    match f.inner.members().get(index) {
        Some(member) => {
            *bits = member.mask.bits();
            ok()
        }
        None => {
            LAST_ERROR.with(|slot| {
                *slot.borrow_mut() = format!(
                    "member index {index} out of range ({} members)",
                    f.inner.distinct_count()
                )
            });
            BsStatus::InvalidArgument
        }
    }
}

/// Reads a family from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_family_read(path: *const c_char, out: *mut *mut BsFamily) -> BsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    *out = std::ptr::null_mut();
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match io::read_family(path) {
        Ok(family) => {
            *out = Box::into_raw(Box::new(BsFamily { inner: family }));
            ok()
        }
        Err(e) => fail(&e),
    }
}

/// Writes a family to a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `family` a valid handle.
#[no_mangle]
pub unsafe extern "C" fn bs_family_write(
    path: *const c_char,
    family: *const BsFamily,
) -> BsStatus {
    let Some(f) = family.as_ref() else {
        return fail_null("family");
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match io::write_family(path, &f.inner) {
        Ok(()) => ok(),
        Err(e) => fail(&e),
    }
}

/// Selects the `k`-member subset with the most uniform per-element transmit
/// power after scaling the set to `total_power`. Writes the chosen member
/// indices to `indices` (length `k`) and the worst-element deviation from
/// the uniform target to `uniformity`. `use_variance_metric` switches the
/// search score from worst-element deviation to variance; `budget = 0`
/// applies the default exhaustive-search cap.
///
/// # Safety
/// `family` must be a valid handle; `indices` writable for `k` values;
/// `uniformity` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn bs_select_subset(
    family: *const BsFamily,
    k: usize,
    total_power: f64,
    use_variance_metric: bool,
    budget: u64,
    indices: *mut usize,
    uniformity: *mut f64,
) -> BsStatus {
    let Some(f) = family.as_ref() else {
        return fail_null("family");
    };
    if indices.is_null() || uniformity.is_null() {
        return fail_null("indices/uniformity");
    }
    let metric = if use_variance_metric {
        UniformityMetric::Variance
    } else {
        UniformityMetric::MaxDeviation
    };
    let budget = if budget == 0 {
        beamspace::tolerances::SELECT_BUDGET_DEFAULT
    } else {
        budget
    };
    match select_subset(&f.inner, k, total_power, metric, budget) {
        Ok(selection) => {
            for (i, &index) in selection.indices().iter().enumerate() {
                *indices.add(i) = index;
            }
            *uniformity = selection.profile().uniformity();
            ok()
        }
        Err(e) => fail(&e),
    }
}
