//! C interface to `kg-core`.
//!
//! Every function returns a [`KgStatus`]; results go through out-pointers.
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. After a failure `kg_last_error_message`
//! describes it; the string belongs to the library and stays valid until
//! the next call on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kg_core::bounds::{self, PerturbationSpec};
use kg_core::models::{self, HarmonicParams, SquareWellParams};
use kg_core::operator::{self, ModelSpec};
use kg_core::spectral::{self, SignType, SpectrumReport};
use kg_core::{Error, SymmetricMatrix};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    NotPositiveDefinite = 5,
    ContractionNotLessThanOne = 6,
    NonRealSpectrum = 7,
    Solver = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

impl From<&Error> for KgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotPositiveDefinite { .. } => KgStatus::NotPositiveDefinite,
            Error::ContractionNotLessThanOne(_) => KgStatus::ContractionNotLessThanOne,
            Error::NonRealSpectrum => KgStatus::NonRealSpectrum,
            Error::Parse { .. } => KgStatus::Parse,
            Error::Validation(_) | Error::DimensionMismatch(_) => KgStatus::Validation,
            Error::InvalidArgument(_)
            | Error::AlphaOutOfRange(_)
            | Error::KappaOutOfRange(_)
            | Error::KappaMinusNotAboveMinusOne(_) => KgStatus::InvalidArgument,
            Error::Io { .. } => KgStatus::Io,
            _ => KgStatus::Solver,
        }
    }
}

/// Sign of `(Jx, x)` for each eigenvector, as returned by
/// `kg_spectrum_sign_types`. Non-real eigenvalues are neutral.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KgSignType {
    Negative = -1,
    Neutral = 0,
    Positive = 1,
}

/// A model `(U², V)`.
pub struct KgModel(ModelSpec);

/// Eigenvalues of `H` at one shift, sorted by real part.
pub struct KgSpectrum(SpectrumReport);

/// Relative constants for one perturbation `δV`. A constant that does not
/// apply to the perturbation is reported as NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct KgBounds {
    pub contraction: f64,
    pub c: f64,
    pub gap_alpha: f64,
    pub kappa_general: f64,
    pub kappa_split: f64,
    pub kappa_sum: f64,
    pub kappa_relative: f64,
    pub kappa_disjoint: f64,
    pub kappa_signed_minus: f64,
    pub kappa_signed_plus: f64,
    pub kappa_block_minus: f64,
    pub kappa_block_plus: f64,
    pub kappa_exact_minus: f64,
    pub kappa_exact_plus: f64,
}

/// True deviations of a perturbed spectrum.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct KgVerification {
    pub max_relative_deviation: f64,
    /// 1 when every applicable bound and inclusion holds.
    pub all_hold: i32,
    /// 1 when the perturbed spectrum is not real.
    pub perturbed_complex: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn guard(f: impl FnOnce() -> Result<(), KgStatus>) -> KgStatus {
    set_last_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KgStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic".into());
            KgStatus::Panic
        }
    }
}

fn fail(e: Error) -> KgStatus {
    let status = KgStatus::from(&e);
    set_last_error(e.to_string());
    status
}

fn null(name: &str) -> KgStatus {
    set_last_error(format!("{name} is null"));
    KgStatus::NullPointer
}

unsafe fn model_ref<'a>(model: *const KgModel) -> Result<&'a ModelSpec, KgStatus> {
    // SAFETY: caller passes a handle from `kg_model_*` or null.
    unsafe { model.as_ref() }.map(|m| &m.0).ok_or_else(|| null("model"))
}

unsafe fn spectrum_ref<'a>(spectrum: *const KgSpectrum) -> Result<&'a SpectrumReport, KgStatus> {
    // SAFETY: caller passes a handle from `kg_spectrum_compute` or null.
    unsafe { spectrum.as_ref() }.map(|s| &s.0).ok_or_else(|| null("spectrum"))
}

unsafe fn square_matrix(data: *const f64, n: usize, name: &str) -> Result<SymmetricMatrix, KgStatus> {
    if data.is_null() {
        return Err(null(name));
    }
    let len = n.checked_mul(n).ok_or(KgStatus::InvalidArgument)?;
    // SAFETY: caller guarantees `data` points to n*n doubles.
    let entries = unsafe { std::slice::from_raw_parts(data, len) };
    let rows: Vec<Vec<f64>> = entries.chunks(n).map(<[f64]>::to_vec).collect();
    SymmetricMatrix::from_rows(&rows).map_err(fail)
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), KgStatus> {
    if out.is_null() {
        return Err(null(name));
    }
    // SAFETY: checked non-null; caller provides writable storage.
    unsafe { out.write(value) };
    Ok(())
}

/// Boxes `handle` into `*out`; nothing is allocated when `out` is null.
unsafe fn write_handle<H>(out: *mut *mut H, handle: H) -> Result<(), KgStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    // SAFETY: checked non-null; caller provides writable storage.
    unsafe { out.write(Box::into_raw(Box::new(handle))) };
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, empty after a success.
#[no_mangle]
pub extern "C" fn kg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Model from row-major `n×n` arrays `u_squared` (positive definite) and `v`.
#[no_mangle]
pub unsafe extern "C" fn kg_model_new(
    n: usize,
    u_squared: *const f64,
    v: *const f64,
    out: *mut *mut KgModel,
) -> KgStatus {
    guard(|| {
        if n == 0 {
            set_last_error("order must be positive".into());
            return Err(KgStatus::InvalidArgument);
        }
        // SAFETY: forwarded caller contract.
        let u2 = unsafe { square_matrix(u_squared, n, "u_squared") }?;
        // SAFETY: forwarded caller contract.
        let v = unsafe { square_matrix(v, n, "v") }?;
        let spec = ModelSpec::new(u2, v, "").map_err(fail)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_handle(out, KgModel(spec)) }
    })
}

/// `U² = [[2, -1], [-1, 2]]`, `V = τ·diag(-1, 0)`.
#[no_mangle]
pub unsafe extern "C" fn kg_model_square_well(tau: f64, out: *mut *mut KgModel) -> KgStatus {
    guard(|| {
        let spec = models::square_well_model(&SquareWellParams::new(tau)).map_err(fail)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_handle(out, KgModel(spec)) }
    })
}

/// Finite-difference oscillator `U² = -d²/dx² + x² + β`, `V = αx` on
/// `grid_points` interior points of `(-half_width, half_width)`.
#[no_mangle]
pub unsafe extern "C" fn kg_model_harmonic(
    alpha: f64,
    beta: f64,
    grid_points: usize,
    half_width: f64,
    out: *mut *mut KgModel,
) -> KgStatus {
    guard(|| {
        let p = HarmonicParams {
            alpha,
            beta,
            grid_points,
            half_width,
        };
        let spec = models::harmonic_model(&p).map_err(fail)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_handle(out, KgModel(spec)) }
    })
}

/// Model from a JSON file.
#[no_mangle]
pub unsafe extern "C" fn kg_model_load(path: *const c_char, out: *mut *mut KgModel) -> KgStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        // SAFETY: caller passes a NUL-terminated string.
        let path = unsafe { CStr::from_ptr(path) }.to_str().map_err(|_| {
            set_last_error("path is not UTF-8".into());
            KgStatus::InvalidArgument
        })?;
        let spec = models::load_model(path).map_err(fail)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_handle(out, KgModel(spec)) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kg_model_free(model: *mut KgModel) {
    if !model.is_null() {
        // SAFETY: handle came from `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(model) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn kg_model_order(model: *const KgModel, out: *mut usize) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let spec = unsafe { model_ref(model) }?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, spec.order(), "out") }
    })
}

/// `b = ‖(V - μ)U^{-1}‖`.
#[no_mangle]
pub unsafe extern "C" fn kg_contraction(model: *const KgModel, shift: f64, out: *mut f64) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let spec = unsafe { model_ref(model) }?;
        let b = operator::contraction_bound(spec, shift).map_err(fail)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, b, "out") }
    })
}

/// Shift minimizing the contraction, and the minimum.
#[no_mangle]
pub unsafe extern "C" fn kg_optimize_shift(
    model: *const KgModel,
    shift_out: *mut f64,
    contraction_out: *mut f64,
) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let spec = unsafe { model_ref(model) }?;
        let (mu, b) = operator::optimize_shift(spec).map_err(fail)?;
        // SAFETY: forwarded caller contract.
        unsafe {
            write_out(shift_out, mu, "shift_out")?;
            write_out(contraction_out, b, "contraction_out")
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kg_spectrum_compute(
    model: *const KgModel,
    shift: f64,
    out: *mut *mut KgSpectrum,
) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let spec = unsafe { model_ref(model) }?;
        let system = operator::assemble_system(spec, shift).map_err(fail)?;
        let report = spectral::eigen_spectrum(&system).map_err(fail)?;
        // SAFETY: forwarded caller contract.
        unsafe { write_handle(out, KgSpectrum(report)) }
    })
}

#[no_mangle]
pub unsafe extern "C" fn kg_spectrum_free(spectrum: *mut KgSpectrum) {
    if !spectrum.is_null() {
        // SAFETY: handle came from `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// Number of eigenvalues, `2n`.
#[no_mangle]
pub unsafe extern "C" fn kg_spectrum_len(spectrum: *const KgSpectrum, out: *mut usize) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let report = unsafe { spectrum_ref(spectrum) }?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, report.len(), "out") }
    })
}

/// 1 when every eigenvalue is real, 0 otherwise.
#[no_mangle]
pub unsafe extern "C" fn kg_spectrum_is_real(spectrum: *const KgSpectrum, out: *mut i32) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let report = unsafe { spectrum_ref(spectrum) }?;
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, i32::from(report.is_real_spectrum), "out") }
    })
}

/// Copies real and imaginary parts into arrays of `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn kg_spectrum_eigenvalues(
    spectrum: *const KgSpectrum,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let report = unsafe { spectrum_ref(spectrum) }?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        if capacity < report.len() {
            set_last_error(format!("need {} entries, got {capacity}", report.len()));
            return Err(KgStatus::BufferTooSmall);
        }
        for (k, z) in report.eigenvalues.iter().enumerate() {
            // SAFETY: k < len <= capacity.
            unsafe {
                re.add(k).write(z.re);
                im.add(k).write(z.im);
            }
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn kg_spectrum_sign_types(
    spectrum: *const KgSpectrum,
    out: *mut KgSignType,
    capacity: usize,
) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let report = unsafe { spectrum_ref(spectrum) }?;
        if out.is_null() {
            return Err(null("out"));
        }
        if capacity < report.len() {
            set_last_error(format!("need {} entries, got {capacity}", report.len()));
            return Err(KgStatus::BufferTooSmall);
        }
        for (k, t) in report.sign_types.iter().enumerate() {
            let t = match t {
                SignType::Positive => KgSignType::Positive,
                SignType::Negative => KgSignType::Negative,
                SignType::Neutral => KgSignType::Neutral,
            };
            // SAFETY: k < len <= capacity.
            unsafe { out.add(k).write(t) };
        }
        Ok(())
    })
}

/// Every relative constant for the row-major `n×n` perturbation `delta_v`.
#[no_mangle]
pub unsafe extern "C" fn kg_bounds(
    model: *const KgModel,
    delta_v: *const f64,
    shift: f64,
    out: *mut KgBounds,
) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let spec = unsafe { model_ref(model) }?;
        // SAFETY: forwarded caller contract.
        let dv = unsafe { square_matrix(delta_v, spec.order(), "delta_v") }?;
        let system = operator::assemble_system(spec, shift).map_err(fail)?;
        let pert = PerturbationSpec::new(&system, dv).map_err(fail)?;
        let k = bounds::perturbation_constants(&system, &pert).map_err(fail)?;
        let (signed_minus, signed_plus) = k.kappa_signed.map_or((f64::NAN, f64::NAN), |p| (p.minus, p.plus));
        let result = KgBounds {
            contraction: k.b,
            c: k.c,
            gap_alpha: bounds::gap_bound(&system).map_err(fail)?,
            kappa_general: k.kappa_general.value,
            kappa_split: k.kappa_split.value,
            kappa_sum: k.kappa_sum.value,
            kappa_relative: k.kappa_relative.map_or(f64::NAN, |x| x.value),
            kappa_disjoint: k.kappa_disjoint.map_or(f64::NAN, |x| x.value),
            kappa_signed_minus: signed_minus,
            kappa_signed_plus: signed_plus,
            kappa_block_minus: k.kappa_block.minus,
            kappa_block_plus: k.kappa_block.plus,
            kappa_exact_minus: k.kappa_exact.minus,
            kappa_exact_plus: k.kappa_exact.plus,
        };
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, result, "out") }
    })
}

/// Spectra of the model and of `V + δV`, compared at `shift`.
#[no_mangle]
pub unsafe extern "C" fn kg_verify(
    model: *const KgModel,
    delta_v: *const f64,
    shift: f64,
    out: *mut KgVerification,
) -> KgStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let spec = unsafe { model_ref(model) }?;
        // SAFETY: forwarded caller contract.
        let dv = unsafe { square_matrix(delta_v, spec.order(), "delta_v") }?;
        let r = bounds::verify_bounds(spec, &dv, shift).map_err(fail)?;
        let result = KgVerification {
            max_relative_deviation: r.max_relative_deviation,
            all_hold: i32::from(r.all_applicable_hold()),
            perturbed_complex: i32::from(r.real_parts_only),
        };
        // SAFETY: forwarded caller contract.
        unsafe { write_out(out, result, "out") }
    })
}
