//! C ABI for `melcert`.
//!
//! Families and reports are opaque heap handles owned by the caller and
//! released with their `_free` function. Every fallible call returns a
//! [`MelcertStatus`]; on failure a message is available from
//! [`melcert_last_error_message`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`melcert_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use melcert::certificates::{certify_family_with, CertifyOptions, FamilyCertification};
use melcert::cli::{build_family, ConstructArgs, SDP_DEFAULT_MAX_D};
use melcert::io::{FamilyFileV1, ReportFileV1};
use melcert::{solve_primal, Convention, Error, SolverConfig, UnitarySet};

/// Status codes; the values match the `melcert` CLI exit codes where both exist.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MelcertStatus {
    Ok = 0,
    Failure = 1,
    UnsupportedDimension = 2,
    NotCertified = 3,
    MalformedInput = 4,
    NoConvergence = 5,
    NullPointer = 6,
    Panic = 7,
}

/// How a unitary `U` defines its state: `(I ⊗ U)|ψ₁⟩`, `(I ⊗ U†)|ψ₁⟩`, or
/// both tried with the better result kept.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MelcertConvention {
    U = 0,
    Dagger = 1,
    Both = 2,
}

impl MelcertConvention {
    fn conventions(self) -> Vec<Convention> {
        match self {
            MelcertConvention::U => vec![Convention::U],
            MelcertConvention::Dagger => vec![Convention::Dagger],
            MelcertConvention::Both => Convention::BOTH.to_vec(),
        }
    }
}

/// A validated family of mutually orthogonal unitaries.
pub struct MelcertFamily {
    set: UnitarySet,
}

/// The outcome of certifying a family.
pub struct MelcertReport {
    certification: FamilyCertification,
    file: ReportFileV1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_for(err: &Error) -> MelcertStatus {
    match melcert::cli::exit_code(err) {
        2 => MelcertStatus::UnsupportedDimension,
        4 => MelcertStatus::MalformedInput,
        5 => MelcertStatus::NoConvergence,
        _ => MelcertStatus::Failure,
    }
}

fn fail(err: Error) -> MelcertStatus {
    let status = status_for(&err);
    set_last_error(err.to_string());
    status
}

fn null_pointer(name: &str) -> MelcertStatus {
    set_last_error(format!("{name} is null"));
    MelcertStatus::NullPointer
}

/// Runs `body`, converting panics into [`MelcertStatus::Panic`].
fn guard(body: impl FnOnce() -> MelcertStatus) -> MelcertStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            MelcertStatus::Panic
        }
    }
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> MelcertStatus {
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            MelcertStatus::Ok
        }
        Err(_) => fail(Error::Malformed("string contains an interior NUL".into())),
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, MelcertStatus> {
    if ptr.is_null() {
        return Err(null_pointer(name));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| fail(Error::Malformed(format!("{name} is not UTF-8"))))
}

fn boxed_family(out: *mut *mut MelcertFamily, set: UnitarySet) -> MelcertStatus {
    unsafe { *out = Box::into_raw(Box::new(MelcertFamily { set })) };
    MelcertStatus::Ok
}

/// Last error message recorded on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn melcert_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn melcert_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn melcert_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default family for dimension `d`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_for_dimension(d: usize, out: *mut *mut MelcertFamily) -> MelcertStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        match melcert::construct_for_dimension(d) {
            Ok(set) => boxed_family(out, set),
            Err(e) => fail(e),
        }
    })
}

/// Named family with optional parameters; zero means "not given". `family`
/// is one of `case-even`, `case-4n1`, `case-4n3`, `d7`, `d11`, `4n-tensor`,
/// `pauli`, and may be null to pick the default family for `d`.
///
/// # Safety
/// `family` must be null or a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_build(
    family: *const c_char,
    d: usize,
    n: usize,
    count: usize,
    out: *mut *mut MelcertFamily,
) -> MelcertStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        let family = if family.is_null() {
            None
        } else {
            match read_str(family, "family") {
                Ok(s) => Some(s.to_string()),
                Err(status) => return status,
            }
        };
        let nonzero = |x: usize| (x != 0).then_some(x);
        let args = ConstructArgs { d: nonzero(d), family, n: nonzero(n), count: nonzero(count), out: None };
        match build_family(&args) {
            Ok(set) => boxed_family(out, set),
            Err(e) => fail(e),
        }
    })
}

/// Parses and validates a `melcert-unitaries-v1` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_from_json(json: *const c_char, out: *mut *mut MelcertFamily) -> MelcertStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        let text = match read_str(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match FamilyFileV1::from_json(text).and_then(|f| f.to_set()) {
            Ok(set) => boxed_family(out, set),
            Err(e) => fail(e),
        }
    })
}

/// Serializes a family as a `melcert-unitaries-v1` document.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_to_json(family: *const MelcertFamily, out: *mut *mut c_char) -> MelcertStatus {
    guard(|| {
        if family.is_null() || out.is_null() {
            return null_pointer("family/out");
        }
        match FamilyFileV1::from_set(&(*family).set).to_json() {
            Ok(text) => write_string(out, text),
            Err(e) => fail(e),
        }
    })
}

/// Local dimension `d`, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_dimension(family: *const MelcertFamily) -> usize {
    family.as_ref().map_or(0, |f| f.set.d())
}

/// Number of unitaries, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_len(family: *const MelcertFamily) -> usize {
    family.as_ref().map_or(0, |f| f.set.len())
}

/// Copies unitary `index` into `buffer` as row-major interleaved
/// `re, im` pairs; `len` must be at least `2·d²`.
///
/// # Safety
/// `family` must be a live handle and `buffer` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_unitary(
    family: *const MelcertFamily,
    index: usize,
    buffer: *mut f64,
    len: usize,
) -> MelcertStatus {
    guard(|| {
        let Some(f) = family.as_ref() else { return null_pointer("family") };
        if buffer.is_null() {
            return null_pointer("buffer");
        }
        let Some(u) = f.set.unitaries().get(index) else {
            return fail(Error::CountOutOfRange { requested: index + 1, available: f.set.len() });
        };
        let needed = 2 * u.as_slice().len();
        if len < needed {
            return fail(Error::DimensionMismatch(format!("buffer holds {len} doubles, need {needed}")));
        }
        let out = std::slice::from_raw_parts_mut(buffer, needed);
        for (pair, z) in out.chunks_exact_mut(2).zip(u.as_slice()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        MelcertStatus::Ok
    })
}

/// Releases a family. Null is ignored.
///
/// # Safety
/// `family` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn melcert_family_free(family: *mut MelcertFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Certifies a family. A report is written to `out` both when the family is
/// certified (`Ok`) and when it is not (`NotCertified`).
///
/// # Safety
/// `family` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn melcert_certify(
    family: *const MelcertFamily,
    margin_tol: f64,
    convention: MelcertConvention,
    out: *mut *mut MelcertReport,
) -> MelcertStatus {
    guard(|| {
        let Some(f) = family.as_ref() else { return null_pointer("family") };
        if out.is_null() {
            return null_pointer("out");
        }
        if margin_tol.is_nan() || margin_tol < 0.0 {
            return fail(Error::Malformed(format!("margin tolerance {margin_tol}")));
        }
        let options = CertifyOptions { conventions: convention.conventions(), margin_tol, ..CertifyOptions::default() };
        let certification = match certify_family_with(&f.set, &options) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let file = ReportFileV1::from_certification(&certification, options.kernel_tol);
        let certified = certification.verdict().is_certified();
        *out = Box::into_raw(Box::new(MelcertReport { certification, file }));
        if certified {
            MelcertStatus::Ok
        } else {
            MelcertStatus::NotCertified
        }
    })
}

/// 1 if certified, 0 otherwise (including null).
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn melcert_report_certified(report: *const MelcertReport) -> i32 {
    report.as_ref().map_or(0, |r| i32::from(r.certification.verdict().is_certified()))
}

/// Upper bound on the PPT discrimination probability; NaN for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn melcert_report_bound(report: *const MelcertReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.certification.bound())
}

/// Dimension of the common negative eigenspace for the reported convention.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn melcert_report_intersection_dim(report: *const MelcertReport) -> usize {
    report.as_ref().map_or(0, |r| r.certification.best().intersection_dim)
}

/// Number of margins, one per state.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn melcert_report_margin_count(report: *const MelcertReport) -> usize {
    report.as_ref().map_or(0, |r| r.file.margins.len())
}

/// Copies the margins `λ_min(γ − T_A(ρ_j))` into `buffer`.
///
/// # Safety
/// `report` must be a live handle and `buffer` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn melcert_report_margins(
    report: *const MelcertReport,
    buffer: *mut f64,
    len: usize,
) -> MelcertStatus {
    guard(|| {
        let Some(r) = report.as_ref() else { return null_pointer("report") };
        if buffer.is_null() {
            return null_pointer("buffer");
        }
        let margins = &r.file.margins;
        if len < margins.len() {
            return fail(Error::DimensionMismatch(format!("buffer holds {len}, need {}", margins.len())));
        }
        std::slice::from_raw_parts_mut(buffer, margins.len()).copy_from_slice(margins);
        MelcertStatus::Ok
    })
}

/// Serializes the report as a `melcert-report-v1` document.
///
/// # Safety
/// `report` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn melcert_report_to_json(report: *const MelcertReport, out: *mut *mut c_char) -> MelcertStatus {
    guard(|| {
        let Some(r) = report.as_ref() else { return null_pointer("report") };
        if out.is_null() {
            return null_pointer("out");
        }
        match r.file.to_json() {
            Ok(text) => write_string(out, text),
            Err(e) => fail(e),
        }
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn melcert_report_free(report: *mut MelcertReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Summary of a primal solve.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MelcertSdpSummary {
    pub primal_value: f64,
    /// Largest of the partition, PSD and PPT feasibility residuals.
    pub residual: f64,
    pub iterations: usize,
    pub converged: i32,
}

/// Runs the primal solver. Zero `max_iterations` and non-positive
/// `step_size`/`stop_tolerance` select the defaults for `d`. Families with
/// `d > 8` are rejected unless `allow_large` is non-zero.
///
/// # Safety
/// `family` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn melcert_sdp_solve(
    family: *const MelcertFamily,
    convention: MelcertConvention,
    max_iterations: usize,
    step_size: f64,
    stop_tolerance: f64,
    seed: u64,
    allow_large: i32,
    out: *mut MelcertSdpSummary,
) -> MelcertStatus {
    guard(|| {
        let Some(f) = family.as_ref() else { return null_pointer("family") };
        if out.is_null() {
            return null_pointer("out");
        }
        let d = f.set.d();
        if d > SDP_DEFAULT_MAX_D && allow_large == 0 {
            return fail(Error::UnsupportedDimension {
                d,
                reason: format!("the solver is limited to d <= {SDP_DEFAULT_MAX_D} unless allow_large is set"),
            });
        }
        let convention = match convention {
            MelcertConvention::Dagger => Convention::Dagger,
            MelcertConvention::U => Convention::U,
            MelcertConvention::Both => return fail(Error::Malformed("the solver needs a single convention".into())),
        };
        let mut config = SolverConfig::for_dimension(d);
        if max_iterations > 0 {
            config.max_iterations = max_iterations;
        }
        if step_size > 0.0 {
            config.step_size = step_size;
        }
        if stop_tolerance > 0.0 {
            config.stop_tolerance = stop_tolerance;
        }
        config.seed = seed;
        match solve_primal(&f.set.states(convention), &config) {
            Ok(sol) => {
                *out = MelcertSdpSummary {
                    primal_value: sol.primal_value,
                    residual: sol.residuals.max(),
                    iterations: sol.iterations,
                    converged: i32::from(sol.converged),
                };
                if sol.converged {
                    MelcertStatus::Ok
                } else {
                    set_last_error(format!("no convergence after {} iterations", sol.iterations));
                    MelcertStatus::NoConvergence
                }
            }
            Err(e) => fail(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_match_cli_exit_codes() {
        assert_eq!(MelcertStatus::UnsupportedDimension as i32, melcert::cli::EXIT_UNSUPPORTED);
        assert_eq!(MelcertStatus::NotCertified as i32, melcert::cli::EXIT_NOT_CERTIFIED);
        assert_eq!(MelcertStatus::MalformedInput as i32, melcert::cli::EXIT_MALFORMED);
        assert_eq!(MelcertStatus::NoConvergence as i32, melcert::cli::EXIT_NO_CONVERGENCE);
    }

    #[test]
    fn panics_become_status_codes() {
        assert_eq!(guard(|| panic!("boom")), MelcertStatus::Panic);
        let msg = unsafe { CStr::from_ptr(melcert_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
    }
}
