//! C interface to `classagg`.
//!
//! Every fallible function returns a [`ClassaggStatus`]. On anything other
//! than `CLASSAGG_STATUS_OK` a message is available from
//! [`classagg_last_error_message`] on the same thread. Strings returned
//! through `out` parameters are owned by the caller and must be released
//! with [`classagg_string_free`]; CAF handles with [`classagg_caf_free`].
//!
//! Categories and objects are zero-based, individuals one-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use classagg::axioms::{check_axioms, check_essential_dictatorship};
use classagg::cli::exit_code;
use classagg::document::{parse_caf, CafDocument, LoadedCaf};
use classagg::model::{count_classifications, Classification};
use classagg::rules::RuleSpec;
use classagg::theorem_lab::{extract_dictator_pivotal, verify_claim, Claim, ClaimOptions};
use classagg::{Axiom, Budget, Error, Params, Profile};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassaggStatus {
    Ok = 0,
    /// A check or verification ran and came out negative.
    Fail = 1,
    BudgetExceeded = 2,
    InvalidInput = 3,
    NullPointer = 4,
    Panic = 5,
}

/// An aggregation function loaded from a document or a named rule.
pub struct ClassaggCaf {
    inner: LoadedCaf,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(error: &Error) -> ClassaggStatus {
    match exit_code(error) {
        1 => ClassaggStatus::Fail,
        2 => ClassaggStatus::BudgetExceeded,
        _ => ClassaggStatus::InvalidInput,
    }
}

struct Failure(ClassaggStatus, String);

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure(status_of(&error), format!("{}: {error}", error.kind()))
    }
}

fn null(what: &str) -> Failure {
    Failure(ClassaggStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(ClassaggStatus::InvalidInput, message.into())
}

/// Runs `body`, recording any error and converting panics.
fn guard(body: impl FnOnce() -> Result<ClassaggStatus, Failure>) -> ClassaggStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {message}"));
            ClassaggStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn caf_ref<'a>(caf: *const ClassaggCaf) -> Result<&'a ClassaggCaf, Failure> {
    caf.as_ref().ok_or_else(|| null("caf"))
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let text = CString::new(text).map_err(|_| invalid("output contains a nul byte"))?;
    *out = text.into_raw();
    Ok(())
}

fn to_json(value: &impl serde::Serialize) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| invalid(e.to_string()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn classagg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn classagg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn classagg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a CAF document. Certified documents are checked within `budget`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_from_json(
    json: *const c_char,
    budget: u64,
    out: *mut *mut ClassaggCaf,
) -> ClassaggStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = parse_caf(text)?.load(Budget(budget))?;
        *out = Box::into_raw(Box::new(ClassaggCaf { inner }));
        Ok(ClassaggStatus::Ok)
    })
}

/// Builds a named rule (`dictator:D`, `essential:D:PERM`, `plurality`,
/// `majority:tie=P`, `plurality-table1`). Pass `n = m = rho = 0` for rules
/// with fixed sizes.
///
/// # Safety
/// `rule` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_from_rule(
    rule: *const c_char,
    n: usize,
    m: usize,
    rho: usize,
    out: *mut *mut ClassaggCaf,
) -> ClassaggStatus {
    guard(|| {
        let name = read_str(rule, "rule")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let rule: RuleSpec = name.parse()?;
        let params = match (n, m, rho, rule.fixed_params()) {
            (0, 0, 0, Some(p)) => p,
            _ => Params::new(n, m, rho)?,
        };
        let inner = CafDocument::Rule { params, rule }.load(Budget::default())?;
        *out = Box::into_raw(Box::new(ClassaggCaf { inner }));
        Ok(ClassaggStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `caf` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_free(caf: *mut ClassaggCaf) {
    if !caf.is_null() {
        drop(Box::from_raw(caf));
    }
}

/// Writes the sizes of `caf`.
///
/// # Safety
/// `caf` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_params(
    caf: *const ClassaggCaf,
    n: *mut usize,
    m: *mut usize,
    rho: *mut usize,
) -> ClassaggStatus {
    guard(|| {
        let params = caf_ref(caf)?.inner.params();
        if n.is_null() || m.is_null() || rho.is_null() {
            return Err(null("size output"));
        }
        *n = params.n();
        *m = params.m();
        *rho = params.rho();
        Ok(ClassaggStatus::Ok)
    })
}

/// Aggregates a profile. `profile` holds `n * m` categories, individual by
/// individual; `out` receives `m` categories.
///
/// # Safety
/// `profile` must point to `profile_len` bytes and `out` to `out_len`.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_evaluate(
    caf: *const ClassaggCaf,
    profile: *const u8,
    profile_len: usize,
    out: *mut u8,
    out_len: usize,
) -> ClassaggStatus {
    guard(|| {
        let caf = caf_ref(caf)?.inner.caf();
        let params = caf.params();
        if profile.is_null() || out.is_null() {
            return Err(null("profile buffer"));
        }
        let (n, m) = (params.n(), params.m());
        if profile_len != n * m || out_len != m {
            return Err(invalid(format!(
                "buffers must hold n*m = {} and m = {m} entries, got {profile_len} and {out_len}",
                n * m
            )));
        }
        let raw = std::slice::from_raw_parts(profile, profile_len);
        let members = raw
            .chunks(m)
            .map(|row| {
                let values: Vec<usize> = row.iter().map(|&c| c as usize).collect();
                Classification::new(&params, &values)
            })
            .collect::<classagg::Result<Vec<_>>>()?;
        let aggregate = caf.evaluate(&Profile::new(&params, members)?);
        let out = std::slice::from_raw_parts_mut(out, out_len);
        for (slot, c) in out.iter_mut().zip(aggregate) {
            *slot = c.index() as u8;
        }
        Ok(ClassaggStatus::Ok)
    })
}

/// Checks one axiom by name. Returns `CLASSAGG_STATUS_OK` if it holds and
/// `CLASSAGG_STATUS_FAIL` if it does not.
///
/// # Safety
/// `caf` must be a live handle; `axiom` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_check_axiom(
    caf: *const ClassaggCaf,
    axiom: *const c_char,
    budget: u64,
) -> ClassaggStatus {
    guard(|| {
        let caf = caf_ref(caf)?.inner.caf();
        let axiom: Axiom = read_str(axiom, "axiom")?.parse()?;
        let report = check_axioms(caf, &[axiom], Budget(budget))?;
        Ok(if report[0].passed {
            ClassaggStatus::Ok
        } else {
            ClassaggStatus::Fail
        })
    })
}

/// JSON array of axiom reports with witnesses. `axioms` is a
/// comma-separated list, or null for all of them.
///
/// # Safety
/// `caf` must be a live handle; `axioms` null or a nul-terminated string;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_check_report_json(
    caf: *const ClassaggCaf,
    axioms: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> ClassaggStatus {
    guard(|| {
        let caf = caf_ref(caf)?.inner.caf();
        let axioms: Vec<Axiom> = if axioms.is_null() {
            Axiom::ALL.to_vec()
        } else {
            read_str(axioms, "axioms")?
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<classagg::Result<_>>()?
        };
        let reports = check_axioms(caf, &axioms, Budget(budget))?;
        write_string(out, to_json(&reports)?)?;
        Ok(ClassaggStatus::Ok)
    })
}

/// Finds `(d, pi)` with `alpha(P) = pi . P_d`. On `CLASSAGG_STATUS_OK` writes the
/// one-based individual and `rho` permutation images; `CLASSAGG_STATUS_FAIL` means
/// there is none.
///
/// # Safety
/// `caf` must be a live handle; `individual` writable; `permutation` must
/// point to `permutation_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_essential_dictator(
    caf: *const ClassaggCaf,
    budget: u64,
    individual: *mut usize,
    permutation: *mut u8,
    permutation_len: usize,
) -> ClassaggStatus {
    guard(|| {
        let caf = caf_ref(caf)?.inner.caf();
        if individual.is_null() || permutation.is_null() {
            return Err(null("dictator output"));
        }
        let rho = caf.params().rho();
        if permutation_len != rho {
            return Err(invalid(format!(
                "permutation buffer must hold rho = {rho} entries"
            )));
        }
        match check_essential_dictatorship(caf, Budget(budget))? {
            Some(found) => {
                *individual = found.individual.number();
                let out = std::slice::from_raw_parts_mut(permutation, rho);
                for (slot, c) in out.iter_mut().zip(found.permutation.images()) {
                    *slot = c.index() as u8;
                }
                Ok(ClassaggStatus::Ok)
            }
            None => {
                *individual = 0;
                Ok(ClassaggStatus::Fail)
            }
        }
    })
}

/// Pivotal-voter extraction report as JSON. Needs per-object tables.
///
/// # Safety
/// `caf` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn classagg_caf_extract_pivotal_json(
    caf: *const ClassaggCaf,
    budget: u64,
    out: *mut *mut c_char,
) -> ClassaggStatus {
    guard(|| {
        let tables = caf_ref(caf)?
            .inner
            .independent()
            .ok_or_else(|| invalid("the CAF is not given as per-object tables"))?;
        let report = extract_dictator_pivotal(&tables, Budget(budget))?;
        write_string(out, to_json(&report)?)?;
        Ok(ClassaggStatus::Ok)
    })
}

/// Verifies a claim (`thm1`, `coro1`, `coro2`, `prop1`, `thm2`) exhaustively
/// and writes the verdict as JSON. `CLASSAGG_STATUS_FAIL` means it does not hold.
///
/// # Safety
/// `claim` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn classagg_verify_claim_json(
    claim: *const c_char,
    n: usize,
    m: usize,
    rho: usize,
    budget: u64,
    prune: bool,
    out: *mut *mut c_char,
) -> ClassaggStatus {
    guard(|| {
        let claim: Claim = read_str(claim, "claim")?.parse()?;
        let params = Params::new(n, m, rho)?;
        let options = ClaimOptions {
            budget,
            prune,
            workers: 0,
        };
        let verdict = verify_claim(claim, &params, options)?;
        write_string(out, to_json(&verdict)?)?;
        Ok(if verdict.holds {
            ClassaggStatus::Ok
        } else {
            ClassaggStatus::Fail
        })
    })
}

/// Number of classifications of `m` objects onto `rho` categories.
/// `CLASSAGG_STATUS_INVALID_INPUT` if it does not fit in 64 bits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn classagg_count_classifications(
    m: usize,
    rho: usize,
    out: *mut u64,
) -> ClassaggStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = Params::new(2, m, rho)?;
        let digits = count_classifications(&params).to_u64_digits();
        *out = match digits.as_slice() {
            [] => 0,
            [d] => *d,
            _ => return Err(invalid("count does not fit in 64 bits")),
        };
        Ok(ClassaggStatus::Ok)
    })
}
