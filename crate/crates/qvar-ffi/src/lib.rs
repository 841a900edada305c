//! C surface over the core library: opaque instance handles, status codes,
//! and JSON strings for everything structured.
//!
//! Conventions:
//! - Every function returns a `QvarStatus`; output parameters are written
//!   only on `Ok`.
//! - Strings returned through `char **` are owned by the caller and must be
//!   released with `qvar_string_free`.
//! - `qvar_last_error` returns a thread-local message for the most recent
//!   non-`Ok` status on this thread; the pointer is valid until the next
//!   failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use qvar::error::QvarError;
use qvar::instance::{
    catalog_instance, parse_certificate, parse_instance, serialize_certificate,
    serialize_instance, verify_file, CertificateFile, CertificatePayload, Instance,
};
use qvar::oracle::CheckResult;
use qvar::order::lower_section;
use qvar::principles::{
    arutyunov_minimize, caristi_fixed_point, ekeland_point, ekeland_scaled, oettli_thera,
    takahashi_minimize, Bivariate, CaristiVariant, SetValuedMap,
};
use qvar::rational::parse_rat;
use qvar::space::validate_f_quasi_gauge;
use qvar::topology::separation_class;

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QvarStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    HypothesisViolated = 3,
    VerificationFailed = 4,
    InternalError = 5,
}

/// Opaque instance handle.
pub struct QvarInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|c| *c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn fail(e: QvarError) -> QvarStatus {
    set_error(&e.to_string());
    match e {
        QvarError::Parse(_) => QvarStatus::ParseError,
        QvarError::InvalidArgument(_)
        | QvarError::Dimension(_)
        | QvarError::UnknownCatalog(_) => QvarStatus::InvalidArgument,
        QvarError::Hypothesis(_) | QvarError::NotApplicable(_) => QvarStatus::HypothesisViolated,
        QvarError::Verification(_) => QvarStatus::VerificationFailed,
        QvarError::Arithmetic(_) | QvarError::Io(_) => QvarStatus::InternalError,
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn required_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, QvarStatus> {
    if s.is_null() {
        set_error(&format!("{what} must not be null"));
        return Err(QvarStatus::InvalidArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        QvarStatus::InvalidArgument
    })
}

fn emit_string(text: String, out: *mut *mut c_char) -> QvarStatus {
    if out.is_null() {
        set_error("output pointer must not be null");
        return QvarStatus::InvalidArgument;
    }
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            QvarStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            QvarStatus::InternalError
        }
    }
}

fn emit_instance(inst: Instance, out: *mut *mut QvarInstance) -> QvarStatus {
    if out.is_null() {
        set_error("output pointer must not be null");
        return QvarStatus::InvalidArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(QvarInstance { inner: inst })) };
    QvarStatus::Ok
}

/// Message for the most recent failure on this thread; empty if none.
#[no_mangle]
pub extern "C" fn qvar_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned through a `char **`
/// output of this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn qvar_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance file (JSON text) into a handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qvar_instance_parse(
    json: *const c_char,
    out: *mut *mut QvarInstance,
) -> QvarStatus {
    let text = match required_str(json, "json") {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_instance(text) {
        Ok(inst) => emit_instance(inst, out),
        Err(e) => fail(e),
    }
}

/// Loads a built-in instance by registry name.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qvar_instance_from_catalog(
    name: *const c_char,
    out: *mut *mut QvarInstance,
) -> QvarStatus {
    let name = match required_str(name, "name") {
        Ok(t) => t,
        Err(s) => return s,
    };
    match catalog_instance(name) {
        Ok(inst) => emit_instance(inst, out),
        Err(e) => fail(e),
    }
}

/// Releases an instance handle.
///
/// # Safety
/// `inst` must be null or a handle from this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn qvar_instance_free(inst: *mut QvarInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle from this library.
unsafe fn deref_instance<'a>(inst: *const QvarInstance) -> Result<&'a Instance, QvarStatus> {
    if inst.is_null() {
        set_error("instance handle must not be null");
        return Err(QvarStatus::InvalidArgument);
    }
    Ok(&(*inst).inner)
}

/// Serializes the instance back to its canonical file form.
///
/// # Safety
/// `inst` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qvar_instance_to_json(
    inst: *const QvarInstance,
    out: *mut *mut c_char,
) -> QvarStatus {
    let i = match deref_instance(inst) {
        Ok(i) => i,
        Err(s) => return s,
    };
    emit_string(serialize_instance(i), out)
}

/// Writes the separation class label (`T1`, `T0`, or `not-T0`).
///
/// # Safety
/// `inst` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qvar_separation_class(
    inst: *const QvarInstance,
    out: *mut *mut c_char,
) -> QvarStatus {
    let i = match deref_instance(inst) {
        Ok(i) => i,
        Err(s) => return s,
    };
    let finite = match i.as_finite() {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    match separation_class(&finite.gauge) {
        Ok(sep) => emit_string(sep.label().to_string(), out),
        Err(e) => fail(e),
    }
}

/// Checks the gauge axioms; writes the violation count.
///
/// # Safety
/// `inst` must be a live handle; `violations_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qvar_validate(
    inst: *const QvarInstance,
    violations_out: *mut usize,
) -> QvarStatus {
    let i = match deref_instance(inst) {
        Ok(i) => i,
        Err(s) => return s,
    };
    if violations_out.is_null() {
        set_error("violations_out must not be null");
        return QvarStatus::InvalidArgument;
    }
    let finite = match i.as_finite() {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    match validate_f_quasi_gauge(&finite.gauge, finite.n()) {
        Ok(violations) => {
            *violations_out = violations.len();
            QvarStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn solve_inner(
    inst: &Instance,
    principle: &str,
    objective: &str,
    start: Option<&str>,
    option: Option<&str>,
) -> Result<String, QvarError> {
    let f = inst.as_finite()?;
    let phi = f.objective(objective)?;
    let x0 = match start {
        Some(name) => f.point_index(name)?,
        None => phi
            .values
            .iter()
            .position(|v| v.is_finite())
            .expect("objective is proper"),
    };
    let payload = match principle {
        "ekeland" => CertificatePayload::Ekeland(ekeland_point(&phi, &f.gauge, x0)?),
        "scaled-ekeland" => {
            CertificatePayload::ScaledEkeland(ekeland_scaled(&phi, &f.gauge, x0, None)?)
        }
        "takahashi" => CertificatePayload::Takahashi(takahashi_minimize(&phi, &f.gauge)?),
        "caristi" => {
            let variant = match option {
                Some("strong") => CaristiVariant::Strong,
                _ => CaristiVariant::Weak,
            };
            let images = (0..f.n())
                .map(|x| lower_section(&phi, &f.gauge, x))
                .collect::<Result<Vec<_>, _>>()?;
            let map = SetValuedMap { images };
            let cert = caristi_fixed_point(&map, &phi, &f.gauge, variant)?;
            CertificatePayload::Caristi { cert, map }
        }
        "arutyunov" => {
            let gamma = parse_rat(option.ok_or_else(|| {
                QvarError::InvalidArgument("arutyunov needs the discount factor option".into())
            })?)?;
            CertificatePayload::Arutyunov(arutyunov_minimize(&phi, &f.gauge, &gamma, x0)?)
        }
        "oettli-thera" => {
            let bi = Bivariate::from_objective_difference(&phi)?;
            CertificatePayload::OettliThera {
                cert: oettli_thera(&bi, &f.gauge, x0)?,
                bivariate: format!("diff:{objective}"),
            }
        }
        other => {
            return Err(QvarError::InvalidArgument(format!(
                "unknown principle {other:?}"
            )))
        }
    };
    let file = CertificateFile {
        instance: inst.clone(),
        objective: Some(objective.to_string()),
        payload,
    };
    match verify_file(&file)? {
        CheckResult::Pass => Ok(serialize_certificate(&file)),
        CheckResult::Fail(msg) => Err(QvarError::Verification(msg)),
    }
}

/// Runs a solver and writes a self-contained, already re-verified
/// certificate file. `principle` is one of `ekeland`, `scaled-ekeland`,
/// `takahashi`, `caristi`, `arutyunov`, `oettli-thera`. `start` may be null
/// for the default start point. `option` carries the principle-specific
/// extra: the discount factor `p/q` for `arutyunov`, `weak`/`strong` for
/// `caristi`; null otherwise.
///
/// # Safety
/// `inst` must be a live handle; strings valid or null as documented; `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qvar_solve(
    inst: *const QvarInstance,
    principle: *const c_char,
    objective: *const c_char,
    start: *const c_char,
    option: *const c_char,
    out: *mut *mut c_char,
) -> QvarStatus {
    let i = match deref_instance(inst) {
        Ok(i) => i,
        Err(s) => return s,
    };
    let principle = match required_str(principle, "principle") {
        Ok(t) => t,
        Err(s) => return s,
    };
    let objective = match required_str(objective, "objective") {
        Ok(t) => t,
        Err(s) => return s,
    };
    let start = if start.is_null() {
        None
    } else {
        match required_str(start, "start") {
            Ok(t) => Some(t),
            Err(s) => return s,
        }
    };
    let option = if option.is_null() {
        None
    } else {
        match required_str(option, "option") {
            Ok(t) => Some(t),
            Err(s) => return s,
        }
    };
    match solve_inner(i, principle, objective, start, option) {
        Ok(text) => emit_string(text, out),
        Err(e) => fail(e),
    }
}

/// Re-checks a certificate file produced by `qvar_solve` (or the CLI).
/// Returns `Ok` when it verifies and `VerificationFailed` with a message in
/// `qvar_last_error` when it does not.
///
/// # Safety
/// `cert_json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qvar_verify(cert_json: *const c_char) -> QvarStatus {
    let text = match required_str(cert_json, "cert_json") {
        Ok(t) => t,
        Err(s) => return s,
    };
    let file = match parse_certificate(text) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    match verify_file(&file) {
        Ok(CheckResult::Pass) => QvarStatus::Ok,
        Ok(CheckResult::Fail(msg)) => {
            set_error(&msg);
            QvarStatus::VerificationFailed
        }
        Err(e) => fail(e),
    }
}
