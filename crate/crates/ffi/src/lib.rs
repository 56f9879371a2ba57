//! C ABI over `qrotor`.
//!
//! Every call returns a [`QrStatus`]; on failure a message for the calling
//! thread is available through [`qr_last_error`]. Datasets and fit results
//! are opaque handles released with their `_free` functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qrotor::fitting::{self, FitResult, LevelDataset};
use qrotor::spectra::{self, ModelKind, ModelParams};
use qrotor::{DeformationParameter, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    UnsupportedRegime = 3,
    Range = 4,
    Data = 5,
    Parse = 6,
    Io = 7,
    InvalidArgument = 8,
    Panic = 9,
}

pub const QR_REGIME_CLASSICAL: i32 = 0;
pub const QR_REGIME_REAL: i32 = 1;
pub const QR_REGIME_PHASE: i32 = 2;

pub const QR_MODEL_I: i32 = 0;
pub const QR_MODEL_I_PRIME: i32 = 1;
pub const QR_MODEL_II: i32 = 2;
pub const QR_MODEL_II_PRIME: i32 = 3;
pub const QR_MODEL_III: i32 = 4;
pub const QR_MODEL_IV: i32 = 5;

/// Opaque level dataset.
pub struct QrDataset(LevelDataset);

/// Opaque fit result.
pub struct QrFit(FitResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> QrStatus {
    match e {
        Error::Domain(_) => QrStatus::Domain,
        Error::UnsupportedRegime(_) => QrStatus::UnsupportedRegime,
        Error::Range(_) => QrStatus::Range,
        Error::Data(_) => QrStatus::Data,
        Error::Parse { .. } => QrStatus::Parse,
        Error::Io { .. } => QrStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), QrStatus>) -> QrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            QrStatus::Panic
        }
    }
}

fn fail(e: Error) -> QrStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn invalid(msg: &str) -> QrStatus {
    set_error(msg);
    QrStatus::InvalidArgument
}

fn null(what: &str) -> QrStatus {
    set_error(format!("{what} is NULL"));
    QrStatus::NullPointer
}

fn model(kind: i32) -> Result<ModelKind, QrStatus> {
    usize::try_from(kind)
        .ok()
        .and_then(|k| ModelKind::ALL.get(k).copied())
        .ok_or_else(|| invalid("unknown model constant"))
}

fn param(regime: i32, tau: f64) -> Result<DeformationParameter, QrStatus> {
    match regime {
        QR_REGIME_CLASSICAL => Ok(DeformationParameter::classical()),
        QR_REGIME_REAL => DeformationParameter::real(tau).map_err(fail),
        QR_REGIME_PHASE => DeformationParameter::phase(tau).map_err(fail),
        _ => Err(invalid("unknown regime constant")),
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn qr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// q-number `[x]` for the given regime.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn qr_q_number(regime: i32, tau: f64, x: f64, out: *mut f64) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = param(regime, tau)?;
        let v = qrotor::qnum::q_number(x, &p).map_err(fail)?;
        *out = v;
        Ok(())
    })
}

/// Energy of level `ell` in `model`. `p0` is A (or a); `p1` is tau, B or b.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn qr_energy(
    model_kind: i32,
    p0: f64,
    p1: f64,
    ell: u32,
    out: *mut f64,
) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = model(model_kind)?;
        let e = spectra::energy(kind, &ModelParams::for_kind(kind, p0, p1), ell).map_err(fail)?;
        *out = e;
        Ok(())
    })
}

/// Dataset from `ell,energy_cm1` CSV text.
///
/// # Safety
/// `csv` must be NULL or a NUL-terminated string; `out` must be NULL or
/// point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_dataset_from_csv(
    csv: *const c_char,
    out: *mut *mut QrDataset,
) -> QrStatus {
    guard(|| {
        if csv.is_null() {
            return Err(null("csv"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(csv)
            .to_str()
            .map_err(|_| invalid("csv is not UTF-8"))?;
        let d = qrotor::data::parse_levels(text, "<ffi>", "v=0").map_err(fail)?;
        *out = Box::into_raw(Box::new(QrDataset(d)));
        Ok(())
    })
}

/// The bundled HF ground-state levels.
///
/// # Safety
/// `out` must be NULL or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_dataset_bundled_hf(out: *mut *mut QrDataset) -> QrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d = qrotor::data::bundled_hf_levels().map_err(fail)?;
        *out = Box::into_raw(Box::new(QrDataset(d)));
        Ok(())
    })
}

/// Number of levels, or 0 for NULL.
///
/// # Safety
/// `data` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_dataset_len(data: *const QrDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.len())
}

/// # Safety
/// `data` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_dataset_free(data: *mut QrDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Least-squares fit of `model_kind` to `data`.
///
/// # Safety
/// `data` must be NULL or a live handle; `out` must be NULL or point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_fit(
    data: *const QrDataset,
    model_kind: i32,
    out: *mut *mut QrFit,
) -> QrStatus {
    guard(|| {
        let Some(d) = data.as_ref() else {
            return Err(null("data"));
        };
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = model(model_kind)?;
        let r = fitting::fit(kind, &d.0).map_err(fail)?;
        *out = Box::into_raw(Box::new(QrFit(r)));
        Ok(())
    })
}

/// Fitted parameters, sigma and convergence flag. Any output pointer may be NULL.
///
/// # Safety
/// `fit` must be NULL or a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_fit_summary(
    fit: *const QrFit,
    p0: *mut f64,
    p1: *mut f64,
    sigma: *mut f64,
    converged: *mut bool,
) -> QrStatus {
    guard(|| {
        let Some(f) = fit.as_ref() else {
            return Err(null("fit"));
        };
        let (a, b) = f.0.params.values();
        if let Some(p) = p0.as_mut() {
            *p = a;
        }
        if let Some(p) = p1.as_mut() {
            *p = b;
        }
        if let Some(p) = sigma.as_mut() {
            *p = f.0.sigma_cm1;
        }
        if let Some(p) = converged.as_mut() {
            *p = f.0.converged;
        }
        Ok(())
    })
}

/// Fit result as a JSON string, released with [`qr_string_free`].
///
/// # Safety
/// `fit` must be NULL or a live handle; `out` must be NULL or point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn qr_fit_to_json(fit: *const QrFit, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let Some(f) = fit.as_ref() else {
            return Err(null("fit"));
        };
        if out.is_null() {
            return Err(null("out"));
        }
        let json = CString::new(f.0.to_json()).map_err(|_| invalid("JSON contains NUL"))?;
        *out = json.into_raw();
        Ok(())
    })
}

/// # Safety
/// `fit` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_fit_free(fit: *mut QrFit) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
