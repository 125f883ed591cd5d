//! C ABI for the gme toolkit.
//!
//! Conventions:
//!
//! * Every fallible call returns a [`GmeStatus`]; `GME_STATUS_OK` is zero.
//! * On failure a human-readable message is stored per thread and can be
//!   read with [`gme_last_error`]; the pointer stays valid until the next
//!   failing call on the same thread.
//! * Handles (`GmeState`, `GmeSignal`) are opaque; free them with their
//!   dedicated `_free` functions. Strings returned through `char**` out
//!   parameters are owned by the caller and must be released with
//!   [`gme_string_free`].
//! * All functions catch panics at the boundary and convert them to
//!   `GME_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gme::harness::run_all;
use gme::invariant::{parse_family, renyi_entropy};
use gme::signal::{expand_grouped, reduce_pure, render_expansion, AnySignal};
use gme::state::{catalog_state, PureState};
use gme::partition::PartySet;
use gme::Error;

/// Result code of every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmeStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument was structurally valid but semantically rejected.
    InvalidArgument = 3,
    /// Text input could not be parsed.
    ParseError = 4,
    /// Operand shapes or party counts do not line up.
    DimensionMismatch = 5,
    /// A state vector was not normalized.
    NotNormalized = 6,
    /// A numerical guarantee failed (for example a non-positive contraction
    /// under a logarithm).
    NumericalError = 7,
    /// An evaluation would exceed the configured term budget.
    BudgetExceeded = 8,
    /// An exact integer computation overflowed.
    Overflow = 9,
    /// File or stream input/output failed.
    IoError = 10,
    /// The library panicked; the process state is still sound but the call
    /// did nothing.
    Panic = 11,
}

/// Opaque handle to a dense multi-party pure state.
pub struct GmeState {
    inner: PureState,
}

/// Opaque handle to an evaluable signal (either a partition-coefficient
/// vector over a seed family or a zero-sum-tensor contraction).
pub struct GmeSignal {
    inner: AnySignal,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).unwrap_or_default());
    });
}

fn status_for(error: &Error) -> GmeStatus {
    match error {
        Error::InvalidArgument(_) => GmeStatus::InvalidArgument,
        Error::Parse(_) => GmeStatus::ParseError,
        Error::DimensionMismatch(_) => GmeStatus::DimensionMismatch,
        Error::NotNormalized { .. } => GmeStatus::NotNormalized,
        Error::Numerical(_) => GmeStatus::NumericalError,
        Error::BudgetExceeded { .. } => GmeStatus::BudgetExceeded,
        Error::Overflow(_) => GmeStatus::Overflow,
        Error::Io(_) => GmeStatus::IoError,
        Error::Json(_) => GmeStatus::ParseError,
    }
}

fn fail(error: Error) -> GmeStatus {
    let status = status_for(&error);
    set_last_error(error.to_string());
    status
}

fn fail_with(status: GmeStatus, message: &str) -> GmeStatus {
    set_last_error(message.to_string());
    status
}

/// Run `body` with panics converted to `GME_STATUS_PANIC`.
fn guarded(body: impl FnOnce() -> Result<(), GmeStatus>) -> GmeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GmeStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".to_string());
            fail_with(GmeStatus::Panic, &message)
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, GmeStatus> {
    if ptr.is_null() {
        return Err(fail_with(
            GmeStatus::NullArgument,
            &format!("argument '{name}' is null"),
        ));
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        fail_with(
            GmeStatus::InvalidUtf8,
            &format!("argument '{name}' is not valid UTF-8"),
        )
    })
}

fn out_arg<T>(ptr: *mut T, name: &str) -> Result<*mut T, GmeStatus> {
    if ptr.is_null() {
        Err(fail_with(
            GmeStatus::NullArgument,
            &format!("out parameter '{name}' is null"),
        ))
    } else {
        Ok(ptr)
    }
}

/// # Safety
/// `ptr` must be null or a live handle created by this library.
unsafe fn handle_arg<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, GmeStatus> {
    if ptr.is_null() {
        Err(fail_with(
            GmeStatus::NullArgument,
            &format!("handle '{name}' is null"),
        ))
    } else {
        Ok(unsafe { &*ptr })
    }
}

fn give_string(text: String, out: *mut *mut c_char) -> Result<(), GmeStatus> {
    let c = CString::new(text.replace('\0', " ")).unwrap_or_default();
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Version of the library, as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn gme_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread, or null if none has
/// occurred. Valid until the next failing call on the same thread; do not
/// free.
#[no_mangle]
pub extern "C" fn gme_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Release a string previously handed out through a `char**` out parameter.
///
/// # Safety
/// `text` must be null or a pointer obtained from this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn gme_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Parse a state from its JSON form (party labels, local dimensions, and a
/// dense amplitude list).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_state_from_json(
    text: *const c_char,
    out: *mut *mut GmeState,
) -> GmeStatus {
    guarded(|| {
        let text = unsafe { str_arg(text, "text") }?;
        let out = out_arg(out, "out")?;
        let inner = PureState::from_json_str(text).map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(GmeState { inner })) };
        Ok(())
    })
}

/// Construct a named catalog state with the requested party count and local
/// dimension (some names constrain these; see the library documentation).
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_state_catalog(
    name: *const c_char,
    party_count: usize,
    local_dim: usize,
    out: *mut *mut GmeState,
) -> GmeStatus {
    guarded(|| {
        let name = unsafe { str_arg(name, "name") }?;
        let out = out_arg(out, "out")?;
        let inner = catalog_state(name, party_count, local_dim).map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(GmeState { inner })) };
        Ok(())
    })
}

/// Serialize a state to its JSON form. The returned string is owned by the
/// caller; free it with [`gme_string_free`].
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_state_to_json(
    state: *const GmeState,
    out: *mut *mut c_char,
) -> GmeStatus {
    guarded(|| {
        let state = unsafe { handle_arg(state, "state") }?;
        let out = out_arg(out, "out")?;
        give_string(state.inner.to_json_string(), out)
    })
}

/// Number of parties of a state.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_state_party_count(
    state: *const GmeState,
    out: *mut usize,
) -> GmeStatus {
    guarded(|| {
        let state = unsafe { handle_arg(state, "state") }?;
        let out = out_arg(out, "out")?;
        unsafe { *out = state.inner.q() };
        Ok(())
    })
}

/// Release a state handle.
///
/// # Safety
/// `state` must be null or a live handle created by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn gme_state_free(state: *mut GmeState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Entropy of the reduced state on the parties selected by `subset_mask`
/// (bit `a` set keeps party `a`): order 1 gives the von Neumann entropy,
/// order `n >= 2` the order-`n` Rényi entropy.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_renyi_entropy(
    state: *const GmeState,
    subset_mask: u32,
    order: u32,
    out: *mut f64,
) -> GmeStatus {
    guarded(|| {
        let state = unsafe { handle_arg(state, "state") }?;
        let out = out_arg(out, "out")?;
        let value = renyi_entropy(&state.inner, subset_mask, order).map_err(fail)?;
        unsafe { *out = value };
        Ok(())
    })
}

/// Parse a signal from its JSON form. Both layouts are accepted: a
/// partition-coefficient vector over a seed family, or a zero-sum tensor
/// over a permutation list.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_signal_from_json(
    text: *const c_char,
    out: *mut *mut GmeSignal,
) -> GmeStatus {
    guarded(|| {
        let text = unsafe { str_arg(text, "text") }?;
        let out = out_arg(out, "out")?;
        let inner = AnySignal::from_json_str(text).map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(GmeSignal { inner })) };
        Ok(())
    })
}

/// Build the inverted top vector of a seed family over `party_count`
/// parties. `family` uses the same grammar as the command-line tool, for
/// example `renyi:2`, `residual`, or `square(renyi:1)`.
///
/// # Safety
/// `family` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_signal_top_vector(
    family: *const c_char,
    party_count: usize,
    out: *mut *mut GmeSignal,
) -> GmeStatus {
    guarded(|| {
        let family = unsafe { str_arg(family, "family") }?;
        let out = out_arg(out, "out")?;
        let family = parse_family(family).map_err(fail)?;
        let spec = gme::harness::top_vector_spec(&family, party_count).map_err(fail)?;
        unsafe {
            *out = Box::into_raw(Box::new(GmeSignal {
                inner: AnySignal::Symmetric(spec),
            }))
        };
        Ok(())
    })
}

/// Serialize a signal to its JSON form. The returned string is owned by the
/// caller; free it with [`gme_string_free`].
///
/// # Safety
/// `signal` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_signal_to_json(
    signal: *const GmeSignal,
    out: *mut *mut c_char,
) -> GmeStatus {
    guarded(|| {
        let signal = unsafe { handle_arg(signal, "signal") }?;
        let out = out_arg(out, "out")?;
        let text = signal.inner.to_json_string().map_err(fail)?;
        give_string(text, out)
    })
}

/// Evaluate a signal on a state.
///
/// # Safety
/// `signal` and `state` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_signal_evaluate(
    signal: *const GmeSignal,
    state: *const GmeState,
    out: *mut f64,
) -> GmeStatus {
    guarded(|| {
        let signal = unsafe { handle_arg(signal, "signal") }?;
        let state = unsafe { handle_arg(state, "state") }?;
        let out = out_arg(out, "out")?;
        let value = signal.inner.evaluate(&state.inner).map_err(fail)?;
        unsafe { *out = value };
        Ok(())
    })
}

/// Render the symbolic entropy expansion of a partition-coefficient signal,
/// optionally applying the pure-state reductions (complement folding and
/// dropping terms that vanish identically on pure states). Tensor-contraction
/// signals have no such expansion and are rejected.
///
/// # Safety
/// `signal` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_signal_expansion(
    signal: *const GmeSignal,
    reduce_on_purity: bool,
    out: *mut *mut c_char,
) -> GmeStatus {
    guarded(|| {
        let signal = unsafe { handle_arg(signal, "signal") }?;
        let out = out_arg(out, "out")?;
        let spec = match &signal.inner {
            AnySignal::Symmetric(spec) => spec,
            AnySignal::NonSymmetric(_) => {
                return Err(fail_with(
                    GmeStatus::InvalidArgument,
                    "tensor-contraction signals have no symbolic entropy expansion",
                ));
            }
        };
        let mut terms = expand_grouped(spec).map_err(fail)?;
        if reduce_on_purity {
            terms = reduce_pure(&terms, spec.q()).map_err(fail)?;
        }
        let ps = PartySet::with_default_labels(spec.q()).map_err(fail)?;
        give_string(render_expansion(&terms, &ps), out)
    })
}

/// Release a signal handle.
///
/// # Safety
/// `signal` must be null or a live handle created by this library and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn gme_signal_free(signal: *mut GmeSignal) {
    if !signal.is_null() {
        drop(unsafe { Box::from_raw(signal) });
    }
}

/// Run the full verification sweep and hand back its JSON report. The call
/// succeeds whenever the sweep runs to completion; inspect the report's
/// `pass` field for the verdict. Free the string with [`gme_string_free`].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gme_verify_run(
    q_max: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> GmeStatus {
    guarded(|| {
        let out = out_arg(out, "out")?;
        let report = run_all(q_max, seed).map_err(fail)?;
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| fail(Error::Json(e)))?;
        give_string(text, out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn c(text: &str) -> CString {
        CString::new(text).unwrap()
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        unsafe { gme_string_free(ptr) };
        s
    }

    #[test]
    fn version_is_a_static_semver_string() {
        let v = unsafe { CStr::from_ptr(gme_version()) }.to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn catalog_state_round_trips_through_json() {
        let mut state: *mut GmeState = ptr::null_mut();
        let status =
            unsafe { gme_state_catalog(c("ghz").as_ptr(), 3, 2, &mut state) };
        assert_eq!(status, GmeStatus::Ok);

        let mut parties = 0usize;
        assert_eq!(
            unsafe { gme_state_party_count(state, &mut parties) },
            GmeStatus::Ok
        );
        assert_eq!(parties, 3);

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { gme_state_to_json(state, &mut json) }, GmeStatus::Ok);
        let text = unsafe { take_string(json) };

        let mut back: *mut GmeState = ptr::null_mut();
        assert_eq!(
            unsafe { gme_state_from_json(c(&text).as_ptr(), &mut back) },
            GmeStatus::Ok
        );

        let mut entropy = 0.0f64;
        assert_eq!(
            unsafe { gme_renyi_entropy(back, 0b001, 1, &mut entropy) },
            GmeStatus::Ok
        );
        assert!((entropy - std::f64::consts::LN_2).abs() < 1e-12);

        unsafe {
            gme_state_free(state);
            gme_state_free(back);
        }
    }

    #[test]
    fn top_vector_evaluates_and_expands() {
        let mut signal: *mut GmeSignal = ptr::null_mut();
        assert_eq!(
            unsafe { gme_signal_top_vector(c("renyi:2").as_ptr(), 4, &mut signal) },
            GmeStatus::Ok
        );

        let mut state: *mut GmeState = ptr::null_mut();
        assert_eq!(
            unsafe { gme_state_catalog(c("ghz").as_ptr(), 4, 2, &mut state) },
            GmeStatus::Ok
        );

        let mut value = 0.0f64;
        assert_eq!(
            unsafe { gme_signal_evaluate(signal, state, &mut value) },
            GmeStatus::Ok
        );
        assert!((value + 2.0 * std::f64::consts::LN_2).abs() < 1e-9);

        let mut rendered: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { gme_signal_expansion(signal, true, &mut rendered) },
            GmeStatus::Ok
        );
        let text = unsafe { take_string(rendered) };
        assert!(text.starts_with("-S_2(ABC,D)"));
        assert!(text.ends_with("- 6*S_4(A,B,C,D)"));

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { gme_signal_to_json(signal, &mut json) }, GmeStatus::Ok);
        let text = unsafe { take_string(json) };
        let mut back: *mut GmeSignal = ptr::null_mut();
        assert_eq!(
            unsafe { gme_signal_from_json(c(&text).as_ptr(), &mut back) },
            GmeStatus::Ok
        );
        let mut value2 = 0.0f64;
        assert_eq!(
            unsafe { gme_signal_evaluate(back, state, &mut value2) },
            GmeStatus::Ok
        );
        assert_eq!(value, value2);

        unsafe {
            gme_signal_free(signal);
            gme_signal_free(back);
            gme_state_free(state);
        }
    }

    #[test]
    fn errors_set_codes_and_messages() {
        let mut state: *mut GmeState = ptr::null_mut();

        assert_eq!(
            unsafe { gme_state_from_json(ptr::null(), &mut state) },
            GmeStatus::NullArgument
        );
        let msg = unsafe { CStr::from_ptr(gme_last_error()) }.to_str().unwrap();
        assert!(msg.contains("null"));

        assert_eq!(
            unsafe { gme_state_from_json(c("not json").as_ptr(), &mut state) },
            GmeStatus::ParseError
        );

        let bad = [0xffu8, 0];
        assert_eq!(
            unsafe {
                gme_state_from_json(bad.as_ptr() as *const c_char, &mut state)
            },
            GmeStatus::InvalidUtf8
        );

        assert_eq!(
            unsafe { gme_state_catalog(c("bell").as_ptr(), 3, 2, &mut state) },
            GmeStatus::InvalidArgument
        );

        // A tensor signal has no symbolic expansion.
        let spec = gme::signal::shipped_minimal_signal_q3();
        let json = AnySignal::NonSymmetric(spec).to_json_string().unwrap();
        let mut signal: *mut GmeSignal = ptr::null_mut();
        assert_eq!(
            unsafe { gme_signal_from_json(c(&json).as_ptr(), &mut signal) },
            GmeStatus::Ok
        );
        let mut rendered: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { gme_signal_expansion(signal, false, &mut rendered) },
            GmeStatus::InvalidArgument
        );
        unsafe { gme_signal_free(signal) };
    }

    #[test]
    fn verification_sweep_reports_through_the_boundary() {
        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { gme_verify_run(3, 5, &mut json) }, GmeStatus::Ok);
        let text = unsafe { take_string(json) };
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["schema"], serde_json::json!(1));
        assert_eq!(value["pass"], serde_json::json!(true));

        // An out-of-range cap is rejected through the status channel.
        let mut json2: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { gme_verify_run(9, 5, &mut json2) },
            GmeStatus::InvalidArgument
        );
    }

    #[test]
    fn generated_header_declares_the_surface() {
        let header = std::fs::read_to_string(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/gme.h"),
        )
        .expect("header is generated at build time");
        for needle in [
            "typedef struct GmeState GmeState;",
            "typedef struct GmeSignal GmeSignal;",
            "GmeStatus",
            "gme_state_catalog",
            "gme_signal_evaluate",
            "gme_verify_run",
            "gme_last_error",
            "gme_string_free",
        ] {
            assert!(header.contains(needle), "header lost '{needle}'");
        }
    }
}
