//! C bindings for the teleportation library.
//!
//! Fallible calls return a [`CvtStatus`] and write their result through an
//! out pointer. Handles from the `cvt_protocol_new_*` constructors own their
//! configuration and must be released with [`cvt_protocol_free`]; strings
//! returned through `char **` must be released with [`cvt_string_free`].
//! Handles are plain values: cheap to create, safe to use from one thread at
//! a time.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;

use cvteleport::metrics::{evaluate, hk_fidelity};
use cvteleport::optimize::{
    improved_fidelity, improved_squeezers, optimal_gprime, optimal_local_ops,
};
use cvteleport::protocol::{shared_state_qnd, BellInteraction, GainPolicy, ProtocolConfig};
use cvteleport::Error;

/// Outcome of a C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvtStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer was null.
    NullPointer,
    /// A numeric argument is out of range or not finite.
    InvalidArgument,
    /// A matrix fails the symplectic condition.
    NotSymplectic,
    /// The Bell interaction leaves a detected quadrature dark.
    Singular,
    /// The configuration is outside the supported family.
    UnsupportedState,
    /// A covariance matrix fails validation.
    InvalidState,
    /// A string is not valid UTF-8.
    BadUtf8,
}

fn status_of(err: &Error) -> CvtStatus {
    match err {
        Error::InvalidArgument(_) => CvtStatus::InvalidArgument,
        Error::NotSymplectic { .. } => CvtStatus::NotSymplectic,
        Error::YSingular { .. } => CvtStatus::Singular,
        Error::UnsupportedState(_) => CvtStatus::UnsupportedState,
        Error::InvalidState(_) => CvtStatus::InvalidState,
    }
}

/// Opaque teleportation protocol handle.
pub struct CvtProtocol {
    config: ProtocolConfig,
}

/// Figures of merit of one run on a coherent-state input.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CvtMetrics {
    /// Product of the conditional variances; below 1/4 needs entanglement.
    pub cond_var_product: f64,
    /// Summed signal-to-noise transfer of both quadratures; above 1 needs
    /// entanglement.
    pub signal_transfer: f64,
    /// Coherent-state fidelity; above 1/2 beats every classical channel.
    pub fidelity: f64,
    /// Mean photon number of the added noise.
    pub photon_noise: f64,
    /// cond_var_product < 1/4.
    pub quantum_v: bool,
    /// signal_transfer > 1.
    pub quantum_t: bool,
    /// fidelity > 1/2.
    pub quantum_f: bool,
}

fn hand_out(config: ProtocolConfig, out: *mut *mut CvtProtocol) -> CvtStatus {
    if out.is_null() {
        return CvtStatus::NullPointer;
    }
    match config.validate() {
        Ok(()) => {
            unsafe { *out = Box::into_raw(Box::new(CvtProtocol { config })) };
            CvtStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

fn write_value(value: cvteleport::Result<f64>, out: *mut f64) -> CvtStatus {
    if out.is_null() {
        return CvtStatus::NullPointer;
    }
    match value {
        Ok(v) => {
            unsafe { *out = v };
            CvtStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Create a protocol with QND entanglement of strength `g`, a QND Bell
/// coupling of strength `g_prime`, unity gains, and no local operations.
///
/// # Safety
/// `out` must be valid for writes. On success it receives a handle that must
/// be released with `cvt_protocol_free`.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_new_qnd(
    g: f64,
    g_prime: f64,
    out: *mut *mut CvtProtocol,
) -> CvtStatus {
    hand_out(ProtocolConfig::qnd(g, g_prime), out)
}

/// Create a protocol whose Bell stage is an unbalanced beam splitter with
/// transmittance `t` and reflectivity `r`, t^2 + r^2 = 1.
///
/// # Safety
/// `out` must be valid for writes. On success it receives a handle that must
/// be released with `cvt_protocol_free`.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_new_beamsplitter(
    g: f64,
    t: f64,
    r: f64,
    out: *mut *mut CvtProtocol,
) -> CvtStatus {
    let mut config = ProtocolConfig::qnd(g, 1.0);
    config.bell = BellInteraction::BeamSplitter { t, r };
    hand_out(config, out)
}

/// Deserialize a protocol from its JSON form.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` valid for writes. On
/// success `out` receives a handle that must be released with
/// `cvt_protocol_free`.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_from_json(
    text: *const c_char,
    out: *mut *mut CvtProtocol,
) -> CvtStatus {
    if text.is_null() || out.is_null() {
        return CvtStatus::NullPointer;
    }
    let text = match unsafe { CStr::from_ptr(text) }.to_str() {
        Ok(t) => t,
        Err(_) => return CvtStatus::BadUtf8,
    };
    match ProtocolConfig::from_json(text) {
        Ok(config) => hand_out(config, out),
        Err(e) => status_of(&e),
    }
}

/// Serialize a protocol to JSON.
///
/// # Safety
/// `protocol` must be a live handle and `out` valid for writes. On success
/// `out` receives a string that must be released with `cvt_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_to_json(
    protocol: *const CvtProtocol,
    out: *mut *mut c_char,
) -> CvtStatus {
    if protocol.is_null() || out.is_null() {
        return CvtStatus::NullPointer;
    }
    let json = unsafe { &(*protocol).config }.to_json();
    let json = CString::new(json).expect("JSON never contains a nul byte");
    unsafe { *out = json.into_raw() };
    CvtStatus::Ok
}

/// Release a protocol handle. `protocol` may be null.
///
/// # Safety
/// `protocol` must have come from a constructor of this library and must not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_free(protocol: *mut CvtProtocol) {
    if !protocol.is_null() {
        drop(unsafe { Box::from_raw(protocol) });
    }
}

/// Release a string returned by this library. `text` may be null.
///
/// # Safety
/// `text` must have come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cvt_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Use unity displacement gains.
///
/// # Safety
/// `protocol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_set_unity_gains(protocol: *mut CvtProtocol) -> CvtStatus {
    match unsafe { protocol.as_mut() } {
        Some(p) => {
            p.config.gains = GainPolicy::Unity;
            CvtStatus::Ok
        }
        None => CvtStatus::NullPointer,
    }
}

/// Use per-quadrature displacement gains `g_x` and `g_p`.
///
/// # Safety
/// `protocol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_set_scalar_gains(
    protocol: *mut CvtProtocol,
    g_x: f64,
    g_p: f64,
) -> CvtStatus {
    let Some(p) = (unsafe { protocol.as_mut() }) else {
        return CvtStatus::NullPointer;
    };
    let mut candidate = p.config;
    candidate.gains = GainPolicy::Scalar { g_x, g_p };
    match candidate.validate() {
        Ok(()) => {
            p.config = candidate;
            CvtStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Install the local squeezer pair that minimizes the added noise within the
/// squeezer family for the handle's couplings.
///
/// # Safety
/// `protocol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_apply_improved_squeezers(
    protocol: *mut CvtProtocol,
) -> CvtStatus {
    let Some(p) = (unsafe { protocol.as_mut() }) else {
        return CvtStatus::NullPointer;
    };
    let g_prime = match p.config.bell {
        BellInteraction::Qnd { g_prime } => g_prime,
        BellInteraction::BeamSplitter { t, r } => {
            if t == 0.0 {
                return CvtStatus::Singular;
            }
            r / t
        }
        BellInteraction::Generic { .. } => return CvtStatus::UnsupportedState,
    };
    match improved_squeezers(p.config.g, g_prime) {
        Ok((s_a, s_b)) => {
            p.config.s_a = s_a;
            p.config.s_b = s_b;
            CvtStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Install the local operations that reach the least possible added noise
/// for the handle's shared state and Bell interaction.
///
/// # Safety
/// `protocol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_apply_optimal_local_ops(
    protocol: *mut CvtProtocol,
) -> CvtStatus {
    let Some(p) = (unsafe { protocol.as_mut() }) else {
        return CvtStatus::NullPointer;
    };
    let shared = match shared_state_qnd(p.config.g) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let bell = match p.config.bell.to_matrix() {
        Ok(m) => m,
        Err(e) => return status_of(&e),
    };
    match optimal_local_ops(&shared, &bell) {
        Ok((s_a, s_b, _)) => {
            p.config.s_a = s_a;
            p.config.s_b = s_b;
            CvtStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Compute every figure of merit for a coherent-state input.
///
/// # Safety
/// `protocol` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_protocol_evaluate(
    protocol: *const CvtProtocol,
    out: *mut CvtMetrics,
) -> CvtStatus {
    if protocol.is_null() || out.is_null() {
        return CvtStatus::NullPointer;
    }
    let report = match evaluate(unsafe { &(*protocol).config }) {
        Ok(r) => r,
        Err(e) => return status_of(&e),
    };
    unsafe {
        *out = CvtMetrics {
            cond_var_product: report.v,
            signal_transfer: report.t,
            fidelity: report.f,
            photon_noise: report.n_photon,
            quantum_v: report.flags.quantum_v,
            quantum_t: report.flags.quantum_t,
            quantum_f: report.flags.quantum_f,
        };
    }
    CvtStatus::Ok
}

/// Fidelity of the symmetric scheme whose Bell coupling equals the
/// entangling strength, at unity gains.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_hk_fidelity(g: f64, out: *mut f64) -> CvtStatus {
    write_value(hk_fidelity(g), out)
}

/// Best fidelity reachable with the local squeezer pair, at unity gains.
/// Independent of the Bell coupling strength.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_improved_fidelity(g: f64, out: *mut f64) -> CvtStatus {
    write_value(improved_fidelity(g), out)
}

/// Bell coupling strength that maximizes the signal transfer at entangling
/// strength `g`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_transfer_optimal_coupling(g: f64, out: *mut f64) -> CvtStatus {
    write_value(optimal_gprime(g), out)
}

/// Least added-noise photon number any local operations can reach with the
/// shared state of entangling strength `g`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cvt_noise_floor(g: f64, out: *mut f64) -> CvtStatus {
    let shared = match shared_state_qnd(g) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    write_value(Ok(2.0 * (shared.a() - shared.c())), out)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cvt_status_message(status: CvtStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        CvtStatus::Ok => b"ok\0",
        CvtStatus::NullPointer => b"a required pointer was null\0",
        CvtStatus::InvalidArgument => b"a numeric argument is out of range or not finite\0",
        CvtStatus::NotSymplectic => b"matrix fails the symplectic condition\0",
        CvtStatus::Singular => b"Bell interaction leaves a detected quadrature dark\0",
        CvtStatus::UnsupportedState => b"configuration is outside the supported family\0",
        CvtStatus::InvalidState => b"covariance matrix fails validation\0",
        CvtStatus::BadUtf8 => b"string is not valid UTF-8\0",
    };
    text.as_ptr().cast()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cvt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
