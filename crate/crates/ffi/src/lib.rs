//! C ABI for the `modecap` library.
//!
//! Every fallible call returns a [`ModecapStatus`]; results come back
//! through out-pointers. On failure a message is kept per thread and can be
//! read with [`modecap_last_error_message`]. Handles are opaque and must be
//! released with the matching `_free` function.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use modecap::dofcore::{self, ModeBandwidthProfile, NormalizedParams, Scenario};
use modecap::Error;

/// Status codes. Domain and resolution codes match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModecapStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 3,
    Resolution = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Opaque validated scenario.
pub struct ModecapScenario {
    inner: Scenario,
}

/// Opaque per-mode bandwidth table.
pub struct ModecapProfile {
    inner: ModeBandwidthProfile,
}

/// Physical scenario parameters in SI units.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ModecapScenarioParams {
    pub radius: f64,
    pub mid_freq: f64,
    pub half_bandwidth: f64,
    pub obs_time: f64,
    pub wave_speed: f64,
    pub threshold: f64,
    pub snr_alpha_max: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ModecapDof {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub total: f64,
    pub t_eff: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ModecapModeBandwidth {
    pub n: usize,
    pub critical_freq: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub eff_bandwidth: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: ModecapStatus, msg: impl Into<String>) -> ModecapStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> ModecapStatus {
    let status = match e {
        Error::Aliasing { .. } | Error::Resource(_) => ModecapStatus::Resolution,
        _ => ModecapStatus::Domain,
    };
    fail(status, e.to_string())
}

/// Runs `f`, clearing the last error first and converting panics.
fn guard(f: impl FnOnce() -> ModecapStatus) -> ModecapStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(ModecapStatus::Panic, "internal panic"),
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(ModecapStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn modecap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

fn box_scenario(s: Scenario, out: *mut *mut ModecapScenario) -> ModecapStatus {
    if let Err(e) = s.validate() {
        return from_error(e);
    }
    unsafe { *out = Box::into_raw(Box::new(ModecapScenario { inner: s })) };
    ModecapStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn modecap_scenario_new(
    params: *const ModecapScenarioParams,
    out: *mut *mut ModecapScenario,
) -> ModecapStatus {
    guard(|| {
        non_null!(params, out);
        let p = unsafe { *params };
        box_scenario(
            Scenario {
                radius: p.radius,
                mid_freq: p.mid_freq,
                half_bandwidth: p.half_bandwidth,
                obs_time: p.obs_time,
                wave_speed: p.wave_speed,
                threshold: p.threshold,
                snr_alpha_max: p.snr_alpha_max,
            },
            out,
        )
    })
}

/// Scenario from normalized parameters at mid-band `mid_freq` and wave
/// speed `wave_speed`, with threshold 1.
#[no_mangle]
pub unsafe extern "C" fn modecap_scenario_from_normalized(
    a: f64,
    b: f64,
    d: f64,
    rho: f64,
    mid_freq: f64,
    wave_speed: f64,
    out: *mut *mut ModecapScenario,
) -> ModecapStatus {
    guard(|| {
        non_null!(out);
        let p = NormalizedParams { a, b, d, rho };
        if let Err(e) = p.validate() {
            return from_error(e);
        }
        box_scenario(p.to_scenario(mid_freq, wave_speed), out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn modecap_scenario_free(scenario: *mut ModecapScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// The degrees-of-freedom bound with its three terms.
#[no_mangle]
pub unsafe extern "C" fn modecap_dof_bound(
    scenario: *const ModecapScenario,
    out: *mut ModecapDof,
) -> ModecapStatus {
    guard(|| {
        non_null!(scenario, out);
        match dofcore::dof_bound(unsafe { &(*scenario).inner }) {
            Ok(b) => {
                unsafe {
                    *out = ModecapDof {
                        d1: b.d1,
                        d2: b.d2,
                        d3: b.d3,
                        total: b.total,
                        t_eff: b.t_eff,
                    }
                };
                ModecapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// The bound from normalized parameters alone.
#[no_mangle]
pub unsafe extern "C" fn modecap_dof_normalized(
    a: f64,
    b: f64,
    d: f64,
    rho: f64,
    out: *mut f64,
) -> ModecapStatus {
    guard(|| {
        non_null!(out);
        match dofcore::dof_normalized(&NormalizedParams { a, b, d, rho }) {
            Ok(v) => {
                unsafe { *out = v };
                ModecapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn modecap_truncation_indices(
    scenario: *const ModecapScenario,
    n_min: *mut usize,
    n_max: *mut usize,
) -> ModecapStatus {
    guard(|| {
        non_null!(scenario, n_min, n_max);
        let s = unsafe { &(*scenario).inner };
        if s.radius == 0.0 {
            return from_error(Error::ZeroRadius);
        }
        let (lo, hi) = dofcore::truncation_indices(s);
        unsafe {
            *n_min = lo;
            *n_max = hi;
        }
        ModecapStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn modecap_critical_frequency(
    scenario: *const ModecapScenario,
    n: usize,
    out: *mut f64,
) -> ModecapStatus {
    guard(|| {
        non_null!(scenario, out);
        match dofcore::critical_frequency(unsafe { &(*scenario).inner }, n) {
            Ok(f) => {
                unsafe { *out = f };
                ModecapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Per-mode bandwidth table for modes `0..=N_max`.
#[no_mangle]
pub unsafe extern "C" fn modecap_profile_new(
    scenario: *const ModecapScenario,
    out: *mut *mut ModecapProfile,
) -> ModecapStatus {
    guard(|| {
        non_null!(scenario, out);
        match dofcore::bandwidth_profile(unsafe { &(*scenario).inner }, None) {
            Ok(p) => {
                unsafe { *out = Box::into_raw(Box::new(ModecapProfile { inner: p })) };
                ModecapStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of rows in the table; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn modecap_profile_len(profile: *const ModecapProfile) -> usize {
    if profile.is_null() {
        return 0;
    }
    unsafe { (*profile).inner.per_mode.len() }
}

#[no_mangle]
pub unsafe extern "C" fn modecap_profile_get(
    profile: *const ModecapProfile,
    index: usize,
    out: *mut ModecapModeBandwidth,
) -> ModecapStatus {
    guard(|| {
        non_null!(profile, out);
        let rows = unsafe { &(*profile).inner.per_mode };
        let Some(m) = rows.get(index) else {
            return fail(
                ModecapStatus::OutOfRange,
                format!("index {index} out of range for {} modes", rows.len()),
            );
        };
        unsafe {
            *out = ModecapModeBandwidth {
                n: m.n,
                critical_freq: m.critical_freq,
                band_lo: m.band_lo,
                band_hi: m.band_hi,
                eff_bandwidth: m.eff_bandwidth,
            }
        };
        ModecapStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn modecap_profile_free(profile: *mut ModecapProfile) {
    if !profile.is_null() {
        drop(unsafe { Box::from_raw(profile) });
    }
}
