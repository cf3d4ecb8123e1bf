//! C ABI for the strategic classification game solver.
//!
//! The surface follows the usual opaque-handle pattern: parse a scenario
//! from a JSON config string, run a regime solve, pull the result back as
//! JSON. All functions are panic-safe; failures return a status code and
//! the message is retrievable via [`sc_last_error_message`].
//!
//! Ownership rules: every `*mut` returned by this library must be released
//! with the matching `sc_*_free` function; strings with [`sc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use stratclass::config::{ScenarioConfig, ScenarioKind};
use stratclass::cost::SubsidyPlan;
use stratclass::eq1d::equilibrium_threshold_grid;
use stratclass::eqnd::equilibrium_offset_sweep;
use stratclass::error::Error;
use stratclass::golden::reproduce_paper;
use stratclass::subsidy::{
    optimize_subsidy_grid, regime_report_at, welfare_nonmanipulation, LearnerMode, RegimeKind,
    SubsidyFamily,
};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidConfig = 2,
    NumericFailure = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

/// Classification regimes exposed through the ABI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScRegime {
    NoManipulation = 0,
    Manipulation = 1,
    ProportionalSubsidy = 2,
    FlatSubsidy = 3,
}

/// Opaque parsed-and-validated scenario handle.
pub struct ScScenario {
    config: ScenarioConfig,
    scenario: ScenarioKind,
}

/// Opaque solve result; render with `sc_report_json` / `sc_report_summary`.
pub struct ScReport {
    machine: serde_json::Value,
    summary: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let cstring = CString::new(msg.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of(err: &Error) -> ScStatus {
    match err {
        Error::Config(_) | Error::Validation(_) | Error::Domain(_) => ScStatus::InvalidConfig,
        Error::Numeric(_) => ScStatus::NumericFailure,
        Error::Io(_) => ScStatus::InvalidConfig,
    }
}

fn guarded<F: FnOnce() -> ScStatus>(f: F) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic inside stratclass".to_string());
            ScStatus::Panic
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Last error message for this thread, or NULL when none was recorded.
/// The caller owns the returned string (release with `sc_string_free`).
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Parse and validate a scenario from a JSON config string.
///
/// On success writes a scenario handle to `out` and returns `SC_OK`.
///
/// # Safety
/// `json` must point to a NUL-terminated string; `out` must be a valid
/// pointer to pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_scenario_from_json(
    json: *const c_char,
    out: *mut *mut ScScenario,
) -> ScStatus {
    if json.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return ScStatus::NullArgument;
    }
    guarded(|| {
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("config is not valid UTF-8".to_string());
                return ScStatus::InvalidUtf8;
            }
        };
        let config = match ScenarioConfig::from_json(text) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return status_of(&e);
            }
        };
        let scenario = match config.build() {
            Ok(s) => s,
            Err(e) => {
                set_error(e.to_string());
                return status_of(&e);
            }
        };
        *out = Box::into_raw(Box::new(ScScenario { config, scenario }));
        ScStatus::Ok
    })
}

/// Release a scenario handle.
///
/// # Safety
/// `scenario` must come from `sc_scenario_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sc_scenario_free(scenario: *mut ScScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

fn run_regime(handle: &ScScenario, regime: ScRegime, seed: u64) -> Result<ScReport, Error> {
    let opts = &handle.config.options;
    match &handle.scenario {
        ScenarioKind::OneD(s) => {
            let report = match regime {
                ScRegime::NoManipulation => welfare_nonmanipulation(s, LearnerMode::PenaltyMin)?,
                ScRegime::Manipulation => {
                    let (t, _) = equilibrium_threshold_grid(s, &SubsidyPlan::None, opts.grid)?;
                    regime_report_at(s, RegimeKind::Manipulation, t.sigma, SubsidyPlan::None)?
                }
                ScRegime::ProportionalSubsidy => {
                    let eq =
                        optimize_subsidy_grid(s, SubsidyFamily::Proportional, opts.joint_grid)?;
                    regime_report_at(
                        s,
                        RegimeKind::ProportionalSubsidy,
                        eq.threshold.sigma,
                        eq.plan,
                    )?
                }
                ScRegime::FlatSubsidy => {
                    let eq = optimize_subsidy_grid(s, SubsidyFamily::Flat, opts.joint_grid)?;
                    regime_report_at(s, RegimeKind::FlatSubsidy, eq.threshold.sigma, eq.plan)?
                }
            };
            let summary = format!(
                "{}: sigma = {:.6}, penalty = {:.6}, W_A = {:.6}, W_B = {:.6}",
                report.regime.label(),
                report.threshold.sigma,
                report.penalty.total,
                report.welfare_a,
                report.welfare_b
            );
            Ok(ScReport {
                machine: serde_json::json!({ "seed": seed, "result": report }),
                summary,
            })
        }
        ScenarioKind::MultiD(s) => match regime {
            ScRegime::Manipulation => {
                let coarse = (opts.mc_samples / 20).clamp(20_000, 200_000);
                let eq = equilibrium_offset_sweep(s, 65, coarse, opts.mc_samples, seed)?;
                let summary = format!(
                    "manipulation (d = {}): g0 = {:.6}, penalty = {:.6} (se {:.2e})",
                    s.dim(),
                    eq.hyperplane.offset,
                    eq.penalty.total.value,
                    eq.penalty.total.se
                );
                Ok(ScReport {
                    machine: serde_json::json!({ "seed": seed, "result": eq }),
                    summary,
                })
            }
            _ => Err(Error::domain(
                "multi-dimensional handles support the manipulation regime; use the 1-D \
                 reduction for subsidy analysis",
            )),
        },
    }
}

/// Solve one regime of the scenario.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be a valid pointer to
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_equilibrium_run(
    scenario: *const ScScenario,
    regime: ScRegime,
    seed: u64,
    out: *mut *mut ScReport,
) -> ScStatus {
    if scenario.is_null() || out.is_null() {
        set_error("null argument".to_string());
        return ScStatus::NullArgument;
    }
    guarded(|| {
        let handle = &*scenario;
        match run_regime(handle, regime, seed) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(report));
                ScStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Recompute the published worked-example table.
///
/// Writes a report whose JSON carries per-row pass/fail entries; returns
/// `SC_OK` whether or not documented discrepancies are present.
///
/// # Safety
/// `out` must be a valid pointer to pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_reproduce_paper(out: *mut *mut ScReport) -> ScStatus {
    if out.is_null() {
        set_error("null argument".to_string());
        return ScStatus::NullArgument;
    }
    guarded(|| match reproduce_paper() {
        Ok(report) => {
            let summary = report.render_human();
            *out = Box::into_raw(Box::new(ScReport {
                machine: serde_json::to_value(&report).unwrap(),
                summary,
            }));
            ScStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    })
}

/// Render a report as pretty-printed JSON. Caller frees via `sc_string_free`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_json(report: *const ScReport) -> *mut c_char {
    if report.is_null() {
        return std::ptr::null_mut();
    }
    let text = serde_json::to_string_pretty(&(*report).machine).unwrap_or_default();
    CString::new(text.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Render a short human summary. Caller frees via `sc_string_free`.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_summary(report: *const ScReport) -> *mut c_char {
    if report.is_null() {
        return std::ptr::null_mut();
    }
    CString::new((*report).summary.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

/// Release a report handle.
///
/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sc_report_free(report: *mut ScReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `ptr` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}
