//! C interface to the `rwpso` solver.
//!
//! Instances and results are opaque heap handles released with their `_free`
//! functions. Every fallible call returns an [`RwpsoStatus`]; on failure
//! [`rwpso_last_error`] describes the most recent error on the calling thread.
//! Strings returned by the library are released with [`rwpso_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use rwpso::codec::DecodePolicy;
use rwpso::engine::{Mode, PsoConfig, RunResult, Swarm};
use rwpso::io::solomon::{build_instance, parse_instance, read_instance, truncate, SolomonError};
use rwpso::io::solution::SolutionDump;
use rwpso::vrptw::{evaluate, validate, CostWeights, Instance};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwpsoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Config = 5,
    Infeasible = 6,
    Panic = 7,
}

pub const RWPSO_MODE_RWPSO: u32 = 0;
pub const RWPSO_MODE_BASELINE: u32 = 1;

pub const RWPSO_DECODER_CHEAPEST_INSERTION: u32 = 0;
pub const RWPSO_DECODER_FIRST_FEASIBLE: u32 = 1;
pub const RWPSO_DECODER_NEAREST_REFERENCE: u32 = 2;

/// Solver settings. Obtain defaults from [`rwpso_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RwpsoConfig {
    pub seed: u64,
    /// One of the `RWPSO_MODE_*` constants.
    pub mode: u32,
    /// One of the `RWPSO_DECODER_*` constants.
    pub decoder: u32,
    pub particles: usize,
    /// Archive size L.
    pub archive_size: usize,
    /// Iteration count; 0 selects 1000 up to 25 customers and 10000 beyond.
    pub iterations: usize,
    pub k_vmax: f64,
    pub time_cost: f64,
}

/// A loaded problem instance.
pub struct RwpsoInstance {
    inner: Instance,
}

/// The outcome of one solver run.
pub struct RwpsoResult {
    run: RunResult,
    routes: Vec<Vec<usize>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: RwpsoStatus, message: impl Into<String>) -> RwpsoStatus {
    set_error(message);
    status
}

fn guarded(body: impl FnOnce() -> RwpsoStatus) -> RwpsoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(RwpsoStatus::Panic, format!("panic: {message}"))
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, RwpsoStatus> {
    if s.is_null() {
        return Err(fail(RwpsoStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(RwpsoStatus::InvalidUtf8, e.to_string()))
}

fn solomon_status(e: &SolomonError) -> RwpsoStatus {
    match e {
        SolomonError::Io { .. } => RwpsoStatus::Io,
        SolomonError::NOutOfRange { .. } => RwpsoStatus::Config,
        _ => RwpsoStatus::Parse,
    }
}

fn finish_instance(
    raw: Result<rwpso::io::solomon::RawInstanceFile, SolomonError>,
    customers: usize,
    out: *mut *mut RwpsoInstance,
) -> RwpsoStatus {
    let built = raw
        .and_then(|raw| if customers == 0 { Ok(raw) } else { truncate(&raw, customers) })
        .and_then(|raw| build_instance(&raw));
    match built {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(RwpsoInstance { inner })) };
            RwpsoStatus::Ok
        }
        Err(e) => fail(solomon_status(&e), e.to_string()),
    }
}

/// Message for the most recent failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rwpso_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn rwpso_config_default() -> RwpsoConfig {
    let cfg = PsoConfig::benchmark();
    RwpsoConfig {
        seed: cfg.seed,
        mode: RWPSO_MODE_RWPSO,
        decoder: RWPSO_DECODER_CHEAPEST_INSERTION,
        particles: cfg.n_particles,
        archive_size: cfg.archive_size,
        iterations: 0,
        k_vmax: cfg.k_vmax,
        time_cost: cfg.time_cost,
    }
}

/// Loads a Solomon file. `customers` = 0 keeps every customer.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rwpso_instance_load(
    path: *const c_char,
    customers: usize,
    out: *mut *mut RwpsoInstance,
) -> RwpsoStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RwpsoStatus::NullPointer, "out is null");
        }
        let path = match read_str(path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        finish_instance(read_instance(Path::new(path)), customers, out)
    })
}

/// Parses Solomon-format text. `customers` = 0 keeps every customer.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rwpso_instance_parse(
    text: *const c_char,
    customers: usize,
    out: *mut *mut RwpsoInstance,
) -> RwpsoStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RwpsoStatus::NullPointer, "out is null");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        finish_instance(parse_instance(text), customers, out)
    })
}

/// # Safety
/// `instance` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rwpso_instance_free(instance: *mut RwpsoInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of customers, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rwpso_instance_customers(instance: *const RwpsoInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.n_customers())
}

/// Vehicle capacity, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rwpso_instance_capacity(instance: *const RwpsoInstance) -> f64 {
    instance.as_ref().map_or(0.0, |i| i.inner.capacity())
}

fn to_pso(inst: &Instance, c: &RwpsoConfig) -> Result<(PsoConfig, Mode), String> {
    let mode = match c.mode {
        RWPSO_MODE_RWPSO => Mode::Rwpso,
        RWPSO_MODE_BASELINE => Mode::Baseline,
        other => return Err(format!("unknown mode {other}")),
    };
    let decoder = match c.decoder {
        RWPSO_DECODER_CHEAPEST_INSERTION => DecodePolicy::CheapestInsertion,
        RWPSO_DECODER_FIRST_FEASIBLE => DecodePolicy::FirstFeasible,
        RWPSO_DECODER_NEAREST_REFERENCE => DecodePolicy::NearestReference,
        other => return Err(format!("unknown decoder {other}")),
    };
    let iterations = if c.iterations == 0 { rwpso::bench::iteration_budget(inst.n_customers()) } else { c.iterations };
    let cfg = PsoConfig {
        seed: c.seed,
        n_particles: c.particles,
        archive_size: c.archive_size,
        max_iterations: iterations,
        k_vmax: c.k_vmax,
        time_cost: c.time_cost,
        decoder,
        ..PsoConfig::benchmark()
    };
    Ok((cfg, mode))
}

/// Runs the optimizer. A null `config` uses [`rwpso_config_default`].
///
/// # Safety
/// `instance` must be a live handle, `config` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn rwpso_solve(
    instance: *const RwpsoInstance,
    config: *const RwpsoConfig,
    out: *mut *mut RwpsoResult,
) -> RwpsoStatus {
    guarded(|| {
        let Some(inst) = instance.as_ref() else {
            return fail(RwpsoStatus::NullPointer, "instance is null");
        };
        if out.is_null() {
            return fail(RwpsoStatus::NullPointer, "out is null");
        }
        let c = config.as_ref().copied().unwrap_or_else(|| rwpso_config_default());
        let (cfg, mode) = match to_pso(&inst.inner, &c) {
            Ok(v) => v,
            Err(message) => return fail(RwpsoStatus::Config, message),
        };
        let swarm = match Swarm::new(&inst.inner, &cfg, mode) {
            Ok(s) => s,
            Err(e) => return fail(RwpsoStatus::Config, e.to_string()),
        };
        let run = swarm.run();
        let routes = run.best_plan.stops();
        *out = Box::into_raw(Box::new(RwpsoResult { run, routes }));
        RwpsoStatus::Ok
    })
}

/// # Safety
/// `result` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rwpso_result_free(result: *mut RwpsoResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rwpso_result_vehicles(result: *const RwpsoResult) -> usize {
    result.as_ref().map_or(0, |r| r.run.nv)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rwpso_result_distance(result: *const RwpsoResult) -> f64 {
    result.as_ref().map_or(0.0, |r| r.run.td)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rwpso_result_cost(result: *const RwpsoResult) -> f64 {
    result.as_ref().map_or(0.0, |r| r.run.cost)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rwpso_result_route_count(result: *const RwpsoResult) -> usize {
    result.as_ref().map_or(0, |r| r.routes.len())
}

/// Borrows the customer ids of route `index`. The array lives as long as
/// `result`.
///
/// # Safety
/// `result` must be a live handle; `stops` and `len` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rwpso_result_route(
    result: *const RwpsoResult,
    index: usize,
    stops: *mut *const usize,
    len: *mut usize,
) -> RwpsoStatus {
    guarded(|| {
        let Some(r) = result.as_ref() else {
            return fail(RwpsoStatus::NullPointer, "result is null");
        };
        if stops.is_null() || len.is_null() {
            return fail(RwpsoStatus::NullPointer, "output pointer is null");
        }
        let Some(route) = r.routes.get(index) else {
            return fail(RwpsoStatus::Config, format!("route index {index} out of range 0..{}", r.routes.len()));
        };
        *stops = route.as_ptr();
        *len = route.len();
        RwpsoStatus::Ok
    })
}

/// The run as a JSON solution document, or null on failure. Release with
/// [`rwpso_string_free`].
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rwpso_result_to_json(result: *const RwpsoResult) -> *mut c_char {
    let Some(r) = result.as_ref() else {
        set_error("result is null");
        return ptr::null_mut();
    };
    match CString::new(SolutionDump::from_run(&r.run).to_json()) {
        Ok(s) => s.into_raw(),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn rwpso_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks a JSON solution document against `instance`. On success writes
/// the vehicle count and total distance when the pointers are non-null.
///
/// # Safety
/// `instance` must be a live handle and `solution_json` a nul-terminated
/// string; `nv` and `td` may be null.
#[no_mangle]
pub unsafe extern "C" fn rwpso_validate(
    instance: *const RwpsoInstance,
    solution_json: *const c_char,
    nv: *mut usize,
    td: *mut f64,
) -> RwpsoStatus {
    guarded(|| {
        let Some(inst) = instance.as_ref() else {
            return fail(RwpsoStatus::NullPointer, "instance is null");
        };
        let text = match read_str(solution_json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let dump = match SolutionDump::from_json(text) {
            Ok(d) => d,
            Err(e) => return fail(RwpsoStatus::Parse, e.to_string()),
        };
        let routes = dump.route_stops();
        if let Some(v) = validate(&inst.inner, &routes).first() {
            return fail(RwpsoStatus::Infeasible, v.to_string());
        }
        match evaluate(&inst.inner, &routes, &CostWeights::default()) {
            Ok(plan) => {
                if let Some(nv) = nv.as_mut() {
                    *nv = plan.nv;
                }
                if let Some(td) = td.as_mut() {
                    *td = plan.td;
                }
                RwpsoStatus::Ok
            }
            Err(e) => fail(RwpsoStatus::Infeasible, e.to_string()),
        }
    })
}
