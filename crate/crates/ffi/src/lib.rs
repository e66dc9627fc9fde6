//! C interface to the `coalition` crate.
//!
//! Tensors live behind the opaque `CoalitionTensor` handle. Every fallible
//! call returns a `CoalitionStatus` and writes its results through out
//! pointers; on failure `coalition_last_error` describes what went wrong on
//! the calling thread. Strings returned by the library must be released with
//! `coalition_string_free`, tensors with `coalition_tensor_free`.
//!
//! Panics never cross the boundary; they are reported as
//! `COALITION_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use coalition::bench::{self, Family222, OddMan};
use coalition::game::{random_symmetric_tensor, PayoffTensor3, StrategySimplex};
use coalition::guts::{self, GutsPoint};
use coalition::lab::{solve_game, Targets};
use coalition::opt::{solve_maximin, solve_minimax, ConstraintMode, Method, SmoothingSpec, SolverConfig};
use coalition::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoalitionStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotSymmetric = 3,
    Numerical = 4,
    Io = 5,
    Parse = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoalitionSmoothing {
    None = 0,
    LpShift = 1,
    Softmax = 2,
}

/// Solver settings. Obtain defaults from `coalition_solver_options_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CoalitionSolverOptions {
    pub smoothing: CoalitionSmoothing,
    /// `p` for `LpShift`, `epsilon` for `Softmax`; ignored for `None`.
    pub smoothing_param: f64,
    pub restarts: usize,
    pub rng_seed: u64,
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Quasi-Newton when true, projected gradient otherwise.
    pub quasi_newton: bool,
    /// Penalize the simplex constraints instead of projecting.
    pub soft_constraints: bool,
    pub adaptive_smoothing: bool,
}

/// Opaque payoff tensor.
pub struct CoalitionTensor {
    inner: PayoffTensor3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CoalitionStatus {
    match e {
        Error::NotSymmetric { .. } => CoalitionStatus::NotSymmetric,
        Error::NoCrossing | Error::ValueNotSmall { .. } | Error::NonMonotone { .. } | Error::DerivativeSigns { .. } => {
            CoalitionStatus::Numerical
        }
        Error::Io(_) => CoalitionStatus::Io,
        Error::Json(_) | Error::Csv(_) => CoalitionStatus::Parse,
        _ => CoalitionStatus::InvalidArgument,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Core(Error::Json(e))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CoalitionStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CoalitionStatus::Ok
        }
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("null pointer: {name}"));
            CoalitionStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CoalitionStatus::Panic
        }
    }
}

unsafe fn tensor_ref<'a>(t: *const CoalitionTensor) -> Result<&'a PayoffTensor3, Fail> {
    t.as_ref().map(|t| &t.inner).ok_or(Fail::Null("tensor"))
}

unsafe fn out_mut<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn c_str<'a>(s: *const c_char, name: &'static str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null(name));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail::Core(Error::InvalidArgument(format!("{name}: {e}"))))
}

unsafe fn strategy(p: *const f64, n: usize, name: &'static str) -> Result<StrategySimplex, Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    Ok(StrategySimplex::new(slice::from_raw_parts(p, n).to_vec())?)
}

unsafe fn write_strategy(out: *mut f64, s: &StrategySimplex) {
    if !out.is_null() {
        ptr::copy_nonoverlapping(s.weights().as_ptr(), out, s.len());
    }
}

fn boxed(t: PayoffTensor3) -> *mut CoalitionTensor {
    Box::into_raw(Box::new(CoalitionTensor { inner: t }))
}

fn owned_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Fail::Core(Error::InvalidArgument(e.to_string())))
}

impl CoalitionSolverOptions {
    fn to_config(self) -> Result<SolverConfig, Fail> {
        let smoothing = match self.smoothing {
            CoalitionSmoothing::None => SmoothingSpec::None,
            CoalitionSmoothing::LpShift => SmoothingSpec::LpShift {
                p: self.smoothing_param,
            },
            CoalitionSmoothing::Softmax => SmoothingSpec::Softmax {
                epsilon: self.smoothing_param,
            },
        };
        let cfg = SolverConfig {
            smoothing,
            constraint_mode: if self.soft_constraints {
                ConstraintMode::Soft
            } else {
                ConstraintMode::Hard
            },
            method: if self.quasi_newton {
                Method::QuasiNewton
            } else {
                Method::ProjectedGradient
            },
            max_iter: self.max_iter,
            grad_tol: self.grad_tol,
            restarts: self.restarts,
            rng_seed: self.rng_seed,
            adaptive_smoothing: self.adaptive_smoothing,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

unsafe fn config_of(opts: *const CoalitionSolverOptions) -> Result<SolverConfig, Fail> {
    match opts.as_ref() {
        Some(o) => o.to_config(),
        None => Ok(SolverConfig::default()),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn coalition_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn coalition_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a tensor. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_free(t: *mut CoalitionTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Builds a tensor from `n^3` row-major entries, index `(i*n + j)*n + k`.
/// With `symmetric` set the symmetry rules are checked and the tensor is
/// marked symmetric zero-sum.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_new(
    n: usize,
    entries: *const f64,
    len: usize,
    symmetric: bool,
    out: *mut *mut CoalitionTensor,
) -> CoalitionStatus {
    guard(|| {
        let out = out_mut(out, "out")?;
        if entries.is_null() {
            return Err(Fail::Null("entries"));
        }
        let e = slice::from_raw_parts(entries, len).to_vec();
        let t = if symmetric {
            PayoffTensor3::symmetric(n, e)?
        } else {
            PayoffTensor3::new(n, e)?
        };
        *out = boxed(t);
        Ok(())
    })
}

/// Random symmetric zero-sum tensor with entries drawn from `[-1, 1]`.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_random(
    n: usize,
    seed: u64,
    out: *mut *mut CoalitionTensor,
) -> CoalitionStatus {
    guard(|| {
        let out = out_mut(out, "out")?;
        *out = boxed(random_symmetric_tensor(n, seed)?);
        Ok(())
    })
}

/// One of `odds-evens-omo`, `odds-evens-omi`, `rps-omo`, `rps-omi`,
/// `family222-omo-like`, `family222-omi-like`; `alpha` is used by the
/// 2x2x2 families only.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_benchmark(
    name: *const c_char,
    alpha: f64,
    out: *mut *mut CoalitionTensor,
) -> CoalitionStatus {
    guard(|| {
        let out = out_mut(out, "out")?;
        let name = c_str(name, "name")?;
        let t = if let Some(v) = name.strip_prefix("odds-evens-") {
            bench::odds_evens(v.parse::<OddMan>()?).0
        } else if let Some(v) = name.strip_prefix("rps-") {
            bench::rps(v.parse::<OddMan>()?).0
        } else if let Some(f) = name.strip_prefix("family222-") {
            bench::family222_tensor(alpha, f.parse::<Family222>()?)?
        } else {
            return Err(Error::InvalidArgument(format!("unknown benchmark {name:?}")).into());
        };
        *out = boxed(t);
        Ok(())
    })
}

/// Guts poker restricted to the thresholds `0, 1/n, ..., 1 - 1/n`.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_guts(n: usize, out: *mut *mut CoalitionTensor) -> CoalitionStatus {
    guard(|| {
        let out = out_mut(out, "out")?;
        *out = boxed(guts::discretize_guts(n)?);
        Ok(())
    })
}

/// Parses a tensor from its JSON form `{"n": .., "entries": [..], "symmetric_zero_sum": ..}`.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_from_json(
    json: *const c_char,
    out: *mut *mut CoalitionTensor,
) -> CoalitionStatus {
    guard(|| {
        let out = out_mut(out, "out")?;
        let t: PayoffTensor3 = serde_json::from_str(c_str(json, "json")?)?;
        *out = boxed(t);
        Ok(())
    })
}

/// JSON form of a tensor; free with `coalition_string_free`.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_to_json(t: *const CoalitionTensor, out: *mut *mut c_char) -> CoalitionStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let out = out_mut(out, "out")?;
        *out = owned_string(serde_json::to_string(t)?)?;
        Ok(())
    })
}

/// Number of pure strategies per player, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn coalition_tensor_n(t: *const CoalitionTensor) -> usize {
    t.as_ref().map_or(0, |t| t.inner.n())
}

/// `sum x_i y_j z_k P_ijk` for mixed strategies of length `n`.
#[no_mangle]
pub unsafe extern "C" fn coalition_expected_payoff(
    t: *const CoalitionTensor,
    x: *const f64,
    y: *const f64,
    z: *const f64,
    out: *mut f64,
) -> CoalitionStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let out = out_mut(out, "out")?;
        let n = t.n();
        let (x, y, z) = (strategy(x, n, "x")?, strategy(y, n, "y")?, strategy(z, n, "z")?);
        *out = t.expected_payoff(&x, &y, &z)?;
        Ok(())
    })
}

/// Largest violation of `P_ijk = P_ikj` and `P_ijk + P_jik + P_kij = 0`.
#[no_mangle]
pub unsafe extern "C" fn coalition_validate_symmetry(
    t: *const CoalitionTensor,
    max_violation: *mut f64,
    pass: *mut bool,
) -> CoalitionStatus {
    guard(|| {
        let r = tensor_ref(t)?.validate_symmetry();
        *out_mut(max_violation, "max_violation")? = r.max_violation;
        *out_mut(pass, "pass")? = r.pass;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn coalition_solver_options_default() -> CoalitionSolverOptions {
    let d = SolverConfig::default();
    let (smoothing, smoothing_param) = match d.smoothing {
        SmoothingSpec::None => (CoalitionSmoothing::None, 0.0),
        SmoothingSpec::LpShift { p } => (CoalitionSmoothing::LpShift, p),
        SmoothingSpec::Softmax { epsilon } => (CoalitionSmoothing::Softmax, epsilon),
    };
    CoalitionSolverOptions {
        smoothing,
        smoothing_param,
        restarts: d.restarts,
        rng_seed: d.rng_seed,
        max_iter: d.max_iter,
        grad_tol: d.grad_tol,
        quasi_newton: d.method == Method::QuasiNewton,
        soft_constraints: d.constraint_mode == ConstraintMode::Soft,
        adaptive_smoothing: d.adaptive_smoothing,
    }
}

/// Synchronous coalition value `V_S`. `x_out` (length `n`, may be NULL)
/// receives player 1's maximin strategy. NULL options mean defaults.
#[no_mangle]
pub unsafe extern "C" fn coalition_solve_sync(
    t: *const CoalitionTensor,
    opts: *const CoalitionSolverOptions,
    value: *mut f64,
    x_out: *mut f64,
) -> CoalitionStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let value = out_mut(value, "value")?;
        let r = solve_maximin(t, &config_of(opts)?)?;
        *value = r.value;
        write_strategy(x_out, &r.strategies[0]);
        Ok(())
    })
}

/// Asynchronous coalition value `V_A`. `y_out` and `z_out` (length `n`, may
/// be NULL) receive the coalition members' strategies.
#[no_mangle]
pub unsafe extern "C" fn coalition_solve_async(
    t: *const CoalitionTensor,
    opts: *const CoalitionSolverOptions,
    value: *mut f64,
    y_out: *mut f64,
    z_out: *mut f64,
) -> CoalitionStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let value = out_mut(value, "value")?;
        let r = solve_minimax(t, &config_of(opts)?)?;
        *value = r.value;
        write_strategy(y_out, &r.strategies[0]);
        write_strategy(z_out, &r.strategies[1]);
        Ok(())
    })
}

/// Full value report as JSON. `config_json` is a solver configuration
/// object; NULL or `"{}"` selects the defaults.
#[no_mangle]
pub unsafe extern "C" fn coalition_solve_json(
    t: *const CoalitionTensor,
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> CoalitionStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let out = out_mut(out, "out")?;
        let cfg: SolverConfig = if config_json.is_null() {
            SolverConfig::default()
        } else {
            serde_json::from_str(c_str(config_json, "config_json")?)?
        };
        let report = solve_game(t, &Targets::default(), &cfg)?;
        *out = owned_string(serde_json::to_string(&report)?)?;
        Ok(())
    })
}

/// Synchronous value `T(V)` of continuous Guts with continuation value `v`,
/// and player 1's optimal threshold.
#[no_mangle]
pub unsafe extern "C" fn coalition_guts_sync_value(v: f64, value: *mut f64, p1: *mut f64) -> CoalitionStatus {
    guard(|| {
        let value = out_mut(value, "value")?;
        let r = guts::sync_value(v)?;
        *value = r.value;
        if let Some(p) = p1.as_mut() {
            *p = r.p1;
        }
        Ok(())
    })
}

/// Player 1's one-round expected return in continuous Guts.
#[no_mangle]
pub unsafe extern "C" fn coalition_guts_alpha(p1: f64, p2: f64, p3: f64, out: *mut f64) -> CoalitionStatus {
    guard(|| {
        let out = out_mut(out, "out")?;
        *out = guts::alpha(GutsPoint::new(p1, p2, p3)?);
        Ok(())
    })
}
