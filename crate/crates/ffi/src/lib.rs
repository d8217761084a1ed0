//! C ABI over the action-minimization core: opaque handles, status codes,
//! and a flat report struct. Every constructor has a paired `_free`; every
//! function is null-safe and reports failures through a status code plus a
//! thread-local message retrievable with [`het_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heteroclinic::coefficient::Coefficient;
use heteroclinic::potential::{modify, ModifiedPotential, Potential};
use heteroclinic::solver::{self, Acceleration, MinimizeResult, SolveConfig};
use heteroclinic::trajectory::Grid;
use heteroclinic::Error;

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HetStatus {
    HetOk = 0,
    /// A required pointer argument was null.
    HetNullPointer = 1,
    /// Arguments were structurally invalid (bad name, bad grid, bad option).
    HetInvalidArgument = 2,
    /// An input file or string failed to parse.
    HetParseError = 3,
    /// The computation produced a non-finite value and aborted.
    HetNonFinite = 4,
    /// A linear system in the dual-norm evaluation lost its pivots.
    HetSingularSystem = 5,
    /// File system failure.
    HetIoError = 6,
    /// An internal invariant failed; the library caught the panic.
    HetPanic = 7,
}

/// Opaque handle: double-well potential with its quadratic extension.
pub struct HetPotential {
    inner: ModifiedPotential,
}

/// Opaque handle: time-dependence coefficient a(·).
pub struct HetCoefficient {
    inner: Coefficient,
}

/// Opaque handle: one minimization outcome (path plus diagnostics).
pub struct HetSolveResult {
    inner: MinimizeResult,
    times: Vec<f64>,
}

/// Descent options; get defaults from [`het_solve_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HetSolveOptions {
    pub max_iters: u64,
    pub tol_grad_dual: f64,
    pub tol_step: f64,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    /// 0 = steepest descent, 1 = two-point secant steps (default).
    pub acceleration: i32,
}

/// Flat copy of the action diagnostics of a solve, plus run metadata.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HetActionReport {
    pub value: f64,
    pub grad_dual: f64,
    pub grad_l2: f64,
    pub residual_inf: f64,
    pub tail_truncation_bound: f64,
    pub iterations: u64,
    /// 1 when the dual gradient norm reached tolerance, else 0.
    pub converged: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let sanitized = CString::new(msg.replace('\0', "?"))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

fn status_of(err: &Error) -> HetStatus {
    match err {
        Error::InvalidInput(_) => HetStatus::HetInvalidArgument,
        Error::Parse { .. } => HetStatus::HetParseError,
        Error::NonFinite(_) => HetStatus::HetNonFinite,
        Error::Singular(_) => HetStatus::HetSingularSystem,
        Error::Io { .. } => HetStatus::HetIoError,
    }
}

fn fail(err: &Error) -> HetStatus {
    set_error(err.to_string());
    status_of(err)
}

/// Runs a closure, converting panics into `HetPanic` instead of unwinding
/// across the C boundary.
fn guarded(body: impl FnOnce() -> HetStatus) -> HetStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            HetStatus::HetPanic
        }
    }
}

/// Last error message for this thread as a NUL-terminated string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn het_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates the default double-well potential (1−x²)²/4 with a quadratic
/// extension of collar width `delta` outside |x| = 1 + delta.
///
/// # Safety
/// `out` must be a valid pointer to a `HetPotential*` slot. On success it
/// receives an owned handle that must be released with
/// [`het_potential_free`].
#[no_mangle]
pub unsafe extern "C" fn het_potential_quartic(
    delta: f64,
    out: *mut *mut HetPotential,
) -> HetStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null".into());
            return HetStatus::HetNullPointer;
        }
        match modify(Potential::quartic(), delta) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(HetPotential { inner })) };
                HetStatus::HetOk
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a potential handle. Null is a no-op.
///
/// # Safety
/// `p` must be null or a pointer previously returned by a potential
/// constructor and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn het_potential_free(p: *mut HetPotential) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Creates a standard coefficient from its family name, e.g. "const(1.5)",
/// "rabinowitz_gauss", "periodic_sin", "asym_periodic", "coercive_quad(2)".
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid slot; on
/// success the handle must be released with [`het_coefficient_free`].
#[no_mangle]
pub unsafe extern "C" fn het_coefficient_standard(
    name: *const c_char,
    out: *mut *mut HetCoefficient,
) -> HetStatus {
    guarded(|| {
        if name.is_null() || out.is_null() {
            set_error("name or out pointer is null".into());
            return HetStatus::HetNullPointer;
        }
        let name = match unsafe { CStr::from_ptr(name) }.to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("coefficient name is not valid UTF-8".into());
                return HetStatus::HetInvalidArgument;
            }
        };
        match Coefficient::make_standard(name) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(HetCoefficient { inner })) };
                HetStatus::HetOk
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a coefficient handle. Null is a no-op.
///
/// # Safety
/// `c` must be null or an unfreed pointer from a coefficient constructor.
#[no_mangle]
pub unsafe extern "C" fn het_coefficient_free(c: *mut HetCoefficient) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

/// The documented default solve options.
#[no_mangle]
pub extern "C" fn het_solve_options_default() -> HetSolveOptions {
    let d = SolveConfig::default();
    HetSolveOptions {
        max_iters: d.max_iters as u64,
        tol_grad_dual: d.tol_grad_dual,
        tol_step: d.tol_step,
        armijo_c: d.armijo_c,
        backtrack_factor: d.backtrack_factor,
        acceleration: 1,
    }
}

fn config_from(options: &HetSolveOptions) -> Result<SolveConfig, Error> {
    let acceleration = match options.acceleration {
        0 => Acceleration::Steepest,
        1 => Acceleration::SecantTwoPoint,
        other => {
            return Err(Error::InvalidInput(format!(
                "acceleration must be 0 or 1, got {other}"
            )))
        }
    };
    let config = SolveConfig {
        max_iters: options.max_iters as usize,
        tol_grad_dual: options.tol_grad_dual,
        tol_step: options.tol_step,
        armijo_c: options.armijo_c,
        backtrack_factor: options.backtrack_factor,
        acceleration,
    };
    config.validate()?;
    Ok(config)
}

/// Minimizes the action on a symmetric grid of `nodes` points over
/// [−half_width, half_width], starting from the default seed.
///
/// Non-convergence is not an error: inspect `converged` in the report.
///
/// # Safety
/// `pot` and `coef` must be live handles from this library, `options` null
/// (for defaults) or a valid pointer, `out` a valid slot; on success it
/// receives an owned handle to free with [`het_result_free`].
#[no_mangle]
pub unsafe extern "C" fn het_solve(
    pot: *const HetPotential,
    coef: *const HetCoefficient,
    eps: f64,
    half_width: f64,
    nodes: u64,
    options: *const HetSolveOptions,
    out: *mut *mut HetSolveResult,
) -> HetStatus {
    guarded(|| {
        if pot.is_null() || coef.is_null() || out.is_null() {
            set_error("pot, coef, or out pointer is null".into());
            return HetStatus::HetNullPointer;
        }
        let pot = unsafe { &(*pot).inner };
        let coef = unsafe { &(*coef).inner };
        let config = if options.is_null() {
            SolveConfig::default()
        } else {
            match config_from(unsafe { &*options }) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            }
        };
        let run = || -> Result<HetSolveResult, Error> {
            let grid = Grid::new(half_width, nodes as usize)?;
            let seed = solver::default_seed(grid, pot, coef, eps)?;
            let inner = solver::minimize(&seed, pot, coef, eps, &config)?;
            let times = (0..grid.n()).map(|i| grid.t(i)).collect();
            Ok(HetSolveResult { inner, times })
        };
        match run() {
            Ok(result) => {
                unsafe { *out = Box::into_raw(Box::new(result)) };
                HetStatus::HetOk
            }
            Err(e) => fail(&e),
        }
    })
}

/// Copies the action diagnostics of a solve into `report`.
///
/// # Safety
/// `res` must be a live result handle and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn het_result_report(
    res: *const HetSolveResult,
    report: *mut HetActionReport,
) -> HetStatus {
    guarded(|| {
        if res.is_null() || report.is_null() {
            set_error("res or report pointer is null".into());
            return HetStatus::HetNullPointer;
        }
        let r = unsafe { &(*res).inner };
        unsafe {
            *report = HetActionReport {
                value: r.report.value,
                grad_dual: r.report.grad_dual,
                grad_l2: r.report.grad_l2,
                residual_inf: r.report.residual_inf,
                tail_truncation_bound: r.report.tail_truncation_bound,
                iterations: r.iterations as u64,
                converged: i32::from(r.converged),
            };
        }
        HetStatus::HetOk
    })
}

/// Number of grid nodes in a solve result, 0 for null.
///
/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn het_result_node_count(res: *const HetSolveResult) -> u64 {
    if res.is_null() {
        return 0;
    }
    unsafe { (*res).times.len() as u64 }
}

/// Copies node times and values into caller buffers of length `len`, which
/// must equal [`het_result_node_count`]. Either destination may be null to
/// skip it.
///
/// # Safety
/// `res` must be a live result handle; non-null `times`/`values` must point
/// to writable arrays of at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn het_result_copy_values(
    res: *const HetSolveResult,
    times: *mut f64,
    values: *mut f64,
    len: u64,
) -> HetStatus {
    guarded(|| {
        if res.is_null() {
            set_error("res pointer is null".into());
            return HetStatus::HetNullPointer;
        }
        let result = unsafe { &*res };
        if len as usize != result.times.len() {
            set_error(format!(
                "buffer length {len} does not match node count {}",
                result.times.len()
            ));
            return HetStatus::HetInvalidArgument;
        }
        if !times.is_null() {
            unsafe { ptr::copy_nonoverlapping(result.times.as_ptr(), times, result.times.len()) };
        }
        if !values.is_null() {
            let vals = result.inner.path.values();
            unsafe { ptr::copy_nonoverlapping(vals.as_ptr(), values, vals.len()) };
        }
        HetStatus::HetOk
    })
}

/// Releases a solve result. Null is a no-op.
///
/// # Safety
/// `res` must be null or an unfreed pointer from [`het_solve`].
#[no_mangle]
pub unsafe extern "C" fn het_result_free(res: *mut HetSolveResult) {
    if !res.is_null() {
        drop(unsafe { Box::from_raw(res) });
    }
}
