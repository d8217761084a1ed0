//! The discrete action functional, its exact gradient, the dual stationarity
//! norm, and the interior ODE residual.
//!
//! For a path `x` on a grid with spacing `h`, the action is
//!
//! ```text
//! J = Σ_cells ½·((x_{i+1} − x_i)/h)²·h  +  Σ_nodes w_i·a(ε t_i)·Ṽ(x_i)
//! ```
//!
//! with trapezoid weights `w_i` (`h` inside, `h/2` at the clamped ends, where
//! `Ṽ(±1) = 0` anyway). The gradient returned here is the exact derivative of
//! this discrete `J` with respect to the interior node values — no separate
//! discretization of the continuum derivative — so a stationary point of the
//! discrete problem satisfies the central-difference equation
//! `(x_{i−1} − 2x_i + x_{i+1})/h² = a(ε t_i)·Ṽ′(x_i)` identically.
//!
//! Stationarity is measured in the dual norm `‖g‖_* = √(gᵀ M⁻¹ g)`, where `M`
//! is the tridiagonal interior H¹ matrix (stiffness plus trapezoid mass) —
//! the discrete counterpart of testing the derivative against unit-H¹
//! directions. `M` is constant tridiagonal and solved by one Thomas sweep.

use serde::Serialize;

use crate::coefficient::Coefficient;
use crate::potential::{well_constants, ModifiedPotential};
use crate::trajectory::{Grid, Path};
use crate::{Error, Result};

/// Scalar diagnostics of one path under one coefficient.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ActionReport {
    /// The discrete action J.
    pub value: f64,
    /// Dual (H¹-inverse) norm of the discrete gradient.
    pub grad_dual: f64,
    /// Euclidean norm of the discrete gradient.
    pub grad_l2: f64,
    /// Max interior |ẍ_i − a(εt_i)·Ṽ′(x_i)| by central differences.
    pub residual_inf: f64,
    /// 2·(c2/κ)·e^(−2κT): size of the action mass ignored by truncating the
    /// time window, from the quadratic well bounds and slowest decay rate.
    pub tail_truncation_bound: f64,
}

/// Coefficient values at the grid nodes, `a(ε t_i)`, validated finite.
pub(crate) fn coefficient_nodes(grid: Grid, coef: &Coefficient, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!(
            "time-scale eps must be positive and finite, got {eps}"
        )));
    }
    let mut a = Vec::with_capacity(grid.n());
    for i in 0..grid.n() {
        let v = coef.eval(eps * grid.t(i));
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::NonFinite(format!(
                "coefficient value {v} at t = {}",
                grid.t(i)
            )));
        }
        a.push(v);
    }
    Ok(a)
}

/// Error-free sum of two floats: `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let e = (a - (s - bv)) + (b - bv);
    (s, e)
}

/// Compensated accumulator: `hi + lo` carries the sum of all added terms to
/// far below one ulp of `hi`. Needed so the line search can certify the
/// genuinely tiny decreases of a nearly stationary action, which would
/// otherwise drown in plain-summation noise over thousands of terms.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Compensated {
    pub(crate) hi: f64,
    pub(crate) lo: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, term: f64) {
        let (s, e) = two_sum(self.hi, term);
        self.hi = s;
        self.lo += e;
    }

    pub(crate) fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// The discrete action of raw node values (clamps not required) as a
/// compensated sum. The hot path for the solver, which owns the
/// precomputed coefficient nodes.
pub(crate) fn action_compensated(
    h: f64,
    x: &[f64],
    a: &[f64],
    pot: &ModifiedPotential,
) -> Compensated {
    let n = x.len();
    let mut sum = Compensated::default();
    for i in 0..n - 1 {
        let d = (x[i + 1] - x[i]) / h;
        sum.add(0.5 * d * d * h);
    }
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        sum.add(w * a[i] * pot.eval(x[i]));
    }
    sum
}

/// The discrete action of raw node values (clamps not required).
pub(crate) fn action_raw(h: f64, x: &[f64], a: &[f64], pot: &ModifiedPotential) -> f64 {
    action_compensated(h, x, a, pot).value()
}

/// `J(x + s·z̄) − J(x)` in difference form, where `z̄` is the interior
/// perturbation `z` zero-extended to the clamped boundary nodes and
/// `dz[i] = (z̄_{i+1} − z̄_i)/h` is its per-cell slope, supplied by the
/// caller.
///
/// Every term is a product carrying a factor of `s·z`, so the rounding error
/// scales with the decrease itself rather than with the O(1) terms of `J`.
/// A plain `J(trial) − J(x)` loses certifiable decreases once they fall
/// below the summation noise floor; this form resolves them at any size.
pub(crate) fn action_delta(
    h: f64,
    x: &[f64],
    z: &[f64],
    dz: &[f64],
    s: f64,
    a: &[f64],
    pot: &ModifiedPotential,
) -> Compensated {
    let n = x.len();
    debug_assert_eq!(z.len(), n - 2);
    debug_assert_eq!(dz.len(), n - 1);
    let mut sum = Compensated::default();
    // Kinetic cells: ½h·((d + δd)² − d²) = ½h·δd·(2d + δd).
    for i in 0..n - 1 {
        if dz[i] != 0.0 {
            let d = (x[i + 1] - x[i]) / h;
            let dd = s * dz[i];
            sum.add(0.5 * h * dd * (2.0 * d + dd));
        }
    }
    // Interior potential nodes (boundary nodes do not move).
    for i in 1..n - 1 {
        let dx = s * z[i - 1];
        if dx != 0.0 {
            sum.add(h * a[i] * pot.eval_delta(x[i], dx));
        }
    }
    sum
}

/// Exact derivative of the discrete action with respect to each interior
/// node value; `out` has length n − 2.
pub(crate) fn gradient_raw(h: f64, x: &[f64], a: &[f64], pot: &ModifiedPotential, out: &mut [f64]) {
    debug_assert_eq!(out.len(), x.len() - 2);
    for (j, g) in out.iter_mut().enumerate() {
        let i = j + 1;
        *g = (2.0 * x[i] - x[i - 1] - x[i + 1]) / h + h * a[i] * pot.deriv(x[i]);
    }
}

fn residual_raw(h: f64, x: &[f64], a: &[f64], pot: &ModifiedPotential) -> f64 {
    let mut worst = 0.0_f64;
    for i in 1..x.len() - 1 {
        let second = (x[i - 1] - 2.0 * x[i] + x[i + 1]) / (h * h);
        worst = worst.max((second - a[i] * pot.deriv(x[i])).abs());
    }
    worst
}

/// The discrete action of a clamped path.
pub fn action(path: &Path, pot: &ModifiedPotential, coef: &Coefficient, eps: f64) -> Result<f64> {
    let a = coefficient_nodes(path.grid(), coef, eps)?;
    Ok(action_raw(path.grid().h(), path.values(), &a, pot))
}

/// The discrete action of arbitrary node values on a grid — a diagnostic
/// for unclamped probes (e.g. a path resting in one well has action 0).
pub fn action_of_values(
    grid: Grid,
    values: &[f64],
    pot: &ModifiedPotential,
    coef: &Coefficient,
    eps: f64,
) -> Result<f64> {
    if values.len() != grid.n() {
        return Err(Error::InvalidInput(format!(
            "expected {} node values, got {}",
            grid.n(),
            values.len()
        )));
    }
    let a = coefficient_nodes(grid, coef, eps)?;
    Ok(action_raw(grid.h(), values, &a, pot))
}

/// Exact gradient of the discrete action over interior nodes (length n − 2).
pub fn gradient(
    path: &Path,
    pot: &ModifiedPotential,
    coef: &Coefficient,
    eps: f64,
) -> Result<Vec<f64>> {
    let a = coefficient_nodes(path.grid(), coef, eps)?;
    let mut g = vec![0.0; path.grid().n() - 2];
    gradient_raw(path.grid().h(), path.values(), &a, pot, &mut g);
    Ok(g)
}

/// Prefactored solver for `M = tridiag(−1/h, 2/h + h, −1/h)` on interior
/// nodes — the Riesz map of the zero-boundary H¹ inner product on the grid.
/// Factor once per grid, then each `solve` is two O(n) substitution sweeps.
pub(crate) struct RieszMap {
    e: f64,
    /// Thomas multipliers e/denom_i.
    cp: Vec<f64>,
    /// Forward-elimination pivots denom_i.
    denoms: Vec<f64>,
}

impl RieszMap {
    pub(crate) fn new(grid: Grid) -> Result<Self> {
        let len = grid.n() - 2;
        let h = grid.h();
        let d = 2.0 / h + h;
        let e = -1.0 / h;
        let mut cp = vec![0.0; len];
        let mut denoms = vec![0.0; len];
        let mut denom = d;
        for i in 0..len {
            if i > 0 {
                denom = d - e * cp[i - 1];
            }
            if denom.abs() < 1e-300 {
                return Err(Error::Singular(
                    "tridiagonal pivot vanished in the dual-norm solve".to_string(),
                ));
            }
            cp[i] = e / denom;
            denoms[i] = denom;
        }
        Ok(RieszMap { e, cp, denoms })
    }

    /// Solves `M y = g`, writing into `y` (resized to match).
    pub(crate) fn solve(&self, g: &[f64], y: &mut Vec<f64>) {
        let len = self.cp.len();
        debug_assert_eq!(g.len(), len);
        y.resize(len, 0.0);
        if len == 0 {
            return;
        }
        y[0] = g[0] / self.denoms[0];
        for i in 1..len {
            y[i] = (g[i] - self.e * y[i - 1]) / self.denoms[i];
        }
        for i in (0..len - 1).rev() {
            y[i] -= self.cp[i] * y[i + 1];
        }
    }
}

/// `√(gᵀ M⁻¹ g)` with `M = tridiag(−1/h, 2/h + h, −1/h)` on interior nodes:
/// the norm of the gradient as a functional on zero-boundary H¹ directions.
pub fn dual_norm(g: &[f64], grid: Grid) -> Result<f64> {
    if g.len() != grid.n() - 2 {
        return Err(Error::InvalidInput(format!(
            "gradient length {} does not match {} interior nodes",
            g.len(),
            grid.n() - 2
        )));
    }
    let map = RieszMap::new(grid)?;
    let mut y = Vec::new();
    map.solve(g, &mut y);
    let quad: f64 = g.iter().zip(&y).map(|(gi, yi)| gi * yi).sum();
    Ok(quad.max(0.0).sqrt())
}

/// Max interior central-difference residual of the connecting-orbit ODE.
pub fn residual_inf(
    path: &Path,
    pot: &ModifiedPotential,
    coef: &Coefficient,
    eps: f64,
) -> Result<f64> {
    let a = coefficient_nodes(path.grid(), coef, eps)?;
    if path.grid().n() < 5 {
        return Err(Error::InvalidInput(
            "residual needs at least 5 nodes".to_string(),
        ));
    }
    Ok(residual_raw(path.grid().h(), path.values(), &a, pot))
}

/// Residual of raw node values — used to measure the truncation order of
/// the stencil on exactly known profiles without endpoint clamping.
pub fn residual_of_values(
    grid: Grid,
    values: &[f64],
    pot: &ModifiedPotential,
    coef: &Coefficient,
    eps: f64,
) -> Result<f64> {
    if values.len() != grid.n() {
        return Err(Error::InvalidInput(format!(
            "expected {} node values, got {}",
            grid.n(),
            values.len()
        )));
    }
    let a = coefficient_nodes(grid, coef, eps)?;
    Ok(residual_raw(grid.h(), values, &a, pot))
}

/// Full scalar diagnostics for one path.
pub fn report(
    path: &Path,
    pot: &ModifiedPotential,
    coef: &Coefficient,
    eps: f64,
) -> Result<ActionReport> {
    let grid = path.grid();
    let a = coefficient_nodes(grid, coef, eps)?;
    let h = grid.h();
    let value = action_raw(h, path.values(), &a, pot);
    let mut g = vec![0.0; grid.n() - 2];
    gradient_raw(h, path.values(), &a, pot, &mut g);
    let grad_dual = dual_norm(&g, grid)?;
    let grad_l2 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let residual_inf = residual_raw(h, path.values(), &a, pot);

    let wc = well_constants(pot.base(), pot.delta())?;
    let a_ref = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let (km, kp) = wc.kappas_for(a_ref);
    let kappa = km.min(kp);
    let t_half = grid.half_width();
    let tail_truncation_bound = 2.0 * (wc.c2 / kappa) * (-2.0 * kappa * t_half).exp();

    Ok(ActionReport {
        value,
        grad_dual,
        grad_l2,
        residual_inf,
        tail_truncation_bound,
    })
}
