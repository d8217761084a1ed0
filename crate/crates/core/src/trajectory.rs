//! Discrete trajectories: uniform grids over [−T, T], clamped paths, seeds,
//! and the membership diagnostics (tail masses, transition interval,
//! coercivity sup-bound) used to certify candidate connecting orbits.
//!
//! Grid nodes are `t_i = (i − m)·h` with `m = (N−1)/2`, so negation symmetry
//! `t_{m+j} = −t_{m−j}` holds bitwise and symmetric constructions stay
//! symmetric in floating point. A [`Path`] owns one value per node with the
//! endpoints clamped to exactly −1 and +1; it is the finite stand-in for a
//! trajectory connecting the two wells.

use std::path::Path as FsPath;

use serde::Serialize;

use crate::coefficient::Coefficient;
use crate::potential::ModifiedPotential;
use crate::tabfile;
use crate::{Error, Result};

/// Uniform symmetric grid: `N` nodes (odd), spacing `h`, centered at 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    h: f64,
    m: usize,
}

impl Grid {
    /// Builds the grid with `node_count` nodes spanning `[-T, T]`,
    /// `h = 2T/(node_count − 1)`. `node_count` must be odd and ≥ 3.
    pub fn new(half_width: f64, node_count: usize) -> Result<Grid> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        if node_count < 3 || node_count.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "node count must be odd and at least 3, got {node_count}"
            )));
        }
        let h = 2.0 * half_width / (node_count - 1) as f64;
        Ok(Grid {
            n: node_count,
            h,
            m: (node_count - 1) / 2,
        })
    }

    /// Builds a grid directly from spacing (used when reading path files).
    pub(crate) fn from_spacing(h: f64, node_count: usize) -> Result<Grid> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid spacing must be positive, got {h}"
            )));
        }
        if node_count < 3 || node_count.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "node count must be odd and at least 3, got {node_count}"
            )));
        }
        Ok(Grid {
            n: node_count,
            h,
            m: (node_count - 1) / 2,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Realized half-width `m·h` (equals the requested T up to one rounding).
    pub fn half_width(&self) -> f64 {
        self.m as f64 * self.h
    }

    /// Node time `t_i = (i − m)·h`; exact negation symmetry about the middle.
    pub fn t(&self, i: usize) -> f64 {
        (i as f64 - self.m as f64) * self.h
    }

    pub(crate) fn mid(&self) -> usize {
        self.m
    }
}

/// A trajectory sampled on a [`Grid`] with endpoints clamped to −1 and +1.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub(crate) grid: Grid,
    pub(crate) values: Vec<f64>,
}

impl Path {
    /// Wraps node values after validating length, finiteness and clamps.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Path> {
        if values.len() != grid.n() {
            return Err(Error::InvalidInput(format!(
                "expected {} node values, got {}",
                grid.n(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("path value {bad}")));
        }
        if values[0] != -1.0 || *values.last().unwrap() != 1.0 {
            return Err(Error::InvalidInput(format!(
                "endpoints must be clamped to -1 and +1, got {} and {}",
                values[0],
                values.last().unwrap()
            )));
        }
        Ok(Path { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest absolute value over all nodes.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// The reflected trajectory `x̃(t) = −x(−t)`, which swaps the roles of
    /// the two wells while keeping the clamps.
    pub fn reflected(&self) -> Path {
        let values = self.values.iter().rev().map(|v| -v).collect();
        Path {
            grid: self.grid,
            values,
        }
    }

    /// Writes `(t_i, x_i)` rows in full-precision scientific notation; the
    /// companion reader reproduces the values bit for bit.
    pub fn write_to(&self, path: &FsPath) -> Result<()> {
        let rows = (0..self.grid.n()).map(|i| (self.grid.t(i), self.values[i]));
        tabfile::write_two_column(path, rows)
    }

    /// Reads a two-column `(t, x)` file produced by [`Path::write_to`] (or
    /// hand-authored with the same layout) and validates grid structure and
    /// clamps.
    pub fn read_from(path: &FsPath) -> Result<Path> {
        let rows = tabfile::read_two_column(path)?;
        let n = rows.len();
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "{}: path needs an odd node count of at least 3, got {n}",
                path.display()
            )));
        }
        let m = (n - 1) / 2;
        let h = rows[m + 1].1 - rows[m].1;
        let grid = Grid::from_spacing(h, n)?;
        let tol = 1e-9 * h.max(1.0);
        for (i, row) in rows.iter().enumerate() {
            let expect = grid.t(i);
            if (row.1 - expect).abs() > tol {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: row.0,
                    message: format!(
                        "time column breaks the uniform symmetric grid: \
                         got {}, expected {expect}",
                        row.1
                    ),
                });
            }
        }
        Path::new(grid, rows.into_iter().map(|r| r.2).collect())
    }
}

/// Monotone sigmoid seed `tanh(k·(t − center))`, affinely rescaled so the
/// endpoints land exactly on −1 and +1.
pub fn tanh_seed_at(grid: Grid, k: f64, center: f64) -> Result<Path> {
    if !(k > 0.0) || !k.is_finite() || !center.is_finite() {
        return Err(Error::InvalidInput(format!(
            "seed needs finite slope k > 0 and center, got k = {k}, center = {center}"
        )));
    }
    let n = grid.n();
    let u: Vec<f64> = (0..n).map(|i| (k * (grid.t(i) - center)).tanh()).collect();
    let span = u[n - 1] - u[0];
    if !(span > 0.0) {
        return Err(Error::InvalidInput(format!(
            "seed is flat across the window (k = {k}, center = {center})"
        )));
    }
    let mut values: Vec<f64> = u.iter().map(|ui| 2.0 * (ui - u[0]) / span - 1.0).collect();
    values[0] = -1.0;
    values[n - 1] = 1.0;
    Path::new(grid, values)
}

/// [`tanh_seed_at`] centered at t = 0; odd across the middle node up to the
/// endpoint rescaling.
pub fn tanh_seed(grid: Grid, k: f64) -> Result<Path> {
    tanh_seed_at(grid, k, 0.0)
}

/// Half-window and outer-quarter tail masses of a path, unweighted and
/// weighted by the coefficient.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailReport {
    /// ∫ over [−T, 0] of |ẋ|² + (x+1)².
    pub left_h1: f64,
    /// ∫ over [0, T] of |ẋ|² + (x−1)².
    pub right_h1: f64,
    /// Left integral with the zeroth-order term weighted by a(εt).
    pub weighted_left: f64,
    /// Right integral with the zeroth-order term weighted by a(εt).
    pub weighted_right: f64,
    /// ∫ over [−T, −T/2] of |ẋ|² + (x+1)² (outer quarter only).
    pub left_outer_h1: f64,
    /// ∫ over [T/2, T] of |ẋ|² + (x−1)² (outer quarter only).
    pub right_outer_h1: f64,
    /// max |x_i| over the window.
    pub sup_on_window: f64,
}

/// Trapezoid tail masses with forward-difference derivatives. The kinetic
/// term is assigned to cells, the zeroth-order term to nodes with trapezoid
/// end-weights per half-window.
pub fn tail_report(path: &Path, coef: &Coefficient, eps: f64) -> Result<TailReport> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!(
            "time-scale eps must be positive, got {eps}"
        )));
    }
    let g = path.grid;
    let h = g.h();
    let m = g.mid();
    let x = &path.values;

    // Kinetic mass of cells [i0, i1).
    let kinetic = |i0: usize, i1: usize| -> f64 {
        (i0..i1)
            .map(|i| {
                let d = (x[i + 1] - x[i]) / h;
                d * d * h
            })
            .sum()
    };
    // Zeroth-order mass of nodes [i0, i1] around the well at `well`,
    // optionally weighted by the coefficient; trapezoid end-weights.
    let zeroth = |i0: usize, i1: usize, well: f64, weighted: bool| -> f64 {
        (i0..=i1)
            .map(|i| {
                let d = x[i] - well;
                let w = if i == i0 || i == i1 { 0.5 * h } else { h };
                let a = if weighted { coef.eval(eps * g.t(i)) } else { 1.0 };
                a * d * d * w
            })
            .sum()
    };

    let q = m / 2; // node nearest −T/2 from below (outer quarter is [0, q])
    let report = TailReport {
        left_h1: kinetic(0, m) + zeroth(0, m, -1.0, false),
        right_h1: kinetic(m, g.n() - 1) + zeroth(m, g.n() - 1, 1.0, false),
        weighted_left: kinetic(0, m) + zeroth(0, m, -1.0, true),
        weighted_right: kinetic(m, g.n() - 1) + zeroth(m, g.n() - 1, 1.0, true),
        left_outer_h1: kinetic(0, q) + zeroth(0, q, -1.0, false),
        right_outer_h1: kinetic(g.n() - 1 - q, g.n() - 1)
            + zeroth(g.n() - 1 - q, g.n() - 1, 1.0, false),
        sup_on_window: path.sup_abs(),
    };
    Ok(report)
}

/// Where a path performs its transit between the wells.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransitionReport {
    /// Last grid time at or below the lower crossing level.
    pub s: f64,
    /// First grid time from which the path stays at or above the upper level.
    pub t: f64,
    pub i_s: usize,
    pub i_t: usize,
    /// Lower crossing level −1 + margin/2.
    pub level_lower: f64,
    /// Upper crossing level 1 − margin/2.
    pub level_upper: f64,
    /// Path values at the two crossing nodes.
    pub x_at_s: f64,
    pub x_at_t: f64,
    /// Whether any node lies strictly between the two collar levels.
    pub leaves_collars: bool,
    /// Whether the path is non-decreasing between the crossing nodes.
    pub monotone_between: bool,
}

impl TransitionReport {
    pub fn length(&self) -> f64 {
        self.t - self.s
    }
}

/// Locates the transit of `path` across the margin/2 collars of the wells:
/// `s` is the last time at or below −1+margin/2 (after which the path never
/// dips back), `t` the first time from which it stays at or above
/// 1−margin/2. The clamps guarantee both exist and `s < t`. A path that
/// jumps well-to-well within one cell is flagged via `leaves_collars`.
pub fn transition_interval(path: &Path, margin: f64) -> Result<TransitionReport> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::InvalidInput(format!(
            "collar margin must lie in (0, 1), got {margin}"
        )));
    }
    let low = -1.0 + 0.5 * margin;
    let high = 1.0 - 0.5 * margin;
    let x = &path.values;
    let n = x.len();

    // x[0] = −1 ≤ low, so the set is nonempty.
    let i_s = (0..n).rev().find(|&i| x[i] <= low).unwrap();
    // x[n−1] = 1 ≥ high, so the suffix search terminates.
    let mut i_t = n - 1;
    while i_t > 0 && x[i_t - 1] >= high {
        i_t -= 1;
    }
    // i_s < i_t: x[i_s] ≤ low < high, so i_s cannot lie in the suffix.

    let leaves_collars = x.iter().any(|&v| v > low && v < high);
    let monotone_between = (i_s..i_t).all(|i| x[i + 1] >= x[i]);

    Ok(TransitionReport {
        s: path.grid.t(i_s),
        t: path.grid.t(i_t),
        i_s,
        i_t,
        level_lower: low,
        level_upper: high,
        x_at_s: x[i_s],
        x_at_t: x[i_t],
        leaves_collars,
        monotone_between,
    })
}

/// Sup-norm bound for paths of bounded action over a window.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SupBoundReport {
    /// Smallest c ≥ 0 with Ṽ(x) > threshold for every |x| ≥ c.
    pub c_threshold: f64,
    /// The certified bound c + 2√(A·T).
    pub bound: f64,
    /// Measured sup |x_i| of the path.
    pub sup_abs: f64,
    /// Sampled lower bound of the coefficient on the window.
    pub l0: f64,
    /// The potential threshold A/(l0·T).
    pub threshold: f64,
    pub passes: bool,
}

/// Certifies the coercivity sup-bound: any path with action at most
/// `action_bound` must satisfy `max |x_i| ≤ C + 2√(A·T)`, where `C` is found
/// by bisection on the increasing branch of the modified potential beyond
/// the wells. The caller is responsible for `action(path) ≤ action_bound`;
/// this routine only evaluates the bound.
pub fn sup_bound_check(
    path: &Path,
    action_bound: f64,
    pot: &ModifiedPotential,
    coef: &Coefficient,
    eps: f64,
) -> Result<SupBoundReport> {
    if !(action_bound >= 0.0) || !action_bound.is_finite() {
        return Err(Error::InvalidInput(format!(
            "action bound must be non-negative and finite, got {action_bound}"
        )));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!(
            "time-scale eps must be positive, got {eps}"
        )));
    }
    let g = path.grid;
    let t_half = g.half_width();
    let mut l0 = f64::INFINITY;
    for i in 0..g.n() {
        l0 = l0.min(coef.eval(eps * g.t(i)));
    }
    if !(l0 > 0.0) || !l0.is_finite() {
        return Err(Error::InvalidInput(format!(
            "coefficient has no positive lower bound on the window (min = {l0})"
        )));
    }
    let threshold = action_bound / (l0 * t_half);
    let c_threshold = threshold_radius(pot, threshold)?;
    let bound = c_threshold + 2.0 * (action_bound * t_half).sqrt();
    let sup_abs = path.sup_abs();
    Ok(SupBoundReport {
        c_threshold,
        bound,
        sup_abs,
        l0,
        threshold,
        passes: sup_abs <= bound,
    })
}

/// Smallest c with Ṽ(x) > thr for all |x| ≥ c. Beyond the wells Ṽ increases
/// in |x| (the construction checks the derivative sign on the collar and the
/// extension is quadratic), so the crossing on each side is found by
/// bisection on [1, ∞) and the larger side wins.
fn threshold_radius(pot: &ModifiedPotential, thr: f64) -> Result<f64> {
    if !(thr >= 0.0) || !thr.is_finite() {
        return Err(Error::InvalidInput(format!(
            "potential threshold must be non-negative and finite, got {thr}"
        )));
    }
    if thr == 0.0 {
        return Ok(1.0);
    }
    let mut c_max: f64 = 0.0;
    for side in [1.0_f64, -1.0] {
        let f = |r: f64| pot.eval(side * r);
        let mut hi = 2.0 + pot.delta();
        let mut guard = 0;
        while f(hi) <= thr {
            hi *= 2.0;
            guard += 1;
            if guard > 600 {
                return Err(Error::NonFinite(
                    "potential fails to exceed the threshold at any radius".to_string(),
                ));
            }
        }
        let mut lo = 1.0_f64;
        while hi - lo > 1e-12 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if f(mid) <= thr {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        c_max = c_max.max(hi);
    }
    Ok(c_max)
}
