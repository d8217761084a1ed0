//! Independent ground truth for constant-coefficient runs.
//!
//! Along a minimizing connection of an autonomous problem the kinetic and
//! potential densities agree (equipartition, `½ẋ² = a·V(x)`), which turns
//! the action into a position-space integral `B(a) = ∫_{−1}^{1} √(2aV)` and
//! the trajectory into the first-order flow `ẋ = √(2aV(x))`. This module
//! evaluates both without touching the discrete functional: levels by
//! adaptive Simpson quadrature, profiles by fourth-order integration with an
//! analytic exponential tail near the wells, and — for the quartic well —
//! the closed form `x(t) = tanh(√(a/2)·t)`. Solver output is tested against
//! these independent routes.

use crate::potential::Potential;
use crate::tabfile;
use crate::trajectory::{Grid, Path};
use crate::{Error, Result};

/// Hand off from the nonlinear integrator to the linearized exponential
/// approach once the profile is this close to a well. The linearization
/// error scales with the square of this clearance.
const TAIL_CLEARANCE: f64 = 5e-5;
/// Snap to the well exactly once the gap falls below this.
const TAIL_CLAMP: f64 = 1e-12;

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rule(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
        width / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = rule(fa, flm, fm, m - a);
        let right = rule(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, rule(fa, fm, fb, b - a), tol, 52)
}

/// `∫_{x0}^{x1} √(2·a·V(s)) ds` by adaptive quadrature to absolute
/// tolerance `tol`. Tiny negative potential values (tabulated round-off)
/// are flushed to zero.
pub fn level_between(pot: &Potential, a: f64, x0: f64, x1: f64, tol: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!(
            "coefficient value must be positive, got {a}"
        )));
    }
    if !(x0 < x1) || !x0.is_finite() || !x1.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need a nonempty interval, got [{x0}, {x1}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    let f = |s: f64| (2.0 * a * pot.eval(s).max(0.0)).sqrt();
    Ok(simpson(&f, x0, x1, tol))
}

/// The autonomous action level `B(a) = ∫_{−1}^{1} √(2·a·V)` to 1e−9.
pub fn level_quadrature(pot: &Potential, a: f64) -> Result<f64> {
    level_between(pot, a, -1.0, 1.0, 1e-9)
}

/// Closed-form connection of the quartic well under a constant coefficient:
/// `x(t) = tanh(√(a/2)·t)` solves `ẍ = a·x·(x² − 1)` exactly.
#[derive(Clone, Copy, Debug)]
pub struct TanhProfile {
    k: f64,
}

pub fn tanh_exact(a_const: f64) -> Result<TanhProfile> {
    if !(a_const > 0.0) || !a_const.is_finite() {
        return Err(Error::InvalidInput(format!(
            "coefficient value must be positive, got {a_const}"
        )));
    }
    Ok(TanhProfile {
        k: (0.5 * a_const).sqrt(),
    })
}

impl TanhProfile {
    pub fn eval(&self, t: f64) -> f64 {
        (self.k * t).tanh()
    }

    /// Slope parameter √(a/2).
    pub fn slope(&self) -> f64 {
        self.k
    }
}

/// A numerically integrated increasing connection profile sampled uniformly
/// on `[−t_max, t_max]`, with `x(0) = 0`.
#[derive(Clone, Debug)]
pub struct Profile {
    a: f64,
    step: f64,
    half: usize,
    xs: Vec<f64>,
}

/// Integrates `ẋ = √(2·a·V(x))` from `x(0) = 0`, forward toward +1 and
/// backward toward −1, by classical fourth-order steps. Inside the
/// `TAIL_CLEARANCE` collar of a well the flow is replaced by the linearized
/// exponential decay at rate `κ = √(a·V″(±1))` (the nonlinear step would
/// stall there, and the linearization error is quadratic in the clearance);
/// gaps below `TAIL_CLAMP` snap to the well exactly.
pub fn profile_integrate(pot: &Potential, a_const: f64, t_max: f64, step: f64) -> Result<Profile> {
    if !(a_const > 0.0) || !a_const.is_finite() {
        return Err(Error::InvalidInput(format!(
            "coefficient value must be positive, got {a_const}"
        )));
    }
    if !(step > 0.0) || !step.is_finite() || !(t_max >= step) || !t_max.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need 0 < step <= t_max, got step = {step}, t_max = {t_max}"
        )));
    }
    let half = (t_max / step).ceil() as usize;
    if half > 20_000_000 {
        return Err(Error::InvalidInput(format!(
            "profile would need {half} samples per side; coarsen the step"
        )));
    }
    let kp = a_const * pot.second_deriv(1.0);
    let km = a_const * pot.second_deriv(-1.0);
    if !(kp > 0.0) || !(km > 0.0) {
        return Err(Error::InvalidInput(
            "potential needs positive curvature at both wells".to_string(),
        ));
    }
    let (kappa_plus, kappa_minus) = (kp.sqrt(), km.sqrt());

    let f = |x: f64| -> Result<f64> {
        let v = pot.eval(x);
        if v < -1e-12 {
            return Err(Error::InvalidInput(format!(
                "potential is negative at x = {x}: {v}"
            )));
        }
        Ok((2.0 * a_const * v.max(0.0)).sqrt())
    };
    let rk4 = |x: f64, dt: f64| -> Result<f64> {
        let k1 = f(x)?;
        let k2 = f(x + 0.5 * dt * k1)?;
        let k3 = f(x + 0.5 * dt * k2)?;
        let k4 = f(x + dt * k3)?;
        Ok(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    };

    // One side of the profile: gap-to-well values, RK4 until the clearance,
    // then the analytic exponential tail.
    let integrate_side = |dt: f64, well: f64, kappa: f64| -> Result<Vec<f64>> {
        let mut out = vec![0.0f64; half + 1];
        let mut j = 0usize;
        while j < half {
            let x = out[j];
            let gap = (well - x).abs();
            if gap < TAIL_CLEARANCE {
                for (off, o) in out[j + 1..].iter_mut().enumerate() {
                    let decayed = gap * (-kappa * step * (off + 1) as f64).exp();
                    *o = if decayed < TAIL_CLAMP {
                        well
                    } else {
                        well - decayed * well.signum()
                    };
                }
                break;
            }
            out[j + 1] = rk4(x, dt)?;
            j += 1;
        }
        Ok(out)
    };

    let fwd = integrate_side(step, 1.0, kappa_plus)?;
    let bwd = integrate_side(-step, -1.0, kappa_minus)?;

    let n = 2 * half + 1;
    let mut xs = vec![0.0f64; n];
    for i in 0..n {
        xs[i] = if i < half {
            bwd[half - i]
        } else {
            fwd[i - half]
        };
    }
    for i in 0..n - 1 {
        if xs[i + 1] < xs[i] {
            return Err(Error::NonFinite(format!(
                "profile lost monotonicity near t = {}",
                (i as f64 - half as f64) * step
            )));
        }
    }
    Ok(Profile {
        a: a_const,
        step,
        half,
        xs,
    })
}

impl Profile {
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn a_const(&self) -> f64 {
        self.a
    }

    pub fn t_max(&self) -> f64 {
        self.half as f64 * self.step
    }

    /// Sample time of index `i`.
    pub fn t(&self, i: usize) -> f64 {
        (i as f64 - self.half as f64) * self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.xs
    }

    /// Value at time `t`: the stored sample when `t` lands on the sample
    /// lattice (within 1e−6 steps), linear interpolation between neighbours
    /// otherwise, and the end value beyond the integrated range.
    pub fn sample_at(&self, t: f64) -> f64 {
        let u = t / self.step + self.half as f64;
        let last = (self.xs.len() - 1) as f64;
        if u <= 0.0 {
            return self.xs[0];
        }
        if u >= last {
            return *self.xs.last().unwrap();
        }
        let j = u.round();
        if (u - j).abs() < 1e-6 {
            return self.xs[j as usize];
        }
        let i = u.floor() as usize;
        let w = u - i as f64;
        self.xs[i] * (1.0 - w) + self.xs[i + 1] * w
    }

    /// Resamples onto a grid as a clamped [`Path`] (for direct diffing with
    /// solver output). The grid must not extend beyond the integrated range.
    pub fn to_path(&self, grid: Grid) -> Result<Path> {
        if grid.half_width() > self.t_max() + 1e-9 {
            return Err(Error::InvalidInput(format!(
                "grid spans {} but the profile only covers {}",
                grid.half_width(),
                self.t_max()
            )));
        }
        let mut values: Vec<f64> = (0..grid.n()).map(|i| self.sample_at(grid.t(i))).collect();
        values[0] = -1.0;
        let n = values.len();
        values[n - 1] = 1.0;
        Path::new(grid, values)
    }

    /// Exports `(t, x)` rows in the same two-column format as path files.
    pub fn write_to(&self, path: &std::path::Path) -> Result<()> {
        let rows = (0..self.n()).map(|i| (self.t(i), self.xs[i]));
        tabfile::write_two_column(path, rows)
    }
}

/// Max deviation from the first integral `½ẋ² = a·V(x)` along the profile,
/// with `ẋ` reconstructed by a fourth-order five-point stencil so the
/// reported number reflects integration drift, not differencing error.
pub fn equipartition_residual(profile: &Profile, pot: &Potential) -> f64 {
    let xs = &profile.xs;
    let n = xs.len();
    if n < 5 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for i in 2..n - 2 {
        let d = (-xs[i + 2] + 8.0 * xs[i + 1] - 8.0 * xs[i - 1] + xs[i - 2])
            / (12.0 * profile.step);
        let r = (0.5 * d * d - profile.a * pot.eval(xs[i]).max(0.0)).abs();
        worst = worst.max(r);
    }
    worst
}

/// Bundled ground truth for one constant coefficient value.
#[derive(Clone, Debug)]
pub struct AutonomousOracle {
    pub a_const: f64,
    pub level: f64,
    pub profile: Profile,
}

impl AutonomousOracle {
    pub fn new(pot: &Potential, a_const: f64, t_max: f64, step: f64) -> Result<Self> {
        Ok(AutonomousOracle {
            a_const,
            level: level_quadrature(pot, a_const)?,
            profile: profile_integrate(pot, a_const, t_max, step)?,
        })
    }
}
