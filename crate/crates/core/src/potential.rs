//! Double-well potentials and their quadratic-growth modification.
//!
//! A [`Potential`] is a C² function `V` with wells of equal depth zero at
//! x = ±1: `V(±1) = 0`, `V > 0` on `(-1, 1)`, and `V''(±1) > 0`. The default
//! instance is the quartic `V(x) = (1 - x²)²/4`; arbitrary potentials can be
//! loaded from uniformly spaced two-column tables.
//!
//! [`modify`] extends `V` outside a collar `[-1-δ, 1+δ]` with the C¹ branch
//! `V(s) + V'(s)(x - s) + (x - s)²`, `s = sign(x)·(1+δ)`, which grows
//! quadratically and keeps `Ṽ'(x)·x > 0` beyond the wells. Minimizers that
//! stay inside the collar never see the extension, so replacing `V` by `Ṽ`
//! is inert along solutions while making the functional coercive against
//! runaway paths.
//!
//! [`well_constants`] measures the quadratic sandwich
//! `c1·(x ∓ 1)² ≤ V(x) ≤ c2·(x ∓ 1)²` on the collars around each well by
//! dense sampling, together with the linearized decay rates
//! `κ_± = sqrt(a·V''(∓1))`.

use std::path::Path as FsPath;

use crate::tabfile;
use crate::{Error, Result};

/// Samples per collar side when extremizing the sandwich ratio.
const RATIO_SAMPLES: usize = 10_001;
/// Samples per side when checking the derivative sign condition in `modify`.
const SIGN_SAMPLES: usize = 256;
/// Tolerated deviation of V(±1) from zero for tabulated potentials.
const WELL_VALUE_TOL: f64 = 1e-8;

/// A double-well potential with wells of depth zero at x = ±1.
#[derive(Clone, Debug)]
pub struct Potential {
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Quartic,
    Tabulated(Table),
}

/// Uniformly sampled potential values; evaluation is linear interpolation
/// inside the table and constant extrapolation outside.
#[derive(Clone, Debug)]
struct Table {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
}

impl Table {
    fn x_end(&self) -> f64 {
        self.x0 + (self.values.len() - 1) as f64 * self.dx
    }

    /// Cell index and interpolation weight for x inside the table.
    fn locate(&self, x: f64) -> (usize, f64) {
        let u = (x - self.x0) / self.dx;
        let i = (u.floor() as usize).min(self.values.len() - 2);
        (i, u - i as f64)
    }

    fn eval(&self, x: f64) -> f64 {
        if x <= self.x0 {
            return self.values[0];
        }
        if x >= self.x_end() {
            return *self.values.last().unwrap();
        }
        let (i, w) = self.locate(x);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    /// `V(x + d) − V(x)` as the integral of the piecewise-constant slope, so
    /// the rounding error scales with the difference, not with `V` itself.
    fn eval_delta(&self, x: f64, d: f64) -> f64 {
        if d == 0.0 {
            return 0.0;
        }
        let x1 = x + d;
        // Same-segment fast path: the length is d itself, never re-rounded
        // through fl(x + d), so sub-ulp moves keep full relative accuracy.
        if x > self.x0 && x < self.x_end() && x1 > self.x0 && x1 < self.x_end() {
            let (i0, _) = self.locate(x);
            let (i1, _) = self.locate(x1);
            if i0 == i1 {
                return (self.values[i0 + 1] - self.values[i0]) / self.dx * d;
            }
        }
        let (lo, hi, sign) = if d > 0.0 { (x, x1, 1.0) } else { (x1, x, -1.0) };
        // Constant extrapolation contributes nothing outside the table.
        let lo = lo.max(self.x0);
        let hi = hi.min(self.x_end());
        if !(hi > lo) {
            return 0.0;
        }
        let (i0, _) = self.locate(lo);
        let (i1, _) = self.locate(hi);
        let slope = |i: usize| (self.values[i + 1] - self.values[i]) / self.dx;
        let total = if i0 == i1 {
            slope(i0) * (hi - lo)
        } else {
            let node = |i: usize| self.x0 + i as f64 * self.dx;
            let mut acc = slope(i0) * (node(i0 + 1) - lo) + slope(i1) * (hi - node(i1));
            for k in i0 + 1..i1 {
                acc += self.values[k + 1] - self.values[k];
            }
            acc
        };
        sign * total
    }

    /// Central difference at interior nodes, one-sided at the ends.
    fn node_deriv(&self, i: usize) -> f64 {
        let n = self.values.len();
        if i == 0 {
            (self.values[1] - self.values[0]) / self.dx
        } else if i == n - 1 {
            (self.values[n - 1] - self.values[n - 2]) / self.dx
        } else {
            (self.values[i + 1] - self.values[i - 1]) / (2.0 * self.dx)
        }
    }

    fn deriv(&self, x: f64) -> f64 {
        if x <= self.x0 || x >= self.x_end() {
            return 0.0; // constant extrapolation
        }
        let (i, w) = self.locate(x);
        self.node_deriv(i) * (1.0 - w) + self.node_deriv(i + 1) * w
    }

    fn node_second(&self, i: usize) -> f64 {
        let n = self.values.len();
        let j = i.clamp(1, n - 2);
        (self.values[j + 1] - 2.0 * self.values[j] + self.values[j - 1]) / (self.dx * self.dx)
    }

    fn second_deriv(&self, x: f64) -> f64 {
        if x <= self.x0 || x >= self.x_end() {
            return 0.0;
        }
        let (i, w) = self.locate(x);
        self.node_second(i) * (1.0 - w) + self.node_second(i + 1) * w
    }
}

impl Potential {
    /// The default quartic double well `V(x) = (1 - x²)²/4`.
    pub fn quartic() -> Self {
        Potential { kind: Kind::Quartic }
    }

    /// Loads a potential from a two-column `(x, V(x))` table with uniform
    /// spacing. See [`Potential::from_samples`] for the validation rules.
    pub fn from_table_file(path: &FsPath) -> Result<Self> {
        let rows = tabfile::read_two_column(path)?;
        let dx = tabfile::uniform_spacing(path, &rows)?;
        let values = rows.iter().map(|r| r.2).collect();
        Potential::from_samples(rows[0].1, dx, values)
    }

    /// Builds a tabulated potential from uniform samples starting at `x0`
    /// with spacing `dx`. The table must cover `[-1, 1]`, vanish at the wells
    /// (within 1e-8), be non-negative, positive strictly between the wells,
    /// and have positive curvature at both wells.
    pub fn from_samples(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bad table geometry: x0 = {x0}, dx = {dx}"
            )));
        }
        if values.len() < 5 {
            return Err(Error::InvalidInput(format!(
                "table needs at least 5 rows, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "table contains non-finite value {bad}"
            )));
        }
        let table = Table { x0, dx, values };
        if table.x0 > -1.0 || table.x_end() < 1.0 {
            return Err(Error::InvalidInput(format!(
                "table [{}, {}] must cover [-1, 1]",
                table.x0,
                table.x_end()
            )));
        }
        if let Some(v) = table.values.iter().find(|v| **v < -1e-12) {
            return Err(Error::InvalidInput(format!(
                "potential must be non-negative, found {v}"
            )));
        }
        for well in [-1.0, 1.0] {
            let v = table.eval(well);
            if v.abs() > WELL_VALUE_TOL {
                return Err(Error::InvalidInput(format!(
                    "potential must vanish at x = {well}, found {v}"
                )));
            }
            if table.second_deriv(well) <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "potential needs positive curvature at x = {well}"
                )));
            }
        }
        // Strict positivity between the wells, away from the quadratic
        // vanishing at the edges.
        let margin = (2.0 * dx).max(0.01);
        let probes = 501;
        for j in 0..probes {
            let x = -1.0 + margin + (2.0 - 2.0 * margin) * j as f64 / (probes - 1) as f64;
            if table.eval(x) <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "potential must be positive strictly between the wells, V({x}) <= 0"
                )));
            }
        }
        Ok(Potential {
            kind: Kind::Tabulated(table),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Quartic => {
                let q = 1.0 - x * x;
                0.25 * q * q
            }
            Kind::Tabulated(t) => t.eval(x),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Quartic => x * (x * x - 1.0),
            Kind::Tabulated(t) => t.deriv(x),
        }
    }

    /// `V(x + d) − V(x)` in cancellation-free form: the absolute rounding
    /// error is proportional to the difference itself, so decreases far below
    /// one ulp of `V(x)` are still resolved. Exactly zero when `d == 0`.
    pub fn eval_delta(&self, x: f64, d: f64) -> f64 {
        match &self.kind {
            Kind::Quartic => {
                // With u = 1 − x² and q = (x+d)² − x² = d·(2x + d):
                // V(x+d) − V(x) = ((u−q)² − u²)/4 = −q·(2u − q)/4.
                let q = d * (2.0 * x + d);
                let u = 1.0 - x * x;
                -0.25 * q * (2.0 * u - q)
            }
            Kind::Tabulated(t) => t.eval_delta(x, d),
        }
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Quartic => 3.0 * x * x - 1.0,
            Kind::Tabulated(t) => t.second_deriv(x),
        }
    }

    /// Stable identifier used in manifests and reports.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Quartic => "quartic_default",
            Kind::Tabulated(_) => "user_tabulated",
        }
    }
}

/// Quadratic-growth extension of a [`Potential`] outside the collar
/// `[-1-δ, 1+δ]`. Inside the collar it equals the base potential exactly.
#[derive(Clone, Debug)]
pub struct ModifiedPotential {
    base: Potential,
    delta: f64,
    /// Seam data (s, V(s), V'(s)) for the positive and negative branch.
    seam_pos: (f64, f64, f64),
    seam_neg: (f64, f64, f64),
}

/// Builds the modified potential `Ṽ`. Rejects `delta` when the base
/// potential's derivative does not point away from the wells somewhere on
/// `(1, 1+δ]` or `[-1-δ, -1)` (sampled), since the extension would then fail
/// to increase monotonically in `|x|`.
pub fn modify(base: Potential, delta: f64) -> Result<ModifiedPotential> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "collar width must be positive, got {delta}"
        )));
    }
    for j in 1..=SIGN_SAMPLES {
        let x = 1.0 + delta * j as f64 / SIGN_SAMPLES as f64;
        let d = base.deriv(x);
        if d <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "derivative sign condition fails on the collar: V'({x}) = {d} <= 0"
            )));
        }
        let d = base.deriv(-x);
        if d >= 0.0 {
            return Err(Error::InvalidInput(format!(
                "derivative sign condition fails on the collar: V'({}) = {d} >= 0",
                -x
            )));
        }
    }
    let s = 1.0 + delta;
    let seam_pos = (s, base.eval(s), base.deriv(s));
    let seam_neg = (-s, base.eval(-s), base.deriv(-s));
    Ok(ModifiedPotential {
        base,
        delta,
        seam_pos,
        seam_neg,
    })
}

impl ModifiedPotential {
    pub fn eval(&self, x: f64) -> f64 {
        if x.abs() <= 1.0 + self.delta {
            return self.base.eval(x);
        }
        let (s, v, dv) = if x > 0.0 { self.seam_pos } else { self.seam_neg };
        let u = x - s;
        v + dv * u + u * u
    }

    pub fn deriv(&self, x: f64) -> f64 {
        if x.abs() <= 1.0 + self.delta {
            return self.base.deriv(x);
        }
        let (s, _, dv) = if x > 0.0 { self.seam_pos } else { self.seam_neg };
        dv + 2.0 * (x - s)
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        if x.abs() <= 1.0 + self.delta {
            return self.base.second_deriv(x);
        }
        2.0
    }

    /// `Ṽ(x + d) − Ṽ(x)` in cancellation-free form (see
    /// [`Potential::eval_delta`]). Splits the move at the seams `±(1+δ)` so
    /// every piece stays on a single branch; the seam values match the base
    /// potential bit-for-bit, so the split telescopes exactly.
    pub fn eval_delta(&self, x: f64, d: f64) -> f64 {
        if d == 0.0 {
            return 0.0;
        }
        let lim = 1.0 + self.delta;
        let x1 = x + d;
        // Pieces in (start, length) form with the final length taken as a
        // remainder of d, never as x1 − start: a length recomputed through
        // fl(x + d) would round a sub-ulp move back to zero.
        let mut acc = 0.0;
        let mut p = x;
        let seams = if d > 0.0 { [-lim, lim] } else { [lim, -lim] };
        for s in seams {
            if (x - s) * (x1 - s) < 0.0 {
                acc += self.branch_delta(p, s - p);
                p = s;
            }
        }
        acc + self.branch_delta(p, d - (p - x))
    }

    /// Difference over a move that stays on one branch (no seam strictly
    /// inside the open segment).
    fn branch_delta(&self, x: f64, d: f64) -> f64 {
        if d == 0.0 {
            return 0.0;
        }
        let lim = 1.0 + self.delta;
        let x1 = x + d;
        // The seam itself belongs to the inner branch (eval uses ≤), so a
        // segment is outer only if some endpoint lies strictly outside.
        if x.max(x1) > lim {
            let (s, _, dv) = self.seam_pos;
            d * (dv + (x - s) + (x1 - s))
        } else if x.min(x1) < -lim {
            let (s, _, dv) = self.seam_neg;
            d * (dv + (x - s) + (x1 - s))
        } else {
            self.base.eval_delta(x, d)
        }
    }

    pub fn base(&self) -> &Potential {
        &self.base
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Quadratic sandwich constants and linearized decay rates near the wells.
#[derive(Clone, Copy, Debug)]
pub struct WellConstants {
    /// Lower sandwich constant: `c1·(x ∓ 1)² ≤ V(x)` on the collars.
    pub c1: f64,
    /// Upper sandwich constant: `V(x) ≤ c2·(x ∓ 1)²` on the collars.
    pub c2: f64,
    /// Collar half-width the constants were measured on.
    pub delta: f64,
    /// Decay rate `sqrt(a·V''(-1))` toward the left well, at `a = 1`.
    pub kappa_minus: f64,
    /// Decay rate `sqrt(a·V''(+1))` toward the right well, at `a = 1`.
    pub kappa_plus: f64,
}

impl WellConstants {
    /// Decay rates for a coefficient value `a`: `κ_±(a) = sqrt(a)·κ_±(1)`.
    pub fn kappas_for(&self, a: f64) -> (f64, f64) {
        (self.kappa_minus * a.sqrt(), self.kappa_plus * a.sqrt())
    }
}

/// Extremizes `V(x)/(x ∓ 1)²` by dense sampling (10⁴ points per collar).
/// At the well itself the ratio is replaced by its limit `V''(±1)/2`.
pub fn well_constants(pot: &Potential, delta: f64) -> Result<WellConstants> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "collar width must be positive, got {delta}"
        )));
    }
    let mut c1 = f64::INFINITY;
    let mut c2 = f64::NEG_INFINITY;
    for well in [-1.0_f64, 1.0] {
        let curv = pot.second_deriv(well);
        if curv <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "potential needs positive curvature at x = {well}, found {curv}"
            )));
        }
        for j in 0..RATIO_SAMPLES {
            let x = well - delta + 2.0 * delta * j as f64 / (RATIO_SAMPLES - 1) as f64;
            let w = x - well;
            let ratio = if w.abs() < 1e-9 * delta {
                0.5 * curv
            } else {
                pot.eval(x) / (w * w)
            };
            if !ratio.is_finite() {
                return Err(Error::NonFinite(format!("sandwich ratio at x = {x}")));
            }
            c1 = c1.min(ratio);
            c2 = c2.max(ratio);
        }
    }
    if c1 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "lower sandwich constant must be positive, got {c1}; shrink the collar"
        )));
    }
    Ok(WellConstants {
        c1,
        c2,
        delta,
        kappa_minus: pot.second_deriv(-1.0).sqrt(),
        kappa_plus: pot.second_deriv(1.0).sqrt(),
    })
}
