//! Time-dependent multipliers `a(t)` and numerical class verification.
//!
//! A [`Coefficient`] is a positive function of time that scales the potential
//! term of the action density. Each carries a [`ClassTag`] describing its
//! qualitative behaviour at infinity — constant, periodic, dipped-at-the-origin
//! ("rabinowitz": the infimum sits at t = 0 strictly below the tail values),
//! asymptotically periodic (approaches a periodic envelope from below),
//! coercive (grows without bound), or merely bounded between two constants.
//!
//! Class membership involves limits at |t| → ∞, which no finite computation
//! can certify; [`verify_class`] instead evaluates declared finite-window
//! proxies — tail minima on a probe band, envelope gaps at probe times,
//! growth ratios — and reports each outcome together with the window and
//! margins it used, so the verdict is exactly as strong as the probe.

use std::f64::consts::PI;
use std::path::Path as FsPath;
use std::sync::Arc;

use serde::Serialize;

use crate::tabfile;
use crate::{Error, Result};

/// Qualitative behaviour of a coefficient, used to decide which finite-window
/// checks apply and which action levels are meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Constant,
    Periodic,
    Rabinowitz,
    AsymptoticallyPeriodic,
    Coercive,
    BoundedGeneric,
}

impl ClassTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Constant => "constant",
            ClassTag::Periodic => "periodic",
            ClassTag::Rabinowitz => "rabinowitz",
            ClassTag::AsymptoticallyPeriodic => "asymptotically_periodic",
            ClassTag::Coercive => "coercive",
            ClassTag::BoundedGeneric => "bounded_generic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "constant" => ClassTag::Constant,
            "periodic" => ClassTag::Periodic,
            "rabinowitz" => ClassTag::Rabinowitz,
            "asymptotically_periodic" => ClassTag::AsymptoticallyPeriodic,
            "coercive" => ClassTag::Coercive,
            "bounded_generic" => ClassTag::BoundedGeneric,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown coefficient class '{other}'"
                )))
            }
        })
    }
}

/// Declared class parameters. All optional: absent values make the dependent
/// checks report failure with an explanatory note instead of erroring.
#[derive(Clone, Debug, Default)]
pub struct ClassParams {
    /// Declared infimum of the coefficient (> 0).
    pub a0: Option<f64>,
    /// Declared limit (or liminf) value at |t| → ∞.
    pub a_inf: Option<f64>,
    /// Declared period of the coefficient or of its envelope.
    pub period: Option<f64>,
    /// Periodic majorant for the asymptotically periodic class.
    pub envelope: Option<Arc<Coefficient>>,
    /// Declared lower bound for the bounded class.
    pub l0: Option<f64>,
    /// Declared upper bound for the bounded class.
    pub l1: Option<f64>,
}

#[derive(Clone, Debug)]
enum CoeffKind {
    Const(f64),
    /// 2 − e^(−t²): dips to 1 at the origin, tends to 2 at infinity.
    RabinowitzGauss,
    /// 2 + sin t.
    PeriodicSin,
    /// 2 + sin t − 1/(1+t²): strictly below the sine envelope, gap → 0.
    AsymPeriodic,
    /// 1 + c·t².
    CoerciveQuad { c: f64 },
    /// Uniform table, linear interpolation inside, constant extrapolation
    /// outside.
    Tabulated {
        t0: f64,
        dt: f64,
        values: Vec<f64>,
    },
}

/// A positive time-dependent multiplier with a class tag and parameters.
#[derive(Clone, Debug)]
pub struct Coefficient {
    kind: CoeffKind,
    class: ClassTag,
    params: ClassParams,
    name: String,
}

impl Coefficient {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidInput(format!(
                "constant coefficient must be positive and finite, got {c}"
            )));
        }
        Ok(Coefficient {
            kind: CoeffKind::Const(c),
            class: ClassTag::Constant,
            params: ClassParams {
                a0: Some(c),
                a_inf: Some(c),
                l0: Some(c),
                l1: Some(c),
                ..Default::default()
            },
            name: format!("const({c})"),
        })
    }

    pub fn rabinowitz_gauss() -> Self {
        Coefficient {
            kind: CoeffKind::RabinowitzGauss,
            class: ClassTag::Rabinowitz,
            params: ClassParams {
                a0: Some(1.0),
                a_inf: Some(2.0),
                l0: Some(1.0),
                l1: Some(2.0),
                ..Default::default()
            },
            name: "rabinowitz_gauss".to_string(),
        }
    }

    pub fn periodic_sin() -> Self {
        Coefficient {
            kind: CoeffKind::PeriodicSin,
            class: ClassTag::Periodic,
            params: ClassParams {
                a0: Some(1.0),
                period: Some(2.0 * PI),
                l0: Some(1.0),
                l1: Some(3.0),
                ..Default::default()
            },
            name: "periodic_sin".to_string(),
        }
    }

    pub fn asym_periodic() -> Self {
        Coefficient {
            kind: CoeffKind::AsymPeriodic,
            class: ClassTag::AsymptoticallyPeriodic,
            params: ClassParams {
                period: Some(2.0 * PI),
                envelope: Some(Arc::new(Coefficient::periodic_sin())),
                l1: Some(3.0),
                ..Default::default()
            },
            name: "asym_periodic".to_string(),
        }
    }

    pub fn coercive_quad(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidInput(format!(
                "coercive stiffness must be positive and finite, got {c}"
            )));
        }
        Ok(Coefficient {
            kind: CoeffKind::CoerciveQuad { c },
            class: ClassTag::Coercive,
            params: ClassParams {
                a0: Some(1.0),
                l0: Some(1.0),
                ..Default::default()
            },
            name: if c == 1.0 {
                "coercive_quad".to_string()
            } else {
                format!("coercive_quad({c})")
            },
        })
    }

    /// Loads a coefficient from a two-column `(t, a(t))` table with uniform
    /// spacing. Values must be positive. Evaluation is linear interpolation
    /// inside the table and constant extrapolation outside; the class tag
    /// defaults to `bounded_generic` with the table extremes as bounds.
    pub fn from_table_file(path: &FsPath) -> Result<Self> {
        let rows = tabfile::read_two_column(path)?;
        let dt = tabfile::uniform_spacing(path, &rows)?;
        let values: Vec<f64> = rows.iter().map(|r| r.2).collect();
        for row in &rows {
            if row.2 <= 0.0 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: row.0,
                    message: format!("coefficient must be positive, got {}", row.2),
                });
            }
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(Coefficient {
            kind: CoeffKind::Tabulated {
                t0: rows[0].1,
                dt,
                values,
            },
            class: ClassTag::BoundedGeneric,
            params: ClassParams {
                a0: Some(lo),
                l0: Some(lo),
                l1: Some(hi),
                ..Default::default()
            },
            name: format!("table({})", path.display()),
        })
    }

    /// Builds a standard instance by name: `const(c)`, `rabinowitz_gauss`,
    /// `periodic_sin`, `asym_periodic`, `coercive_quad`, `coercive_quad(c)`.
    pub fn make_standard(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(arg) = parse_call(name, "const") {
            return Coefficient::constant(parse_number(name, arg)?);
        }
        if let Some(arg) = parse_call(name, "coercive_quad") {
            return Coefficient::coercive_quad(parse_number(name, arg)?);
        }
        match name {
            "rabinowitz_gauss" => Ok(Coefficient::rabinowitz_gauss()),
            "periodic_sin" => Ok(Coefficient::periodic_sin()),
            "asym_periodic" => Ok(Coefficient::asym_periodic()),
            "coercive_quad" => Coefficient::coercive_quad(1.0),
            other => Err(Error::InvalidInput(format!(
                "unknown coefficient '{other}'; expected const(c), rabinowitz_gauss, \
                 periodic_sin, asym_periodic, coercive_quad, or coercive_quad(c)"
            ))),
        }
    }

    /// Overrides the class tag (for tabulated coefficients whose behaviour
    /// the caller knows).
    pub fn with_class_tag(mut self, tag: ClassTag) -> Self {
        self.class = tag;
        self
    }

    /// Declares explicit lower/upper bounds checked by `verify_class`.
    pub fn with_declared_bounds(mut self, l0: f64, l1: f64) -> Result<Self> {
        if !(l0 > 0.0) || !(l1 >= l0) || !l1.is_finite() {
            return Err(Error::InvalidInput(format!(
                "need 0 < l0 <= l1 < inf, got l0 = {l0}, l1 = {l1}"
            )));
        }
        self.params.l0 = Some(l0);
        self.params.l1 = Some(l1);
        Ok(self)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            CoeffKind::Const(c) => *c,
            CoeffKind::RabinowitzGauss => 2.0 - (-t * t).exp(),
            CoeffKind::PeriodicSin => 2.0 + t.sin(),
            CoeffKind::AsymPeriodic => 2.0 + t.sin() - 1.0 / (1.0 + t * t),
            CoeffKind::CoerciveQuad { c } => 1.0 + c * t * t,
            CoeffKind::Tabulated { t0, dt, values } => {
                let end = t0 + (values.len() - 1) as f64 * dt;
                if t <= *t0 {
                    values[0]
                } else if t >= end {
                    *values.last().unwrap()
                } else {
                    let u = (t - t0) / dt;
                    let i = (u.floor() as usize).min(values.len() - 2);
                    let w = u - i as f64;
                    values[i] * (1.0 - w) + values[i + 1] * w
                }
            }
        }
    }

    pub fn class_tag(&self) -> ClassTag {
        self.class
    }

    pub fn params(&self) -> &ClassParams {
        &self.params
    }

    /// Stable identifier used in manifests and reports.
    pub fn name(&self) -> &str {
        &self.name
    }

    fn extrapolation_note(&self) -> Option<String> {
        match &self.kind {
            CoeffKind::Tabulated { t0, dt, values } => {
                let end = t0 + (values.len() - 1) as f64 * dt;
                Some(format!(
                    "linear interpolation on [{t0}, {end}], constant extrapolation outside"
                ))
            }
            _ => None,
        }
    }
}

fn parse_call<'a>(name: &'a str, head: &str) -> Option<&'a str> {
    name.strip_prefix(head)
        .and_then(|rest| rest.strip_prefix('('))
        .and_then(|rest| rest.strip_suffix(')'))
}

fn parse_number(whole: &str, arg: &str) -> Result<f64> {
    arg.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidInput(format!("bad numeric argument in '{whole}'")))
}

/// One finite-window check with its outcome and the numbers behind it.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of sampling a coefficient on `[-window, window]`.
///
/// Every check is evaluated regardless of the declared class (a constant
/// coefficient legitimately passes `bounded_between` and fails
/// `tails_exceed_center`); `class_consistent` states whether the checks the
/// declared class requires all passed.
#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub class_tag: ClassTag,
    pub window: f64,
    pub samples: usize,
    /// Value at t = 0.
    pub a_center: f64,
    pub min_sampled: f64,
    pub max_sampled: f64,
    /// Tail probe band: |t| within these bounds.
    pub probe_band: [f64; 2],
    /// Minimum over the probe band.
    pub probe_min: f64,
    /// Strictness margin used by `tails_exceed_center`.
    pub margin: f64,
    /// How evaluation extends beyond a table, when the coefficient is one.
    pub extrapolation: Option<String>,
    pub conditions: Vec<ConditionCheck>,
    pub class_consistent: bool,
}

/// Names of the checks each class must pass.
fn required_conditions(tag: ClassTag) -> &'static [&'static str] {
    match tag {
        ClassTag::Constant => &["positive_lower_bound", "constant_value"],
        ClassTag::Periodic => &["positive_lower_bound", "periodic_match"],
        ClassTag::Rabinowitz => &[
            "positive_lower_bound",
            "center_attains_infimum",
            "tails_exceed_center",
        ],
        ClassTag::AsymptoticallyPeriodic => &[
            "positive_lower_bound",
            "strictly_below_envelope",
            "approaches_envelope",
        ],
        ClassTag::Coercive => &["positive_lower_bound", "coercive_growth"],
        ClassTag::BoundedGeneric => &["positive_lower_bound", "bounded_between"],
    }
}

/// Samples the coefficient on `[-window, window]` and evaluates every
/// class check on finite-window proxies. Failed checks are report entries,
/// never errors.
pub fn verify_class(coef: &Coefficient, window: f64, samples: usize) -> Result<ClassReport> {
    if !(window > 0.0) || !window.is_finite() {
        return Err(Error::InvalidInput(format!(
            "window half-width must be positive, got {window}"
        )));
    }
    if samples < 100 {
        return Err(Error::InvalidInput(format!(
            "need at least 100 samples, got {samples}"
        )));
    }

    let w = window;
    let probe_lo = 0.5 * w;
    let a_center = coef.eval(0.0);
    let mut min_sampled = f64::INFINITY;
    let mut max_sampled = f64::NEG_INFINITY;
    let mut probe_min = f64::INFINITY;
    for j in 0..samples {
        let t = -w + 2.0 * w * j as f64 / (samples - 1) as f64;
        let v = coef.eval(t);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("coefficient at t = {t}")));
        }
        min_sampled = min_sampled.min(v);
        max_sampled = max_sampled.max(v);
        if t.abs() >= probe_lo {
            probe_min = probe_min.min(v);
        }
    }

    let scale = max_sampled.abs().max(1.0);
    let margin = match (coef.params.a0, coef.params.a_inf) {
        (Some(a0), Some(ai)) if ai > a0 => 0.1 * (ai - a0),
        _ => 0.1 * (probe_min - a_center).max(0.0),
    };

    let mut conditions = Vec::new();

    conditions.push(ConditionCheck {
        name: "positive_lower_bound",
        passed: min_sampled > 0.0,
        detail: format!("min over window = {min_sampled}"),
    });

    conditions.push(ConditionCheck {
        name: "constant_value",
        passed: max_sampled - min_sampled <= 1e-12 * scale,
        detail: format!("spread = {}", max_sampled - min_sampled),
    });

    conditions.push(match coef.params.period {
        Some(p) if p > 0.0 => {
            let mut worst = 0.0_f64;
            for j in 0..samples {
                let t = -w + (2.0 * w - p) * j as f64 / (samples - 1) as f64;
                worst = worst.max((coef.eval(t + p) - coef.eval(t)).abs());
            }
            ConditionCheck {
                name: "periodic_match",
                passed: worst <= 1e-9 * scale,
                detail: format!("max |a(t+p) - a(t)| = {worst} at period {p}"),
            }
        }
        _ => ConditionCheck {
            name: "periodic_match",
            passed: false,
            detail: "no period declared".to_string(),
        },
    });

    conditions.push(ConditionCheck {
        name: "center_attains_infimum",
        passed: min_sampled >= a_center - 1e-9 * scale,
        detail: format!("a(0) = {a_center}, min over window = {min_sampled}"),
    });

    conditions.push(ConditionCheck {
        name: "tails_exceed_center",
        passed: probe_min > a_center + margin,
        detail: format!(
            "min over |t| in [{probe_lo}, {w}] = {probe_min}, a(0) + margin = {}",
            a_center + margin
        ),
    });

    match coef.params.envelope.as_deref() {
        Some(env) => {
            let mut worst_gap = f64::INFINITY;
            for j in 0..samples {
                let t = -w + 2.0 * w * j as f64 / (samples - 1) as f64;
                worst_gap = worst_gap.min(env.eval(t) - coef.eval(t));
            }
            conditions.push(ConditionCheck {
                name: "strictly_below_envelope",
                passed: worst_gap > 0.0,
                detail: format!("min envelope gap over window = {worst_gap}"),
            });
            let gap = |t: f64| (env.eval(t) - coef.eval(t)).abs();
            let g0 = gap(0.0);
            let gh = gap(probe_lo).max(gap(-probe_lo));
            let gf = gap(w).max(gap(-w));
            let tol = (0.01 * g0).max(1e-9);
            conditions.push(ConditionCheck {
                name: "approaches_envelope",
                passed: gf < tol && gf <= gh + 1e-15,
                detail: format!(
                    "gap at |t| = 0, {probe_lo}, {w}: {g0}, {gh}, {gf}; tolerance {tol}"
                ),
            });
        }
        None => {
            for name in ["strictly_below_envelope", "approaches_envelope"] {
                conditions.push(ConditionCheck {
                    name,
                    passed: false,
                    detail: "no envelope declared".to_string(),
                });
            }
        }
    }

    {
        let near = coef.eval(probe_lo).min(coef.eval(-probe_lo));
        let far = coef.eval(w).min(coef.eval(-w));
        conditions.push(ConditionCheck {
            name: "coercive_growth",
            passed: far > 2.0 * near,
            detail: format!("a(±{probe_lo}) >= {near}, a(±{w}) >= {far}"),
        });
    }

    conditions.push(match (coef.params.l0, coef.params.l1) {
        (Some(l0), Some(l1)) => ConditionCheck {
            name: "bounded_between",
            passed: min_sampled >= l0 - 1e-12 * scale && max_sampled <= l1 + 1e-12 * scale,
            detail: format!(
                "declared [{l0}, {l1}], sampled [{min_sampled}, {max_sampled}]"
            ),
        },
        _ => ConditionCheck {
            name: "bounded_between",
            passed: false,
            detail: "bounds not declared".to_string(),
        },
    });

    let required = required_conditions(coef.class);
    let class_consistent = required.iter().all(|r| {
        conditions
            .iter()
            .any(|c| c.name == *r && c.passed)
    });

    Ok(ClassReport {
        class_tag: coef.class,
        window: w,
        samples,
        a_center,
        min_sampled,
        max_sampled,
        probe_band: [probe_lo, w],
        probe_min,
        margin,
        extrapolation: coef.extrapolation_note(),
        conditions,
        class_consistent,
    })
}
