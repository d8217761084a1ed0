//! Batch front end: parse a JSON run configuration, execute one command
//! (solve / sweep / levels / verify / oracle-compare / classify), and write
//! deterministic artifacts — path files, report JSON, CSV tables, and a
//! run manifest echoing every resolved default.
//!
//! Exit codes: 0 success, 2 configuration error (nothing written), 3
//! numerical non-convergence or failed verification (reports still
//! written), 4 I/O failure.

use std::io;
use std::path::{Path as FsPath, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::action::ActionReport;
use crate::coefficient::{verify_class, ClassTag, Coefficient};
use crate::oracle;
use crate::potential::{modify, ModifiedPotential, Potential};
use crate::solver::{
    self, validate_eps_list, Acceleration, MinimizeResult, SolveConfig, VerificationReport,
};
use crate::trajectory::{Grid, Path};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;
pub const EXIT_IO: i32 = 4;

const DEFAULT_DELTA: f64 = 0.1;
const DEFAULT_EPS: f64 = 1.0;
const DEFAULT_HALF_WIDTH: f64 = 12.0;
const DEFAULT_NODES: usize = 1201;
const DEFAULT_EPS_LIST: [f64; 5] = [2.0, 1.0, 0.5, 0.1, 0.02];
const DEFAULT_CLASSIFY_WINDOW: f64 = 50.0;
const DEFAULT_CLASSIFY_SAMPLES: usize = 2001;

/// JSON serializer that prints every float with 17 significant digits in
/// scientific notation, so written values reparse bit-for-bit.
struct SciFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl<'a> SciFormatter<'a> {
    fn new() -> Self {
        SciFormatter {
            inner: PrettyFormatter::new(),
        }
    }
}

impl<'a> Formatter for SciFormatter<'a> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Serializes any value to pretty JSON with full-precision floats.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter::new());
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("JSON serialization failed: {e}")))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::InvalidInput(format!("non-UTF8 JSON: {e}")))
}

// ---------------------------------------------------------------------------
// Configuration file schema. Every field is optional; defaults are resolved
// once and echoed verbatim in the run manifest.
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional echo of the command; must match the subcommand when given.
    pub command: Option<String>,
    pub potential: Option<PotentialSpec>,
    pub coefficient: Option<CoefficientSpec>,
    pub eps: Option<f64>,
    pub eps_list: Option<Vec<f64>>,
    pub grid: Option<GridSpec>,
    pub solver: Option<SolverSpec>,
    pub output_dir: Option<String>,
    /// Optional two-column file with the starting path for solve/verify.
    pub seed_path: Option<String>,
    pub classify: Option<ClassifySpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    /// "quartic" (default) or "table".
    pub kind: Option<String>,
    /// Two-column sample file, required when kind = "table".
    pub table: Option<String>,
    /// Collar width of the quadratic extension.
    pub delta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    /// A standard family name, e.g. "const(1.5)" or "rabinowitz_gauss".
    pub name: Option<String>,
    /// Two-column sample file; mutually exclusive with `name`.
    pub table: Option<String>,
    /// Class tag override, e.g. "rabinowitz".
    pub class: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "T")]
    pub half_width: Option<f64>,
    #[serde(rename = "N")]
    pub nodes: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub max_iters: Option<usize>,
    pub tol_grad_dual: Option<f64>,
    pub tol_step: Option<f64>,
    pub armijo_c: Option<f64>,
    pub backtrack_factor: Option<f64>,
    /// "secant_two_point" (default) or "steepest".
    pub acceleration: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySpec {
    pub window: Option<f64>,
    pub samples: Option<usize>,
}

// ---------------------------------------------------------------------------
// Resolved run: concrete objects plus a serializable manifest.
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct ManifestPotential {
    kind: String,
    table: Option<String>,
    delta: f64,
}

#[derive(Debug, Serialize)]
struct ManifestCoefficient {
    name: String,
    class: String,
    table: Option<String>,
}

#[derive(Debug, Serialize)]
struct ManifestGrid {
    #[serde(rename = "T")]
    half_width: f64,
    #[serde(rename = "N")]
    nodes: usize,
    h: f64,
}

#[derive(Debug, Serialize)]
struct ManifestClassify {
    window: f64,
    samples: usize,
}

#[derive(Debug, Serialize)]
struct Manifest {
    command: String,
    tool_version: String,
    potential: ManifestPotential,
    coefficient: ManifestCoefficient,
    eps: f64,
    eps_list: Vec<f64>,
    grid: ManifestGrid,
    solver: SolveConfig,
    classify: ManifestClassify,
    seed_path: Option<String>,
    output_dir: String,
}

struct ResolvedRun {
    command: String,
    pot: ModifiedPotential,
    coef: Coefficient,
    eps: f64,
    eps_list: Vec<f64>,
    grid: Grid,
    solver: SolveConfig,
    classify_window: f64,
    classify_samples: usize,
    seed: Option<Path>,
    out_dir: PathBuf,
    manifest: Manifest,
}

const COMMANDS: [&str; 6] = ["solve", "sweep", "levels", "verify", "oracle_compare", "classify"];

fn resolve(command: &str, config: &RunConfig, out_override: Option<&FsPath>) -> Result<ResolvedRun> {
    if !COMMANDS.contains(&command) {
        return Err(Error::InvalidInput(format!("unknown command '{command}'")));
    }
    if let Some(declared) = &config.command {
        if declared != command {
            return Err(Error::InvalidInput(format!(
                "config declares command '{declared}' but '{command}' was invoked"
            )));
        }
    }

    let pot_spec = config.potential.as_ref();
    let kind = pot_spec
        .and_then(|p| p.kind.as_deref())
        .unwrap_or("quartic")
        .to_string();
    let table = pot_spec.and_then(|p| p.table.clone());
    let delta = pot_spec.and_then(|p| p.delta).unwrap_or(DEFAULT_DELTA);
    let base = match kind.as_str() {
        "quartic" => {
            if table.is_some() {
                return Err(Error::InvalidInput(
                    "potential.table is only meaningful with kind = \"table\"".into(),
                ));
            }
            Potential::quartic()
        }
        "table" => {
            let file = table.as_ref().ok_or_else(|| {
                Error::InvalidInput("potential.kind = \"table\" needs potential.table".into())
            })?;
            Potential::from_table_file(FsPath::new(file))?
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown potential kind '{other}'; expected quartic or table"
            )))
        }
    };
    let pot = modify(base, delta)?;

    let coef_spec = config.coefficient.as_ref();
    let mut coef = match (
        coef_spec.and_then(|c| c.name.as_deref()),
        coef_spec.and_then(|c| c.table.as_deref()),
    ) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidInput(
                "coefficient.name and coefficient.table are mutually exclusive".into(),
            ))
        }
        (None, Some(file)) => Coefficient::from_table_file(FsPath::new(file))?,
        (name, None) => Coefficient::make_standard(name.unwrap_or("const(1)"))?,
    };
    if let Some(class) = coef_spec.and_then(|c| c.class.as_deref()) {
        coef = coef.with_class_tag(ClassTag::parse(class)?);
    }

    let eps = config.eps.unwrap_or(DEFAULT_EPS);
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    let eps_list = config
        .eps_list
        .clone()
        .unwrap_or_else(|| DEFAULT_EPS_LIST.to_vec());
    if command == "sweep" {
        // The sweep contract needs the list well-formed; reject it here so a
        // bad list is a pure config error that writes nothing.
        validate_eps_list(&eps_list)?;
    }

    let half_width = config
        .grid
        .as_ref()
        .and_then(|g| g.half_width)
        .unwrap_or(DEFAULT_HALF_WIDTH);
    let nodes = config
        .grid
        .as_ref()
        .and_then(|g| g.nodes)
        .unwrap_or(DEFAULT_NODES);
    let grid = Grid::new(half_width, nodes)?;

    let s = config.solver.as_ref();
    let defaults = SolveConfig::default();
    let solver = SolveConfig {
        max_iters: s.and_then(|s| s.max_iters).unwrap_or(defaults.max_iters),
        tol_grad_dual: s
            .and_then(|s| s.tol_grad_dual)
            .unwrap_or(defaults.tol_grad_dual),
        tol_step: s.and_then(|s| s.tol_step).unwrap_or(defaults.tol_step),
        armijo_c: s.and_then(|s| s.armijo_c).unwrap_or(defaults.armijo_c),
        backtrack_factor: s
            .and_then(|s| s.backtrack_factor)
            .unwrap_or(defaults.backtrack_factor),
        acceleration: match s.and_then(|s| s.acceleration.as_deref()) {
            Some(name) => Acceleration::parse(name)?,
            None => defaults.acceleration,
        },
    };
    solver.validate()?;

    let classify_window = config
        .classify
        .as_ref()
        .and_then(|c| c.window)
        .unwrap_or(DEFAULT_CLASSIFY_WINDOW);
    let classify_samples = config
        .classify
        .as_ref()
        .and_then(|c| c.samples)
        .unwrap_or(DEFAULT_CLASSIFY_SAMPLES);

    let seed = match &config.seed_path {
        Some(file) => {
            let path = Path::read_from(FsPath::new(file))?;
            let g = path.grid();
            if g.n() != grid.n() || (g.h() - grid.h()).abs() > 1e-12 * grid.h() {
                return Err(Error::InvalidInput(format!(
                    "seed file grid (N = {}, h = {}) does not match the configured grid \
                     (N = {}, h = {})",
                    g.n(),
                    g.h(),
                    grid.n(),
                    grid.h()
                )));
            }
            Some(path)
        }
        None => None,
    };

    let out_dir = out_override
        .map(|p| p.to_path_buf())
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let manifest = Manifest {
        command: command.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        potential: ManifestPotential {
            kind: kind.clone(),
            table,
            delta,
        },
        coefficient: ManifestCoefficient {
            name: coef.name().to_string(),
            class: coef.class_tag().as_str().to_string(),
            table: coef_spec.and_then(|c| c.table.clone()),
        },
        eps,
        eps_list: eps_list.clone(),
        grid: ManifestGrid {
            half_width: grid.half_width(),
            nodes: grid.n(),
            h: grid.h(),
        },
        solver,
        classify: ManifestClassify {
            window: classify_window,
            samples: classify_samples,
        },
        seed_path: config.seed_path.clone(),
        output_dir: out_dir.display().to_string(),
    };

    Ok(ResolvedRun {
        command: command.to_string(),
        pot,
        coef,
        eps,
        eps_list,
        grid,
        solver,
        classify_window,
        classify_samples,
        seed,
        out_dir,
        manifest,
    })
}

fn write_text(path: &FsPath, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Comparison of a minimized autonomous solution against the independent
/// phase-plane oracle for the same constant coefficient.
#[derive(Debug, Serialize)]
pub struct OracleComparison {
    pub a: f64,
    /// max over grid nodes of |x_minimized − x_oracle|.
    pub sup_diff: f64,
    pub sup_tolerance: f64,
    /// Minimized discrete action vs the position-space quadrature level.
    pub action_value: f64,
    pub quadrature_level: f64,
    pub level_gap: f64,
    pub level_tolerance: f64,
    /// max |½ẋ² − a·V(x)| along the oracle profile (first integral).
    pub equipartition_residual: f64,
    pub converged: bool,
    pub passed: bool,
}

fn solve_once(run: &ResolvedRun) -> Result<MinimizeResult> {
    let seed = match &run.seed {
        Some(path) => path.clone(),
        None => solver::default_seed(run.grid, &run.pot, &run.coef, run.eps)?,
    };
    solver::minimize(&seed, &run.pot, &run.coef, run.eps, &run.solver)
}

fn oracle_compare(run: &ResolvedRun) -> Result<(OracleComparison, Path)> {
    // The oracle integrates an autonomous profile, so the coefficient must
    // be constant across the window this run actually uses.
    let t_max = run.eps * run.grid.half_width();
    let a0 = run.coef.eval(0.0);
    for i in 0..=256 {
        let t = -t_max + 2.0 * t_max * (i as f64) / 256.0;
        let v = run.coef.eval(t);
        if (v - a0).abs() > 1e-12 * a0.abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "oracle_compare needs a constant coefficient; found a({t}) = {v} vs a(0) = {a0}"
            )));
        }
    }

    let res = solve_once(run)?;
    let grid = run.grid;
    let profile = oracle::profile_integrate(run.pot.base(), a0, grid.half_width(), grid.h() / 20.0)?;
    let sup_diff = (0..grid.n())
        .map(|i| (res.path.values()[i] - profile.sample_at(grid.t(i))).abs())
        .fold(0.0f64, f64::max);
    let quadrature_level = oracle::level_quadrature(run.pot.base(), a0)?;
    let level_gap = (res.report.value - quadrature_level).abs();
    let equi = oracle::equipartition_residual(&profile, run.pot.base());
    let sup_tolerance = 1e-2;
    // The discrete action differs from the continuum level at O(h²).
    let level_tolerance = 1.5 * grid.h() * grid.h();
    let passed = res.converged
        && sup_diff <= sup_tolerance
        && level_gap <= level_tolerance
        && equi <= 1e-6;
    Ok((
        OracleComparison {
            a: a0,
            sup_diff,
            sup_tolerance,
            action_value: res.report.value,
            quadrature_level,
            level_gap,
            level_tolerance,
            equipartition_residual: equi,
            converged: res.converged,
            passed,
        },
        res.path,
    ))
}

#[derive(Debug, Serialize)]
struct SolveArtifacts<'a> {
    #[serde(flatten)]
    report: &'a ActionReport,
    iterations: usize,
    converged: bool,
    monotone_j: bool,
    termination: solver::Termination,
}

fn execute(run: &ResolvedRun) -> Result<i32> {
    std::fs::create_dir_all(&run.out_dir).map_err(|source| Error::Io {
        path: run.out_dir.clone(),
        source,
    })?;
    write_text(
        &run.out_dir.join("run_manifest.json"),
        &to_json_pretty(&run.manifest)?,
    )?;

    match run.command.as_str() {
        "solve" => {
            let res = solve_once(run)?;
            res.path.write_to(&run.out_dir.join("solution.path"))?;
            let artifacts = SolveArtifacts {
                report: &res.report,
                iterations: res.iterations,
                converged: res.converged,
                monotone_j: res.monotone_j,
                termination: res.termination,
            };
            write_text(
                &run.out_dir.join("action_report.json"),
                &to_json_pretty(&artifacts)?,
            )?;
            if !res.converged {
                eprintln!(
                    "solve did not converge: {:?} after {} iterations, grad_dual = {}",
                    res.termination, res.iterations, res.report.grad_dual
                );
                return Ok(EXIT_NONCONVERGED);
            }
            Ok(EXIT_OK)
        }
        "sweep" => {
            let table =
                solver::epsilon_sweep(&run.pot, &run.coef, &run.eps_list, run.grid, &run.solver)?;
            write_text(&run.out_dir.join("sweep.csv"), &table.to_csv())?;
            write_text(&run.out_dir.join("sweep.json"), &to_json_pretty(&table)?)?;
            let all_ok = table.rows.iter().all(|r| r.converged) && table.b_0.converged;
            if !all_ok {
                eprintln!("sweep contains non-converged entries; tables were still written");
                return Ok(EXIT_NONCONVERGED);
            }
            Ok(EXIT_OK)
        }
        "levels" => {
            let table =
                solver::estimate_levels(&run.pot, &run.coef, run.eps, run.grid, &run.solver)?;
            write_text(&run.out_dir.join("levels.csv"), &table.to_csv())?;
            write_text(&run.out_dir.join("levels.json"), &to_json_pretty(&table)?)?;
            if !table.rows.iter().all(|r| r.converged) {
                eprintln!("levels table contains non-converged entries; tables were still written");
                return Ok(EXIT_NONCONVERGED);
            }
            Ok(EXIT_OK)
        }
        "verify" => {
            let res = solve_once(run)?;
            res.path.write_to(&run.out_dir.join("solution.path"))?;
            let artifacts = SolveArtifacts {
                report: &res.report,
                iterations: res.iterations,
                converged: res.converged,
                monotone_j: res.monotone_j,
                termination: res.termination,
            };
            write_text(
                &run.out_dir.join("action_report.json"),
                &to_json_pretty(&artifacts)?,
            )?;
            let verdict: VerificationReport =
                solver::verify_solution(&res, &run.pot, &run.coef, run.eps)?;
            write_text(
                &run.out_dir.join("verification.json"),
                &to_json_pretty(&verdict)?,
            )?;
            if !res.converged || !verdict.all_passed {
                eprintln!(
                    "verification: converged = {}, all_passed = {}; report written",
                    res.converged, verdict.all_passed
                );
                return Ok(EXIT_NONCONVERGED);
            }
            Ok(EXIT_OK)
        }
        "oracle_compare" => {
            let (cmp, path) = oracle_compare(run)?;
            path.write_to(&run.out_dir.join("solution.path"))?;
            write_text(
                &run.out_dir.join("oracle_compare.json"),
                &to_json_pretty(&cmp)?,
            )?;
            if !cmp.passed {
                eprintln!(
                    "oracle comparison failed: sup_diff = {}, level_gap = {}, converged = {}",
                    cmp.sup_diff, cmp.level_gap, cmp.converged
                );
                return Ok(EXIT_NONCONVERGED);
            }
            Ok(EXIT_OK)
        }
        "classify" => {
            let report = verify_class(&run.coef, run.classify_window, run.classify_samples)?;
            write_text(
                &run.out_dir.join("class_report.json"),
                &to_json_pretty(&report)?,
            )?;
            Ok(EXIT_OK)
        }
        other => Err(Error::InvalidInput(format!("unknown command '{other}'"))),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::NonFinite(_) | Error::Singular(_) => EXIT_NONCONVERGED,
        Error::InvalidInput(_) | Error::Parse { .. } => EXIT_CONFIG,
    }
}

/// Runs one command against a parsed configuration. Validates everything
/// before writing anything, so configuration errors leave no partial
/// outputs. Returns the process exit code.
pub fn run(command: &str, config: &RunConfig, out_override: Option<&FsPath>) -> i32 {
    let resolved = match resolve(command, config, out_override) {
        Ok(r) => r,
        Err(err) => {
            // Nothing has been written yet: any failure to realize the
            // configuration is a configuration error.
            eprintln!("configuration error: {err}");
            return EXIT_CONFIG;
        }
    };
    match execute(&resolved) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

/// Reads the configuration file and runs one command; the entry point used
/// by the binary. Returns the process exit code.
pub fn run_command(command: &str, config_path: &FsPath, out_override: Option<&FsPath>) -> i32 {
    let text = match std::fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!(
                "configuration error: cannot read {}: {e}",
                config_path.display()
            );
            return EXIT_CONFIG;
        }
    };
    let config: RunConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!(
                "configuration error: {} is not a valid run configuration: {e}",
                config_path.display()
            );
            return EXIT_CONFIG;
        }
    };
    run(command, &config, out_override)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_full_precision_and_reparses() {
        #[derive(Serialize)]
        struct Probe {
            x: f64,
            y: f64,
            n: u64,
            flag: bool,
            missing: Option<f64>,
        }
        let probe = Probe {
            x: 0.9428090415820634,
            y: -1.0 / 3.0,
            n: 42,
            flag: true,
            missing: None,
        };
        let text = to_json_pretty(&probe).unwrap();
        assert!(text.contains("9.4280904158206336e-1"), "{text}");
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["x"].as_f64().unwrap().to_bits(), probe.x.to_bits());
        assert_eq!(parsed["y"].as_f64().unwrap().to_bits(), probe.y.to_bits());
        assert_eq!(parsed["n"].as_u64().unwrap(), 42);
        assert!(parsed["flag"].as_bool().unwrap());
        assert!(parsed["missing"].is_null());
    }

    #[test]
    fn nonfinite_floats_serialize_as_null() {
        #[derive(Serialize)]
        struct Probe {
            bad: f64,
        }
        let text = to_json_pretty(&Probe { bad: f64::NAN }).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(parsed["bad"].is_null());
    }

    #[test]
    fn resolve_rejects_mismatched_command_echo() {
        let config = RunConfig {
            command: Some("sweep".into()),
            ..RunConfig::default()
        };
        assert!(resolve("solve", &config, None).is_err());
        let config = RunConfig {
            command: Some("solve".into()),
            ..RunConfig::default()
        };
        assert!(resolve("solve", &config, None).is_ok());
    }

    #[test]
    fn resolve_fills_documented_defaults() {
        let run = resolve("solve", &RunConfig::default(), None).unwrap();
        assert_eq!(run.grid.n(), 1201);
        assert!((run.grid.half_width() - 12.0).abs() < 1e-12);
        assert_eq!(run.eps, 1.0);
        assert_eq!(run.solver.max_iters, 50_000);
        assert_eq!(run.solver.tol_grad_dual, 1e-8);
        assert_eq!(run.manifest.coefficient.name, "const(1)");
        assert_eq!(run.manifest.potential.kind, "quartic");
        assert_eq!(run.manifest.potential.delta, 0.1);
        assert_eq!(run.eps_list, vec![2.0, 1.0, 0.5, 0.1, 0.02]);
    }

    #[test]
    fn resolve_rejects_even_grids_and_bad_names() {
        let config = RunConfig {
            grid: Some(GridSpec {
                half_width: Some(12.0),
                nodes: Some(1200),
            }),
            ..RunConfig::default()
        };
        assert!(resolve("solve", &config, None).is_err());

        let config = RunConfig {
            coefficient: Some(CoefficientSpec {
                name: Some("mystery".into()),
                table: None,
                class: None,
            }),
            ..RunConfig::default()
        };
        assert!(resolve("solve", &config, None).is_err());

        let config = RunConfig {
            eps: Some(-0.5),
            ..RunConfig::default()
        };
        assert!(resolve("solve", &config, None).is_err());
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"epsilon": 1.0}"#);
        assert!(err.is_err());
        let ok = serde_json::from_str::<RunConfig>(r#"{"eps": 1.0}"#);
        assert!(ok.is_ok());
    }

    #[test]
    fn exit_codes_partition_the_error_space() {
        assert_eq!(exit_code_for(&Error::InvalidInput("x".into())), EXIT_CONFIG);
        assert_eq!(
            exit_code_for(&Error::Parse {
                path: "f".into(),
                line: 3,
                message: "bad".into()
            }),
            EXIT_CONFIG
        );
        assert_eq!(exit_code_for(&Error::NonFinite("x".into())), EXIT_NONCONVERGED);
        assert_eq!(
            exit_code_for(&Error::Io {
                path: "f".into(),
                source: io::Error::other("disk")
            }),
            EXIT_IO
        );
    }
}
