//! Command-line front end. Every command writes a single JSON report;
//! identical arguments give byte-identical output.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{decide_controllability, AnalysisError, Conclusion, DecideConfig};
use crate::foliation::{
    arc_family, example_distribution, phi_constancy, FirstReturnConfig, FoliationError,
    EXAMPLE_NAMES,
};
use crate::matlie::{LieError, Vector, DEFAULT_TOL};
use crate::model::{
    builtin_corpus, parse_system, to_document, ModelError, SystemSpec, BUILTIN_NAMES,
};
use crate::reach::{
    approx_reach_test, coverage, explore_attainable, sample_attainable, CoverageGrid,
    ExploreConfig, ReachError, SamplerConfig, DEFAULT_R_MAX, DEFAULT_R_MIN,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bilinear-control",
    version,
    about = "Controllability analysis for bilinear systems"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide controllability and report the verdict.
    Analyze(AnalyzeArgs),
    /// Sample the attainable set and measure grid coverage.
    Reach(ReachArgs),
    /// Trace leaf curves and the first-return map of a foliation.
    Foliation(FoliationArgs),
    /// List the built-in systems or print one as a spec document.
    Corpus(CorpusArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SystemArgs {
    /// Built-in system name.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Path of a JSON system document.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Directory for the report and data files; the report goes to stdout
    /// when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Angular cells of the coverage grid.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[arg(long, default_value_t = 16)]
    pub radial_bins: usize,
    /// Identify antipodal cells.
    #[arg(long)]
    pub projective: bool,
}

#[derive(Debug, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 8)]
    pub max_segments: usize,
    #[arg(long, default_value_t = 1.0)]
    pub duration_scale: f64,
}

impl SamplerArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig {
            max_segments: self.max_segments,
            duration_scale: self.duration_scale,
            ..SamplerConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Unit points for the orbit profile and transversality checks.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0.99)]
    pub coverage_threshold: f64,
    /// Measure coverage even when a certificate already decides.
    #[arg(long)]
    pub always_sample: bool,
}

#[derive(Debug, Args)]
pub struct ReachArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    /// Start state, comma separated; defaults to e1.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Also search for a schedule reaching this state.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    /// Grid-guided exploration instead of independent schedules.
    #[arg(long)]
    pub guided: bool,
}

#[derive(Debug, Args)]
pub struct FoliationArgs {
    #[arg(long, default_value = "radial_graph_h03")]
    pub example: String,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub theta_samples: usize,
    #[arg(long, default_value_t = 65)]
    pub points_per_arc: usize,
    /// Relative spread below which the return map counts as constant.
    #[arg(long, default_value_t = 1e-6)]
    pub phi_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Print this built-in as a spec document instead of listing.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Numerical(String),
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        match e {
            LieError::NonFinite | LieError::Overflow | LieError::Singular => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<ReachError> for Failure {
    fn from(e: ReachError) -> Self {
        match e {
            ReachError::Model(e) => e.into(),
            ReachError::Lie(e) => e.into(),
            ReachError::Degenerate { .. } | ReachError::Integration { .. } => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Lie(e) => e.into(),
            AnalysisError::Reach(e) => e.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<FoliationError> for Failure {
    fn from(e: FoliationError) -> Self {
        match e {
            FoliationError::BadDimension { .. }
            | FoliationError::BadTheta
            | FoliationError::BadArgument(_) => Failure::Input(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("output: {e}"))
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Reports go to `stdout` unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&config, stdout) {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Numerical(m)) => {
            let _ = writeln!(stderr, "numerical failure: {m}");
            EXIT_NUMERICAL
        }
    }
}

fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match &config.command {
        Command::Analyze(a) => analyze(a, stdout),
        Command::Reach(a) => reach(a, stdout),
        Command::Foliation(a) => foliation(a, stdout),
        Command::Corpus(a) => corpus(a, stdout),
    }
}

fn load(args: &SystemArgs) -> Result<SystemSpec, Failure> {
    match (&args.builtin, &args.spec) {
        (Some(name), None) => Ok(builtin_corpus(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(parse_system(&text)?)
        }
        _ => Err(Failure::Input(
            "give exactly one of --builtin and --spec".into(),
        )),
    }
}

fn system_json(spec: &SystemSpec) -> Value {
    match to_document(spec) {
        Some(doc) => serde_json::to_value(doc).expect("document serializes"),
        None => json!({ "n": spec.n(), "name": spec.name() }),
    }
}

fn environment(seed: u64, tol: f64, extra: Value) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "tol": tol,
        "parameters": extra,
    })
}

fn parse_vector(text: &str, n: usize) -> Result<Vector, Failure> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| Failure::Input(format!("vector {text:?}: {e}")))?;
    if values.len() != n {
        return Err(Failure::Input(format!(
            "vector {text:?} has {} entries, system has n = {n}",
            values.len()
        )));
    }
    Ok(Vector::from_vec(values))
}

fn check_positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

fn emit(
    report: &impl Serialize,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("report.json"), text + "\n")?;
        }
        None => writeln!(stdout, "{text}")?,
    }
    Ok(())
}

fn write_data(
    out: Option<&Path>,
    name: &str,
    f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>,
) -> Result<(), Failure> {
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut buf = Vec::new();
        f(&mut buf)?;
        fs::write(dir.join(name), buf)?;
    }
    Ok(())
}

fn analyze(a: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load(&a.system)?;
    check_positive("tol", a.common.tol)?;
    let config = DecideConfig {
        samples: a.samples,
        reach_budget: a.budget,
        coverage_threshold: a.coverage_threshold,
        tol: a.common.tol,
        seed: a.common.seed,
        sampler: a.sampler.config(),
        angular_cells: a.grid.grid,
        radial_bins: a.grid.radial_bins,
        projective: a.grid.projective,
        always_sample: a.always_sample,
        ..DecideConfig::default()
    };
    let verdict = decide_controllability(&spec, &config)?;
    let code = match verdict.conclusion {
        Conclusion::Undetermined { .. } => EXIT_UNDETERMINED,
        _ => EXIT_OK,
    };
    let report = json!({
        "command": "analyze",
        "environment": environment(a.common.seed, a.common.tol, serde_json::to_value(config).expect("config")),
        "system": system_json(&spec),
        "verdict": verdict,
    });
    emit(&report, a.common.out.as_deref(), stdout)?;
    Ok(code)
}

fn reach(a: &ReachArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load(&a.system)?;
    let n = spec.n();
    let x0 = match &a.x0 {
        Some(t) => parse_vector(t, n)?,
        None => {
            let mut e = Vector::zeros(n);
            e[0] = 1.0;
            e
        }
    };
    let sampler = a.sampler.config();
    let grid = CoverageGrid::new(
        n,
        a.grid.grid,
        a.grid.radial_bins,
        DEFAULT_R_MIN,
        DEFAULT_R_MAX,
        a.grid.projective,
        a.common.seed,
    )?;
    let cloud = if a.guided {
        explore_attainable(
            &spec,
            &x0,
            a.budget,
            a.common.seed,
            &sampler,
            &grid,
            &ExploreConfig::default(),
        )?
        .cloud
    } else {
        sample_attainable(&spec, &x0, a.budget, a.common.seed, &sampler)?
    };
    let report_cov = coverage(&cloud, &grid);
    let reach_test = match &a.target {
        Some(t) => {
            check_positive("eps", a.eps)?;
            let target = parse_vector(t, n)?;
            let r = approx_reach_test(
                &spec,
                &x0,
                &target,
                a.eps,
                a.budget,
                a.common.seed,
                &sampler,
            )?;
            Some(json!({ "target": target.as_slice(), "eps": a.eps, "result": r }))
        }
        None => None,
    };
    let report = json!({
        "command": "reach",
        "environment": environment(a.common.seed, a.common.tol, json!({
            "budget": a.budget,
            "sampler": sampler,
            "guided": a.guided,
        })),
        "system": system_json(&spec),
        "x0": x0.as_slice(),
        "points": cloud.points.len(),
        "discarded": cloud.discarded,
        "coverage": report_cov,
        "reach_test": reach_test,
    });
    let out = a.common.out.as_deref();
    write_data(out, "points.csv", |buf| cloud.write_csv(buf))?;
    emit(&report, out, stdout)?;
    Ok(EXIT_OK)
}

fn foliation(a: &FoliationArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    check_positive("phi-tol", a.phi_tol)?;
    let distr = example_distribution(&a.example, a.n)?;
    let config = FirstReturnConfig::default();
    let phi = phi_constancy(&distr, a.theta_samples, a.seed, a.phi_tol, &config)?;
    let arcs = arc_family(&distr, a.theta_samples, a.seed, a.points_per_arc, &config)?;
    let report = json!({
        "command": "foliation",
        "environment": environment(a.seed, a.phi_tol, json!({
            "example": a.example,
            "n": a.n,
            "theta_samples": a.theta_samples,
            "points_per_arc": a.points_per_arc,
            "first_return": config,
        })),
        "phi": {
            "mean": phi.mean,
            "max_deviation": phi.max_deviation,
            "constant": phi.constant,
            "leaf_residual": phi.leaf_residual,
        },
        "arcs": {
            "return_point": arcs.return_point,
            "endpoint_mismatch": arcs.endpoint_mismatch,
            "min_norm": arcs.min_norm,
            "max_norm": arcs.max_norm,
            "tangency_residual": arcs.tangency_residual,
            "planarity_residual": arcs.planarity_residual,
            "leaf_residual": arcs.leaf_residual,
        },
    });
    let out = a.out.as_deref();
    write_data(out, "phi.csv", |buf| phi.write_csv(buf))?;
    write_data(out, "arcs.csv", |buf| arcs.write_csv(buf))?;
    emit(&report, out, stdout)?;
    Ok(EXIT_OK)
}

fn corpus(a: &CorpusArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let report = match &a.name {
        Some(name) => system_json(&builtin_corpus(name)?),
        None => {
            let systems: Vec<Value> = BUILTIN_NAMES
                .iter()
                .map(|name| {
                    let spec = builtin_corpus(name).expect("built-in");
                    let kind = if spec.family().is_some() { "bilinear" } else { "smooth" };
                    json!({ "name": name, "n": spec.n(), "kind": kind, "fields": spec.field_count() })
                })
                .collect();
            json!({ "systems": systems, "foliation_examples": EXAMPLE_NAMES })
        }
    };
    emit(&report, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}
