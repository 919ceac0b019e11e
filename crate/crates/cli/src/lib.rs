//! Command implementations behind the `netrel` binary. Every command renders
//! its stdout and stderr into an [`Outcome`] so it can be driven in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use netrel::format::parse_instance;
use netrel::oracle::{exhaustive, monte_carlo, OracleError};
use netrel::reliability::{solve, PlainInstance, Probability, ReliabilityError, SolveOptions};
use netrel::treedec::{emit_td, heuristic_decompose, parse_td, Strategy, TreeDecomposition};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "netrel",
    version,
    about = "Exact source-to-target network reliability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact reliability of one instance.
    Solve(SolveArgs),
    /// Reliability over a grid of uniform edge probabilities, as CSV.
    Sweep(SweepArgs),
    /// Heuristic tree decomposition in PACE `.td` format.
    Decompose(DecomposeArgs),
    /// Check a `.td` file against a graph.
    Validate(ValidateArgs),
    /// Exhaustive enumeration over all edge subsets.
    Brute(BruteArgs),
    /// Monte Carlo estimate with a 95% confidence half-width.
    Mc(McArgs),
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Instance file (`p rel`, `e`, `s`, `t` lines).
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecompositionArgs {
    /// PACE `.td` file; a heuristic decomposition is computed when absent.
    #[arg(long)]
    pub td: Option<PathBuf>,
    #[arg(long, default_value_t = Strategy::MinDegree)]
    pub strategy: Strategy,
    /// Re-check separation and part housing before every shrink step.
    #[arg(long)]
    pub debug_invariants: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[command(flatten)]
    pub decomposition: DecompositionArgs,
    /// Uniform probability overriding every edge probability in the file.
    #[arg(long, value_parser = parse_probability)]
    pub p: Option<Probability>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[command(flatten)]
    pub decomposition: DecompositionArgs,
    #[arg(long, default_value_t = 0.0)]
    pub p_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_end: f64,
    #[arg(long, default_value_t = 0.05)]
    pub p_step: f64,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = Strategy::MinDegree)]
    pub strategy: Strategy,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long)]
    pub td: PathBuf,
}

#[derive(Debug, Args)]
pub struct BruteArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, value_parser = parse_probability)]
    pub p: Option<Probability>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, value_parser = parse_probability)]
    pub p: Option<Probability>,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_probability(s: &str) -> Result<Probability, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(0.0..=1.0).contains(&x) {
        return Err(format!("{x} is outside [0, 1]"));
    }
    Probability::new(x).map_err(|e| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Capacity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }
}

impl From<ReliabilityError> for CliError {
    fn from(e: ReliabilityError) -> Self {
        if e.is_capacity() {
            CliError::Capacity(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Uniform probability grid `p_start, p_start + p_step, ..., p_end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub p_start: Probability,
    pub p_end: Probability,
    pub p_step: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            p_start: Probability::ZERO,
            p_end: Probability::ONE,
            p_step: 0.05,
        }
    }
}

const GRID_EPSILON: f64 = 1e-9;

impl SweepSpec {
    pub fn new(p_start: f64, p_end: f64, p_step: f64) -> Result<Self, String> {
        let prob = |x: f64, name: &str| {
            if (0.0..=1.0).contains(&x) {
                Ok(Probability::new(x).expect("in range"))
            } else {
                Err(format!("{name} {x} is outside [0, 1]"))
            }
        };
        let (start, end) = (prob(p_start, "p-start")?, prob(p_end, "p-end")?);
        if p_start > p_end {
            return Err(format!("p-start {p_start} exceeds p-end {p_end}"));
        }
        if p_step.is_nan() || p_step <= 0.0 || !p_step.is_finite() {
            return Err(format!("p-step {p_step} must be positive"));
        }
        let steps = (p_end - p_start) / p_step;
        if (steps - steps.round()).abs() > GRID_EPSILON * steps.max(1.0) {
            return Err(format!(
                "p-step {p_step} does not divide [{p_start}, {p_end}]"
            ));
        }
        Ok(SweepSpec {
            p_start: start,
            p_end: end,
            p_step,
        })
    }

    /// Grid points rounded to 12 decimals, the last one pinned to `p_end`.
    pub fn points(&self) -> Vec<Probability> {
        let (a, b) = (self.p_start.value(), self.p_end.value());
        let steps = ((b - a) / self.p_step).round() as usize;
        (0..=steps)
            .map(|i| {
                let x = if i == steps {
                    b
                } else {
                    ((a + i as f64 * self.p_step) * 1e12).round() / 1e12
                };
                Probability::new(x.clamp(0.0, 1.0)).expect("grid point in range")
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub reliability: f64,
    pub width_used: usize,
    pub bag_count: usize,
    pub wall_time_ms: f64,
    pub shrink_steps: usize,
    pub max_part_table: usize,
    pub source_in_targets: bool,
}

impl SolveReport {
    pub fn render(&self) -> String {
        let mut out = format!("reliability {:.12}\n", self.reliability);
        let _ = writeln!(out, "width {}", self.width_used);
        let _ = writeln!(out, "bags {}", self.bag_count);
        let _ = writeln!(out, "shrink_steps {}", self.shrink_steps);
        let _ = writeln!(out, "max_part_table {}", self.max_part_table);
        let _ = writeln!(out, "wall_time_ms {:.3}", self.wall_time_ms);
        if self.source_in_targets {
            out.push_str("source_in_targets true\n");
        }
        out
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_instance(path: &Path) -> Result<PlainInstance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn load_td(path: &Path) -> Result<TreeDecomposition, CliError> {
    parse_td(&read(path)?).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn decomposition(
    inst: &PlainInstance,
    args: &DecompositionArgs,
) -> Result<TreeDecomposition, CliError> {
    match &args.td {
        Some(path) => {
            let td = load_td(path)?;
            let violations = td.validate(inst.graph());
            if let Some(first) = violations.first() {
                return Err(CliError::Validation(format!(
                    "{}: invalid decomposition: {first}",
                    path.display()
                )));
            }
            Ok(td)
        }
        None => heuristic_decompose(inst.graph(), args.strategy)
            .map_err(|e| CliError::Validation(e.to_string())),
    }
}

pub fn solve_report(
    inst: &PlainInstance,
    td: TreeDecomposition,
    debug_invariants: bool,
) -> Result<SolveReport, CliError> {
    let started = Instant::now();
    let sol = solve(inst, td, SolveOptions { debug_invariants })?;
    Ok(SolveReport {
        reliability: sol.reliability,
        width_used: sol.stats.width,
        bag_count: sol.stats.bag_count,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        shrink_steps: sol.stats.shrink_steps,
        max_part_table: sol.stats.max_part_table,
        source_in_targets: sol.stats.source_in_targets,
    })
}

fn override_p(inst: PlainInstance, p: Option<Probability>) -> PlainInstance {
    match p {
        Some(p) => inst.with_uniform(p),
        None => inst,
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let inst = override_p(load_instance(&args.graph.graph)?, args.p);
    let td = decomposition(&inst, &args.decomposition)?;
    let report = solve_report(&inst, td, args.decomposition.debug_invariants)?;
    Ok(Outcome {
        stdout: report.render(),
        ..Outcome::default()
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let spec =
        SweepSpec::new(args.p_start, args.p_end, args.p_step).map_err(CliError::Validation)?;
    let inst = load_instance(&args.graph.graph)?;
    let td = decomposition(&inst, &args.decomposition)?;
    let mut stdout = String::from("p,reliability\n");
    for p in spec.points() {
        let report = solve_report(
            &inst.with_uniform(p),
            td.clone(),
            args.decomposition.debug_invariants,
        )?;
        let _ = writeln!(stdout, "{},{:.12}", p.value(), report.reliability);
    }
    Ok(Outcome {
        stdout,
        ..Outcome::default()
    })
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<Outcome, CliError> {
    let inst = load_instance(&args.graph.graph)?;
    let td = heuristic_decompose(inst.graph(), args.strategy)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(Outcome {
        code: 0,
        stderr: format!("width {}\n", td.width()),
        stdout: emit_td(&td),
    })
}

fn cmd_validate(args: &ValidateArgs) -> Result<Outcome, CliError> {
    let inst = load_instance(&args.graph.graph)?;
    let td = load_td(&args.td)?;
    let violations = td.validate(inst.graph());
    if violations.is_empty() {
        return Ok(Outcome {
            stdout: format!("ok width {}\n", td.width()),
            ..Outcome::default()
        });
    }
    let mut stdout = String::new();
    for v in &violations {
        let _ = writeln!(stdout, "violation: {v}");
    }
    Ok(Outcome {
        code: 2,
        stdout,
        stderr: format!(
            "{}: {} violation(s), first: {}\n",
            args.td.display(),
            violations.len(),
            violations[0]
        ),
    })
}

fn cmd_brute(args: &BruteArgs) -> Result<Outcome, CliError> {
    let inst = override_p(load_instance(&args.graph.graph)?, args.p);
    let value = exhaustive(&inst).map_err(|e| match e {
        OracleError::TooManyEdges { .. } => CliError::Capacity(e.to_string()),
    })?;
    Ok(Outcome {
        stdout: format!("reliability {value:.12}\n"),
        ..Outcome::default()
    })
}

fn cmd_mc(args: &McArgs) -> Result<Outcome, CliError> {
    let inst = override_p(load_instance(&args.graph.graph)?, args.p);
    let est = monte_carlo(&inst, args.samples, args.seed);
    Ok(Outcome {
        stdout: format!(
            "estimate {:.12}\nhalf_width_95 {:.12}\nsamples {}\nseed {}\n",
            est.estimate, est.half_width_95, est.samples, est.seed
        ),
        ..Outcome::default()
    })
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Brute(a) => cmd_brute(a),
        Command::Mc(a) => cmd_mc(a),
    };
    result.unwrap_or_else(|e| Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    })
}

/// Parses `args` (program name first) and runs the command. Usage errors
/// exit with 1; `--help` and `--version` with 0.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
