//! `tvi` command-line entry points.
//!
//! Every command prints exactly one JSON report object on stdout and a short
//! human-readable summary on stderr. Exit codes: 0 for success (solution
//! found, not falsified), 1 for a negative outcome (falsified, not a
//! solution, no convergence), 2 for usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tvi_core::io::{self, ProblemDocument};
use tvi_core::solvers::{self, SolveReport, SolverParams};
use tvi_core::structured::{self, Verdict};
use tvi_core::{Error, GameSpec, TviProblem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tvi", version, about = "Solve and analyse tensor variational inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct ProblemArg {
    /// Problem document (JSON).
    #[arg(long)]
    problem: PathBuf,
}

#[derive(Debug, Args, Clone)]
struct GameArg {
    /// Game document (JSON).
    #[arg(long)]
    game: PathBuf,
}

#[derive(Debug, Args, Clone)]
struct SolveOpts {
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    initial_step: f64,
}

impl SolveOpts {
    fn params(&self) -> SolverParams {
        SolverParams {
            max_iters: self.max_iters,
            tol: self.tol,
            initial_step: self.initial_step,
            seed: self.seed,
            ..SolverParams::default()
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Extragradient,
    FixedPoint,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Extragradient => "extragradient",
            Method::FixedPoint => "fixed-point",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a TVI from a starting point (default: the projection of 0).
    Solve {
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        opts: SolveOpts,
        #[arg(long, value_enum, default_value = "extragradient")]
        method: Method,
        /// Starting point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Check whether a point solves the TVI.
    Verify {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Natural residual ||x - P_X(x - F(x))|| at a point.
    Residual {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Try to falsify positive definiteness of the tensor on X.
    CheckPd {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra point to test; its exact form value is reported.
        #[arg(long, allow_hyphen_values = true)]
        probe: Option<String>,
    },
    /// Try to falsify strict positive definiteness of the tensor on X.
    CheckSpd {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true, requires = "probe_y")]
        probe_x: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "probe_x")]
        probe_y: Option<String>,
    },
    /// Sampled upper bound on the strong-monotonicity constant.
    Modulus {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true, requires = "probe_y")]
        probe_x: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "probe_x")]
        probe_y: Option<String>,
    },
    /// Reduce a game to a problem document.
    GameCompile {
        #[command(flatten)]
        game: GameArg,
        /// Also write the problem document to this path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the TVI of a game and check the answer as a Nash equilibrium.
    GameSolve {
        #[command(flatten)]
        game: GameArg,
        #[command(flatten)]
        opts: SolveOpts,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// Check whether a stacked strategy profile is a Nash equilibrium.
    GameVerify {
        #[command(flatten)]
        game: GameArg,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Multi-start solve; one cluster of endpoints is evidence of a unique solution.
    GusProbe {
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        opts: SolveOpts,
        #[arg(long, default_value_t = 10)]
        starts: usize,
        #[arg(long, default_value_t = 5.0)]
        spread: f64,
    },
}

/// A failure classified by exit code.
struct Failure {
    code: i32,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match error {
            Error::ProjectionNotConverged { .. } => EXIT_NEGATIVE,
            _ => EXIT_USAGE,
        };
        Failure { code, error }
    }
}

struct Outcome {
    code: i32,
    report: Value,
    summary: String,
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let name = command_name(&cli.command);
    match execute(&cli.command) {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&outcome.report).unwrap());
            let _ = writeln!(err, "{}", outcome.summary);
            outcome.code
        }
        Err(f) => {
            let (pointer, message) = match &f.error {
                Error::Parse { pointer, message } => (Some(pointer.clone()), message.clone()),
                other => (None, other.to_string()),
            };
            let report = json!({
                "command": name,
                "error": { "pointer": pointer, "message": message },
                "exit_code": f.code,
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap());
            let _ = writeln!(err, "error: {}", f.error);
            f.code
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve { .. } => "solve",
        Command::Verify { .. } => "verify",
        Command::Residual { .. } => "residual",
        Command::CheckPd { .. } => "check-pd",
        Command::CheckSpd { .. } => "check-spd",
        Command::Modulus { .. } => "modulus",
        Command::GameCompile { .. } => "game-compile",
        Command::GameSolve { .. } => "game-solve",
        Command::GameVerify { .. } => "game-verify",
        Command::GusProbe { .. } => "gus-probe",
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::from(Error::Parse {
            pointer: "/".into(),
            message: format!("cannot read {}: {e}", path.display()),
        })
    })
}

fn load_problem(arg: &ProblemArg) -> Result<TviProblem, Failure> {
    Ok(io::parse_problem(&read(&arg.problem)?)?)
}

fn load_game(arg: &GameArg) -> Result<GameSpec, Failure> {
    Ok(io::parse_game(&read(&arg.game)?)?)
}

fn vector_arg(text: &str, flag: &str, dim: usize) -> Result<Vec<f64>, Failure> {
    let v = io::parse_vector(text).map_err(|e| match e {
        Error::Parse { pointer, message } => Error::Parse {
            pointer: format!("--{flag}{pointer}"),
            message,
        },
        other => other,
    })?;
    if v.len() != dim {
        return Err(Error::Parse {
            pointer: format!("--{flag}"),
            message: format!("expected {dim} comma-separated values, found {}", v.len()),
        }
        .into());
    }
    Ok(v)
}

fn positive(value: f64, flag: &str) -> Result<(), Failure> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("--{flag} must be positive, got {value}")).into())
    }
}

fn solve_report_json(r: &SolveReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn solve_exit(r: &SolveReport) -> i32 {
    if r.converged() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn verdict_exit(v: &Verdict) -> i32 {
    if v.is_falsified() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}

fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Solve {
            problem,
            opts,
            method,
            x0,
        } => {
            positive(opts.tol, "tol")?;
            let p = load_problem(problem)?;
            let x0 = match x0 {
                Some(t) => vector_arg(t, "x0", p.dim())?,
                None => vec![0.0; p.dim()],
            };
            let params = opts.params();
            let report = match method {
                Method::Extragradient => solvers::solve_extragradient(&p, &x0, &params)?,
                Method::FixedPoint => solvers::solve_fixed_point(&p, &x0, &params)?,
            };
            Ok(Outcome {
                code: solve_exit(&report),
                summary: format!(
                    "{}: {:?} after {} iterations, residual {:e}",
                    method.name(),
                    report.status,
                    report.iterations,
                    report.residual
                ),
                report: json!({
                    "command": "solve",
                    "inputs": { "problem": problem.problem, "method": method.name(), "x0": x0 },
                    "result": solve_report_json(&report),
                    "tolerances": { "tol": opts.tol },
                    "params": params,
                    "seed": opts.seed,
                }),
            })
        }
        Command::Verify { problem, x, tol } => {
            positive(*tol, "tol")?;
            let p = load_problem(problem)?;
            let x = vector_arg(x, "x", p.dim())?;
            let rep = p.verify_solution(&x, *tol);
            Ok(Outcome {
                code: if rep.is_solution { EXIT_OK } else { EXIT_NEGATIVE },
                summary: format!(
                    "{} (residual {:e}, feasible {})",
                    if rep.is_solution { "solution" } else { "not a solution" },
                    rep.residual,
                    rep.feasible
                ),
                report: json!({
                    "command": "verify",
                    "inputs": { "problem": problem.problem, "x": x },
                    "result": rep,
                    "tolerances": { "tol": tol },
                }),
            })
        }
        Command::Residual { problem, x, tol } => {
            positive(*tol, "tol")?;
            let p = load_problem(problem)?;
            let x = vector_arg(x, "x", p.dim())?;
            let residual = p.natural_residual(&x)?;
            let map_value = p.eval_map(&x)?;
            Ok(Outcome {
                code: if residual <= *tol { EXIT_OK } else { EXIT_NEGATIVE },
                summary: format!("natural residual {residual:e}"),
                report: json!({
                    "command": "residual",
                    "inputs": { "problem": problem.problem, "x": x },
                    "result": { "residual": residual, "map_value": map_value },
                    "tolerances": { "tol": tol },
                }),
            })
        }
        Command::CheckPd {
            problem,
            samples,
            seed,
            probe,
        } => {
            let p = load_problem(problem)?;
            let probes = match probe {
                Some(t) => vec![vector_arg(t, "probe", p.dim())?],
                None => vec![],
            };
            let verdict =
                structured::check_pd_on_with_probes(p.tensor(), p.set(), *samples, *seed, &probes)?;
            let probe_json = match probes.first() {
                Some(z) => {
                    let x = p.set().project(z)?;
                    let value = p.tensor().form_value(&x)?;
                    json!({ "x": x, "value": value })
                }
                None => Value::Null,
            };
            Ok(Outcome {
                code: verdict_exit(&verdict),
                summary: verdict_summary("positive definiteness", &verdict),
                report: json!({
                    "command": "check-pd",
                    "inputs": { "problem": problem.problem, "samples": samples },
                    "result": verdict,
                    "probe": probe_json,
                    "tolerances": {
                        "strictness": structured::STRICTNESS_TOL,
                        "degeneracy_floor": structured::DEGENERACY_FLOOR,
                    },
                    "seed": seed,
                }),
            })
        }
        Command::CheckSpd {
            problem,
            samples,
            seed,
            probe_x,
            probe_y,
        } => {
            let p = load_problem(problem)?;
            let pairs = probe_pair(probe_x, probe_y, p.dim())?;
            let verdict =
                structured::check_spd_on_with_probes(p.tensor(), p.set(), *samples, *seed, &pairs)?;
            let probe_json = match pairs.first() {
                Some((u, v)) => {
                    let (x, y) = (p.set().project(u)?, p.set().project(v)?);
                    let value = p.tensor().pairing(&x, &y)?;
                    json!({ "x": x, "y": y, "value": value })
                }
                None => Value::Null,
            };
            Ok(Outcome {
                code: verdict_exit(&verdict),
                summary: verdict_summary("strict positive definiteness", &verdict),
                report: json!({
                    "command": "check-spd",
                    "inputs": { "problem": problem.problem, "samples": samples },
                    "result": verdict,
                    "probe": probe_json,
                    "tolerances": {
                        "strictness": structured::STRICTNESS_TOL,
                        "degeneracy_floor": structured::DEGENERACY_FLOOR,
                    },
                    "seed": seed,
                }),
            })
        }
        Command::Modulus {
            problem,
            samples,
            seed,
            probe_x,
            probe_y,
        } => {
            let p = load_problem(problem)?;
            let pairs = probe_pair(probe_x, probe_y, p.dim())?;
            let est = structured::estimate_strong_modulus_with_probes(&p, *samples, *seed, &pairs)?;
            let probe_json = match pairs.first() {
                Some((u, v)) => {
                    let (x, y) = (p.set().project(u)?, p.set().project(v)?);
                    let ratio = structured::modulus_ratio(p.tensor(), &x, &y)?;
                    json!({ "x": x, "y": y, "ratio": ratio })
                }
                None => Value::Null,
            };
            Ok(Outcome {
                code: EXIT_OK,
                summary: format!(
                    "strong-monotonicity constant is at most {:e} ({} pairs)",
                    est.c_hat, est.samples_tested
                ),
                report: json!({
                    "command": "modulus",
                    "inputs": { "problem": problem.problem, "samples": samples },
                    "result": est,
                    "probe": probe_json,
                    "tolerances": { "degeneracy_floor": structured::DEGENERACY_FLOOR },
                    "seed": seed,
                }),
            })
        }
        Command::GameCompile { game, output } => {
            let g = load_game(game)?;
            let p = g.to_tvi()?;
            let doc = ProblemDocument::from_problem(&p);
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&doc).expect("document serializes");
                std::fs::write(path, text + "\n").map_err(|e| {
                    Failure::from(Error::Precondition(format!(
                        "cannot write {}: {e}",
                        path.display()
                    )))
                })?;
            }
            Ok(Outcome {
                code: EXIT_OK,
                summary: format!(
                    "compiled a {}-player game into an order-{} problem of dimension {}",
                    g.players(),
                    p.order(),
                    p.dim()
                ),
                report: json!({
                    "command": "game-compile",
                    "inputs": { "game": game.game, "output": output },
                    "result": { "problem": doc },
                }),
            })
        }
        Command::GameSolve { game, opts, x0 } => {
            positive(opts.tol, "tol")?;
            let g = load_game(game)?;
            let p = g.to_tvi()?;
            let x0 = match x0 {
                Some(t) => vector_arg(t, "x0", p.dim())?,
                None => vec![0.0; p.dim()],
            };
            let params = opts.params();
            let report = solvers::solve_extragradient(&p, &x0, &params)?;
            let nash = g.verify_nash(&report.x, opts.tol)?;
            let code = if report.converged() && nash.is_equilibrium {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            Ok(Outcome {
                code,
                summary: format!(
                    "{:?} after {} iterations; equilibrium: {}",
                    report.status, report.iterations, nash.is_equilibrium
                ),
                report: json!({
                    "command": "game-solve",
                    "inputs": { "game": game.game, "x0": x0 },
                    "result": { "solve": solve_report_json(&report), "nash": nash },
                    "tolerances": { "tol": opts.tol },
                    "params": params,
                    "seed": opts.seed,
                }),
            })
        }
        Command::GameVerify { game, x, tol } => {
            positive(*tol, "tol")?;
            let g = load_game(game)?;
            let x = vector_arg(x, "x", g.total_dim())?;
            let nash = g.verify_nash(&x, *tol)?;
            Ok(Outcome {
                code: if nash.is_equilibrium { EXIT_OK } else { EXIT_NEGATIVE },
                summary: format!(
                    "{} (per-player residuals {:?})",
                    if nash.is_equilibrium { "Nash equilibrium" } else { "not an equilibrium" },
                    nash.per_player_residuals
                ),
                report: json!({
                    "command": "game-verify",
                    "inputs": { "game": game.game, "x": x },
                    "result": nash,
                    "tolerances": { "tol": tol },
                }),
            })
        }
        Command::GusProbe {
            problem,
            opts,
            starts,
            spread,
        } => {
            positive(opts.tol, "tol")?;
            positive(*spread, "spread")?;
            let p = load_problem(problem)?;
            let params = opts.params();
            let rep = solvers::gus_probe(&p, *starts, *spread, &params)?;
            Ok(Outcome {
                code: if rep.unique() { EXIT_OK } else { EXIT_NEGATIVE },
                summary: format!(
                    "{} cluster(s) from {} starts, {} failed",
                    rep.clusters.len(),
                    starts,
                    rep.failures.len()
                ),
                report: json!({
                    "command": "gus-probe",
                    "inputs": { "problem": problem.problem, "starts": starts, "spread": spread },
                    "result": rep,
                    "tolerances": { "tol": opts.tol, "cluster_radius": 10.0 * opts.tol },
                    "params": params,
                    "seed": opts.seed,
                }),
            })
        }
    }
}

fn probe_pair(
    x: &Option<String>,
    y: &Option<String>,
    dim: usize,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>, Failure> {
    match (x, y) {
        (Some(x), Some(y)) => Ok(vec![(
            vector_arg(x, "probe-x", dim)?,
            vector_arg(y, "probe-y", dim)?,
        )]),
        _ => Ok(vec![]),
    }
}

fn verdict_summary(what: &str, v: &Verdict) -> String {
    match v {
        Verdict::Falsified {
            value,
            samples_tested,
            ..
        } => format!("{what} falsified: value {value:e} (after {samples_tested} samples)"),
        Verdict::NotFalsified { samples_tested } => {
            format!("{what} not falsified by {samples_tested} samples")
        }
    }
}
