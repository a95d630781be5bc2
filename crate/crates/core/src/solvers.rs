//! Projection methods for TVI(X, A, q).
//!
//! For m > 2 the map `F(x) = A x^{m-1} + q` is not globally Lipschitz, so the
//! default method is extragradient with a backtracking step: the step `eta`
//! is shrunk until `eta * ||F(x) - F(y)|| <= c * ||x - y||` holds for the
//! predictor `y = P(x - eta F(x))`. That test implies the weaker inner-product
//! condition `<F(x) - F(y), x - y> <= (c / eta) ||x - y||^2`.

use serde::Serialize;

use crate::error::Result;
use crate::problem::TviProblem;
use crate::rng::{substream, uniform_in_ball};
use crate::tensor::distance;

/// Steps below this are treated as a failed line search.
pub const MIN_STEP: f64 = 1e-16;

/// Fixed-point iteration stops once the residual exceeds this multiple of its running minimum.
pub const DIVERGENCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverParams {
    pub max_iters: usize,
    pub tol: f64,
    pub initial_step: f64,
    pub backtrack_factor: f64,
    pub armijo_constant: f64,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            tol: 1e-8,
            initial_step: 1.0,
            backtrack_factor: 0.5,
            armijo_constant: 0.5,
            seed: 0,
        }
    }
}

impl SolverParams {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn check(&self) -> Result<()> {
        let ok = self.max_iters > 0
            && self.tol > 0.0
            && self.initial_step > 0.0
            && self.backtrack_factor > 0.0
            && self.backtrack_factor < 1.0
            && self.armijo_constant > 0.0
            && self.armijo_constant < 1.0;
        if ok {
            Ok(())
        } else {
            Err(crate::Error::Precondition(format!(
                "invalid solver parameters {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIters,
    LineSearchFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub residual_trace: Vec<f64>,
    /// The starting point was outside X and was replaced by its projection.
    pub projected_start: bool,
    /// Fixed-point iteration stopped on residual blow-up rather than on the budget.
    pub diverged: bool,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

struct Start {
    x: Vec<f64>,
    projected: bool,
}

fn feasible_start(p: &TviProblem, x0: &[f64], tol: f64) -> Result<Start> {
    let x = p.set().project(x0)?;
    let projected = distance(&x, x0) > tol;
    Ok(Start { x, projected })
}

fn is_verified(p: &TviProblem, x: &[f64], tol: f64) -> bool {
    p.verify_solution(x, tol).is_solution
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn step_point(p: &TviProblem, x: &[f64], dir: &[f64], eta: f64) -> Result<Vec<f64>> {
    let z: Vec<f64> = x.iter().zip(dir).map(|(xi, di)| xi - eta * di).collect();
    p.set().project(&z)
}

/// Extragradient with backtracking; see the module docs for the step rule.
pub fn solve_extragradient(p: &TviProblem, x0: &[f64], params: &SolverParams) -> Result<SolveReport> {
    params.check()?;
    let start = feasible_start(p, x0, params.tol)?;
    let mut x = start.x;
    let mut trace = Vec::new();
    let mut eta_prev = params.initial_step;
    let mut iterations = 0;

    let finish = |status, x: Vec<f64>, residual, iterations, trace| SolveReport {
        status,
        x,
        residual,
        iterations,
        residual_trace: trace,
        projected_start: start.projected,
        diverged: false,
    };

    loop {
        let fx = p.eval_map(&x)?;
        let residual = p.residual_with_map(&x, &fx)?;
        trace.push(residual);
        if residual <= params.tol && is_verified(p, &x, params.tol) {
            return Ok(finish(SolveStatus::Converged, x, residual, iterations, trace));
        }
        if iterations == params.max_iters {
            return Ok(finish(SolveStatus::MaxIters, x, residual, iterations, trace));
        }

        let mut eta = (eta_prev / params.backtrack_factor).min(params.initial_step);
        let fy = loop {
            let y = step_point(p, &x, &fx, eta)?;
            let fy = if all_finite(&y) {
                p.eval_map(&y)?
            } else {
                vec![f64::INFINITY; y.len()]
            };
            let df = distance(&fx, &fy);
            let dx = distance(&x, &y);
            if df.is_finite() && eta * df <= params.armijo_constant * dx {
                break fy;
            }
            eta *= params.backtrack_factor;
            if eta < MIN_STEP {
                return Ok(finish(
                    SolveStatus::LineSearchFailed,
                    x,
                    residual,
                    iterations,
                    trace,
                ));
            }
        };
        x = step_point(p, &x, &fy, eta)?;
        eta_prev = eta;
        iterations += 1;
    }
}

/// Projected fixed-point iteration `x <- P(x - gamma F(x))`, halving `gamma`
/// whenever the residual fails to decrease.
pub fn solve_fixed_point(p: &TviProblem, x0: &[f64], params: &SolverParams) -> Result<SolveReport> {
    params.check()?;
    let start = feasible_start(p, x0, params.tol)?;
    let mut x = start.x;
    let mut gamma = params.initial_step;
    let mut residual = p.natural_residual(&x)?;
    let mut best = residual;
    let mut trace = vec![residual];
    let mut iterations = 0;

    let report = |status, x, residual, iterations, trace, diverged| SolveReport {
        status,
        x,
        residual,
        iterations,
        residual_trace: trace,
        projected_start: start.projected,
        diverged,
    };

    loop {
        if residual <= params.tol && is_verified(p, &x, params.tol) {
            return Ok(report(SolveStatus::Converged, x, residual, iterations, trace, false));
        }
        if iterations == params.max_iters {
            return Ok(report(SolveStatus::MaxIters, x, residual, iterations, trace, false));
        }
        let fx = p.eval_map(&x)?;
        let candidate: Vec<f64> = x.iter().zip(&fx).map(|(xi, fi)| xi - gamma * fi).collect();
        if !all_finite(&candidate) {
            return Ok(report(SolveStatus::MaxIters, x, residual, iterations, trace, true));
        }
        let next = p.set().project(&candidate)?;
        let next_residual = p.natural_residual(&next)?;
        iterations += 1;
        trace.push(next_residual);
        if next_residual > DIVERGENCE_FACTOR * best {
            return Ok(report(
                SolveStatus::MaxIters,
                next,
                next_residual,
                iterations,
                trace,
                true,
            ));
        }
        if next_residual >= residual {
            gamma *= params.backtrack_factor;
            if gamma < MIN_STEP {
                return Ok(report(
                    SolveStatus::LineSearchFailed,
                    next,
                    next_residual,
                    iterations,
                    trace,
                    false,
                ));
            }
        }
        best = best.min(next_residual);
        x = next;
        residual = next_residual;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionCluster {
    pub representative: Vec<f64>,
    pub count: usize,
    pub starts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedStart {
    pub start: usize,
    pub status: SolveStatus,
    pub residual: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GusProbeReport {
    pub clusters: Vec<SolutionCluster>,
    pub failures: Vec<FailedStart>,
    pub cluster_radius: f64,
    pub max_converged_residual: f64,
}

impl GusProbeReport {
    /// Exactly one cluster and no failed starts.
    pub fn unique(&self) -> bool {
        self.clusters.len() == 1 && self.failures.is_empty()
    }
}

/// Multi-start extragradient; converged endpoints within `10 * tol` share a cluster.
///
/// Start `i` is drawn uniformly from the ball of radius `spread` using the
/// substream `(params.seed, i)` and then projected onto X.
pub fn gus_probe(
    p: &TviProblem,
    num_starts: usize,
    spread: f64,
    params: &SolverParams,
) -> Result<GusProbeReport> {
    if num_starts == 0 || !(spread > 0.0) {
        return Err(crate::Error::Precondition(
            "gus_probe needs at least one start and a positive spread".into(),
        ));
    }
    let radius = 10.0 * params.tol;
    let mut clusters: Vec<SolutionCluster> = Vec::new();
    let mut failures = Vec::new();
    let mut max_converged_residual: f64 = 0.0;
    for start in 0..num_starts {
        let mut rng = substream(params.seed, start as u64);
        let z = uniform_in_ball(&mut rng, p.dim(), spread);
        let report = solve_extragradient(p, &z, params)?;
        if !report.converged() {
            failures.push(FailedStart {
                start,
                status: report.status,
                residual: report.residual,
                x: report.x,
            });
            continue;
        }
        max_converged_residual = max_converged_residual.max(report.residual);
        match clusters
            .iter_mut()
            .find(|c| distance(&c.representative, &report.x) <= radius)
        {
            Some(c) => {
                c.count += 1;
                c.starts.push(start);
            }
            None => clusters.push(SolutionCluster {
                representative: report.x,
                count: 1,
                starts: vec![start],
            }),
        }
    }
    Ok(GusProbeReport {
        clusters,
        failures,
        cluster_radius: radius,
        max_converged_residual,
    })
}
