use std::time::Duration;

use log::info;
use newton_gsor::problems::problem_by_name;
use newton_gsor::{
    newton_iterative, OmegaMode, OmegaSearchSpec, RunReport, RunStatus, SolverConfig, Vector,
};
use rayon::prelude::*;

use crate::plan::{BenchCell, BenchMethod, BenchPlan, OmegaSetting};
use crate::table::{BenchRow, CellStatus};
use crate::BenchError;

/// A cell together with its full solver report (absent when the cell errored
/// before the solve could run).
#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub cell: BenchCell,
    pub row: BenchRow,
    pub report: Option<RunReport>,
    pub error: Option<String>,
}

impl BenchPlan {
    pub fn solver_config(&self, cell: &BenchCell) -> SolverConfig {
        let omega = match (cell.method, self.omega) {
            (BenchMethod::Sor | BenchMethod::Gsor, OmegaSetting::Auto(strategy)) => {
                OmegaMode::Auto(OmegaSearchSpec::with_strategy(strategy))
            }
            (_, OmegaSetting::Fixed(w)) => OmegaMode::Fixed(w),
            _ => OmegaMode::Fixed(1.0),
        };
        SolverConfig {
            eps1: self.eps1,
            eps2: self.eps2,
            bandwidth: cell.m.unwrap_or(0),
            method: cell.method.kind(),
            omega,
            max_outer: self.max_outer,
            max_inner: self.max_inner,
            criterion: self.criterion,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

fn status_of(report: &RunReport) -> CellStatus {
    match report.status {
        RunStatus::Converged => CellStatus::Converged,
        RunStatus::MaxOuterReached => CellStatus::MaxOuter,
        RunStatus::InnerFailure => CellStatus::InnerFailure,
        RunStatus::Diverged => CellStatus::Diverged,
    }
}

/// Runs one cell `plan.repetitions` times. Counts come from the first run;
/// later runs reuse its relaxation factor and only contribute timing.
pub fn run_cell(plan: &BenchPlan, cell: &BenchCell) -> CellOutcome {
    let base = BenchRow {
        problem: cell.problem.clone(),
        n: cell.n,
        m: cell.m,
        method: cell.method,
        omega: None,
        outer_ic: None,
        inner_ic: None,
        time_sec: 0.0,
        status: CellStatus::Error,
    };
    let errored = |e: String| CellOutcome {
        cell: cell.clone(),
        row: base.clone(),
        report: None,
        error: Some(e),
    };

    let problem = match problem_by_name(&cell.problem, cell.n) {
        Ok(p) => p,
        Err(e) => return errored(e.to_string()),
    };
    let x0 = Vector::filled(cell.n, cell.x0);
    let mut config = plan.solver_config(cell);
    let first = match newton_iterative(problem.as_ref(), &x0, &config) {
        Ok(r) => r,
        Err(e) => return errored(e.to_string()),
    };
    if let Some(w) = first.omega_used {
        if matches!(config.omega, OmegaMode::Auto(_)) {
            config.omega = OmegaMode::Fixed(w);
        }
    }
    let mut total = first.wall_time;
    for _ in 1..plan.repetitions {
        match newton_iterative(problem.as_ref(), &x0, &config) {
            Ok(r) => total += r.wall_time,
            Err(e) => return errored(e.to_string()),
        }
    }
    let mean: Duration = total / plan.repetitions as u32;

    let status = status_of(&first);
    let converged = status == CellStatus::Converged;
    info!(
        "{} n={} m={:?} {} x0={}: {:?}, outer {}, inner {}",
        cell.problem, cell.n, cell.m, cell.method, cell.x0, status, first.outer_iterations,
        first.inner_total
    );
    let row = BenchRow {
        omega: first.omega_used,
        outer_ic: converged.then_some(first.outer_iterations),
        inner_ic: converged.then_some(first.inner_total),
        time_sec: mean.as_secs_f64(),
        status,
        ..base
    };
    CellOutcome {
        cell: cell.clone(),
        row,
        error: first.failure.as_ref().map(|f| f.message.clone()),
        report: Some(first),
    }
}

/// Executes every cell with up to `jobs` worker threads. Output order follows
/// plan order; per-cell failures are captured in the rows.
pub fn run_plan_detailed(plan: &BenchPlan, jobs: usize) -> Result<Vec<CellOutcome>, BenchError> {
    let cells = plan.cells()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| BenchError::Plan(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| cells.par_iter().map(|c| run_cell(plan, c)).collect()))
}

pub fn run_plan(plan: &BenchPlan, jobs: usize) -> Result<Vec<BenchRow>, BenchError> {
    Ok(run_plan_detailed(plan, jobs)?
        .into_iter()
        .map(|o| o.row)
        .collect())
}
