//! Benchmark plans, runners and table rendering for the Newton-GSOR solvers.

pub mod plan;
pub mod run;
pub mod table;

pub use plan::{BandwidthSpec, BenchCell, BenchMethod, BenchPlan, OmegaSetting};
pub use run::{run_cell, run_plan, run_plan_detailed, CellOutcome};
pub use table::{emit_table, BenchRow, CellStatus, Format, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{0}")]
    Parse(String),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Solver(#[from] newton_gsor::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
