use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use newton_gsor::{OmegaStrategy, OuterCriterion};
use newton_gsor_bench::{
    emit_table, run_plan_detailed, BandwidthSpec, BenchError, BenchMethod, BenchPlan, BenchRow,
    CellStatus, Format, OmegaSetting,
};

#[derive(Parser)]
#[command(name = "newton-gsor", version, about = "Newton-GSOR solver and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single solve.
    Solve {
        #[arg(long, default_value = "liarwhd")]
        problem: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Bandwidth: an integer or `n-K`.
        #[arg(long, default_value = "n-5")]
        m: BandwidthSpec,
        #[arg(long, default_value = "gsor")]
        method: BenchMethod,
        /// Fill value of the starting point.
        #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
        x0: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a benchmark plan (cross product of all list arguments).
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "liarwhd,diag-aup1")]
        problem: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "20,30,50")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "n-5")]
        m: Vec<BandwidthSpec>,
        #[arg(long, value_delimiter = ',', default_value = "sor,gsor,ggs,gj")]
        method: Vec<BenchMethod>,
        #[arg(long, value_delimiter = ',', default_value = "4", allow_negative_numbers = true)]
        x0: Vec<f64>,
        /// Timed repetitions per cell.
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        /// Worker threads for independent cells.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Relaxation factor, or `auto` to tune it.
    #[arg(long, default_value = "auto")]
    omega: OmegaSetting,
    #[arg(long, value_enum, default_value_t = StrategyArg::Grid)]
    omega_strategy: StrategyArg,
    #[arg(long, default_value_t = 1e-6)]
    eps1: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps2: f64,
    #[arg(long, default_value_t = 200)]
    max_outer: usize,
    #[arg(long, default_value_t = 10_000)]
    max_inner: usize,
    #[arg(long, value_enum, default_value_t = CriterionArg::Grad)]
    criterion: CriterionArg,
    #[arg(long, default_value = "markdown")]
    format: Format,
    /// Output file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the power-iteration start vector.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Grad,
    Fval,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Grid,
    Spectral,
}

impl CommonArgs {
    fn apply(&self, plan: &mut BenchPlan) {
        plan.eps1 = self.eps1;
        plan.eps2 = self.eps2;
        plan.max_outer = self.max_outer;
        plan.max_inner = self.max_inner;
        plan.seed = self.seed;
        plan.criterion = match self.criterion {
            CriterionArg::Grad => OuterCriterion::GradientNorm,
            CriterionArg::Fval => OuterCriterion::FunctionValue,
        };
        plan.omega = match self.omega {
            OmegaSetting::Auto(_) => OmegaSetting::Auto(match self.omega_strategy {
                StrategyArg::Grid => OmegaStrategy::GridByInnerCount,
                StrategyArg::Spectral => OmegaStrategy::SpectralRadiusAtStart,
            }),
            fixed => fixed,
        };
    }
}

fn render(rows: &[(f64, BenchRow)], starts: &[f64], format: Format) -> Result<String, BenchError> {
    let all: Vec<BenchRow> = rows.iter().map(|(_, r)| r.clone()).collect();
    if format != Format::Markdown || starts.len() <= 1 {
        return emit_table(&all, format);
    }
    let mut out = String::new();
    for &x0 in starts {
        let group: Vec<BenchRow> = rows
            .iter()
            .filter(|(start, _)| *start == x0)
            .map(|(_, r)| r.clone())
            .collect();
        if group.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&format!("## x0 = ({x0}, …, {x0})\n\n"));
        out.push_str(&emit_table(&group, format)?);
    }
    Ok(out)
}

fn execute(cli: Cli) -> Result<bool, BenchError> {
    let (plan, jobs, common) = match cli.command {
        Command::Solve {
            problem,
            n,
            m,
            method,
            x0,
            common,
        } => {
            let mut plan = BenchPlan {
                problems: vec![problem],
                dims: vec![n],
                bandwidths: vec![m],
                methods: vec![method],
                starts: vec![x0],
                ..BenchPlan::default()
            };
            common.apply(&mut plan);
            (plan, 1, common)
        }
        Command::Bench {
            problem,
            n,
            m,
            method,
            x0,
            repetitions,
            jobs,
            common,
        } => {
            let mut plan = BenchPlan {
                problems: problem,
                dims: n,
                bandwidths: m,
                methods: method,
                starts: x0,
                repetitions,
                ..BenchPlan::default()
            };
            common.apply(&mut plan);
            (plan, jobs, common)
        }
    };

    let outcomes = run_plan_detailed(&plan, jobs)?;
    for o in &outcomes {
        if let Some(e) = &o.error {
            log::warn!(
                "{} n={} {} x0={}: {e}",
                o.cell.problem, o.cell.n, o.cell.method, o.cell.x0
            );
        }
    }
    let all_converged = outcomes.iter().all(|o| o.row.status == CellStatus::Converged);
    let rows: Vec<(f64, BenchRow)> = outcomes.into_iter().map(|o| (o.cell.x0, o.row)).collect();
    let text = render(&rows, &plan.starts, common.format)?;
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(all_converged)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
