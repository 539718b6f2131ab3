use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::plan::BenchMethod;
use crate::BenchError;

pub const CSV_HEADER: [&str; 9] = [
    "problem", "n", "m", "method", "omega", "outer_ic", "inner_ic", "time_sec", "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Converged,
    MaxOuter,
    InnerFailure,
    Diverged,
    /// The cell could not be run at all (e.g. every ω candidate failed).
    Error,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Converged => "converged",
            CellStatus::MaxOuter => "max_outer",
            CellStatus::InnerFailure => "inner_failure",
            CellStatus::Diverged => "diverged",
            CellStatus::Error => "error",
        }
    }
}

/// One rendered plan cell. Iteration counts are present only for converged cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub problem: String,
    pub n: usize,
    pub m: Option<usize>,
    pub method: BenchMethod,
    pub omega: Option<f64>,
    pub outer_ic: Option<usize>,
    pub inner_ic: Option<usize>,
    pub time_sec: f64,
    pub status: CellStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(BenchError::Parse(format!("unknown format {other:?}"))),
        }
    }
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn fmt_omega(w: Option<f64>) -> String {
    w.map(|w| format!("{w:.2}")).unwrap_or_default()
}

pub fn emit_table(rows: &[BenchRow], format: Format) -> Result<String, BenchError> {
    if rows.is_empty() {
        return Err(BenchError::Plan("no rows to render".into()));
    }
    match format {
        Format::Csv => emit_csv(rows),
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Markdown => Ok(emit_markdown(rows)),
    }
}

fn emit_csv(rows: &[BenchRow]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.problem.clone(),
            r.n.to_string(),
            fmt_opt(r.m),
            r.method.to_string(),
            fmt_omega(r.omega),
            fmt_opt(r.outer_ic),
            fmt_opt(r.inner_ic),
            format!("{:.3}", r.time_sec),
            r.status.as_str().to_string(),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Side-by-side method blocks per problem, one line group per `n`, with `--`
/// in place of counts for failed cells.
fn emit_markdown(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let mut problems: Vec<&str> = Vec::new();
    for r in rows {
        if !problems.contains(&r.problem.as_str()) {
            problems.push(&r.problem);
        }
    }
    for (index, problem) in problems.iter().enumerate() {
        if index > 0 {
            out.push('\n');
        }
        let group: Vec<&BenchRow> = rows.iter().filter(|r| r.problem == *problem).collect();
        let mut methods: Vec<BenchMethod> = Vec::new();
        let mut dims: Vec<usize> = Vec::new();
        for r in &group {
            if !methods.contains(&r.method) {
                methods.push(r.method);
            }
            if !dims.contains(&r.n) {
                dims.push(r.n);
            }
        }

        let _ = writeln!(out, "### {problem}\n");
        let mut header = String::from("| n |");
        let mut rule = String::from("|---|");
        for m in &methods {
            let label = m.label();
            let _ = write!(
                header,
                " {label} m | Outer IC | Inner IC | T (s) | ω |"
            );
            rule.push_str("---|---|---|---|---|");
        }
        let _ = writeln!(out, "{header}\n{rule}");

        for &n in &dims {
            let per_method: Vec<Vec<&BenchRow>> = methods
                .iter()
                .map(|m| group.iter().copied().filter(|r| r.n == n && r.method == *m).collect())
                .collect();
            let lines = per_method.iter().map(Vec::len).max().unwrap_or(0);
            for line in 0..lines {
                let mut row = if line == 0 {
                    format!("| {n} |")
                } else {
                    String::from("| |")
                };
                for cells in &per_method {
                    match cells.get(line) {
                        Some(r) => {
                            let converged = r.status == CellStatus::Converged;
                            let count = |v: Option<usize>| match v {
                                Some(v) if converged => v.to_string(),
                                _ => "--".to_string(),
                            };
                            let time = if converged {
                                format!("{:.3}", r.time_sec)
                            } else {
                                "--".into()
                            };
                            let _ = write!(
                                row,
                                " {} | {} | {} | {} | {} |",
                                fmt_opt(r.m),
                                count(r.outer_ic),
                                count(r.inner_ic),
                                time,
                                fmt_omega(r.omega)
                            );
                        }
                        None => row.push_str(" | | | | |"),
                    }
                }
                let _ = writeln!(out, "{row}");
            }
        }
    }
    out
}
