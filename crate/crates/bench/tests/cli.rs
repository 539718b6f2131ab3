use std::process::Command;

use newton_gsor::problems::problem_by_name;
use newton_gsor::{newton_iterative, MethodKind, OmegaMode, SolverConfig, Vector};
use newton_gsor_bench::{
    run_plan, BandwidthSpec, BenchMethod, BenchPlan, BenchRow, CellStatus, OmegaSetting,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_newton-gsor"))
}

fn small_plan() -> BenchPlan {
    BenchPlan {
        problems: vec!["liarwhd".into(), "diag-aup1".into()],
        dims: vec![10],
        bandwidths: vec![BandwidthSpec::NMinus(3)],
        methods: vec![BenchMethod::Sor, BenchMethod::Gsor, BenchMethod::Direct],
        starts: vec![4.0],
        ..BenchPlan::default()
    }
}

#[test]
fn plan_counts_are_deterministic_across_job_counts() {
    let strip = |rows: Vec<BenchRow>| -> Vec<_> {
        rows.into_iter()
            .map(|r| (r.problem, r.n, r.m, r.method, r.omega, r.outer_ic, r.inner_ic, r.status))
            .collect()
    };
    let serial = strip(run_plan(&small_plan(), 1).unwrap());
    let parallel = strip(run_plan(&small_plan(), 4).unwrap());
    assert_eq!(serial, parallel);
    assert!(serial.iter().all(|r| r.7 == CellStatus::Converged));
}

#[test]
fn full_band_gsor_with_unit_omega_matches_direct() {
    for name in ["liarwhd", "diag-aup1"] {
        let n = 20;
        let p = problem_by_name(name, n).unwrap();
        let x0 = Vector::filled(n, 4.0);
        let direct = SolverConfig::default().with_method(MethodKind::Direct);
        let gsor = SolverConfig::default()
            .with_method(MethodKind::GeneralizedSor)
            .with_bandwidth(n - 1)
            .with_omega(OmegaMode::Fixed(1.0));
        let a = newton_iterative(p.as_ref(), &x0, &direct).unwrap();
        let b = newton_iterative(p.as_ref(), &x0, &gsor).unwrap();
        assert!(a.converged() && b.converged());
        assert_eq!(a.outer_iterations, b.outer_iterations);
        assert!(a.x_final.sub(&b.x_final).norm_inf() <= 1e-8);
    }
}

#[test]
fn fixed_omega_is_reported_verbatim() {
    let plan = BenchPlan {
        omega: OmegaSetting::Fixed(1.3),
        methods: vec![BenchMethod::Gsor],
        ..small_plan()
    };
    for row in run_plan(&plan, 2).unwrap() {
        assert_eq!(row.omega, Some(1.3));
    }
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let status = bin()
        .args(["bench", "--problem", "liarwhd", "--n", "10", "--m", "n-3"])
        .args(["--method", "sor,gsor,ggs,gj,direct", "--format", "csv", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("problem,n,m,method,omega,outer_ic,inner_ic,time_sec,status")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.ends_with(",converged")), "{text}");
    assert!(rows.iter().any(|r| r.starts_with("liarwhd,10,,direct,,")), "{text}");
}

#[test]
fn formats_agree_on_counts() {
    let run = |format: &str| {
        let out = bin()
            .args(["solve", "--problem", "diag-aup1", "--n", "12", "--m", "4"])
            .args(["--method", "ggs", "--format", format])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let rows: Vec<BenchRow> = serde_json::from_str(&run("json")).unwrap();
    assert_eq!(rows.len(), 1);
    let (outer, inner) = (rows[0].outer_ic.unwrap(), rows[0].inner_ic.unwrap());

    let csv = run("csv");
    let fields: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields[5], outer.to_string());
    assert_eq!(fields[6], inner.to_string());

    let md = run("markdown");
    assert!(md.contains(&format!("| 12 | 4 | {outer} | {inner} |")), "{md}");
}

#[test]
fn failed_cells_exit_with_two() {
    let out = bin()
        .args(["solve", "--problem", "liarwhd", "--n", "10", "--method", "gj"])
        .args(["--max-outer", "1", "--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().nth(1).unwrap().ends_with(",max_outer"), "{csv}");
}

#[test]
fn bad_arguments_exit_with_one() {
    let bad_bandwidth = bin()
        .args(["solve", "--n", "10", "--m", "10"])
        .output()
        .unwrap();
    assert_eq!(bad_bandwidth.status.code(), Some(1));

    let bad_problem = bin().args(["solve", "--problem", "rosenbrock"]).output().unwrap();
    assert_eq!(bad_problem.status.code(), Some(1));

    let bad_omega = bin().args(["solve", "--omega", "2.5"]).output().unwrap();
    assert_eq!(bad_omega.status.code(), Some(1));
}
