use std::path::Path;
use std::process::{Command, Output};

use awcn_cli::{build_table, RunConfig};
use clap::Parser;
use serde_json::Value;

fn awcn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_awcn")).args(args).output().unwrap()
}

fn csv_of(args: &[&str]) -> String {
    let out = awcn(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn header(csv: &str) -> &str {
    csv.lines().next().unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let idx = header(csv).split(',').position(|c| c == name).unwrap();
    csv.lines().skip(1).map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn headers_match_the_schema() {
    let cases: [(&[&str], &str); 5] = [
        (&["bounds", "--gammas", "1"], "gamma,lb_epi,ub_genie,ub_cpuc,mi_antipodal"),
        (
            &["ba", "--gammas", "1", "--m-inputs", "21", "--b-outputs", "201"],
            "gamma,ba_rate,avg_cost,iterations,converged",
        ),
        (
            &["gmi", "--snr", "1", "--lambda2-ratios", "1", "--mc-samples", "2000", "--quad-nodes", "16"],
            "snr,lambda2_over_sigma2,gmi,theta_star,std_error,awgn_capacity",
        ),
        (
            &["decode-sim", "--block-lens", "4", "--pairs", "10", "--ensembles", "gaussian"],
            "ensemble,N,P_over_lambda2,mc_error,std_error,analytic_limit",
        ),
        (
            &["vector", "--gains", "1,2", "--gammas", "1", "--mc-samples", "1000"],
            "h,P_over_lambda2,lb_selection,ub_genie_mc,cpuc_slope,gain_bracket",
        ),
    ];
    for (args, expected) in cases {
        assert_eq!(header(&csv_of(args)), expected, "{args:?}");
    }
}

#[test]
fn numbers_carry_nine_significant_digits() {
    let csv = csv_of(&["bounds", "--gammas", "10"]);
    let row = csv.lines().nth(1).unwrap();
    for field in row.split(',') {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.replace('.', "").len(), 9, "{field}");
    }
}

#[test]
fn default_bounds_grid_keeps_the_gap_below_six_tenths() {
    let csv = csv_of(&["bounds"]);
    let lb = column(&csv, "lb_epi");
    let genie = column(&csv, "ub_genie");
    let cpuc = column(&csv, "ub_cpuc");
    assert_eq!(lb.len(), 126);
    for i in 0..lb.len() {
        assert!(genie[i].min(cpuc[i]) - lb[i] <= 0.6);
    }
}

#[test]
fn json_mirrors_csv() {
    let csv = csv_of(&["bounds", "--gamma-grid", "1:100:2"]);
    let json: Value = serde_json::from_str(&csv_of(&["bounds", "--gamma-grid", "1:100:2", "--format", "json"])).unwrap();
    let records = json.as_array().unwrap();
    assert_eq!(records.len(), csv.lines().count() - 1);
    let lb = column(&csv, "lb_epi");
    for (r, x) in records.iter().zip(lb) {
        assert_eq!(r["lb_epi"].as_f64().unwrap(), x);
    }
}

#[test]
fn randomized_commands_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["gmi", "--snr", "0,2", "--mc-samples", "3000", "--quad-nodes", "32"],
        &["decode-sim", "--block-lens", "10,50", "--pairs", "500"],
        &["vector", "--gammas", "1,100", "--mc-samples", "5000", "--format", "json"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let paths: Vec<_> = (0..2).map(|k| dir.path().join(format!("{i}-{k}.out"))).collect();
        for p in &paths {
            let mut full = args.to_vec();
            full.extend(["--out", p.to_str().unwrap()]);
            assert!(awcn(&full).status.success());
        }
        let a = std::fs::read(&paths[0]).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, std::fs::read(&paths[1]).unwrap(), "{args:?}");
    }
}

#[test]
fn seed_changes_randomized_output() {
    let args = ["decode-sim", "--block-lens", "10", "--pairs", "500", "--ensembles", "gaussian"];
    let a = csv_of(&args);
    let mut reseeded = args.to_vec();
    reseeded.extend(["--seed", "7"]);
    assert_ne!(a, csv_of(&reseeded));
}

#[test]
fn gmi_reproduces_three_curves() {
    let csv = csv_of(&[
        "gmi",
        "--snr",
        "0,1,5",
        "--mc-samples",
        "5000",
        "--quad-nodes",
        "48",
    ]);
    let ratios = column(&csv, "lambda2_over_sigma2");
    let gmi = column(&csv, "gmi");
    let cap = column(&csv, "awgn_capacity");
    let se = column(&csv, "std_error");
    assert_eq!(ratios.len(), 9);
    for curve in gmi.chunks(3) {
        assert_eq!(curve[0], 0.0);
        assert!(curve[0] < curve[1] && curve[1] < curve[2], "{curve:?}");
    }
    for i in 0..gmi.len() {
        assert!(gmi[i] <= cap[i] + 3.0 * se[i]);
    }
}

#[test]
fn validation_errors_exit_with_two_and_a_record() {
    let cases: [&[&str]; 6] = [
        &["bounds", "--gammas", ""],
        &["bounds", "--gamma-grid", "10:1:5"],
        &["gmi", "--snr", "1", "--lambda2-ratios", "-1"],
        &["decode-sim", "--ensembles", "uniform"],
        &["vector", "--gains", "0,0"],
        &["bounds", "--format", "yaml"],
    ];
    for args in cases {
        let out = awcn(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let last = String::from_utf8(out.stderr).unwrap();
        let record: Value = serde_json::from_str(last.lines().last().unwrap()).unwrap();
        assert_eq!(record["exit_code"], 2);
    }
}

#[test]
fn unwritable_output_exits_with_two() {
    let out = awcn(&["bounds", "--gammas", "1", "--out", "/nonexistent-dir/table.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"io\""));
}

#[test]
fn unconverged_solver_exits_with_three_after_writing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ba.csv");
    let out = awcn(&[
        "ba",
        "--gammas",
        "10",
        "--m-inputs",
        "21",
        "--b-outputs",
        "201",
        "--max-iter",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let written = std::fs::read_to_string(Path::new(&path)).unwrap();
    assert!(written.lines().nth(1).unwrap().ends_with(",false"));
}

#[test]
fn library_entry_point_builds_tables() {
    let config = RunConfig::parse_from(["awcn", "bounds", "--power", "4,16", "--lambda", "2"]);
    let table = build_table(&config).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert_eq!(table.rows[0][0], awcn_cli::table::Cell::Num(1.0));
    assert_eq!(table.rows[1][0], awcn_cli::table::Cell::Num(4.0));
}
