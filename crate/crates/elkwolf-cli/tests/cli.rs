//! End-to-end tests of the compiled binary: output contracts, exit codes,
//! configuration handling, and byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> (i32, String, String) {
    run_in(args, None)
}

fn run_in(args: &[&str], dir: Option<&Path>) -> (i32, String, String) {
    let mut command = Command::new(env!("CARGO_BIN_EXE_elkwolf"));
    if let Some(dir) = dir {
        command.current_dir(dir);
    }
    let Output { status, stdout, stderr } =
        command.args(args).output().expect("binary runs");
    (
        status.code().expect("no signal"),
        String::from_utf8(stdout).expect("utf8 stdout"),
        String::from_utf8(stderr).expect("utf8 stderr"),
    )
}

fn fields(row: &str) -> Vec<f64> {
    row.split(',')
        .map(|cell| cell.parse::<f64>().expect("numeric cell"))
        .collect()
}

#[test]
fn equilibria_prints_the_boundary_row() {
    let (code, stdout, _) = run(&["equilibria"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next(), Some("kind,E,N,P,exists"));
    assert!(stdout.contains("extinction,0,0,0,true"));
    assert!(stdout.contains("0,300,1.6"), "boundary row: {stdout}");
    let boundary = stdout
        .lines()
        .find(|line| line.starts_with("no_refuge_elk"))
        .expect("boundary row present");
    let cells: Vec<&str> = boundary.split(',').collect();
    assert_eq!(cells[4], "true");
    let point = fields(&cells[1..4].join(","));
    assert!(point[0].abs() < 1e-12);
    assert!((point[1] - 300.0).abs() < 1e-12);
    assert!((point[2] - 1.6).abs() < 1e-12);
    let coexistence = stdout
        .lines()
        .find(|line| line.starts_with("coexistence"))
        .expect("coexistence row present");
    let cells: Vec<&str> = coexistence.split(',').collect();
    let point = fields(&cells[1..4].join(","));
    assert!((point[0] - 396.31).abs() < 0.5);
    assert!((point[1] - 280.18).abs() < 0.5);
    assert!((point[2] - 3.01).abs() < 0.5);
}

#[test]
fn config_files_and_overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("run.cfg");
    std::fs::write(&flat, "# growth outside\nbeta = 0.2\n").unwrap();
    let (code, stdout, stderr) =
        run(&["equilibria", "--config", flat.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("no_refuge_elk,0,300,2,true"), "{stdout}");
    assert!(stderr.contains("alpha"), "missing-key notice expected: {stderr}");
    assert!(!stderr.contains("beta,"), "beta was given: {stderr}");

    let json = dir.path().join("run.json");
    std::fs::write(&json, r#"{"beta": 0.2}"#).unwrap();
    let (code, json_stdout, _) =
        run(&["equilibria", "--config", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json_stdout, stdout, "flat and JSON configs agree");

    let (code, stdout, _) = run(&[
        "equilibria",
        "--config",
        flat.to_str().unwrap(),
        "--set",
        "beta=0.16",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("0,300,1.6"), "--set overrides the file: {stdout}");
}

#[test]
fn simulate_example_converges_to_coexistence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("orbit.csv");
    let (code, stdout, _) = run(&[
        "simulate", "--e0", "340", "--n0", "380", "--p0", "4", "--t-end", "5000",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "no data on stdout with --out");
    let content = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines[0], "t,E,N,P");
    assert_eq!(lines.len(), 402, "header plus sample_count+1 rows");
    let last = fields(lines.last().unwrap());
    assert!((last[0] - 5000.0).abs() < 1e-9);
    assert!((last[1] - 396.31).abs() / 396.31 < 0.01);
    assert!((last[2] - 280.18).abs() / 280.18 < 0.01);
    assert!((last[3] - 3.01).abs() / 3.01 < 0.01);
}

#[test]
fn hopf_example_locates_the_crossing() {
    let (code, stdout, _) = run(&[
        "hopf", "--param", "beta", "--min", "0.05", "--max", "0.2",
        "--set", "gamma=0.11",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(
        lines[0],
        "beta_sharp,psi0,b1,b2,b3,transversality,S1,S2,S3,l1_re,l1_im"
    );
    let row = fields(lines[1]);
    let (beta_sharp, psi0, transversality) = (row[0], row[1], row[5]);
    assert!((beta_sharp - 0.1437).abs() < 1e-3, "beta_sharp {beta_sharp}");
    assert!(
        (psi0 - 0.24585200517341058).abs() / 0.24585200517341058 < 1e-6,
        "psi0 {psi0}"
    );
    assert!(
        (transversality - 0.0055489709408811086).abs() / 0.0055489709408811086 < 1e-6,
        "transversality {transversality}"
    );
    let (s1, s2) = (row[6], row[7]);
    assert!(s1 > 0.0 && s2 < 0.0, "supercritical: S1 {s1}, S2 {s2}");
    let b2 = row[3];
    assert!((psi0 * psi0 - b2).abs() < 1e-12 * b2.abs(), "psi0 = sqrt(b2)");
}

#[test]
fn normalform_reports_the_coefficient_table() {
    let (code, stdout, _) = run(&[
        "normalform", "--min", "0.05", "--max", "0.2", "--set", "gamma=0.11",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next(), Some("quantity,re,im"));
    for quantity in [
        "parameter_value", "psi0", "t_11", "hess3_33", "g20", "g21", "l1", "s3",
    ] {
        assert!(
            stdout.lines().any(|line| line.starts_with(&format!("{quantity},"))),
            "row {quantity} present"
        );
    }
    let g21_zero = stdout
        .lines()
        .find(|line| line.starts_with("big_g21,"))
        .expect("resonant cubic row");
    assert_eq!(g21_zero, "big_g21,0,0", "quadratic field has no cubic term");
}

#[test]
fn csv_output_is_byte_identical_across_reruns() {
    let scan_args = [
        "scan", "--x-res", "5", "--y-res", "4", "--x-param", "gamma",
        "--y-param", "xi",
    ];
    let (code, first, _) = run(&scan_args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&scan_args);
    assert_eq!(first, second);
    assert_eq!(first.lines().count(), 21, "header plus 20 cells");

    let prcc_args = ["prcc", "--samples", "20", "--time-points", "3"];
    let (code, first, _) = run(&prcc_args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&prcc_args);
    assert_eq!(first, second);
    assert_eq!(
        first.lines().next(),
        Some("parameter,output,time,prcc,t,p")
    );
    assert_eq!(first.lines().count(), 1 + 11 * 3 * 3);
}

#[test]
fn bifurcation_sweep_reports_extrema_and_marker() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bifurcation.csv");
    let plot = dir.path().join("bifurcation.svg");
    let (code, stdout, _) = run(&[
        "bifurcation", "--set", "gamma=0.11", "--min", "0.13", "--max", "0.155",
        "--steps", "2", "--t-end", "60", "--out", out.to_str().unwrap(),
        "--plot", plot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let content = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = content.lines().collect();
    assert_eq!(lines[0], "param,variable,kind,value");
    let marker = lines.last().unwrap();
    assert!(marker.contains(",hopf,"), "marker row last: {marker}");
    let value: f64 = marker.split(',').last().unwrap().parse().unwrap();
    assert!((value - 0.1437).abs() < 1e-3);
    assert!(content.contains(",P,terminal,"));
    let svg = std::fs::read_to_string(&plot).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("stroke-dasharray"), "marker rule drawn");
}

#[test]
fn plots_are_standalone_svg() {
    let dir = tempfile::tempdir().unwrap();
    let orbit_plot = dir.path().join("orbit.svg");
    let (code, _, _) = run(&[
        "simulate", "--t-end", "50", "--plot", orbit_plot.to_str().unwrap(),
        "--out", dir.path().join("orbit.csv").to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(&orbit_plot).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 3, "E, N, P series");
    assert!(svg.ends_with("</svg>\n"));

    let grid_plot = dir.path().join("grid.svg");
    let (code, _, _) = run(&[
        "scan", "--x-res", "2", "--y-res", "2", "--x-min", "0.02", "--x-max",
        "0.05", "--y-min", "0.14", "--y-max", "0.18", "--plot",
        grid_plot.to_str().unwrap(), "--out",
        dir.path().join("grid.csv").to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(&grid_plot).unwrap();
    assert_eq!(svg.matches("class=\"cell\"").count(), 4);
    assert!(
        svg.lines()
            .filter(|line| line.contains("class=\"cell\""))
            .all(|line| line.contains("fill=\"red\"")),
        "all-stable patch renders red"
    );
}

#[test]
fn selftest_runs_selected_criteria() {
    let (code, stdout, _) = run(&["selftest", "--only", "1", "--only", "boundary_equilibrium"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("criterion 01"));
    assert!(lines[1].starts_with("criterion 02"));
    assert!(lines.iter().all(|line| line.contains(" PASS ")));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("selftest.csv");
    let (code, stdout, stderr) =
        run(&["selftest", "--only", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "lines move to stderr with --out");
    assert!(stderr.contains("criterion 02"));
    let content = std::fs::read_to_string(&out).unwrap();
    assert!(content.starts_with("id,name,passed,runtime_s,detail\n"));
    assert!(content.contains("2,boundary_equilibrium,true,"));

    let (code, _, _) = run(&["selftest", "--only", "unknown_name"]);
    assert_eq!(code, 1, "unknown selector is a usage error");
}

#[test]
fn exit_codes_distinguish_usage_from_numeric_failures() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, stderr) = run(&["frobnicate"]);
    assert_eq!((code, stdout.is_empty()), (1, true));
    assert!(!stderr.is_empty());

    let (code, _, _) = run(&["equilibria", "--bogus"]);
    assert_eq!(code, 1);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "sigma = 3\n").unwrap();
    let (code, _, stderr) = run(&["equilibria", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("sigma"), "names the unknown key: {stderr}");

    let (code, _, stderr) = run(&["equilibria", "--set", "beta=-1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("beta"));

    let (code, _, _) = run(&["equilibria", "--config", "/nonexistent/path.cfg"]);
    assert_eq!(code, 1);

    // A clean sweep with no crossing is a numeric failure, not usage.
    let (code, _, stderr) = run(&[
        "hopf", "--min", "0.155", "--max", "0.195", "--set", "gamma=0.11",
    ]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("no stability crossing"));

    let (code, _, _) = run(&["selftest", "--only", "4"]);
    assert_eq!(code, 2, "documented failing criterion propagates");

    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("simulate"));
}
