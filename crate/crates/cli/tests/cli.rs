//! End-to-end checks of the command-line surface: arguments, formats, exit
//! codes and file output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bellfacts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellfacts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("bellfacts_cli_{}_{name}", std::process::id()))
}

#[test]
fn solve_exit_codes_and_values() {
    let infeasible = bellfacts(&["solve", "0.75", "0.25"]);
    assert_eq!(exit_code(&infeasible), 1);
    let text = stdout(&infeasible);
    assert!(text.contains("gamma = -0.125000"), "unexpected output: {text}");
    assert!(text.contains("infeasible"));

    let trivial = bellfacts(&["solve", "1", "1"]);
    assert_eq!(exit_code(&trivial), 0);
    assert!(stdout(&trivial).contains("alpha = 1.00000"));

    let central = bellfacts(&["solve", "0.5", "0.5", "--format", "json"]);
    assert_eq!(exit_code(&central), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&central)).unwrap();
    assert_eq!(value["solution"]["alpha"], 0.25);
    assert_eq!(value["solution"]["feasible"], true);

    assert_eq!(exit_code(&bellfacts(&["solve", "1.5", "0.2"])), 2);
    assert_eq!(exit_code(&bellfacts(&["solve", "0.2"])), 2);
}

#[test]
fn table_facts_matches_library_computation() {
    use bellfacts::quantum::{facts_born, MeasurementProtocol, NamedState};

    let output = bellfacts(&["table", "facts", "--format", "csv"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "state,F1,F2,F3");
    assert_eq!(lines.len(), 7);

    let protocol = MeasurementProtocol::default();
    for (line, state) in lines[1..].iter().zip(NamedState::ALL) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], state.tag());
        let expect = facts_born(&state.state(), &protocol).unwrap().as_array();
        for (field, want) in fields[1..].iter().zip(expect) {
            let got: f64 = field.parse().unwrap();
            assert!((got - want).abs() < 1e-11, "{state}: {got} vs {want}");
        }
    }
}

#[test]
fn table_facts_json_is_keyed_by_state_tag() {
    let output = bellfacts(&["table", "facts", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["phi+"]["f2"], 0.75);
    assert_eq!(value["rhomax"]["f3"], 0.5);
    assert_eq!(value.as_object().unwrap().len(), 6);
}

#[test]
fn table_coincidence_shows_constant_kernel_for_rhomax() {
    let output = bellfacts(&["table", "coincidence"]);
    assert_eq!(exit_code(&output), 0);
    let line = stdout(&output)
        .lines()
        .find(|l| l.starts_with("rhomax"))
        .expect("rhomax row")
        .to_string();
    assert!(line.contains("1/2"));
    assert!(line.contains("0.500000"));
}

#[test]
fn unknown_table_is_a_usage_error() {
    assert_eq!(exit_code(&bellfacts(&["table", "nonsense"])), 2);
}

#[test]
fn sweep_row_counts_and_summary() {
    let output = bellfacts(&["sweep", "--p", "10"]);
    assert_eq!(exit_code(&output), 0);
    let rows = stdout(&output).trim_end().lines().count();
    assert_eq!(rows, 287, "header plus 286 records");
    let summary = String::from_utf8(output.stderr.clone()).unwrap();
    assert!(summary.contains("286 points"), "summary: {summary}");

    let tiny = bellfacts(&["sweep", "--p", "1"]);
    assert_eq!(stdout(&tiny).trim_end().lines().count(), 5);
}

#[test]
fn restricted_sweep_saturates_the_upper_boundary() {
    let output = bellfacts(&["sweep", "--p", "25", "--plane", "gamma=0"]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout(&output);
    for line in text.trim_end().lines().skip(1) {
        let fields: Vec<f64> =
            line.split(',').map(|f| f.parse().unwrap()).collect();
        let (f2, f3) = (fields[5], fields[6]);
        assert!((f2 - (f3 + 1.0) / 2.0).abs() <= 1e-12, "off the line: {line}");
    }
}

#[test]
fn sweep_rejects_bad_plane_and_zero_resolution() {
    assert_eq!(exit_code(&bellfacts(&["sweep", "--p", "5", "--plane", "zeta=0"])), 2);
    assert_eq!(exit_code(&bellfacts(&["sweep", "--p", "0"])), 2);
}

#[test]
fn simulate_students_deterministic_classes() {
    let output = bellfacts(&[
        "simulate", "students", "--mixture", "1,0,0,0", "--runs", "100", "--seed", "1",
        "--format", "csv",
    ]);
    assert_eq!(exit_code(&output), 0);
    for line in stdout(&output).trim_end().lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let runs: u64 = fields[1].parse().unwrap();
        if runs > 0 {
            assert_eq!(fields[3].parse::<f64>().unwrap(), 1.0, "line {line}");
        }
    }

    let gamma_only = bellfacts(&[
        "simulate", "students", "--mixture", "0,0,1,0", "--runs", "100000", "--seed", "3",
        "--format", "csv",
    ]);
    let text = stdout(&gamma_only);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    let field = |row: usize, col: usize| lines[row].split(',').nth(col).unwrap().to_string();
    assert_eq!(field(2, 3).parse::<f64>().unwrap(), 0.0, "30° offset always disagrees");
    assert_eq!(field(3, 3).parse::<f64>().unwrap(), 1.0, "60° offset always agrees");
}

#[test]
fn simulate_quantum_perfect_correlation() {
    let output = bellfacts(&[
        "simulate", "quantum", "--state", "phi+", "--runs", "20000", "--seed", "7",
        "--format", "json",
    ]);
    assert_eq!(exit_code(&output), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["classes"][0]["empirical"], 1.0);
    assert_eq!(value["runs"], 20000);
}

#[test]
fn simulate_usage_errors() {
    assert_eq!(
        exit_code(&bellfacts(&["simulate", "quantum", "--state", "sigma", "--runs", "10"])),
        2
    );
    assert_eq!(
        exit_code(&bellfacts(&[
            "simulate", "students", "--mixture", "0.5,0.5,0.5,0.5", "--runs", "10"
        ])),
        2
    );
    assert_eq!(exit_code(&bellfacts(&["simulate", "students", "--runs", "10"])), 2);
    assert_eq!(
        exit_code(&bellfacts(&[
            "simulate", "students", "--mixture", "1,0,0,0", "--runs", "0"
        ])),
        2
    );
}

#[test]
fn simulate_run_log_matches_schema() {
    let log = temp_path("runlog.csv");
    let output = bellfacts(&[
        "simulate", "students", "--mixture", "0.25,0.25,0.25,0.25", "--runs", "50",
        "--seed", "5", "--log", log.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = std::fs::read_to_string(&log).unwrap();
    std::fs::remove_file(&log).ok();
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "run,theta_a,theta_b,r_a,r_b");
    assert_eq!(lines.len(), 51);
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0].parse::<usize>().unwrap(), i);
        for angle in &fields[1..3] {
            assert!(["0", "30", "60"].contains(angle), "angle {angle}");
        }
        for answer in &fields[3..5] {
            assert!(["A", "P"].contains(answer), "answer {answer}");
        }
    }
}

#[test]
fn plot_marker_counts_and_geometry() {
    let small = stdout(&bellfacts(&["plot", "--p", "1"]));
    assert_eq!(small.matches("class=\"classical\"").count(), 4);
    assert_eq!(small.matches("class=\"state\"").count(), 6);

    // The maximally entangled marker sits above the upper boundary line
    // (smaller y in SVG coordinates).
    let attr = |element: &str, name: &str| -> f64 {
        let key = format!("{name}=\"");
        let start = element.find(&key).expect("attribute present") + key.len();
        let end = element[start..].find('"').unwrap() + start;
        element[start..end].parse().unwrap()
    };
    let marker = small
        .lines()
        .find(|l| l.contains("id=\"state-phi+\""))
        .expect("phi+ marker");
    let boundary = small
        .lines()
        .find(|l| l.contains("class=\"boundary\""))
        .expect("upper boundary line");
    let (cx, cy) = (attr(marker, "cx"), attr(marker, "cy"));
    let (x1, y1) = (attr(boundary, "x1"), attr(boundary, "y1"));
    let (x2, y2) = (attr(boundary, "x2"), attr(boundary, "y2"));
    let line_y = y1 + (cx - x1) / (x2 - x1) * (y2 - y1);
    assert!(cy < line_y, "marker at y={cy} is not above the line y={line_y}");
}

#[test]
fn out_flag_writes_files_and_bad_paths_fail() {
    let path = temp_path("facts.csv");
    let output = bellfacts(&[
        "table", "facts", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    assert!(stdout(&output).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("state,F1,F2,F3"));

    let bad = bellfacts(&["sweep", "--p", "2", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(exit_code(&bad), 2);
}

#[test]
fn check_exit_codes_follow_verdicts() {
    assert_eq!(exit_code(&bellfacts(&["check", "--state", "rhomax"])), 0);
    assert_eq!(exit_code(&bellfacts(&["check", "--state", "phi+"])), 1);
    assert_eq!(exit_code(&bellfacts(&["check", "--state", "nope"])), 2);

    let value: serde_json::Value = serde_json::from_str(&stdout(&bellfacts(&[
        "check", "--state", "phi-", "--format", "json",
    ])))
    .unwrap();
    // phi- sits exactly on the classical boundary.
    assert!(value["inequality"]["margin"].as_f64().unwrap().abs() <= 1e-12);
    assert_eq!(value["inequality"]["satisfied"], true);
    assert_eq!(value["solution"]["gamma"], 0.25);
}

#[test]
fn custom_angle_protocol_moves_the_facts() {
    let value: serde_json::Value = serde_json::from_str(&stdout(&bellfacts(&[
        "table", "facts", "--format", "json", "--angles", "0,45,90",
    ])))
    .unwrap();
    assert_eq!(value["phi+"]["f2"], 0.5);
    assert!(value["phi+"]["f3"].as_f64().unwrap() <= 1e-12);
}
