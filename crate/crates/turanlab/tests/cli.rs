use std::process::{Command, Output};

use turanlab::core::density::two_density;
use turanlab::core::extremal::{ex_exact, Guards};
use turanlab::core::Graph;

fn turanlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turanlab"))
        .args(args)
        .env_remove("TURANLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn density_of_k4() {
    let o = turanlab(&["density", "--graph", "K4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["m2"], "5/2");
    assert_eq!(v["two_balanced"], true);
}

#[test]
fn graph6_and_edge_list_inputs_agree() {
    let a = stdout(&turanlab(&["density", "--graph", "C~"]));
    let b = stdout(&turanlab(&["density", "--graph", "4; 0-1,0-2,0-3,1-2,1-3,2-3"]));
    assert_eq!(a, b);
}

#[test]
fn malformed_graph6_names_the_token() {
    let o = turanlab(&["density", "--graph", "zz~"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("zz~"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn unbalanced_pattern_is_an_input_error() {
    let o = turanlab(&["resolution", "--T", "5; 0-1,0-2,0-3,1-2,1-3,2-3,3-4", "--H", "K5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("T must be 2-balanced"), "{}", stderr(&o));
}

#[test]
fn guard_refusal_exits_2() {
    let o = turanlab(&["--max-n-ex", "5", "ex", "--n", "6", "--T", "K3", "--H", "K4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("guard"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(turanlab(&["ex", "--n", "6"]).status.code(), Some(1));
    assert_eq!(turanlab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(turanlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_only_for_tabular_reports() {
    let o = turanlab(&["--format", "csv", "density", "--graph", "K3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = turanlab(&["--format", "csv", "pi-seq", "--n", "6", "--T", "K3", "--H", "K4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("index,mu,pi_numerator,pi_value_at_n\n"));
}

#[test]
fn scan_defaults_to_csv() {
    let o = turanlab(&["--seed", "1", "--trials", "3", "scan", "--T", "K3", "--H", "K4", "--n", "8", "--exponents", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("exponent,p,trials,mean_ex,std_ex,normalized_pi,mean_NT,threshold_markers")
    );
    // p = 1: every sample is K_8 and ex(8,K3,K4) = 18
    assert!(lines.next().unwrap().starts_with("0/1,1,3,18,0,"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let o = turanlab(&["--out", path.to_str().unwrap(), "density", "--graph", "K3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&turanlab(&["density", "--graph", "K3"])));
}

#[test]
fn thread_count_from_environment() {
    let args = ["--deterministic", "--seed", "4", "--trials", "4", "scan", "--T", "K3", "--H", "K4", "--n", "9", "--exponents", "1/2"];
    let base = stdout(&turanlab(&args));
    for threads in ["1", "3"] {
        let o = Command::new(env!("CARGO_BIN_EXE_turanlab")).args(args).env("TURANLAB_THREADS", threads).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), base);
    }
    let o = Command::new(env!("CARGO_BIN_EXE_turanlab")).args(args).env("TURANLAB_THREADS", "many").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn deterministic_output_is_thread_independent() {
    let run = |t: &str| stdout(&turanlab(&["--deterministic", "--threads", t, "ex", "--n", "8", "--T", "K3", "--H", "K4"]));
    assert_eq!(run("1"), run("4"));
    let v: serde_json::Value = serde_json::from_str(&run("2")).unwrap();
    assert!(v["millis"].is_null());
}

#[test]
fn cli_matches_library() {
    let k = Graph::complete;
    let lib = ex_exact(7, &k(3), &k(4), &Guards::default()).unwrap();
    let o = turanlab(&["ex", "--n", "7", "--T", "K3", "--H", "K4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"].as_u64(), Some(lib.value as u64));

    let m2 = two_density(&Graph::petersen()).unwrap().value;
    let o = turanlab(&["density", "--graph", "petersen"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["m2"].as_str(), Some(m2.to_string().as_str()));
}
