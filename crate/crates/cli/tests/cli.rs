//! End-to-end tests of the `mlefit` binary: exit codes, validation
//! messages, output formats, and reproducibility flags.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mlefit"));
    // Keep the ambient environment from leaking seeds into tests.
    c.env_remove("MLEFIT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    // A broken pipe just means the child failed validation before reading
    // stdin; its output is still what the test wants.
    let _ = child.stdin.as_mut().unwrap().write_all(input.as_bytes());
    child.wait_with_output().expect("wait")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn sample_is_reproducible_and_positive() {
    let args = [
        "sample", "--dist", "ml", "--alpha", "1", "--delta", "1", "--n", "3", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "same seed must reproduce bytes");
    let text = stdout(&a);
    let values: Vec<f64> = text
        .lines()
        .map(|l| l.parse().expect("parses as f64"))
        .collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|&v| v > 0.0));
}

#[test]
fn sample_rejects_alpha_out_of_range_citing_constraint() {
    let o = run(&[
        "sample", "--dist", "ml", "--alpha", "1.5", "--delta", "1", "--n", "3", "--seed", "7",
    ]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("0 < α ≤ 1"),
        "message must cite the constraint: {}",
        stderr(&o)
    );
}

#[test]
fn sample_rejects_zero_n_and_wrong_param() {
    let o = run(&[
        "sample", "--dist", "ml", "--alpha", "1", "--delta", "1", "--n", "0", "--seed", "7",
    ]);
    assert_eq!(code(&o), 2);
    let o = run(&[
        "sample", "--dist", "gml", "--alpha", "0.5", "--delta", "1", "--n", "3", "--seed", "7",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--beta"));
}

#[test]
fn fit_log_reads_stdin_and_prints_json() {
    let o = run_stdin(
        &["fit", "--dist", "ml", "--method", "log"],
        "1.0\n2.0\n0.5\n3.0\n",
    );
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("\"alpha\":"));
    assert!(out.contains("\"method\": \"log\""));
    assert!(out.contains("\"converged\": true"));
}

#[test]
fn fit_rejects_nonpositive_datum_with_line_number() {
    let o = run_stdin(
        &["fit", "--dist", "ml", "--method", "log"],
        "1.0\n-1\n2.0\n",
    );
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("line 2") && stderr(&o).contains("positive"),
        "got: {}",
        stderr(&o)
    );
}

#[test]
fn fit_rejects_gml_confidence_intervals() {
    let o = run_stdin(
        &[
            "fit",
            "--dist",
            "gml",
            "--method",
            "log",
            "--ci-level",
            "0.95",
        ],
        "1.0\n2.0\n",
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unsupported for gml"));
}

#[test]
fn fit_no_root_prints_diagnostic_and_exits_three() {
    let o = run_stdin(&["fit", "--dist", "ml", "--method", "frac"], "1\n4\n");
    assert_eq!(code(&o), 3);
    let out = stdout(&o);
    assert!(out.contains("\"converged\": false"), "got: {out}");
    assert!(out.contains("\"error\""));
}

#[test]
fn fit_recovers_simulated_parameters() {
    // alpha within 0.7 ± 0.01 on a large simulated sample.
    let sample = run(&[
        "sample", "--dist", "ml", "--alpha", "0.7", "--delta", "1", "--n", "100000", "--seed",
        "1234",
    ]);
    assert!(sample.status.success());
    let o = run_stdin(
        &[
            "fit", "--dist", "ml", "--method", "log", "--ci-level", "0.95",
        ],
        &stdout(&sample),
    );
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let alpha = json_number(&out, "\"alpha\":");
    assert!(
        (alpha - 0.7).abs() < 0.01,
        "alpha {alpha} not within 0.01 of 0.7"
    );
    assert!(out.contains("\"ci\""));
}

#[test]
fn mc_requires_a_seed() {
    let o = run(&["mc", "--table", "1", "--replicates", "5"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("seed"));
}

#[test]
fn mc_env_seed_fallback_matches_flag_seed() {
    let flag = run(&["mc", "--table", "1", "--replicates", "5", "--seed", "42"]);
    assert_eq!(code(&flag), 0);
    let env = bin()
        .args(["mc", "--table", "1", "--replicates", "5"])
        .env("MLEFIT_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(code(&env), 0);
    assert_eq!(stdout(&flag), stdout(&env));
}

#[test]
fn mc_table1_has_fifty_rows_in_table_order() {
    let o = run(&["mc", "--table", "1", "--replicates", "5", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "# mlefit-mc v1");
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "alpha_true,param2_true,n,estimator,bias_p1,se_bias_p1,rmse_p1,bias_p2,se_bias_p2,rmse_p2,failures"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50, "5 blocks × 5 sample sizes × 2 estimators");
    // first block is (0.5, 0.5) at n = 25, log then frac
    assert!(rows[0].starts_with("0.5,0.5,25,log,"));
    assert!(rows[1].starts_with("0.5,0.5,25,frac,"));
    assert!(rows[2].starts_with("0.5,0.5,50,log,"));
    // last row is the (0.9, 0.1) block at n = 25000
    assert!(rows[49].starts_with("0.9,0.1,25000,frac,"));
    // numeric fields round-trip through parse
    for field in rows[0].split(',').skip(4) {
        field.parse::<f64>().expect("numeric field parses");
    }
}

#[test]
fn mc_output_is_deterministic_across_runs() {
    let args = ["mc", "--table", "2", "--replicates", "5", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn mc_custom_config_round_trip() {
    let dir = std::env::temp_dir().join(format!("mlefit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("exp.cfg");
    std::fs::write(
        &cfg_path,
        "distribution = ml\nreplicates = 10\nseed = 3\nestimators = log\ncell = 0.7 1.0 50\n",
    )
    .unwrap();
    let o = run(&["mc", "--table", "custom", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("0.7,1,50,log,"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn mc_rejects_bad_table_and_missing_config() {
    assert_eq!(code(&run(&["mc", "--table", "3", "--seed", "1"])), 2);
    assert_eq!(code(&run(&["mc", "--table", "custom", "--seed", "1"])), 2);
}

#[test]
fn eval_known_values() {
    let o = run(&["eval", "--fn", "mlf", "--alpha", "1", "--nu", "1", "--tau", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "2.71828182845905");

    let o = run(&[
        "eval", "--fn", "ml-moment", "--alpha", "0.5", "--delta", "1", "--q", "0.6",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("0 < q < α"));

    let o = run(&[
        "eval", "--fn", "log-moments", "--dist", "ml", "--alpha", "0.5", "--delta", "1",
    ]);
    assert_eq!(code(&o), 0);
    let variance = json_number(&stdout(&o), "\"variance\":");
    assert!((variance - 11.514538467937584).abs() < 1e-9);

    let o = run(&["eval", "--fn", "nonsense"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn eval_convergence_failure_exits_three() {
    let o = run(&[
        "eval", "--fn", "gml-cdf", "--alpha", "0.5", "--beta", "1", "--x", "1e9",
    ]);
    assert_eq!(code(&o), 3);
}

/// Pulls the first number following `key` out of a flat JSON string.
fn json_number(text: &str, key: &str) -> f64 {
    let start = text.find(key).expect("key present") + key.len();
    let rest = &text[start..];
    let end = rest
        .find([',', '}'])
        .expect("delimiter");
    rest[..end].trim().parse().expect("number parses")
}
