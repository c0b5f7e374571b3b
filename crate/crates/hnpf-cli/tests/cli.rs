//! End-to-end tests of the `hnpf` binary:every subcommand, exit codes, and
//! artifact layout.

use std::path::Path;
use std::process::{Command, Output};

fn hnpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnpf"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process should exit normally")
}

/// A run config small enough for tests while exercising the full pipeline.
fn write_tiny_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("tiny.toml");
    std::fs::write(
        &path,
        "[sample]\nn_train = 300\nn_infer = 800\n\n\
         [train]\nmax_epochs = 3\nsteps_per_epoch = 40\nbatch_size = 16\npatience = 3\n",
    )
    .unwrap();
    path
}

#[test]
fn list_cases_names_every_runnable_case() {
    let out = hnpf(&["list-cases"]);
    assert_eq!(exit_code(&out), 0);
    let listing = stdout(&out);
    let names: Vec<&str> = listing.lines().collect();
    assert_eq!(
        names,
        vec!["I", "II", "III", "IV", "V", "VI", "VII", "fair-search-binomial", "fair-search-uniform"]
    );
}

#[test]
fn run_executes_a_case_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out_dir = dir.path().join("artifacts");
    let out = hnpf(&[
        "run",
        "--case",
        "II",
        "--seed",
        "7",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("density"), "{text}");
    assert!(text.contains("front error"), "{text}");
    for file in ["config.json", "train_samples.csv", "loss.csv", "model.txt", "weak_front.csv", "strong_front.csv", "report.json"] {
        assert!(out_dir.join(file).exists(), "missing {file}");
    }
}

#[test]
fn run_rejects_unknown_cases_and_zero_epochs() {
    let unknown = hnpf(&["run", "--case", "nosuch"]);
    assert_eq!(exit_code(&unknown), 2);
    assert!(stderr(&unknown).contains("unknown case"), "{}", stderr(&unknown));

    let zero = hnpf(&["run", "--case", "I", "--epochs", "0"]);
    assert_eq!(exit_code(&zero), 2);

    let threshold = hnpf(&["run", "--case", "I", "--threshold", "1.5"]);
    assert_eq!(exit_code(&threshold), 2);
    assert!(stderr(&threshold).contains("threshold"), "{}", stderr(&threshold));
}

#[test]
fn run_accepts_a_problem_definition_file() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("ridge.toml");
    std::fs::write(
        &problem,
        "name = \"ridge\"\n\n\
         [[variable]]\nlower = 0.0\nupper = 1.0\n\n\
         [[variable]]\nlower = -1.0\nupper = 1.0\n\n\
         [[objective]]\nexpression = \"x1\"\ngradient = [\"1\", \"0\"]\n\n\
         [[objective]]\nexpression = \"1 - x1 + x2^2\"\ngradient = [\"-1\", \"2*x2\"]\n",
    )
    .unwrap();
    let config = write_tiny_config(dir.path());
    let out_dir = dir.path().join("ridge-run");
    let out = hnpf(&[
        "run",
        "--case",
        problem.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("ridge"), "{text}");
    assert!(text.contains("no analytic front"), "{text}");
    assert!(out_dir.join("strong_front.csv").exists());
}

#[test]
fn filter_reduces_a_hand_file_and_agrees_with_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.csv");
    // Three mutually non-dominated rows plus one dominated by the first.
    std::fs::write(&input, "f_1,f_2\n1,9\n2,8\n3,7\n9,9\n").unwrap();

    let swept = dir.path().join("swept.csv");
    let out = hnpf(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--output",
        swept.to_str().unwrap(),
        "--h",
        "0.1",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("kept 3 of 4"), "{}", stdout(&out));

    let exact = dir.path().join("exact.csv");
    let out = hnpf(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--output",
        exact.to_str().unwrap(),
        "--oracle",
    ]);
    assert_eq!(exit_code(&out), 0);

    let swept_text = std::fs::read_to_string(&swept).unwrap();
    let exact_text = std::fs::read_to_string(&exact).unwrap();
    assert_eq!(swept_text, exact_text, "sweep and oracle disagree");
    let lines: Vec<&str> = swept_text.lines().collect();
    assert_eq!(lines[0], "index,f_1,f_2");
    assert_eq!(lines.len(), 4); // header + 3 survivors
    assert!(lines[1].starts_with("0,"), "{swept_text}");
}

#[test]
fn filter_respects_the_optimization_sense() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.csv");
    // Under maximization only (9,9) survives; under minimization it is the
    // one dominated row.
    std::fs::write(&input, "f_1,f_2\n1,9\n2,8\n3,7\n9,9\n").unwrap();
    let output = dir.path().join("best.csv");
    let out = hnpf(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--sense",
        "max",
        "--oracle",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("kept 1 of 4"), "{}", stdout(&out));
    let text = std::fs::read_to_string(&output).unwrap();
    // Original (un-negated) values are written back.
    assert_eq!(text.lines().nth(1).unwrap(), "3,9.00000000e0,9.00000000e0");
}

#[test]
fn filter_reports_bad_inputs_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "f_1,f_2\n").unwrap();
    let out = hnpf(&[
        "filter",
        "--input",
        empty.to_str().unwrap(),
        "--output",
        dir.path().join("out.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("no data rows"), "{}", stderr(&out));

    let malformed = dir.path().join("bad.csv");
    std::fs::write(&malformed, "f_1,f_2\n1,2\nthree,4\n").unwrap();
    let out = hnpf(&[
        "filter",
        "--input",
        malformed.to_str().unwrap(),
        "--output",
        dir.path().join("out2.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn certify_scores_candidate_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("candidates.csv");
    // Case I optima lie on the diagonal; the last row is far off it.
    let mut text = String::from("x_1,x_2\n");
    for i in 0..10 {
        let v = -0.6 + 0.12 * i as f64;
        text.push_str(&format!("{v},{v}\n"));
    }
    std::fs::write(&input, &text).unwrap();
    let out = hnpf(&["certify", "--case", "I", "--input", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("10 / 10"), "{}", stdout(&out));

    text.push_str("0.6,-0.6\n");
    std::fs::write(&input, &text).unwrap();
    let out = hnpf(&["certify", "--case", "I", "--input", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("10 / 11"), "{}", stdout(&out));
}

#[test]
fn export_probability_field_grids_a_saved_model() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("model.txt");
    hnpf::MlpModel::init(&[(0.0, 1.0), (0.0, 1.0)], 7).save(&model_path).unwrap();

    let output = dir.path().join("field.csv");
    let out = hnpf(&[
        "export-probability-field",
        "--model",
        model_path.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--grid",
        "21",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("441 rows"), "{}", stdout(&out));
    let text = std::fs::read_to_string(&output).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x_1,x_2,p_pareto");
    assert_eq!(text.lines().count(), 442);

    // Too many inputs for a flat grid file.
    let wide = dir.path().join("wide.txt");
    hnpf::MlpModel::init(&[(0.0, 1.0); 4], 7).save(&wide).unwrap();
    let out = hnpf(&[
        "export-probability-field",
        "--model",
        wide.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("at most 3"), "{}", stderr(&out));

    // Missing file is a usage error.
    let out = hnpf(&[
        "export-probability-field",
        "--model",
        dir.path().join("nope.txt").to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn run_all_tabulates_and_signals_failures() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out_dir = dir.path().join("sweep");

    // A run that cannot extract anything: nothing reaches probability 1.
    let out = hnpf(&[
        "run-all",
        "--cases",
        "II",
        "--threshold",
        "1",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("FAILED"), "{text}");
    assert!(text.contains("filter"), "{text}");

    // Unknown names are usage errors, caught before anything runs.
    let out = hnpf(&["run-all", "--cases", "II,nosuch", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);

    // A healthy sweep over one case.
    let ok_dir = dir.path().join("ok");
    let out = hnpf(&[
        "run-all",
        "--cases",
        "II",
        "--config",
        config.to_str().unwrap(),
        "--out",
        ok_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("case"), "{text}");
    assert!(text.contains("II"), "{text}");
    assert!(ok_dir.join("case-ii").join("report.json").exists());
}
