//! Whole invocations through [`run`], with captured streams.

use serde_json::Value;

use crate::output::read_csv;
use crate::verify::{normalization_cases, normalization_checks, NormalizationCase};
use crate::{run, Streams};

struct Output {
    status: u8,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

impl Output {
    fn success(&self) -> bool {
        self.status == 0
    }
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let status = run(
        std::iter::once("epr-dds").chain(args.iter().copied()),
        Streams {
            stdin: &mut stdin.as_bytes(),
            stdout: &mut stdout,
            stderr: &mut stderr,
        },
    );
    Output { status, stdout, stderr }
}

fn epr_dds(args: &[&str]) -> Output {
    run_with_stdin(args, "")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn data_rows(text: &[u8]) -> Vec<&str> {
    std::str::from_utf8(text).unwrap().lines().skip(1).collect()
}

#[test]
fn density_csv_has_provenance_and_round_trips() {
    let out = epr_dds(&[
        "density",
        "--a",
        "1",
        "--h",
        "2",
        "--theta",
        "0.5",
        "--grid-points",
        "101",
    ]);
    assert!(out.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# tool=epr-dds version="), "{first}");
    assert!(first.contains("command=density") && first.contains("theta=0.5"));
    let (header, rows) = read_csv(&text).unwrap();
    assert_eq!(header, ["p1", "f"]);
    assert!(rows.len() >= 101 && rows.len() % 2 == 1);
}

#[test]
fn asym_and_unentangled_density_rows_are_byte_identical() {
    let theta = epr_dds(&["density", "--a", "1.3", "--h", "0.9", "--theta", "0"]);
    let asym = epr_dds(&["density", "--a", "1.3", "--h1", "0.9", "--b", "1.3", "--h2", "0.9"]);
    assert!(theta.success() && asym.success());
    assert_eq!(data_rows(&theta.stdout), data_rows(&asym.stdout));
}

#[test]
fn mixing_families_or_bad_values_is_a_usage_error() {
    for args in [
        &["density", "--a", "1", "--h", "1", "--theta", "0.1", "--h2", "1"][..],
        &["density", "--a", "1", "--h", "1"],
        &["density", "--a", "1", "--h", "1", "--theta", "-0.1"],
        &["density", "--a", "-1", "--h", "1", "--theta", "0.1"],
        &["scan", "--grid-points", "1"],
        &["frobnicate"],
    ] {
        let out = epr_dds(args);
        assert_eq!(out.status, 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn json_format_carries_schema() {
    let out = epr_dds(&["scan", "--grid-points", "5", "--format", "json"]);
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "epr-dds/1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["columns"][4], "sum_sq");
}

#[test]
fn sample_is_reproducible_and_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let path = dir.path().join(name);
        let out = epr_dds(&[
            "sample",
            "--a",
            "1",
            "--h",
            "2",
            "--theta",
            "0.5",
            "--n",
            "150000",
            "--seed",
            "42",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (std::fs::read(path).unwrap(), stdout_json(&out))
    };
    let (first, summary) = run("a.csv", "1");
    let (again, _) = run("b.csv", "1");
    let (pooled, _) = run("c.csv", "3");
    assert_eq!(first, again);
    assert_eq!(first, pooled);
    assert_eq!(summary["schema"], "epr-dds/1");
    let v_hat = summary["V_hat"].as_f64().unwrap();
    let v_closed = summary["V_closed"].as_f64().unwrap();
    assert!((v_hat - v_closed).abs() < 0.02, "{summary}");
    assert!(summary["acceptance_rate"].as_f64().unwrap() > 0.0);
}

#[test]
fn sample_at_reference_point_fits_closed_form() {
    let out = epr_dds(&[
        "sample",
        "--a",
        "1",
        "--h",
        "2",
        "--theta",
        "0.5235987755982988",
        "--n",
        "1000000",
        "--seed",
        "7",
        "--workers",
        "4",
        "--out",
        "/dev/null",
    ]);
    assert!(out.success());
    let summary = stdout_json(&out);
    let gap = (summary["V_hat"].as_f64().unwrap() - summary["V_closed"].as_f64().unwrap()).abs();
    assert!(gap <= 0.01, "{summary}");
}

#[test]
fn sample_rejects_empty_requests_and_requires_a_seed() {
    assert_eq!(
        epr_dds(&["sample", "--a", "1", "--h", "1", "--theta", "0", "--n", "0", "--seed", "1"]).status,
        2
    );
    assert_eq!(epr_dds(&["sample", "--a", "1", "--h", "1", "--theta", "0"]).status, 2);
}

#[test]
fn small_samples_surface_the_fit_failure() {
    let out = epr_dds(&[
        "sample", "--a", "1", "--h", "1", "--theta", "0", "--n", "100", "--seed", "1",
    ]);
    assert_eq!(out.status, 1);
}

#[test]
fn purify_reports_solution_and_gap() {
    let out = epr_dds(&["purify", "--a", "1", "--h1", "1", "--b", "1", "--h2", "2"]);
    assert_eq!(out.status, 2, "b h2^2 > a h1^2 has no purification");
    let out = epr_dds(&["purify", "--a", "1", "--h1", "1.5", "--b", "0.5", "--h2", "2"]);
    assert!(out.success());
    let v = stdout_json(&out);
    assert!(v["wigner_gap"].as_f64().unwrap() <= 1e-10);
    for key in ["theta", "sin_two_theta", "visibility", "predictability"] {
        assert!(v[key].is_number(), "{key}");
    }
}

#[test]
fn multipath_reads_stdin_and_validates() {
    let run = |input: &str| run_with_stdin(&["multipath", "--input", "-"], input);
    let out = run(r#"{"amplitudes_sq": [0.5, 0.5], "overlaps": [[1, 0], [0, 1]]}"#);
    assert!(out.success());
    let v = stdout_json(&out);
    assert_eq!((v["D"].as_f64(), v["C"].as_f64()), (Some(1.0), Some(0.0)));
    let out = run(r#"{"amplitudes_sq": [0.5, 0.5], "overlaps": [[1, 0.2]]}"#);
    assert_eq!(out.status, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlap"));
}

#[test]
fn help_json_is_machine_readable() {
    let v = stdout_json(&epr_dds(&["--help-json"]));
    assert_eq!(v["subcommands"].as_array().unwrap().len(), 6);
    let sample = stdout_json(&epr_dds(&["sample", "--help-json"]));
    assert_eq!(sample["name"], "sample");
    assert!(epr_dds(&["--help"]).success());
}

#[test]
fn verify_reports_each_check_with_tolerance() {
    let out = epr_dds(&["verify", "--criteria", "3,5,7"]);
    assert!(out.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["schema"], "epr-dds/1");
    assert_eq!(report["passed"], true);
    for check in report["checks"].as_array().unwrap() {
        for key in ["id", "name", "tolerance", "measured", "passed"] {
            assert!(!check[key].is_null(), "{key} missing in {check}");
        }
    }
}

#[test]
fn verify_exits_nonzero_when_a_check_fails() {
    // The envelope criterion reports measured deviations above its 1e-2 bound.
    let out = epr_dds(&["verify", "--criteria", "9"]);
    assert_eq!(out.status, 1);
    assert_eq!(stdout_json(&out)["passed"], false);
}

#[test]
fn wrong_normalization_constant_is_caught() {
    let mut cases = normalization_cases();
    assert!(normalization_checks(&cases).unwrap().iter().all(|c| c.passed));
    let honest = cases.swap_remove(0);
    cases.push(NormalizationCase::new("off by one percent", honest.dims, move || {
        Ok((honest.integral)()? * 1.01)
    }));
    let checks = normalization_checks(&cases).unwrap();
    let mutated = checks.last().unwrap();
    assert!(!mutated.passed);
    assert!((mutated.measured - 0.01).abs() < 1e-6);
}
