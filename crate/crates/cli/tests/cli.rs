use std::path::PathBuf;
use std::process::Command;

use vclab::{run_command, Outcome, RunReport, EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};
use vclab_core::solvers::Certificate;

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("vclab-cli-{}-{name}", std::process::id()))
}

fn fixture() -> String {
    format!("@{}/../core/tests/fixtures/q8.cayley", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn analyze_q8() {
    let (code, report) = run_command(["vclab", "analyze", "--group", "q8"]);
    assert_eq!(code, EXIT_OK);
    let Some(Outcome::Analysis(a)) = report.result else {
        panic!("no analysis")
    };
    assert_eq!(a.centre, ["1", "-1"]);
    let w = a.witness.unwrap();
    assert_eq!((w.b.as_str(), w.p, w.k), ("i", 2, 1));
    assert_eq!(a.special_set, ["1", "-1"]);
    assert_eq!(a.n.unwrap().n, 0);
    assert!(!a.centre_is_pure);
    assert!(a.centre_direct_factor.is_none());
}

#[test]
fn analyze_from_fixture_matches_catalog() {
    let (_, from_file) = run_command(["vclab", "analyze", "--group", &fixture()]);
    let (_, from_catalog) = run_command(["vclab", "analyze", "q8"]);
    let (Some(Outcome::Analysis(a)), Some(Outcome::Analysis(b))) = (from_file.result, from_catalog.result) else {
        panic!("analysis missing")
    };
    assert_eq!(a.witness, b.witness);
    assert_eq!(a.centre, b.centre);
    assert_eq!(a.n, b.n);
}

#[test]
fn pure_centre_is_reported() {
    let (code, report) = run_command(["vclab", "analyze", "s3xz2"]);
    assert_eq!(code, EXIT_OK);
    let Some(Outcome::Analysis(a)) = report.result else {
        panic!()
    };
    assert!(a.centre_is_pure && a.witness.is_none());
    assert_eq!(a.centre_direct_factor.unwrap().len(), 6);
}

#[test]
fn fnlemma_enumerate_lists_four_functions() {
    let (code, report) = run_command(["vclab", "fnlemma", "--p", "2", "--k", "1", "--n", "1", "--enumerate"]);
    assert_eq!(code, EXIT_OK);
    let Some(Outcome::FunctionLemma(f)) = report.result else {
        panic!()
    };
    assert!(f.report.pass);
    assert_eq!(f.functions.unwrap().len(), 4);
}

#[test]
fn fnlemma_sample_mode() {
    let (code, report) = run_command([
        "vclab", "fnlemma", "--p", "3", "--k", "1", "--n", "1", "--sample", "--cap-lemma", "50",
    ]);
    assert_eq!(code, EXIT_OK, "{:?}", report.error);
}

#[test]
fn small_cayley_file_and_bad_rows() {
    let good = scratch("z2.cayley");
    std::fs::write(&good, "group z2 order 2\n0 1\n1 0\n").unwrap();
    let (code, report) = run_command(["vclab", "analyze", &format!("@{}", good.display())]);
    assert_eq!(code, EXIT_OK, "{:?}", report.error);
    let bad = scratch("bad.cayley");
    std::fs::write(&bad, "group bad order 2\n0 1\n1 1\n").unwrap();
    let (code, report) = run_command(["vclab", "analyze", &format!("@{}", bad.display())]);
    assert_eq!(code, EXIT_USAGE);
    assert!(report.error.unwrap().contains("row"));
    let _ = std::fs::remove_file(good);
    let _ = std::fs::remove_file(bad);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run_command(["vclab", "frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run_command(["vclab", "analyze", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(run_command(["vclab", "analyze", "nope"]).0, EXIT_USAGE);
    assert_eq!(run_command(["vclab", "fnlemma", "--enumerate", "--sample"]).0, EXIT_USAGE);
    assert_eq!(run_command(["vclab", "construct", "q8", "--b", "zz"]).0, EXIT_USAGE);
    let (code, report) = run_command(["vclab", "--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(report.messages[0].contains("verify-nac"));
}

#[test]
fn budget_exhaustion_exits_three() {
    let (code, report) = run_command(["vclab", "verify-nac", "q8", "--cap-nodes", "10"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(report.result.is_none());
}

#[test]
fn no_witness_is_a_verification_failure() {
    assert_eq!(run_command(["vclab", "construct", "z4"]).0, EXIT_VERIFICATION);
}

#[test]
fn construct_reports_parameters() {
    let (code, report) = run_command(["vclab", "construct", "d4"]);
    assert_eq!(code, EXIT_OK);
    let Some(Outcome::Construction(c)) = report.result else {
        panic!()
    };
    assert_eq!(c.witness.b, "r");
    assert_eq!(c.tag_counts.iter().sum::<usize>(), c.equations);
}

#[test]
fn certificates_verify_and_tampering_fails() {
    let path = scratch("cert.json");
    let p = path.to_str().unwrap();
    let (code, _) = run_command(["vclab", "verify-nac", "q8", "--cert-out", p]);
    assert_eq!(code, EXIT_OK);
    let (code, report) = run_command(["vclab", "verify", p]);
    assert_eq!(code, EXIT_OK, "{:?}", report.error);
    let mut cert: Certificate = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // the last y variable carries a generator at the last point
    let y = cert.g_solution.assignment.last_mut().unwrap();
    *y.comps.last_mut().unwrap() = vclab_core::Elem::IDENTITY;
    std::fs::write(&path, serde_json::to_string(&cert).unwrap()).unwrap();
    let (code, report) = run_command(["vclab", "verify", p]);
    assert_eq!(code, EXIT_VERIFICATION, "{:?}", report.result);
    std::fs::write(&path, "{}").unwrap();
    assert_eq!(run_command(["vclab", "verify", p]).0, EXIT_USAGE);
    let _ = std::fs::remove_file(path);
}

#[test]
fn reports_round_trip_and_repeat() {
    let out = scratch("report.json");
    let (_, report) = run_command(["vclab", "construct", "q8", "--seed", "3", "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(serde_json::to_string_pretty(&back).unwrap() + "\n", text);
    let (_, again) = run_command(["vclab", "construct", "q8", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(
        RunReport { elapsed_ms: 0, ..again },
        RunReport { elapsed_ms: 0, ..report }
    );
    let _ = std::fs::remove_file(out);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, extra: &[&str]| -> RunReport {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_vclab"));
        cmd.args(["analyze", "q8"]).args(extra).env_remove("VCLAB_SEED");
        if let Some(v) = env {
            cmd.env("VCLAB_SEED", v);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        serde_json::from_slice(&out.stdout).unwrap()
    };
    assert_eq!(run(None, &[]).seed, 0);
    assert_eq!(run(Some("41"), &[]).seed, 41);
    assert_eq!(run(Some("41"), &["--seed", "5"]).seed, 5);
}

#[test]
fn binary_exit_codes() {
    let status = Command::new(env!("CARGO_BIN_EXE_vclab")).arg("nonsense").output().unwrap().status;
    assert_eq!(status.code(), Some(EXIT_USAGE));
}
