use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn logitmc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logitmc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn simulate_then_fit_recovers_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = logitmc(
        &[
            "simulate", "--beta0", "0.6", "--beta1", "0.3", "-n", "5000", "--seed", "3", "-o", "d.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("x,y"));
    assert_eq!(text.lines().count(), 5001);

    let fit = json(&logitmc(&["fit", "--data", "d.csv"], dir.path()));
    assert!((fit["beta0"].as_f64().unwrap() - 0.6).abs() < 0.15);
    assert!((fit["beta1"].as_f64().unwrap() - 0.3).abs() < 0.1);
    assert_eq!(fit["converged"], true);
}

#[test]
fn mcmc_trace_feeds_diagnose() {
    let dir = tempfile::tempdir().unwrap();
    logitmc(
        &[
            "simulate", "--beta0", "1", "--beta1", "-3", "-n", "1000", "--seed", "5", "-o", "d.csv",
        ],
        dir.path(),
    );
    for method in ["independent", "dependent", "individual", "samc"] {
        let trace = format!("{method}.csv");
        let report = json(&logitmc(
            &[
                "mcmc",
                "--method",
                method,
                "--data",
                "d.csv",
                "--iters",
                "3000",
                "--seed",
                "9",
                "--trace-out",
                &trace,
            ],
            dir.path(),
        ));
        assert_eq!(report["iterations"], 3000);
        let rate = report["acceptance_rate"].as_f64().unwrap();
        assert!(rate > 0.0 && rate < 1.0, "{method}: {rate}");

        let diag = json(&logitmc(
            &["diagnose", "--trace", &trace, "--starts", "1,1500", "--tol", "0.05"],
            dir.path(),
        ));
        assert_eq!(diag["draws"], 3000);
        assert!(diag["correlation"].as_f64().unwrap().abs() <= 1.0);
    }
    let samc = fs::read_to_string(dir.path().join("samc.csv")).unwrap();
    assert!(samc.starts_with("iter,beta0,beta1,accepted,logpost,region,theta_current"));
}

#[test]
fn same_seed_same_trace() {
    let dir = tempfile::tempdir().unwrap();
    logitmc(&["simulate", "--wais-like", "--seed", "2", "-o", "w.csv"], dir.path());
    for name in ["a.csv", "b.csv"] {
        let out = logitmc(
            &[
                "mcmc",
                "--method",
                "samc",
                "--data",
                "w.csv",
                "--iters",
                "500",
                "--burnin",
                "100",
                "--seed",
                "4",
                "--trace-out",
                name,
            ],
            dir.path(),
        );
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(dir.path().join("a.csv")).unwrap(),
        fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn experiment_summary_is_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"scenarios": [[0.1, 0.2], [-3.0, 2.0]], "n": 200, "replications": 3, "iterations": 1000}"#;
    fs::write(dir.path().join("cfg.json"), config).unwrap();
    for out in ["one", "two"] {
        let res = logitmc(&["experiment", "--config", "cfg.json", "--out", out], dir.path());
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    let one = fs::read(dir.path().join("one/summary.csv")).unwrap();
    assert_eq!(one, fs::read(dir.path().join("two/summary.csv")).unwrap());
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("one/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["replications"], 3);
}

#[test]
fn exit_codes_separate_bad_input_from_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), "x,y\n1,2\n").unwrap();
    fs::write(dir.path().join("sep.csv"), "x,y\n-1,0\n1,1\n").unwrap();
    fs::write(dir.path().join("cfg.json"), r#"{"replications": 0}"#).unwrap();

    assert_eq!(
        logitmc(&["fit", "--data", "bad.csv"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        logitmc(&["fit", "--data", "missing.csv"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        logitmc(&["experiment", "--config", "cfg.json", "--out", "o"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        logitmc(&["mcmc", "--method", "gibbs", "--data", "sep.csv"], dir.path())
            .status
            .code(),
        Some(2)
    );

    let sep = logitmc(&["fit", "--data", "sep.csv"], dir.path());
    assert_eq!(sep.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&sep.stderr).contains("separation"));
}
