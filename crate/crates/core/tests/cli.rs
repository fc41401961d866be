use std::path::Path;
use std::process::{Command, Output};

use threshold_lab::cli::report_exit_code;
use threshold_lab::experiments::{coupon_experiment, format_sig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_threshold-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

/// One small configuration per subcommand.
fn configs(dir: &Path) -> Vec<Vec<String>> {
    let fam = dir.join("fam.txt");
    std::fs::write(&fam, "N 4\n0 1\n1 2 3\n").unwrap();
    let raw: Vec<Vec<&str>> = vec![
        vec!["sample", "--n", "30", "--p", "0.1", "--trials", "20", "--oracle", "connected"],
        vec!["pc", "--oracle", "contains:triangle", "--grid", "10,20", "--trials", "200"],
        vec!["pe", "--oracle", "contains:H_tilde", "--grid", "10,20,40"],
        vec!["q", "--family", fam.to_str().unwrap()],
        vec!["q", "--oracle", "connected", "--n", "4"],
        vec!["sweep", "--oracle", "contains:H", "--grid", "10,20,30", "--trials", "200"],
        vec!["hitting", "--kind", "pm", "--n", "12", "--trials", "100"],
        vec!["hitting", "--kind", "pm", "--n", "4", "--trials", "exhaustive"],
        vec!["pm-limit", "--n", "40", "--c=-1,0,1", "--trials", "200"],
        vec!["giant", "--n", "2000", "--c", "0.5,1.5", "--trials", "20"],
        vec!["second-moment", "--n", "30", "--p", "0.1", "--trials", "300"],
        vec!["coupon", "--n", "50", "--trials", "300"],
        vec!["verify-kk", "--families", "20", "--max-ground", "8"],
    ];
    raw.into_iter().map(|v| v.into_iter().map(String::from).collect()).collect()
}

#[test]
fn every_subcommand_succeeds_and_reruns_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in configs(dir.path()) {
        let args: Vec<&str> = cfg.iter().map(String::as_str).collect();
        let a = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        let b = run(&args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?} is not reproducible");
        let text = String::from_utf8(a.stdout).unwrap();
        assert!(!text.contains('\r'));
        let width = text.lines().next().unwrap().split(',').count();
        assert!(width > 1);
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in configs(dir.path()) {
        let mut one: Vec<&str> = cfg.iter().map(String::as_str).collect();
        let mut three = one.clone();
        one.extend(["--threads", "1"]);
        three.extend(["--threads", "3"]);
        let a = run(&one);
        let b = run(&three);
        assert_eq!(a.stdout, b.stdout, "{cfg:?}");
        // summary lines (everything on stderr but the wall time)
        let strip = |o: &Output| -> Vec<String> {
            String::from_utf8_lossy(&o.stderr)
                .lines()
                .filter(|l| !l.starts_with("wall_time_s"))
                .map(String::from)
                .collect()
        };
        assert_eq!(strip(&a), strip(&b), "{cfg:?}");
    }
}

#[test]
fn out_flag_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pc.json");
    let p = path.to_str().unwrap();
    let args = ["pc", "--oracle", "connected", "--n", "5", "--trials", "150", "--format", "json", "--out", p];
    assert_eq!(code(&args), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["config", "rows", "summary", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["config"]["seed"], 20060614);
    assert_eq!(v["config"]["oracle"], "connected");
    let row = &v["rows"][0];
    for key in ["n", "oracle", "trials", "seed", "pc_hat", "ci_low", "ci_high"] {
        assert!(row.get(key).is_some(), "row lacks {key}");
    }
}

#[test]
fn pc_csv_header() {
    let out = run(&["pc", "--oracle", "connected", "--n", "5", "--trials", "150"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "n,oracle,trials,seed,pc_hat,ci_low,ci_high");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn seed_changes_results() {
    let a = run(&["coupon", "--n", "30", "--trials", "100", "--seed", "1"]);
    let b = run(&["coupon", "--n", "30", "--trials", "100", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 9] = [
        &[],
        &["frobnicate"],
        &["pc", "--grid", "10"],
        &["pc", "--oracle", "planar", "--n", "10"],
        &["pc", "--oracle", "connected", "--n", "10", "--trials", "50"],
        &["hitting", "--kind", "pm", "--n", "7"],
        &["hitting", "--kind", "triangle-factor", "--n", "21"],
        &["coupon", "--n", "10", "--trials", "exhaustive"],
        &["sample", "--n", "10", "--p", "1.5"],
    ];
    for args in cases {
        assert_eq!(code(args), 2, "{args:?}");
    }
}

#[test]
fn capacity_errors_exit_3() {
    let cases: [&[&str]; 4] = [
        &["pc", "--oracle", "hamiltonian", "--n", "30", "--trials", "100"],
        &["pe", "--oracle", "contains:petersen", "--n", "20"],
        &["second-moment", "--n", "600", "--p", "0.1"],
        &["q", "--oracle", "connected", "--n", "7"],
    ];
    for args in cases {
        assert_eq!(code(args), 3, "{args:?}");
    }
}

#[test]
fn failed_checks_exit_4() {
    let mut report = coupon_experiment(5, 10, 1).unwrap();
    assert_eq!(report_exit_code(&report), 0);
    report.failures.push("forced".into());
    assert_eq!(report_exit_code(&report), 4);
}

#[test]
fn help_and_version() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    let help = String::from_utf8(run(&["--help"]).stdout).unwrap();
    for sub in ["sample", "pc", "pe", "sweep", "hitting", "pm-limit", "giant", "second-moment", "coupon", "verify-kk"] {
        assert!(help.contains(sub), "help lacks {sub}");
    }
}

#[test]
fn floats_use_twelve_significant_digits() {
    assert_eq!(format_sig(2f64.sqrt(), 12), "1.41421356237");
    let out = run(&["coupon", "--n", "100", "--trials", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.split(',').any(|c| c == "518.737751764"), "{row}");
}
