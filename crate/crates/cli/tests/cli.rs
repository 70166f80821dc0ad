use std::process::{Command, Output};

use serde_json::Value;

fn rarefact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rarefact"))
        .args(args)
        .env_remove("RAREFACT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn norm_of_golden_support() {
    let out = rarefact(&["norm", "--p", "5", "--support", "1,1,-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "11\n");
    let out = rarefact(&["norm", "--p", "7", "--support", "1,-1"]);
    assert_eq!(stdout(&out), "7\n");
}

#[test]
fn empty_sum_is_zero() {
    let out = rarefact(&["sum", "--seq", "+-", "--N", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn sums_and_rarefied_sums() {
    assert_eq!(stdout(&rarefact(&["sum", "--seq", "[[1,0],[0,1]]", "--N", "3"])), "1+2i\n");
    assert_eq!(stdout(&rarefact(&["rarefy", "--seq", "+-", "--p", "3", "--N", "7"])), "3\n");
    assert_eq!(stdout(&rarefact(&["rarefy", "--seq", "+-", "--p", "3", "--N", "7", "--naive"])), "3\n");
    let json = stdout(&rarefact(&["sum", "--seq", "++-", "--N", "9", "--format", "json"]));
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["re"], 1.0);
    assert_eq!(v["im"], 0.0);
}

#[test]
fn verify_all_passes() {
    let out = rarefact(&["verify", "--suite", "all", "--pmax", "13"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,check,status,detail"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 15);
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("PASS")), "{text}");
}

#[test]
fn verify_reports_failures_with_exit_one() {
    let out = rarefact(&["verify", "--suite", "fractal", "--pmax", "5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains(",FAIL,"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["sum", "--seq", "+x", "--N", "3"][..],
        &["norm", "--p", "9", "--support", "1,-1"],
        &["spectral", "--pmax", "7", "--jobs", "0"],
        &["sample-f", "--seq", "+-", "--count", "4"],
        &["frobnicate"],
        &["verify", "--suite", "nonsense"],
    ] {
        let out = rarefact(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn tables() {
    let trace = stdout(&rarefact(&["trace-table", "--pmax", "41"]));
    assert_eq!(trace, "p,trace\n5,5\n13,13\n17,34\n29,29\n37,74\n41,410\n");
    let lucas = stdout(&rarefact(&["lucas", "--pmax", "23", "--factor"]));
    assert!(lucas.starts_with("p,L_p,factors,congruence_verdict\n5,11,11,PASS\n"));
    assert!(lucas.ends_with("23,64079,139·461,PASS\n"));
    let capped = stdout(&rarefact(&["lucas", "--pmax", "13", "--factor", "--max-digits", "2"]));
    assert!(capped.contains("13,521,,INCONCLUSIVE"));
    let samples = stdout(&rarefact(&["sample-f", "--seq", "+-", "--twist-p", "3", "--twist-j", "1", "--count", "8"]));
    assert_eq!(samples.lines().count(), 9);
    let spectral: Value = serde_json::from_str(&stdout(&rarefact(&["spectral", "--pmax", "5", "--format", "json"]))).unwrap();
    assert_eq!(spectral[0]["p"], 3);
    assert_eq!(spectral[1]["r"], 1);
    let csv = stdout(&rarefact(&["spectral", "--pmax", "7"]));
    assert!(csv.starts_with("p,s,r,lambda1,lambda2,alpha,beta,"));
    assert!(csv.lines().nth(3).unwrap().starts_with("7,3,4,"));
}

#[test]
fn output_is_reproducible() {
    let commands: [&[&str]; 4] = [
        &["sample-f", "--seq", "[[1,0],[0,1]]", "--count", "64"],
        &["spectral", "--pmax", "60"],
        &["lucas", "--pmax", "60", "--factor"],
        &["xi", "--p", "13", "--generator", "3"],
    ];
    for args in commands {
        let first = rarefact(args);
        let second = rarefact(args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        let mut single = args.to_vec();
        single.extend(["--jobs", "1"]);
        assert_eq!(rarefact(&single).stdout, first.stdout, "{args:?}");
    }
}

#[test]
fn seed_variable() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_rarefact"))
            .args(["lucas", "--pmax", "61", "--factor"])
            .env("RAREFACT_SEED", seed)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("0xdeadbeef");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run("not-a-number").status.code(), Some(2));
}
