use std::process::Command;

use waring::cli::{run_cli, EXIT_HYPOTHESIS, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};

fn run(args: &[&str]) -> waring::cli::CommandOutcome {
    run_cli(std::iter::once("waring").chain(args.iter().copied()))
}

#[test]
fn bound_report_for_p3_k11() {
    let out = run(&["bound", "3", "11"]);
    assert_eq!(out.code, EXIT_OK);
    for line in [
        "digit-product bound: 5",
        "odd-order bound: 5",
        "digit-sum bound: 5",
        "best: 5",
    ] {
        assert!(
            out.stdout.contains(line),
            "missing {line:?} in\n{}",
            out.stdout
        );
    }
}

#[test]
fn bound_rejects_k_sharing_a_factor_with_p() {
    let out = run(&["bound", "2", "2"]);
    assert_eq!(out.code, EXIT_HYPOTHESIS);
    assert!(out.stderr.contains("k must be relatively prime to p"));
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cert");
    let p = path.to_str().unwrap();
    let out = run(&["construct", "3", "2", "--out", p]);
    assert_eq!(out.code, EXIT_OK, "{}{}", out.stdout, out.stderr);
    let out = run(&["verify", p]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert!(out.stdout.contains("overall: pass"));
}

#[test]
fn verify_catches_an_edited_scalar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cert");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["construct", "5", "13", "--out", p]).code, EXIT_OK);
    let text = std::fs::read_to_string(&path).unwrap();
    let line = text
        .lines()
        .find(|l| l.starts_with("term scalar ["))
        .unwrap();
    let digit = line.as_bytes()[13];
    let bumped = if digit == b'1' { '2' } else { '1' };
    let edited_line = format!("{}{}{}", &line[..13], bumped, &line[14..]);
    std::fs::write(&path, text.replacen(line, &edited_line, 1)).unwrap();
    let out = run(&["verify", p]);
    assert_eq!(out.code, EXIT_VERIFICATION, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("symbolic identity: FAIL"));
}

#[test]
fn verify_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.cert");
    std::fs::write(&path, "not a certificate\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_VERIFICATION);
}

#[test]
fn construct_prints_certificate_without_out() {
    let out = run(&["construct", "3", "11", "--absorb-scalars", "--trials", "4"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("waring-certificate format 1"));
    assert!(out.stdout.contains("kprime 2189"));
    assert!(out.stdout.contains("dense re-expansion: skipped"));
}

#[test]
fn digit_product_column_on_mersenne_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = run(&["table", "2", "3", "31", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,gamma,digit_product_bound,best_bound,best_source,certificate_terms"
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    for r in 2..=5u32 {
        let k = (1u64 << r) - 1;
        let row = rows.iter().find(|row| row[0] == k.to_string()).unwrap();
        assert_eq!(row[2], k.to_string());
    }
    assert!(rows
        .iter()
        .all(|row| row[0].parse::<u64>().unwrap() % 2 == 1));
}

#[test]
fn identity_and_oracle_and_prime_search() {
    let out = run(&["identity", "3", "1,2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("identity holds"));
    let out = run(&["identity", "4", "1,1,2", "--p", "7", "--m", "1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    // GF(7) has no primitive 4th root of unity
    let out = run(&["identity", "5", "1,1", "--p", "7", "--m", "1"]);
    assert_eq!(out.code, EXIT_HYPOTHESIS);

    let out = run(&[
        "oracle",
        "3",
        "2",
        "--field-degree",
        "2",
        "--max-terms",
        "3",
        "--max-degree",
        "1",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains(": 2"));
    let out = run(&[
        "oracle",
        "2",
        "2",
        "--field-degree",
        "2",
        "--max-terms",
        "3",
        "--max-degree",
        "1",
    ]);
    assert_eq!(out.code, EXIT_VERIFICATION);

    let out = run(&["prime-search", "10", "3", "1/2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("least prime not dividing r: 3"));
    assert_eq!(run(&["prime-search", "30", "2", "1.0"]).code, EXIT_OK);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).code, EXIT_USAGE);
    assert_eq!(run(&["bound", "3"]).code, EXIT_USAGE);
    assert_eq!(run(&["bound", "4", "3"]).code, EXIT_HYPOTHESIS);
    assert_eq!(run(&["prime-search", "10", "3", "x"]).code, EXIT_USAGE);
    assert_eq!(run(&["construct", "3", "2", "--n", "0"]).code, EXIT_USAGE);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_waring");
    let out = Command::new(exe)
        .args(["bound", "2", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_HYPOTHESIS));
    let out = Command::new(exe)
        .args(["bound", "5", "13"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&out.stdout).contains("best: 3"));
}
