use std::process::Command;

use chevalley::presentations::GradedPresentation;
use chevalley_cli::run;

fn cli(args: &str) -> chevalley_cli::Outcome {
    run(std::iter::once("chevalley").chain(args.split_whitespace()))
}

#[test]
fn symplectic_example_text() {
    let out = cli("present --family Sp --rank 4 --q 3 --l 5 --theory cobordism --format text");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout,
        "F_5[q_2, q_4]\ndegrees (topological): q_2:8 q_4:16\n"
    );
}

#[test]
fn chow_ring_with_no_generators() {
    let out = cli("present --family GL --rank 3 --q 3 --l 5 --theory chow");
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().next(), Some("Z/5"));
}

#[test]
fn even_prime_is_a_precondition_failure() {
    let out = cli("present --family GL --rank 2 --q 2 --l 2 --theory chow");
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("l must be odd"), "{}", out.stderr);
    assert_eq!(out.stderr.lines().count(), 1);
}

#[test]
fn other_preconditions_exit_two() {
    assert_eq!(
        cli("present --family GL --rank 2 --q 11 --l 5 --theory chow --b 2").code,
        2
    );
    assert_eq!(cli("present --family E8 --rank 8 --q 2 --l 5").code, 2);
    assert_eq!(cli("present --family Sp --rank 2 --q 25 --l 5").code, 2);
    assert_eq!(
        cli("present --family GL --rank 2 --q 11 --l 5 --theory chow --b 1").code,
        0
    );
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        "",
        "present --family Sp --rank 4 --q 3",
        "present --family Xx --rank 4 --q 3 --l 5",
        "present --family Sp --rank 4 --q 6 --l 5",
        "params --q 9 --p 2 --l 5",
        "params --q 3 --l 4",
        "present --family Sp --rank 4 --q 3 --l 5 --format yaml",
        "verify --primes 4",
    ] {
        let out = cli(args);
        assert_eq!(out.code, 1, "{args}: {}", out.stderr);
        assert!(out.stdout.is_empty(), "{args}");
    }
}

#[test]
fn explicit_characteristic_consistent_with_q() {
    assert_eq!(
        cli("params --q 9 --p 3 --l 5").stdout,
        cli("params --q 9 --l 5").stdout
    );
    assert_eq!(
        cli("params --q 81 --l 5 --n 6").stdout,
        "p=3 q=81 l=5 r=1 a=1 h=16\nq^r - 1 = 5^1 * 16\nn=6 = 1*6 + 0 (m=6 e=0)\n"
    );
}

#[test]
fn json_round_trips() {
    let out = cli("present --family Sp --rank 6 --q 9 --l 5 --cutoff 16 --format json");
    assert_eq!(out.code, 0);
    let pres = GradedPresentation::from_json(&out.stdout).unwrap();
    assert_eq!(pres.schema_version, 1);
    assert_eq!(pres.ring_text(), "F_5[q_1, q_2, q_3, q_4, q_5, q_6]");
    assert_eq!(pres.to_json() + "\n", out.stdout);
}

#[test]
fn latex_and_series() {
    assert_eq!(
        cli("present --family Sp --rank 4 --q 3 --l 5 --format latex").stdout,
        "\\mathbb{F}_5[q_2,q_4]\n"
    );
    assert_eq!(
        cli("series --family Sp --rank 4 --q 3 --l 5 --cutoff 16").stdout,
        "(1,0,0,0,0,0,0,0,1,0,0,0,0,0,0,0,2)\n"
    );
    let chow = cli("series --family Sp --rank 4 --q 3 --l 5 --cutoff 8 --grading chow");
    assert_eq!(chow.stdout, "(1,0,0,0,1,0,0,0,2)\n");
}

#[test]
fn output_is_deterministic() {
    for args in [
        "present --family E7 --rank 7 --q 4 --l 7 --cutoff 30 --format json",
        "compare --rank 5 --q 4 --l 3 --format json",
        "verify --primes 5 --fields 3,4 --residues 2,3 --format json",
    ] {
        assert_eq!(cli(args), cli(args), "{args}");
    }
    let seq = cli("verify --primes 3,5 --fields 2,4 --sequential --format json");
    let par = cli("verify --primes 3,5 --fields 2,4 --format json");
    assert_eq!(seq, par);
}

#[test]
fn compare_and_chern() {
    let out = cli("compare --rank 4 --q 3 --l 5");
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("equal:"));
    let out = cli("verify --chern 1 --q 3 --l 5");
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("1 + 4*eta_1^4"));
}

#[test]
fn restricted_sweep_passes() {
    let out = cli("verify --primes 5 --fields 3 --residues 3");
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(
        out.stdout
            .lines()
            .all(|l| l.starts_with("PASS") || l == "all clauses passed"),
        "{}",
        out.stdout
    );
}

#[test]
fn monomial_limit_is_reported() {
    let out = cli("verify --primes 5 --fields 3 --residues 3 --monomial-limit 10");
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("degree 10"), "{}", out.stderr);
}

#[test]
fn binary_honours_env_limit_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_chevalley");
    let out = Command::new(bin)
        .args([
            "verify",
            "--primes",
            "5",
            "--fields",
            "3",
            "--residues",
            "3",
        ])
        .env("CHEVALLEY_MONOMIAL_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree 10"));

    let out = Command::new(bin)
        .args([
            "present", "--family", "GL", "--rank", "2", "--q", "2", "--l", "2", "--theory", "chow",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin)
        .args([
            "present", "--family", "Sp", "--rank", "4", "--q", "3", "--l", "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("F_5[q_2, q_4]\n"));
}
