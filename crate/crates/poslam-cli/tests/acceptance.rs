//! Acceptance suite: one test per advertised property, at full corpus
//! sizes, printing one pass/fail line per criterion.
//!
//! Run with `cargo test -p poslam-cli --test acceptance` (or as part of
//! `cargo test --workspace`).

use std::process::Command;
use std::time::{Duration, Instant};

use poslam_core::harness::suites::{self, SuiteOpts};
use poslam_core::harness::CheckReport;
use poslam_core::syntax::{alpha_eq, parse_term};

const SEED: u64 = 0;

fn finish(criterion: &str, reports: &[CheckReport], started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    for r in reports {
        println!("[{criterion}] {}", r.summary_line());
    }
    let all_pass = reports.iter().all(|r| r.pass());
    println!(
        "[{criterion}] {} in {elapsed:.2?} (budget {budget:.0?})",
        if all_pass { "PASS" } else { "FAIL" }
    );
    for r in reports {
        assert!(
            r.pass(),
            "{criterion}: {} ({} violations; first witnesses: {:?})",
            r.property,
            r.violations,
            r.witnesses
        );
    }
    assert!(
        elapsed < budget,
        "{criterion}: took {elapsed:?}, budget {budget:?}"
    );
}

/// Criterion 1: the displayed reductions of the looping combinator are
/// reproduced alpha-exactly, by the library and by the binary.
#[test]
fn c01_omega_golden_traces() {
    let started = Instant::now();
    let reports = suites::check_omega_traces();

    // the binary prints the same trace
    let out = Command::new(env!("CARGO_BIN_EXE_poslam"))
        .args([
            "reduce",
            "(\\x. x x)(\\x. x x)",
            "--calculus",
            "vsc",
            "--fuel",
            "9",
            "--trace",
            "text",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let steps: Vec<&str> = stdout
        .lines()
        .filter_map(|l| l.strip_prefix("-> "))
        .collect();
    assert_eq!(steps.len(), 9, "nine steps printed:\n{stdout}");
    let expected = [
        "(x1 x1)[x1 <- \\x. x x]",
        "((\\x. x x) x1)[x1 <- \\x. x x]",
        "(x2 x2)[x2 <- x1][x1 <- \\x. x x]",
        "(x1 x2)[x2 <- x1][x1 <- \\x. x x]",
        "((\\x. x x) x2)[x2 <- x1][x1 <- \\x. x x]",
        "(x3 x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]",
        "(x2 x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]",
        "(x1 x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]",
        "((\\x. x x) x3)[x3 <- x2][x2 <- x1][x1 <- \\x. x x]",
    ];
    for (line, want) in steps.iter().zip(expected.iter()) {
        let printed = line
            .split_once("] ")
            .map(|(_, t)| t)
            .expect("step line has a label");
        let got = parse_term(printed).expect("printed term parses");
        let want = parse_term(want).unwrap();
        assert!(alpha_eq(&got, &want), "binary trace diverges: {printed}");
    }

    // the --no-var-values variant never substitutes variables and shares
    // the abstraction along the chain instead
    let out = Command::new(env!("CARGO_BIN_EXE_poslam"))
        .args([
            "reduce",
            "(\\x. x x)(\\x. x x)",
            "--fuel",
            "9",
            "--no-var-values",
        ])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(!stdout.contains("e-var"), "{stdout}");
    let step4 = stdout
        .lines()
        .filter_map(|l| l.strip_prefix("-> "))
        .nth(3)
        .and_then(|l| l.split_once("] "))
        .map(|(_, t)| t)
        .expect("fourth step printed");
    let want = parse_term("(x2 x2)[x2 <- \\x. x x][x1 <- \\x. x x]").unwrap();
    assert!(
        alpha_eq(&parse_term(step4).unwrap(), &want),
        "no-var-values trace diverges: {step4}"
    );

    // the translated loop alternates m+ and e+
    let out = Command::new(env!("CARGO_BIN_EXE_poslam"))
        .args(["translate", "(\\x. x x)(\\x. x x)"])
        .output()
        .expect("binary runs");
    let image = String::from_utf8(out.stdout).unwrap().trim().to_string();
    let out = Command::new(env!("CARGO_BIN_EXE_poslam"))
        .args(["reduce", &image, "--calculus", "oxpos", "--fuel", "5"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let labels: Vec<&str> = stdout
        .lines()
        .filter_map(|l| l.strip_prefix("-> ["))
        .filter_map(|l| l.split_once(']'))
        .map(|(label, _)| label)
        .collect();
    assert_eq!(labels, ["m+", "e+", "m+", "e+", "m+"], "{stdout}");

    finish("criterion 1", &reports, started, Duration::from_secs(1));
}

/// Criterion 2: chain-overhead counters, exact integer equalities.
#[test]
fn c02_chain_overhead_counters() {
    let started = Instant::now();
    let reports = vec![suites::check_omega_counters(20)];
    finish("criterion 2", &reports, started, Duration::from_secs(1));
}

/// Criterion 3: the positive diamond on the enumerated corpus plus ten
/// thousand random terms.
#[test]
fn c03_positive_diamond() {
    let started = Instant::now();
    let reports = vec![suites::check_diamond_suite(9, SEED, 10_000)];
    finish("criterion 3", &reports, started, Duration::from_secs(300));
}

/// Criterion 4: the non-diamond witness of the full calculus.
#[test]
fn c04_non_diamond_witness() {
    let started = Instant::now();
    let reports = vec![suites::check_non_diamond_witness()];
    finish("criterion 4", &reports, started, Duration::from_secs(1));
}

/// Criterion 5: gc postponement with counter identities, both calculi.
#[test]
fn c05_gc_postponement() {
    let started = Instant::now();
    let reports = suites::check_gc_postponement(1000, SEED);
    finish("criterion 5", &reports, started, Duration::from_secs(120));
}

/// Criterion 6: core factorization of gc-free traces.
#[test]
fn c06_core_factorization() {
    let started = Instant::now();
    let reports = vec![suites::check_factorization(1000, SEED)];
    finish("criterion 6", &reports, started, Duration::from_secs(120));
}

/// Criterion 7: simulation of core traces with the counter relations.
#[test]
fn c07_core_simulation() {
    let started = Instant::now();
    let reports = vec![suites::check_simulation(1000, SEED)];
    finish("criterion 7", &reports, started, Duration::from_secs(180));
}

/// Criterion 8: the core-normal-form grammar agrees with redex emptiness
/// on every term up to eight nodes.
#[test]
fn c08_normal_form_characterization() {
    let started = Instant::now();
    let reports = vec![suites::check_normal_forms(8)];
    finish("criterion 8", &reports, started, Duration::from_secs(300));
}

/// Criterion 9: translations of core-normal terms have no m+ or e+ redex.
#[test]
fn c09_normal_form_preservation() {
    let started = Instant::now();
    let reports = vec![suites::check_preservation(8)];
    finish("criterion 9", &reports, started, Duration::from_secs(120));
}

/// Criterion 10: the two presentations of useful steps agree.
#[test]
fn c10_useful_alternative_presentation() {
    let started = Instant::now();
    let reports = vec![suites::check_useful_alt(8)];
    finish("criterion 10", &reports, started, Duration::from_secs(300));
}

/// Criterion 11: termination equivalences across the three systems, with
/// cap-exceeded terms reported separately and below one percent.
#[test]
fn c11_termination_equivalences() {
    let started = Instant::now();
    let reports = suites::check_termination(7, 10_000);
    for r in &reports {
        assert!(
            r.undecided * 100 < r.checked.max(1),
            "cap-exceeded fraction too large: {}/{}",
            r.undecided,
            r.checked
        );
    }
    finish("criterion 11", &reports, started, Duration::from_secs(600));
}

/// Criterion 12: local termination within fuel, and length invariance
/// plus uniform normalization on positive graphs.
#[test]
fn c12_local_termination_and_length_invariance() {
    let started = Instant::now();
    let reports = suites::check_local_termination(7, 10_000);
    finish("criterion 12", &reports, started, Duration::from_secs(300));
}

/// Criterion 13: the macro step is its explicit decomposition.
#[test]
fn c13_macro_step_decomposition() {
    let started = Instant::now();
    let reports = vec![suites::check_decomposition(1000, SEED)];
    finish("criterion 13", &reports, started, Duration::from_secs(60));
}

/// Criterion 14: typing of the translated identity, untypability of
/// self-application, and preservation of principal types.
#[test]
fn c14_typing() {
    let started = Instant::now();
    let reports = suites::check_typing(100, SEED);
    finish("criterion 14", &reports, started, Duration::from_secs(60));
}

/// The module-invariant suites, run at their defaults alongside the
/// numbered criteria.
#[test]
fn module_invariants() {
    let started = Instant::now();
    let opts = SuiteOpts {
        seed: Some(SEED),
        ..Default::default()
    };
    let mut reports = Vec::new();
    for name in ["partition", "syntax", "translation", "positive"] {
        reports.extend(suites::run_suite(name, &opts).unwrap());
    }
    finish(
        "module invariants",
        &reports,
        started,
        Duration::from_secs(300),
    );
}
