//! Acceptance suite: one test per verification criterion, each printing a
//! pass/fail line. The same checks back the CLI's `verify` subcommand.

use infcomp::verify::{self, CriterionReport};

fn check(report: CriterionReport) {
    println!(
        "{} {} (max = {:.3e}, tolerance = {:.3e}; {})",
        report.status(),
        report.name,
        report.max_residual,
        report.tolerance,
        report.details
    );
    assert!(report.passed, "{}: {}", report.name, report.details);
}

#[test]
fn criterion_01_exp_identity() {
    check(verify::exp_identity());
}

#[test]
fn criterion_02_sin_identity() {
    check(verify::sin_identity());
}

#[test]
fn criterion_03_sinh_squared_identity() {
    check(verify::sinh_squared_identity());
}

#[test]
fn criterion_04_limit_series_coefficients() {
    check(verify::limit_series_coefficients());
}

#[test]
fn criterion_05_difference_bound_soundness() {
    check(verify::difference_bound_soundness());
}

#[test]
fn criterion_06_growth_bound_soundness() {
    check(verify::growth_bound_soundness());
}

#[test]
fn criterion_07_functional_equation_residual() {
    check(verify::functional_equation_residual());
}

#[test]
fn criterion_08_continuation_reach() {
    check(verify::continuation_reach());
}

#[test]
fn criterion_09_oracle_self_similarity() {
    check(verify::oracle_self_similarity());
}

#[test]
fn criterion_10_composition_jet_oracle() {
    check(verify::composition_jet_oracle());
}

#[test]
fn criterion_11_probe_convergence() {
    check(verify::probe_convergence());
}

#[test]
fn full_suite_passes() {
    let reports = verify::run_all();
    assert_eq!(reports.len(), 11);
    for report in &reports {
        println!(
            "{} {} (max = {:.3e}, tolerance = {:.3e})",
            report.status(),
            report.name,
            report.max_residual,
            report.tolerance
        );
    }
    assert!(reports.iter().all(|r| r.passed));
}
