//! Acceptance suite: runs every verification criterion at its pinned
//! tolerance and prints one pass/fail line per criterion.
//!
//! Each criterion delegates to the named suites in `plie_core::verify`, the
//! single source of the acceptance numbers (also reachable through
//! `plie verify`).

use plie_core::verify::{run_suite, ResidualReport};

const SEED: u64 = 7;

fn check(criterion: &str, reports: &[ResidualReport]) {
    let mut all_pass = true;
    for r in reports {
        println!(
            "{criterion}: {} {} (max residual {:.3e}, tolerance {:.1e}, {} samples)",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.max_residual,
            r.tolerance,
            r.num_samples
        );
        if let Some(samples) = &r.samples {
            for (label, value) in samples {
                println!("{criterion}:   {label} = {value:.4}");
            }
        }
        all_pass &= r.pass;
    }
    assert!(all_pass, "{criterion} failed");
}

#[test]
fn criterion_01_es_closed_form() {
    check("criterion 1", &run_suite("es-closed", SEED).unwrap());
}

#[test]
fn criterion_02_pi_an_closed_form() {
    check("criterion 2", &run_suite("pi-an-closed", SEED).unwrap());
}

#[test]
fn criterion_03_mutual_inverse() {
    check("criterion 3", &run_suite("inverse-relation", SEED).unwrap());
}

#[test]
fn criterion_04_poisson_lie_moment_map() {
    check("criterion 4", &run_suite("moment-pl", SEED).unwrap());
}

#[test]
fn criterion_05_classical_moment_survives() {
    check("criterion 5", &run_suite("moment-mur-delin", SEED).unwrap());
}

#[test]
fn criterion_06_es_equivariance() {
    check("criterion 6", &run_suite("equivariance", SEED).unwrap());
}

#[test]
fn criterion_07_s_to_zero_limits() {
    check("criterion 7", &run_suite("s-limits", SEED).unwrap());
}

#[test]
fn criterion_08_closedness_and_jacobi() {
    check("criterion 8", &run_suite("closedness", SEED).unwrap());
    check("criterion 8", &run_suite("jacobi", SEED).unwrap());
}

#[test]
fn criterion_09_iwasawa_round_trip() {
    check("criterion 9", &run_suite("iwasawa", SEED).unwrap());
}

#[test]
fn criterion_10_beta_system() {
    check("criterion 10", &run_suite("beta", SEED).unwrap());
}

#[test]
fn supplementary_invariants() {
    check("supplementary", &run_suite("moment-can", SEED).unwrap());
    check("supplementary", &run_suite("right-invariance", SEED).unwrap());
    check("supplementary", &run_suite("delin-identity-relation", SEED).unwrap());
}
