//! Run a small experiment from code and print its summary.

use wigner_lab::ensemble::EntryDistribution;
use wigner_lab::harness::{evaluate_checks, run_monte_carlo, CheckKind, ExperimentConfig};
use wigner_lab::spectral::TestFunction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = ExperimentConfig::new(EntryDistribution::gaussian(), vec![60, 120], 600, 2024);
    config.functions = vec![TestFunction::monomial(3), TestFunction::exp(12)];
    config.truncation_orders = vec![4, 8, 12];
    config.powers = vec![2, 3];
    config.edge_times = vec![1.0];
    config.checks = vec![
        CheckKind::Semicircle,
        CheckKind::TraceMean,
        CheckKind::Factorization,
        CheckKind::Independence,
        CheckKind::Gaussianity,
        CheckKind::Truncation,
        CheckKind::EdgeBoundedness,
    ];

    // Edge-coupled checks carry finite-n bias of order n^(-1/3) and can
    // fail at these sizes.
    let records = run_monte_carlo(&config)?;
    println!(
        "{} records, first digest {}",
        records.len(),
        records[0].eigen_digest
    );
    for row in evaluate_checks(&config, &records)? {
        println!(
            "{:<17} n={:<4} {:<28} {:>12.5}  tol {:<10.5} {}",
            row.check,
            row.n,
            row.statistic,
            row.value,
            row.tolerance,
            if row.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
