//! Compute violation ratios for single scenarios.
//!
//! The violation ratio compares the squared norm of the quantum
//! correlation tensor against its best overlap with a deterministic
//! local-hidden-variable model; a ratio above 1 certifies nonclassicality
//! and equals the white-noise robustness of the inequality.
//!
//! Run with: cargo run --example violation_ratio

use gbell::{violation_ratio, Method, Scenario, StateKind, Strategy};

fn main() -> gbell::Result<()> {
    // Two qubits, two bases each: the geometrical inequality recovers the
    // CHSH violation sqrt(2) on this orbit.
    let chsh = Scenario::new(2, 2, 2, StateKind::Unbiased, Strategy::RealScalar)?;
    let report = violation_ratio(&chsh, Method::Auto, 64, 1234)?;
    println!(
        "N=2 d=2 L=2 real: |E_QM|^2 = {:.6}, max LHV overlap = {:.6}, ratio = {:.6}",
        report.quantum_norm, report.lhv_max, report.ratio
    );
    println!("  expected sqrt(2) = {:.6}", std::f64::consts::SQRT_2);

    // Three qubits: the Mermin inequality, violated by exactly 2.
    let mermin = Scenario::new(3, 2, 2, StateKind::Unbiased, Strategy::RealScalar)?;
    let report = violation_ratio(&mermin, Method::Auto, 64, 1234)?;
    println!("\nN=3 d=2 L=2 real: ratio = {:.6} (Mermin)", report.ratio);

    // Complex qutrit outcomes; the optimizer also reports the best model.
    let qutrit = Scenario::new(3, 3, 2, StateKind::Unbiased, Strategy::ComplexRoot)?;
    let report = violation_ratio(&qutrit, Method::Auto, 64, 1234)?;
    println!("\nN=3 d=3 L=2 complex: ratio = {:.6}", report.ratio);
    println!("best model offsets (one row of base-d offsets per observer):");
    for (i, row) in report.best_model.offsets.iter().enumerate() {
        println!("  observer {i}: {row:?}");
    }

    // Full-precision JSON, as printed by the `ratio` subcommand.
    println!("\n{}", report.to_json());
    Ok(())
}
