//! Run the self-check suite and show what it checks.
//!
//! Every closed-form correlation kernel in the crate is validated at run
//! time against a dense matrix oracle that builds the GHZ state and the
//! measurement observables explicitly. The suite also confirms that the
//! scalar, vector and dichotomic strategies give identical ratios and that
//! the ascent optimizer reproduces exhaustive search. The `verify`
//! subcommand runs the same suite (full depth without --quick).
//!
//! Run with: cargo run --example oracle_cross_check

use gbell::kernels::kernel_complex_unbiased;
use gbell::oracle::{expectation_complex, ghz_state};
use gbell::StateKind;

fn main() -> gbell::Result<()> {
    // One check by hand first: a random-looking angle tuple, d = 4, N = 3.
    let angles = [0.37, 2.11, 5.03];
    let alpha_prime: f64 = angles.iter().sum();
    let kernel = kernel_complex_unbiased(4, alpha_prime);
    let dense = expectation_complex(&ghz_state(3, 4, StateKind::Unbiased)?, &angles)?;
    println!("complex kernel, d=4, N=3, alpha' = {alpha_prime:.4}:");
    println!("  closed form:  {:+.12} {:+.12}i", kernel.re, kernel.im);
    println!("  dense oracle: {:+.12} {:+.12}i", dense.re, dense.im);
    println!("  |difference| = {:.2e}", (kernel - dense).norm());

    // The full quick suite; exit nonzero on failure like the CLI does.
    println!();
    let report = gbell::verify::run(true, 7);
    report
        .write_text(&mut std::io::stdout().lock())
        .expect("stdout write");
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
