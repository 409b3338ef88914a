//! Compare the three LHV optimizers on small complex-strategy scenarios.
//!
//! Exhaustive search enumerates all d^(LN) deterministic models and is the
//! ground truth where feasible. Alternating ascent sweeps one observer at
//! a time from random restarts. The packed model is a single closed-form
//! candidate (each observer assigns label a to the two-pi/d window around
//! angle 2 pi a / d); for the complex strategy it attains the optimum on
//! every small grid checked here, which is why it anchors the limit
//! formulas.
//!
//! Run with: cargo run --example packed_vs_exhaustive

use gbell::{violation_ratio, Method, Scenario, StateKind, Strategy};

fn main() -> gbell::Result<()> {
    println!("{:<18} {:>12} {:>12} {:>12}", "scenario", "exhaustive", "ascent", "packed");
    for (n, d, l) in [(2u32, 2u32, 2u32), (2, 3, 2), (2, 3, 3), (3, 3, 2), (2, 4, 2)] {
        let s = Scenario::new(n, d, l, StateKind::Unbiased, Strategy::ComplexRoot)?;
        let exact = violation_ratio(&s, Method::Exhaustive, 1, 0)?;
        let ascent = violation_ratio(&s, Method::AlternatingAscent, 64, 1234)?;
        let packed = violation_ratio(&s, Method::Packed, 1, 0)?;
        println!(
            "N={n} d={d} L={l}        {:>12.8} {:>12.8} {:>12.8}",
            exact.lhv_max, ascent.lhv_max, packed.lhv_max
        );
    }

    // The exhaustive cap guards against runaway requests; oversized model
    // spaces are refused, not truncated.
    let big = Scenario::new(3, 5, 4, StateKind::Unbiased, Strategy::ComplexRoot)?;
    match violation_ratio(&big, Method::Exhaustive, 1, 0) {
        Err(e) => println!("\nN=3 d=5 L=4 exhaustive: {e}"),
        Ok(_) => unreachable!("5^12 models exceed the cap"),
    }
    Ok(())
}
