//! Evaluate the closed-form L -> infinity violation ratios.
//!
//! As the number of bases grows the settings grid fills the continuum and
//! the optimizer's job disappears: both the quantum norm and the best LHV
//! overlap become integrals with closed forms. This example prints the
//! same quantities the `limit` subcommand serves as JSON.
//!
//! Run with: cargo run --example limit_formulas

use gbell::asymptotics::{
    complex_violation_threshold, limit_ratio, real_growth_factor, Formula,
};
use std::f64::consts::PI;

fn main() -> gbell::Result<()> {
    // The d = 2, N = 2 real limit is pi^2 / 8.
    let r = limit_ratio(Formula::RealUnbiased, 2, 2)?;
    println!(
        "real d=2 N=2:    {:.12}   (pi^2/8 = {:.12})",
        r.ratio,
        PI * PI / 8.0
    );

    // Adding an observer multiplies the real-limit ratio by a fixed
    // factor; the first few are pi/2, 2pi/(3 sqrt 3), pi/(2 sqrt 2), pi/3.
    println!("\nper-observer growth factors (at N = 20):");
    for d in [2u32, 3, 4, 6] {
        println!("  d={d}: {:.10}", real_growth_factor(d, 20)?);
    }

    // Complex-strategy limits fill the last column of the N = 2 and N = 3
    // reference tables.
    println!("\ncomplex limits:");
    for n in [2u32, 3] {
        let row: Vec<String> = (2..=6)
            .map(|d| format!("{:.3}", limit_ratio(Formula::ComplexUnbiased, d, n).unwrap().ratio))
            .collect();
        println!("  N={n}, d=2..6: {}", row.join(", "));
    }

    // The largest dimension still violating the complex inequality grows
    // linearly with N at rate pi^2/6 = 1.645 (approached from above).
    println!("\ncomplex violation threshold:");
    for n in [10u32, 20, 50, 100] {
        let d = complex_violation_threshold(n)?;
        println!("  N={n}: largest violating d = {d} (d/N = {:.3})", d as f64 / n as f64);
    }

    // Biased states with mod-d outcomes: no violation for two observers at
    // moderate d, violation for three and up.
    println!("\nbiased limits:");
    for n in [2u32, 3, 6] {
        let row: Vec<String> = [3u32, 5, 7, 12]
            .iter()
            .map(|&d| format!("d={d}: {:.3}", limit_ratio(Formula::BiasedModD, d, n).unwrap().ratio))
            .collect();
        println!("  N={n}: {}", row.join("  "));
    }
    Ok(())
}
