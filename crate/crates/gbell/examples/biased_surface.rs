//! Map where biased GHZ states violate the dichotomic inequality.
//!
//! The L -> infinity ratio for biased states with mod-d outcomes has a
//! closed form over (N, d); its natural log is positive exactly where the
//! inequality is violated. This example prints the surface the `surface`
//! subcommand exports as CSV and locates the structure visible in it: each
//! N slice is single-dipped in d, and the dip of the N = 6 slice sits at
//! d = 7, the hardest dimension to violate with six observers.
//!
//! Run with: cargo run --example biased_surface

use gbell::asymptotics::biased_surface;

fn main() -> gbell::Result<()> {
    let rows = biased_surface((2, 15), (3, 20))?;

    for n in [3u32, 6, 8] {
        let slice: Vec<(u32, f64)> = rows
            .iter()
            .filter(|(rn, _, _)| *rn == n)
            .map(|(_, d, v)| (*d, *v))
            .collect();
        let (min_d, min_v) = slice
            .iter()
            .copied()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        println!("N={n}: min log-ratio {min_v:+.4} at d={min_d}");
        let line: Vec<String> = slice
            .iter()
            .map(|(d, v)| format!("{d}:{}", if *v > 0.0 { '+' } else { '-' }))
            .collect();
        println!("  violation sign by d: {}", line.join(" "));
    }

    // First violating dimension per observer count, within the d <= 20
    // window of the surface.
    println!("\nsmallest violating d per N (within d <= 20):");
    for n in 2..=8u32 {
        let first = rows
            .iter()
            .filter(|(rn, _, v)| *rn == n && *v > 0.0)
            .map(|(_, d, _)| *d)
            .min();
        match first {
            Some(d) => println!("  N={n}: d = {d}"),
            None => println!("  N={n}: none"),
        }
    }
    Ok(())
}
