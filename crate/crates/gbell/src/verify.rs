//! Runtime self-check suite behind the `verify` command.
//!
//! Three groups of checks, each reported as a named pass/fail line:
//!
//! 1. oracle equivalence: the closed-form kernels agree with the dense
//!    matrix oracle on random angle tuples, and the joint outcome
//!    distribution is normalized and reducible to sum classes of the
//!    aggregate angle;
//! 2. strategy equivalence: scalar, vector and dichotomic outcome
//!    strategies produce identical violation ratios on unbiased scenarios,
//!    and vector/dichotomic agree on biased scenarios;
//! 3. optimizer cross-validation: alternating ascent reproduces the
//!    exhaustive optimum on every scenario small enough to enumerate.
//!
//! Failures are reported, never thrown: internal errors surface as failed
//! checks so the command can always print a complete report.

use crate::error::Result;
use crate::kernels::{
    kernel_complex_biased, kernel_complex_unbiased, kernel_real_biased, kernel_real_unbiased,
    sum_class_probability,
};
use crate::lhv::search::{
    alternating_ascent, exhaustive_max, violation_ratio, Method, DEFAULT_RESTARTS,
};
use crate::oracle;
use crate::scenario::{Scenario, StateKind, Strategy};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::TAU;
use std::io::{self, Write};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Full suite outcome.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub quick: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One `PASS`/`FAIL` line per check plus a summary line.
    pub fn write_text(&self, out: &mut impl Write) -> io::Result<()> {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {}: {}", c.name, c.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(out, "{passed}/{} checks passed", self.checks.len())
    }
}

fn run_check(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match body() {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Sampling ranges: quick mode restricts to d <= 3, N <= 3 and fewer
/// random tuples so the suite finishes in seconds.
struct Ranges {
    d_max: u32,
    n_max: u32,
    tuples: u32,
}

fn ranges(quick: bool) -> Ranges {
    if quick {
        Ranges {
            d_max: 3,
            n_max: 3,
            tuples: 50,
        }
    } else {
        Ranges {
            d_max: 5,
            n_max: 4,
            tuples: 200,
        }
    }
}

fn random_angles(rng: &mut ChaCha12Rng, n: u32) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..TAU)).collect()
}

/// Real product kernels vs the dense oracle, both GHZ families.
fn oracle_kernel_real(quick: bool, seed: u64, state: StateKind) -> Result<(bool, String)> {
    let r = ranges(quick);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let d_min = if state == StateKind::Biased { 3 } else { 2 };
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for d in d_min..=r.d_max {
        for n in 2..=r.n_max {
            let ghz = oracle::ghz_state(n, d, state)?;
            for _ in 0..r.tuples {
                let angles = random_angles(&mut rng, n);
                let ap: f64 = angles.iter().sum();
                let kernel = match state {
                    StateKind::Unbiased => kernel_real_unbiased(d, n, ap),
                    StateKind::Biased => kernel_real_biased(d, n, ap)?,
                };
                worst = worst.max((kernel - oracle::expectation_real(&ghz, &angles)?).abs());
                count += 1;
            }
        }
    }
    Ok((
        worst <= 1e-10,
        format!("max |kernel - oracle| = {worst:.2e} over {count} tuples"),
    ))
}

/// Complex kernels vs the dense oracle; the kernels carry no N, so this
/// also checks their independence of the observer count.
fn oracle_kernel_complex(quick: bool, seed: u64) -> Result<(bool, String)> {
    let r = ranges(quick);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut count = 0u32;
    for state in [StateKind::Unbiased, StateKind::Biased] {
        let d_min = if state == StateKind::Biased { 3 } else { 2 };
        for d in d_min..=r.d_max {
            for n in 2..=r.n_max {
                let ghz = oracle::ghz_state(n, d, state)?;
                for _ in 0..r.tuples {
                    let angles = random_angles(&mut rng, n);
                    let ap: f64 = angles.iter().sum();
                    let kernel = match state {
                        StateKind::Unbiased => kernel_complex_unbiased(d, ap),
                        StateKind::Biased => kernel_complex_biased(d, ap),
                    };
                    let got = oracle::expectation_complex(&ghz, &angles)?;
                    worst = worst.max((kernel - got).norm());
                    count += 1;
                }
            }
        }
    }
    Ok((
        worst <= 1e-10,
        format!("max |kernel - oracle| = {worst:.2e} over {count} tuples"),
    ))
}

/// Joint outcome distributions: normalized, reducible to sum classes, and
/// dependent on the angles only through their sum.
fn outcome_distribution(quick: bool, seed: u64) -> Result<(bool, String)> {
    let r = ranges(quick);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst_norm = 0.0f64;
    let mut worst_class = 0.0f64;
    let mut count = 0u32;
    for state in [StateKind::Unbiased, StateKind::Biased] {
        let d_min = if state == StateKind::Biased { 3 } else { 2 };
        for d in d_min..=r.d_max {
            for n in 2..=r.n_max {
                let ghz = oracle::ghz_state(n, d, state)?;
                for _ in 0..r.tuples / 4 {
                    let angles = random_angles(&mut rng, n);
                    let ap: f64 = angles.iter().sum();
                    let joint = oracle::joint_outcome_distribution(&ghz, &angles)?;
                    worst_norm = worst_norm.max((joint.iter().sum::<f64>() - 1.0).abs());

                    // Collapse the d^N joint outcomes onto label sums mod d
                    // and compare against the single-variable class kernel.
                    let mut classes = vec![0.0f64; d as usize];
                    for (flat, p) in joint.iter().enumerate() {
                        let mut rest = flat;
                        let mut s = 0;
                        for _ in 0..n {
                            s += rest % d as usize;
                            rest /= d as usize;
                        }
                        classes[s % d as usize] += p;
                    }
                    // Same aggregate angle concentrated on one observer.
                    let mut lumped = vec![0.0; n as usize];
                    lumped[0] = ap;
                    let joint2 = oracle::joint_outcome_distribution(&ghz, &lumped)?;
                    let mut classes2 = vec![0.0f64; d as usize];
                    for (flat, p) in joint2.iter().enumerate() {
                        let mut rest = flat;
                        let mut s = 0;
                        for _ in 0..n {
                            s += rest % d as usize;
                            rest /= d as usize;
                        }
                        classes2[s % d as usize] += p;
                    }
                    for s in 0..d {
                        let want = sum_class_probability(d, state, s, ap);
                        worst_class = worst_class.max((classes[s as usize] - want).abs());
                        worst_class =
                            worst_class.max((classes2[s as usize] - classes[s as usize]).abs());
                    }
                    count += 1;
                }
            }
        }
    }
    Ok((
        worst_norm <= 1e-12 && worst_class <= 1e-10,
        format!(
            "max |sum - 1| = {worst_norm:.2e}, max class deviation = {worst_class:.2e} over {count} tuples"
        ),
    ))
}

/// The unbiased scenarios of the reference-table suite.
pub fn equivalence_scenarios(quick: bool) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for (n, d_max) in [(2u32, 6u32), (3, 6), (4, 5)] {
        for d in 2..=d_max {
            for l in 2..=6u32 {
                if quick && (n > 3 || d > 3 || l > 3) {
                    continue;
                }
                out.push((n, d, l));
            }
        }
    }
    out
}

/// Scalar, vector and dichotomic ratios agree on unbiased scenarios.
fn strategy_equivalence_unbiased(quick: bool, seed: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (n, d, l) in equivalence_scenarios(quick) {
        let ratio = |strategy| -> Result<f64> {
            let s = Scenario::new(n, d, l, StateKind::Unbiased, strategy)?;
            Ok(violation_ratio(&s, Method::Auto, DEFAULT_RESTARTS, seed)?.ratio)
        };
        let real = ratio(Strategy::RealScalar)?;
        let vector = ratio(Strategy::VectorModD)?;
        let dich = ratio(Strategy::DichotomicModD)?;
        worst = worst.max((vector - real).abs()).max((dich - real).abs());
        count += 1;
    }
    Ok((
        worst <= 1e-9,
        format!("max ratio spread = {worst:.2e} over {count} scenarios x 3 strategies"),
    ))
}

/// Vector and dichotomic ratios agree on biased scenarios at L = 6.
fn strategy_equivalence_biased(quick: bool, seed: u64) -> Result<(bool, String)> {
    let d_max = if quick { 3 } else { 6 };
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 2..=3u32 {
        for d in 3..=d_max {
            let ratio = |strategy| -> Result<f64> {
                let s = Scenario::new(n, d, 6, StateKind::Biased, strategy)?;
                Ok(violation_ratio(&s, Method::Auto, DEFAULT_RESTARTS, seed)?.ratio)
            };
            worst = worst.max((ratio(Strategy::VectorModD)? - ratio(Strategy::DichotomicModD)?).abs());
            count += 1;
        }
    }
    Ok((
        worst <= 1e-9,
        format!("max ratio spread = {worst:.2e} over {count} scenarios x 2 strategies"),
    ))
}

/// Every (N, d, L, state, strategy) combination whose model space is small
/// enough to enumerate outright; spans all strategies and both families.
pub fn cross_validation_scenarios(quick: bool) -> Vec<Scenario> {
    let (n_max, d_max, l_max) = if quick { (3, 3, 2) } else { (3, 4, 3) };
    let mut out = Vec::new();
    for state in [StateKind::Unbiased, StateKind::Biased] {
        for strategy in [
            Strategy::RealScalar,
            Strategy::VectorModD,
            Strategy::DichotomicModD,
            Strategy::ComplexRoot,
        ] {
            for n in 2..=n_max {
                for d in 2..=d_max {
                    for l in 1..=l_max {
                        let Ok(s) = Scenario::new(n, d, l, state, strategy) else {
                            continue;
                        };
                        if s.model_count() <= 300_000 {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Alternating ascent reproduces the exhaustive optimum; the per-step
/// monotonicity of the ascent is asserted inside the optimizer itself on
/// every run.
fn optimizer_cross_validation(quick: bool, seed: u64) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for s in cross_validation_scenarios(quick) {
        let exact = exhaustive_max(&s)?.lhv_max;
        let ascent = alternating_ascent(&s, DEFAULT_RESTARTS, seed)?.lhv_max;
        worst = worst.max((ascent - exact).abs() / exact.abs().max(1.0));
        count += 1;
    }
    Ok((
        worst <= 1e-9,
        format!("max relative gap = {worst:.2e} over {count} exhaustively solved scenarios"),
    ))
}

/// Runs the whole suite. `quick` restricts every check to d <= 3, N <= 3
/// with fewer samples; `seed` fixes all random draws and optimizer runs.
pub fn run(quick: bool, seed: u64) -> VerifyReport {
    let checks = vec![
        run_check("oracle-kernel-real-unbiased", || {
            oracle_kernel_real(quick, seed, StateKind::Unbiased)
        }),
        run_check("oracle-kernel-real-biased", || {
            oracle_kernel_real(quick, seed ^ 1, StateKind::Biased)
        }),
        run_check("oracle-kernel-complex", || {
            oracle_kernel_complex(quick, seed ^ 2)
        }),
        run_check("outcome-distribution", || {
            outcome_distribution(quick, seed ^ 3)
        }),
        run_check("strategy-equivalence-unbiased", || {
            strategy_equivalence_unbiased(quick, seed)
        }),
        run_check("strategy-equivalence-biased", || {
            strategy_equivalence_biased(quick, seed)
        }),
        run_check("optimizer-cross-validation", || {
            optimizer_cross_validation(quick, seed)
        }),
    ];
    VerifyReport { quick, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes_end_to_end() {
        let report = run(true, 7);
        let mut text = Vec::new();
        report.write_text(&mut text).unwrap();
        let text = String::from_utf8(text).unwrap();
        assert!(
            report.all_passed(),
            "quick verify suite failed:\n{text}"
        );
        assert_eq!(report.checks.len(), 7);
        assert_eq!(text.lines().count(), 8);
        assert!(text.ends_with("7/7 checks passed\n"));
    }

    #[test]
    fn failures_surface_as_fail_lines_not_errors() {
        let report = VerifyReport {
            quick: false,
            checks: vec![
                Check {
                    name: "a",
                    passed: true,
                    detail: "ok".into(),
                },
                Check {
                    name: "b",
                    passed: false,
                    detail: "error: boom".into(),
                },
            ],
        };
        assert!(!report.all_passed());
        assert!(report.check("b").is_some_and(|c| !c.passed));
        let mut text = Vec::new();
        report.write_text(&mut text).unwrap();
        assert_eq!(
            String::from_utf8(text).unwrap(),
            "PASS a: ok\nFAIL b: error: boom\n1/2 checks passed\n"
        );
    }

    #[test]
    fn cross_validation_spans_strategies_states_and_fifty_scenarios() {
        let all = cross_validation_scenarios(false);
        assert!(all.len() >= 50, "only {} scenarios", all.len());
        for state in [StateKind::Unbiased, StateKind::Biased] {
            for strategy in [
                Strategy::RealScalar,
                Strategy::VectorModD,
                Strategy::DichotomicModD,
                Strategy::ComplexRoot,
            ] {
                assert!(
                    all.iter()
                        .any(|s| s.state == state && s.strategy == strategy),
                    "no scenario for {state:?} {strategy:?}"
                );
            }
        }
        assert!(all.iter().all(|s| s.model_count() <= 300_000));
    }
}
