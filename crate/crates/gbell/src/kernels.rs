//! Closed-form correlation kernels.
//!
//! For GHZ states every correlation function in this crate depends on the
//! measurement angles only through their sum alpha' = sum_i alpha_i. This
//! module holds those single-variable kernels:
//!
//! * real product strategy, unbiased state:
//!   E(alpha') = 2 d^{-N-1} sum_{j=1}^{d-1} (d-j) cos(j alpha');
//! * complex strategy: E(alpha') = ((d-1) e^{-i alpha'} + e^{i(d-1)
//!   alpha'}) / d unbiased, (d-2)/(d-1) e^{-i alpha'} biased;
//! * sum-class strategies (vector and dichotomic) assembled from the
//!   probability of the outcome-sum class s, which is a Dirichlet kernel
//!   evaluated at alpha' + 2 pi s / d;
//! * real product strategy on the biased state, computed through the dense
//!   oracle and memoized (no closed form is used in production code; the
//!   unit tests cross-check the cache against an independently derived
//!   series).
//!
//! Apart from the real product kernels, all kernels are independent of the
//! number of observers N; that independence is itself tested against the
//! oracle.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::Result;
use crate::oracle;
use crate::scenario::{dichotomic_value, vector_outcome, StateKind};
use std::f64::consts::TAU;

/// Squared modulus of the geometric phase sum: |sum_m e^{-im theta}|^2
/// over m = 0..d-1 (unbiased) or m = 1..d-1 (biased).
pub fn dirichlet_kernel(d: u32, biased: bool, theta: f64) -> f64 {
    debug_assert!(d >= 2 && (!biased || d >= 3));
    let start = if biased { 1 } else { 0 };
    let mut acc = Complex64::ZERO;
    for m in start..d {
        acc += Complex64::from_polar(1.0, -(m as f64) * theta);
    }
    acc.norm_sqr()
}

/// Probability that the outcome labels of all N observers sum to s mod d,
/// given that the measurement angles sum to alpha'. Independent of N.
pub fn sum_class_probability(d: u32, state: StateKind, s: u32, alpha_prime: f64) -> f64 {
    assert!(s < d, "class index out of range");
    let biased = state == StateKind::Biased;
    assert!(!biased || d >= 3, "biased state requires d >= 3");
    let theta = alpha_prime + TAU * s as f64 / d as f64;
    let norm = if biased {
        (d * (d - 1)) as f64
    } else {
        (d * d) as f64
    };
    dirichlet_kernel(d, biased, theta) / norm
}

/// Real product strategy on the unbiased GHZ state:
/// 2 d^{-N-1} sum_{j=1}^{d-1} (d-j) cos(j alpha').
pub fn kernel_real_unbiased(d: u32, parties: u32, alpha_prime: f64) -> f64 {
    debug_assert!(d >= 2 && parties >= 2);
    let df = d as f64;
    let mut sum = 0.0;
    for j in 1..d {
        sum += (df - j as f64) * ((j as f64) * alpha_prime).cos();
    }
    2.0 * df.powi(-(parties as i32) - 1) * sum
}

/// Complex strategy on the unbiased GHZ state:
/// ((d-1) e^{-i alpha'} + e^{i(d-1) alpha'}) / d.
pub fn kernel_complex_unbiased(d: u32, alpha_prime: f64) -> Complex64 {
    debug_assert!(d >= 2);
    let df = d as f64;
    ((df - 1.0) * Complex64::from_polar(1.0, -alpha_prime)
        + Complex64::from_polar(1.0, (df - 1.0) * alpha_prime))
        / df
}

/// Complex strategy on the biased GHZ state: (d-2)/(d-1) e^{-i alpha'}.
pub fn kernel_complex_biased(d: u32, alpha_prime: f64) -> Complex64 {
    assert!(d >= 3, "biased state requires d >= 3");
    let df = d as f64;
    Complex64::from_polar((df - 2.0) / (df - 1.0), -alpha_prime)
}

/// Dichotomic sum-class strategy: sum_s dichotomicValue(d, s) * P(s).
/// For the unbiased state this reduces analytically to
/// (2/d^2) sum_{k=1}^{d-1} (d-k) cos(k alpha').
pub fn kernel_dichotomic(d: u32, state: StateKind, alpha_prime: f64) -> f64 {
    (0..d)
        .map(|s| dichotomic_value(d, s).unwrap() * sum_class_probability(d, state, s, alpha_prime))
        .sum()
}

/// Vector sum-class strategy: sum_s v_{d,s} * P(s), a (d-1)-vector.
pub fn kernel_vector(d: u32, state: StateKind, alpha_prime: f64) -> Vec<f64> {
    let mut out = vec![0.0; (d - 1) as usize];
    for s in 0..d {
        let p = sum_class_probability(d, state, s, alpha_prime);
        for (o, v) in out.iter_mut().zip(vector_outcome(d, s).unwrap()) {
            *o += p * v;
        }
    }
    out
}

/// Real product strategy on the biased GHZ state, evaluated through the
/// dense oracle with all the angle weight on the first observer. Results
/// are memoized per (d, N, alpha') since tensor construction revisits the
/// same d*L angle sums many times; the cache is process-wide, thread-safe
/// and idempotent.
pub fn kernel_real_biased(d: u32, parties: u32, alpha_prime: f64) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u64), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (d, parties, alpha_prime.to_bits());
    if let Some(&hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit);
    }
    let state = oracle::ghz_state(parties, d, StateKind::Biased)?;
    let mut angles = vec![0.0; parties as usize];
    angles[0] = alpha_prime;
    let val = oracle::expectation_real(&state, &angles)?;
    cache.lock().unwrap().insert(key, val);
    Ok(val)
}
