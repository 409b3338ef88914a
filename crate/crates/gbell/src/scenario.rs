//! Experiment configuration and outcome-value assignments.
//!
//! A [`Scenario`] fixes the number of observers N, the local dimension d,
//! the number of measurement bases L per observer, the GHZ state family,
//! the outcome strategy, and the grid offset convention. The four
//! strategies share one label structure (every local detector carries a
//! label in Z_d) and differ only in the numbers attached to those labels:
//!
//! * `RealScalar` multiplies per-site scalars (d-1)/d and -1/d,
//! * `ComplexRoot` takes the d-th root of unity of the label sum,
//! * `VectorModD` assigns a unit simplex vector to the label sum mod d,
//! * `DichotomicModD` assigns (d-1)/d to sum class 0 and -1/d otherwise.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// GHZ family: `Unbiased` superposes all d kets, `Biased` drops j = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Unbiased,
    Biased,
}

/// Outcome strategy attached to the measurement labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[serde(rename = "real")]
    RealScalar,
    #[serde(rename = "complex")]
    ComplexRoot,
    #[serde(rename = "vector")]
    VectorModD,
    #[serde(rename = "dichotomic")]
    DichotomicModD,
}

/// Placement of the first observer's extra phase for even N.
///
/// With an even number of observers the symmetric grid is degenerate: the
/// quantum correlations repeat with the grid period and a deterministic
/// model reproduces them exactly. Shifting only the first observer's grid
/// restores a meaningful maximization. `HalfGridStep` shifts by half a
/// grid step, pi/(dL); `LiteralPaper` uses the fixed phase 1/(2d) radians;
/// `None` applies no shift (useful to demonstrate the degeneracy).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetConvention {
    HalfGridStep,
    LiteralPaper,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Scenario {
    /// Number of observers N (>= 2).
    #[serde(rename = "n")]
    pub parties: u32,
    /// Local Hilbert-space dimension d (>= 2; >= 3 for the biased state).
    #[serde(rename = "d")]
    pub dim: u32,
    /// Number of bases L per observer (>= 1); each observer's settings
    /// grid has d*L points spanning [0, 2pi).
    #[serde(rename = "l")]
    pub bases: u32,
    pub state: StateKind,
    pub strategy: Strategy,
    pub offset: OffsetConvention,
}

impl Scenario {
    /// Validates and builds a scenario with the default offset convention
    /// (`HalfGridStep`, which only matters for even N).
    pub fn new(
        parties: u32,
        dim: u32,
        bases: u32,
        state: StateKind,
        strategy: Strategy,
    ) -> Result<Self> {
        if parties < 2 {
            return Err(Error::InvalidScenario(format!(
                "need at least two observers, got N={parties}"
            )));
        }
        if dim < 2 {
            return Err(Error::InvalidScenario(format!(
                "local dimension must be at least 2, got d={dim}"
            )));
        }
        if state == StateKind::Biased && dim < 3 {
            return Err(Error::InvalidScenario(
                "biased state requires d >= 3 (d=2 would be a product state)".into(),
            ));
        }
        if bases < 1 {
            return Err(Error::InvalidScenario("need at least one basis".into()));
        }
        Ok(Scenario {
            parties,
            dim,
            bases,
            state,
            strategy,
            offset: OffsetConvention::HalfGridStep,
        })
    }

    pub fn with_offset(mut self, offset: OffsetConvention) -> Self {
        self.offset = offset;
        self
    }

    /// Grid points per observer: d*L.
    pub fn points_per_observer(&self) -> usize {
        (self.dim * self.bases) as usize
    }

    /// Total number of index tuples, (d*L)^N.
    pub fn tuple_count(&self) -> usize {
        self.points_per_observer().pow(self.parties)
    }

    /// Extra phase on the first observer's grid; zero for odd N.
    pub fn first_observer_offset(&self) -> f64 {
        if self.parties % 2 != 0 {
            return 0.0;
        }
        match self.offset {
            OffsetConvention::HalfGridStep => {
                std::f64::consts::PI / (self.dim as f64 * self.bases as f64)
            }
            OffsetConvention::LiteralPaper => 0.5 / self.dim as f64,
            OffsetConvention::None => 0.0,
        }
    }

    /// Number of deterministic local models: d^(L*N).
    pub fn model_count(&self) -> u128 {
        let digits = self.bases as u32 * self.parties;
        (self.dim as u128).saturating_pow(digits)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} d={} l={} state={} strategy={}",
            self.parties, self.dim, self.bases, self.state, self.strategy
        )
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Unbiased => "unbiased",
            StateKind::Biased => "biased",
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::RealScalar => "real",
            Strategy::ComplexRoot => "complex",
            Strategy::VectorModD => "vector",
            Strategy::DichotomicModD => "dichotomic",
        })
    }
}

impl fmt::Display for OffsetConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OffsetConvention::HalfGridStep => "half_grid_step",
            OffsetConvention::LiteralPaper => "literal_paper",
            OffsetConvention::None => "none",
        })
    }
}

impl FromStr for StateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unbiased" => Ok(StateKind::Unbiased),
            "biased" => Ok(StateKind::Biased),
            _ => Err(Error::OutOfRange(format!(
                "unknown state '{s}' (expected unbiased|biased)"
            ))),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Strategy::RealScalar),
            "complex" => Ok(Strategy::ComplexRoot),
            "vector" => Ok(Strategy::VectorModD),
            "dichotomic" => Ok(Strategy::DichotomicModD),
            _ => Err(Error::OutOfRange(format!(
                "unknown strategy '{s}' (expected real|complex|vector|dichotomic)"
            ))),
        }
    }
}

impl FromStr for OffsetConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half_grid_step" => Ok(OffsetConvention::HalfGridStep),
            "literal_paper" => Ok(OffsetConvention::LiteralPaper),
            "none" => Ok(OffsetConvention::None),
            _ => Err(Error::OutOfRange(format!(
                "unknown offset convention '{s}' (expected half_grid_step|literal_paper|none)"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Outcome values
// ---------------------------------------------------------------------------

/// The value a strategy attaches to an outcome: a scalar, a phase, or a
/// point on the (d-1)-dimensional simplex.
#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeValue {
    Real(f64),
    Complex(Complex64),
    Vector(Vec<f64>),
}

/// Eigenvalue list of the real observable: [(d-1)/d, -1/d, ..., -1/d].
pub fn real_outcome_values(d: u32) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("dimension {d} < 2")));
    }
    let df = d as f64;
    let mut vals = vec![-1.0 / df; d as usize];
    vals[0] = (df - 1.0) / df;
    Ok(vals)
}

/// d-th root of unity attached to label a: exp(2*pi*i*a/d).
pub fn complex_outcome_value(d: u32, a: u32) -> Result<Complex64> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("dimension {d} < 2")));
    }
    if a >= d {
        return Err(Error::OutOfRange(format!("label {a} >= d={d}")));
    }
    Ok(root_of_unity(d, a))
}

/// exp(2*pi*i*a/d) with the argument reduced mod d before the trig call.
pub(crate) fn root_of_unity(d: u32, a: u32) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (a % d) as f64 / d as f64)
}

/// Unit vector v_{d,i} on the regular simplex in R^(d-1), built by the
/// recursion v_{d,d-1} = (1,0,...,0) and
/// v_{d,i} = (-1/(d-1), sqrt((d-1)^2 - 1)/(d-1) * v_{d-1,i}) for i < d-1.
pub fn vector_outcome(d: u32, i: u32) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("dimension {d} < 2")));
    }
    if i >= d {
        return Err(Error::OutOfRange(format!("index {i} >= d={d}")));
    }
    let mut v = vec![0.0; (d - 1) as usize];
    fill_vector_outcome(d, i, &mut v);
    Ok(v)
}

fn fill_vector_outcome(d: u32, i: u32, out: &mut [f64]) {
    debug_assert_eq!(out.len(), (d - 1) as usize);
    if i == d - 1 {
        out[0] = 1.0;
        for x in &mut out[1..] {
            *x = 0.0;
        }
        return;
    }
    let m = (d - 1) as f64;
    out[0] = -1.0 / m;
    if d > 2 {
        fill_vector_outcome(d - 1, i, &mut out[1..]);
        let scale = (m * m - 1.0).sqrt() / m;
        for x in &mut out[1..] {
            *x *= scale;
        }
    }
}

/// Value assigned to the label-sum class s: (d-1)/d for s = 0, else -1/d.
pub fn dichotomic_value(d: u32, s: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("dimension {d} < 2")));
    }
    if s >= d {
        return Err(Error::OutOfRange(format!("class {s} >= d={d}")));
    }
    Ok(if s == 0 {
        (d as f64 - 1.0) / d as f64
    } else {
        -1.0 / d as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn real_values_match_eigenvalue_list() {
        assert_eq!(real_outcome_values(2).unwrap(), vec![0.5, -0.5]);
        let v3 = real_outcome_values(3).unwrap();
        assert_abs_diff_eq!(v3[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v3[1], -1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(v3.len(), 3);
        for d in 2..=12 {
            let sum: f64 = real_outcome_values(d).unwrap().iter().sum();
            assert_abs_diff_eq!(sum, 0.0, epsilon = 1e-14);
        }
        assert!(real_outcome_values(1).is_err());
    }

    #[test]
    fn complex_values_are_roots_of_unity() {
        let m1 = complex_outcome_value(2, 1).unwrap();
        assert_abs_diff_eq!(m1.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m1.im, 0.0, epsilon = 1e-15);
        let i4 = complex_outcome_value(4, 1).unwrap();
        assert_abs_diff_eq!(i4.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(i4.im, 1.0, epsilon = 1e-15);
        let sum: Complex64 = (0..5).map(|a| complex_outcome_value(5, a).unwrap()).sum();
        assert_abs_diff_eq!(sum.norm(), 0.0, epsilon = 1e-14);
        assert!(complex_outcome_value(3, 3).is_err());
    }

    #[test]
    fn complex_values_compose_additively() {
        for d in 2..=7 {
            for a in 0..d {
                for b in 0..d {
                    let lhs = complex_outcome_value(d, a).unwrap()
                        * complex_outcome_value(d, b).unwrap();
                    let rhs = complex_outcome_value(d, (a + b) % d).unwrap();
                    assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn vector_outcomes_sit_on_the_simplex() {
        // Distinguished vector and the d=3 pair quoted from the recursion.
        assert_eq!(vector_outcome(2, 1).unwrap(), vec![1.0]);
        assert_eq!(vector_outcome(2, 0).unwrap(), vec![-1.0]);
        let v30 = vector_outcome(3, 0).unwrap();
        assert_abs_diff_eq!(v30[0], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v30[1], -(3.0f64.sqrt()) / 2.0, epsilon = 1e-15);

        for d in 2..=12u32 {
            let vs: Vec<Vec<f64>> = (0..d).map(|i| vector_outcome(d, i).unwrap()).collect();
            // Pairwise dots: -1/(d-1) off the diagonal, 1 on it.
            for (i, vi) in vs.iter().enumerate() {
                for (j, vj) in vs.iter().enumerate() {
                    let dot: f64 = vi.iter().zip(vj).map(|(a, b)| a * b).sum();
                    let want = if i == j { 1.0 } else { -1.0 / (d as f64 - 1.0) };
                    assert_abs_diff_eq!(dot, want, epsilon = 1e-12);
                }
            }
            // The vectors sum to zero componentwise.
            for c in 0..(d - 1) as usize {
                let sum: f64 = vs.iter().map(|v| v[c]).sum();
                assert_abs_diff_eq!(sum, 0.0, epsilon = 1e-12);
            }
        }
        assert!(vector_outcome(4, 4).is_err());
    }

    #[test]
    fn dichotomic_values_are_two_valued_and_zero_sum() {
        assert_abs_diff_eq!(dichotomic_value(3, 0).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dichotomic_value(3, 2).unwrap(), -1.0 / 3.0, epsilon = 1e-15);
        let sum: f64 = (0..5).map(|s| dichotomic_value(5, s).unwrap()).sum();
        assert_abs_diff_eq!(sum, 0.0, epsilon = 1e-14);
        assert!(dichotomic_value(3, 3).is_err());
    }

    #[test]
    fn scenario_validation_rejects_bad_parameters() {
        assert!(Scenario::new(1, 3, 2, StateKind::Unbiased, Strategy::RealScalar).is_err());
        assert!(Scenario::new(2, 1, 2, StateKind::Unbiased, Strategy::RealScalar).is_err());
        assert!(Scenario::new(2, 2, 0, StateKind::Unbiased, Strategy::RealScalar).is_err());
        assert!(Scenario::new(2, 2, 2, StateKind::Biased, Strategy::RealScalar).is_err());
        assert!(Scenario::new(2, 3, 2, StateKind::Biased, Strategy::RealScalar).is_ok());
    }

    #[test]
    fn offsets_apply_only_to_even_observer_counts() {
        let even = Scenario::new(2, 2, 2, StateKind::Unbiased, Strategy::RealScalar).unwrap();
        assert_abs_diff_eq!(
            even.first_observer_offset(),
            std::f64::consts::PI / 4.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            even.with_offset(OffsetConvention::LiteralPaper)
                .first_observer_offset(),
            0.25,
            epsilon = 1e-15
        );
        assert_eq!(
            even.with_offset(OffsetConvention::None)
                .first_observer_offset(),
            0.0
        );
        let odd = Scenario::new(3, 2, 2, StateKind::Unbiased, Strategy::RealScalar).unwrap();
        assert_eq!(odd.first_observer_offset(), 0.0);
    }

    #[test]
    fn scenario_serializes_with_short_keys() {
        let s = Scenario::new(3, 4, 2, StateKind::Biased, Strategy::ComplexRoot).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(json["n"], 3);
        assert_eq!(json["d"], 4);
        assert_eq!(json["l"], 2);
        assert_eq!(json["state"], "biased");
        assert_eq!(json["strategy"], "complex");
        assert_eq!(json["offset"], "half_grid_step");
    }

    #[test]
    fn display_and_fromstr_round_trip() {
        for s in ["real", "complex", "vector", "dichotomic"] {
            assert_eq!(s.parse::<Strategy>().unwrap().to_string(), s);
        }
        for s in ["unbiased", "biased"] {
            assert_eq!(s.parse::<StateKind>().unwrap().to_string(), s);
        }
        for s in ["half_grid_step", "literal_paper", "none"] {
            assert_eq!(s.parse::<OffsetConvention>().unwrap().to_string(), s);
        }
        assert!("quaternion".parse::<Strategy>().is_err());
    }
}
