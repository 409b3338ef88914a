//! Deterministic local-hidden-variable models and their correlation
//! tensors.
//!
//! A model assigns every observer, in every basis k, an offset c in Z_d;
//! the detector at angle alpha(k, j) = beta_k + 2 pi j / d then carries
//! the outcome label (c - j) mod d. Parameterizing by offsets makes the
//! relabeling constraint (shifting a setting by 2 pi / d decrements its
//! label) structural: no representable model can violate it, and the
//! search space is exactly d^(L*N).

pub mod search;

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{CorrelationTensor, EntryKind};
use crate::scenario::{
    dichotomic_value, real_outcome_values, vector_outcome, OffsetConvention, Scenario, Strategy,
};

/// Per-observer, per-basis label offsets. Ordering is lexicographic on
/// the observer-major flattened offset list, which is the tie-breaking
/// order used by the optimizers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LhvModel {
    pub dim: u32,
    /// offsets[i][k] in Z_d for observer i, basis k.
    pub offsets: Vec<Vec<u8>>,
}

impl LhvModel {
    pub fn new(dim: u32, offsets: Vec<Vec<u8>>) -> Result<Self> {
        if dim < 2 || dim > 256 {
            return Err(Error::InvalidScenario(format!(
                "model dimension {dim} outside supported range 2..=256"
            )));
        }
        if offsets.is_empty() || offsets.iter().any(|o| o.is_empty()) {
            return Err(Error::InvalidScenario(
                "model needs at least one observer and one basis".into(),
            ));
        }
        let bases = offsets[0].len();
        if offsets.iter().any(|o| o.len() != bases) {
            return Err(Error::InvalidScenario(
                "observers disagree on basis count".into(),
            ));
        }
        if offsets.iter().flatten().any(|&c| c as u32 >= dim) {
            return Err(Error::InvalidScenario(format!(
                "offset out of range for d={dim}"
            )));
        }
        Ok(LhvModel { dim, offsets })
    }

    pub fn zeros(parties: u32, bases: u32, dim: u32) -> LhvModel {
        LhvModel {
            dim,
            offsets: vec![vec![0; bases as usize]; parties as usize],
        }
    }

    pub fn random(parties: u32, bases: u32, dim: u32, rng: &mut impl rand::Rng) -> LhvModel {
        let offsets = (0..parties)
            .map(|_| {
                (0..bases)
                    .map(|_| rng.random_range(0..dim) as u8)
                    .collect()
            })
            .collect();
        LhvModel { dim, offsets }
    }

    pub fn parties(&self) -> u32 {
        self.offsets.len() as u32
    }

    pub fn bases(&self) -> u32 {
        self.offsets[0].len() as u32
    }

    /// Label of observer i at setting index t: (c_{i, t mod L} - t div L)
    /// mod d.
    pub fn label(&self, observer: usize, t: usize) -> u32 {
        let bases = self.offsets[observer].len();
        let c = self.offsets[observer][t % bases] as i64;
        let j = (t / bases) as i64;
        (c - j).rem_euclid(self.dim as i64) as u32
    }

    /// labels[i][t] for all observers over the full setting range d*L.
    pub fn label_table(&self) -> Vec<Vec<u32>> {
        let points = (self.dim as usize) * self.offsets[0].len();
        (0..self.offsets.len())
            .map(|i| (0..points).map(|t| self.label(i, t)).collect())
            .collect()
    }

    fn matches(&self, scenario: &Scenario) -> Result<()> {
        if self.dim != scenario.dim
            || self.parties() != scenario.parties
            || self.bases() != scenario.bases
        {
            return Err(Error::ShapeMismatch(format!(
                "model shape (d={}, n={}, l={}) does not fit scenario {}",
                self.dim,
                self.parties(),
                self.bases(),
                scenario
            )));
        }
        Ok(())
    }
}

/// The packed model: label 0 on every grid angle in [-pi/d, pi/d), i.e.
/// each basis offset rounds the basis angle to its nearest multiple of
/// 2 pi / d. Boundary angles (exactly pi/d) fall outside the label-0
/// window; the comparisons below are exact in integer arithmetic for the
/// conventions where ties can occur.
pub fn packed_model(scenario: &Scenario) -> LhvModel {
    let d = scenario.dim;
    let l = scenario.bases;
    let even_first = scenario.parties % 2 == 0;
    let offsets = (0..scenario.parties)
        .map(|i| {
            let shifted = i == 0 && even_first;
            (0..l)
                .map(|k| {
                    // Basis angle beta = offset + 2 pi k/(dL) lies in
                    // [0, 2 pi/d); label 0 is kept while beta < pi/d.
                    let high = match (shifted, scenario.offset) {
                        (true, OffsetConvention::HalfGridStep) => 2 * k + 1 >= l,
                        (true, OffsetConvention::LiteralPaper) => {
                            k as f64 / l as f64 + 1.0 / (4.0 * PI) >= 0.5
                        }
                        _ => 2 * k >= l,
                    };
                    if high {
                        (d - 1) as u8
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    LhvModel {
        dim: d,
        offsets,
    }
}

/// Correlation tensor of a deterministic model: per index tuple, the
/// product of per-site real values, or the strategy's value at the label
/// sum mod d.
pub fn lhv_tensor(model: &LhvModel, scenario: &Scenario) -> Result<CorrelationTensor> {
    model.matches(scenario)?;
    let points = scenario.points_per_observer();
    let n = scenario.parties as usize;
    let d = scenario.dim;
    let kind = EntryKind::for_scenario(scenario);
    let width = kind.components();
    let labels = model.label_table();
    let total = scenario.tuple_count();
    let mut data = vec![0.0; total * width];

    match scenario.strategy {
        Strategy::RealScalar => {
            let values = real_outcome_values(d)?;
            let site: Vec<Vec<f64>> = labels
                .iter()
                .map(|row| row.iter().map(|&a| values[a as usize]).collect())
                .collect();
            let mut digits = vec![0usize; n];
            for slot in data.iter_mut() {
                *slot = digits
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| site[i][t])
                    .product();
                increment(&mut digits, points);
            }
        }
        _ => {
            // Mod-d strategies: precompute the value for each sum class.
            let class_values: Vec<Vec<f64>> = (0..d)
                .map(|s| match scenario.strategy {
                    Strategy::ComplexRoot => {
                        let z = crate::scenario::root_of_unity(d, s);
                        vec![z.re, z.im]
                    }
                    Strategy::VectorModD => vector_outcome(d, s).unwrap(),
                    Strategy::DichotomicModD => vec![dichotomic_value(d, s).unwrap()],
                    Strategy::RealScalar => unreachable!(),
                })
                .collect();
            let mut digits = vec![0usize; n];
            for flat in 0..total {
                let s = digits
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| labels[i][t])
                    .sum::<u32>()
                    % d;
                data[flat * width..(flat + 1) * width]
                    .copy_from_slice(&class_values[s as usize]);
                increment(&mut digits, points);
            }
        }
    }

    Ok(CorrelationTensor {
        parties: scenario.parties,
        points,
        kind,
        data,
    })
}

fn increment(digits: &mut [usize], base: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d == base {
            *d = 0;
        } else {
            break;
        }
    }
}

/// Which optimizer produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Exhaustive,
    AlternatingAscent,
    Packed,
}

/// Outcome of a violation-ratio computation.
///
/// `ratio` is `quantum_norm / lhv_max`; if a pathological configuration
/// ever yields `lhv_max <= 0` the ratio is reported as the +infinity
/// sentinel instead of a negative value (JSON renders it as null).
#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub scenario: Scenario,
    pub quantum_norm: f64,
    pub lhv_max: f64,
    pub ratio: f64,
    pub best_model: LhvModel,
    pub optimizer: OptimizerKind,
    #[serde(rename = "restarts")]
    pub restarts_used: u32,
    pub seed: u64,
}

impl ViolationReport {
    /// Full-precision JSON with stable key names.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn csv_header() -> &'static str {
        "n,d,l,state,strategy,optimizer,quantum_norm,lhv_max,ratio"
    }

    /// One CSV row with numeric fields rounded to 3 decimals.
    pub fn to_csv_row(&self) -> String {
        let opt = match self.optimizer {
            OptimizerKind::Exhaustive => "exhaustive",
            OptimizerKind::AlternatingAscent => "alternating_ascent",
            OptimizerKind::Packed => "packed",
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.scenario.parties,
            self.scenario.dim,
            self.scenario.bases,
            self.scenario.state,
            self.scenario.strategy,
            opt,
            format_3(self.quantum_norm),
            format_3(self.lhv_max),
            format_3(self.ratio),
        )
    }
}

/// Rounds half away from zero to 3 decimals, rendering "inf" for the
/// degenerate sentinel.
pub fn format_3(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.3}", (x * 1000.0).round() / 1000.0)
}

/// Writes a report as pretty JSON plus trailing newline.
pub fn write_json(report: &ViolationReport, out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "{}", report.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::quantum_tensor;
    use crate::scenario::StateKind;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::TAU;

    fn scen(n: u32, d: u32, l: u32, state: StateKind, strategy: Strategy) -> Scenario {
        Scenario::new(n, d, l, state, strategy).unwrap()
    }

    #[test]
    fn model_validation_rejects_ragged_or_out_of_range_offsets() {
        assert!(LhvModel::new(3, vec![vec![0, 1], vec![2, 0]]).is_ok());
        assert!(LhvModel::new(3, vec![vec![0, 3], vec![2, 0]]).is_err());
        assert!(LhvModel::new(3, vec![vec![0, 1], vec![2]]).is_err());
        assert!(LhvModel::new(1, vec![vec![0]]).is_err());
        assert!(LhvModel::new(3, vec![]).is_err());
    }

    #[test]
    fn labels_follow_the_relabeling_constraint() {
        // Shifting a setting by 2 pi / d (j -> j+1) decrements the label.
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for d in 2..=5u32 {
            for l in 1..=3u32 {
                let model = LhvModel::random(3, l, d, &mut rng);
                for i in 0..3 {
                    for t in 0..((d * l) as usize - l as usize) {
                        let a = model.label(i, t);
                        let b = model.label(i, t + l as usize);
                        assert_eq!(b, (a + d - 1) % d);
                    }
                }
            }
        }
    }

    #[test]
    fn real_tensor_is_a_product_of_site_values() {
        let s = scen(2, 2, 1, StateKind::Unbiased, Strategy::RealScalar);
        let model = LhvModel::zeros(2, 1, 2);
        let t = lhv_tensor(&model, &s).unwrap();
        // Labels for d=2, L=1: t=0 -> 0, t=1 -> 1; values 1/2, -1/2.
        let want = [0.25, -0.25, -0.25, 0.25];
        for (a, b) in t.data.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn complex_tensor_entries_have_unit_modulus() {
        let s = scen(2, 5, 2, StateKind::Unbiased, Strategy::ComplexRoot);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let model = LhvModel::random(2, 2, 5, &mut rng);
        let t = lhv_tensor(&model, &s).unwrap();
        for f in 0..t.tuple_count() {
            let norm = (t.data[2 * f].powi(2) + t.data[2 * f + 1].powi(2)).sqrt();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tensor_shapes_track_the_strategy() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let model = LhvModel::random(2, 2, 4, &mut rng);
        for (strategy, width) in [
            (Strategy::RealScalar, 1usize),
            (Strategy::ComplexRoot, 2),
            (Strategy::VectorModD, 3),
            (Strategy::DichotomicModD, 1),
        ] {
            let s = scen(2, 4, 2, StateKind::Unbiased, strategy);
            let t = lhv_tensor(&model, &s).unwrap();
            assert_eq!(t.data.len(), t.tuple_count() * width);
        }
        // Mismatched shapes are refused.
        let s = scen(2, 4, 3, StateKind::Unbiased, Strategy::RealScalar);
        assert!(lhv_tensor(&model, &s).is_err());
    }

    #[test]
    fn packed_model_keeps_label_zero_near_angle_zero() {
        // d=2, L=2, no offset (odd N): basis angles 0 and pi/2; the second
        // basis sits exactly on the window boundary pi/d and flips.
        let s = scen(3, 2, 2, StateKind::Unbiased, Strategy::RealScalar);
        let p = packed_model(&s);
        for i in 0..3 {
            assert_eq!(p.offsets[i], vec![0, 1]);
        }
        // Even N: observer 0 is shifted by half a grid step, so its first
        // basis angle pi/8 stays in the window and the second (5 pi/8)
        // leaves it.
        let s2 = scen(2, 2, 2, StateKind::Unbiased, Strategy::RealScalar);
        let p2 = packed_model(&s2);
        assert_eq!(p2.offsets[0], vec![0, 1]);
        assert_eq!(p2.offsets[1], vec![0, 1]);
        // d=4, L=4, odd N: bases 0,1 keep label 0 (angles < pi/4), bases
        // 2,3 are offset by d-1.
        let s3 = scen(3, 4, 4, StateKind::Unbiased, Strategy::RealScalar);
        let p3 = packed_model(&s3);
        assert_eq!(p3.offsets[1], vec![0, 0, 3, 3]);
    }

    #[test]
    fn packed_model_angle_window_matches_a_float_check() {
        // Independent float reconstruction of the window rule on odd-N
        // grids: label 0 iff the basis angle, reduced to (-pi, pi], lies
        // in [-pi/d, pi/d).
        for d in 2..=6u32 {
            for l in 1..=6u32 {
                let s = scen(3, d, l, StateKind::Unbiased, Strategy::RealScalar);
                let p = packed_model(&s);
                for k in 0..l as usize {
                    let beta = TAU * k as f64 / (d * l) as f64;
                    let in_window = beta < PI / d as f64 - 1e-12;
                    let expect = if in_window { 0 } else { (d - 1) as u8 };
                    assert_eq!(p.offsets[1][k], expect, "d={d} l={l} k={k}");
                }
            }
        }
    }

    #[test]
    fn report_serializes_with_stable_keys() {
        let s = scen(2, 2, 2, StateKind::Unbiased, Strategy::RealScalar);
        let model = packed_model(&s);
        let q = quantum_tensor(&s).unwrap();
        let l = lhv_tensor(&model, &s).unwrap();
        let lhv_max = q.dot(&l).unwrap();
        let report = ViolationReport {
            scenario: s,
            quantum_norm: q.dot(&q).unwrap(),
            lhv_max,
            ratio: q.dot(&q).unwrap() / lhv_max,
            best_model: model,
            optimizer: OptimizerKind::Packed,
            restarts_used: 0,
            seed: 42,
        };
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "scenario",
            "quantum_norm",
            "lhv_max",
            "ratio",
            "best_model",
            "optimizer",
            "restarts",
            "seed",
        ] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(json["optimizer"], "packed");
        assert!(json["best_model"]["offsets"].is_array());
        let row = report.to_csv_row();
        assert!(row.starts_with("2,2,2,unbiased,real,packed,"));
        assert_eq!(ViolationReport::csv_header().split(',').count(),
                   row.split(',').count());
    }

    #[test]
    fn csv_rounding_is_half_away_from_zero() {
        assert_eq!(format_3(1.2344), "1.234");
        assert_eq!(format_3(0.0005000000001), "0.001");
        assert_eq!(format_3(-0.0005000000001), "-0.001");
        assert_eq!(format_3(2.0), "2.000");
        assert_eq!(format_3(f64::INFINITY), "inf");
    }
}
