//! Settings grids and correlation tensors.
//!
//! Each observer i measures at d*L equally spaced angles
//! alpha_i(t) = offset_i + 2 pi t / (dL), t = 0..dL-1, where only observer
//! 0 may carry a nonzero offset (see
//! [`OffsetConvention`](crate::scenario::OffsetConvention)). The setting
//! index t bundles a basis choice k = t mod L with a label rotation
//! j = t div L: shifting an angle by 2 pi / d re-labels the same basis.
//!
//! A [`CorrelationTensor`] stores one correlation value per index tuple
//! (t_1, ..., t_N) in flat row-major order (observer 0 most significant).
//! Entries are real scalars, complex scalars stored as (re, im) pairs, or
//! (d-1)-component vectors, depending on the outcome strategy. The
//! geometry of a Bell inequality lives in the Euclidean dot products of
//! these tensors.

use num_complex::Complex64;
use std::f64::consts::TAU;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::kernels;
use crate::oracle;
use crate::scenario::{dichotomic_value, vector_outcome, Scenario, StateKind, Strategy};

/// Measurement angles for every observer.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingsGrid {
    /// angles[i][t] is observer i's angle at setting index t.
    pub angles: Vec<Vec<f64>>,
    /// Grid spacing 2 pi / (dL), identical for all observers.
    pub step: f64,
    /// Offset applied to observer 0 (zero for odd N or convention `None`).
    pub first_offset: f64,
}

/// Builds the settings grid for a scenario.
pub fn build_grid(scenario: &Scenario) -> SettingsGrid {
    let points = scenario.points_per_observer();
    let step = TAU / points as f64;
    let first_offset = scenario.first_observer_offset();
    let angles = (0..scenario.parties)
        .map(|i| {
            let offset = if i == 0 { first_offset } else { 0.0 };
            (0..points).map(|t| offset + step * t as f64).collect()
        })
        .collect();
    SettingsGrid {
        angles,
        step,
        first_offset,
    }
}

/// Shape of a single tensor entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Real,
    Complex,
    /// Vector entries carry their component count (d - 1).
    Vector(u32),
}

impl EntryKind {
    pub fn components(self) -> usize {
        match self {
            EntryKind::Real => 1,
            EntryKind::Complex => 2,
            EntryKind::Vector(w) => w as usize,
        }
    }

    pub fn for_scenario(scenario: &Scenario) -> EntryKind {
        match scenario.strategy {
            Strategy::RealScalar | Strategy::DichotomicModD => EntryKind::Real,
            Strategy::ComplexRoot => EntryKind::Complex,
            Strategy::VectorModD => EntryKind::Vector(scenario.dim - 1),
        }
    }
}

/// Correlation values over the full settings grid, flat row-major with
/// observer 0 most significant; each entry occupies
/// [`EntryKind::components`] consecutive slots.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    pub parties: u32,
    /// Settings per observer (d*L).
    pub points: usize,
    pub kind: EntryKind,
    pub data: Vec<f64>,
}

impl CorrelationTensor {
    /// Number of index tuples, points^parties.
    pub fn tuple_count(&self) -> usize {
        self.points.pow(self.parties)
    }

    /// Euclidean dot product with entrywise unit weights. For complex
    /// entries the second tensor is conjugated and the real part is
    /// returned: Re sum_t a_t * conj(b_t).
    pub fn dot(&self, other: &CorrelationTensor) -> Result<f64> {
        if self.parties != other.parties || self.points != other.points || self.kind != other.kind
        {
            return Err(Error::ShapeMismatch(format!(
                "tensor shapes differ: {}^{} {:?} vs {}^{} {:?}",
                self.points, self.parties, self.kind, other.points, other.parties, other.kind
            )));
        }
        debug_assert_eq!(self.data.len(), other.data.len());
        let dot = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum();
        Ok(dot)
    }

    /// Full complex overlap sum_t a_t * conj(b_t), of which [`Self::dot`]
    /// is the real part. The imaginary part vanishes for real kinds.
    pub fn overlap_complex(&self, other: &CorrelationTensor) -> Result<Complex64> {
        let re = self.dot(other)?;
        let im = match self.kind {
            EntryKind::Complex => self
                .data
                .chunks_exact(2)
                .zip(other.data.chunks_exact(2))
                .map(|(a, b)| a[1] * b[0] - a[0] * b[1])
                .sum(),
            _ => 0.0,
        };
        Ok(Complex64::new(re, im))
    }

    /// Writes a plain-text dump: one line per index tuple with the tuple
    /// followed by the entry components.
    pub fn dump_text(&self, out: &mut impl Write) -> io::Result<()> {
        let width = self.kind.components();
        writeln!(
            out,
            "# parties={} points={} components={}",
            self.parties, self.points, width
        )?;
        let mut digits = vec![0usize; self.parties as usize];
        for flat in 0..self.tuple_count() {
            let mut line = String::new();
            for (pos, t) in digits.iter().enumerate() {
                if pos > 0 {
                    line.push(',');
                }
                line.push_str(&t.to_string());
            }
            for c in 0..width {
                line.push_str(&format!(" {:+.12e}", self.data[flat * width + c]));
            }
            writeln!(out, "{line}")?;
            increment_odometer(&mut digits, self.points);
        }
        Ok(())
    }
}

/// Advances a little-endian-last odometer; returns the running digit sum
/// delta so callers can track sums incrementally.
fn increment_odometer(digits: &mut [usize], base: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d == base {
            *d = 0;
        } else {
            break;
        }
    }
}

/// Per-setting-sum table of entry values: row T holds the entry at
/// alpha' = first_offset + 2 pi T / points, T = 0..points-1.
pub(crate) fn sum_table(scenario: &Scenario) -> Result<Vec<f64>> {
    let points = scenario.points_per_observer();
    let width = EntryKind::for_scenario(scenario).components();
    let step = TAU / points as f64;
    let offset = scenario.first_observer_offset();
    let d = scenario.dim;
    let n = scenario.parties;
    let mut table = vec![0.0; points * width];
    for t in 0..points {
        let alpha = offset + step * t as f64;
        let row = &mut table[t * width..(t + 1) * width];
        match (scenario.strategy, scenario.state) {
            (Strategy::RealScalar, StateKind::Unbiased) => {
                row[0] = kernels::kernel_real_unbiased(d, n, alpha);
            }
            (Strategy::RealScalar, StateKind::Biased) => {
                row[0] = kernels::kernel_real_biased(d, n, alpha)?;
            }
            (Strategy::ComplexRoot, StateKind::Unbiased) => {
                let z = kernels::kernel_complex_unbiased(d, alpha);
                row[0] = z.re;
                row[1] = z.im;
            }
            (Strategy::ComplexRoot, StateKind::Biased) => {
                let z = kernels::kernel_complex_biased(d, alpha);
                row[0] = z.re;
                row[1] = z.im;
            }
            (Strategy::VectorModD, state) => {
                row.copy_from_slice(&kernels::kernel_vector(d, state, alpha));
            }
            (Strategy::DichotomicModD, state) => {
                row[0] = kernels::kernel_dichotomic(d, state, alpha);
            }
        }
    }
    Ok(table)
}

/// Quantum correlation tensor via the closed-form kernels. Entries depend
/// on the index tuple only through the sum of its settings, so the fill is
/// a table lookup per tuple.
pub fn quantum_tensor(scenario: &Scenario) -> Result<CorrelationTensor> {
    let points = scenario.points_per_observer();
    let kind = EntryKind::for_scenario(scenario);
    let width = kind.components();
    let table = sum_table(scenario)?;
    let total = scenario.tuple_count();
    let mut data = vec![0.0; total * width];
    let mut digits = vec![0usize; scenario.parties as usize];
    let mut digit_sum = 0usize;
    for flat in 0..total {
        let t = digit_sum % points;
        data[flat * width..(flat + 1) * width].copy_from_slice(&table[t * width..(t + 1) * width]);
        // Track the digit sum across the odometer carry chain.
        for pos in (0..digits.len()).rev() {
            digits[pos] += 1;
            digit_sum += 1;
            if digits[pos] == points {
                digits[pos] = 0;
                digit_sum -= points;
            } else {
                break;
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

/// Quantum correlation tensor straight from the dense oracle: every entry
/// is a Born-rule computation on the GHZ state with no closed-form input.
/// Limited to d^N <= [`oracle::MAX_DENSE`]; intended for verification.
pub fn quantum_tensor_via_oracle(scenario: &Scenario) -> Result<CorrelationTensor> {
    let points = scenario.points_per_observer();
    let kind = EntryKind::for_scenario(scenario);
    let width = kind.components();
    let grid = build_grid(scenario);
    let ghz = oracle::ghz_state(scenario.parties, scenario.dim, scenario.state)?;
    let d = scenario.dim as usize;
    let n = scenario.parties as usize;
    let total = scenario.tuple_count();
    let mut data = vec![0.0; total * width];
    let mut digits = vec![0usize; n];
    let mut angles = vec![0.0; n];
    for flat in 0..total {
        for (i, &t) in digits.iter().enumerate() {
            angles[i] = grid.angles[i][t];
        }
        let row = &mut data[flat * width..(flat + 1) * width];
        match scenario.strategy {
            Strategy::RealScalar => {
                row[0] = oracle::expectation_real(&ghz, &angles)?;
            }
            Strategy::ComplexRoot => {
                let z = oracle::expectation_complex(&ghz, &angles)?;
                row[0] = z.re;
                row[1] = z.im;
            }
            Strategy::VectorModD | Strategy::DichotomicModD => {
                let joint = oracle::joint_outcome_distribution(&ghz, &angles)?;
                let mut class = vec![0.0; d];
                for (idx, p) in joint.iter().enumerate() {
                    let mut rem = idx;
                    let mut s = 0usize;
                    for _ in 0..n {
                        s += rem % d;
                        rem /= d;
                    }
                    class[s % d] += p;
                }
                if scenario.strategy == Strategy::DichotomicModD {
                    row[0] = (0..d)
                        .map(|s| dichotomic_value(scenario.dim, s as u32).unwrap() * class[s])
                        .sum();
                } else {
                    for (s, &p) in class.iter().enumerate() {
                        let v = vector_outcome(scenario.dim, s as u32).unwrap();
                        for (r, vc) in row.iter_mut().zip(v) {
                            *r += p * vc;
                        }
                    }
                }
            }
        }
        increment_odometer(&mut digits, points);
    }
    Ok(CorrelationTensor {
        parties: scenario.parties,
        points,
        kind,
        data,
    })
}

/// Dispatches between the kernel fill and the dense-oracle fill.
pub fn quantum_tensor_with(scenario: &Scenario, via_oracle: bool) -> Result<CorrelationTensor> {
    if via_oracle {
        quantum_tensor_via_oracle(scenario)
    } else {
        quantum_tensor(scenario)
    }
}

/// Squared Euclidean norm of the quantum tensor, Q . Q.
pub fn quantum_norm(scenario: &Scenario) -> Result<f64> {
    let q = quantum_tensor(scenario)?;
    q.dot(&q)
}

/// Complex view of a tensor entry (imaginary part zero for real kinds).
#[cfg(test)]
pub(crate) fn entry_as_complex(t: &CorrelationTensor, flat: usize) -> Complex64 {
    match t.kind {
        EntryKind::Complex => Complex64::new(t.data[2 * flat], t.data[2 * flat + 1]),
        _ => Complex64::new(t.data[flat], 0.0),
    }
}
