//! Dense linear-algebra ground truth.
//!
//! Everything in this module works from first definitions: the discrete
//! Fourier matrix, the phased setting unitary U(alpha) = Diag(1, e^{i
//! alpha}, ..., e^{i(d-1)alpha}) * F, the real observable J(alpha) = U
//! Diag((d-1)/d, -1/d, ..., -1/d) U^dag, and explicit GHZ amplitudes. No
//! closed-form shortcut enters here: the analytic kernels elsewhere in the
//! crate are validated against this module, never the other way around.
//!
//! States are flat vectors of d^N complex amplitudes with observer 0 as
//! the most significant digit. Operators act one site at a time, so the
//! largest materialized object is the amplitude vector itself plus a
//! d x d matrix; the supported Hilbert-space size is capped at
//! [`MAX_DENSE`] amplitudes.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scenario::{root_of_unity, StateKind};

/// Largest supported dense Hilbert-space size d^N.
pub const MAX_DENSE: usize = 4096;

/// Flat state vector over N qudits of dimension d.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    dim: u32,
    parties: u32,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn parties(&self) -> u32 {
        self.parties
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other>, conjugating self.
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        debug_assert_eq!(self.amps.len(), other.amps.len());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies a single-site operator in place. Sites count from zero with
    /// observer 0 owning the most significant digit of the flat index.
    pub fn apply_site(&mut self, site: u32, op: &DenseOperator) {
        assert_eq!(op.dim, self.dim, "operator dimension mismatch");
        assert!(site < self.parties, "site index out of range");
        let d = self.dim as usize;
        let stride = d.pow(self.parties - 1 - site);
        let blocks = self.amps.len() / (d * stride);
        let mut scratch = vec![Complex64::ZERO; d];
        for outer in 0..blocks {
            let base = outer * d * stride;
            for inner in 0..stride {
                for (a, x) in scratch.iter_mut().enumerate() {
                    *x = self.amps[base + a * stride + inner];
                }
                for m in 0..d {
                    let mut acc = Complex64::ZERO;
                    for (a, x) in scratch.iter().enumerate() {
                        acc += op.mat[(m, a)] * x;
                    }
                    self.amps[base + m * stride + inner] = acc;
                }
            }
        }
    }
}

/// Dense d x d operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: u32,
    mat: Array2<Complex64>,
}

impl DenseOperator {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    pub fn entry(&self, m: usize, a: usize) -> Complex64 {
        self.mat[(m, a)]
    }

    pub fn dagger(&self) -> DenseOperator {
        let d = self.dim as usize;
        let mat = Array2::from_shape_fn((d, d), |(m, a)| self.mat[(a, m)].conj());
        DenseOperator { dim: self.dim, mat }
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        DenseOperator {
            dim: self.dim,
            mat: self.mat.dot(&other.mat),
        }
    }

    fn from_diagonal(diag: &[Complex64]) -> DenseOperator {
        let d = diag.len();
        let mut mat = Array2::zeros((d, d));
        for (i, &x) in diag.iter().enumerate() {
            mat[(i, i)] = x;
        }
        DenseOperator { dim: d as u32, mat }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim as usize).map(|i| self.mat[(i, i)]).sum()
    }
}

/// F[m, a] = omega^{m a} / sqrt(d) with omega = exp(2 pi i / d).
pub fn fourier_matrix(d: u32) -> DenseOperator {
    assert!(d >= 2, "dimension must be at least 2");
    let scale = 1.0 / (d as f64).sqrt();
    let mat = Array2::from_shape_fn((d as usize, d as usize), |(m, a)| {
        scale * root_of_unity(d, ((m as u32) * (a as u32)) % d)
    });
    DenseOperator { dim: d, mat }
}

/// U(alpha) = Diag(1, e^{i alpha}, ..., e^{i(d-1)alpha}) * F.
pub fn setting_unitary(d: u32, alpha: f64) -> DenseOperator {
    let f = fourier_matrix(d);
    let diag: Vec<Complex64> = (0..d)
        .map(|m| Complex64::from_polar(1.0, m as f64 * alpha))
        .collect();
    DenseOperator::from_diagonal(&diag).mul(&f)
}

/// J(alpha) = U(alpha) Diag((d-1)/d, -1/d, ..., -1/d) U^dag(alpha).
pub fn real_observable(d: u32, alpha: f64) -> DenseOperator {
    let u = setting_unitary(d, alpha);
    let eigs: Vec<Complex64> = {
        let df = d as f64;
        let mut v = vec![Complex64::new(-1.0 / df, 0.0); d as usize];
        v[0] = Complex64::new((df - 1.0) / df, 0.0);
        v
    };
    u.mul(&DenseOperator::from_diagonal(&eigs)).mul(&u.dagger())
}

/// V(alpha) = U(alpha) Diag(omega^0, ..., omega^{d-1}) U^dag(alpha); the
/// unitary whose expectation is the complex-root correlation function.
pub fn complex_observable(d: u32, alpha: f64) -> DenseOperator {
    let u = setting_unitary(d, alpha);
    let diag: Vec<Complex64> = (0..d).map(|a| root_of_unity(d, a)).collect();
    u.mul(&DenseOperator::from_diagonal(&diag)).mul(&u.dagger())
}

/// GHZ state on N qudits: the unbiased family superposes all d basis
/// strings |j...j>, the biased family drops j = 0.
pub fn ghz_state(parties: u32, d: u32, state: StateKind) -> Result<DenseState> {
    if parties < 2 || d < 2 {
        return Err(Error::InvalidScenario(format!(
            "GHZ state needs N >= 2 and d >= 2, got N={parties}, d={d}"
        )));
    }
    if state == StateKind::Biased && d < 3 {
        return Err(Error::InvalidScenario(
            "biased GHZ requires d >= 3".into(),
        ));
    }
    let size = (d as u128).checked_pow(parties).unwrap_or(u128::MAX);
    if size > MAX_DENSE as u128 {
        return Err(Error::OracleTooLarge {
            size,
            max: MAX_DENSE as u128,
        });
    }
    let size = size as usize;
    // Index of |j j ... j> is j * (d^N - 1)/(d - 1).
    let rep: usize = (0..parties).map(|k| (d as usize).pow(k)).sum();
    let start = match state {
        StateKind::Unbiased => 0,
        StateKind::Biased => 1,
    };
    let amp = Complex64::new(1.0 / ((d - start) as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; size];
    for j in start..d {
        amps[j as usize * rep] = amp;
    }
    Ok(DenseState {
        dim: d,
        parties,
        amps,
    })
}

fn check_angles(state: &DenseState, angles: &[f64]) -> Result<()> {
    if angles.len() != state.parties as usize {
        return Err(Error::ShapeMismatch(format!(
            "{} angles supplied for {} observers",
            angles.len(),
            state.parties
        )));
    }
    Ok(())
}

/// <psi| J(alpha_1) x ... x J(alpha_N) |psi>. The product of Hermitian
/// single-site observables is Hermitian, so the value is real; residual
/// imaginary parts above 1e-12 indicate an internal inconsistency.
pub fn expectation_real(state: &DenseState, angles: &[f64]) -> Result<f64> {
    check_angles(state, angles)?;
    let mut w = state.clone();
    for (site, &alpha) in angles.iter().enumerate() {
        w.apply_site(site as u32, &real_observable(state.dim, alpha));
    }
    let val = state.inner(&w);
    assert!(
        val.im.abs() < 1e-12,
        "expectation of Hermitian product has imaginary part {}",
        val.im
    );
    Ok(val.re)
}

/// <psi| V(alpha_1) x ... x V(alpha_N) |psi> for the complex strategy.
pub fn expectation_complex(state: &DenseState, angles: &[f64]) -> Result<Complex64> {
    check_angles(state, angles)?;
    let mut w = state.clone();
    for (site, &alpha) in angles.iter().enumerate() {
        w.apply_site(site as u32, &complex_observable(state.dim, alpha));
    }
    Ok(state.inner(&w))
}

/// Born probabilities of every joint outcome (a_1, ..., a_N) when observer
/// i measures in the U(alpha_i) basis. The returned vector is flat
/// row-major with observer 0 most significant; entries sum to 1.
pub fn joint_outcome_distribution(state: &DenseState, angles: &[f64]) -> Result<Vec<f64>> {
    check_angles(state, angles)?;
    let mut w = state.clone();
    for (site, &alpha) in angles.iter().enumerate() {
        w.apply_site(site as u32, &setting_unitary(state.dim, alpha).dagger());
    }
    Ok(w.amps.iter().map(|a| a.norm_sqr()).collect())
}
