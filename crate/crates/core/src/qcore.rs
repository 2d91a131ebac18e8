//! Dense complex linear algebra over finite-dimensional Hilbert spaces.
//!
//! Index convention throughout the crate is big-endian: in a tensor product
//! `a ⊗ b` the first factor owns the most significant index bits, and qubit
//! wire 1 is the most significant bit of a register.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for state-level comparisons (norms, distances).
pub const STATE_TOL: f64 = 1e-9;
/// Default tolerance for entry-level comparisons (Hermiticity).
pub const ENTRY_TOL: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A unit-norm amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Builds a state, checking the unit-norm invariant at [`STATE_TOL`].
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm = norm_of(&amps);
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { amps })
    }

    /// Wraps amplitudes produced by a norm-preserving computation.
    pub(crate) fn from_unitary_output(amps: Vec<C64>) -> Self {
        debug_assert!((norm_of(&amps) - 1.0).abs() < 1e-6);
        Self { amps }
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    /// Equal superposition over all `dim` basis states.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { amps: vec![a; dim] })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// ℓ₂ distance `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> Result<bool> {
        Ok(self.distance(other)? <= tol)
    }

    /// Equality up to a global phase: the optimal phase is `⟨a|b⟩/|⟨a|b⟩|`.
    pub fn eq_up_to_phase(&self, other: &StateVector, tol: f64) -> Result<bool> {
        Ok(self.phase_aligned_distance(other)? <= tol)
    }

    /// `min_φ ‖e^{iφ}·self − other‖`.
    pub fn phase_aligned_distance(&self, other: &StateVector) -> Result<f64> {
        let overlap = self.inner(other)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

fn norm_of(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimMismatch { left, right });
    }
    Ok(())
}

fn square(m: &DMatrix<C64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(m.nrows())
}

/// A complex Hermitian matrix (a Hamiltonian).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: DMatrix<C64>,
}

impl HermitianOperator {
    /// Checks `H[i][j] = conj(H[j][i])` within [`ENTRY_TOL`].
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(m, ENTRY_TOL)
    }

    pub fn with_tolerance(m: DMatrix<C64>, tol: f64) -> Result<Self> {
        let dim = square(&m)?;
        for i in 0..dim {
            for j in i..dim {
                let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
                if deviation > tol {
                    return Err(Error::NonHermitian {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        Ok(Self { m })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let d = DVector::from_iterator(values.len(), values.iter().map(|&v| C64::new(v, 0.0)));
        Ok(Self {
            m: DMatrix::from_diagonal(&d),
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            m: DMatrix::zeros(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// `U · H · U†`. Rounding asymmetry is removed by averaging with the adjoint.
    pub fn conjugated_by(&self, u: &UnitaryOperator) -> Result<Self> {
        check_dims(u.dim(), self.dim())?;
        let raw = &u.m * &self.m * u.m.adjoint();
        Ok(Self {
            m: hermitian_part(raw),
        })
    }

    /// `(1 − w)·self + w·other`.
    pub fn convex_combination(&self, other: &HermitianOperator, w: f64) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            m: self.m.scale(1.0 - w) + other.m.scale(w),
        })
    }

    pub fn apply(&self, s: &StateVector) -> Result<Vec<C64>> {
        check_dims(self.dim(), s.dim())?;
        let v = DVector::from_column_slice(s.amplitudes());
        Ok((&self.m * v).iter().copied().collect())
    }

    /// Operator 2-norm, i.e. the largest absolute eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        hermitian_eigensystem(self)
            .eigenvalues
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn difference(&self, other: &HermitianOperator) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            m: &self.m - &other.m,
        })
    }
}

fn hermitian_part(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    (m + adj).scale(0.5)
}

/// A unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    m: DMatrix<C64>,
}

impl UnitaryOperator {
    /// Checks `U·U† = I` within [`STATE_TOL`] entrywise.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let dim = square(&m)?;
        let deviation = (&m * m.adjoint() - DMatrix::identity(dim, dim))
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()));
        if deviation > STATE_TOL {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self { m })
    }

    /// Products of unitaries are unitary up to rounding; skip the O(d³) check.
    pub(crate) fn from_trusted(m: DMatrix<C64>) -> Self {
        Self { m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    /// Matrix product `self · rhs` (rhs acts first on states).
    pub fn compose(&self, rhs: &UnitaryOperator) -> Result<Self> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(Self { m: &self.m * &rhs.m })
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        check_dims(self.dim(), s.dim())?;
        let mut out = vec![ZERO; s.dim()];
        self.apply_slice(s.amplitudes(), &mut out);
        Ok(StateVector::from_unitary_output(out))
    }

    pub(crate) fn apply_slice(&self, input: &[C64], out: &mut [C64]) {
        let d = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let mut acc = ZERO;
            for (j, x) in input.iter().enumerate() {
                acc += self.m[(i, j)] * x;
            }
            *o = acc;
        }
    }

    /// Largest entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        (&self.m * self.m.adjoint() - DMatrix::identity(d, d))
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    pub fn approx_eq(&self, other: &UnitaryOperator, tol: f64) -> bool {
        self.dim() == other.dim() && (&self.m - &other.m).iter().all(|z| z.norm() <= tol)
    }
}

/// Kronecker product with the big-endian index convention.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }
}

impl Tensor for UnitaryOperator {
    fn tensor(&self, other: &Self) -> Self {
        Self {
            m: self.m.kronecker(&other.m),
        }
    }
}

impl Tensor for HermitianOperator {
    fn tensor(&self, other: &Self) -> Self {
        Self {
            m: self.m.kronecker(&other.m),
        }
    }
}

/// Full spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Ascending, listed with multiplicity.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
}

impl Eigensystem {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_state(&self) -> &StateVector {
        &self.eigenvectors[0]
    }

    /// `Σ λ_i |v_i⟩⟨v_i|`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = self.eigenvectors[0].dim();
        let mut m = DMatrix::zeros(d, d);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let col = DVector::from_column_slice(v.amplitudes());
            m += (&col * col.adjoint()).scale(*lambda);
        }
        m
    }
}

pub fn hermitian_eigensystem(h: &HermitianOperator) -> Eigensystem {
    let d = h.dim();
    let eig = nalgebra::SymmetricEigen::new(h.m.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| {
            let col: Vec<C64> = eig.eigenvectors.column(i).iter().copied().collect();
            StateVector::normalized(col).expect("eigenvector columns are nonzero")
        })
        .collect();
    Eigensystem {
        eigenvalues,
        eigenvectors,
    }
}

/// `λ₁ − λ₀` counting multiplicity, so a degenerate ground space has gap 0.
/// A one-dimensional operator has gap 0.
pub fn spectral_gap(h: &HermitianOperator) -> f64 {
    if h.dim() < 2 {
        return 0.0;
    }
    let ev = hermitian_eigensystem(h).eigenvalues;
    (ev[1] - ev[0]).max(0.0)
}

/// Probability mass of `s` on the given basis indices.
pub fn subspace_probability(s: &StateVector, indices: &BTreeSet<usize>) -> Result<f64> {
    let dim = s.dim();
    indices.iter().try_fold(0.0, |acc, &i| {
        s.amps
            .get(i)
            .map(|a| acc + a.norm_sqr())
            .ok_or(Error::IndexOutOfRange { index: i, dim })
    })
}

/// Draws a basis index with probability `|amplitude|²`.
pub fn sample_basis<R: Rng + ?Sized>(s: &StateVector, rng: &mut R) -> usize {
    sample_distribution(&s.probabilities(), rng)
}

/// Samples an index from nonnegative weights; zero-weight entries are never returned.
pub fn sample_distribution<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last_positive = i;
        if target < acc {
            return i;
        }
    }
    last_positive
}

/// `|⟨a|b⟩|`.
pub fn dis(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm())
}

/// `‖a − b‖ ≤ eps`.
pub fn epsilon_close(a: &StateVector, b: &StateVector, eps: f64) -> Result<bool> {
    if eps < 0.0 {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be >= 0")));
    }
    Ok(a.distance(b)? <= eps)
}

pub fn walsh_hadamard() -> UnitaryOperator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    UnitaryOperator::from_trusted(DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)],
    ))
}

/// `WH^{⊗m}` as a dense matrix; `m = 0` gives the 1×1 identity.
pub fn walsh_hadamard_power(m: usize) -> UnitaryOperator {
    let wh = walsh_hadamard();
    (0..m).fold(UnitaryOperator::identity(1), |acc, _| acc.tensor(&wh))
}

/// In-place Walsh–Hadamard transform along one axis of a flattened array.
///
/// `data` is viewed as an `outer × len × inner` array (row-major) and the
/// transform `WH^{⊗log₂ len}` is applied along the middle axis. `len` must be
/// a power of two.
pub fn walsh_hadamard_axis(data: &mut [C64], outer: usize, len: usize, inner: usize) {
    debug_assert!(len.is_power_of_two());
    debug_assert_eq!(data.len(), outer * len * inner);
    if len == 1 {
        return;
    }
    let scale = 1.0 / (len as f64).sqrt();
    let mut h = 1;
    while h < len {
        // Blocks of 2h rows are aligned with the outer axis, so one pass over the
        // whole buffer covers every outer index.
        for chunk in data.chunks_exact_mut(2 * h * inner) {
            let (lo, hi) = chunk.split_at_mut(h * inner);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let t = *a;
                *a = t + *b;
                *b = t - *b;
            }
        }
        h *= 2;
    }
    for z in data.iter_mut() {
        *z *= scale;
    }
}
