//! State-vector simulations of the Grover family: QFT, Grover iterate,
//! amplitude estimation and amplification, counting and maximum finding.
//!
//! Preparations are applied as operators on amplitude slices rather than as
//! dense matrices, so registers of a few thousand amplitudes stay cheap.
//! Every application of the good-subspace phase flip is one oracle query.

mod counting;
mod estimation;
mod maxfind;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{walsh_hadamard_axis, StateVector, UnitaryOperator, C64, ZERO};

pub use counting::{quantum_count, CountEstimate};
pub use estimation::{amplification_rounds, amplitude_amplify, amplitude_estimation, estimation_distribution, EstimationResult};
pub use maxfind::{find_maximum, find_maximum_majority, MaxFindConfig, DEFAULT_BUDGET_CONSTANT};

/// Default Fourier resolution for amplitude estimation.
pub const DEFAULT_RESOLUTION: usize = 1024;

/// The unitary `A` whose output `A|0⟩` is split into good and bad parts.
pub trait PreparationOperator: Sync {
    fn dim(&self) -> usize;

    /// `state ← A·state`.
    fn apply(&self, state: &mut [C64]);

    /// `state ← A†·state`.
    fn apply_adjoint(&self, state: &mut [C64]);

    /// `A|0⟩`.
    fn prepare(&self) -> StateVector {
        let mut v = vec![ZERO; self.dim()];
        v[0] = C64::new(1.0, 0.0);
        self.apply(&mut v);
        StateVector::from_unitary_output(v)
    }
}

/// A preparation given as an explicit unitary matrix.
#[derive(Debug, Clone)]
pub struct MatrixPreparation {
    unitary: UnitaryOperator,
    adjoint: UnitaryOperator,
}

impl MatrixPreparation {
    pub fn new(unitary: UnitaryOperator) -> Self {
        let adjoint = unitary.adjoint();
        Self { unitary, adjoint }
    }
}

impl PreparationOperator for MatrixPreparation {
    fn dim(&self) -> usize {
        self.unitary.dim()
    }

    fn apply(&self, state: &mut [C64]) {
        let input = state.to_vec();
        self.unitary.apply_slice(&input, state);
    }

    fn apply_adjoint(&self, state: &mut [C64]) {
        let input = state.to_vec();
        self.adjoint.apply_slice(&input, state);
    }
}

/// `WH^{⊗n}` on an `n`-qubit register.
#[derive(Debug, Clone, Copy)]
pub struct WalshHadamardPreparation {
    qubits: usize,
}

impl WalshHadamardPreparation {
    pub fn new(qubits: usize) -> Self {
        Self { qubits }
    }
}

impl PreparationOperator for WalshHadamardPreparation {
    fn dim(&self) -> usize {
        1 << self.qubits
    }

    fn apply(&self, state: &mut [C64]) {
        walsh_hadamard_axis(state, 1, self.dim(), 1);
    }

    fn apply_adjoint(&self, state: &mut [C64]) {
        self.apply(state);
    }
}

/// Householder reflection sending `|0⟩` to the uniform superposition over
/// `dim` items; works for any `dim`, not only powers of two.
#[derive(Debug, Clone, Copy)]
pub struct UniformPreparation {
    dim: usize,
}

impl UniformPreparation {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

/// `v ← (I − 2ww†/‖w‖²)v` with `w = |0⟩ − |u⟩`, `u` uniform over `v.len()`.
pub(crate) fn uniform_reflection(v: &mut [C64]) {
    uniform_reflection_axis(v, v.len(), 1);
}

/// [`uniform_reflection`] along the leading axis of a `len × inner` array.
pub(crate) fn uniform_reflection_axis(data: &mut [C64], len: usize, inner: usize) {
    debug_assert_eq!(data.len(), len * inner);
    if len == 1 {
        return;
    }
    let u = 1.0 / (len as f64).sqrt();
    // w_0 = 1 − u, w_i = −u otherwise; ‖w‖² = 2 − 2u, so ⟨w|v⟩ = v_0 − u·Σv.
    let factor = 2.0 / (2.0 - 2.0 * u);
    let mut coeff = data[..inner].to_vec();
    let mut sums = vec![ZERO; inner];
    for row in data.chunks_exact(inner) {
        for (s, z) in sums.iter_mut().zip(row) {
            *s += z;
        }
    }
    for (c, s) in coeff.iter_mut().zip(&sums) {
        *c = (*c - s * u) * factor;
    }
    for (i, row) in data.chunks_exact_mut(inner).enumerate() {
        let w = if i == 0 { 1.0 - u } else { -u };
        for (z, c) in row.iter_mut().zip(&coeff) {
            *z -= c * w;
        }
    }
}

impl PreparationOperator for UniformPreparation {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, state: &mut [C64]) {
        uniform_reflection(state);
    }

    fn apply_adjoint(&self, state: &mut [C64]) {
        uniform_reflection(state);
    }
}

/// The "good" basis indices; the bad part of `A|0⟩` is everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodSubspace {
    mask: Vec<bool>,
}

impl GoodSubspace {
    pub fn from_predicate(dim: usize, f: impl Fn(usize) -> bool) -> Self {
        Self {
            mask: (0..dim).map(f).collect(),
        }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    pub fn empty(dim: usize) -> Self {
        Self::from_predicate(dim, |_| false)
    }

    pub fn all(dim: usize) -> Self {
        Self::from_predicate(dim, |_| true)
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask[index]
    }

    pub fn size(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Mass of `state` on the good indices.
    pub fn probability(&self, state: &StateVector) -> f64 {
        state
            .amplitudes()
            .iter()
            .zip(&self.mask)
            .filter(|(_, &good)| good)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }

    fn flip(&self, state: &mut [C64]) {
        for (z, &good) in state.iter_mut().zip(&self.mask) {
            if good {
                *z = -*z;
            }
        }
    }
}

/// Tally of oracle calls within one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounter {
    oracle_calls: u64,
}

impl QueryCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, calls: u64) {
        self.oracle_calls += calls;
    }

    pub fn calls(&self) -> u64 {
        self.oracle_calls
    }
}

fn check_pair<A: PreparationOperator + ?Sized>(a: &A, g: &GoodSubspace) -> Result<()> {
    if a.dim() != g.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: g.dim(),
        });
    }
    Ok(())
}

/// `state ← Q·state` with `Q = C_A · C_good`, `C_good = I − 2Π_good`,
/// `C_A = A(2|0⟩⟨0| − I)A†`. Charges one query.
pub fn apply_grover_iterate<A: PreparationOperator + ?Sized>(
    a: &A,
    g: &GoodSubspace,
    state: &mut [C64],
    counter: &mut QueryCounter,
) {
    g.flip(state);
    counter.charge(1);
    a.apply_adjoint(state);
    for z in &mut state[1..] {
        *z = -*z;
    }
    a.apply(state);
}

/// Dense matrix of the Grover iterate, built column by column.
pub fn grover_iterate<A: PreparationOperator + ?Sized>(a: &A, g: &GoodSubspace) -> Result<UnitaryOperator> {
    check_pair(a, g)?;
    let d = a.dim();
    let mut m = DMatrix::from_element(d, d, ZERO);
    let mut scratch = QueryCounter::new();
    for col in 0..d {
        let mut v = vec![ZERO; d];
        v[col] = C64::new(1.0, 0.0);
        apply_grover_iterate(a, g, &mut v, &mut scratch);
        for (row, z) in v.into_iter().enumerate() {
            m[(row, col)] = z;
        }
    }
    Ok(UnitaryOperator::from_trusted(m))
}

/// `F_k` with entries `e^{2πi·z·d/k}/√k` (row `d`, column `z`).
pub fn qft(k: usize) -> Result<UnitaryOperator> {
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    let scale = 1.0 / (k as f64).sqrt();
    let m = DMatrix::from_fn(k, k, |d, z| {
        // Reduce the exponent mod k before converting to keep the phase exact.
        let e = ((d as u128 * z as u128) % k as u128) as f64;
        C64::from_polar(scale, 2.0 * std::f64::consts::PI * e / k as f64)
    });
    Ok(UnitaryOperator::from_trusted(m))
}

/// `Q^j·A|0⟩`.
pub fn grover_search_state<A: PreparationOperator + ?Sized>(
    a: &A,
    g: &GoodSubspace,
    iterations: u64,
    counter: &mut QueryCounter,
) -> Result<StateVector> {
    check_pair(a, g)?;
    let mut v = a.prepare().into_amplitudes();
    for _ in 0..iterations {
        apply_grover_iterate(a, g, &mut v, counter);
    }
    Ok(StateVector::from_unitary_output(v))
}
