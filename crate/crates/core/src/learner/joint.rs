//! The joint machine ⊗ input ⊗ agreement-bit register and the preparation
//! `A = (I ⊗ WH^{⊗n} ⊗ I) · O_R · (P_s ⊗ WH^{⊗n} ⊗ I)`.
//!
//! Basis index layout is `(machine · 2ⁿ + x) · 2 + bit`. `P_s` sends `|0⟩`
//! to the uniform superposition over machines and `O_R` maps
//! `|m⟩|x⟩|b⟩ ↦ ξ_{m,x}|m⟩|x⟩|b ⊕ r_{m,x}⟩` with `ξ = −1` exactly when the
//! machine agrees with the relation on `x`.

use rayon::prelude::*;

use super::MachinePool;
use crate::error::Result;
use crate::qcore::{walsh_hadamard_axis, StateVector, C64, ZERO};
use crate::qqaf::{agreement_bits, AgreementParams, Machine, RelationTable};
use crate::qsub::{uniform_reflection_axis, GoodSubspace, PreparationOperator, QueryCounter};

/// `r_{m,x}` for every pool machine and input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementTable {
    s: usize,
    n: usize,
    bits: Vec<bool>,
}

impl AgreementTable {
    pub fn from_bits(s: usize, n: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), s << n);
        Self { s, n, bits }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, machine: usize) -> &[bool] {
        let w = 1 << self.n;
        &self.bits[machine * w..(machine + 1) * w]
    }

    pub fn agrees(&self, machine: usize, x: usize) -> bool {
        self.bits[(machine << self.n) + x]
    }

    pub fn count(&self, machine: usize) -> usize {
        self.row(machine).iter().filter(|&&b| b).count()
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..self.s).map(|m| self.count(m)).collect()
    }
}

/// Evaluates every `(machine, input)` agreement; charges `s · 2ⁿ` queries.
pub fn agreement_table(
    pool: &MachinePool,
    r: &RelationTable,
    p: &AgreementParams,
    counter: &mut QueryCounter,
) -> Result<AgreementTable> {
    let rows: Vec<Vec<bool>> = pool
        .encodings()
        .par_iter()
        .map(|e| Machine::new(e.clone()).map(|m| agreement_bits(&m, r, p)))
        .collect::<Result<_>>()?;
    counter.charge((pool.s() as u64) << r.n());
    Ok(AgreementTable::from_bits(pool.s(), r.n(), rows.concat()))
}

/// The learning preparation applied in place on the joint register.
#[derive(Debug, Clone)]
pub struct LearnerPreparation {
    table: AgreementTable,
}

impl LearnerPreparation {
    pub fn new(table: AgreementTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &AgreementTable {
        &self.table
    }

    fn inputs(&self) -> usize {
        1 << self.table.n
    }

    /// `|m⟩|0ⁿ⟩|1⟩` for every machine.
    pub fn good_subspace(&self) -> GoodSubspace {
        let block = 2 * self.inputs();
        GoodSubspace::from_predicate(self.dim(), |i| i % block == 1)
    }

    pub fn machine_of(&self, index: usize) -> usize {
        index / (2 * self.inputs())
    }

    fn machine_reflection(&self, state: &mut [C64]) {
        uniform_reflection_axis(state, self.table.s, 2 * self.inputs());
    }

    fn input_transform(&self, state: &mut [C64]) {
        walsh_hadamard_axis(state, self.table.s, self.inputs(), 2);
    }

    fn relation_oracle(&self, state: &mut [C64]) {
        for (cell, &agree) in state.chunks_exact_mut(2).zip(&self.table.bits) {
            if agree {
                let (b0, b1) = (cell[0], cell[1]);
                cell[0] = -b1;
                cell[1] = -b0;
            }
        }
    }
}

impl PreparationOperator for LearnerPreparation {
    fn dim(&self) -> usize {
        self.table.s * self.inputs() * 2
    }

    fn apply(&self, state: &mut [C64]) {
        self.machine_reflection(state);
        self.input_transform(state);
        self.relation_oracle(state);
        self.input_transform(state);
    }

    fn apply_adjoint(&self, state: &mut [C64]) {
        self.input_transform(state);
        self.relation_oracle(state);
        self.input_transform(state);
        self.machine_reflection(state);
    }
}

/// The joint register after the relation query, before the final input
/// transform: `s^{-1/2} Σ_m |m⟩ ⊗ 2^{-n/2} Σ_x ξ_{m,x}|x⟩|r_{m,x}⟩`.
#[derive(Debug, Clone)]
pub struct JointLearningState {
    state: StateVector,
    s: usize,
    n: usize,
}

impl JointLearningState {
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }
}

pub fn build_joint_state(table: &AgreementTable) -> JointLearningState {
    let prep = LearnerPreparation::new(table.clone());
    let mut v = vec![ZERO; prep.dim()];
    v[0] = C64::new(1.0, 0.0);
    prep.machine_reflection(&mut v);
    prep.input_transform(&mut v);
    prep.relation_oracle(&mut v);
    JointLearningState {
        state: StateVector::from_unitary_output(v),
        s: table.s,
        n: table.n,
    }
}

/// Applies `WH^{⊗n}` to the input register and reads off the amplitude of
/// `|m⟩|0ⁿ⟩|1⟩` for every machine.
pub fn finalize_a(j: &JointLearningState) -> (StateVector, Vec<C64>) {
    let mut v = j.state.amplitudes().to_vec();
    let inputs = 1 << j.n;
    walsh_hadamard_axis(&mut v, j.s, inputs, 2);
    let good = (0..j.s).map(|m| v[m * inputs * 2 + 1]).collect();
    (StateVector::from_unitary_output(v), good)
}
