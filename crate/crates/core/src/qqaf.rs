//! Measure-once one-way quasi-automata with Kraus number one.
//!
//! A machine reads `⊳ x₁ … x_n ⊲` starting from `|q0⟩ = |0⟩`, applying one
//! unitary per symbol. Its acceptor version measures the final state in the
//! computational basis and accepts on `S_acc`; `S_rej` is the complement.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gates::{symbol_unitary, MachineEncoding, Symbol};
use crate::qcore::{subspace_probability, HermitianOperator, StateVector, UnitaryOperator, C64, ZERO};

/// Largest supported input length.
pub const MAX_INPUT_LEN: usize = 20;

/// Slack below `η` still counted as "at least `η`", absorbing rounding in
/// probabilities that are exactly `η` in exact arithmetic.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// An input word over `{0, 1}`; `x₁` is the first symbol read and the most
/// significant bit of [`Word::index`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    bits: Vec<bool>,
}

impl Word {
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                symbol => Err(Error::BadSymbol { symbol, position }),
            })
            .collect::<Result<_>>()?;
        Ok(Self { bits })
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Self {
            bits: (0..n).map(|k| (index >> (n - 1 - k)) & 1 == 1).collect(),
        }
    }

    pub fn empty() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// The endmarked symbol sequence `⊳ x ⊲` in reading order.
    pub fn tape(&self) -> impl Iterator<Item = Symbol> + '_ {
        std::iter::once(Symbol::Left)
            .chain(
                self.bits
                    .iter()
                    .map(|&b| if b { Symbol::One } else { Symbol::Zero }),
            )
            .chain(std::iter::once(Symbol::Right))
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A machine with its symbol unitaries materialized.
#[derive(Debug, Clone)]
pub struct Machine {
    encoding: MachineEncoding,
    unitaries: [UnitaryOperator; 4],
    lambda0: HermitianOperator,
}

impl Machine {
    pub fn new(encoding: MachineEncoding) -> Result<Self> {
        let m = encoding.m();
        let unitaries = [
            symbol_unitary(encoding.design(Symbol::Left), m)?,
            symbol_unitary(encoding.design(Symbol::Zero), m)?,
            symbol_unitary(encoding.design(Symbol::One), m)?,
            symbol_unitary(encoding.design(Symbol::Right), m)?,
        ];
        let lambda0 = lambda0(encoding.num_states(), encoding.q0())?;
        Ok(Self {
            encoding,
            unitaries,
            lambda0,
        })
    }

    pub fn encoding(&self) -> &MachineEncoding {
        &self.encoding
    }

    pub fn m(&self) -> usize {
        self.encoding.m()
    }

    pub fn dim(&self) -> usize {
        self.encoding.num_states()
    }

    pub fn unitary(&self, symbol: Symbol) -> &UnitaryOperator {
        &self.unitaries[symbol.index()]
    }

    /// `Λ₀ = I − |q0⟩⟨q0|`.
    pub fn lambda0(&self) -> &HermitianOperator {
        &self.lambda0
    }

    /// `U_{⊳x⊲} = U_⊲ · U_{x_n} ··· U_{x_1} · U_⊳`.
    pub fn word_unitary(&self, x: &Word) -> UnitaryOperator {
        x.tape().fold(UnitaryOperator::identity(self.dim()), |acc, s| {
            self.unitary(s)
                .compose(&acc)
                .expect("symbol unitaries share the machine dimension")
        })
    }
}

fn lambda0(dim: usize, q0: usize) -> Result<HermitianOperator> {
    let diag: Vec<f64> = (0..dim).map(|u| if u == q0 { 0.0 } else { 1.0 }).collect();
    HermitianOperator::diagonal(&diag)
}

/// `U_{⊳x⊲}|q0⟩`, applying the symbols in reading order.
pub fn run(mach: &Machine, x: &Word) -> StateVector {
    let d = mach.dim();
    let mut state = vec![ZERO; d];
    state[mach.encoding.q0()] = C64::new(1.0, 0.0);
    let mut next = vec![ZERO; d];
    for symbol in x.tape() {
        mach.unitary(symbol).apply_slice(&state, &mut next);
        std::mem::swap(&mut state, &mut next);
    }
    StateVector::from_unitary_output(state)
}

pub fn acceptance_probability(mach: &Machine, x: &Word) -> f64 {
    subspace_probability(&run(mach, x), mach.encoding.s_acc())
        .expect("accepting set lies inside the state space")
}

/// The supervisor's relation `R_n ⊆ {0,1}ⁿ` as a membership table indexed by [`Word::index`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationTable {
    n: usize,
    members: Vec<bool>,
}

impl RelationTable {
    pub fn new(n: usize, members: Vec<bool>) -> Result<Self> {
        check_len(n)?;
        if members.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "membership table has {} entries, expected 2^{n}",
                members.len()
            )));
        }
        Ok(Self { n, members })
    }

    pub fn from_predicate(n: usize, f: impl Fn(&Word) -> bool) -> Result<Self> {
        check_len(n)?;
        let members = (0..1usize << n).map(|i| f(&Word::from_index(i, n))).collect();
        Ok(Self { n, members })
    }

    pub fn from_members(n: usize, words: &BTreeSet<usize>) -> Result<Self> {
        check_len(n)?;
        let mut members = vec![false; 1 << n];
        for &w in words {
            *members.get_mut(w).ok_or(Error::IndexOutOfRange {
                index: w,
                dim: 1 << n,
            })? = true;
        }
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_predicate(n, |_| false)
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::from_predicate(n, |_| true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain_size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: &Word) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.members[x.index()])
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.members[index]
    }

    pub fn member_count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn members(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.n;
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| Word::from_index(i, n))
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            members: self.members.iter().map(|b| !b).collect(),
        }
    }
}

fn check_len(n: usize) -> Result<()> {
    if n > MAX_INPUT_LEN {
        return Err(Error::InvalidParameter(format!(
            "input length {n} exceeds {MAX_INPUT_LEN}"
        )));
    }
    Ok(())
}

/// The accuracy `η ∈ (1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementParams {
    eta: f64,
}

impl AgreementParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.5 && eta <= 1.0) {
            return Err(Error::BadAccuracy(eta));
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Closed threshold test `probability ≥ η`.
    pub fn meets(&self, probability: f64) -> bool {
        probability >= self.eta - THRESHOLD_TOL
    }
}

/// `M̂(x) =_η R(x)`, evaluated exactly from amplitudes.
pub fn agrees(mach: &Machine, x: &Word, r: &RelationTable, p: &AgreementParams) -> Result<bool> {
    let member = r.contains(x)?;
    Ok(agrees_with(acceptance_probability(mach, x), member, p))
}

fn agrees_with(p_acc: f64, member: bool, p: &AgreementParams) -> bool {
    if member {
        p.meets(p_acc)
    } else {
        p.meets(1.0 - p_acc)
    }
}

/// `r_{m,x}` for every `x ∈ {0,1}ⁿ`, indexed by [`Word::index`].
pub fn agreement_bits(mach: &Machine, r: &RelationTable, p: &AgreementParams) -> Vec<bool> {
    (0..r.domain_size())
        .map(|i| {
            let x = Word::from_index(i, r.n());
            agrees_with(acceptance_probability(mach, &x), r.contains_index(i), p)
        })
        .collect()
}

/// `#_R(M̂, n)` by exhaustive enumeration.
pub fn agreement_count(mach: &Machine, r: &RelationTable, p: &AgreementParams) -> usize {
    agreement_bits(mach, r, p).into_iter().filter(|&b| b).count()
}

/// `E_{⊳x⊲} = U_{⊳x⊲} · Λ₀ · U_{⊳x⊲}†`.
pub fn e_operator(mach: &Machine, x: &Word) -> HermitianOperator {
    mach.lambda0
        .conjugated_by(&mach.word_unitary(x))
        .expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{DesignTuple, GateParams, SymbolDesign};
    use crate::qcore::{hermitian_eigensystem, walsh_hadamard};
    use nalgebra::DMatrix;

    pub(crate) fn wh_design() -> SymbolDesign {
        SymbolDesign::new(vec![DesignTuple::new(
            8,
            vec![(1, GateParams::new(2, 0, 7, 2, 8).unwrap())],
            (1, 1),
        )
        .unwrap()])
    }

    fn rot_design() -> SymbolDesign {
        SymbolDesign::new(vec![DesignTuple::new(
            8,
            vec![(1, GateParams::rotation(2, 8).unwrap())],
            (1, 1),
        )
        .unwrap()])
    }

    fn machine(s_acc: &[usize], left: SymbolDesign, zero: SymbolDesign) -> Machine {
        let enc = MachineEncoding::identity(1, s_acc.iter().copied().collect())
            .unwrap()
            .with_symbol(Symbol::Left, left)
            .unwrap()
            .with_symbol(Symbol::Zero, zero)
            .unwrap();
        Machine::new(enc).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn word_parsing_and_indexing() {
        assert_eq!(w("011").index(), 3);
        assert_eq!(Word::from_index(3, 3), w("011"));
        assert_eq!(w("").len(), 0);
        assert_eq!(
            Word::parse("01a"),
            Err(Error::BadSymbol {
                symbol: 'a',
                position: 2
            })
        );
    }

    #[test]
    fn identity_machine_stays_in_start_state() {
        let m = Machine::new(MachineEncoding::identity(2, [0].into()).unwrap()).unwrap();
        for x in ["", "0", "1101"] {
            assert_eq!(run(&m, &w(x)), StateVector::basis(4, 0).unwrap());
        }
    }

    #[test]
    fn preopened_machine_on_empty_input() {
        let m = machine(&[0], wh_design(), SymbolDesign::empty());
        let expected = walsh_hadamard()
            .apply(&StateVector::basis(2, 0).unwrap())
            .unwrap();
        assert!(run(&m, &Word::empty()).approx_eq(&expected, 1e-12).unwrap());
        assert!((acceptance_probability(&m, &Word::empty()) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_quarter_turns_negate() {
        let m = machine(&[0], SymbolDesign::empty(), rot_design());
        let out = run(&m, &w("00"));
        assert!((out.amplitudes()[0] - C64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(out.amplitudes()[1].norm() < 1e-12);
    }

    #[test]
    fn acceptance_with_trivial_sets() {
        let all = machine(&[0, 1], wh_design(), rot_design());
        let none = machine(&[], wh_design(), rot_design());
        for x in ["", "0", "01"] {
            assert!((acceptance_probability(&all, &w(x)) - 1.0).abs() < 1e-12);
            assert!(acceptance_probability(&none, &w(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn agreement_predicate() {
        let p = AgreementParams::new(0.9).unwrap();
        let id = Machine::new(MachineEncoding::identity(1, [0].into()).unwrap()).unwrap();
        let all = RelationTable::full(2).unwrap();
        assert!(agrees(&id, &w("01"), &all, &p).unwrap());
        assert_eq!(
            agrees(&id, &w("0"), &all, &p),
            Err(Error::LengthMismatch {
                expected: 2,
                got: 1
            })
        );

        // Probability exactly η = 1 is accepted.
        let strict = AgreementParams::new(1.0).unwrap();
        assert!(agrees(&id, &w("01"), &all, &strict).unwrap());

        // Probability 1/2 meets neither side for any η > 1/2.
        let half = machine(&[0], wh_design(), SymbolDesign::empty());
        let none = RelationTable::empty(1).unwrap();
        let full = RelationTable::full(1).unwrap();
        let tight = AgreementParams::new(0.5000001).unwrap();
        assert!(!agrees(&half, &w("0"), &full, &tight).unwrap());
        assert!(!agrees(&half, &w("0"), &none, &tight).unwrap());
    }

    #[test]
    fn accuracy_bounds() {
        assert!(AgreementParams::new(0.5).is_err());
        assert!(AgreementParams::new(1.01).is_err());
        assert!(AgreementParams::new(f64::NAN).is_err());
        assert!(AgreementParams::new(1.0).is_ok());
    }

    #[test]
    fn agreement_counts_for_identity_machine() {
        let p = AgreementParams::new(0.9).unwrap();
        let id = Machine::new(MachineEncoding::identity(1, [0].into()).unwrap()).unwrap();
        for n in 0..=3 {
            assert_eq!(agreement_count(&id, &RelationTable::full(n).unwrap(), &p), 1 << n);
            assert_eq!(agreement_count(&id, &RelationTable::empty(n).unwrap(), &p), 0);
        }
        // n = 0: the single empty word.
        assert_eq!(RelationTable::full(0).unwrap().domain_size(), 1);
    }

    #[test]
    fn e_operator_cases() {
        let id = Machine::new(MachineEncoding::identity(2, [0].into()).unwrap()).unwrap();
        assert_eq!(&e_operator(&id, &w("10")), id.lambda0());

        let m = machine(&[0], wh_design(), SymbolDesign::empty());
        let e = e_operator(&m, &Word::empty());
        let half = C64::new(0.5, 0.0);
        let expected = DMatrix::from_row_slice(2, 2, &[half, -half, -half, half]);
        assert!((e.matrix() - expected).iter().all(|z| z.norm() < 1e-12));

        let spectrum = hermitian_eigensystem(&e_operator(&m, &w("0"))).eigenvalues;
        assert!(spectrum[0].abs() < 1e-12 && (spectrum[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relation_table_shape() {
        assert!(RelationTable::new(2, vec![true; 3]).is_err());
        let r = RelationTable::from_members(2, &[1, 2].into()).unwrap();
        assert_eq!(r.member_count(), 2);
        assert_eq!(r.complement().member_count(), 2);
        assert!(r.contains(&w("01")).unwrap());
        assert_eq!(r.members().map(|x| x.to_string()).collect::<Vec<_>>(), ["01", "10"]);
    }
}
