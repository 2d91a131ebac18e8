//! Gate components and the design encoding of machine transition unitaries.
//!
//! A single-qubit gate is `e^{iψ}·diag(e^{−iβ}, e^{iβ})·R(θ)·diag(e^{−iα}, e^{iα})`
//! with every angle restricted to the grid `2πg/D`. A [`DesignTuple`] is a
//! layer `Û^{(i₁)}···Û^{(i_k)}·CNOT_{i,j}` and a [`SymbolDesign`] is the
//! ordered product of such layers.

mod encoding;

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{Tensor, UnitaryOperator, C64, ZERO};

pub use encoding::{deserialize, serialize};

pub const DEFAULT_GRID: u32 = 8;

/// Largest supported machine register, in qubits.
pub const MAX_QUBITS: usize = 10;

/// Four grid-indexed angles and the grid resolution `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateParams {
    psi: u32,
    alpha: u32,
    theta: u32,
    beta: u32,
    grid: u32,
}

impl GateParams {
    pub fn new(psi: u32, alpha: u32, theta: u32, beta: u32, grid: u32) -> Result<Self> {
        if grid == 0 {
            return Err(Error::InvalidParameter("grid resolution D must be positive".into()));
        }
        for index in [psi, alpha, theta, beta] {
            if index >= grid {
                return Err(Error::GridOutOfRange { index, grid });
            }
        }
        Ok(Self {
            psi,
            alpha,
            theta,
            beta,
            grid,
        })
    }

    /// Pure rotation by `2π·theta/grid`.
    pub fn rotation(theta: u32, grid: u32) -> Result<Self> {
        Self::new(0, 0, theta, 0, grid)
    }

    pub fn identity(grid: u32) -> Result<Self> {
        Self::new(0, 0, 0, 0, grid)
    }

    /// Grid indices in `(ψ, α, θ, β)` order.
    pub fn indices(&self) -> [u32; 4] {
        [self.psi, self.alpha, self.theta, self.beta]
    }

    pub fn grid(&self) -> u32 {
        self.grid
    }

    fn angle(&self, index: u32) -> f64 {
        2.0 * PI * f64::from(index) / f64::from(self.grid)
    }

    /// Angles in radians, `(ψ, α, θ, β)`.
    pub fn angles(&self) -> [f64; 4] {
        self.indices().map(|g| self.angle(g))
    }
}

pub fn single_qubit_unitary(p: &GateParams) -> UnitaryOperator {
    let [psi, alpha, theta, beta] = p.angles();
    let phase = C64::from_polar(1.0, psi);
    let (s, c) = theta.sin_cos();
    let eb = C64::from_polar(1.0, beta);
    let ea = C64::from_polar(1.0, alpha);
    // diag(β) · R(θ) · diag(α), expanded.
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            phase * eb.conj() * c * ea.conj(),
            phase * eb.conj() * (-s) * ea,
            phase * eb * s * ea.conj(),
            phase * eb * c * ea,
        ],
    );
    UnitaryOperator::from_trusted(m)
}

fn check_wire(wire: usize, qubits: usize) -> Result<()> {
    if wire == 0 || wire > qubits {
        return Err(Error::WireOutOfRange { wire, qubits });
    }
    Ok(())
}

/// `I^{⊗(i−1)} ⊗ u ⊗ I^{⊗(n−i)}`.
pub fn lifted_unitary(wire: usize, n: usize, u: &UnitaryOperator) -> Result<UnitaryOperator> {
    check_wire(wire, n)?;
    if u.dim() != 2 {
        return Err(Error::DimMismatch {
            left: u.dim(),
            right: 2,
        });
    }
    let before = UnitaryOperator::identity(1 << (wire - 1));
    let after = UnitaryOperator::identity(1 << (n - wire));
    Ok(before.tensor(u).tensor(&after))
}

/// Controlled-NOT with control wire `i` and target wire `j`; the identity when `i = j`.
pub fn cnot_matrix(i: usize, j: usize, n: usize) -> Result<UnitaryOperator> {
    check_wire(i, n)?;
    check_wire(j, n)?;
    let dim = 1usize << n;
    if i == j {
        return Ok(UnitaryOperator::identity(dim));
    }
    let control = 1usize << (n - i);
    let target = 1usize << (n - j);
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for b in 0..dim {
        let image = if b & control != 0 { b ^ target } else { b };
        m[(image, b)] = C64::new(1.0, 0.0);
    }
    Ok(UnitaryOperator::from_trusted(m))
}

/// One design layer: single-qubit gates in listed order followed (rightmost) by a CNOT.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DesignTuple {
    grid: u32,
    singles: Vec<(usize, GateParams)>,
    cnot: (usize, usize),
}

impl DesignTuple {
    /// All single-qubit parameters must share the design's grid resolution.
    pub fn new(grid: u32, singles: Vec<(usize, GateParams)>, cnot: (usize, usize)) -> Result<Self> {
        if grid == 0 {
            return Err(Error::InvalidParameter("grid resolution D must be positive".into()));
        }
        for (wire, p) in &singles {
            if *wire == 0 {
                return Err(Error::WireOutOfRange {
                    wire: 0,
                    qubits: 0,
                });
            }
            if p.grid() != grid {
                return Err(Error::InvalidParameter(format!(
                    "gate resolution {} differs from design resolution {grid}",
                    p.grid()
                )));
            }
        }
        if cnot.0 == 0 || cnot.1 == 0 {
            return Err(Error::WireOutOfRange {
                wire: 0,
                qubits: 0,
            });
        }
        Ok(Self {
            grid,
            singles,
            cnot,
        })
    }

    /// The layer with no single-qubit gates and `CNOT_{1,1} = I`.
    pub fn trivial(grid: u32) -> Self {
        Self {
            grid,
            singles: Vec::new(),
            cnot: (1, 1),
        }
    }

    pub fn grid(&self) -> u32 {
        self.grid
    }

    pub fn singles(&self) -> &[(usize, GateParams)] {
        &self.singles
    }

    pub fn cnot(&self) -> (usize, usize) {
        self.cnot
    }

    pub fn max_wire(&self) -> usize {
        self.singles
            .iter()
            .map(|(w, _)| *w)
            .chain([self.cnot.0, self.cnot.1])
            .max()
            .unwrap_or(1)
    }

    pub(crate) fn check_qubits(&self, n: usize) -> Result<()> {
        for (wire, _) in &self.singles {
            check_wire(*wire, n)?;
        }
        check_wire(self.cnot.0, n)?;
        check_wire(self.cnot.1, n)
    }
}

pub fn design_unitary(t: &DesignTuple, n: usize) -> Result<UnitaryOperator> {
    t.check_qubits(n)?;
    let mut acc = UnitaryOperator::identity(1 << n);
    for (wire, p) in &t.singles {
        acc = acc.compose(&lifted_unitary(*wire, n, &single_qubit_unitary(p))?)?;
    }
    acc.compose(&cnot_matrix(t.cnot.0, t.cnot.1, n)?)
}

/// The ordered design list `(τ₁,…,τ_m)` of one symbol's unitary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SymbolDesign {
    designs: Vec<DesignTuple>,
}

impl SymbolDesign {
    pub fn new(designs: Vec<DesignTuple>) -> Self {
        Self { designs }
    }

    /// Empty design list, i.e. the identity.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn designs(&self) -> &[DesignTuple] {
        &self.designs
    }
}

/// `V^{(τ₁)}·V^{(τ₂)}···V^{(τ_m)}`, with τ₁ leftmost; empty lists give `I`.
pub fn symbol_unitary(d: &SymbolDesign, n: usize) -> Result<UnitaryOperator> {
    d.designs
        .iter()
        .try_fold(UnitaryOperator::identity(1 << n), |acc, t| {
            acc.compose(&design_unitary(t, n)?)
        })
}

/// Tape symbols: the endmarkers ⊳ and ⊲ (written `L`, `R`) and the input bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Left,
    Zero,
    One,
    Right,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::Left, Symbol::Zero, Symbol::One, Symbol::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Left => 'L',
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Right => 'R',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'L' => Some(Symbol::Left),
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            'R' => Some(Symbol::Right),
            _ => None,
        }
    }
}

/// The serialized machine `⟨M̂_n⟩`: register size, accepting set and
/// per-symbol design lists. The start state is always basis index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineEncoding {
    m: usize,
    s_acc: BTreeSet<usize>,
    symbol_designs: [SymbolDesign; 4],
}

impl MachineEncoding {
    /// `symbol_designs` is indexed by [`Symbol::index`].
    pub fn new(m: usize, s_acc: BTreeSet<usize>, symbol_designs: [SymbolDesign; 4]) -> Result<Self> {
        if m == 0 || m > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!(
                "qubit count m = {m} must lie in [1, {MAX_QUBITS}]"
            )));
        }
        let states = 1usize << m;
        if let Some(&bad) = s_acc.iter().find(|&&u| u >= states) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: states,
            });
        }
        for d in &symbol_designs {
            for t in d.designs() {
                t.check_qubits(m)?;
            }
        }
        Ok(Self {
            m,
            s_acc,
            symbol_designs,
        })
    }

    /// Every symbol acts as the identity.
    pub fn identity(m: usize, s_acc: BTreeSet<usize>) -> Result<Self> {
        Self::new(m, s_acc, Default::default())
    }

    pub fn with_symbol(mut self, symbol: Symbol, design: SymbolDesign) -> Result<Self> {
        for t in design.designs() {
            t.check_qubits(self.m)?;
        }
        self.symbol_designs[symbol.index()] = design;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_states(&self) -> usize {
        1 << self.m
    }

    pub fn q0(&self) -> usize {
        0
    }

    pub fn s_acc(&self) -> &BTreeSet<usize> {
        &self.s_acc
    }

    /// Complement of the accepting set within `[0, 2^m)`.
    pub fn s_rej(&self) -> BTreeSet<usize> {
        (0..self.num_states())
            .filter(|u| !self.s_acc.contains(u))
            .collect()
    }

    pub fn design(&self, symbol: Symbol) -> &SymbolDesign {
        &self.symbol_designs[symbol.index()]
    }

    pub fn symbol_designs(&self) -> &[SymbolDesign; 4] {
        &self.symbol_designs
    }

    pub fn is_admissible(&self, bounds: Admissibility) -> bool {
        self.symbol_designs.iter().all(|d| {
            d.designs().len() <= bounds.max_designs
                && d.designs().iter().all(|t| t.singles().len() <= bounds.max_tuples)
        })
    }
}

/// Gate-count bounds that make the encoding space finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    /// Single-qubit gates per design tuple.
    pub max_tuples: usize,
    /// Design tuples per symbol.
    pub max_designs: usize,
}
