//! Learning an acceptor for a relation from a finite pool of encodings.
//!
//! The pool is every encoding whose searched symbols carry exactly
//! `designs_per_symbol` design tuples of exactly `tuples_per_design` single
//! gates each, with the remaining symbols left empty. Identity-valued gates
//! (zero angles, `cnot=(i,i)`) make shorter designs reachable, so fixing the
//! sizes loses no unitaries. The pool size is
//!
//! ```text
//! s = |sacc choices| · Π_{searched σ} ((m · G)^T · m²)^L,   G = D^{free angles}
//! ```
//!
//! with `T` tuples per design and `L` designs per symbol.

mod algorithms;
mod joint;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gates::{serialize, DesignTuple, GateParams, MachineEncoding, Symbol, SymbolDesign};

pub use algorithms::{
    brute_force_optimum, brute_force_report, first_algorithm, second_algorithm, verify_condition_star, CountingMode,
    LearnConfig, LearnReport,
};
pub use joint::{agreement_table, build_joint_state, finalize_a, AgreementTable, JointLearningState, LearnerPreparation};

pub const DEFAULT_POOL_CAP: usize = 4096;

/// One of the four Euler-style angles of a single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Angle {
    Psi,
    Alpha,
    Theta,
    Beta,
}

impl Angle {
    pub const ALL: [Angle; 4] = [Angle::Psi, Angle::Alpha, Angle::Theta, Angle::Beta];

    pub fn name(self) -> &'static str {
        match self {
            Angle::Psi => "psi",
            Angle::Alpha => "alpha",
            Angle::Theta => "theta",
            Angle::Beta => "beta",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Angle::ALL.into_iter().find(|a| a.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolConfig {
    pub m: usize,
    pub grid: u32,
    pub tuples_per_design: usize,
    pub designs_per_symbol: usize,
    pub s_acc_choices: Vec<BTreeSet<usize>>,
    /// Symbols whose designs are enumerated; the rest act as the identity.
    pub symbols: Vec<Symbol>,
    /// Angles that range over the grid; the rest are fixed at zero.
    pub free_angles: Vec<Angle>,
    pub cap: usize,
}

impl PoolConfig {
    /// All four symbols and all four angles searched, default cap.
    pub fn new(
        m: usize,
        grid: u32,
        tuples_per_design: usize,
        designs_per_symbol: usize,
        s_acc_choices: Vec<BTreeSet<usize>>,
    ) -> Self {
        Self {
            m,
            grid,
            tuples_per_design,
            designs_per_symbol,
            s_acc_choices,
            symbols: Symbol::ALL.to_vec(),
            free_angles: Angle::ALL.to_vec(),
            cap: DEFAULT_POOL_CAP,
        }
    }

    pub fn with_symbols(mut self, symbols: Vec<Symbol>) -> Self {
        self.symbols = symbols;
        self
    }

    pub fn with_free_angles(mut self, angles: Vec<Angle>) -> Self {
        self.free_angles = angles;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    fn searched(&self) -> BTreeSet<Symbol> {
        self.symbols.iter().copied().collect()
    }

    fn free(&self) -> BTreeSet<Angle> {
        self.free_angles.iter().copied().collect()
    }

    /// Number of distinct design tuples for one slot.
    pub fn design_space_size(&self) -> u128 {
        let gate_choices = (self.grid as u128).checked_pow(self.free().len() as u32);
        let slot = gate_choices.and_then(|g| g.checked_mul(self.m as u128));
        slot.and_then(|s| s.checked_pow(self.tuples_per_design as u32))
            .and_then(|t| t.checked_mul((self.m * self.m) as u128))
            .unwrap_or(u128::MAX)
    }

    /// Pool size from the closed-form count, saturating at `u128::MAX`.
    pub fn pool_size(&self) -> u128 {
        let per_symbol = self
            .design_space_size()
            .checked_pow(self.designs_per_symbol as u32)
            .unwrap_or(u128::MAX);
        let mut total = self.s_acc_choices.len() as u128;
        for _ in self.searched() {
            total = total.checked_mul(per_symbol).unwrap_or(u128::MAX);
        }
        total
    }
}

/// An ordered, duplicate-free list of encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachinePool {
    encodings: Vec<MachineEncoding>,
}

impl MachinePool {
    /// Sorts by canonical text and drops duplicates.
    pub fn from_encodings(encodings: Vec<MachineEncoding>) -> Result<Self> {
        let mut keyed: Vec<(String, MachineEncoding)> = encodings.into_iter().map(|e| (serialize(&e), e)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        if keyed.is_empty() {
            return Err(Error::EmptyPool);
        }
        Ok(Self {
            encodings: keyed.into_iter().map(|(_, e)| e).collect(),
        })
    }

    pub fn encodings(&self) -> &[MachineEncoding] {
        &self.encodings
    }

    pub fn get(&self, index: usize) -> &MachineEncoding {
        &self.encodings[index]
    }

    pub fn s(&self) -> usize {
        self.encodings.len()
    }
}

/// Mixed-radix counter over `radices`; one empty tuple when `radices` is empty.
fn for_each_index(radices: &[usize], mut f: impl FnMut(&[usize])) {
    if radices.contains(&0) {
        return;
    }
    let mut idx = vec![0; radices.len()];
    loop {
        f(&idx);
        let mut pos = radices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < radices[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn design_space(cfg: &PoolConfig) -> Result<Vec<DesignTuple>> {
    let free = cfg.free();
    let g = cfg.grid as usize;
    let mut gate_radices = vec![cfg.m];
    gate_radices.extend(Angle::ALL.iter().map(|a| if free.contains(a) { g } else { 1 }));
    let mut gates = Vec::new();
    let mut err = None;
    for_each_index(&gate_radices, |ix| {
        match GateParams::new(ix[1] as u32, ix[2] as u32, ix[3] as u32, ix[4] as u32, cfg.grid) {
            Ok(p) => gates.push((ix[0] + 1, p)),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }

    let mut radices = vec![gates.len(); cfg.tuples_per_design];
    radices.extend([cfg.m, cfg.m]);
    let t = cfg.tuples_per_design;
    let mut designs = Vec::new();
    let mut err = None;
    for_each_index(&radices, |ix| {
        let singles = ix[..t].iter().map(|&k| gates[k]).collect();
        match DesignTuple::new(cfg.grid, singles, (ix[t] + 1, ix[t + 1] + 1)) {
            Ok(d) => designs.push(d),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(designs),
    }
}

/// Enumerates the pool described by `cfg` in canonical-text order.
pub fn enumerate_pool(cfg: &PoolConfig) -> Result<MachinePool> {
    let size = cfg.pool_size();
    if size > cfg.cap as u128 {
        return Err(Error::PoolTooLarge { size, cap: cfg.cap });
    }
    if size == 0 {
        return Err(Error::EmptyPool);
    }
    let space = design_space(cfg)?;
    let mut symbol_options = Vec::with_capacity(space.len());
    for_each_index(&vec![space.len(); cfg.designs_per_symbol], |ix| {
        symbol_options.push(SymbolDesign::new(ix.iter().map(|&k| space[k].clone()).collect()));
    });

    let searched = cfg.searched();
    let radices: Vec<usize> = Symbol::ALL
        .iter()
        .map(|s| if searched.contains(s) { symbol_options.len() } else { 1 })
        .chain([cfg.s_acc_choices.len()])
        .collect();
    let mut encodings = Vec::with_capacity(size as usize);
    let mut err = None;
    for_each_index(&radices, |ix| {
        let designs: [SymbolDesign; 4] = std::array::from_fn(|k| {
            if searched.contains(&Symbol::ALL[k]) {
                symbol_options[ix[k]].clone()
            } else {
                SymbolDesign::empty()
            }
        });
        match MachineEncoding::new(cfg.m, cfg.s_acc_choices[ix[4]].clone(), designs) {
            Ok(e) => encodings.push(e),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    MachinePool::from_encodings(encodings)
}
