//! Adiabatic evolutionary quantum systems driven by a [`Machine`].
//!
//! `H_ini = WH^{⊗m} Λ₀ WH^{⊗m}` and `H_fin = E_{⊳x⊲}`. The ground state of
//! `H_fin` is `U_{⊳x⊲}|q0⟩` with energy 0 and the spectrum of both
//! Hamiltonians is `{0, 1, …, 1}`, so the gap is always 1.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qcore::{
    hermitian_eigensystem, spectral_gap, subspace_probability, walsh_hadamard_power, HermitianOperator,
    StateVector, C64, ZERO,
};
use crate::qqaf::{e_operator, AgreementParams, Machine, RelationTable, Word};

/// Gaps at or below this are treated as degenerate.
pub const DEFAULT_GAP_TOL: f64 = 1e-9;

/// Default number of uniform time samples for the gap scan.
pub const DEFAULT_GAP_GRID: usize = 101;

#[derive(Debug, Clone)]
pub struct AeqsInstance {
    machine: Machine,
    eta: AgreementParams,
    epsilon: f64,
}

impl AeqsInstance {
    pub fn new(machine: Machine, eta: AgreementParams, epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::BadEpsilon(epsilon));
        }
        Ok(Self {
            machine,
            eta,
            epsilon,
        })
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn eta(&self) -> AgreementParams {
        self.eta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// System size `m(x)`; constant over inputs.
    pub fn system_size(&self) -> usize {
        self.machine.m()
    }
}

pub fn h_ini(inst: &AeqsInstance) -> HermitianOperator {
    inst.machine
        .lambda0()
        .conjugated_by(&walsh_hadamard_power(inst.machine.m()))
        .expect("dimensions agree")
}

pub fn h_fin(inst: &AeqsInstance, x: &Word) -> HermitianOperator {
    e_operator(&inst.machine, x)
}

/// Least-energy eigenvector, refusing degenerate ground spaces.
pub fn ground_state(h: &HermitianOperator, gap_tol: f64) -> Result<StateVector> {
    let eig = hermitian_eigensystem(h);
    let gap = if h.dim() < 2 {
        0.0
    } else {
        eig.eigenvalues[1] - eig.eigenvalues[0]
    };
    if gap <= gap_tol {
        return Err(Error::DegenerateGroundState {
            gap,
            tolerance: gap_tol,
        });
    }
    Ok(eig.eigenvectors.into_iter().next().expect("dim >= 2"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
    Undecided,
}

/// Measures the ground state of `H_fin`: accept if the `S_acc` mass is at
/// least `η`, reject if the `S_rej` mass is. Both cannot hold for `η > 1/2`.
pub fn accepts(inst: &AeqsInstance, x: &Word) -> Result<Verdict> {
    let phi = ground_state(&h_fin(inst, x), DEFAULT_GAP_TOL)?;
    let enc = inst.machine.encoding();
    let p_acc = subspace_probability(&phi, enc.s_acc())?;
    let p_rej = subspace_probability(&phi, &enc.s_rej())?;
    let eta = inst.eta;
    Ok(match (eta.meets(p_acc), eta.meets(p_rej)) {
        (true, false) => Verdict::Accept,
        (false, true) => Verdict::Reject,
        (false, false) => Verdict::Undecided,
        (true, true) => unreachable!("eta > 1/2 makes acceptance and rejection exclusive"),
    })
}

/// Every `x` of length `r.n()` gets the verdict its membership demands.
pub fn solves(inst: &AeqsInstance, r: &RelationTable) -> Result<bool> {
    for i in 0..r.domain_size() {
        let x = Word::from_index(i, r.n());
        let want = if r.contains_index(i) {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        if accepts(inst, &x)? != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decomposition of a state against a basis subset: `φ = ψ₁ + ψ₂` with `ψ₁`
/// supported on the subset.
#[derive(Debug, Clone)]
pub struct ProjectionSplit {
    /// `ψ₁`, unnormalized.
    pub inside: Vec<C64>,
    /// `‖ψ₁‖`.
    pub inside_norm: f64,
    /// `ψ̃₁ = ψ₁/‖ψ₁‖`, the closest unit vector of the subspace; `None` when `ψ₁ = 0`.
    pub closest: Option<StateVector>,
}

pub fn project_onto(phi: &StateVector, subset: &BTreeSet<usize>) -> Result<ProjectionSplit> {
    let dim = phi.dim();
    let mut inside = vec![ZERO; dim];
    for &u in subset {
        if u >= dim {
            return Err(Error::IndexOutOfRange { index: u, dim });
        }
        inside[u] = phi.amplitudes()[u];
    }
    let inside_norm = inside.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let closest = if inside_norm > 0.0 {
        Some(StateVector::normalized(inside.clone())?)
    } else {
        None
    };
    Ok(ProjectionSplit {
        inside,
        inside_norm,
        closest,
    })
}

/// `min_ξ ‖φ − ξ‖` over unit `ξ` in the span of `subset`; equals `√(2 − 2‖ψ₁‖)`.
pub fn distance_to_subspace(phi: &StateVector, subset: &BTreeSet<usize>) -> Result<f64> {
    let split = project_onto(phi, subset)?;
    match split.closest {
        Some(xi) => phi.distance(&xi),
        // Every unit ξ in the subspace is orthogonal to φ.
        None if !subset.is_empty() => Ok(std::f64::consts::SQRT_2),
        None => Ok(f64::INFINITY),
    }
}

/// The geometric acceptance criterion: `φ` is `√(2(1−η))`-close to a unit state in the subspace.
pub fn closeness_criterion(phi: &StateVector, subset: &BTreeSet<usize>, eta: &AgreementParams) -> Result<bool> {
    let radius = (2.0 * (1.0 - eta.eta())).sqrt();
    Ok(distance_to_subspace(phi, subset)? <= radius + 1e-12)
}

/// The measurement acceptance criterion: subspace mass at least `η`.
pub fn probability_criterion(phi: &StateVector, subset: &BTreeSet<usize>, eta: &AgreementParams) -> Result<bool> {
    Ok(eta.meets(subspace_probability(phi, subset)?))
}

/// `(1 − t/T)·H_ini + (t/T)·H_fin`.
pub fn interpolate(h_ini: &HermitianOperator, h_fin: &HermitianOperator, t: f64, total: f64) -> Result<HermitianOperator> {
    if !(total > 0.0) || !(0.0..=total).contains(&t) {
        return Err(Error::BadTime { t, total });
    }
    h_ini.convex_combination(h_fin, t / total)
}

/// Adiabatic-theorem runtime estimate with the asymptotic constant fixed to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticReport {
    /// `‖H_fin − H_ini‖` in operator 2-norm.
    pub norm_diff: f64,
    /// Minimum of `Δ(H(t))` over the sampled times.
    pub min_gap: f64,
    /// Maximum of `‖H(t)‖` over the sampled times.
    pub max_hamiltonian_norm: f64,
    /// `norm_diff / (ε^δ · min_gap^{2+δ})`.
    pub t_bound: f64,
    pub delta: f64,
    pub epsilon_target: f64,
    pub grid_points: usize,
    /// The constant standing in for `Ω(·)`; always 1.
    pub omega_constant: f64,
}

/// Scans `Δ(H(t))` on `grid` uniform points. Under linear interpolation the
/// scan depends only on `t/T`, so `T` is normalized away.
pub fn adiabatic_time_bound(
    h_ini: &HermitianOperator,
    h_fin: &HermitianOperator,
    eps: f64,
    delta: f64,
    grid: usize,
) -> Result<AdiabaticReport> {
    if !(eps > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} and delta = {delta} must be positive"
        )));
    }
    if grid < 2 {
        return Err(Error::InvalidParameter(format!("grid = {grid} must be >= 2")));
    }
    let diff = h_fin.difference(h_ini)?;
    let norm_diff = diff.operator_norm();
    let samples: Vec<(f64, f64)> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 / (grid - 1) as f64;
            let h = h_ini.convex_combination(h_fin, s).expect("dimensions checked");
            (spectral_gap(&h), h.operator_norm())
        })
        .collect();
    let min_gap = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let max_hamiltonian_norm = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    if min_gap < 1e-12 {
        return Err(Error::ZeroGap(min_gap));
    }
    let t_bound = norm_diff / (eps.powf(delta) * min_gap.powf(2.0 + delta));
    Ok(AdiabaticReport {
        norm_diff,
        min_gap,
        max_hamiltonian_norm,
        t_bound,
        delta,
        epsilon_target: eps,
        grid_points: grid,
        omega_constant: 1.0,
    })
}
