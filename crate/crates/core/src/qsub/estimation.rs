use std::f64::consts::PI;

use rand::Rng;
use rustfft::FftPlanner;

use super::{apply_grover_iterate, check_pair, GoodSubspace, PreparationOperator, QueryCounter};
use crate::error::{Error, Result};
use crate::qcore::{sample_distribution, StateVector, C64, ZERO};

const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationResult {
    pub z: usize,
    pub theta_tilde: f64,
    pub zeta_tilde: f64,
    pub k: usize,
}

impl EstimationResult {
    pub fn from_outcome(z: usize, k: usize) -> Self {
        let theta_tilde = PI * z as f64 / k as f64;
        Self {
            z,
            theta_tilde,
            zeta_tilde: theta_tilde.sin().powi(2),
            k,
        }
    }
}

/// Exact distribution of the control-register outcome `z ∈ [0, k)`.
///
/// After the controlled powers and the inverse transform the control register
/// reads `z` with probability `k⁻² Σ_{j,j'} e^{−2πi(j−j')z/k} ⟨Qʲ'Ψ|QʲΨ⟩`.
/// Unitarity of `Q` makes the inner product depend on `j − j'` only, so the
/// law follows from the autocorrelation `c(Δ) = ⟨Ψ|Q^Δ Ψ⟩`, `Δ < k`, with one
/// length-`k` FFT:
///
/// ```text
/// p(z) = (2·Re W(z) − k)/k²,   W(z) = Σ_Δ (k − Δ)·c(Δ)·e^{−2πiΔz/k}
/// ```
///
/// Charges `k − 1` queries.
pub fn estimation_distribution<A: PreparationOperator + ?Sized>(
    a: &A,
    g: &GoodSubspace,
    k: usize,
    counter: &mut QueryCounter,
) -> Result<Vec<f64>> {
    check_pair(a, g)?;
    if !k.is_power_of_two() {
        return Err(Error::BadResolution(k));
    }
    let psi = a.prepare().into_amplitudes();
    let mut v = psi.clone();
    let mut weighted = vec![ZERO; k];
    for (delta, w) in weighted.iter_mut().enumerate() {
        if delta > 0 {
            apply_grover_iterate(a, g, &mut v, counter);
        }
        let c: C64 = psi.iter().zip(&v).map(|(p, q)| p.conj() * q).sum();
        *w = c * (k - delta) as f64;
    }
    FftPlanner::<f64>::new().plan_fft_forward(k).process(&mut weighted);
    let kf = k as f64;
    Ok(weighted
        .iter()
        .map(|w| ((2.0 * w.re - kf) / (kf * kf)).max(0.0))
        .collect())
}

/// Simulates amplitude estimation and measures the control register.
pub fn amplitude_estimation<A: PreparationOperator + ?Sized, R: Rng + ?Sized>(
    a: &A,
    g: &GoodSubspace,
    k: usize,
    rng: &mut R,
    counter: &mut QueryCounter,
) -> Result<EstimationResult> {
    let probs = estimation_distribution(a, g, k, counter)?;
    let z = sample_distribution(&probs, rng);
    Ok(EstimationResult::from_outcome(z, k))
}

/// `⌊π/(4θ̃)⌋`.
pub fn amplification_rounds(theta_tilde: f64) -> Result<u64> {
    if !(theta_tilde > ANGLE_TOL) {
        return Err(Error::ZeroAngle(theta_tilde));
    }
    if theta_tilde > PI / 2.0 + ANGLE_TOL {
        return Err(Error::InvalidParameter(format!(
            "amplification angle {theta_tilde} exceeds pi/2"
        )));
    }
    Ok((PI / (4.0 * theta_tilde)).floor() as u64)
}

/// `Q^l·A|0⟩` with `l = ⌊π/(4θ̃)⌋`.
pub fn amplitude_amplify<A: PreparationOperator + ?Sized>(
    a: &A,
    g: &GoodSubspace,
    theta_tilde: f64,
    counter: &mut QueryCounter,
) -> Result<StateVector> {
    check_pair(a, g)?;
    let l = amplification_rounds(theta_tilde)?;
    let mut v: Vec<C64> = a.prepare().into_amplitudes();
    for _ in 0..l {
        apply_grover_iterate(a, g, &mut v, counter);
    }
    Ok(StateVector::from_unitary_output(v))
}
