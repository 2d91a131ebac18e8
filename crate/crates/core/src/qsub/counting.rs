use rand::Rng;

use super::{amplitude_estimation, EstimationResult, GoodSubspace, QueryCounter, WalshHadamardPreparation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountEstimate {
    /// `ζ̃·2ⁿ`.
    pub estimate: f64,
    pub result: EstimationResult,
}

/// Estimates `|marked|` for a marked set over `{0,1}ⁿ` by amplitude
/// estimation with `A = WH^{⊗n}`.
pub fn quantum_count<R: Rng + ?Sized>(
    marked: &GoodSubspace,
    k: usize,
    rng: &mut R,
    counter: &mut QueryCounter,
) -> Result<CountEstimate> {
    let dim = marked.dim();
    if !dim.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "counting domain of size {dim} is not a power of two"
        )));
    }
    let a = WalshHadamardPreparation::new(dim.trailing_zeros() as usize);
    let result = amplitude_estimation(&a, marked, k, rng, counter)?;
    Ok(CountEstimate {
        estimate: result.zeta_tilde * dim as f64,
        result,
    })
}
