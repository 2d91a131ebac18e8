use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::joint::{agreement_table, AgreementTable, LearnerPreparation};
use super::MachinePool;
use crate::error::Result;
use crate::gates::MachineEncoding;
use crate::qcore::sample_basis;
use crate::qqaf::{AgreementParams, RelationTable};
use crate::qsub::{
    amplitude_amplify, amplitude_estimation, find_maximum, quantum_count, GoodSubspace, MaxFindConfig,
    PreparationOperator, QueryCounter, DEFAULT_RESOLUTION,
};

/// How per-machine agreement counts are obtained in [`second_algorithm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountingMode {
    #[default]
    Quantum,
    /// Exact classical counts in place of quantum counting.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    pub k: usize,
    pub reps: usize,
    pub counting: CountingMode,
    pub maxfind: MaxFindConfig,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_RESOLUTION,
            reps: 5,
            counting: CountingMode::Quantum,
            maxfind: MaxFindConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnReport {
    pub chosen: MachineEncoding,
    pub chosen_index: usize,
    pub estimated_agreement: f64,
    pub true_agreement: usize,
    pub optimum: usize,
    pub oracle_queries: u64,
    pub repetitions: usize,
    pub seed: u64,
    pub success: bool,
}

/// Independent stream for one `(repetition, machine)` pair; stream 0 is
/// reserved for the driver.
fn derived_rng(seed: u64, rep: usize, machine: Option<usize>) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lane = machine.map_or(0, |m| m as u64 + 1);
    rng.set_stream(((rep as u64) << 32) | lane);
    rng
}

fn best_index(counts: &[usize]) -> (usize, usize) {
    let mut best = (0, counts[0]);
    for (i, &c) in counts.iter().enumerate().skip(1) {
        if c > best.1 {
            best = (i, c);
        }
    }
    best
}

/// Exact scan; the first machine in pool order wins ties.
pub fn brute_force_optimum(
    pool: &MachinePool,
    r: &RelationTable,
    p: &AgreementParams,
    counter: &mut QueryCounter,
) -> Result<(usize, usize)> {
    let table = agreement_table(pool, r, p, counter)?;
    Ok(best_index(&table.counts()))
}

pub fn brute_force_report(pool: &MachinePool, r: &RelationTable, p: &AgreementParams, seed: u64) -> Result<LearnReport> {
    let mut counter = QueryCounter::new();
    let (index, count) = brute_force_optimum(pool, r, p, &mut counter)?;
    Ok(LearnReport {
        chosen: pool.get(index).clone(),
        chosen_index: index,
        estimated_agreement: count as f64,
        true_agreement: count,
        optimum: count,
        oracle_queries: counter.calls(),
        repetitions: 1,
        seed,
        success: true,
    })
}

/// Whether some pool machine agrees with `r` on every input.
pub fn verify_condition_star(pool: &MachinePool, r: &RelationTable, p: &AgreementParams) -> Result<bool> {
    let (_, count) = brute_force_optimum(pool, r, p, &mut QueryCounter::new())?;
    Ok(count == r.domain_size())
}

/// Searches for a machine that agrees with `r` everywhere.
///
/// Each repetition estimates the good-amplitude angle of the joint
/// preparation, amplifies, measures the machine register and verifies the
/// candidate classically. Stops at the first perfect machine; otherwise
/// reports the best candidate seen with `success = false`.
///
/// `estimated_agreement` is `2ⁿ·√(s·ζ̃)`, the root-mean-square pool
/// agreement implied by the amplitude estimate, capped at `2ⁿ`.
pub fn first_algorithm(
    pool: &MachinePool,
    r: &RelationTable,
    p: &AgreementParams,
    cfg: &LearnConfig,
    seed: u64,
) -> Result<LearnReport> {
    let mut counter = QueryCounter::new();
    let table = agreement_table(pool, r, p, &mut counter)?;
    let optimum = best_index(&table.counts()).1;
    let full = r.domain_size();
    let prep = LearnerPreparation::new(table);
    let good = prep.good_subspace();
    let mut rng = derived_rng(seed, 0, None);

    let mut best: Option<(usize, usize, f64)> = None;
    let mut used = 0;
    for _ in 0..cfg.reps.max(1) {
        used += 1;
        let est = amplitude_estimation(&prep, &good, cfg.k, &mut rng, &mut counter)?;
        let angle = est.theta_tilde.min(PI - est.theta_tilde);
        let state = match amplitude_amplify(&prep, &good, angle, &mut counter) {
            Ok(s) => s,
            Err(crate::Error::ZeroAngle(_)) => prep.prepare(),
            Err(e) => return Err(e),
        };
        let machine = prep.machine_of(sample_basis(&state, &mut rng));
        let count = prep.table().count(machine);
        let implied = (full as f64 * (pool.s() as f64 * est.zeta_tilde).sqrt()).min(full as f64);
        if best.is_none_or(|(_, c, _)| count > c) {
            best = Some((machine, count, implied));
        }
        if count == full {
            break;
        }
    }
    let (index, count, implied) = best.expect("at least one repetition");
    Ok(LearnReport {
        chosen: pool.get(index).clone(),
        chosen_index: index,
        estimated_agreement: implied,
        true_agreement: count,
        optimum,
        oracle_queries: counter.calls(),
        repetitions: used,
        seed,
        success: count == full,
    })
}

fn count_estimates(
    table: &AgreementTable,
    cfg: &LearnConfig,
    seed: u64,
    rep: usize,
    counter: &mut QueryCounter,
) -> Result<Vec<f64>> {
    match cfg.counting {
        CountingMode::Exact => Ok(table.counts().into_iter().map(|c| c as f64).collect()),
        CountingMode::Quantum => {
            let runs: Vec<(f64, u64)> = (0..table.s())
                .into_par_iter()
                .map(|m| {
                    let marked = GoodSubspace::from_mask(table.row(m).to_vec());
                    let mut rng = derived_rng(seed, rep, Some(m));
                    let mut local = QueryCounter::new();
                    quantum_count(&marked, cfg.k, &mut rng, &mut local).map(|c| (c.estimate, local.calls()))
                })
                .collect::<Result<_>>()?;
            counter.charge(runs.iter().map(|&(_, q)| q).sum());
            Ok(runs.into_iter().map(|(e, _)| e).collect())
        }
    }
}

/// Maximizes agreement over the pool.
///
/// Each repetition estimates every machine's agreement count and runs
/// maximum finding over the rounded estimates. Repetition winners are then
/// verified classically: the highest verified count wins, then the most
/// votes, then pool order.
pub fn second_algorithm(
    pool: &MachinePool,
    r: &RelationTable,
    p: &AgreementParams,
    cfg: &LearnConfig,
    seed: u64,
) -> Result<LearnReport> {
    let table = agreement_table(pool, r, p, &mut QueryCounter::new())?;
    let optimum = best_index(&table.counts()).1;
    let mut counter = QueryCounter::new();
    let reps = cfg.reps.max(1);
    // winner -> (votes, estimate from its first win)
    let mut votes: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for rep in 0..reps {
        let estimates = count_estimates(&table, cfg, seed, rep, &mut counter)?;
        let rounded: Vec<i64> = estimates.iter().map(|e| e.round() as i64).collect();
        let mut rng = derived_rng(seed, rep, None);
        let winner = find_maximum(&rounded, cfg.maxfind, &mut rng, &mut counter);
        votes.entry(winner).or_insert((0, estimates[winner])).0 += 1;
    }
    let (&index, &(_, estimate)) = votes
        .iter()
        .max_by(|(ia, (va, _)), (ib, (vb, _))| {
            (table.count(**ia), *va)
                .cmp(&(table.count(**ib), *vb))
                .then(ib.cmp(ia))
        })
        .expect("at least one repetition");
    let count = table.count(index);
    Ok(LearnReport {
        chosen: pool.get(index).clone(),
        chosen_index: index,
        estimated_agreement: estimate,
        true_agreement: count,
        optimum,
        oracle_queries: counter.calls(),
        repetitions: reps,
        seed,
        success: count == optimum,
    })
}
