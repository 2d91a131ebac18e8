use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use aeqs_core::gates::{serialize, Symbol};
use aeqs_core::learner::{
    brute_force_optimum, brute_force_report, build_joint_state, enumerate_pool, finalize_a, first_algorithm,
    second_algorithm, Angle, LearnConfig, LearnReport, PoolConfig,
};
use aeqs_core::qqaf::AgreementParams;
use aeqs_core::qsub::QueryCounter;

use crate::error::{CliError, Result};
use crate::relations::parse_relation;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    First,
    Second,
    Brute,
}

/// Everything needed to reproduce one learning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub relation: String,
    pub n: Option<usize>,
    pub eta: f64,
    pub algorithm: Algorithm,
    pub m: usize,
    pub grid: u32,
    pub ltuples: usize,
    pub ldesigns: usize,
    pub sacc: Vec<BTreeSet<usize>>,
    /// Searched symbols as a string over `L01R`.
    pub symbols: String,
    pub angles: Vec<String>,
    pub k: usize,
    pub seed: u64,
    pub reps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            relation: "parity-even".into(),
            n: Some(2),
            eta: 0.9,
            algorithm: Algorithm::Second,
            m: 1,
            grid: 4,
            ltuples: 1,
            ldesigns: 1,
            sacc: vec![[0].into(), [1].into()],
            symbols: "L01R".into(),
            angles: vec!["theta".into()],
            k: 1024,
            seed: 0,
            reps: 5,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == Some(0) {
            return Err(CliError::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.eta > 0.5 && self.eta <= 1.0) {
            return Err(CliError::InvalidConfig(format!(
                "eta = {} must lie in (1/2, 1]",
                self.eta
            )));
        }
        if !self.k.is_power_of_two() {
            return Err(CliError::InvalidConfig(format!("k = {} must be a power of two", self.k)));
        }
        if self.reps == 0 {
            return Err(CliError::InvalidConfig("reps must be at least 1".into()));
        }
        self.pool_config().map(|_| ())
    }

    pub fn pool_config(&self) -> Result<PoolConfig> {
        let symbols = self
            .symbols
            .chars()
            .map(|c| {
                Symbol::from_char(c)
                    .ok_or_else(|| CliError::InvalidConfig(format!("unknown symbol `{c}`; use L, 0, 1, R")))
            })
            .collect::<Result<Vec<_>>>()?;
        let angles = self
            .angles
            .iter()
            .map(|a| {
                Angle::from_name(a).ok_or_else(|| {
                    CliError::InvalidConfig(format!("unknown angle `{a}`; use psi, alpha, theta, beta"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(
            PoolConfig::new(self.m, self.grid, self.ltuples, self.ldesigns, self.sacc.clone())
                .with_symbols(symbols)
                .with_free_angles(angles),
        )
    }
}

/// Persisted outcome of a run; field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub config: RunConfig,
    pub n: usize,
    pub pool_size: usize,
    pub chosen_index: usize,
    pub chosen_encoding: String,
    pub estimated_agreement: f64,
    pub true_agreement: usize,
    pub brute_force_count: usize,
    pub oracle_queries: u64,
    pub repetitions: usize,
    pub success: bool,
    pub wall_time_ms: u64,
}

impl RunRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn run(cfg: &RunConfig, trace: bool) -> Result<RunRecord> {
    let start = Instant::now();
    cfg.validate()?;
    let relation = parse_relation(&cfg.relation, cfg.n)?;
    let params = AgreementParams::new(cfg.eta)?;
    let pool = enumerate_pool(&cfg.pool_config()?)?;
    if trace {
        eprintln!(
            "pool: s = {}, n = {}, relation members = {}",
            pool.s(),
            relation.n(),
            relation.member_count()
        );
    }

    let mut brute_queries = QueryCounter::new();
    let (_, optimum) = brute_force_optimum(&pool, &relation, &params, &mut brute_queries)?;
    if trace {
        eprintln!("brute force: optimum = {optimum}, queries = {}", brute_queries.calls());
    }

    let learn = LearnConfig {
        k: cfg.k,
        reps: cfg.reps,
        ..LearnConfig::default()
    };
    let report: LearnReport = match cfg.algorithm {
        Algorithm::Brute => brute_force_report(&pool, &relation, &params, cfg.seed)?,
        Algorithm::First => {
            if trace {
                let table = aeqs_core::learner::agreement_table(&pool, &relation, &params, &mut QueryCounter::new())?;
                let joint = build_joint_state(&table);
                let (fin, good) = finalize_a(&joint);
                let good_mass: f64 = good.iter().map(|a| a.norm_sqr()).sum();
                eprintln!(
                    "joint state: norm = {:.12}, after input transform: norm = {:.12}, good mass = {:.12}",
                    joint.state().norm(),
                    fin.norm(),
                    good_mass
                );
            }
            first_algorithm(&pool, &relation, &params, &learn, cfg.seed)?
        }
        Algorithm::Second => second_algorithm(&pool, &relation, &params, &learn, cfg.seed)?,
    };
    if trace {
        eprintln!(
            "{:?}: chosen = {}, estimate = {:.6}, exact = {}, queries = {}, repetitions = {}",
            cfg.algorithm,
            report.chosen_index,
            report.estimated_agreement,
            report.true_agreement,
            report.oracle_queries,
            report.repetitions
        );
    }

    Ok(RunRecord {
        version: ARTIFACT_VERSION.to_string(),
        config: cfg.clone(),
        n: relation.n(),
        pool_size: pool.s(),
        chosen_index: report.chosen_index,
        chosen_encoding: serialize(&report.chosen),
        estimated_agreement: report.estimated_agreement,
        true_agreement: report.true_agreement,
        brute_force_count: optimum,
        oracle_queries: report.oracle_queries,
        repetitions: report.repetitions,
        success: report.true_agreement == optimum,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_accounting() {
        let cfg = RunConfig {
            algorithm: Algorithm::Brute,
            n: Some(3),
            ..RunConfig::default()
        };
        let rec = run(&cfg, false).unwrap();
        assert!(rec.success);
        assert_eq!(rec.oracle_queries, 512 * 8);
        assert_eq!(rec.true_agreement, 8);
    }

    #[test]
    fn eta_validation_names_interval() {
        let cfg = RunConfig {
            eta: 0.5,
            ..RunConfig::default()
        };
        let msg = run(&cfg, false).unwrap_err().to_string();
        assert!(msg.contains("(1/2, 1]"), "{msg}");
    }

    #[test]
    fn records_are_reproducible() {
        let cfg = RunConfig {
            reps: 2,
            ..RunConfig::default()
        };
        let mut a = run(&cfg, false).unwrap();
        let mut b = run(&cfg, false).unwrap();
        a.wall_time_ms = 0;
        b.wall_time_ms = 0;
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back: RunRecord = serde_json::from_str(&a.to_json().unwrap()).unwrap();
        assert_eq!(back.config, cfg);
        assert!(a.true_agreement <= a.brute_force_count);
    }
}
