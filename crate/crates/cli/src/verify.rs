//! Property suites exposed as `aeqs verify <suite>`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aeqs_core::aeqs::{
    closeness_criterion, ground_state, h_fin, probability_criterion, project_onto, AeqsInstance, DEFAULT_GAP_TOL,
};
use aeqs_core::gates::{DesignTuple, GateParams, MachineEncoding, SymbolDesign, DEFAULT_GRID};
use aeqs_core::qcore::{subspace_probability, StateVector, UnitaryOperator, C64};
use aeqs_core::qqaf::{run, AgreementParams, Machine, Word};
use aeqs_core::qsub::{
    estimation_distribution, find_maximum, find_maximum_majority, quantum_count, GoodSubspace, MatrixPreparation,
    MaxFindConfig, QueryCounter, WalshHadamardPreparation,
};

use crate::error::{CliError, Result};

pub const SUITES: [&str; 6] = ["lemma1", "lemma2", "estimation", "counting", "maxfind", "all"];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}/{}: {}", self.suite, self.name, self.detail)
    }
}

fn check(suite: &'static str, name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        suite,
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn run_suite(name: &str) -> Result<Vec<CheckOutcome>> {
    match name {
        "lemma1" => Ok(lemma1()),
        "lemma2" => Ok(lemma2()),
        "estimation" => Ok(estimation()),
        "counting" => Ok(counting()),
        "maxfind" => Ok(maxfind()),
        "all" => Ok([lemma1(), lemma2(), estimation(), counting(), maxfind()].concat()),
        other => Err(CliError::UnknownSuite {
            name: other.to_string(),
            valid: SUITES.join(", "),
        }),
    }
}

/// A random encoding with `1..=max_m` qubits, up to two designs per symbol
/// and up to two single-qubit gates per design on the default grid.
pub fn random_encoding<R: Rng + ?Sized>(rng: &mut R, max_m: usize) -> MachineEncoding {
    let m = rng.random_range(1..=max_m);
    let g = DEFAULT_GRID;
    let designs = std::array::from_fn(|_| {
        let count = rng.random_range(0..=2);
        SymbolDesign::new(
            (0..count)
                .map(|_| {
                    let singles = (0..rng.random_range(0..=2))
                        .map(|_| {
                            let p = GateParams::new(
                                rng.random_range(0..g),
                                rng.random_range(0..g),
                                rng.random_range(0..g),
                                rng.random_range(0..g),
                                g,
                            )
                            .expect("indices below grid");
                            (rng.random_range(1..=m), p)
                        })
                        .collect();
                    let cnot = (rng.random_range(1..=m), rng.random_range(1..=m));
                    DesignTuple::new(g, singles, cnot).expect("wires in range")
                })
                .collect(),
        )
    });
    let s_acc: BTreeSet<usize> = (0..1usize << m).filter(|_| rng.random_bool(0.5)).collect();
    MachineEncoding::new(m, s_acc, designs).expect("valid random encoding")
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Word {
    Word::from_index(rng.random_range(0..1usize << n), n)
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    let amps = (0..dim)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps).expect("nonzero random vector")
}

fn lemma1() -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a1);
    let eta = AgreementParams::new(0.9).expect("valid eta");
    let trials = 200;
    let (mut worst_energy, mut worst_phase) = (0.0f64, 0.0f64);
    let mut failures = 0;
    for _ in 0..trials {
        let machine = Machine::new(random_encoding(&mut rng, 3)).expect("valid machine");
        let n = rng.random_range(1..=3);
        let x = random_word(&mut rng, n);
        let psi = run(&machine, &x);
        let inst = AeqsInstance::new(machine, eta, 0.1).expect("valid instance");
        let h = h_fin(&inst, &x);
        let residual: f64 = h.apply(&psi).expect("dims").iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let phase = ground_state(&h, DEFAULT_GAP_TOL)
            .and_then(|g| g.phase_aligned_distance(&psi))
            .unwrap_or(f64::INFINITY);
        worst_energy = worst_energy.max(residual);
        worst_phase = worst_phase.max(phase);
        if residual > 1e-9 || phase > 1e-9 {
            failures += 1;
        }
    }
    vec![check(
        "lemma1",
        "final-hamiltonian-ground-state",
        failures == 0,
        format!("{trials} machines, max |H psi| = {worst_energy:.2e}, max phase-aligned distance = {worst_phase:.2e}"),
    )]
}

fn lemma2() -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a2);
    let trials: Vec<(StateVector, BTreeSet<usize>)> = (0..500)
        .map(|_| {
            let dim = 1 << rng.random_range(1..=3);
            let phi = random_state(&mut rng, dim);
            let mut subset: BTreeSet<usize> = (0..dim).filter(|_| rng.random_bool(0.5)).collect();
            if subset.is_empty() {
                subset.insert(rng.random_range(0..dim));
            }
            (phi, subset)
        })
        .collect();

    let mut worst = 0.0f64;
    for (phi, subset) in &trials {
        let split = project_onto(phi, subset).expect("indices in range");
        let closest = split.closest.expect("random state has mass on a nonempty subset");
        let lhs = phi.distance(&closest).expect("dims").powi(2);
        worst = worst.max((lhs - 2.0 * (1.0 - split.inside_norm)).abs());
    }
    let mut out = vec![check(
        "lemma2",
        "distance-identity",
        worst <= 1e-9,
        format!("{} pairs, max deviation = {worst:.2e}", trials.len()),
    )];

    let etas: Vec<f64> = (0..10).map(|_| rng.random_range(0.5000001..=1.0)).collect();
    let (mut mismatches, mut squared_mismatches) = (0, 0);
    for &eta in &etas {
        let p = AgreementParams::new(eta).expect("valid eta");
        for (phi, subset) in &trials {
            let close = closeness_criterion(phi, subset, &p).expect("dims");
            let prob = probability_criterion(phi, subset, &p).expect("dims");
            let mass = subspace_probability(phi, subset).expect("dims");
            mismatches += usize::from(close != prob);
            squared_mismatches += usize::from(close != (mass >= eta * eta - 1e-12));
        }
    }
    let total = etas.len() * trials.len();
    out.push(check(
        "lemma2",
        "closeness-matches-probability",
        mismatches == 0,
        format!("{mismatches}/{total} disagreements between closeness and P >= eta"),
    ));
    out.push(check(
        "lemma2",
        "closeness-matches-squared-threshold",
        squared_mismatches == 0,
        format!("{squared_mismatches}/{total} disagreements between closeness and P >= eta^2"),
    ));
    out
}

fn rotation_preparation(theta: f64) -> MatrixPreparation {
    let (s, c) = theta.sin_cos();
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)],
    );
    MatrixPreparation::new(UnitaryOperator::new(m).expect("rotation is unitary"))
}

/// Mass on the grid points bracketing `k·θ/π` and their conjugates.
pub fn nearest_grid_mass(probs: &[f64], theta: f64) -> f64 {
    let k = probs.len();
    let c = k as f64 * theta / PI;
    let mut zs: BTreeSet<usize> = BTreeSet::new();
    for z in [c.floor() as usize, c.ceil() as usize] {
        zs.insert(z % k);
        zs.insert((k - z % k) % k);
    }
    zs.into_iter().map(|z| probs[z]).sum()
}

fn estimation() -> Vec<CheckOutcome> {
    let good = GoodSubspace::from_mask(vec![false, true]);
    let mut worst_grid = 0.0f64;
    for (k, j) in [(16, 0), (16, 2), (16, 8), (64, 5), (1024, 300)] {
        let theta = PI * j as f64 / k as f64;
        let probs = estimation_distribution(&rotation_preparation(theta), &good, k, &mut QueryCounter::new())
            .expect("power-of-two resolution");
        let pair: f64 = BTreeSet::from([j, (k - j) % k]).into_iter().map(|z| probs[z]).sum();
        worst_grid = worst_grid.max((1.0 - pair).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a3);
    let k = 1024;
    let mut min_mass = f64::INFINITY;
    for _ in 0..50 {
        let zeta: f64 = rng.random_range(0.0..1.0);
        let theta = zeta.sqrt().asin();
        let probs = estimation_distribution(&rotation_preparation(theta), &good, k, &mut QueryCounter::new())
            .expect("power-of-two resolution");
        min_mass = min_mass.min(nearest_grid_mass(&probs, theta));
    }
    let target = 8.0 / (PI * PI) - 0.01;
    vec![
        check(
            "estimation",
            "grid-eigenphase-point-mass",
            worst_grid <= 1e-9,
            format!("max missing mass = {worst_grid:.2e}"),
        ),
        check(
            "estimation",
            "off-grid-nearest-mass",
            min_mass >= target,
            format!("50 random zeta at k = {k}, min mass = {min_mass:.4} (target {target:.4})"),
        ),
    ]
}

/// `2π√(t(N−t))/k + π²N/k²`.
pub fn counting_error_bound(t: usize, n_items: usize, k: usize) -> f64 {
    let (t, nn, k) = (t as f64, n_items as f64, k as f64);
    2.0 * PI * (t * (nn - t)).sqrt() / k + PI * PI * nn / (k * k)
}

fn counting() -> Vec<CheckOutcome> {
    let n = 6;
    let dim = 1 << n;
    let k = 4096;
    let runs = 200;
    let mut hits = 0;
    for seed in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0 + seed);
        let mask: Vec<bool> = (0..dim).map(|_| rng.random_bool(0.3)).collect();
        let marked = GoodSubspace::from_mask(mask);
        let t = marked.size();
        let est = quantum_count(&marked, k, &mut rng, &mut QueryCounter::new()).expect("valid counting instance");
        if (est.estimate - t as f64).abs() <= counting_error_bound(t, dim, k) {
            hits += 1;
        }
    }
    let a = WalshHadamardPreparation::new(n);
    let none = estimation_distribution(&a, &GoodSubspace::empty(dim), k, &mut QueryCounter::new()).expect("valid");
    let all = estimation_distribution(&a, &GoodSubspace::all(dim), k, &mut QueryCounter::new()).expect("valid");
    let edge = (1.0 - none[0]).abs().max((1.0 - all[k / 2]).abs());
    let rate = hits as f64 / runs as f64;
    let target = 4.0 / (PI * PI) - 0.05;
    vec![
        check(
            "counting",
            "error-bound-rate",
            rate >= target,
            format!("{hits}/{runs} within bound at n = {n}, k = {k} (target rate {target:.3})"),
        ),
        check(
            "counting",
            "empty-and-full",
            edge <= 1e-9,
            format!("max missing mass = {edge:.2e}"),
        ),
    ]
}

pub fn shuffled_values(n: usize, rng: &mut impl Rng) -> Vec<u32> {
    let mut v: Vec<u32> = (0..n as u32).collect();
    v.shuffle(rng);
    v
}

/// `(single-pass hits, majority hits, mean queries)` over `runs` seeds.
pub fn maxfind_stats(n: usize, runs: u64, salt: u64) -> (usize, usize, f64) {
    let cfg = MaxFindConfig::default();
    let (mut single, mut majority, mut queries) = (0, 0, 0u64);
    for seed in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(salt ^ seed);
        let values = shuffled_values(n, &mut rng);
        let top = n as u32 - 1;
        let mut qc = QueryCounter::new();
        single += usize::from(values[find_maximum(&values, cfg, &mut rng, &mut qc)] == top);
        queries += qc.calls();
        let i = find_maximum_majority(&values, cfg, 5, &mut rng, &mut QueryCounter::new());
        majority += usize::from(values[i] == top);
    }
    (single, majority, queries as f64 / runs as f64)
}

fn maxfind() -> Vec<CheckOutcome> {
    let runs = 200;
    let (single, majority, q64) = maxfind_stats(64, runs, 0x3a4f);
    let (_, _, q256) = maxfind_stats(256, runs, 0x3a4f);
    let ratio = q256 / q64;
    vec![
        check(
            "maxfind",
            "single-pass-success",
            single * 2 >= runs as usize,
            format!("{single}/{runs} at N = 64"),
        ),
        check(
            "maxfind",
            "majority-success",
            majority * 100 >= 95 * runs as usize,
            format!("{majority}/{runs} at N = 64 with 5 repetitions"),
        ),
        check(
            "maxfind",
            "query-scaling",
            (1.4..=2.9).contains(&ratio),
            format!("mean queries {q64:.1} at N = 64, {q256:.1} at N = 256, ratio {ratio:.3}"),
        ),
    ]
}
