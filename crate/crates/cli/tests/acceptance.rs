//! Acceptance suite: one test per criterion, each printing a single
//! `PASS`/`FAIL` line to stderr whether or not output is captured.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::io::Write as _;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use aeqs_cli::relations::builtin;
use aeqs_cli::verify::{random_encoding, random_state, random_word};
use aeqs_cli::{CliError, RunConfig};
use aeqs_core::aeqs::{closeness_criterion, distance_to_subspace, ground_state, h_fin, probability_criterion, AeqsInstance};
use aeqs_core::gates::MachineEncoding;
use aeqs_core::learner::{
    agreement_table, brute_force_optimum, build_joint_state, enumerate_pool, finalize_a, first_algorithm,
    second_algorithm, verify_condition_star, CountingMode, LearnConfig, MachinePool,
};
use aeqs_core::qcore::{StateVector, UnitaryOperator, C64};
use aeqs_core::qqaf::{agreement_count, run, AgreementParams, Machine, RelationTable};
use aeqs_core::qsub::{
    estimation_distribution, find_maximum, find_maximum_majority, quantum_count, GoodSubspace, MatrixPreparation,
    MaxFindConfig, QueryCounter,
};

fn report(id: u32, title: &str, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "{verdict} [criterion {id}] {title}: {detail}");
    assert!(passed, "criterion {id} ({title}) failed: {detail}");
}

fn eta(v: f64) -> AgreementParams {
    AgreementParams::new(v).unwrap()
}

#[test]
fn criterion_1_final_hamiltonian_ground_state() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let trials = 250;
    let (mut worst_energy, mut worst_phase) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let machine = Machine::new(random_encoding(&mut rng, 3)).unwrap();
        let n = rng.random_range(1..=3);
        let x = random_word(&mut rng, n);
        let psi = run(&machine, &x);
        let inst = AeqsInstance::new(machine, eta(0.9), 0.1).unwrap();
        let h = h_fin(&inst, &x);
        let hpsi = h.matrix() * nalgebra::DVector::from_column_slice(psi.amplitudes());
        worst_energy = worst_energy.max(hpsi.norm());
        let g = ground_state(&h, 1e-9).unwrap();
        // Align ψ to g by the phase of ⟨ψ|g⟩, then compare componentwise.
        let overlap: C64 = psi.amplitudes().iter().zip(g.amplitudes()).map(|(a, b)| a.conj() * b).sum();
        let phase = overlap / overlap.norm();
        let dist = g
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst_phase = worst_phase.max(dist);
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "final Hamiltonian annihilates the run state",
        worst_energy <= 1e-9 && worst_phase <= 1e-9 && secs <= 10.0,
        &format!("{trials} machines, max |H psi| = {worst_energy:.2e}, max phase distance = {worst_phase:.2e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_2_closest_state_identity_and_criteria() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let trials: Vec<(StateVector, BTreeSet<usize>)> = (0..600)
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
        let a = phi.amplitudes();
        let inside_norm = subset.iter().map(|&u| a[u].norm_sqr()).sum::<f64>().sqrt();
        let lhs: f64 = a
            .iter()
            .enumerate()
            .map(|(u, z)| {
                let closest = if subset.contains(&u) { *z / inside_norm } else { C64::new(0.0, 0.0) };
                (z - closest).norm_sqr()
            })
            .sum();
        let rhs = 2.0 * (1.0 - inside_norm);
        let lib = distance_to_subspace(phi, subset).unwrap().powi(2);
        worst = worst.max((lhs - rhs).abs()).max((lib - rhs).abs());
    }

    let etas: Vec<f64> = (0..10).map(|_| rng.random_range(0.5000001..=1.0)).collect();
    let mut disagreements = 0;
    for &e in &etas {
        for (phi, subset) in &trials {
            let close = closeness_criterion(phi, subset, &eta(e)).unwrap();
            let prob = probability_criterion(phi, subset, &eta(e)).unwrap();
            disagreements += usize::from(close != prob);
        }
    }
    let total = etas.len() * trials.len();
    report(
        2,
        "closest-state identity and closeness/probability equivalence",
        worst <= 1e-9 && disagreements == 0,
        &format!(
            "identity max deviation {worst:.2e} over {} pairs; criteria disagree on {disagreements}/{total} trials",
            trials.len()
        ),
    );
}

#[test]
fn criterion_3_good_amplitude_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mut worst, mut worst_perfect, mut perfect_seen, mut pools) = (0.0f64, 0.0f64, 0, 0);
    for trial in 0..40 {
        let s_target = rng.random_range(1..=64);
        let n = rng.random_range(1..=3);
        let mut encodings: Vec<MachineEncoding> = (0..s_target).map(|_| random_encoding(&mut rng, 2)).collect();
        let r = if trial % 2 == 0 {
            encodings.push(MachineEncoding::identity(1, [0].into()).unwrap());
            RelationTable::full(n).unwrap()
        } else {
            let members = (0..1usize << n).filter(|_| rng.random_bool(0.5)).collect();
            RelationTable::from_members(n, &members).unwrap()
        };
        let pool = MachinePool::from_encodings(encodings).unwrap();
        let s = pool.s();
        if s > 64 {
            continue;
        }
        pools += 1;
        let p = eta(rng.random_range(0.55..=1.0));
        let table = agreement_table(&pool, &r, &p, &mut QueryCounter::new()).unwrap();
        let (_, good) = finalize_a(&build_joint_state(&table));
        for (i, e) in pool.encodings().iter().enumerate() {
            let count = agreement_count(&Machine::new(e.clone()).unwrap(), &r, &p);
            let f = count as f64 / (1usize << n) as f64;
            let want = C64::new(-f / (s as f64).sqrt(), 0.0);
            worst = worst.max((good[i] - want).norm());
            if count == 1 << n {
                perfect_seen += 1;
                worst_perfect = worst_perfect.max((good[i].norm_sqr() - 1.0 / s as f64).abs());
            }
        }
    }
    report(
        3,
        "good amplitudes equal -f/sqrt(s)",
        worst <= 1e-9 && worst_perfect <= 1e-9 && perfect_seen > 0,
        &format!(
            "{pools} pools, max deviation {worst:.2e}; {perfect_seen} perfect machines, max |a|^2 - 1/s = {worst_perfect:.2e}"
        ),
    );
}

fn rotation(theta: f64) -> MatrixPreparation {
    let (s, c) = theta.sin_cos();
    let m = nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)],
    );
    MatrixPreparation::new(UnitaryOperator::new(m).unwrap())
}

/// `½[F(z − kθ/π) + F(z + kθ/π)]` with `F(δ) = sin²(πδ)/(k² sin²(πδ/k))`.
fn analytic_outcomes(theta: f64, k: usize) -> Vec<f64> {
    let kf = k as f64;
    let kernel = |d: f64| {
        let den = (PI * d / kf).sin();
        if den.abs() < 1e-12 {
            1.0
        } else {
            (PI * d).sin().powi(2) / (kf * kf * den * den)
        }
    };
    let c = kf * theta / PI;
    (0..k).map(|z| 0.5 * (kernel(z as f64 - c) + kernel(z as f64 + c))).collect()
}

#[test]
fn criterion_4_amplitude_estimation_distribution() {
    let good = GoodSubspace::from_mask(vec![false, true]);
    let mut worst_grid = 0.0f64;
    for (k, j) in [(16, 2), (16, 8), (16, 0), (64, 7), (256, 100), (1024, 333), (1024, 512)] {
        let theta = PI * j as f64 / k as f64;
        let sim = estimation_distribution(&rotation(theta), &good, k, &mut QueryCounter::new()).unwrap();
        let pair: BTreeSet<usize> = [j, (k - j) % k].into();
        let mass: f64 = pair.iter().map(|&z| sim[z]).sum();
        worst_grid = worst_grid.max((1.0 - mass).abs());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let k = 1024;
    let (mut min_mass, mut oracle_dev) = (f64::INFINITY, 0.0f64);
    for _ in 0..50 {
        let zeta: f64 = rng.random_range(0.0..1.0);
        let theta = zeta.sqrt().asin();
        let sim = estimation_distribution(&rotation(theta), &good, k, &mut QueryCounter::new()).unwrap();
        let analytic = analytic_outcomes(theta, k);
        oracle_dev = sim.iter().zip(&analytic).fold(oracle_dev, |m, (a, b)| m.max((a - b).abs()));
        // The two grid angles bracketing θ, counted on both conjugate branches.
        let c = k as f64 * theta / PI;
        let zs: BTreeSet<usize> = [c.floor() as usize, c.ceil() as usize]
            .into_iter()
            .flat_map(|z| [z % k, (k - z % k) % k])
            .collect();
        min_mass = min_mass.min(zs.iter().map(|&z| analytic[z]).sum());
    }
    let target = 8.0 / (PI * PI) - 0.01;
    report(
        4,
        "amplitude estimation outcome law",
        worst_grid <= 1e-9 && min_mass >= target && oracle_dev <= 1e-9,
        &format!(
            "grid point-mass deficit {worst_grid:.2e}; off-grid min nearest mass {min_mass:.4} (target {target:.4}); simulation vs closed form {oracle_dev:.2e}"
        ),
    );
}

#[test]
fn criterion_5_quantum_counting() {
    let start = Instant::now();
    let (n, k, runs) = (6, 4096, 200u64);
    let dim = 1usize << n;
    let hits: usize = (0..runs)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
            let density = rng.random_range(0.0..1.0);
            let mask: Vec<bool> = (0..dim).map(|_| rng.random_bool(density)).collect();
            let t = mask.iter().filter(|&&b| b).count() as f64;
            let marked = GoodSubspace::from_mask(mask);
            let est = quantum_count(&marked, k, &mut rng, &mut QueryCounter::new()).unwrap();
            let (nn, kf) = (dim as f64, k as f64);
            let bound = 2.0 * PI * (t * (nn - t)).sqrt() / kf + PI * PI * nn / (kf * kf);
            usize::from((est.estimate - t).abs() <= bound)
        })
        .sum();
    let mut exact = true;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let none = quantum_count(&GoodSubspace::empty(dim), k, &mut rng, &mut QueryCounter::new()).unwrap();
        let all = quantum_count(&GoodSubspace::all(dim), k, &mut rng, &mut QueryCounter::new()).unwrap();
        exact &= none.estimate == 0.0 && (all.estimate - dim as f64).abs() < 1e-9;
    }
    let secs = start.elapsed().as_secs_f64();
    let rate = hits as f64 / runs as f64;
    let target = 4.0 / (PI * PI) - 0.05;
    report(
        5,
        "quantum counting error bound",
        rate >= target && exact && secs <= 60.0,
        &format!("{hits}/{runs} within bound (target rate {target:.3}); exact 0 and 2^n: {exact}; {secs:.2}s"),
    );
}

#[test]
fn criterion_6_maximum_finding() {
    let cfg = MaxFindConfig::default();
    let stats = |n: usize| {
        let rows: Vec<(usize, usize, u64)> = (0..200u64)
            .into_par_iter()
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(6000 + seed);
                let values: Vec<u64> = (0..n).map(|_| rng.random_range(0..1_000_000)).collect();
                let top = *values.iter().max().unwrap();
                let strict = values.iter().filter(|&&v| v == top).count() == 1;
                let mut values = values;
                if !strict {
                    let i = values.iter().position(|&v| v == top).unwrap();
                    values[i] += 1;
                }
                let top = *values.iter().max().unwrap();
                let mut qc = QueryCounter::new();
                let single = usize::from(values[find_maximum(&values, cfg, &mut rng, &mut qc)] == top);
                let majority =
                    usize::from(values[find_maximum_majority(&values, cfg, 5, &mut rng, &mut QueryCounter::new())] == top);
                (single, majority, qc.calls())
            })
            .collect();
        let single: usize = rows.iter().map(|r| r.0).sum();
        let majority: usize = rows.iter().map(|r| r.1).sum();
        let mean = rows.iter().map(|r| r.2).sum::<u64>() as f64 / rows.len() as f64;
        (single, majority, mean)
    };
    let (single, majority, q64) = stats(64);
    let (_, _, q256) = stats(256);
    let ratio = q256 / q64;
    report(
        6,
        "maximum finding success and query scaling",
        single >= 100 && majority >= 190 && (1.4..=2.9).contains(&ratio),
        &format!("N = 64: single pass {single}/200, majority of 5 {majority}/200; query ratio 256/64 = {ratio:.3}"),
    );
}

fn learning_pool() -> MachinePool {
    let cfg = RunConfig::default();
    enumerate_pool(&cfg.pool_config().unwrap()).unwrap()
}

fn learning_targets() -> (Vec<(String, RelationTable)>, Vec<String>) {
    let mut targets = Vec::new();
    let mut skipped = Vec::new();
    for name in ["eq", "balanced", "parity-even"] {
        for n in [2, 3] {
            match builtin(name, n) {
                Ok(r) => targets.push((format!("{name}/n={n}"), r)),
                Err(CliError::OddLengthForEq(_)) => skipped.push(format!("{name}/n={n}")),
                Err(e) => panic!("{e}"),
            }
        }
    }
    (targets, skipped)
}

/// Repetitions per first-algorithm run; each repetition measures the machine
/// register once, and partially agreeing machines share the good subspace.
const FIRST_REPS: usize = 20;

#[test]
fn criterion_7_end_to_end_learning() {
    let start = Instant::now();
    let pool = learning_pool();
    let p = eta(0.9);
    let (targets, skipped) = learning_targets();
    let second_cfg = LearnConfig { reps: 5, ..LearnConfig::default() };
    let first_cfg = LearnConfig { reps: FIRST_REPS, ..LearnConfig::default() };
    let mut lines = Vec::new();
    let mut ok = pool.s() <= 512;
    for (label, r) in &targets {
        let (_, optimum) = brute_force_optimum(&pool, r, &p, &mut QueryCounter::new()).unwrap();
        let second: usize = (0..50u64)
            .into_par_iter()
            .map(|seed| usize::from(second_algorithm(&pool, r, &p, &second_cfg, seed).unwrap().true_agreement == optimum))
            .sum();
        let star = verify_condition_star(&pool, r, &p).unwrap();
        let first = if star {
            (0..50u64)
                .into_par_iter()
                .map(|seed| {
                    let rep = first_algorithm(&pool, r, &p, &first_cfg, seed).unwrap();
                    usize::from(rep.success && rep.true_agreement == r.domain_size())
                })
                .sum::<usize>()
        } else {
            50
        };
        ok &= second >= 45 && first >= 45;
        lines.push(format!("{label}: second {second}/50, first {first}/50{}", if star { "" } else { " (no perfect machine)" }));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs <= 300.0;
    report(
        7,
        "end-to-end learning on builtin relations",
        ok,
        &format!("s = {}; {}; skipped {:?} (odd length); {secs:.1}s", pool.s(), lines.join("; "), skipped),
    );
}

#[test]
fn criterion_8_exact_counting_matches_brute_force() {
    let pool = learning_pool();
    let p = eta(0.9);
    let (mut targets, _) = learning_targets();
    for name in ["all", "none", "majority"] {
        for n in [2, 3] {
            targets.push((format!("{name}/n={n}"), builtin(name, n).unwrap()));
        }
    }
    let cfg = LearnConfig {
        counting: CountingMode::Exact,
        ..LearnConfig::default()
    };
    let mut runs = 0;
    let mut mismatches = Vec::new();
    for (label, r) in &targets {
        let (_, optimum) = brute_force_optimum(&pool, r, &p, &mut QueryCounter::new()).unwrap();
        let counts: Vec<usize> = (0..50u64)
            .into_par_iter()
            .map(|seed| second_algorithm(&pool, r, &p, &cfg, seed).unwrap().true_agreement)
            .collect();
        runs += counts.len();
        let bad = counts.iter().filter(|&&c| c != optimum).count();
        if bad > 0 {
            mismatches.push(format!("{label}: {bad}"));
        }
    }
    report(
        8,
        "exact-counting second algorithm equals brute force",
        mismatches.is_empty(),
        &format!("{runs} runs over {} relations; mismatches {:?}", targets.len(), mismatches),
    );
}

fn cli_record(args: &[&str], out: &std::path::Path) -> (i32, serde_json::Value, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_aeqs"))
        .arg("run")
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    let mut value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    value.as_object_mut().unwrap().remove("wall_time_ms");
    let stdout = String::from_utf8(output.stdout).unwrap();
    let stable: String = stdout.lines().filter(|l| !l.contains("wall_time_ms")).collect::<Vec<_>>().join("\n");
    (output.status.code().unwrap_or(-1), value, stable)
}

#[test]
fn criterion_9_cli_determinism() {
    let dir = std::env::temp_dir().join(format!("aeqs-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let configs: [&[&str]; 4] = [
        &["--relation", "parity-even", "--n", "3", "--algorithm", "second", "--seed", "17"],
        &["--relation", "eq", "--n", "2", "--algorithm", "first", "--seed", "3", "--reps", "10"],
        &["--relation", "majority", "--n", "3", "--algorithm", "brute"],
        &["--relation", "balanced", "--n", "2", "--algorithm", "second", "--seed", "99", "--k", "256", "--reps", "3"],
    ];
    let mut same = 0;
    for (i, args) in configs.iter().enumerate() {
        let a = cli_record(args, &dir.join(format!("a{i}.json")));
        let b = cli_record(args, &dir.join(format!("b{i}.json")));
        same += usize::from(a == b && a.0 != 1);
    }
    let _ = std::fs::remove_dir_all(&dir);
    report(
        9,
        "fixed-seed CLI runs reproduce the record",
        same == configs.len(),
        &format!("{same}/{} configurations identical across two invocations", configs.len()),
    );
}
