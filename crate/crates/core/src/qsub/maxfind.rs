use std::collections::BTreeMap;

use rand::Rng;

use super::{grover_search_state, GoodSubspace, QueryCounter, UniformPreparation};
use crate::qcore::sample_basis;

pub const DEFAULT_BUDGET_CONSTANT: f64 = 15.0;

/// Growth factor of the search schedule after each failed round.
const SCHEDULE_GROWTH: f64 = 6.0 / 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxFindConfig {
    /// Total queries allowed per call are `budget_constant · √N`.
    pub budget_constant: f64,
}

impl Default for MaxFindConfig {
    fn default() -> Self {
        Self {
            budget_constant: DEFAULT_BUDGET_CONSTANT,
        }
    }
}

/// Threshold-raising maximum search over `values`.
///
/// Starting from a uniformly random threshold index, each round runs a
/// randomized-schedule Grover search for an index with a strictly larger
/// value and moves the threshold there on success. Every Grover iteration and
/// every comparison of a measured candidate costs one query; the loop stops
/// before a round would overrun the budget.
pub fn find_maximum<T: Ord, R: Rng + ?Sized>(
    values: &[T],
    config: MaxFindConfig,
    rng: &mut R,
    counter: &mut QueryCounter,
) -> usize {
    let n = values.len();
    assert!(n > 0, "find_maximum needs at least one value");
    if n == 1 {
        return 0;
    }
    let budget = (config.budget_constant * (n as f64).sqrt()).floor() as u64;
    let cap = (n as f64).sqrt();
    let prep = UniformPreparation::new(n);
    let mut spent = 0u64;
    let mut best = rng.random_range(0..n);

    'threshold: loop {
        let good = GoodSubspace::from_predicate(n, |i| values[i] > values[best]);
        let mut m = 1.0f64;
        loop {
            let j = rng.random_range(0..m.ceil() as u64);
            if spent + j + 1 > budget {
                break 'threshold;
            }
            let state = grover_search_state(&prep, &good, j, counter)
                .expect("preparation and good set share the item count");
            let candidate = sample_basis(&state, rng);
            counter.charge(1);
            spent += j + 1;
            if good.contains(candidate) {
                best = candidate;
                continue 'threshold;
            }
            m = (m * SCHEDULE_GROWTH).min(cap);
        }
    }
    best
}

/// Plurality vote over `reps` independent runs of [`find_maximum`]; ties
/// between winners go to the larger value (one comparison each), then the
/// smaller index.
pub fn find_maximum_majority<T: Ord, R: Rng + ?Sized>(
    values: &[T],
    config: MaxFindConfig,
    reps: usize,
    rng: &mut R,
    counter: &mut QueryCounter,
) -> usize {
    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..reps.max(1) {
        *votes.entry(find_maximum(values, config, rng, counter)).or_default() += 1;
    }
    let top = votes.values().copied().max().unwrap_or(0);
    let mut winners = votes.into_iter().filter(|&(_, v)| v == top).map(|(i, _)| i);
    let mut best = winners.next().expect("at least one vote");
    for i in winners {
        counter.charge(1);
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shuffled(n: usize, seed: u64) -> Vec<u32> {
        let mut v: Vec<u32> = (0..n as u32).collect();
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        v
    }

    #[test]
    fn single_item() {
        let mut qc = QueryCounter::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(find_maximum(&[7], MaxFindConfig::default(), &mut rng, &mut qc), 0);
        assert_eq!(qc.calls(), 0);
    }

    #[test]
    fn constant_array() {
        let mut qc = QueryCounter::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = vec![4; 37];
        let i = find_maximum(&v, MaxFindConfig::default(), &mut rng, &mut qc);
        assert_eq!(v[i], 4);
    }

    #[test]
    fn finds_strict_maximum_often() {
        let mut hits = 0;
        for seed in 0..200 {
            let values = shuffled(64, 1000 + seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut qc = QueryCounter::new();
            let i = find_maximum(&values, MaxFindConfig::default(), &mut rng, &mut qc);
            if values[i] == 63 {
                hits += 1;
            }
            assert!(qc.calls() as f64 <= 15.0 * 8.0 * 6.0);
        }
        assert!(hits >= 100, "{hits}/200");
    }

    #[test]
    fn query_scaling_is_square_root() {
        let mean = |n: usize| {
            let mut total = 0u64;
            for seed in 0..200 {
                let values = shuffled(n, seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed + 7);
                let mut qc = QueryCounter::new();
                find_maximum(&values, MaxFindConfig::default(), &mut rng, &mut qc);
                total += qc.calls();
            }
            total as f64 / 200.0
        };
        let ratio = mean(256) / mean(64);
        assert!((1.4..=2.9).contains(&ratio), "{ratio}");
    }

    #[test]
    fn deterministic_given_seed() {
        let values = shuffled(100, 9);
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let mut qc = QueryCounter::new();
            (find_maximum(&values, MaxFindConfig::default(), &mut rng, &mut qc), qc.calls())
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn majority_vote_is_reliable() {
        let values = shuffled(64, 77);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut qc = QueryCounter::new();
        let i = find_maximum_majority(&values, MaxFindConfig::default(), 5, &mut rng, &mut qc);
        assert_eq!(values[i], 63);
    }
}
