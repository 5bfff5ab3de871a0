//! Exact counting of avoiders by pruned backtracking.
//!
//! Permutations are grown left to right by picking the next value from the
//! unused set. Containment is monotone under appending, so a prefix is
//! abandoned as soon as it contains the pattern, and after each placement
//! only occurrences that end at the new entry need to be checked.
//!
//! The search forest is split by the first entry. Subtree counts are
//! independent integers, so the total is identical for any worker count.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::perm::{contains_pattern_ending_at_last, Pattern, Permutation, PopMatcher};
use crate::poset::Pop;

/// Largest `n` accepted without an explicit override.
pub const DEFAULT_CEILING: usize = 10;

/// Hard limit from the `u64` leaf counter (20! < 2^64 < 21!).
pub const MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("n = {n} exceeds the exhaustive-search ceiling {ceiling}; raise it explicitly to proceed")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("patterns in a set must share one length")]
    MixedLengths,
}

/// Something whose avoidance can be tested incrementally.
pub trait Forbidden: Sync {
    /// Whether `seq` (distinct values, any range) has an occurrence that
    /// uses its last entry.
    fn hit_ending_at_last(&self, seq: &[u32]) -> bool;
}

impl Forbidden for PopMatcher {
    fn hit_ending_at_last(&self, seq: &[u32]) -> bool {
        self.occurs_ending_at_last(seq)
    }
}

/// A set of classical patterns of one length, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PatternSet(Vec<Pattern>);

impl PatternSet {
    pub fn new(mut patterns: Vec<Pattern>) -> Result<PatternSet, EnumError> {
        if patterns.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(EnumError::MixedLengths);
        }
        patterns.sort();
        patterns.dedup();
        Ok(PatternSet(patterns))
    }

    /// The patterns induced by the linear extensions of `pop`.
    pub fn from_pop(pop: &Pop) -> PatternSet {
        PatternSet(pop.linear_extensions())
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Forbidden for PatternSet {
    fn hit_ending_at_last(&self, seq: &[u32]) -> bool {
        self.0.iter().any(|p| contains_pattern_ending_at_last(seq, p.values()))
    }
}

/// Counts of `n`-permutations avoiding a POP, `counts[n]` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountSequence {
    pub pop: Pop,
    #[serde(serialize_with = "decimal_strings")]
    pub counts: Vec<BigUint>,
}

/// Serializes big integers as decimal strings so JSON readers keep every digit.
pub fn decimal_strings<S: serde::Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl CountSequence {
    /// Counts from `n = 1` on, the way sequence tables list them.
    pub fn from_one(&self) -> &[BigUint] {
        self.counts.get(1..).unwrap_or(&[])
    }
}

/// Counting configuration: the exhaustive-search ceiling and the worker
/// count (`None` uses the global rayon pool).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumerator {
    pub ceiling: usize,
    pub jobs: Option<usize>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator { ceiling: DEFAULT_CEILING, jobs: None }
    }
}

impl Enumerator {
    pub fn with_ceiling(ceiling: usize) -> Enumerator {
        Enumerator { ceiling, ..Enumerator::default() }
    }

    fn check(&self, n: usize) -> Result<(), EnumError> {
        if n > self.ceiling || n > MAX_N {
            return Err(EnumError::CeilingExceeded { n, ceiling: self.ceiling.min(MAX_N) });
        }
        Ok(())
    }

    /// Number of `n`-permutations avoiding `pop`.
    pub fn count_avoiders(&self, pop: &Pop, n: usize) -> Result<BigUint, EnumError> {
        self.check(n)?;
        Ok(BigUint::from(self.count_with(&PopMatcher::new(pop), n)))
    }

    /// `a(0..=n_max)` for `pop`.
    pub fn count_avoiders_prefix(&self, pop: &Pop, n_max: usize) -> Result<CountSequence, EnumError> {
        self.check(n_max)?;
        let matcher = PopMatcher::new(pop);
        let counts = (0..=n_max).map(|n| BigUint::from(self.count_with(&matcher, n))).collect();
        Ok(CountSequence { pop: pop.clone(), counts })
    }

    /// Number of `n`-permutations avoiding every pattern in the set.
    pub fn count_avoiders_pattern_set(&self, set: &PatternSet, n: usize) -> Result<BigUint, EnumError> {
        self.check(n)?;
        Ok(BigUint::from(self.count_with(set, n)))
    }

    /// Number of `n`-permutations whose cycles each fit in an integer
    /// interval of at most `k - 1` elements, by filtering all of `S_n`.
    pub fn count_cycle_interval_perms(&self, k: usize, n: usize) -> Result<BigUint, EnumError> {
        self.check(n)?;
        let first_values: Vec<u32> = (1..=n as u32).collect();
        let count = self.run(|| {
            first_values
                .par_iter()
                .map(|&first| {
                    let mut rest: Vec<u32> = (1..=n as u32).filter(|&v| v != first).collect();
                    let mut c = 0u64;
                    loop {
                        let mut values = Vec::with_capacity(n);
                        values.push(first);
                        values.extend_from_slice(&rest);
                        let p = Permutation::new(values).expect("a permutation");
                        if p.has_cycle_interval_property(k) {
                            c += 1;
                        }
                        if !crate::perm::next_permutation(&mut rest) {
                            break;
                        }
                    }
                    c
                })
                .sum::<u64>()
        });
        Ok(BigUint::from(if n == 0 { 1 } else { count }))
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.jobs {
            Some(j) => rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }

    fn count_with<F: Forbidden>(&self, forbidden: &F, n: usize) -> u64 {
        if n == 0 {
            return u64::from(!forbidden.hit_ending_at_last(&[]));
        }
        self.run(|| {
            (1..=n as u32)
                .into_par_iter()
                .map(|first| {
                    let mut prefix = Vec::with_capacity(n);
                    prefix.push(first);
                    if forbidden.hit_ending_at_last(&prefix) {
                        return 0;
                    }
                    let unused = full_mask(n) & !(1u32 << (first - 1));
                    extend(forbidden, n, unused, &mut prefix)
                })
                .sum()
        })
    }
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn extend<F: Forbidden>(forbidden: &F, n: usize, unused: u32, prefix: &mut Vec<u32>) -> u64 {
    if prefix.len() == n {
        return 1;
    }
    let mut total = 0;
    let mut rest = unused;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        prefix.push(bit + 1);
        if !forbidden.hit_ending_at_last(prefix) {
            total += extend(forbidden, n, unused & !(1 << bit), prefix);
        }
        prefix.pop();
    }
    total
}

/// `count_avoiders` with the default configuration.
pub fn count_avoiders(pop: &Pop, n: usize) -> Result<BigUint, EnumError> {
    Enumerator::default().count_avoiders(pop, n)
}

/// `count_avoiders_prefix` with the default configuration.
pub fn count_avoiders_prefix(pop: &Pop, n_max: usize) -> Result<CountSequence, EnumError> {
    Enumerator::default().count_avoiders_prefix(pop, n_max)
}

/// `count_avoiders_pattern_set` with the default configuration.
pub fn count_avoiders_pattern_set(set: &PatternSet, n: usize) -> Result<BigUint, EnumError> {
    Enumerator::default().count_avoiders_pattern_set(set, n)
}

/// `count_cycle_interval_perms` with the default configuration.
pub fn count_cycle_interval_perms(k: usize, n: usize) -> Result<BigUint, EnumError> {
    Enumerator::default().count_cycle_interval_perms(k, n)
}

/// The POP with label `k` below label 1 and labels `2..k-1` isolated.
pub fn cycle_interval_pop(k: usize) -> Pop {
    Pop::from_greater_pairs(k, &[(1, k)]).expect("valid for k >= 2")
}
