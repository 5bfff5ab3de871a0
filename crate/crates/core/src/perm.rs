//! Permutations in one-line notation, classical and POP containment, the
//! trivial bijections and the cycle machinery used by the cycle-interval
//! correspondence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::Pop;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("values are not distinct")]
    Duplicate,
    #[error("not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("cannot parse permutation {0:?}")]
    Syntax(String),
}

/// A permutation of `{1..n}` in one-line notation; `n` may be zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation(Vec<u32>);

/// A permutation used as a classical pattern.
pub type Pattern = Permutation;

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Permutation, PermError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(PermError::NotPermutation(n));
            }
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Permutation {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn reverse(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Permutation {
        let n = self.len() as u32;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Permutation(inv)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&v| self.0[v as usize - 1]).collect())
    }

    /// Cycles of the permutation, each listed starting from its smallest
    /// element and following `i ↦ π(i)`; cycles ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x - 1] {
                seen[x - 1] = true;
                cycle.push(x as u32);
                x = self.0[x - 1] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Builds a permutation from disjoint cycles covering `{1..n}`; fixed
    /// points may be omitted.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Permutation, PermError> {
        let mut values: Vec<u32> = (1..=n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let x = x as usize;
                if x == 0 || x > n || std::mem::replace(&mut used[x - 1], true) {
                    return Err(PermError::NotPermutation(n));
                }
                values[x - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation(values))
    }

    /// Writes each cycle largest element first, orders the cycles by
    /// increasing maxima and concatenates them.
    pub fn cycle_canonical_flatten(&self) -> Permutation {
        let mut cycles: Vec<Vec<u32>> = self
            .cycles()
            .into_iter()
            .map(|mut c| {
                let pos = c.iter().enumerate().max_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap_or(0);
                c.rotate_left(pos);
                c
            })
            .collect();
        cycles.sort_by_key(|c| c[0]);
        Permutation(cycles.concat())
    }

    /// Every cycle fits in an integer interval with at most `k - 1` elements.
    pub fn has_cycle_interval_property(&self, k: usize) -> bool {
        self.cycles().iter().all(|c| {
            let lo = *c.iter().min().unwrap();
            let hi = *c.iter().max().unwrap();
            (hi - lo + 1) as usize <= k.saturating_sub(1)
        })
    }

    /// 1-based positions of the left-to-right maxima.
    pub fn left_to_right_maxima(&self) -> Vec<usize> {
        let mut best = 0;
        let mut out = Vec::new();
        for (i, &v) in self.0.iter().enumerate() {
            if v > best {
                best = v;
                out.push(i + 1);
            }
        }
        out
    }

    /// Lexicographic successor in place; false once the last permutation
    /// has been passed.
    pub fn next_lex(&mut self) -> bool {
        next_permutation(&mut self.0)
    }
}

/// Standard lexicographic next permutation.
pub fn next_permutation<T: Ord>(xs: &mut [T]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Calls `f` on every permutation of length `n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&Permutation)) {
    let mut p = Permutation::identity(n);
    loop {
        f(&p);
        if !p.next_lex() {
            break;
        }
    }
}

/// The pattern order-isomorphic to `values`.
pub fn standardize<T: Ord>(values: &[T]) -> Result<Pattern, PermError> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].cmp(&values[b]));
    if idx.windows(2).any(|w| values[w[0]] == values[w[1]]) {
        return Err(PermError::Duplicate);
    }
    let mut out = vec![0u32; values.len()];
    for (rank, &i) in idx.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    Ok(Permutation(out))
}

/// Whether some subsequence of `perm` is order-isomorphic to `pat`.
pub fn contains_pattern(perm: &Permutation, pat: &Pattern) -> bool {
    contains_pattern_values(&perm.0, &pat.0)
}

/// Classical containment over any sequence of distinct values.
pub fn contains_pattern_values(seq: &[u32], pat: &[u32]) -> bool {
    fn rec(seq: &[u32], pat: &[u32], start: usize, chosen: &mut Vec<u32>) -> bool {
        let j = chosen.len();
        if j == pat.len() {
            return true;
        }
        let need = pat.len() - j;
        for i in start..=seq.len().saturating_sub(need) {
            let v = seq[i];
            let ok = chosen.iter().zip(pat).all(|(&w, &q)| (w < v) == (q < pat[j]));
            if ok {
                chosen.push(v);
                if rec(seq, pat, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if pat.len() > seq.len() {
        return false;
    }
    rec(seq, pat, 0, &mut Vec::with_capacity(pat.len()))
}

/// Containment of `pat` by an occurrence that uses the last entry of `seq`.
pub fn contains_pattern_ending_at_last(seq: &[u32], pat: &[u32]) -> bool {
    let (Some(&last), Some(&plast)) = (seq.last(), pat.last()) else {
        return pat.is_empty();
    };
    let head = &pat[..pat.len() - 1];
    fn rec(seq: &[u32], pat: &[u32], last: u32, plast: u32, start: usize, chosen: &mut Vec<u32>) -> bool {
        let j = chosen.len();
        if j == pat.len() {
            return true;
        }
        let need = pat.len() - j;
        for i in start..=seq.len().saturating_sub(need) {
            let v = seq[i];
            if (v < last) != (pat[j] < plast) {
                continue;
            }
            let ok = chosen.iter().zip(pat).all(|(&w, &q)| (w < v) == (q < pat[j]));
            if ok {
                chosen.push(v);
                if rec(seq, pat, last, plast, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let body = &seq[..seq.len() - 1];
    head.len() <= body.len() && rec(body, head, last, plast, 0, &mut Vec::with_capacity(head.len()))
}

/// A POP compiled for repeated containment checks: for every position the
/// earlier positions it must exceed and the earlier positions it must stay
/// below, plus its constraint against the final position.
#[derive(Debug, Clone)]
pub struct PopMatcher {
    k: usize,
    above_earlier: Vec<u32>,
    below_earlier: Vec<u32>,
}

impl PopMatcher {
    pub fn new(pop: &Pop) -> PopMatcher {
        let k = pop.len();
        let mut above_earlier = vec![0u32; k];
        let mut below_earlier = vec![0u32; k];
        for j in 0..k {
            for i in 0..j {
                if pop.less(i + 1, j + 1) {
                    above_earlier[j] |= 1 << i;
                }
                if pop.less(j + 1, i + 1) {
                    below_earlier[j] |= 1 << i;
                }
            }
        }
        PopMatcher { k, above_earlier, below_earlier }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    #[inline]
    fn fits(&self, j: usize, v: u32, chosen: &[u32]) -> bool {
        let (mut above, mut below) = (self.above_earlier[j], self.below_earlier[j]);
        while above != 0 {
            let i = above.trailing_zeros() as usize;
            if chosen[i] > v {
                return false;
            }
            above &= above - 1;
        }
        while below != 0 {
            let i = below.trailing_zeros() as usize;
            if chosen[i] < v {
                return false;
            }
            below &= below - 1;
        }
        true
    }

    /// Depth-first search assigning positions left to right. `limit` is the
    /// exclusive end of usable indices; `counting` keeps going after a hit.
    fn search(&self, seq: &[u32], limit: usize, start: usize, chosen: &mut Vec<u32>, counting: bool) -> u64 {
        let j = chosen.len();
        if j == self.k {
            return 1;
        }
        let need = self.k - j;
        let mut total = 0;
        let mut i = start;
        while i + need <= limit {
            let v = seq[i];
            if self.fits(j, v, chosen) {
                chosen.push(v);
                total += self.search(seq, limit, i + 1, chosen, counting);
                chosen.pop();
                if total > 0 && !counting {
                    return total;
                }
            }
            i += 1;
        }
        total
    }

    pub fn occurs_in(&self, seq: &[u32]) -> bool {
        self.search(seq, seq.len(), 0, &mut Vec::with_capacity(self.k), false) > 0
    }

    pub fn count_in(&self, seq: &[u32]) -> u64 {
        self.search(seq, seq.len(), 0, &mut Vec::with_capacity(self.k), true)
    }

    /// Whether an occurrence uses the last entry of `seq` as its final
    /// position. Only these need checking after appending one entry to an
    /// avoiding prefix.
    pub fn occurs_ending_at_last(&self, seq: &[u32]) -> bool {
        if self.k == 0 {
            return true;
        }
        let n = seq.len();
        if n < self.k {
            return false;
        }
        let last = seq[n - 1];
        let j_last = self.k - 1;
        // constraints of the final position against every earlier position
        let mut chosen = Vec::with_capacity(self.k);
        self.search_last(seq, n - 1, 0, last, j_last, &mut chosen)
    }

    fn search_last(&self, seq: &[u32], limit: usize, start: usize, last: u32, j_last: usize, chosen: &mut Vec<u32>) -> bool {
        let j = chosen.len();
        if j == j_last {
            return true;
        }
        let need = j_last - j;
        let must_be_below_last = self.above_earlier[j_last] >> j & 1 == 1;
        let must_be_above_last = self.below_earlier[j_last] >> j & 1 == 1;
        let mut i = start;
        while i + need <= limit {
            let v = seq[i];
            let ok_last = !(must_be_below_last && v > last) && !(must_be_above_last && v < last);
            if ok_last && self.fits(j, v, chosen) {
                chosen.push(v);
                if self.search_last(seq, limit, i + 1, last, j_last, chosen) {
                    return true;
                }
                chosen.pop();
            }
            i += 1;
        }
        false
    }
}

/// Whether `perm` has a subsequence satisfying every comparable pair of `pop`.
pub fn contains_pop(perm: &Permutation, pop: &Pop) -> bool {
    PopMatcher::new(pop).occurs_in(&perm.0)
}

/// Whether an occurrence of `pop` ends at the last entry of `perm`.
pub fn contains_pop_ending_at_last(perm: &Permutation, pop: &Pop) -> bool {
    PopMatcher::new(pop).occurs_ending_at_last(&perm.0)
}

/// Number of index tuples `i_1 < ... < i_k` forming an occurrence.
pub fn count_pop_occurrences(perm: &Permutation, pop: &Pop) -> u64 {
    PopMatcher::new(pop).count_in(&perm.0)
}

impl fmt::Display for Permutation {
    /// Digits when every value is a single digit, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
        } else {
            for (i, v) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Permutation, PermError> {
        let s = s.trim();
        let values: Option<Vec<u32>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10)).collect()
        };
        let values = values.ok_or_else(|| PermError::Syntax(s.to_string()))?;
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Permutation, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn pop(s: &str) -> Pop {
        s.parse().unwrap()
    }

    /// Standardizes every k-subsequence; independent of the search code.
    fn brute_contains(perm: &Permutation, pat: &Pattern) -> bool {
        let n = perm.len();
        let k = pat.len();
        if k > n {
            return false;
        }
        (0u32..1 << n).filter(|m| m.count_ones() as usize == k).any(|m| {
            let sub: Vec<u32> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| perm.values()[i]).collect();
            standardize(&sub).unwrap() == *pat
        })
    }

    fn brute_pop_count(perm: &Permutation, pop: &Pop) -> u64 {
        let n = perm.len();
        let k = pop.len();
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .filter(|m| {
                let sub: Vec<u32> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| perm.values()[i]).collect();
                (1..=k).all(|a| (1..=k).all(|b| !pop.less(a, b) || sub[a - 1] < sub[b - 1]))
            })
            .count() as u64
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[4, 1, 5]).unwrap(), perm("213"));
        assert_eq!(standardize(&[3, 4, 5]).unwrap(), perm("123"));
        assert_eq!(standardize(&[9, 2]).unwrap(), perm("21"));
        assert_eq!(standardize(&[2, 7, 2]), Err(PermError::Duplicate));
        assert_eq!(standardize::<i32>(&[]).unwrap(), Permutation::identity(0));
    }

    #[test]
    fn classical_containment_examples() {
        assert!(contains_pattern(&perm("31425"), &perm("123")));
        assert!(contains_pattern(&perm("31425"), &Permutation::identity(0)));
        assert!(contains_pattern(&Permutation::identity(0), &Permutation::identity(0)));
        assert!(!contains_pattern(&perm("123"), &perm("321")));
        assert!(!contains_pattern(&perm("12"), &perm("123")));
    }

    #[test]
    fn pop_containment_examples() {
        let p = pop("k=3; 1>3");
        assert!(contains_pop(&perm("41523"), &p));
        assert_eq!(count_pop_occurrences(&perm("41523"), &p), 6);
        assert!(!contains_pop(&perm("21"), &p));
        assert!(!contains_pop(&perm("12345"), &pop("k=4; 1>2, 1>3, 1>4")));
        assert_eq!(count_pop_occurrences(&perm("123"), &pop("k=2; 1>2")), 0);
        assert_eq!(count_pop_occurrences(&perm("321"), &Pop::antichain(2).unwrap()), 3);
    }

    #[test]
    fn occurrences_of_123_in_31425() {
        let chain = pop("k=3; 3>2, 2>1");
        assert_eq!(count_pop_occurrences(&perm("31425"), &chain), 3);
    }

    #[test]
    fn trivial_bijections() {
        let p = perm("41523");
        assert_eq!(p.complement(), perm("25143"));
        assert_eq!(p.reverse(), perm("32514"));
        assert_eq!(p.inverse(), perm("24513"));
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(5));
    }

    #[test]
    fn cycle_flatten_examples() {
        let p = Permutation::from_cycles(8, &[&[1, 6, 3], &[7], &[8, 2], &[4, 5]]).unwrap();
        assert_eq!(p.cycle_canonical_flatten(), perm("54631782"));
        assert_eq!(Permutation::identity(3).cycle_canonical_flatten(), perm("123"));
        assert_eq!(perm("21").cycle_canonical_flatten(), perm("21"));
    }

    #[test]
    fn cycle_interval_examples() {
        assert!(Permutation::identity(6).has_cycle_interval_property(2));
        assert!(!perm("51234").has_cycle_interval_property(5));
        let mut count = 0;
        for_each_permutation(7, |p| {
            if p.has_cycle_interval_property(5) {
                count += 1;
            }
        });
        assert_eq!(count, 399);
    }

    #[test]
    fn text_form() {
        let long: Permutation = "10,9,8,7,6,5,4,3,2,1".parse().unwrap();
        assert_eq!(long.len(), 10);
        assert_eq!(long.to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert!("1224".parse::<Permutation>().is_err());
        assert!("1a".parse::<Permutation>().is_err());
        assert_eq!("".parse::<Permutation>().unwrap(), Permutation::identity(0));
    }

    #[test]
    fn containment_agrees_with_brute_force_small() {
        for n in 0..=6 {
            for_each_permutation(n, |p| {
                for k in 0..=3 {
                    for_each_permutation(k, |q| {
                        assert_eq!(contains_pattern(p, q), brute_contains(p, q), "{p} {q}");
                    });
                }
            });
        }
    }

    #[test]
    fn pop_containment_equals_linear_extension_route() {
        let pops = crate::poset::enumerate_pops(3);
        for n in 0..=6 {
            for_each_permutation(n, |p| {
                for q in &pops {
                    let via_patterns = q.linear_extensions().iter().any(|s| contains_pattern(p, s));
                    assert_eq!(contains_pop(p, q), via_patterns, "{p} {q}");
                    assert_eq!(count_pop_occurrences(p, q), brute_pop_count(p, q), "{p} {q}");
                }
            });
        }
    }

    #[test]
    fn symmetry_transport_exhaustive() {
        for q in crate::poset::enumerate_pops(3) {
            let c = q.label_complement();
            let d = q.dual();
            for n in 0..=6 {
                for_each_permutation(n, |p| {
                    let base = contains_pop(p, &q);
                    assert_eq!(base, contains_pop(&p.reverse(), &c));
                    assert_eq!(base, contains_pop(&p.complement(), &d));
                });
            }
        }
    }

    #[test]
    fn flatten_maxima_are_cycle_maxima() {
        for_each_permutation(6, |p| {
            let flat = p.cycle_canonical_flatten();
            let mut maxima: Vec<u32> = p.cycles().iter().map(|c| *c.iter().max().unwrap()).collect();
            maxima.sort();
            let ltr: Vec<u32> = flat.left_to_right_maxima().iter().map(|&i| flat.at(i)).collect();
            assert_eq!(ltr, maxima);
        });
    }

    fn arb_perm(max: usize) -> impl Strategy<Value = Permutation> {
        (0..=max).prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()).prop_map(Permutation)
    }

    proptest! {
        #[test]
        fn bijections_are_involutions(p in arb_perm(10)) {
            prop_assert_eq!(p.reverse().reverse(), p.clone());
            prop_assert_eq!(p.complement().complement(), p.clone());
            prop_assert_eq!(p.inverse().inverse(), p.clone());
        }

        #[test]
        fn ending_at_last_matches_prefix_difference(p in arb_perm(8), idx in 0usize..19) {
            let q = &crate::poset::enumerate_pops(3)[idx];
            let m = PopMatcher::new(q);
            let seq = p.values();
            if let Some((_, head)) = seq.split_last() {
                if m.occurs_in(head) {
                    prop_assert!(m.occurs_in(seq));
                } else {
                    prop_assert_eq!(m.occurs_ending_at_last(seq), m.occurs_in(seq));
                }
            }
        }

        #[test]
        fn pattern_ending_at_last_consistent(p in arb_perm(8), q in arb_perm(4)) {
            let seq = p.values();
            if let Some((_, head)) = seq.split_last() {
                if !contains_pattern_values(head, q.values()) {
                    prop_assert_eq!(
                        contains_pattern_ending_at_last(seq, q.values()),
                        contains_pattern_values(seq, q.values())
                    );
                }
            }
        }
    }
}
