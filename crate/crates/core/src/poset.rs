//! Partially ordered patterns (POPs): labeled strict partial orders on
//! `{1..k}`, their text form, the label-complement and dual symmetries,
//! expansion into classical patterns and exhaustive generation.
//!
//! Labels are 1-based in every public signature. Internally a POP is kept
//! as its full transitive closure, one bitmask row per label.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

/// Largest POP length representable by the bitmask rows.
pub const MAX_POP_LEN: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PopError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("label {label} out of range 1..={k}")]
    LabelOutOfRange { label: usize, k: usize },
    #[error("relations are cyclic: {a} and {b} would be below each other")]
    Cycle { a: usize, b: usize },
    #[error("POP length {0} exceeds the supported maximum of {MAX_POP_LEN}")]
    TooLong(usize),
}

/// A labeled strict partial order on `{1..k}`.
///
/// `a < b` in the poset means that in an occurrence the entry matched to
/// position `a` is smaller than the entry matched to position `b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pop {
    k: usize,
    /// `up[a]` has bit `b` set iff `a < b` (0-based labels).
    up: Vec<u32>,
}

impl Pop {
    /// The `k`-element antichain (no relations).
    pub fn antichain(k: usize) -> Result<Pop, PopError> {
        if k > MAX_POP_LEN {
            return Err(PopError::TooLong(k));
        }
        Ok(Pop { k, up: vec![0; k] })
    }

    /// The chain `order[0] > order[1] > ...` on the listed labels; labels not
    /// listed stay isolated.
    pub fn chain(k: usize, order: &[usize]) -> Result<Pop, PopError> {
        let rels: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
        Pop::from_greater_pairs(k, &rels)
    }

    /// Builds the closure of relations given as `(a, b)` meaning `a > b`,
    /// with 1-based labels.
    pub fn from_greater_pairs(k: usize, rels: &[(usize, usize)]) -> Result<Pop, PopError> {
        let mut pop = Pop::antichain(k)?;
        for &(a, b) in rels {
            for label in [a, b] {
                if label == 0 || label > k {
                    return Err(PopError::LabelOutOfRange { label, k });
                }
            }
            if a == b {
                return Err(PopError::Cycle { a, b });
            }
            pop.up[b - 1] |= 1 << (a - 1);
        }
        pop.close()?;
        Ok(pop)
    }

    /// Builds a POP from raw rows (`up[a]` bit `b` meaning `a < b`, 0-based)
    /// that already form a strict partial order. Returns `None` otherwise.
    pub fn from_closed_rows(up: Vec<u32>) -> Option<Pop> {
        let pop = Pop { k: up.len(), up };
        pop.is_strict_order().then_some(pop)
    }

    /// Warshall closure followed by an antisymmetry check.
    fn close(&mut self) -> Result<(), PopError> {
        for m in 0..self.k {
            for a in 0..self.k {
                if self.up[a] >> m & 1 == 1 {
                    self.up[a] |= self.up[m];
                }
            }
        }
        for a in 0..self.k {
            if self.up[a] >> a & 1 == 1 {
                // a is below itself: find a partner on the cycle for the message
                let b = (0..self.k)
                    .find(|&b| b != a && self.lt0(a, b) && self.lt0(b, a))
                    .unwrap_or(a);
                return Err(PopError::Cycle { a: a + 1, b: b + 1 });
            }
        }
        Ok(())
    }

    fn is_strict_order(&self) -> bool {
        if self.k > MAX_POP_LEN {
            return false;
        }
        let mask = if self.k == 32 { u32::MAX } else { (1u32 << self.k) - 1 };
        (0..self.k).all(|a| {
            let row = self.up[a];
            row & !mask == 0
                && row >> a & 1 == 0
                && (0..self.k).all(|b| row >> b & 1 == 0 || (self.up[b] & !row == 0 && self.up[b] >> a & 1 == 0))
        })
    }

    #[inline]
    fn lt0(&self, a: usize, b: usize) -> bool {
        self.up[a] >> b & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    /// `a < b` in the poset, 1-based labels.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.lt0(a - 1, b - 1)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    /// Rows of the closure, `rows()[a]` bit `b` set iff `a+1 < b+1`.
    pub fn rows(&self) -> &[u32] {
        &self.up
    }

    /// Labels comparable to no other label.
    pub fn isolated(&self) -> Vec<usize> {
        (1..=self.k)
            .filter(|&a| (1..=self.k).all(|b| !self.comparable(a, b)))
            .collect()
    }

    /// Number of comparable pairs.
    pub fn relation_count(&self) -> usize {
        self.up.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Cover relations `(a, b)` with `a > b`, sorted ascending.
    pub fn reduction(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.k {
            for b in 0..self.k {
                if !self.lt0(b, a) {
                    continue;
                }
                let covered = (0..self.k).any(|m| self.lt0(b, m) && self.lt0(m, a));
                if !covered {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    /// Replaces every label `x` by `k + 1 - x`.
    pub fn label_complement(&self) -> Pop {
        let k = self.k;
        let mut up = vec![0u32; k];
        for a in 0..k {
            for b in 0..k {
                if self.lt0(a, b) {
                    up[k - 1 - a] |= 1 << (k - 1 - b);
                }
            }
        }
        Pop { k, up }
    }

    /// Turns the poset upside down.
    pub fn dual(&self) -> Pop {
        let k = self.k;
        let mut up = vec![0u32; k];
        for a in 0..k {
            for b in 0..k {
                if self.lt0(a, b) {
                    up[b] |= 1 << a;
                }
            }
        }
        Pop { k, up }
    }

    /// The orbit under label complement and duality, identity first.
    pub fn orbit(&self) -> [Pop; 4] {
        let c = self.label_complement();
        let d = self.dual();
        let cd = d.label_complement();
        [self.clone(), c, d, cd]
    }

    /// Orbit-invariant key: the smallest row encoding over the orbit.
    pub fn canonical_class(&self) -> ClassKey {
        let best = self
            .orbit()
            .into_iter()
            .map(|p| p.up)
            .min()
            .expect("orbit is nonempty");
        ClassKey { k: self.k, rows: best }
    }

    /// Removes the given labels and relabels the rest order-preservingly.
    pub fn remove_labels(&self, labels: &[usize]) -> Pop {
        let keep: Vec<usize> = (0..self.k).filter(|a| !labels.contains(&(a + 1))).collect();
        let mut up = vec![0u32; keep.len()];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.lt0(a, b) {
                    up[i] |= 1 << j;
                }
            }
        }
        Pop { k: keep.len(), up }
    }

    /// All classical patterns of length `k` compatible with the order, sorted
    /// lexicographically. Each one corresponds to exactly one linear extension.
    pub fn linear_extensions(&self) -> Vec<Permutation> {
        let k = self.k;
        let down: Vec<u32> = (0..k)
            .map(|b| (0..k).filter(|&a| self.lt0(a, b)).fold(0u32, |m, a| m | 1 << a))
            .collect();
        let mut out = Vec::new();
        let mut values = vec![0u32; k];
        fn rec(k: usize, down: &[u32], placed: u32, next: u32, values: &mut Vec<u32>, out: &mut Vec<Permutation>) {
            if next as usize > k {
                out.push(Permutation::from_vec_unchecked(values.clone()));
                return;
            }
            for a in 0..k {
                if placed >> a & 1 == 0 && down[a] & !placed == 0 {
                    values[a] = next;
                    rec(k, down, placed | 1 << a, next + 1, values, out);
                }
            }
        }
        rec(k, &down, 0, 1, &mut values, &mut out);
        out.sort();
        out
    }

    /// Number of linear extensions.
    pub fn extension_count(&self) -> usize {
        self.linear_extensions().len()
    }
}

impl fmt::Display for Pop {
    /// `k=<k>; a>b, ...` with the transitive reduction sorted ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};", self.k)?;
        for (i, (a, b)) in self.reduction().into_iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{a}>{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pop({self})")
    }
}

impl FromStr for Pop {
    type Err = PopError;

    fn from_str(s: &str) -> Result<Pop, PopError> {
        parse_pop(s)
    }
}

impl Serialize for Pop {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Pop {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Pop, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `k=<int>; a>b, c>d, ...`; whitespace is insignificant and the
/// relation list may be empty.
pub fn parse_pop(text: &str) -> Result<Pop, PopError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix("k=")
        .ok_or_else(|| PopError::Syntax(format!("expected `k=` at the start of {text:?}")))?;
    let (k_text, rels_text) = rest
        .split_once(';')
        .ok_or_else(|| PopError::Syntax("missing `;` after the length".into()))?;
    let k = parse_int(k_text)?;
    if k == 0 {
        return Err(PopError::Syntax("length must be positive".into()));
    }
    if k > MAX_POP_LEN {
        return Err(PopError::TooLong(k));
    }
    let mut rels = Vec::new();
    if !rels_text.is_empty() {
        for rel in rels_text.split(',') {
            let (a, b) = rel
                .split_once('>')
                .ok_or_else(|| PopError::Syntax(format!("relation {rel:?} is not of the form a>b")))?;
            rels.push((parse_int(a)?, parse_int(b)?));
        }
    }
    Pop::from_greater_pairs(k, &rels)
}

fn parse_int(s: &str) -> Result<usize, PopError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(PopError::Syntax(format!("expected an integer, found {s:?}")));
    }
    s.parse().map_err(|_| PopError::Syntax(format!("integer {s:?} out of range")))
}

/// Orbit key under label complement and duality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    k: usize,
    rows: Vec<u32>,
}

impl ClassKey {
    /// The orbit member whose encoding is the key.
    pub fn representative(&self) -> Pop {
        Pop { k: self.k, up: self.rows.clone() }
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.k)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{r:x}")?;
        }
        Ok(())
    }
}

impl Serialize for ClassKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Every labeled strict partial order on `{1..k}`, each exactly once.
///
/// Element `m` is added to each order on `{0..m}` by choosing the set `D`
/// of elements below it and the set `U` above it. `D` must be a down-set,
/// `U` an up-set, and everything in `D` already below everything in `U`;
/// relations among the old elements never change, so every order arises
/// from exactly one (restriction, D, U) triple.
pub fn enumerate_pops(k: usize) -> Vec<Pop> {
    assert!(k <= MAX_POP_LEN, "POP length {k} too large");
    let mut level: Vec<Vec<u32>> = vec![Vec::new()];
    for m in 0..k {
        let mut next = Vec::new();
        for up in &level {
            let down: Vec<u32> = (0..m)
                .map(|b| (0..m).filter(|&a| up[a] >> b & 1 == 1).fold(0u32, |acc, a| acc | 1 << a))
                .collect();
            let full = (1u32 << m) - 1;
            for d in 0..=full {
                // D must contain everything below its members
                if (0..m).any(|a| d >> a & 1 == 1 && down[a] & !d != 0) {
                    continue;
                }
                // U must avoid D and everything below D
                let mut allowed_u = full & !d;
                for a in 0..m {
                    if d >> a & 1 == 1 {
                        allowed_u &= up[a];
                    }
                }
                let mut u = allowed_u;
                loop {
                    let up_closed = (0..m).all(|a| u >> a & 1 == 0 || up[a] & !u == 0);
                    if up_closed {
                        let mut rows = up.clone();
                        for a in 0..m {
                            if d >> a & 1 == 1 {
                                rows[a] |= 1 << m;
                            }
                        }
                        rows.push(u);
                        next.push(rows);
                    }
                    if u == 0 {
                        break;
                    }
                    u = (u - 1) & allowed_u;
                }
            }
        }
        level = next;
    }
    let mut pops: Vec<Pop> = level.into_iter().map(|up| Pop { k, up }).collect();
    pops.sort();
    pops
}
