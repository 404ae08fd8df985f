//! Finite sets of small non-negative integers and the partial semigroup of
//! nonempty finite sets under disjoint union.
//!
//! A [`FinSet`] is a single machine word: bit `i` is set iff `i` is a member.
//! The derived ordering compares the words as integers, which is colex order
//! (sets are ordered by their maximum first). Search code relies on this when
//! it talks about the "least" family of sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest universe a [`FinSet`] can address.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinSetError {
    #[error("element {element} is outside the universe [0, {bound})")]
    OutOfUniverse { element: usize, bound: usize },
    #[error("universe bound {0} exceeds {MAX_UNIVERSE}")]
    UniverseTooLarge(usize),
    #[error("malformed set literal `{0}`")]
    Parse(String),
}

/// Why the partial operation `s · t` is not defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum UnionError {
    /// `s ∩ t ≠ ∅`. Not a fault: the partial operation is simply undefined.
    #[error("sets overlap; disjoint union undefined")]
    Undefined,
    #[error("empty operand; the empty set is not an element of the partial semigroup")]
    EmptyOperand,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSet(u64);

impl FinSet {
    pub const EMPTY: FinSet = FinSet(0);

    pub fn empty() -> Self {
        Self::EMPTY
    }

    /// Builds a set over the default universe `[0, 64)`.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self, FinSetError> {
        Self::with_universe(MAX_UNIVERSE, elements)
    }

    /// Builds a set whose elements must all lie below `bound`.
    pub fn with_universe<I: IntoIterator<Item = usize>>(
        bound: usize,
        elements: I,
    ) -> Result<Self, FinSetError> {
        if bound > MAX_UNIVERSE {
            return Err(FinSetError::UniverseTooLarge(bound));
        }
        let mut bits = 0u64;
        for element in elements {
            if element >= bound {
                return Err(FinSetError::OutOfUniverse { element, bound });
            }
            bits |= 1 << element;
        }
        Ok(FinSet(bits))
    }

    pub const fn from_bits(bits: u64) -> Self {
        FinSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// # Panics
    /// If `i >= 64`.
    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_UNIVERSE, "element {i} out of range");
        FinSet(1 << i)
    }

    /// `{0, 1, ..., n-1}`.
    pub fn below(n: usize) -> Self {
        assert!(n <= MAX_UNIVERSE, "bound {n} out of range");
        if n == MAX_UNIVERSE {
            FinSet(u64::MAX)
        } else {
            FinSet((1u64 << n) - 1)
        }
    }

    /// The closed interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        if lo > hi {
            return Self::EMPTY;
        }
        FinSet(Self::below(hi + 1).0 & !Self::below(lo).0)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_UNIVERSE && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        FinSet(self.0 | Self::singleton(i).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn union(self, other: Self) -> Self {
        FinSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        FinSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        FinSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }
}

/// Ascending iterator over the members of a [`FinSet`].
#[derive(Debug, Clone)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

impl IntoIterator for FinSet {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

impl FromIterator<usize> for FinSet {
    /// # Panics
    /// If an element is `>= 64`; use [`FinSet::from_elements`] for checked input.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(FinSet::EMPTY, FinSet::with)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FinSet {
    type Err = FinSetError;

    /// Parses the canonical literal `{0,2,5}`: strictly increasing, comma separated.
    fn from_str(s: &str) -> Result<Self, FinSetError> {
        let bad = || FinSetError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?
            .trim();
        if inner.is_empty() {
            return Ok(FinSet::EMPTY);
        }
        let mut bits = 0u64;
        let mut last: Option<usize> = None;
        for part in inner.split(',') {
            let i: usize = part.trim().parse().map_err(|_| bad())?;
            if last.is_some_and(|l| l >= i) {
                return Err(bad());
            }
            if i >= MAX_UNIVERSE {
                return Err(FinSetError::OutOfUniverse { element: i, bound: MAX_UNIVERSE });
            }
            bits |= 1 << i;
            last = Some(i);
        }
        Ok(FinSet(bits))
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The partial operation of 𝔽: `s · t = s ∪ t`, defined only when `s ∩ t = ∅`.
pub fn disjoint_union(s: FinSet, t: FinSet) -> Result<FinSet, UnionError> {
    if s.is_empty() || t.is_empty() {
        return Err(UnionError::EmptyOperand);
    }
    if !s.is_disjoint(t) {
        return Err(UnionError::Undefined);
    }
    Ok(s.union(t))
}

/// `t ∈ σ(s)`. False for empty operands.
pub fn is_compatible(s: FinSet, t: FinSet) -> bool {
    !s.is_empty() && !t.is_empty() && s.is_disjoint(t)
}

/// `max(v) < min(w)`. False for empty operands.
pub fn is_ordered_pair(v: FinSet, w: FinSet) -> bool {
    match (v.last(), w.first()) {
        (Some(hi), Some(lo)) => hi < lo,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> FinSet {
        FinSet::from_elements(xs.iter().copied()).unwrap()
    }

    #[test]
    fn disjoint_union_examples() {
        assert_eq!(disjoint_union(set(&[0, 2]), set(&[1, 3])), Ok(set(&[0, 1, 2, 3])));
        assert_eq!(disjoint_union(set(&[0, 1]), set(&[1, 2])), Err(UnionError::Undefined));
        assert_eq!(disjoint_union(set(&[5]), set(&[0, 1, 2])), Ok(set(&[0, 1, 2, 5])));
        assert_eq!(disjoint_union(FinSet::EMPTY, set(&[1])), Err(UnionError::EmptyOperand));
    }

    #[test]
    fn compatibility_examples() {
        assert!(is_compatible(set(&[0]), set(&[1])));
        assert!(!is_compatible(set(&[0]), set(&[0])));
        assert!(is_compatible(set(&[1, 3]), set(&[2, 4])));
    }

    #[test]
    fn ordered_pair_examples() {
        assert!(is_ordered_pair(set(&[0, 1]), set(&[2, 3])));
        assert!(!is_ordered_pair(set(&[0, 3]), set(&[2, 5])));
        assert!(!is_ordered_pair(set(&[2]), set(&[2])));
        // compatible but not ordered
        assert!(is_compatible(set(&[0, 2]), set(&[1, 3])));
        assert!(!is_ordered_pair(set(&[0, 2]), set(&[1, 3])));
    }

    #[test]
    fn universe_bound_is_enforced() {
        assert_eq!(
            FinSet::with_universe(5, [1, 5]),
            Err(FinSetError::OutOfUniverse { element: 5, bound: 5 })
        );
        assert!(FinSet::with_universe(65, [1]).is_err());
        assert_eq!(FinSet::with_universe(5, [4, 0]).unwrap(), set(&[0, 4]));
    }

    #[test]
    fn queries_agree_with_elements() {
        let s = set(&[3, 7, 63]);
        assert_eq!(s.first(), Some(3));
        assert_eq!(s.last(), Some(63));
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 7, 63]);
        assert_eq!(FinSet::EMPTY.first(), None);
        assert_eq!(FinSet::interval(2, 4), set(&[2, 3, 4]));
        assert_eq!(FinSet::interval(4, 2), FinSet::EMPTY);
        assert_eq!(FinSet::below(64).len(), 64);
    }

    #[test]
    fn text_form() {
        assert_eq!(set(&[0, 2, 5]).to_string(), "{0,2,5}");
        assert_eq!(FinSet::EMPTY.to_string(), "{}");
        assert_eq!("{0, 2,5}".parse::<FinSet>(), Ok(set(&[0, 2, 5])));
        assert_eq!("{}".parse::<FinSet>(), Ok(FinSet::EMPTY));
        assert!("{2,1}".parse::<FinSet>().is_err());
        assert!("{1,1}".parse::<FinSet>().is_err());
        assert!("0,1".parse::<FinSet>().is_err());
        assert!("{64}".parse::<FinSet>().is_err());
        let json = serde_json::to_string(&set(&[1, 4])).unwrap();
        assert_eq!(json, "\"{1,4}\"");
        assert_eq!(serde_json::from_str::<FinSet>(&json).unwrap(), set(&[1, 4]));
    }

    /// All nonempty subsets of a universe of five points, three at a time.
    #[test]
    fn partial_associativity_exhaustive() {
        let all: Vec<FinSet> = (1u64..32).map(FinSet::from_bits).collect();
        for &s in &all {
            for &t in &all {
                let st = disjoint_union(s, t);
                assert_eq!(st, disjoint_union(t, s));
                for &v in &all {
                    let left = st.and_then(|st| disjoint_union(st, v));
                    let right = disjoint_union(t, v).and_then(|tv| disjoint_union(s, tv));
                    assert_eq!(left.ok(), right.ok(), "{s} {t} {v}");
                }
                if is_ordered_pair(s, t) {
                    assert!(is_compatible(s, t));
                }
            }
        }
    }
}
