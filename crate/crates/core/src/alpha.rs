//! Mixed-radix digit expansions over a divisible base `a₀ = 1 | a₁ | a₂ | …`,
//! α-supports, carry analysis, and checkers for the digit identities used
//! when splitting sums of terms with disjoint α-support.
//!
//! A base is a finite truncation `a₀..a_M`. Digit `i` ranges over
//! `0..r_i` with `r_i = a_{i+1}/a_i`; the top radix `r_M` is not determined by
//! the listed terms, so it is either given explicitly or taken equal to
//! `r_{M-1}`. Numbers below the capacity `a_{M+1} = a_M·r_M` are representable.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::finset::{FinSet, MAX_UNIVERSE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphaError {
    #[error("base must list at least {0} terms")]
    TooFewTerms(usize),
    #[error("base has more than {MAX_UNIVERSE} positions")]
    TooManyTerms,
    #[error("base must start with 1, found {0}")]
    FirstTermNotOne(u64),
    #[error("a_{index} does not divide a_{next}", next = index + 1)]
    NotDivisible { index: usize },
    #[error("radix at position {index} is below 2")]
    RadixTooSmall { index: usize },
    #[error("base capacity overflows 64 bits")]
    CapacityOverflow,
    #[error("{value} is not representable below the capacity {capacity}")]
    Overflow { value: u64, capacity: u64 },
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
    #[error("z = {z} is not below a_n = {bound}")]
    BadZ { z: u64, bound: u64 },
    #[error("invalid digits: {0}")]
    InvalidDigits(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(LemmaClause),
    #[error("{0} is not a finite sum of the sequence")]
    NotInFS(u64),
    #[error("support of {sum} did not split into the summands")]
    SplitFailed { sum: u64 },
}

/// The hypothesis of the trivial-sum split that an input violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaClause {
    /// `a`, `b` and every term must be positive.
    NonPositive,
    /// Terms must have pairwise disjoint α-supports.
    SupportsOverlap,
    /// Terms must be listed with increasing α-min.
    MinNotIncreasing,
    /// No term has α-min above α-max(a), so `m` is undefined.
    NoSeparatingTerm,
    /// α-min(b) does not exceed α-max(x_m).
    SummandTooLow,
    /// Some `x_i` with `i < m` reaches up to α-min(b). The split needs every
    /// term meeting `a` to stay below `b`; with interleaved supports the
    /// conclusion fails, e.g. binary `x = (5, 2)`, `a = 1`, `b = 4`.
    EarlyTermReachesB,
}

impl fmt::Display for LemmaClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaClause::NonPositive => "summands and terms must be positive",
            LemmaClause::SupportsOverlap => "terms must have pairwise disjoint alpha-supports",
            LemmaClause::MinNotIncreasing => "terms must be listed with increasing alpha-min",
            LemmaClause::NoSeparatingTerm => "no term lies above alpha-max(a); m is undefined",
            LemmaClause::SummandTooLow => "alpha-min(b) must exceed alpha-max(x_m)",
            LemmaClause::EarlyTermReachesB => "alpha-min(b) must exceed alpha-max(x_i) for every i < m",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibleBase {
    terms: Vec<u64>,
    /// `radices[i] = a_{i+1}/a_i`; the last entry is the top radix.
    radices: Vec<u64>,
}

impl DivisibleBase {
    /// Listed terms `a₀..a_M`, with the top radix repeating the last listed one.
    pub fn new(terms: Vec<u64>) -> Result<Self, AlphaError> {
        if terms.len() < 2 {
            return Err(AlphaError::TooFewTerms(2));
        }
        let n = terms.len();
        let top = terms[n - 1] / terms[n - 2].max(1);
        Self::with_top_radix(terms, top)
    }

    pub fn with_top_radix(terms: Vec<u64>, top_radix: u64) -> Result<Self, AlphaError> {
        if terms.is_empty() {
            return Err(AlphaError::TooFewTerms(1));
        }
        if terms.len() > MAX_UNIVERSE {
            return Err(AlphaError::TooManyTerms);
        }
        if terms[0] != 1 {
            return Err(AlphaError::FirstTermNotOne(terms[0]));
        }
        let mut radices = Vec::with_capacity(terms.len());
        for (index, pair) in terms.windows(2).enumerate() {
            if pair[1] % pair[0] != 0 {
                return Err(AlphaError::NotDivisible { index });
            }
            if pair[1] / pair[0] < 2 {
                return Err(AlphaError::RadixTooSmall { index });
            }
            radices.push(pair[1] / pair[0]);
        }
        if top_radix < 2 {
            return Err(AlphaError::RadixTooSmall { index: terms.len() - 1 });
        }
        terms[terms.len() - 1]
            .checked_mul(top_radix)
            .ok_or(AlphaError::CapacityOverflow)?;
        radices.push(top_radix);
        Ok(DivisibleBase { terms, radices })
    }

    /// `1, 2, 4, …, 2^{positions-1}` with top radix 2.
    pub fn powers_of_two(positions: usize) -> Result<Self, AlphaError> {
        if positions == 0 {
            return Err(AlphaError::TooFewTerms(1));
        }
        if positions > 63 {
            return Err(AlphaError::CapacityOverflow);
        }
        Self::with_top_radix((0..positions).map(|i| 1u64 << i).collect(), 2)
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    /// Number of digit positions, `M + 1`.
    pub fn positions(&self) -> usize {
        self.terms.len()
    }

    /// `a_{M+1}`: every representable number is below this.
    pub fn capacity(&self) -> u64 {
        self.terms[self.terms.len() - 1] * self.radices[self.radices.len() - 1]
    }

    /// `a_i` for `i ≤ M + 1`.
    pub fn term(&self, i: usize) -> Option<u64> {
        match i.cmp(&self.terms.len()) {
            std::cmp::Ordering::Less => Some(self.terms[i]),
            std::cmp::Ordering::Equal => Some(self.capacity()),
            std::cmp::Ordering::Greater => None,
        }
    }

    pub fn is_binary(&self) -> bool {
        self.radices.iter().all(|&r| r == 2)
    }

    fn representable(&self, value: u64) -> Result<(), AlphaError> {
        if value < self.capacity() {
            Ok(())
        } else {
            Err(AlphaError::Overflow { value, capacity: self.capacity() })
        }
    }

    fn digit(&self, value: u64, i: usize) -> u64 {
        value / self.terms[i] % self.radices[i]
    }

    fn support_of(&self, value: u64) -> FinSet {
        (0..self.positions()).filter(|&i| self.digit(value, i) != 0).collect()
    }

    fn check_digits(&self, digits: &[u64]) -> Result<(), AlphaError> {
        match digits.iter().zip(&self.radices).position(|(d, r)| d >= r) {
            Some(i) => Err(AlphaError::InvalidDigits(format!(
                "digit {} at position {i} is not below radix {}",
                digits[i], self.radices[i]
            ))),
            None => Ok(()),
        }
    }

    fn weighted(&self, digits: &[u64]) -> u128 {
        digits
            .iter()
            .zip(&self.terms)
            .map(|(&d, &a)| u128::from(d) * u128::from(a))
            .sum()
    }
}

/// The digit vector `α(n)` of a number relative to a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaExpansion<'a> {
    base: &'a DivisibleBase,
    digits: Vec<u64>,
}

impl<'a> AlphaExpansion<'a> {
    pub fn base(&self) -> &'a DivisibleBase {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `Σ d_i·a_i`.
    pub fn value(&self) -> u64 {
        self.digits.iter().zip(&self.base.terms).map(|(d, a)| d * a).sum()
    }

    /// Positions with a nonzero digit.
    pub fn support(&self) -> FinSet {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn alpha_min(&self) -> Option<usize> {
        self.support().first()
    }

    pub fn alpha_max(&self) -> Option<usize> {
        self.support().last()
    }
}

impl fmt::Display for AlphaExpansion<'_> {
    /// Least significant digit first: `d0:d1:…:dM`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// The unique digit vector of `n`.
pub fn expand(base: &DivisibleBase, n: u64) -> Result<AlphaExpansion<'_>, AlphaError> {
    base.representable(n)?;
    let digits = (0..base.positions()).map(|i| base.digit(n, i)).collect();
    Ok(AlphaExpansion { base, digits })
}

/// Whether `α(m) + α(n)` digitwise is already a valid expansion, i.e.
/// adding `m` and `n` produces no carry.
pub fn no_carry_add(base: &DivisibleBase, m: u64, n: u64) -> Result<bool, AlphaError> {
    base.representable(m)?;
    base.representable(n)?;
    let sum = m.checked_add(n).ok_or(AlphaError::Overflow { value: u64::MAX, capacity: base.capacity() })?;
    base.representable(sum)?;
    Ok((0..base.positions()).all(|i| base.digit(m, i) + base.digit(n, i) < base.radices[i]))
}

/// Whether the terms have pairwise disjoint α-supports.
pub fn disjoint_alpha_support(base: &DivisibleBase, x: &[u64]) -> Result<bool, AlphaError> {
    let mut seen = FinSet::EMPTY;
    let mut disjoint = true;
    for &term in x {
        base.representable(term)?;
        let supp = base.support_of(term);
        disjoint &= seen.is_disjoint(supp);
        seen = seen.union(supp);
    }
    Ok(disjoint)
}

/// The x-support `H` of `a + b` together with its split into the terms
/// meeting the support of `a` and those meeting the support of `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialSplit {
    pub h: FinSet,
    pub h_a: FinSet,
    pub h_b: FinSet,
    /// Least index whose term lies entirely above α-max(a).
    pub m: usize,
}

/// Splits the x-support of `a + b` into x-supports of `a` and of `b`.
///
/// Requires pairwise disjoint α-supports listed with increasing α-min, a
/// term `x_m` above α-max(a), and α-min(b) above α-max(x_i) for all `i ≤ m`.
pub fn trivial_sum_split(base: &DivisibleBase, x: &[u64], a: u64, b: u64) -> Result<TrivialSplit, AlphaError> {
    use LemmaClause::*;
    if a == 0 || b == 0 || x.contains(&0) {
        return Err(AlphaError::PreconditionFailed(NonPositive));
    }
    let supports: Vec<FinSet> = x
        .iter()
        .map(|&t| base.representable(t).map(|_| base.support_of(t)))
        .collect::<Result<_, _>>()?;
    if !disjoint_alpha_support(base, x)? {
        return Err(AlphaError::PreconditionFailed(SupportsOverlap));
    }
    if supports.windows(2).any(|w| w[0].first() >= w[1].first()) {
        return Err(AlphaError::PreconditionFailed(MinNotIncreasing));
    }
    base.representable(a)?;
    base.representable(b)?;
    let sum = a.checked_add(b).ok_or(AlphaError::Overflow { value: u64::MAX, capacity: base.capacity() })?;
    base.representable(sum)?;

    let supp_a = base.support_of(a);
    let supp_b = base.support_of(b);
    let max_a = supp_a.last().expect("a > 0");
    let m = supports
        .iter()
        .position(|s| s.first().expect("terms positive") > max_a)
        .ok_or(AlphaError::PreconditionFailed(NoSeparatingTerm))?;
    if supp_b.first().expect("b > 0") <= supports[m].last().expect("terms positive") {
        return Err(AlphaError::PreconditionFailed(SummandTooLow));
    }
    let b_low = supp_b.first().expect("b > 0");
    if supports[..m].iter().any(|s| s.last().expect("terms positive") >= b_low) {
        return Err(AlphaError::PreconditionFailed(EarlyTermReachesB));
    }

    // disjoint supports add without carrying, so a representation of the sum
    // uses exactly the terms whose support lies inside the sum's support
    let supp_sum = base.support_of(sum);
    let h: FinSet = (0..x.len()).filter(|&i| supports[i].is_subset(supp_sum)).collect();
    let total: u128 = h.iter().map(|i| u128::from(x[i])).sum();
    if h.is_empty() || total != u128::from(sum) {
        return Err(AlphaError::NotInFS(sum));
    }
    let h_a: FinSet = h.iter().filter(|&i| !supports[i].is_disjoint(supp_a)).collect();
    let h_b: FinSet = h.iter().filter(|&i| !supports[i].is_disjoint(supp_b)).collect();
    let part_sum = |part: FinSet| part.iter().map(|i| x[i]).sum::<u64>();
    let splits = h_a.is_disjoint(h_b)
        && h_a.union(h_b) == h
        && part_sum(h_a) == a
        && part_sum(h_b) == b;
    if !splits {
        return Err(AlphaError::SplitFailed { sum });
    }
    Ok(TrivialSplit { h, h_a, h_b, m })
}

/// Membership of `w` in `z + a_n·ℕ` (with `ℕ = {1, 2, …}`), decided by
/// comparing the low `n` digits of `w` and `z`. `w = z` is excluded.
pub fn u_zn_member(base: &DivisibleBase, z: u64, n: usize, w: u64) -> Result<bool, AlphaError> {
    if n >= base.positions() {
        return Err(AlphaError::OutOfRange { index: n, limit: base.positions() - 1 });
    }
    let a_n = base.terms[n];
    if z >= a_n {
        return Err(AlphaError::BadZ { z, bound: a_n });
    }
    base.representable(w)?;
    Ok(w > z && (0..n).all(|i| base.digit(w, i) == base.digit(z, i)))
}

/// `Σ_{k<i≤n} (r_i − 1)·a_i + a_{k+1} = a_{n+1}` for `k ≤ n < M`.
pub fn telescoping_check(base: &DivisibleBase, k: usize, n: usize) -> Result<bool, AlphaError> {
    let top = base.positions() - 1;
    if n >= top {
        return Err(AlphaError::OutOfRange { index: n, limit: top.saturating_sub(1) });
    }
    if k > n {
        return Err(AlphaError::OutOfRange { index: k, limit: n });
    }
    let cascade: u128 = (k + 1..=n)
        .map(|i| u128::from(base.radices[i] - 1) * u128::from(base.terms[i]))
        .sum();
    Ok(cascade + u128::from(base.terms[k + 1]) == u128::from(base.terms[n + 1]))
}

/// The shift that turns a number with maximal digits on `(k, n]` into a
/// multiple of `a_{n+1}`.
///
/// With `low = α(q)↾(k+1)`, `z = a_{k+1} − Σ_{i≤k} low_i·a_i` and
/// `w = b·a_{n+1} + Σ_{k<i≤n} (r_i − 1)a_i + Σ_{i≤k} low_i·a_i`, checks
/// `w + z = (b + 1)·a_{n+1}`. Both sums over the low digits run over `i ≤ k`.
pub fn maximal_tail_shift(base: &DivisibleBase, low: &[u64], n: usize, b: u64) -> Result<bool, AlphaError> {
    if low.is_empty() {
        return Err(AlphaError::InvalidDigits("no low digits".into()));
    }
    let k = low.len() - 1;
    if n < k || n >= base.positions() {
        return Err(AlphaError::OutOfRange { index: n, limit: base.positions() - 1 });
    }
    base.check_digits(low)?;
    let low_value = base.weighted(low);
    let a = |i: usize| u128::from(base.term(i).expect("index checked"));
    let z = a(k + 1) - low_value;
    let tail: u128 = (k + 1..=n).map(|i| u128::from(base.radices[i] - 1) * a(i)).sum();
    let w = u128::from(b) * a(n + 1) + tail + low_value;
    Ok(w + z == (u128::from(b) + 1) * a(n + 1))
}

/// `0 < Σ_{i<s₂} u_i·a_i + Σ_{i≤s₂} v_i·a_i < a_{s₂+1}` for valid digit
/// vectors whose top digit `v_{s₂}` is at most `r_{s₂} − 2`.
pub fn carry_bound_check(base: &DivisibleBase, s2: usize, u: &[u64], v: &[u64]) -> Result<bool, AlphaError> {
    if s2 >= base.positions() {
        return Err(AlphaError::OutOfRange { index: s2, limit: base.positions() - 1 });
    }
    if u.len() != s2 || v.len() != s2 + 1 {
        return Err(AlphaError::InvalidDigits(format!(
            "expected {s2} low digits and {} high digits, got {} and {}",
            s2 + 1,
            u.len(),
            v.len()
        )));
    }
    base.check_digits(u)?;
    base.check_digits(v)?;
    if v[s2] + 2 > base.radices[s2] {
        return Err(AlphaError::InvalidDigits(format!(
            "digit {} at position {s2} is maximal",
            v[s2]
        )));
    }
    if u.iter().chain(v).all(|&d| d == 0) {
        return Err(AlphaError::InvalidDigits("both digit vectors are zero".into()));
    }
    let total = base.weighted(u) + base.weighted(v);
    let bound = u128::from(base.term(s2 + 1).expect("s2 checked"));
    Ok(0 < total && total < bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial_like() -> DivisibleBase {
        DivisibleBase::new(vec![1, 2, 6, 24, 120]).unwrap()
    }

    fn set(xs: &[usize]) -> FinSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn base_validation() {
        assert_eq!(DivisibleBase::new(vec![1]), Err(AlphaError::TooFewTerms(2)));
        assert_eq!(DivisibleBase::new(vec![2, 4]), Err(AlphaError::FirstTermNotOne(2)));
        assert_eq!(DivisibleBase::new(vec![1, 2, 5]), Err(AlphaError::NotDivisible { index: 1 }));
        // the radix-1 position of the factorials
        assert_eq!(DivisibleBase::new(vec![1, 1, 2, 6]), Err(AlphaError::RadixTooSmall { index: 0 }));
        let b = factorial_like();
        assert_eq!(b.radices(), &[2, 3, 4, 5, 5]);
        assert_eq!(b.capacity(), 600);
        assert_eq!(DivisibleBase::powers_of_two(4).unwrap().capacity(), 16);
    }

    #[test]
    fn expand_examples() {
        let bin = DivisibleBase::powers_of_two(4).unwrap();
        let e = expand(&bin, 13).unwrap();
        assert_eq!(e.digits(), &[1, 0, 1, 1]);
        assert_eq!(e.support(), set(&[0, 2, 3]));
        assert_eq!(e.to_string(), "1:0:1:1");

        let b = DivisibleBase::new(vec![1, 2, 6, 24]).unwrap();
        let e = expand(&b, 17).unwrap();
        assert_eq!(e.digits(), &[1, 2, 2, 0]);
        assert_eq!(e.value(), 17);

        let e = expand(&b, 0).unwrap();
        assert_eq!(e.digits(), &[0, 0, 0, 0]);
        assert!(e.support().is_empty());
        assert_eq!(e.alpha_min(), None);

        assert_eq!(expand(&bin, 16), Err(AlphaError::Overflow { value: 16, capacity: 16 }));
    }

    #[test]
    fn round_trip_all_representable() {
        for base in [DivisibleBase::powers_of_two(8).unwrap(), factorial_like()] {
            for n in 0..base.capacity() {
                assert_eq!(expand(&base, n).unwrap().value(), n);
            }
        }
    }

    #[test]
    fn no_carry_examples() {
        let bin = DivisibleBase::powers_of_two(4).unwrap();
        assert_eq!(no_carry_add(&bin, 5, 2), Ok(true));
        assert_eq!(no_carry_add(&bin, 3, 1), Ok(false));
        let b = DivisibleBase::new(vec![1, 2, 6]).unwrap();
        assert_eq!(no_carry_add(&b, 1, 2), Ok(true));
        assert!(matches!(no_carry_add(&bin, 9, 9), Err(AlphaError::Overflow { .. })));
    }

    #[test]
    fn no_carry_means_supports_union() {
        let base = factorial_like();
        for m in 0..120 {
            for n in 0..120 {
                let (em, en) = (expand(&base, m).unwrap(), expand(&base, n).unwrap());
                let digitwise = em.digits().iter().zip(en.digits()).zip(base.radices()).all(|((x, y), r)| x + y < *r);
                assert_eq!(no_carry_add(&base, m, n).unwrap(), digitwise);
                if digitwise {
                    assert_eq!(expand(&base, m + n).unwrap().support(), em.support().union(en.support()));
                }
            }
        }
    }

    #[test]
    fn disjoint_support_examples() {
        let bin = DivisibleBase::powers_of_two(8).unwrap();
        assert_eq!(disjoint_alpha_support(&bin, &[3, 12, 48]), Ok(true));
        assert_eq!(disjoint_alpha_support(&bin, &[3, 6]), Ok(false));
        let b = DivisibleBase::new(vec![1, 2, 6, 24]).unwrap();
        assert_eq!(expand(&b, 4).unwrap().support(), set(&[1]));
        assert_eq!(disjoint_alpha_support(&b, &[1, 4]), Ok(true));
    }

    #[test]
    fn trivial_split_examples() {
        let bin = DivisibleBase::powers_of_two(8).unwrap();
        let x = [3, 12, 48];
        let split = trivial_sum_split(&bin, &x, 3, 48).unwrap();
        assert_eq!(split.h, set(&[0, 2]));
        assert_eq!(split.h_a, set(&[0]));
        assert_eq!(split.h_b, set(&[2]));
        assert_eq!(split.m, 1);
        assert_eq!(trivial_sum_split(&bin, &x, 2, 48), Err(AlphaError::NotInFS(50)));
        assert_eq!(
            trivial_sum_split(&bin, &x, 15, 48),
            Err(AlphaError::PreconditionFailed(LemmaClause::SummandTooLow))
        );
        assert_eq!(
            trivial_sum_split(&bin, &x, 64, 128),
            Err(AlphaError::PreconditionFailed(LemmaClause::NoSeparatingTerm))
        );
        // 5 = 1 + 4 lies in FS(5, 2) but 1 does not
        assert_eq!(
            trivial_sum_split(&bin, &[5, 2], 1, 4),
            Err(AlphaError::PreconditionFailed(LemmaClause::EarlyTermReachesB))
        );
        assert_eq!(
            trivial_sum_split(&bin, &[12, 3], 1, 64),
            Err(AlphaError::PreconditionFailed(LemmaClause::MinNotIncreasing))
        );
        assert_eq!(
            trivial_sum_split(&bin, &[3, 6], 1, 64),
            Err(AlphaError::PreconditionFailed(LemmaClause::SupportsOverlap))
        );
    }

    /// Every subset `H` of three terms, checked against the split.
    #[test]
    fn trivial_split_matches_subset_enumeration() {
        let bin = DivisibleBase::powers_of_two(8).unwrap();
        let x = [3u64, 12, 48];
        for a in 1..64u64 {
            for b in 1..128u64 {
                let Ok(split) = trivial_sum_split(&bin, &x, a, b) else { continue };
                let witnesses: Vec<u64> = (1u64..8)
                    .filter(|h| FinSet::from_bits(*h).iter().map(|i| x[i]).sum::<u64>() == a + b)
                    .collect();
                assert_eq!(witnesses, vec![split.h.bits()]);
            }
        }
    }

    #[test]
    fn u_zn_examples() {
        let bin = DivisibleBase::powers_of_two(6).unwrap();
        assert_eq!(u_zn_member(&bin, 5, 3, 21), Ok(true));
        assert_eq!(u_zn_member(&bin, 5, 3, 20), Ok(false));
        assert_eq!(u_zn_member(&bin, 5, 3, 5), Ok(false));
        assert_eq!(u_zn_member(&bin, 8, 3, 21), Err(AlphaError::BadZ { z: 8, bound: 8 }));
        assert!(matches!(u_zn_member(&bin, 5, 3, 64), Err(AlphaError::Overflow { .. })));
    }

    #[test]
    fn u_zn_is_a_congruence_class() {
        for base in [DivisibleBase::powers_of_two(7).unwrap(), factorial_like()] {
            for n in 0..base.positions() {
                let a_n = base.terms()[n];
                for z in 0..a_n {
                    for w in 0..base.capacity() {
                        let expected = w > z && (w - z) % a_n == 0;
                        assert_eq!(u_zn_member(&base, z, n, w).unwrap(), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn telescoping_examples() {
        let bin = DivisibleBase::powers_of_two(5).unwrap();
        assert_eq!(telescoping_check(&bin, 1, 3), Ok(true));
        // (3-1)·2 + (4-1)·6 + a_1 = 4 + 18 + 2 = 24 = a_3
        assert_eq!(telescoping_check(&factorial_like(), 0, 2), Ok(true));
        assert_eq!(telescoping_check(&factorial_like(), 2, 2), Ok(true));
        assert!(matches!(telescoping_check(&factorial_like(), 0, 4), Err(AlphaError::OutOfRange { .. })));
        assert!(matches!(telescoping_check(&factorial_like(), 3, 2), Err(AlphaError::OutOfRange { .. })));
    }

    #[test]
    fn maximal_tail_shift_holds() {
        let base = factorial_like();
        for k in 0..base.positions() {
            let radices = &base.radices()[..=k];
            let count: u64 = radices.iter().product();
            for code in 0..count {
                let mut c = code;
                let low: Vec<u64> = radices.iter().map(|r| { let d = c % r; c /= r; d }).collect();
                for n in k..base.positions() {
                    for b in 0..3 {
                        assert_eq!(maximal_tail_shift(&base, &low, n, b), Ok(true));
                    }
                }
            }
        }
    }

    #[test]
    fn carry_bound_examples() {
        let bin = DivisibleBase::powers_of_two(8).unwrap();
        assert_eq!(carry_bound_check(&bin, 2, &[1, 1], &[1, 1, 0]), Ok(true));
        assert!(matches!(carry_bound_check(&bin, 2, &[0, 0], &[0, 0, 0]), Err(AlphaError::InvalidDigits(_))));
        // top digit 1 is maximal in binary
        assert!(matches!(carry_bound_check(&bin, 2, &[0, 0], &[0, 0, 1]), Err(AlphaError::InvalidDigits(_))));
        let b = DivisibleBase::new(vec![1, 2, 6, 24]).unwrap();
        assert_eq!(carry_bound_check(&b, 2, &[1, 1], &[1, 2, 2]), Ok(true));
        assert!(matches!(carry_bound_check(&b, 2, &[2, 0], &[0, 0, 0]), Err(AlphaError::InvalidDigits(_))));
    }
}
