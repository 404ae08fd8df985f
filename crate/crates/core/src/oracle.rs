//! Brute-force reference implementations.
//!
//! Everything here is written from the definitions with plain loops and
//! shares no code with the optimized modules: only the data types
//! ([`FinSet`], [`Coloring`]) are borrowed. Results are slow but obviously
//! right, which is the point. Nothing in this module is parallel.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::finset::FinSet;
use crate::search::Coloring;

/// Longest sequence [`naive_decode`] will enumerate.
pub const MAX_DECODE_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("sequence of length {len} exceeds the oracle limit of {max}")]
    TooLong { len: usize, max: usize },
    #[error("enumeration would exceed the budget of {0} steps")]
    BudgetExceeded(u64),
    #[error("invalid base: {0}")]
    BadBase(String),
}

fn index_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn masked_sum(x: &[u64], mask: u64) -> u64 {
    index_set(mask).into_iter().map(|i| x[i]).sum()
}

/// Every index set whose terms sum to `z`, in increasing bitmask order.
pub fn naive_decode(x: &[u64], z: u64) -> Result<Vec<Vec<usize>>, OracleError> {
    if x.len() > MAX_DECODE_LEN {
        return Err(OracleError::TooLong { len: x.len(), max: MAX_DECODE_LEN });
    }
    Ok((1u64..1 << x.len())
        .filter(|&m| masked_sum(x, m) == z)
        .map(index_set)
        .collect())
}

/// All finite sums of `x`, without repetitions.
pub fn naive_fs(x: &[u64]) -> Result<BTreeSet<u64>, OracleError> {
    if x.len() > MAX_DECODE_LEN {
        return Err(OracleError::TooLong { len: x.len(), max: MAX_DECODE_LEN });
    }
    Ok((1u64..1 << x.len()).map(|m| masked_sum(x, m)).collect())
}

/// `x_n > g · (x_0 + … + x_{n−1})` for every `n`.
pub fn naive_growth(x: &[u64], g: u64) -> bool {
    (0..x.len()).all(|n| {
        let before: u128 = x[..n].iter().map(|&v| v as u128).sum();
        x[n] as u128 > g as u128 * before
    })
}

/// Every finite sum of `x` with all index sets producing it.
pub fn naive_decode_all(x: &[u64]) -> Result<std::collections::BTreeMap<u64, Vec<Vec<usize>>>, OracleError> {
    if x.len() > MAX_DECODE_LEN {
        return Err(OracleError::TooLong { len: x.len(), max: MAX_DECODE_LEN });
    }
    let mut all = std::collections::BTreeMap::new();
    for m in 1u64..1 << x.len() {
        all.entry(masked_sum(x, m)).or_insert_with(Vec::new).push(index_set(m));
    }
    Ok(all)
}

/// Whether every two finite sums with overlapping index sets add up to a
/// number outside the finite sums. Compares all pairs of index sets.
pub fn naive_unique_sums(x: &[u64]) -> Result<bool, OracleError> {
    if x.len() > 10 {
        return Err(OracleError::TooLong { len: x.len(), max: 10 });
    }
    let fs = naive_fs(x)?;
    let full = 1u64 << x.len();
    for f in 1..full {
        for g in 1..full {
            if f & g != 0 && fs.contains(&(masked_sum(x, f) + masked_sum(x, g))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether all `2^N − 1` finite sums are distinct.
pub fn naive_distinct_sums(x: &[u64]) -> Result<bool, OracleError> {
    Ok(naive_fs(x)?.len() == (1usize << x.len()) - 1)
}

/// Digits of `v` against `terms`, peeled off from the top. The top digit is
/// left unbounded.
pub fn naive_digits(terms: &[u64], v: u64) -> Vec<u64> {
    let mut rest = v;
    let mut digits = vec![0; terms.len()];
    for i in (0..terms.len()).rev() {
        digits[i] = rest / terms[i];
        rest -= digits[i] * terms[i];
    }
    digits
}

fn digit_support(terms: &[u64], v: u64) -> u64 {
    naive_digits(terms, v)
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn check_base(terms: &[u64]) -> Result<(), OracleError> {
    if terms.len() < 2 || terms[0] != 1 {
        return Err(OracleError::BadBase("need at least two terms starting at 1".into()));
    }
    for w in terms.windows(2) {
        if w[1] % w[0] != 0 || w[1] / w[0] < 2 {
            return Err(OracleError::BadBase(format!("{} does not properly divide {}", w[0], w[1])));
        }
    }
    Ok(())
}

/// `a_p`, extending the listed terms by one step with the last ratio.
fn term_at(terms: &[u64], p: usize) -> Result<u64, OracleError> {
    let len = terms.len();
    match p.cmp(&len) {
        std::cmp::Ordering::Less => Ok(terms[p]),
        std::cmp::Ordering::Equal => Ok(terms[len - 1] * (terms[len - 1] / terms[len - 2])),
        std::cmp::Ordering::Greater => Err(OracleError::BadBase(format!("position bound {p} exceeds the base"))),
    }
}

/// Which form of the trivial-sum hypothesis on `b` to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaHypothesis {
    /// Only `x_m` has to lie below `b`. Admits counterexamples when term
    /// supports interleave.
    AsStated,
    /// Every `x_i` with `i ≤ m` lies below `b`; this is what the splitting
    /// argument uses.
    EarlyTermsBelowB,
}

/// One `(x, a, b)` meeting the hypotheses of the trivial-sum lemma, with
/// `a + b ∈ FS(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaInstance {
    pub x: Vec<u64>,
    pub a: u64,
    pub b: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCounterexample {
    #[serde(flatten)]
    pub instance: LemmaInstance,
    pub a_in_fs: bool,
    pub b_in_fs: bool,
}

/// Walks every instance within the bounds: `x` has at most `k` positive
/// terms using digit positions below `p`, with pairwise disjoint supports
/// listed by increasing least position; `a, b ∈ [1, bound)`; some term lies
/// wholly above the top position of `a`, and the first such term `x_m` lies
/// wholly below the least position of `b` (with [`LemmaHypothesis::EarlyTermsBelowB`],
/// so do all earlier terms); and `a + b ∈ FS(x)`.
///
/// Returns the number of instances. `budget` caps the `(x, f, a)` triples
/// examined.
pub fn for_each_lemma_instance<F: FnMut(&LemmaInstance)>(
    terms: &[u64],
    p: usize,
    k: usize,
    bound: u64,
    hypothesis: LemmaHypothesis,
    budget: u64,
    mut visit: F,
) -> Result<u64, OracleError> {
    check_base(terms)?;
    let top = term_at(terms, p)?;
    let supports: Vec<u64> = (0..top.max(bound)).map(|v| digit_support(terms, v)).collect();
    let low = |s: u64| s.trailing_zeros();
    let high = |s: u64| 63 - s.leading_zeros();

    let mut sequences: Vec<Vec<u64>> = Vec::new();
    let mut stack: Vec<Vec<u64>> = (1..top).map(|v| vec![v]).collect();
    stack.reverse();
    while let Some(seq) = stack.pop() {
        if seq.len() < k {
            let used = seq.iter().fold(0, |acc, &v| acc | supports[v as usize]);
            let last_low = low(supports[*seq.last().unwrap() as usize]);
            for v in (1..top).rev() {
                let s = supports[v as usize];
                if s & used == 0 && low(s) > last_low {
                    let mut next = seq.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
        }
        sequences.push(seq);
    }

    let mut steps = 0u64;
    let mut instances = 0u64;
    for x in sequences {
        let fs = naive_fs(&x)?;
        for &f in &fs {
            for a in 1..f.min(bound) {
                steps += 1;
                if steps > budget {
                    return Err(OracleError::BudgetExceeded(budget));
                }
                let b = f - a;
                if b >= bound {
                    continue;
                }
                let a_top = high(supports[a as usize]);
                let Some(m) = x.iter().position(|&t| low(supports[t as usize]) > a_top) else {
                    continue;
                };
                let b_low = low(supports[b as usize]);
                let last_checked = match hypothesis {
                    LemmaHypothesis::AsStated => m..=m,
                    LemmaHypothesis::EarlyTermsBelowB => 0..=m,
                };
                if x[last_checked].iter().any(|&t| b_low <= high(supports[t as usize])) {
                    continue;
                }
                instances += 1;
                visit(&LemmaInstance { x: x.clone(), a, b });
            }
        }
    }
    Ok(instances)
}

/// Every lemma instance within the bounds where `a` or `b` is not a finite
/// sum of `x`. Expected to be empty.
pub fn naive_lemma_sweep(
    terms: &[u64],
    p: usize,
    k: usize,
    bound: u64,
    hypothesis: LemmaHypothesis,
    budget: u64,
) -> Result<Vec<LemmaCounterexample>, OracleError> {
    let mut bad = Vec::new();
    let mut cached: (Vec<u64>, BTreeSet<u64>) = (Vec::new(), BTreeSet::new());
    for_each_lemma_instance(terms, p, k, bound, hypothesis, budget, |inst| {
        if cached.0 != inst.x {
            cached = (inst.x.clone(), naive_fs(&inst.x).expect("short sequence"));
        }
        let fs = &cached.1;
        let (a_in_fs, b_in_fs) = (fs.contains(&inst.a), fs.contains(&inst.b));
        if !(a_in_fs && b_in_fs) {
            bad.push(LemmaCounterexample { instance: inst.clone(), a_in_fs, b_in_fs });
        }
    })?;
    Ok(bad)
}

/// Indices `i` with both `members[i]` and `members[i + 1]` inside `t`.
pub fn naive_pi(members: &[FinSet], t: FinSet) -> Vec<usize> {
    let inside = |m: &FinSet| m.iter().all(|e| t.contains(e));
    (0..members.len().saturating_sub(1))
        .filter(|&i| inside(&members[i]) && inside(&members[i + 1]))
        .collect()
}

/// Indices whose adjacent pair is split between `x` and `y`.
pub fn naive_emerged(members: &[FinSet], x: FinSet, y: FinSet) -> Vec<usize> {
    let inside = |m: &FinSet, s: FinSet| m.iter().all(|e| s.contains(e));
    (0..members.len().saturating_sub(1))
        .filter(|&i| {
            let (a, b) = (&members[i], &members[i + 1]);
            (inside(a, x) && inside(b, y)) || (inside(a, y) && inside(b, x))
        })
        .collect()
}

/// The five set identities for translations and principal shifts, evaluated
/// on membership vectors. `star` is taken with respect to `q`.
pub fn naive_tricks(
    table: &[Vec<usize>],
    a: &[bool],
    b: &[bool],
    s: usize,
    t: usize,
    p: usize,
    q: usize,
) -> [bool; 5] {
    let n = table.len();
    let op = |x: usize, y: usize| table[x][y];
    let translate = |u: usize, set: &[bool]| (0..n).map(|x| set[op(u, x)]).collect::<Vec<_>>();
    let shift = |set: &[bool], point: usize| (0..n).map(|x| set[op(x, point)]).collect::<Vec<_>>();
    let meet = |l: &[bool], r: &[bool]| l.iter().zip(r).map(|(x, y)| *x && *y).collect::<Vec<_>>();
    let star = |set: &[bool]| meet(set, &shift(set, q));

    [
        translate(t, &translate(s, a)) == translate(op(s, t), a),
        translate(s, &shift(a, q)) == shift(&translate(s, a), q),
        shift(&meet(a, b), q) == meet(&shift(a, q), &shift(b, q)),
        star(&translate(s, a)) == translate(s, &star(a)),
        shift(&shift(a, q), p) == shift(a, op(p, q)),
    ]
}

/// All `e` with `e · e = e`.
pub fn naive_idempotents(table: &[Vec<usize>]) -> Vec<usize> {
    (0..table.len()).filter(|&e| table[e][e] == e).collect()
}

/// For an idempotent `p`: `(p ∈ A ⇒ p ∈ A⋆, (A⋆)⋆ = A⋆)` with
/// `A⋆ = A ∩ {x : x·p ∈ A}`.
pub fn naive_galvin(table: &[Vec<usize>], a: &[bool], p: usize) -> (bool, bool) {
    let star = |set: &[bool]| -> Vec<bool> { (0..table.len()).map(|x| set[x] && set[table[x][p]]).collect() };
    let once = star(a);
    let twice = star(&once);
    (!a[p] || once[p], once == twice)
}

/// Maximal runs of member indices strictly between the least and greatest
/// member inside `x` whose members are not inside `x`, as
/// `(first, last, first inside y, last inside y)`.
pub fn naive_gaps(members: &[FinSet], x: FinSet, y: FinSet) -> Vec<(usize, usize, bool, bool)> {
    let inside = |i: usize, s: FinSet| members[i].iter().all(|e| s.contains(e));
    let in_x: Vec<usize> = (0..members.len()).filter(|&i| inside(i, x)).collect();
    let mut gaps = Vec::new();
    for pair in in_x.windows(2) {
        if pair[1] > pair[0] + 1 {
            let (first, last) = (pair[0] + 1, pair[1] - 1);
            gaps.push((first, last, inside(first, y), inside(last, y)));
        }
    }
    gaps
}

/// The four objects of the parity argument, straight from their definitions:
/// `j_i` is the member of `t` containing `s_i`; `x` is the union of `t_{j_i}`
/// over `i ≤ b`; `b₁` is the greatest index with `s_{b₁} ⊆ x`; `y = t_{j_{b₁+1}}`;
/// `z` is the union of `t_{j_i}` over `i < b₁`, minus `x ∪ y`. `None` when
/// some `s_i` with `i ≥ b` lies in no member of `t`, or `b₁ + 1` runs past
/// the family.
pub fn naive_xyz(members: &[FinSet], t: &[FinSet], b: usize) -> Option<(FinSet, usize, FinSet, FinSet)> {
    let n = members.len();
    let home = |i: usize| t.iter().copied().find(|tj| members[i].iter().all(|e| tj.contains(e)));
    if b >= n || (b..n).any(|i| home(i).is_none()) {
        return None;
    }
    let mut x = FinSet::EMPTY;
    for i in 0..=b {
        if let Some(tj) = home(i) {
            x = x.union(tj);
        }
    }
    let b1 = (0..n).rev().find(|&i| members[i].iter().all(|e| x.contains(e)))?;
    if b1 + 1 >= n {
        return None;
    }
    let y = home(b1 + 1)?;
    let mut z = FinSet::EMPTY;
    for i in 0..b1 {
        if let Some(tj) = home(i) {
            z = z.union(tj);
        }
    }
    let z = z.difference(x.union(y));
    Some((x, b1, y, z))
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let current = idx.clone()?;
        let next = {
            let mut v = current.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if v[i] < n - k + i {
                    v[i] += 1;
                    for j in i + 1..k {
                        v[j] = v[j - 1] + 1;
                    }
                    break Some(v);
                }
            }
        };
        idx = next;
        Some(current)
    })
}

/// Least `x_0 < … < x_{k−1}` in `[1, N]` whose finite sums all lie in
/// `[1, N]` with one colour, where `colors[i]` colours `i + 1`.
pub fn naive_fs_witness(colors: &[u8], k: usize) -> Option<(u8, Vec<u64>)> {
    let n = colors.len();
    for combo in combinations(n, k) {
        let xs: Vec<u64> = combo.iter().map(|&i| i as u64 + 1).collect();
        let sums: Vec<u64> = (1u64..1 << k).map(|m| masked_sum(&xs, m)).collect();
        if sums.iter().all(|&s| s as usize <= n) {
            let c = colors[xs[0] as usize - 1];
            if sums.iter().all(|&s| colors[s as usize - 1] == c) {
                return Some((c, xs));
            }
        }
    }
    None
}

/// Whether every `r`-colouring of `[1, n]` has a `k`-term witness, trying
/// all `r^n` colourings. `budget` caps the number of colourings.
pub fn naive_threshold(k: usize, r: usize, n: usize, budget: u64) -> Result<bool, OracleError> {
    let total = (r as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(OracleError::BudgetExceeded(budget));
    }
    let mut colors = vec![0u8; n];
    for code in 0..total {
        let mut c = code;
        for slot in colors.iter_mut() {
            *slot = (c % r as u128) as u8;
            c /= r as u128;
        }
        if naive_fs_witness(&colors, k).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn union_of(sets: &[FinSet], pick: u64) -> FinSet {
    index_set(pick).into_iter().fold(FinSet::EMPTY, |acc, i| acc.union(sets[i]))
}

/// Least family (in bitmask order) of `k` pairwise-disjoint nonempty subsets
/// of `{0..n-1}` whose nonempty unions share one colour.
pub fn naive_fu_witness(c: &Coloring, n: usize, k: usize) -> Option<(u8, Vec<FinSet>)> {
    let all: Vec<FinSet> = (1u64..1 << n).map(FinSet::from_bits).collect();
    for combo in combinations(all.len(), k) {
        let ts: Vec<FinSet> = combo.iter().map(|&i| all[i]).collect();
        let disjoint = (0..k).all(|i| (i + 1..k).all(|j| ts[i].intersection(ts[j]).is_empty()));
        if !disjoint {
            continue;
        }
        let colors: Vec<Option<u8>> = (1u64..1 << k).map(|m| c.color_of_set(union_of(&ts, m))).collect();
        if colors[0].is_some() && colors.iter().all(|&x| x == colors[0]) {
            return Some((colors[0].unwrap(), ts));
        }
    }
    None
}

/// Least family of `k` blocks, each wholly below the next, such that all
/// pairs `(u, v)` of unions of blocks with `max u < min v` share one colour.
pub fn naive_pair_witness(c: &Coloring, n: usize, k: usize) -> Option<(u8, Vec<FinSet>)> {
    let all: Vec<FinSet> = (1u64..1 << n).map(FinSet::from_bits).collect();
    for combo in combinations(all.len(), k) {
        let ts: Vec<FinSet> = combo.iter().map(|&i| all[i]).collect();
        let ordered = ts.windows(2).all(|w| w[0].iter().all(|a| w[1].iter().all(|b| a < b)));
        if !ordered {
            continue;
        }
        let mut colors = Vec::new();
        for i in 1u64..1 << k {
            for j in 1u64..1 << k {
                let (u, v) = (union_of(&ts, i), union_of(&ts, j));
                if u.iter().all(|a| v.iter().all(|b| a < b)) {
                    colors.push(c.color_of_pair(u, v));
                }
            }
        }
        if colors[0].is_some() && colors.iter().all(|&x| x == colors[0]) {
            return Some((colors[0].unwrap(), ts));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{ColoringSpec, Domain};

    #[test]
    fn decode_examples() {
        assert_eq!(naive_decode(&[1, 5, 25], 26).unwrap(), vec![vec![0, 2]]);
        assert_eq!(naive_decode(&[2, 2], 2).unwrap(), vec![vec![0], vec![1]]);
        assert!(naive_decode(&[1, 5, 25], 2).unwrap().is_empty());
        assert!(naive_decode(&[1; 21], 1).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert!(naive_threshold(2, 1, 3, 1 << 20).unwrap());
        assert!(!naive_threshold(2, 1, 2, 1 << 20).unwrap());
        // Colour 1, 4 with 0 and 2, 3 with 1: no x + y = z inside a class.
        assert!(!naive_threshold(2, 2, 4, 1 << 20).unwrap());
        assert_eq!(naive_threshold(2, 2, 30, 1000), Err(OracleError::BudgetExceeded(1000)));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(3, 0).count(), 1);
    }

    #[test]
    fn lemma_sweeps_are_clean() {
        use LemmaHypothesis::*;
        let bin: Vec<u64> = (0..8).map(|i| 1 << i).collect();
        assert!(naive_lemma_sweep(&bin[..4], 4, 1, 16, AsStated, u64::MAX).unwrap().is_empty());
        assert!(naive_lemma_sweep(&bin[..4], 4, 2, 16, EarlyTermsBelowB, u64::MAX).unwrap().is_empty());
        assert!(naive_lemma_sweep(&[1, 2, 6, 24], 4, 2, 24, EarlyTermsBelowB, u64::MAX).unwrap().is_empty());
        let count = for_each_lemma_instance(&bin[..6], 6, 3, 64, EarlyTermsBelowB, u64::MAX, |_| {}).unwrap();
        assert!(count > 0);
    }

    #[test]
    fn interleaved_supports_break_the_literal_statement() {
        let bin: Vec<u64> = (0..4).map(|i| 1 << i).collect();
        let bad = naive_lemma_sweep(&bin, 4, 2, 16, LemmaHypothesis::AsStated, u64::MAX).unwrap();
        let expected = LemmaInstance { x: vec![5, 2], a: 1, b: 4 };
        assert!(bad.iter().any(|c| c.instance == expected && !c.a_in_fs && !c.b_in_fs));
    }

    #[test]
    fn lemma_instance_contains_worked_example() {
        let bin: Vec<u64> = (0..6).map(|i| 1 << i).collect();
        let mut seen = false;
        for_each_lemma_instance(&bin, 6, 3, 64, LemmaHypothesis::EarlyTermsBelowB, u64::MAX, |i| {
            seen |= i.x == [3, 12, 48] && i.a == 3 && i.b == 48;
        })
        .unwrap();
        assert!(seen);
    }

    #[test]
    fn digits_peel_from_the_top() {
        assert_eq!(naive_digits(&[1, 2, 6, 24], 17), vec![1, 2, 2, 0]);
        assert_eq!(naive_digits(&[1, 2, 4], 13), vec![1, 0, 3]);
    }

    #[test]
    fn tricks_in_cyclic_group() {
        let z4: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect();
        let a = [false, true, true, false];
        let b = [true, true, false, false];
        assert_eq!(naive_tricks(&z4, &a, &b, 1, 2, 1, 3), [true; 5]);
        assert_eq!(naive_idempotents(&z4), vec![0]);
        assert_eq!(naive_galvin(&z4, &a, 0), (true, true));
    }

    #[test]
    fn witness_oracles() {
        let c = Coloring::build(Domain::Subsets { n: 4 }, 2, &ColoringSpec::SizeParity, 0).unwrap();
        let (color, ts) = naive_fu_witness(&c, 4, 2).unwrap();
        assert_eq!(color, 0);
        assert_eq!(ts, vec![FinSet::from_bits(0b0011), FinSet::from_bits(0b1100)]);
        let c = Coloring::build(Domain::OrderedPairs { n: 4 }, 1, &ColoringSpec::Constant, 0).unwrap();
        let (_, ts) = naive_pair_witness(&c, 4, 2).unwrap();
        assert_eq!(ts, vec![FinSet::singleton(0), FinSet::singleton(1)]);
        assert_eq!(naive_fs_witness(&[1, 0, 1, 0, 1], 2), None);
    }
}
