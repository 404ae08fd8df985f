//! Adjacency pairs inside a disjoint family and the parity argument built on
//! them.
//!
//! A family `s_0, …, s_{n−1}` of pairwise-disjoint nonempty sets is fixed.
//! Every finite union `t` of members has an index set `supp(t)`, and
//! `π(t) = { i : s_i ⊆ t and s_{i+1} ⊆ t }`. All index sets are [`FinSet`]s,
//! so `π` is a shift-and-mask on the support.

use serde::Serialize;
use thiserror::Error;

use crate::finset::{FinSet, MAX_UNIVERSE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParityError {
    #[error("family member {0} is empty")]
    EmptyMember(usize),
    #[error("family members {0} and {1} intersect")]
    Overlap(usize, usize),
    #[error("family has {0} members; at most {max} are supported", max = MAX_UNIVERSE)]
    TooManyMembers(usize),
    #[error("{0} is not a union of family members")]
    NotInFU(FinSet),
    #[error("{0} and {1} are not disjoint")]
    NotDisjoint(FinSet, FinSet),
    #[error("cover map does not witness member {0}")]
    BadCover(usize),
    #[error("index b1 + 1 = {next} is past the end of a family of {len} members")]
    TooShort { next: usize, len: usize },
}

/// Pairwise-disjoint nonempty sets, in a fixed enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FUFamily {
    members: Vec<FinSet>,
    ordered: bool,
}

impl FUFamily {
    pub fn new(members: Vec<FinSet>) -> Result<Self, ParityError> {
        if members.len() > MAX_UNIVERSE {
            return Err(ParityError::TooManyMembers(members.len()));
        }
        for (i, m) in members.iter().enumerate() {
            if m.is_empty() {
                return Err(ParityError::EmptyMember(i));
            }
            for (j, n) in members.iter().enumerate().skip(i + 1) {
                if !m.is_disjoint(*n) {
                    return Err(ParityError::Overlap(i, j));
                }
            }
        }
        let ordered = members.windows(2).all(|w| w[0].last() < w[1].first());
        Ok(Self { members, ordered })
    }

    /// The family `{0}, {1}, …, {n−1}`; every finite truncation of an ordered
    /// family behaves like this one as far as indices are concerned.
    pub fn singletons(n: usize) -> Result<Self, ParityError> {
        if n > MAX_UNIVERSE {
            return Err(ParityError::TooManyMembers(n));
        }
        Self::new((0..n).map(FinSet::singleton).collect())
    }

    pub fn members(&self) -> &[FinSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True iff `max(s_i) < min(s_{i+1})` throughout.
    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    /// Union of the members indexed by `indices`.
    pub fn union_of(&self, indices: FinSet) -> FinSet {
        indices
            .iter()
            .filter_map(|i| self.members.get(i))
            .fold(FinSet::EMPTY, |acc, m| acc.union(*m))
    }

    /// The index set of `t`. The empty set is the union of no members.
    pub fn support(&self, t: FinSet) -> Result<FinSet, ParityError> {
        let mut supp = FinSet::EMPTY;
        let mut covered = FinSet::EMPTY;
        for (i, m) in self.members.iter().enumerate() {
            if m.is_subset(t) {
                supp = supp.with(i);
                covered = covered.union(*m);
            } else if !m.is_disjoint(t) {
                return Err(ParityError::NotInFU(t));
            }
        }
        if covered == t {
            Ok(supp)
        } else {
            Err(ParityError::NotInFU(t))
        }
    }

    pub fn pi(&self, t: FinSet) -> Result<FinSet, ParityError> {
        Ok(adjacent_pairs(self.support(t)?))
    }

    /// Whether some index lies strictly between the supports of `x` and `t`.
    /// When it does, `π(x ∪ t) = π(x) ⊔ π(t)`.
    pub fn parity_additive(&self, x: FinSet, t: FinSet) -> Result<bool, ParityError> {
        let (sx, st) = self.disjoint_supports(x, t)?;
        Ok(separated(sx, st))
    }

    /// `{ i : s_i ⊆ x, s_{i+1} ⊆ y, or the other way round }`.
    pub fn emerged_indices(&self, x: FinSet, y: FinSet) -> Result<FinSet, ParityError> {
        let (sx, sy) = self.disjoint_supports(x, y)?;
        Ok(crossing_pairs(sx, sy))
    }

    /// Gaps of `x` (maximal runs of indices missing from `supp(x)` strictly
    /// between its least and greatest index), tagged by which ends `y` fills.
    pub fn classify_gaps(&self, x: FinSet, y: FinSet) -> Result<Vec<Gap>, ParityError> {
        let (sx, sy) = self.disjoint_supports(x, y)?;
        Ok(gaps(sx)
            .map(|(start, end)| {
                let kind = match (sy.contains(start), sy.contains(end)) {
                    (true, true) => GapKind::Both,
                    (true, false) => GapKind::BeginOnly,
                    (false, true) => GapKind::EndOnly,
                    (false, false) => GapKind::Neither,
                };
                Gap { start, end, kind }
            })
            .collect())
    }

    /// For each index, the first member of `t` containing `s_i`, if any.
    pub fn full_cover(&self, t: &FUFamily) -> Vec<Option<usize>> {
        self.members
            .iter()
            .map(|m| t.members.iter().position(|tj| m.is_subset(*tj)))
            .collect()
    }

    /// Builds `x`, `b₁`, `y`, `z` from a condensation `t` and a start index
    /// `b`, with the parities of the two unions that have to clash.
    pub fn construct_xyz(
        &self,
        t: &FUFamily,
        b: usize,
        cover: &[Option<usize>],
    ) -> Result<XyzReport, ParityError> {
        let n = self.len();
        let t_supports = t
            .members
            .iter()
            .map(|tj| self.support(*tj))
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..n {
            match cover.get(i).copied().flatten() {
                Some(j) if j < t_supports.len() && t_supports[j].contains(i) => {}
                Some(_) => return Err(ParityError::BadCover(i)),
                None if i >= b => return Err(ParityError::BadCover(i)),
                None => {}
            }
        }
        if b >= n {
            return Err(ParityError::TooShort { next: b, len: n });
        }

        let pick = |limit: usize| {
            cover[..limit]
                .iter()
                .flatten()
                .fold(FinSet::EMPTY, |acc, &j| acc.union(t_supports[j]))
        };
        let sx = pick(b + 1);
        let b1 = sx.last().expect("cover of b is defined");
        if b1 + 1 >= n {
            return Err(ParityError::TooShort { next: b1 + 1, len: n });
        }
        let sy = t_supports[cover[b1 + 1].expect("index above b")];
        let sz = pick(b1).difference(sx.union(sy));

        let window = FinSet::interval(b, b1 + 1);
        let covered = window.is_subset(sx.union(sy).union(sz));
        let below_b1 = FinSet::below(b1);
        let pi_xy = adjacent_pairs(sx.union(sy));
        let pi_xz = adjacent_pairs(sx.union(sz));
        let both_even = pi_xy.len().is_multiple_of(2) && pi_xz.len().is_multiple_of(2);

        Ok(XyzReport {
            x: self.union_of(sx),
            b1,
            y: self.union_of(sy),
            z: self.union_of(sz),
            pi_x: adjacent_pairs(sx),
            pi_y: adjacent_pairs(sy),
            pi_z: adjacent_pairs(sz),
            pi_xy,
            pi_xz,
            emerged_xy_below_b1: crossing_pairs(sx, sy).intersection(below_b1).len(),
            emerged_xz_below_b1: crossing_pairs(sx, sz).intersection(below_b1).len(),
            z_empty: sz.is_empty(),
            covered,
            verdict: if both_even {
                Verdict::NoClash
            } else {
                Verdict::ParityClash
            },
        })
    }

    fn disjoint_supports(&self, x: FinSet, y: FinSet) -> Result<(FinSet, FinSet), ParityError> {
        if !x.is_disjoint(y) {
            return Err(ParityError::NotDisjoint(x, y));
        }
        Ok((self.support(x)?, self.support(y)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapKind {
    BeginOnly,
    EndOnly,
    Both,
    Neither,
}

/// A closed interval `[start, end]` of indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub start: usize,
    pub end: usize,
    pub kind: GapKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ParityClash,
    NoClash,
}

/// Output of [`FUFamily::construct_xyz`]. `x`, `y`, `z` are the actual unions;
/// the `pi_*` fields are index sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XyzReport {
    pub x: FinSet,
    pub b1: usize,
    pub y: FinSet,
    pub z: FinSet,
    pub pi_x: FinSet,
    pub pi_y: FinSet,
    pub pi_z: FinSet,
    pub pi_xy: FinSet,
    pub pi_xz: FinSet,
    pub emerged_xy_below_b1: usize,
    pub emerged_xz_below_b1: usize,
    pub z_empty: bool,
    pub covered: bool,
    pub verdict: Verdict,
}

impl XyzReport {
    /// `|π(x∪y)| + |π(x∪z)| + |π(y)| + |π(z)|` is odd. This is what survives
    /// of the clash without assuming every `π` value of the condensation is
    /// even; with that assumption it is exactly "not both even".
    pub fn parity_sum_is_odd(&self) -> bool {
        (self.pi_xy.len() + self.pi_xz.len() + self.pi_y.len() + self.pi_z.len()) % 2 == 1
    }

    /// `π(x)`, `π(y)`, `π(z)` all have even size.
    pub fn components_even(&self) -> bool {
        [self.pi_x, self.pi_y, self.pi_z].iter().all(|p| p.len() % 2 == 0)
    }
}

fn adjacent_pairs(supp: FinSet) -> FinSet {
    FinSet::from_bits(supp.bits() & (supp.bits() >> 1))
}

fn crossing_pairs(a: FinSet, b: FinSet) -> FinSet {
    FinSet::from_bits((a.bits() & (b.bits() >> 1)) | (b.bits() & (a.bits() >> 1)))
}

fn separated(a: FinSet, b: FinSet) -> bool {
    let gap_between = |lo: FinSet, hi: FinSet| match (lo.last(), hi.first()) {
        (Some(l), Some(h)) => l + 1 < h,
        _ => false,
    };
    gap_between(a, b) || gap_between(b, a)
}

fn gaps(supp: FinSet) -> impl Iterator<Item = (usize, usize)> {
    let (lo, hi) = (supp.first().unwrap_or(0), supp.last().unwrap_or(0));
    let mut i = lo;
    std::iter::from_fn(move || {
        while i < hi && supp.contains(i) {
            i += 1;
        }
        if i >= hi {
            return None;
        }
        let start = i;
        while !supp.contains(i) {
            i += 1;
        }
        Some((start, i - 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize) -> FUFamily {
        FUFamily::singletons(n).unwrap()
    }

    fn set(elems: &[usize]) -> FinSet {
        FinSet::from_elements(elems.iter().copied()).unwrap()
    }

    fn pi_by_definition(family: &FUFamily, t: FinSet) -> FinSet {
        let m = family.members();
        (0..m.len().saturating_sub(1))
            .filter(|&i| m[i].is_subset(t) && m[i + 1].is_subset(t))
            .collect()
    }

    #[test]
    fn pi_examples() {
        let f = s(4);
        assert_eq!(f.pi(set(&[0, 1, 3])).unwrap(), set(&[0]));
        assert_eq!(f.pi(set(&[2])).unwrap(), FinSet::EMPTY);
        assert_eq!(f.pi(set(&[0, 1, 2])).unwrap(), set(&[0, 1]));
    }

    #[test]
    fn support_rejects_partial_members() {
        let f = FUFamily::new(vec![set(&[0, 1]), set(&[2]), set(&[5, 7])]).unwrap();
        assert_eq!(f.support(set(&[0, 1, 5, 7])).unwrap(), set(&[0, 2]));
        assert_eq!(f.support(set(&[0])), Err(ParityError::NotInFU(set(&[0]))));
        assert_eq!(f.support(set(&[2, 3])), Err(ParityError::NotInFU(set(&[2, 3]))));
        assert!(f.is_ordered());
        let g = FUFamily::new(vec![set(&[4]), set(&[1])]).unwrap();
        assert!(!g.is_ordered());
        assert_eq!(FUFamily::new(vec![set(&[1]), set(&[1, 2])]), Err(ParityError::Overlap(0, 1)));
    }

    #[test]
    fn parity_additive_examples() {
        let f = s(6);
        let (x, t) = (set(&[0, 1]), set(&[4, 5]));
        assert!(f.parity_additive(x, t).unwrap());
        assert_eq!(f.pi(x.union(t)).unwrap(), set(&[0, 4]));
        assert_eq!(f.pi(x).unwrap().union(f.pi(t).unwrap()), set(&[0, 4]));
        assert!(!f.parity_additive(set(&[0]), set(&[1])).unwrap());
        assert!(f.parity_additive(set(&[0, 2]), set(&[4])).unwrap());
        assert!(matches!(
            f.parity_additive(set(&[0]), set(&[0, 1])),
            Err(ParityError::NotDisjoint(..))
        ));
    }

    #[test]
    fn emerged_examples() {
        let f = s(4);
        assert_eq!(f.emerged_indices(set(&[0]), set(&[1])).unwrap(), set(&[0]));
        assert_eq!(f.emerged_indices(set(&[0, 2]), set(&[1])).unwrap(), set(&[0, 1]));
        assert_eq!(f.emerged_indices(set(&[0]), set(&[2])).unwrap(), FinSet::EMPTY);
    }

    #[test]
    fn gap_examples() {
        let f = s(5);
        let both = f.classify_gaps(set(&[0, 3]), set(&[1, 2])).unwrap();
        assert_eq!(both, vec![Gap { start: 1, end: 2, kind: GapKind::Both }]);
        let begin = f.classify_gaps(set(&[0, 3]), set(&[1])).unwrap();
        assert_eq!(begin, vec![Gap { start: 1, end: 2, kind: GapKind::BeginOnly }]);
        assert!(f.classify_gaps(set(&[0, 1]), set(&[2])).unwrap().is_empty());
        let several = f.classify_gaps(set(&[0, 2, 4]), set(&[3])).unwrap();
        assert_eq!(
            several,
            vec![
                Gap { start: 1, end: 1, kind: GapKind::Neither },
                Gap { start: 3, end: 3, kind: GapKind::Both },
            ]
        );
    }

    #[test]
    fn decomposition_exhaustive_up_to_seven() {
        for n in 0..=7 {
            let f = s(n);
            // Each index goes to x, y or neither.
            for code in 0..3usize.pow(n as u32) {
                let (mut x, mut y, mut c) = (FinSet::EMPTY, FinSet::EMPTY, code);
                for i in 0..n {
                    match c % 3 {
                        1 => x = x.with(i),
                        2 => y = y.with(i),
                        _ => {}
                    }
                    c /= 3;
                }
                let (px, py) = (pi_by_definition(&f, x), pi_by_definition(&f, y));
                let pxy = pi_by_definition(&f, x.union(y));
                let em = f.emerged_indices(x, y).unwrap();
                assert!(px.is_disjoint(py) && em.is_disjoint(px.union(py)));
                assert_eq!(pxy, px.union(py).union(em), "x={x} y={y}");
                assert_eq!(f.pi(x).unwrap(), px);
                if f.parity_additive(x, y).unwrap() {
                    assert!(em.is_empty());
                }
                if let Some(top) = x.last() {
                    let lo = x.first().unwrap();
                    let inside = em.iter().filter(|&i| lo <= i && i < top).count();
                    let mut tally = 0;
                    for g in f.classify_gaps(x, y).unwrap() {
                        tally += match g.kind {
                            GapKind::Both => 2,
                            GapKind::BeginOnly | GapKind::EndOnly => 1,
                            GapKind::Neither => 0,
                        };
                    }
                    assert_eq!(inside, tally, "x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn construct_xyz_example() {
        let f = s(6);
        let t = FUFamily::new(vec![set(&[0, 2]), set(&[1]), set(&[3, 4, 5])]).unwrap();
        let cover = f.full_cover(&t);
        assert_eq!(cover, vec![Some(0), Some(1), Some(0), Some(2), Some(2), Some(2)]);
        let r = f.construct_xyz(&t, 0, &cover).unwrap();
        assert_eq!((r.x, r.b1, r.y, r.z), (set(&[0, 2]), 2, set(&[3, 4, 5]), set(&[1])));
        assert_eq!(r.pi_xy, set(&[2, 3, 4]));
        assert_eq!(r.pi_xz, set(&[0, 1]));
        assert_eq!(r.emerged_xy_below_b1, 0);
        assert_eq!(r.emerged_xz_below_b1, 2);
        assert!(r.covered && !r.z_empty);
        assert_eq!(r.verdict, Verdict::ParityClash);
        assert!(r.parity_sum_is_odd());
    }

    #[test]
    fn construct_xyz_degenerate_and_short() {
        let f = s(4);
        let cover = f.full_cover(&f);
        let r = f.construct_xyz(&f, 0, &cover).unwrap();
        assert_eq!((r.x, r.b1, r.y), (set(&[0]), 0, set(&[1])));
        assert!(r.z_empty);
        assert_eq!(f.construct_xyz(&f, 3, &cover), Err(ParityError::TooShort { next: 4, len: 4 }));
        let mut bad = cover.clone();
        bad[2] = Some(1);
        assert_eq!(f.construct_xyz(&f, 0, &bad), Err(ParityError::BadCover(2)));
        bad[2] = None;
        assert_eq!(f.construct_xyz(&f, 0, &bad), Err(ParityError::BadCover(2)));
    }

    #[test]
    fn report_serializes_sets_as_strings() {
        let f = s(3);
        let r = f.construct_xyz(&f, 0, &f.full_cover(&f)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["x"], "{0}");
        assert_eq!(v["verdict"], "parity-clash");
    }
}
