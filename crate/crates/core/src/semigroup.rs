//! Finite semigroups given by Cayley tables, translations `s⁻¹A`, the
//! `A^{-q}` calculus for principal ultrafilters, idempotents and the star
//! operation `A⋆ = A ∩ A^{-p}`.
//!
//! A principal ultrafilter at `x` contains exactly the sets with `x` as a
//! member, so `B ∈ q` reduces to `q.point ∈ B`, and the product of the
//! principal ultrafilters at `x` and `y` is the principal ultrafilter at `xy`.
//! Subsets of the carrier are [`FinSet`]s, which caps the order at 64.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::finset::{FinSet, MAX_UNIVERSE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("semigroup must have at least one element")]
    Empty,
    #[error("order {0} exceeds the supported maximum of {MAX_UNIVERSE}")]
    OrderTooLarge(usize),
    #[error("operation table is not square (row {row} has {len} entries, expected {order})")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("table entry op({a},{b}) = {value} is outside the carrier")]
    EntryOutOfRange { a: usize, b: usize, value: usize },
    #[error("operation is not associative at ({a},{b},{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} is outside the carrier of order {order}")]
    OutOfRange { element: usize, order: usize },
    #[error("point {0} is not idempotent")]
    NotIdempotent(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<usize>,
}

/// A principal ultrafilter, identified with the element it is generated by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrincipalPoint {
    pub point: usize,
}

impl PrincipalPoint {
    /// `B ∈ q`.
    pub fn contains(self, set: FinSet) -> bool {
        set.contains(self.point)
    }
}

impl FiniteSemigroup {
    /// Builds a semigroup from a row-major operation table, validating range
    /// and associativity.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, SemigroupError> {
        let order = rows.len();
        let mut table = Vec::with_capacity(order * order);
        for (row, entries) in rows.into_iter().enumerate() {
            if entries.len() != order {
                return Err(SemigroupError::NotSquare { row, len: entries.len(), order });
            }
            table.extend(entries);
        }
        Self::from_flat(order, table)
    }

    pub fn from_flat(order: usize, table: Vec<usize>) -> Result<Self, SemigroupError> {
        if order == 0 {
            return Err(SemigroupError::Empty);
        }
        if order > MAX_UNIVERSE {
            return Err(SemigroupError::OrderTooLarge(order));
        }
        assert_eq!(table.len(), order * order, "flat table length");
        if let Some(i) = table.iter().position(|&v| v >= order) {
            return Err(SemigroupError::EntryOutOfRange {
                a: i / order,
                b: i % order,
                value: table[i],
            });
        }
        let sg = FiniteSemigroup { order, table };
        if let Some((a, b, c)) = sg.associativity_failure() {
            return Err(SemigroupError::NotAssociative { a, b, c });
        }
        Ok(sg)
    }

    /// `(ℤ_n, +)`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat(n, table).expect("cyclic group table")
    }

    /// `op(x, y) = x`.
    pub fn left_zero(n: usize) -> Self {
        let table = (0..n * n).map(|i| i / n).collect();
        Self::from_flat(n, table).expect("left-zero table")
    }

    fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.op(a, b);
                for c in 0..n {
                    if self.op(ab, c) != self.op(a, self.op(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn carrier(&self) -> FinSet {
        FinSet::below(self.order)
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.op(e, e) == e
    }

    pub fn point(&self, element: usize) -> Result<PrincipalPoint, SemigroupError> {
        self.check_element(element)?;
        Ok(PrincipalPoint { point: element })
    }

    /// `p · q` for principal points.
    pub fn product(&self, p: PrincipalPoint, q: PrincipalPoint) -> PrincipalPoint {
        PrincipalPoint { point: self.op(p.point, q.point) }
    }

    fn check_element(&self, element: usize) -> Result<(), SemigroupError> {
        if element < self.order {
            Ok(())
        } else {
            Err(SemigroupError::OutOfRange { element, order: self.order })
        }
    }

    fn check_subset(&self, set: FinSet) -> Result<(), SemigroupError> {
        match set.last() {
            Some(m) if m >= self.order => Err(SemigroupError::OutOfRange { element: m, order: self.order }),
            _ => Ok(()),
        }
    }

    fn select(&self, keep: impl Fn(usize) -> bool) -> FinSet {
        (0..self.order).filter(|&x| keep(x)).collect()
    }

    /// `s⁻¹A = { t | st ∈ A }`.
    pub fn translate_preimage(&self, s: usize, a: FinSet) -> Result<FinSet, SemigroupError> {
        self.check_element(s)?;
        self.check_subset(a)?;
        Ok(self.select(|t| a.contains(self.op(s, t))))
    }

    /// `A^{-q} = { s | s⁻¹A ∈ q } = { s | s·q ∈ A }` for principal `q`.
    pub fn a_minus_q(&self, a: FinSet, q: PrincipalPoint) -> Result<FinSet, SemigroupError> {
        self.check_element(q.point)?;
        self.check_subset(a)?;
        Ok(self.select(|s| a.contains(self.op(s, q.point))))
    }

    /// `A⋆ = A ∩ A^{-p}`.
    pub fn star(&self, a: FinSet, p: PrincipalPoint) -> Result<FinSet, SemigroupError> {
        Ok(a.intersection(self.a_minus_q(a, p)?))
    }

    /// Evaluates both sides of each translation identity. The star in the
    /// fourth identity is taken with respect to `q`.
    pub fn verify_tricks(&self, input: &TricksInput) -> Result<TricksReport, SemigroupError> {
        let TricksInput { a, b, s, t, p, q } = *input;
        self.check_subset(b)?;
        self.check_element(p.point)?;

        let composed = self.translate_preimage(t, self.translate_preimage(s, a)?)?;
        let direct = self.translate_preimage(self.op(s, t), a)?;

        let shift_then_translate = self.translate_preimage(s, self.a_minus_q(a, q)?)?;
        let translate_then_shift = self.a_minus_q(self.translate_preimage(s, a)?, q)?;

        let shift_of_meet = self.a_minus_q(a.intersection(b), q)?;
        let meet_of_shifts = self.a_minus_q(a, q)?.intersection(self.a_minus_q(b, q)?);

        let star_of_translate = self.star(self.translate_preimage(s, a)?, q)?;
        let translate_of_star = self.translate_preimage(s, self.star(a, q)?)?;

        let iterated = self.a_minus_q(self.a_minus_q(a, q)?, p)?;
        let by_product = self.a_minus_q(a, self.product(p, q))?;

        Ok(TricksReport {
            checks: vec![
                IdentityCheck::new(Identity::ComposedTranslation, composed, direct),
                IdentityCheck::new(Identity::TranslateCommutesWithShift, shift_then_translate, translate_then_shift),
                IdentityCheck::new(Identity::ShiftOfIntersection, shift_of_meet, meet_of_shifts),
                IdentityCheck::new(Identity::TranslateCommutesWithStar, star_of_translate, translate_of_star),
                IdentityCheck::new(Identity::IteratedShift, iterated, by_product),
            ],
        })
    }

    /// Follows the powers `s, s², s³, …` of element 0 until they cycle and
    /// returns the idempotent power inside the cycle.
    pub fn find_idempotent(&self) -> usize {
        let s = 0;
        // first_seen[x] = k such that s^k = x
        let mut first_seen = vec![0usize; self.order];
        let mut power = s;
        let mut k = 1;
        let (tail, period) = loop {
            if first_seen[power] != 0 {
                break (first_seen[power], k - first_seen[power]);
            }
            first_seen[power] = k;
            power = self.op(power, s);
            k += 1;
        };
        // the least multiple of the period that reaches the cycle
        let exponent = tail.div_ceil(period) * period;
        let mut e = s;
        for _ in 1..exponent {
            e = self.op(e, s);
        }
        assert!(self.is_idempotent(e), "power cycle without idempotent: associativity broken");
        e
    }

    /// Checks `A ∈ p ⇒ A⋆ ∈ p` and `(A⋆)⋆ = A⋆` for an idempotent point `p`.
    pub fn galvin_star_check(&self, a: FinSet, p: PrincipalPoint) -> Result<GalvinReport, SemigroupError> {
        self.check_element(p.point)?;
        if !self.is_idempotent(p.point) {
            return Err(SemigroupError::NotIdempotent(p.point));
        }
        let star = self.star(a, p)?;
        let star_star = self.star(star, p)?;
        let a_in_p = p.contains(a);
        Ok(GalvinReport {
            star,
            star_star,
            a_in_p,
            star_in_p: p.contains(star),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TricksInput {
    pub a: FinSet,
    /// Second set, used only by the intersection identity.
    pub b: FinSet,
    pub s: usize,
    pub t: usize,
    pub p: PrincipalPoint,
    pub q: PrincipalPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// `t⁻¹s⁻¹A = (st)⁻¹A`
    ComposedTranslation,
    /// `s⁻¹A^{-q} = (s⁻¹A)^{-q}`
    TranslateCommutesWithShift,
    /// `(A ∩ B)^{-q} = A^{-q} ∩ B^{-q}`
    ShiftOfIntersection,
    /// `(s⁻¹A)⋆ = s⁻¹A⋆`
    TranslateCommutesWithStar,
    /// `(A^{-q})^{-p} = A^{-(p·q)}`
    IteratedShift,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub lhs: FinSet,
    pub rhs: FinSet,
}

impl IdentityCheck {
    fn new(identity: Identity, lhs: FinSet, rhs: FinSet) -> Self {
        IdentityCheck { identity, lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TricksReport {
    pub checks: Vec<IdentityCheck>,
}

impl TricksReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GalvinReport {
    pub star: FinSet,
    pub star_star: FinSet,
    pub a_in_p: bool,
    pub star_in_p: bool,
}

impl GalvinReport {
    /// `A ∈ p ⇒ A⋆ ∈ p`.
    pub fn membership_holds(&self) -> bool {
        !self.a_in_p || self.star_in_p
    }

    /// `(A⋆)⋆ = A⋆`.
    pub fn fixpoint_holds(&self) -> bool {
        self.star_star == self.star
    }

    pub fn passes(&self) -> bool {
        self.membership_holds() && self.fixpoint_holds()
    }
}

/// Every associative table on `{0, …, order-1}`, found by filtering all
/// `order^(order²)` tables. Only sensible for `order <= 3`.
pub fn all_semigroups(order: usize) -> Vec<FiniteSemigroup> {
    assert!((1..=3).contains(&order), "exhaustive enumeration is limited to orders 1..=3");
    let cells = order * order;
    let total = order.pow(cells as u32);
    let mut out = Vec::new();
    let mut table = vec![0usize; cells];
    for mut code in 0..total {
        for cell in table.iter_mut() {
            *cell = code % order;
            code /= order;
        }
        if let Ok(sg) = FiniteSemigroup::from_flat(order, table.clone()) {
            out.push(sg);
        }
    }
    out
}

/// A random associative table of the given order: cells are filled in
/// row-major order with candidate values tried in shuffled order, backtracking
/// whenever a fully defined triple violates associativity. Searches that
/// wander too long are restarted with fresh shuffles.
pub fn random_semigroup<R: Rng>(order: usize, rng: &mut R) -> FiniteSemigroup {
    assert!((1..=8).contains(&order), "random sampling supports orders 1..=8");
    const STEPS_PER_ATTEMPT: usize = 4_000;
    loop {
        if let Some(sg) = backtrack_table(order, rng, STEPS_PER_ATTEMPT) {
            return sg;
        }
    }
}

fn backtrack_table<R: Rng>(order: usize, rng: &mut R, max_steps: usize) -> Option<FiniteSemigroup> {
    let cells = order * order;
    let mut table: Vec<Option<usize>> = vec![None; cells];
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(cells);
    let mut cell = 0;
    candidates.push(shuffled(order, rng));
    for _ in 0..max_steps {
        if cell == cells {
            let flat = table.into_iter().map(|v| v.expect("filled")).collect();
            return Some(FiniteSemigroup::from_flat(order, flat).expect("backtracking yields associative tables"));
        }
        match candidates[cell].pop() {
            Some(v) => {
                table[cell] = Some(v);
                if partial_table_consistent(order, &table) {
                    cell += 1;
                    if cell < cells {
                        candidates.push(shuffled(order, rng));
                    }
                }
            }
            None => {
                table[cell] = None;
                candidates.pop();
                // the constant table always completes, so cell 0 is never exhausted
                cell -= 1;
            }
        }
    }
    None
}

fn shuffled<R: Rng>(order: usize, rng: &mut R) -> Vec<usize> {
    let mut v: Vec<usize> = (0..order).collect();
    v.shuffle(rng);
    v
}

fn partial_table_consistent(order: usize, table: &[Option<usize>]) -> bool {
    let op = |a: usize, b: usize| table[a * order + b];
    for a in 0..order {
        for b in 0..order {
            let Some(ab) = op(a, b) else { continue };
            for c in 0..order {
                let (Some(bc), Some(left)) = (op(b, c), op(ab, c)) else { continue };
                if let Some(right) = op(a, bc) {
                    if left != right {
                        return false;
                    }
                }
            }
        }
    }
    true
}
