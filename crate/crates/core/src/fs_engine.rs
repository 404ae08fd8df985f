//! Finite-sums sets of positive integer sequences: growth conditions,
//! enumeration with representation decoding, condensations and the natural
//! map `Σ_{i∈F} x_i ↦ F` onto finite unions.

use serde::Serialize;
use thiserror::Error;

use crate::finset::{FinSet, MAX_UNIVERSE};

/// Longest sequence (after the offset) that [`enumerate_fs`] will expand.
pub const MAX_ENUMERATION_LEN: usize = 24;
/// Longest sequence [`unique_sums_holds`] will examine; the check is `3^N`.
pub const MAX_UNIQUE_SUMS_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsError {
    #[error("sequence is empty")]
    EmptySequence,
    #[error("term {index} is zero; terms must be positive")]
    ZeroTerm { index: usize },
    #[error("sequence of length {len} exceeds the limit of {max}")]
    TooLong { len: usize, max: usize },
    #[error("sum of terms overflows 64 bits")]
    Overflow,
    #[error("offset {k} is not below the sequence length {len}")]
    OffsetOutOfRange { k: usize, len: usize },
    #[error("{0} is not a finite sum of the sequence")]
    NotInFS(u64),
    #[error("sequence does not have unique representations")]
    NonUnique,
    #[error("greedy decoding needs a verified growth factor")]
    NoGrowth,
}

/// `∀n: x_n > g · Σ_{i<n} x_i`.
pub fn check_growth(terms: &[u64], g: u64) -> bool {
    growth_violation(terms, g).is_none()
}

/// First index at which the growth condition with factor `g` fails.
pub fn growth_violation(terms: &[u64], g: u64) -> Option<usize> {
    let mut partial: u128 = 0;
    for (n, &x) in terms.iter().enumerate() {
        if u128::from(x) <= u128::from(g) * partial {
            return Some(n);
        }
        partial += u128::from(x);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthSequence {
    terms: Vec<u64>,
    /// Largest of `{4, 2}` the sequence grows by, if any.
    growth_factor: Option<u64>,
}

impl GrowthSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self, FsError> {
        if terms.is_empty() {
            return Err(FsError::EmptySequence);
        }
        if terms.len() > MAX_UNIVERSE {
            return Err(FsError::TooLong { len: terms.len(), max: MAX_UNIVERSE });
        }
        if let Some(index) = terms.iter().position(|&x| x == 0) {
            return Err(FsError::ZeroTerm { index });
        }
        terms
            .iter()
            .try_fold(0u64, |acc, &x| acc.checked_add(x))
            .ok_or(FsError::Overflow)?;
        let growth_factor = [4, 2].into_iter().find(|&g| check_growth(&terms, g));
        Ok(GrowthSequence { terms, growth_factor })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn growth_factor(&self) -> Option<u64> {
        self.growth_factor
    }

    pub fn sum_over(&self, support: FinSet) -> u64 {
        support.iter().map(|i| self.terms[i]).sum()
    }

    /// Decodes `z` by taking terms greedily from the largest index down to
    /// `offset`. Correct whenever each term exceeds the sum of its
    /// predecessors, which a recorded growth factor guarantees.
    pub fn greedy_support(&self, offset: usize, z: u64) -> Result<FinSet, FsError> {
        if self.growth_factor.is_none() {
            return Err(FsError::NoGrowth);
        }
        let mut rest = z;
        let mut support = FinSet::EMPTY;
        for i in (offset..self.len()).rev() {
            if self.terms[i] <= rest {
                rest -= self.terms[i];
                support = support.with(i);
            }
        }
        if rest != 0 || support.is_empty() {
            return Err(FsError::NotInFS(z));
        }
        Ok(support)
    }
}

/// `FS_k(x)` with every sum tagged by the index set producing it.
#[derive(Debug, Clone)]
pub struct FSCatalog {
    source: GrowthSequence,
    offset: usize,
    /// `(sum, index mask relative to offset)`, sorted by sum then mask.
    entries: Vec<(u64, u32)>,
    unique: bool,
}

/// JSON export of a catalog: the sums, and the decoding when it exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogExport {
    pub sums: Vec<u64>,
    pub decode: Option<Vec<DecodeEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeEntry {
    pub sum: u64,
    pub support: FinSet,
}

/// Enumerates all sums over nonempty index sets `v ⊆ [k, N)`.
pub fn enumerate_fs(x: &GrowthSequence, k: usize) -> Result<FSCatalog, FsError> {
    if k >= x.len() {
        return Err(FsError::OffsetOutOfRange { k, len: x.len() });
    }
    let tail = &x.terms()[k..];
    if tail.len() > MAX_ENUMERATION_LEN {
        return Err(FsError::TooLong { len: tail.len(), max: MAX_ENUMERATION_LEN });
    }
    let count = (1usize << tail.len()) - 1;
    let mut entries: Vec<(u64, u32)> = Vec::with_capacity(count);
    for mask in 1..=count as u32 {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let base = if rest == 0 { 0 } else { entries[rest as usize - 1].0 };
        entries.push((base + tail[low], mask));
    }
    entries.sort_unstable();
    let unique = entries.windows(2).all(|w| w[0].0 != w[1].0);
    Ok(FSCatalog { source: x.clone(), offset: k, entries, unique })
}

impl FSCatalog {
    pub fn source(&self) -> &GrowthSequence {
        &self.source
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn has_unique_representations(&self) -> bool {
        self.unique
    }

    /// Distinct sums in increasing order.
    pub fn sums(&self) -> impl Iterator<Item = u64> + '_ {
        let mut last = None;
        self.entries.iter().filter_map(move |&(s, _)| {
            if last == Some(s) {
                None
            } else {
                last = Some(s);
                Some(s)
            }
        })
    }

    pub fn contains(&self, z: u64) -> bool {
        self.entries.binary_search_by_key(&z, |&(s, _)| s).is_ok()
    }

    fn support_of(&self, mask: u32) -> FinSet {
        FinSet::from_bits(u64::from(mask) << self.offset)
    }

    /// Looks `z` up in the enumeration.
    pub fn lookup(&self, z: u64) -> Result<FinSet, FsError> {
        if !self.unique {
            return Err(FsError::NonUnique);
        }
        let pos = self
            .entries
            .binary_search_by_key(&z, |&(s, _)| s)
            .map_err(|_| FsError::NotInFS(z))?;
        Ok(self.support_of(self.entries[pos].1))
    }

    pub fn export(&self) -> CatalogExport {
        CatalogExport {
            sums: self.sums().collect(),
            decode: self.unique.then(|| {
                self.entries
                    .iter()
                    .map(|&(sum, mask)| DecodeEntry { sum, support: self.support_of(mask) })
                    .collect()
            }),
        }
    }

    /// Tests `y ⊑ x` against this catalog.
    pub fn condensation(&self, y: &[u64]) -> Result<CondensationOutcome, FsError> {
        if !self.unique {
            return Err(FsError::NonUnique);
        }
        if y.is_empty() {
            return Err(FsError::EmptySequence);
        }
        if y.len() > MAX_ENUMERATION_LEN {
            return Err(FsError::TooLong { len: y.len(), max: MAX_ENUMERATION_LEN });
        }
        let mut blocks = Vec::with_capacity(y.len());
        for &term in y {
            match self.lookup(term) {
                Ok(block) => blocks.push(block),
                Err(_) => return Ok(CondensationOutcome::Refused { violating_sum: term }),
            }
        }
        // all sums of y, in subset-mask order
        let mut sums: Vec<u128> = vec![0; 1 << y.len()];
        for mask in 1..sums.len() {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + u128::from(y[low]);
            let fits = u64::try_from(sums[mask]).ok().filter(|&s| self.contains(s));
            if fits.is_none() {
                let violating_sum = u64::try_from(sums[mask]).unwrap_or(u64::MAX);
                return Ok(CondensationOutcome::Refused { violating_sum });
            }
        }
        let condensation = Condensation { blocks, terms: y.to_vec() };
        let increasing = y.windows(2).all(|w| w[0] < w[1]);
        let growth_inherited = match self.source.growth_factor {
            Some(g) if increasing => Some(check_growth(y, g)),
            _ => None,
        };
        Ok(CondensationOutcome::Accepted(CondensationReport {
            blocks_disjoint: condensation.blocks_disjoint(),
            condensation,
            increasing,
            growth_inherited,
        }))
    }
}

/// Unique-representation decoding of `z`: greedy for growth-verified
/// sequences, table lookup otherwise.
pub fn decode_supp(cat: &FSCatalog, z: u64) -> Result<FinSet, FsError> {
    if !cat.unique {
        return Err(FsError::NonUnique);
    }
    if cat.source.growth_factor.is_some() {
        cat.source.greedy_support(cat.offset, z)
    } else {
        cat.lookup(z)
    }
}

/// The natural isomorphism `FS(x) → FU`, `Σ_{i∈F} x_i ↦ F`.
pub fn additive_iso_image(cat: &FSCatalog, z: u64) -> Result<FinSet, FsError> {
    decode_supp(cat, z)
}

/// `Σ_s + Σ_t ∈ FS(x) ⇔ s ∩ t = ∅` for all nonempty index sets `s, t`.
///
/// Disjoint pairs always sum to `Σ_{s∪t}`, so only overlapping pairs need
/// checking. Such a pair is determined by `C = s ∩ t ≠ ∅` and the symmetric
/// difference `D`, and its sum is `Σ_D + 2Σ_C`.
pub fn unique_sums_holds(x: &GrowthSequence) -> Result<bool, FsError> {
    let n = x.len();
    if n > MAX_UNIQUE_SUMS_LEN {
        return Err(FsError::TooLong { len: n, max: MAX_UNIQUE_SUMS_LEN });
    }
    let cat = enumerate_fs(x, 0)?;
    let full = (1u32 << n) - 1;
    let mut subset_sum = vec![0u128; 1 << n];
    for mask in 1..subset_sum.len() {
        let low = mask.trailing_zeros() as usize;
        subset_sum[mask] = subset_sum[mask & (mask - 1)] + u128::from(x.terms[low]);
    }
    for common in 1..=full {
        let doubled = 2 * subset_sum[common as usize];
        let free = full & !common;
        let mut sym = free;
        loop {
            let total = doubled + subset_sum[sym as usize];
            if u64::try_from(total).is_ok_and(|t| cat.contains(t)) {
                return Ok(false);
            }
            if sym == 0 {
                break;
            }
            sym = (sym - 1) & free;
        }
    }
    Ok(true)
}

/// Block structure of a condensation: `terms[j] = Σ_{i ∈ blocks[j]} x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condensation {
    pub blocks: Vec<FinSet>,
    pub terms: Vec<u64>,
}

impl Condensation {
    pub fn blocks_disjoint(&self) -> bool {
        let mut seen = FinSet::EMPTY;
        for &b in &self.blocks {
            if !seen.is_disjoint(b) {
                return false;
            }
            seen = seen.union(b);
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondensationReport {
    pub condensation: Condensation,
    pub blocks_disjoint: bool,
    pub increasing: bool,
    /// Whether `y` grows by the factor recorded for `x`; `None` when `x` has
    /// no recorded factor or `y` is not increasing.
    pub growth_inherited: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CondensationOutcome {
    Accepted(CondensationReport),
    Refused { violating_sum: u64 },
}

/// Whether `FS(y) ⊆ FS(x)`, with the x-supports of the `y_j` as blocks.
pub fn is_condensation(y: &[u64], x: &GrowthSequence) -> Result<CondensationOutcome, FsError> {
    enumerate_fs(x, 0)?.condensation(y)
}

/// `{ n < bound | supp(x_n) ∩ linked ≠ ∅ }`, where `supports[n]` is the
/// support of the `n`-th term under whatever support notion the caller uses.
pub fn link_support_indices(supports: &[FinSet], linked: FinSet, bound: usize) -> FinSet {
    supports
        .iter()
        .take(bound)
        .enumerate()
        .filter(|(_, s)| !s.is_disjoint(linked))
        .map(|(n, _)| n)
        .collect()
}
