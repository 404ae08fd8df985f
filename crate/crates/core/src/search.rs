//! Exhaustive witness search for finite Hindman-type statements.
//!
//! Three domains are supported: the interval `[1, N]` (finite sums), the
//! nonempty subsets of `{0..n-1}` (finite unions) and ordered pairs `(v, w)`
//! of such subsets with `max v < min w`. All searches return the
//! lexicographically least witness. Work is split into subtrees on the first
//! generator (or a fixed colour prefix for thresholds) and run on the current
//! rayon pool; subtree results are merged in order, so the output does not
//! depend on the number of workers.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finset::FinSet;

pub const MAX_INTERVAL: usize = 1 << 20;
pub const MAX_SUBSET_UNIVERSE: usize = 16;
pub const MAX_PAIR_UNIVERSE: usize = 10;
pub const MAX_COLORS: usize = 16;
/// Threshold searches colour this many leading integers sequentially before
/// handing the remaining subtrees to the pool.
pub const THRESHOLD_SPLIT_DEPTH: usize = 8;

const INVALID: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("domain {0} is too large")]
    DomainTooLarge(Domain),
    #[error("{0} colours requested; between 1 and {max} are supported", max = MAX_COLORS)]
    BadColorCount(usize),
    #[error("unknown colouring '{0}'")]
    UnknownColoring(String),
    #[error("colouring '{coloring}' does not apply to domain {domain}")]
    WrongDomain { coloring: String, domain: Domain },
    #[error("colour table has {got} entries, domain needs {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("colour {color} is not below the colour count {r}")]
    ColorOutOfRange { color: u8, r: usize },
    #[error("invalid search parameter: {0}")]
    BadParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    /// `[1, n]`.
    Interval { n: usize },
    /// Nonempty subsets of `{0..n-1}`.
    Subsets { n: usize },
    /// Pairs `(v, w)` of nonempty subsets of `{0..n-1}` with `max v < min w`.
    OrderedPairs { n: usize },
}

impl Domain {
    fn check(self) -> Result<(), SearchError> {
        let ok = match self {
            Domain::Interval { n } => n <= MAX_INTERVAL,
            Domain::Subsets { n } => n <= MAX_SUBSET_UNIVERSE,
            Domain::OrderedPairs { n } => n <= MAX_PAIR_UNIVERSE,
        };
        if ok {
            Ok(())
        } else {
            Err(SearchError::DomainTooLarge(self))
        }
    }

    /// Length of the dense colour table, including invalid slots.
    fn table_len(self) -> usize {
        match self {
            Domain::Interval { n } => n,
            Domain::Subsets { n } => 1 << n,
            Domain::OrderedPairs { n } => 1 << (2 * n),
        }
    }

    fn is_valid_slot(self, idx: usize) -> bool {
        match self {
            Domain::Interval { .. } => true,
            Domain::Subsets { .. } => idx != 0,
            Domain::OrderedPairs { n } => {
                let (v, w) = (idx >> n, idx & ((1 << n) - 1));
                v != 0 && w != 0 && (63 - (v as u64).leading_zeros()) < (w as u64).trailing_zeros()
            }
        }
    }

    /// Number of elements in the domain.
    pub fn size(self) -> usize {
        (0..self.table_len()).filter(|&i| self.is_valid_slot(i)).count()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval { n } => write!(f, "[1,{n}]"),
            Domain::Subsets { n } => write!(f, "subsets({n})"),
            Domain::OrderedPairs { n } => write!(f, "pairs({n})"),
        }
    }
}

/// A named colouring recipe, resolved against a domain by [`Coloring::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringSpec {
    Constant,
    /// `n mod 2` on integers, `|t| mod 2` on sets, `(|v|+|w|) mod 2` on pairs.
    Parity,
    /// `[n ≥ t]` on integers.
    Threshold(u64),
    /// Uniform colours from a seeded stream; `None` takes the run's seed.
    Random(Option<u64>),
    SizeParity,
    MinParity,
    SumSizeParity,
    /// Explicit colours for the valid elements in table order.
    Table(Vec<u8>),
}

impl FromStr for ColoringSpec {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SearchError::UnknownColoring(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        Ok(match (name, arg) {
            ("constant", None) => ColoringSpec::Constant,
            ("parity", None) => ColoringSpec::Parity,
            ("size-parity", None) => ColoringSpec::SizeParity,
            ("min-parity", None) => ColoringSpec::MinParity,
            ("sum-size-parity", None) => ColoringSpec::SumSizeParity,
            ("threshold", Some(a)) => ColoringSpec::Threshold(a.parse().map_err(|_| bad())?),
            ("random", None) => ColoringSpec::Random(None),
            ("random", Some(a)) => ColoringSpec::Random(Some(a.parse().map_err(|_| bad())?)),
            ("table", Some(a)) => ColoringSpec::Table(
                a.split(',')
                    .map(|c| c.trim().parse::<u8>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?,
            ),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for ColoringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringSpec::Constant => f.write_str("constant"),
            ColoringSpec::Parity => f.write_str("parity"),
            ColoringSpec::Threshold(t) => write!(f, "threshold:{t}"),
            ColoringSpec::Random(None) => f.write_str("random"),
            ColoringSpec::Random(Some(s)) => write!(f, "random:{s}"),
            ColoringSpec::SizeParity => f.write_str("size-parity"),
            ColoringSpec::MinParity => f.write_str("min-parity"),
            ColoringSpec::SumSizeParity => f.write_str("sum-size-parity"),
            ColoringSpec::Table(t) => {
                f.write_str("table:")?;
                for (i, c) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

/// A total colouring of a finite domain, stored as a dense table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    domain: Domain,
    r: usize,
    table: Vec<u8>,
}

impl Coloring {
    /// Resolves `spec` on `domain`. `seed` is used by `random` without an
    /// explicit seed.
    pub fn build(domain: Domain, r: usize, spec: &ColoringSpec, seed: u64) -> Result<Self, SearchError> {
        domain.check()?;
        if r == 0 || r > MAX_COLORS {
            return Err(SearchError::BadColorCount(r));
        }
        let wrong = || SearchError::WrongDomain { coloring: spec.to_string(), domain };
        let len = domain.table_len();
        let mut table = vec![INVALID; len];
        let slots = (0..len).filter(|&i| domain.is_valid_slot(i));

        match spec {
            ColoringSpec::Random(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(s.unwrap_or(seed));
                for i in slots {
                    table[i] = rng.gen_range(0..r) as u8;
                }
            }
            ColoringSpec::Table(values) => {
                let slots: Vec<usize> = slots.collect();
                if values.len() != slots.len() {
                    return Err(SearchError::TableLength { expected: slots.len(), got: values.len() });
                }
                for (i, &c) in slots.into_iter().zip(values) {
                    table[i] = c;
                }
            }
            _ => {
                for i in slots {
                    table[i] = match (spec, domain) {
                        (ColoringSpec::Constant, _) => 0,
                        (ColoringSpec::Parity, Domain::Interval { .. }) => ((i + 1) % 2) as u8,
                        (ColoringSpec::Threshold(t), Domain::Interval { .. }) => ((i as u64 + 1) >= *t) as u8,
                        (ColoringSpec::Parity | ColoringSpec::SizeParity, Domain::Subsets { .. }) => {
                            (i.count_ones() % 2) as u8
                        }
                        (ColoringSpec::MinParity, Domain::Subsets { .. }) => (i.trailing_zeros() % 2) as u8,
                        (ColoringSpec::Parity | ColoringSpec::SumSizeParity, Domain::OrderedPairs { .. }) => {
                            (i.count_ones() % 2) as u8
                        }
                        _ => return Err(wrong()),
                    };
                }
            }
        }
        if let Some(&color) = table.iter().find(|&&c| c != INVALID && c as usize >= r) {
            return Err(SearchError::ColorOutOfRange { color, r });
        }
        Ok(Self { domain, r, table })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn colors(&self) -> usize {
        self.r
    }

    /// Colours of the valid elements, in table order.
    pub fn values(&self) -> Vec<u8> {
        self.table.iter().copied().filter(|&c| c != INVALID).collect()
    }

    pub fn color_of_int(&self, x: u64) -> Option<u8> {
        match self.domain {
            Domain::Interval { n } if x >= 1 && x <= n as u64 => Some(self.table[x as usize - 1]),
            _ => None,
        }
    }

    pub fn color_of_set(&self, t: FinSet) -> Option<u8> {
        match self.domain {
            Domain::Subsets { n } if !t.is_empty() && t.bits() >> n == 0 => Some(self.table[t.bits() as usize]),
            _ => None,
        }
    }

    pub fn color_of_pair(&self, v: FinSet, w: FinSet) -> Option<u8> {
        match self.domain {
            Domain::OrderedPairs { n } if (v.bits() | w.bits()) >> n == 0 => {
                let c = self.table[((v.bits() << n) | w.bits()) as usize];
                (c != INVALID).then_some(c)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Generators {
    Integers(Vec<u64>),
    Sets(Vec<FinSet>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub color: u8,
    pub generators: Generators,
}

impl Witness {
    /// Recomputes every sum, union or pair the witness promises and checks
    /// that each exists in the domain with the witness colour.
    pub fn verify(&self, c: &Coloring) -> bool {
        let subsets = |len: usize| 1u64..(1u64 << len);
        match (&self.generators, c.domain) {
            (Generators::Integers(xs), Domain::Interval { .. }) => {
                !xs.is_empty()
                    && xs.windows(2).all(|w| w[0] < w[1])
                    && subsets(xs.len()).all(|m| {
                        let sum: u64 = (0..xs.len()).filter(|i| m >> i & 1 == 1).map(|i| xs[i]).sum();
                        c.color_of_int(sum) == Some(self.color)
                    })
            }
            (Generators::Sets(ts), Domain::Subsets { .. }) => {
                pairwise_disjoint(ts)
                    && subsets(ts.len()).all(|m| c.color_of_set(union_by_mask(ts, m)) == Some(self.color))
            }
            (Generators::Sets(ts), Domain::OrderedPairs { .. }) => {
                ts.len() >= 2
                    && ts.iter().all(|t| !t.is_empty())
                    && ts.windows(2).all(|w| w[0].last() < w[1].first())
                    && subsets(ts.len()).all(|i| {
                        subsets(ts.len()).all(|j| {
                            let top_i = 63 - i.leading_zeros();
                            let below = j.trailing_zeros();
                            top_i >= below
                                || c.color_of_pair(union_by_mask(ts, i), union_by_mask(ts, j)) == Some(self.color)
                        })
                    })
            }
            _ => false,
        }
    }
}

fn pairwise_disjoint(ts: &[FinSet]) -> bool {
    ts.iter().all(|t| !t.is_empty())
        && ts.iter().enumerate().all(|(i, a)| ts[i + 1..].iter().all(|b| a.is_disjoint(*b)))
}

fn union_by_mask(ts: &[FinSet], mask: u64) -> FinSet {
    (0..ts.len())
        .filter(|i| mask >> i & 1 == 1)
        .fold(FinSet::EMPTY, |acc, i| acc.union(ts[i]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum WitnessOutcome {
    Found { witness: Witness },
    None,
    /// Some subtree ran out of budget before any earlier subtree produced a
    /// witness.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSearch {
    #[serde(flatten)]
    pub outcome: WitnessOutcome,
    pub nodes_explored: u64,
}

/// Node counter with an optional per-subtree cap.
struct Meter {
    nodes: u64,
    limit: Option<u64>,
}

impl Meter {
    fn new(limit: Option<u64>) -> Self {
        Self { nodes: 0, limit }
    }

    /// Counts a node; false once the cap is exceeded.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.limit.is_none_or(|l| self.nodes <= l)
    }
}

enum Branch<T> {
    Found(T),
    Exhausted,
    OverBudget,
}

/// Runs one subtree per root in parallel and merges in root order.
fn search_roots<R, F>(roots: Vec<R>, budget: Option<u64>, run: F) -> (Branch<Witness>, u64)
where
    R: Send,
    F: Fn(R, &mut Meter) -> Branch<Witness> + Sync,
{
    let results: Vec<(Branch<Witness>, u64)> = roots
        .into_par_iter()
        .map(|root| {
            let mut meter = Meter::new(budget);
            let res = run(root, &mut meter);
            (res, meter.nodes)
        })
        .collect();
    let mut nodes = 0;
    for (res, n) in results {
        nodes += n;
        match res {
            Branch::Exhausted => continue,
            other => return (other, nodes),
        }
    }
    (Branch::Exhausted, nodes)
}

fn finish(c: &Coloring, (branch, nodes): (Branch<Witness>, u64)) -> WitnessSearch {
    let outcome = match branch {
        Branch::Found(w) => {
            assert!(w.verify(c), "search produced an invalid witness {w:?}");
            WitnessOutcome::Found { witness: w }
        }
        Branch::Exhausted => WitnessOutcome::None,
        Branch::OverBudget => WitnessOutcome::Unresolved,
    };
    WitnessSearch { outcome, nodes_explored: nodes }
}

fn check_k(k: usize, least: usize) -> Result<(), SearchError> {
    if k < least || k > 16 {
        return Err(SearchError::BadParameter(format!("k = {k} must lie in [{least}, 16]")));
    }
    Ok(())
}

/// Least `x_0 < … < x_{k−1}` whose finite sums all lie in `[1, N]` with one
/// colour. `budget` caps the nodes of each first-term subtree.
pub fn fs_witness(c: &Coloring, k: usize, budget: Option<u64>) -> Result<WitnessSearch, SearchError> {
    check_k(k, 1)?;
    let Domain::Interval { n } = c.domain else {
        return Err(SearchError::WrongDomain { coloring: "fs".into(), domain: c.domain });
    };
    let n = n as u64;
    let roots: Vec<u64> = (1..=n).collect();
    let run = |x0: u64, meter: &mut Meter| {
        let color = c.color_of_int(x0).expect("root in range");
        let mut st = FsState { c, n, k, color, terms: vec![x0], sums: vec![x0] };
        st.extend(meter)
    };
    Ok(finish(c, search_roots(roots, budget, run)))
}

struct FsState<'a> {
    c: &'a Coloring,
    n: u64,
    k: usize,
    color: u8,
    terms: Vec<u64>,
    sums: Vec<u64>,
}

impl FsState<'_> {
    fn extend(&mut self, meter: &mut Meter) -> Branch<Witness> {
        if !meter.tick() {
            return Branch::OverBudget;
        }
        if self.terms.len() == self.k {
            return Branch::Found(Witness {
                color: self.color,
                generators: Generators::Integers(self.terms.clone()),
            });
        }
        let total: u64 = self.terms.iter().sum();
        let rem = (self.k - self.terms.len()) as u64;
        let mut x = self.terms.last().unwrap() + 1;
        // The remaining terms are at least x, x+1, …
        while total + x * rem + rem * (rem - 1) / 2 <= self.n {
            if self.c.color_of_int(x) == Some(self.color)
                && self.sums.iter().all(|&s| self.c.color_of_int(s + x) == Some(self.color))
            {
                let before = self.sums.len();
                for i in 0..before {
                    self.sums.push(self.sums[i] + x);
                }
                self.sums.push(x);
                self.terms.push(x);
                let res = self.extend(meter);
                self.terms.pop();
                self.sums.truncate(before);
                if !matches!(res, Branch::Exhausted) {
                    return res;
                }
            }
            x += 1;
        }
        Branch::Exhausted
    }
}

/// Least pairwise-disjoint `t_0 < … < t_{k−1}` (in bitmask order) whose
/// nonempty unions share one colour.
pub fn fu_witness(c: &Coloring, k: usize, budget: Option<u64>) -> Result<WitnessSearch, SearchError> {
    check_k(k, 1)?;
    let Domain::Subsets { n } = c.domain else {
        return Err(SearchError::WrongDomain { coloring: "fu".into(), domain: c.domain });
    };
    let full = (1u64 << n) - 1;
    let roots: Vec<u64> = (1..=full).collect();
    let run = |t0: u64, meter: &mut Meter| {
        let color = c.table[t0 as usize];
        let mut st = FuState { c, full, k, color, family: vec![t0], unions: vec![t0] };
        st.extend(meter)
    };
    Ok(finish(c, search_roots(roots, budget, run)))
}

struct FuState<'a> {
    c: &'a Coloring,
    full: u64,
    k: usize,
    color: u8,
    family: Vec<u64>,
    unions: Vec<u64>,
}

impl FuState<'_> {
    fn extend(&mut self, meter: &mut Meter) -> Branch<Witness> {
        if !meter.tick() {
            return Branch::OverBudget;
        }
        if self.family.len() == self.k {
            return Branch::Found(Witness {
                color: self.color,
                generators: Generators::Sets(self.family.iter().map(|&m| FinSet::from_bits(m)).collect()),
            });
        }
        let used = self.family.iter().fold(0, |a, &m| a | m);
        let free = self.full & !used;
        let last = *self.family.last().unwrap();
        // Submasks of `free` in increasing order.
        let mut m = 0u64;
        loop {
            m = m.wrapping_sub(free) & free;
            if m == 0 {
                break;
            }
            if m <= last {
                continue;
            }
            let tbl = &self.c.table;
            if tbl[m as usize] == self.color && self.unions.iter().all(|&u| tbl[(u | m) as usize] == self.color) {
                let before = self.unions.len();
                for i in 0..before {
                    self.unions.push(self.unions[i] | m);
                }
                self.unions.push(m);
                self.family.push(m);
                let res = self.extend(meter);
                self.family.pop();
                self.unions.truncate(before);
                if !matches!(res, Branch::Exhausted) {
                    return res;
                }
            }
        }
        Branch::Exhausted
    }
}

/// Least ordered family `t_0 < … < t_{k−1}` (each block entirely below the
/// next) such that every pair `(u, v)` of unions of blocks with
/// `max u < min v` gets one colour.
pub fn pair_witness(c: &Coloring, k: usize, budget: Option<u64>) -> Result<WitnessSearch, SearchError> {
    check_k(k, 2)?;
    let Domain::OrderedPairs { n } = c.domain else {
        return Err(SearchError::WrongDomain { coloring: "pair".into(), domain: c.domain });
    };
    let roots: Vec<u64> = (1..(1u64 << n)).collect();
    let run = |t0: u64, meter: &mut Meter| {
        let mut st = PairState { c, n, k, color: None, family: vec![t0] };
        st.extend(meter)
    };
    Ok(finish(c, search_roots(roots, budget, run)))
}

struct PairState<'a> {
    c: &'a Coloring,
    n: usize,
    k: usize,
    color: Option<u8>,
    family: Vec<u64>,
}

impl PairState<'_> {
    fn pair_color(&self, v: u64, w: u64) -> u8 {
        self.c.table[((v << self.n) | w) as usize]
    }

    /// Colours of the new pairs created by appending block `m`: the right
    /// member contains `m`, the left member ends before the right one starts.
    fn new_pairs_agree(&self, m: u64, color: u8) -> bool {
        let i = self.family.len();
        for left in 1u64..(1 << i) {
            let top = 63 - left.leading_zeros() as usize;
            let u = union_masks(&self.family, left);
            // Blocks strictly between `top` and `i` may join the right member.
            let span = i - top - 1;
            for mid in 0u64..(1 << span) {
                let v = union_masks(&self.family, mid << (top + 1)) | m;
                if self.pair_color(u, v) != color {
                    return false;
                }
            }
        }
        true
    }

    fn extend(&mut self, meter: &mut Meter) -> Branch<Witness> {
        if !meter.tick() {
            return Branch::OverBudget;
        }
        if self.family.len() == self.k {
            return Branch::Found(Witness {
                color: self.color.expect("k >= 2"),
                generators: Generators::Sets(self.family.iter().map(|&m| FinSet::from_bits(m)).collect()),
            });
        }
        let last = *self.family.last().unwrap();
        let start = 64 - last.leading_zeros() as usize;
        if start >= self.n {
            return Branch::Exhausted;
        }
        let above = ((1u64 << self.n) - 1) & !((1u64 << start) - 1);
        let mut m = 0u64;
        loop {
            m = m.wrapping_sub(above) & above;
            if m == 0 {
                break;
            }
            let color = self.color.unwrap_or_else(|| self.pair_color(self.family[0], m));
            if self.new_pairs_agree(m, color) {
                let saved = self.color;
                self.color = Some(color);
                self.family.push(m);
                let res = self.extend(meter);
                self.family.pop();
                self.color = saved;
                if !matches!(res, Branch::Exhausted) {
                    return res;
                }
            }
        }
        Branch::Exhausted
    }
}

fn union_masks(family: &[u64], select: u64) -> u64 {
    family
        .iter()
        .enumerate()
        .filter(|(i, _)| select >> i & 1 == 1)
        .fold(0, |acc, (_, &m)| acc | m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Unresolved {
    /// A colouring of `[1, N_max]` without a witness exists.
    Bound,
    /// Some subtree exceeded its node budget.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ThresholdOutcome {
    /// Every colouring of `[1, threshold]` has a witness. `extremal` is the
    /// least colouring of `[1, threshold − 1]` without one.
    Resolved { threshold: usize, extremal: Vec<u8> },
    Unresolved { bound: usize, reason: Unresolved, extremal: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdSearch {
    #[serde(flatten)]
    pub outcome: ThresholdOutcome,
    pub nodes_explored: u64,
}

/// Smallest `N ≤ n_max` such that every `r`-colouring of `[1, N]` admits a
/// monochromatic finite-sums set of `k` distinct terms.
///
/// Integers are coloured in increasing order with `1` fixed to colour 0. A
/// branch dies as soon as the newest integer `m` completes a witness, which
/// happens exactly when some witness has total sum `m`.
pub fn fs_threshold(k: usize, r: usize, n_max: usize, budget: Option<u64>) -> Result<ThresholdSearch, SearchError> {
    check_k(k, 1)?;
    if r == 0 || r > MAX_COLORS {
        return Err(SearchError::BadColorCount(r));
    }
    if n_max == 0 || n_max > 4096 {
        return Err(SearchError::BadParameter(format!("N_max = {n_max} must lie in [1, 4096]")));
    }
    let split = THRESHOLD_SPLIT_DEPTH.min(n_max);
    let mut prefix = ThresholdDfs::new(k, r, n_max, split, None);
    prefix.explore(1);

    let tasks = std::mem::take(&mut prefix.frontier);
    let mut best = (prefix.best_depth, prefix.best.clone());
    let mut nodes = prefix.meter.nodes;
    let mut hit_bound = prefix.hit_bound;
    let mut over_budget = false;

    let results: Vec<ThresholdDfs> = tasks
        .into_par_iter()
        .map(|colors| {
            let mut dfs = ThresholdDfs::new(k, r, n_max, n_max, budget);
            let m = colors.len();
            dfs.colors[..m].copy_from_slice(&colors);
            dfs.explore(m);
            dfs
        })
        .collect();
    for dfs in results {
        nodes += dfs.meter.nodes;
        hit_bound |= dfs.hit_bound;
        over_budget |= dfs.over_budget;
        if dfs.best_depth > best.0 {
            best = (dfs.best_depth, dfs.best);
        }
    }

    let (depth, extremal) = best;
    let outcome = if hit_bound {
        ThresholdOutcome::Unresolved { bound: n_max, reason: Unresolved::Bound, extremal }
    } else if over_budget {
        ThresholdOutcome::Unresolved { bound: n_max, reason: Unresolved::Budget, extremal }
    } else {
        ThresholdOutcome::Resolved { threshold: depth + 1, extremal }
    };
    Ok(ThresholdSearch { outcome, nodes_explored: nodes })
}

/// Whether every `r`-colouring of `[1, n]` has a `k`-term witness, or `None`
/// if the budget ran out first.
pub fn fs_forced(k: usize, r: usize, n: usize, budget: Option<u64>) -> Result<Option<bool>, SearchError> {
    Ok(match fs_threshold(k, r, n, budget)?.outcome {
        ThresholdOutcome::Resolved { .. } => Some(true),
        ThresholdOutcome::Unresolved { reason: Unresolved::Bound, .. } => Some(false),
        ThresholdOutcome::Unresolved { reason: Unresolved::Budget, .. } => None,
    })
}

struct ThresholdDfs {
    k: usize,
    r: usize,
    n_max: usize,
    /// Depth at which live prefixes are handed off instead of explored.
    stop_at: usize,
    /// `colors[m]` is the colour of `m`; slot 0 is unused.
    colors: Vec<u8>,
    meter: Meter,
    best_depth: usize,
    best: Vec<u8>,
    frontier: Vec<Vec<u8>>,
    hit_bound: bool,
    over_budget: bool,
}

impl ThresholdDfs {
    fn new(k: usize, r: usize, n_max: usize, stop_at: usize, budget: Option<u64>) -> Self {
        Self {
            k,
            r,
            n_max,
            stop_at,
            colors: vec![0; n_max + 1],
            meter: Meter::new(budget),
            best_depth: 0,
            best: Vec::new(),
            frontier: Vec::new(),
            hit_bound: false,
            over_budget: false,
        }
    }

    fn halted(&self) -> bool {
        self.hit_bound || self.over_budget
    }

    /// `colors[1..m]` is witness-free; try every colour for `m`.
    fn explore(&mut self, m: usize) {
        let depth = m - 1;
        if depth > self.best_depth {
            self.best_depth = depth;
            self.best = self.colors[1..m].to_vec();
        }
        if depth == self.n_max {
            self.hit_bound = true;
            return;
        }
        if depth == self.stop_at {
            self.frontier.push(self.colors[..m].to_vec());
            return;
        }
        if !self.meter.tick() {
            self.over_budget = true;
            return;
        }
        let palette = if m == 1 { 1 } else { self.r };
        for c in 0..palette as u8 {
            self.colors[m] = c;
            if !self.closes_witness(m, c) {
                self.explore(m + 1);
                if self.halted() {
                    return;
                }
            }
        }
    }

    /// Whether some `k` distinct terms with total `m` have every subset sum
    /// coloured `c`, given `colors[m] = c`.
    fn closes_witness(&self, m: usize, c: u8) -> bool {
        match self.k {
            1 => true,
            2 => (1..m.div_ceil(2)).any(|a| self.colors[a] == c && self.colors[m - a] == c),
            k => {
                let mut sums = Vec::with_capacity(1 << k);
                self.pick(m, c, 1, k, 0, &mut sums)
            }
        }
    }

    fn pick(&self, m: usize, c: u8, from: usize, rem: usize, partial: usize, sums: &mut Vec<usize>) -> bool {
        if rem == 1 {
            let last = m - partial;
            return last >= from
                && self.colors[last] == c
                && sums.iter().all(|&s| s + last == m || self.colors[s + last] == c);
        }
        let mut x = from;
        // x plus rem − 1 strictly larger terms must fit under m.
        while partial + x * rem + rem * (rem - 1) / 2 <= m {
            if self.colors[x] == c && sums.iter().all(|&s| self.colors[s + x] == c) {
                let before = sums.len();
                for i in 0..before {
                    sums.push(sums[i] + x);
                }
                sums.push(x);
                let found = self.pick(m, c, x + 1, rem - 1, partial + x, sums);
                sums.truncate(before);
                if found {
                    return true;
                }
            }
            x += 1;
        }
        false
    }
}
