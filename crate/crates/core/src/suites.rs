//! Verification sweeps behind `fuforge verify`.
//!
//! Every suite runs either the optimized implementation or the brute-force
//! oracle over the same inputs and produces a [`SuiteReport`]. Random inputs
//! are drawn up front from the seed; the sweep itself is split into units
//! that run on the current rayon pool and are merged in order, so reports are
//! byte-identical for any worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::alpha::{self, DivisibleBase};
use crate::finset::FinSet;
use crate::fs_engine::{self, CondensationOutcome, GrowthSequence};
use crate::oracle::{self, LemmaHypothesis};
use crate::parity::{FUFamily, GapKind, Verdict};
use crate::semigroup::{self, FiniteSemigroup, Identity, TricksInput};

/// Counterexamples kept verbatim per report; the total is always counted.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Tricks,
    Idempotent,
    Galvin,
    Growth,
    UniqueSums,
    Heredity,
    TrivialSum,
    Uzn,
    Telescoping,
    CarryBound,
    ParityCore,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Tricks,
        Suite::Idempotent,
        Suite::Galvin,
        Suite::Growth,
        Suite::UniqueSums,
        Suite::Heredity,
        Suite::TrivialSum,
        Suite::Uzn,
        Suite::Telescoping,
        Suite::CarryBound,
        Suite::ParityCore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tricks => "tricks",
            Suite::Idempotent => "idempotent",
            Suite::Galvin => "galvin",
            Suite::Growth => "growth",
            Suite::UniqueSums => "unique-sums",
            Suite::Heredity => "heredity",
            Suite::TrivialSum => "trivial-sum",
            Suite::Uzn => "uzn",
            Suite::Telescoping => "telescoping",
            Suite::CarryBound => "carry-bound",
            Suite::ParityCore => "parity-core",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| SuiteError::BadInput(format!("unknown suite '{s}'")))
    }
}

impl Serialize for Suite {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Optimized,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("{0}")]
    BadInput(String),
}

/// Inputs shared by all suites; each suite reads the fields it understands.
#[derive(Debug, Clone, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub engine: Engine,
    /// Largest semigroup order, or largest family size for `parity-core`.
    pub order: Option<usize>,
    pub base: Option<Vec<u64>>,
    pub seq: Option<Vec<u64>>,
    pub factor: Option<u64>,
    /// Number of random samples, where a suite draws any.
    pub samples: Option<usize>,
    /// A single operation table replacing the exhaustive semigroup sweep.
    pub table: Option<FiniteSemigroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub engine: Engine,
    pub seed: u64,
    pub checked: u64,
    pub violation_count: u64,
    pub stats: BTreeMap<String, u64>,
    pub violations: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Running tally for one unit of work.
#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    violation_count: u64,
    violations: Vec<Value>,
    stats: BTreeMap<String, u64>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < MAX_LISTED_VIOLATIONS {
                self.violations.push(describe());
            }
        }
    }

    fn count(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        let room = MAX_LISTED_VIOLATIONS - self.violations.len();
        self.violations.extend(other.violations.into_iter().take(room));
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
    }
}

/// Runs `work` on every unit in parallel and merges the tallies in order.
fn sweep<U: Sync, F: Fn(&U) -> Tally + Sync + Send>(units: &[U], work: F) -> Tally {
    let parts: Vec<Tally> = units.par_iter().map(work).collect();
    let mut total = Tally::default();
    for part in parts {
        total.absorb(part);
    }
    total
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let tally = match suite {
        Suite::Tricks => tricks(cfg)?,
        Suite::Idempotent => idempotent(cfg)?,
        Suite::Galvin => galvin(cfg)?,
        Suite::Growth => growth(cfg)?,
        Suite::UniqueSums => unique_sums(cfg)?,
        Suite::Heredity => heredity(cfg)?,
        Suite::TrivialSum => trivial_sum(cfg)?,
        Suite::Uzn => uzn(cfg)?,
        Suite::Telescoping => telescoping(cfg)?,
        Suite::CarryBound => carry_bound(cfg)?,
        Suite::ParityCore => parity_core(cfg)?,
    };
    Ok(SuiteReport {
        suite,
        engine: cfg.engine,
        seed: cfg.seed,
        checked: tally.checked,
        violation_count: tally.violation_count,
        stats: tally.stats,
        violations: tally.violations,
    })
}

fn bad(msg: impl Into<String>) -> SuiteError {
    SuiteError::BadInput(msg.into())
}

fn semigroups_up_to(cfg: &SuiteConfig) -> Result<Vec<FiniteSemigroup>, SuiteError> {
    if let Some(sg) = &cfg.table {
        return Ok(vec![sg.clone()]);
    }
    let order = cfg.order.unwrap_or(3);
    if !(1..=3).contains(&order) {
        return Err(bad(format!("exhaustive semigroup suites support orders 1..=3, got {order}")));
    }
    Ok((1..=order).flat_map(semigroup::all_semigroups).collect())
}

fn membership(set: FinSet, n: usize) -> Vec<bool> {
    (0..n).map(|i| set.contains(i)).collect()
}

const IDENTITIES: [Identity; 5] = [
    Identity::ComposedTranslation,
    Identity::TranslateCommutesWithShift,
    Identity::ShiftOfIntersection,
    Identity::TranslateCommutesWithStar,
    Identity::IteratedShift,
];

fn tricks(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let groups = semigroups_up_to(cfg)?;
    let mut tally = sweep(&groups, |sg| {
        let mut t = Tally::default();
        let n = sg.order();
        let rows = sg.rows();
        let sets: Vec<FinSet> = (0..1u64 << n).map(FinSet::from_bits).collect();
        for &a in &sets {
            for &b in &sets {
                for (s, tt, p, q) in quadruples(n) {
                    let held: Vec<bool> = match cfg.engine {
                        Engine::Optimized => {
                            let input = TricksInput {
                                a,
                                b,
                                s,
                                t: tt,
                                p: sg.point(p).expect("in range"),
                                q: sg.point(q).expect("in range"),
                            };
                            let report = sg.verify_tricks(&input).expect("valid input");
                            report.checks.iter().map(|c| c.holds()).collect()
                        }
                        Engine::Oracle => {
                            oracle::naive_tricks(&rows, &membership(a, n), &membership(b, n), s, tt, p, q).to_vec()
                        }
                    };
                    for (identity, ok) in IDENTITIES.iter().zip(held) {
                        t.check(ok, || {
                            json!({"table": rows, "a": a, "b": b, "s": s, "t": tt, "p": p, "q": q, "identity": identity})
                        });
                    }
                }
            }
        }
        t
    });
    tally.count("semigroups", groups.len() as u64);
    Ok(tally)
}

fn quadruples(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n.pow(4)).map(move |c| (c % n, c / n % n, c / (n * n) % n, c / (n * n * n)))
}

fn idempotent(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let mut groups = semigroups_up_to(cfg)?;
    let exhaustive = groups.len() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = if cfg.table.is_some() { 0 } else { cfg.samples.unwrap_or(200) };
    for _ in 0..samples {
        let order = rng.gen_range(4..=8);
        groups.push(semigroup::random_semigroup(order, &mut rng));
    }
    let mut tally = sweep(&groups, |sg| {
        let mut t = Tally::default();
        let rows = sg.rows();
        match cfg.engine {
            Engine::Optimized => {
                let e = sg.find_idempotent();
                t.check(rows[e][e] == e, || json!({"table": rows, "found": e}));
            }
            Engine::Oracle => {
                let found = oracle::naive_idempotents(&rows);
                t.check(!found.is_empty(), || json!({"table": rows}));
            }
        }
        t
    });
    tally.count("exhaustive", exhaustive);
    tally.count("random", groups.len() as u64 - exhaustive);
    Ok(tally)
}

fn galvin(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let groups = semigroups_up_to(cfg)?;
    Ok(sweep(&groups, |sg| {
        let mut t = Tally::default();
        let n = sg.order();
        let rows = sg.rows();
        for p in (0..n).filter(|&p| rows[p][p] == p) {
            t.count("idempotent_points", 1);
            for bits in 0..1u64 << n {
                let a = FinSet::from_bits(bits);
                let (member, fixed) = match cfg.engine {
                    Engine::Optimized => {
                        let r = sg.galvin_star_check(a, sg.point(p).expect("in range")).expect("idempotent");
                        (r.membership_holds(), r.fixpoint_holds())
                    }
                    Engine::Oracle => oracle::naive_galvin(&rows, &membership(a, n), p),
                };
                t.check(member && fixed, || json!({"table": rows, "a": a, "p": p, "membership": member, "fixpoint": fixed}));
            }
        }
        t
    }))
}

/// `len` terms with `x_n ≥ g·Σ_{i<n} x_i + 1`, starting below 6.
fn random_growth_sequence(rng: &mut ChaCha8Rng, len: usize, g: u64) -> Vec<u64> {
    let mut terms = Vec::with_capacity(len);
    let mut total = 0u64;
    for _ in 0..len {
        let next = if total == 0 { rng.gen_range(1..=5) } else { g * total + 1 + rng.gen_range(0..=total) };
        terms.push(next);
        total += next;
    }
    terms
}

fn growth(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    if let Some(seq) = &cfg.seq {
        let g = cfg.factor.unwrap_or(4);
        let mut t = Tally::default();
        let first_failure = match cfg.engine {
            Engine::Optimized => fs_engine::growth_violation(seq, g),
            Engine::Oracle => (1..=seq.len()).find(|&n| !oracle::naive_growth(&seq[..n], g)).map(|n| n - 1),
        };
        t.check(first_failure.is_none(), || json!({"seq": seq, "factor": g, "n": first_failure}));
        return Ok(t);
    }
    let g = cfg.factor.unwrap_or(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seqs: Vec<Vec<u64>> = (0..cfg.samples.unwrap_or(1000))
        .map(|_| {
            let len = rng.gen_range(1..=10);
            random_growth_sequence(&mut rng, len, g)
        })
        .collect();
    Ok(sweep(&seqs, |x| {
        let mut t = Tally::default();
        let full = 1u64 << x.len();
        match cfg.engine {
            Engine::Optimized => {
                t.check(fs_engine::check_growth(x, g), || json!({"seq": x, "growth": false}));
                let gs = GrowthSequence::new(x.clone()).expect("valid sequence");
                let cat = fs_engine::enumerate_fs(&gs, 0).expect("short sequence");
                t.check(cat.sums().count() as u64 == full - 1, || json!({"seq": x, "distinct_sums": false}));
                t.check(fs_engine::unique_sums_holds(&gs) == Ok(true), || json!({"seq": x, "unique_sums": false}));
                for mask in 1..full {
                    let support = FinSet::from_bits(mask);
                    let z = gs.sum_over(support);
                    let fast = fs_engine::decode_supp(&cat, z);
                    let naive = oracle::naive_decode(x, z).expect("short sequence");
                    let agrees = fast == Ok(support) && naive.len() == 1 && support.iter().eq(naive[0].iter().copied());
                    t.check(agrees, || json!({"seq": x, "sum": z, "decoded": fast.ok(), "naive": naive}));
                }
            }
            Engine::Oracle => {
                t.check(oracle::naive_growth(x, g), || json!({"seq": x, "growth": false}));
                t.check(oracle::naive_distinct_sums(x) == Ok(true), || json!({"seq": x, "distinct_sums": false}));
                t.check(oracle::naive_unique_sums(x) == Ok(true), || json!({"seq": x, "unique_sums": false}));
                let all = oracle::naive_decode_all(x).expect("short sequence");
                for mask in 1..full {
                    let support: Vec<usize> = (0..x.len()).filter(|i| mask >> i & 1 == 1).collect();
                    let z: u64 = support.iter().map(|&i| x[i]).sum();
                    let reps = &all[&z];
                    t.check(reps.len() == 1 && reps[0] == support, || json!({"seq": x, "sum": z, "naive": reps}));
                }
            }
        }
        t
    }))
}

fn unique_sums(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let decide = |x: &Vec<u64>| -> Result<bool, SuiteError> {
        match cfg.engine {
            Engine::Optimized => {
                let gs = GrowthSequence::new(x.clone()).map_err(|e| bad(e.to_string()))?;
                fs_engine::unique_sums_holds(&gs).map_err(|e| bad(e.to_string()))
            }
            Engine::Oracle => oracle::naive_unique_sums(x).map_err(|e| bad(e.to_string())),
        }
    };
    if let Some(seq) = &cfg.seq {
        let mut t = Tally::default();
        let holds = decide(seq)?;
        t.check(holds, || json!({"seq": seq, "unique_sums": false}));
        return Ok(t);
    }
    let g = cfg.factor.unwrap_or(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seqs: Vec<Vec<u64>> = (0..cfg.samples.unwrap_or(300))
        .map(|_| {
            let len = rng.gen_range(1..=8);
            random_growth_sequence(&mut rng, len, g)
        })
        .collect();
    let verdicts: Vec<Result<bool, SuiteError>> = seqs.par_iter().map(decide).collect();
    let mut t = Tally::default();
    for (x, v) in seqs.iter().zip(verdicts) {
        let holds = v?;
        t.check(holds, || json!({"seq": x, "unique_sums": false}));
    }
    Ok(t)
}

/// Block assignments of `len` indices into at most `max_blocks` nonempty
/// blocks, ordered by their greatest index. Unassigned indices are dropped.
fn increasing_block_assignments(len: usize, max_blocks: usize) -> Vec<Vec<FinSet>> {
    let radix = max_blocks + 1;
    let mut out = Vec::new();
    for code in 0..radix.pow(len as u32) {
        let mut blocks = vec![FinSet::EMPTY; max_blocks];
        let mut c = code;
        for i in 0..len {
            let label = c % radix;
            c /= radix;
            if label > 0 {
                blocks[label - 1] = blocks[label - 1].with(i);
            }
        }
        let used = blocks.iter().take_while(|b| !b.is_empty()).count();
        if used == 0 || blocks[used..].iter().any(|b| !b.is_empty()) {
            continue;
        }
        blocks.truncate(used);
        if blocks.windows(2).all(|w| w[0].last() < w[1].last()) {
            out.push(blocks);
        }
    }
    out
}

fn heredity(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seqs: Vec<Vec<u64>> = (0..cfg.samples.unwrap_or(200))
        .map(|_| {
            let len = rng.gen_range(1..=6);
            random_growth_sequence(&mut rng, len, 4)
        })
        .collect();
    let shapes: Vec<Vec<Vec<FinSet>>> = (0..=6).map(|len| increasing_block_assignments(len, 4)).collect();
    Ok(sweep(&seqs, |x| {
        let mut t = Tally::default();
        let block_sum = |b: &FinSet| b.iter().map(|i| x[i]).sum::<u64>();
        match cfg.engine {
            Engine::Optimized => {
                let gs = GrowthSequence::new(x.clone()).expect("valid sequence");
                let cat = fs_engine::enumerate_fs(&gs, 0).expect("short sequence");
                for blocks in &shapes[x.len()] {
                    let y: Vec<u64> = blocks.iter().map(block_sum).collect();
                    let ok = match cat.condensation(&y) {
                        Ok(CondensationOutcome::Accepted(r)) => {
                            r.condensation.blocks == *blocks
                                && r.blocks_disjoint
                                && r.increasing
                                && r.growth_inherited == Some(true)
                        }
                        _ => false,
                    };
                    t.check(ok, || json!({"seq": x, "condensation": y}));
                }
            }
            Engine::Oracle => {
                let reps = oracle::naive_decode_all(x).expect("short sequence");
                let fs_x = oracle::naive_fs(x).expect("short sequence");
                for blocks in &shapes[x.len()] {
                    let y: Vec<u64> = blocks.iter().map(block_sum).collect();
                    let decoded: Option<Vec<&Vec<usize>>> =
                        y.iter().map(|v| reps.get(v).filter(|r| r.len() == 1).map(|r| &r[0])).collect();
                    let disjoint = decoded.as_ref().is_some_and(|d| {
                        let mut seen = std::collections::BTreeSet::new();
                        d.iter().flat_map(|r| r.iter()).all(|i| seen.insert(*i))
                    });
                    let contained = oracle::naive_fs(&y).expect("short").is_subset(&fs_x);
                    let ok = disjoint && contained && oracle::naive_growth(&y, 4);
                    t.check(ok, || json!({"seq": x, "condensation": y}));
                }
            }
        }
        t
    }))
}

struct LemmaSweep {
    terms: Vec<u64>,
    positions: usize,
    max_terms: usize,
    bound: u64,
}

fn lemma_sweeps(cfg: &SuiteConfig) -> Result<Vec<LemmaSweep>, SuiteError> {
    Ok(match &cfg.base {
        Some(terms) => {
            DivisibleBase::new(terms.clone()).map_err(|e| bad(e.to_string()))?;
            vec![LemmaSweep { terms: terms.clone(), positions: terms.len(), max_terms: 3, bound: *terms.last().unwrap() }]
        }
        None => vec![
            LemmaSweep { terms: (0..8).map(|i| 1 << i).collect(), positions: 8, max_terms: 3, bound: 256 },
            LemmaSweep { terms: vec![1, 2, 6, 24, 120], positions: 5, max_terms: 3, bound: 120 },
        ],
    })
}

fn trivial_sum(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let sweeps = lemma_sweeps(cfg)?;
    let mut total = Tally::default();
    for sw in &sweeps {
        let base = DivisibleBase::new(sw.terms.clone()).map_err(|e| bad(e.to_string()))?;
        let mut t = Tally::default();
        let mut fs_cache: (Vec<u64>, std::collections::BTreeSet<u64>) = Default::default();
        let run = |hyp, visit: &mut dyn FnMut(&oracle::LemmaInstance)| {
            oracle::for_each_lemma_instance(&sw.terms, sw.positions, sw.max_terms, sw.bound, hyp, u64::MAX, visit)
                .map_err(|e| bad(e.to_string()))
        };
        let instances = run(LemmaHypothesis::EarlyTermsBelowB, &mut |inst| {
            let ok = match cfg.engine {
                Engine::Optimized => match alpha::trivial_sum_split(&base, &inst.x, inst.a, inst.b) {
                    Ok(split) => {
                        let sum = |h: FinSet| h.iter().map(|i| inst.x[i]).sum::<u64>();
                        split.h_a.is_disjoint(split.h_b)
                            && split.h_a.union(split.h_b) == split.h
                            && sum(split.h_a) == inst.a
                            && sum(split.h_b) == inst.b
                    }
                    Err(_) => false,
                },
                Engine::Oracle => {
                    if fs_cache.0 != inst.x {
                        fs_cache = (inst.x.clone(), oracle::naive_fs(&inst.x).expect("short"));
                    }
                    fs_cache.1.contains(&inst.a) && fs_cache.1.contains(&inst.b)
                }
            };
            t.check(ok, || json!({"base": sw.terms, "x": inst.x, "a": inst.a, "b": inst.b}));
        })?;
        t.count("instances", instances);

        // The statement with only x_m below b: its counterexamples must all
        // be instances the split rejects for an early term reaching b.
        let literal = oracle::naive_lemma_sweep(
            &sw.terms,
            sw.positions,
            sw.max_terms,
            sw.bound,
            LemmaHypothesis::AsStated,
            u64::MAX,
        )
        .map_err(|e| bad(e.to_string()))?;
        t.count("as_stated_counterexamples", literal.len() as u64);
        if cfg.engine == Engine::Optimized {
            for c in &literal {
                let i = &c.instance;
                let rejected = alpha::trivial_sum_split(&base, &i.x, i.a, i.b)
                    == Err(alpha::AlphaError::PreconditionFailed(alpha::LemmaClause::EarlyTermReachesB));
                t.check(rejected, || json!({"base": sw.terms, "x": i.x, "a": i.a, "b": i.b, "accepted": true}));
            }
        }
        total.absorb(t);
    }
    Ok(total)
}

fn alpha_bases(cfg: &SuiteConfig) -> Result<Vec<DivisibleBase>, SuiteError> {
    match &cfg.base {
        Some(terms) => Ok(vec![DivisibleBase::new(terms.clone()).map_err(|e| bad(e.to_string()))?]),
        None => Ok(vec![
            DivisibleBase::powers_of_two(12).expect("valid"),
            DivisibleBase::new(vec![1, 2, 6, 24, 120]).expect("valid"),
        ]),
    }
}

/// Terms `a_0..a_M` followed by the capacity `a_{M+1}`, as the oracle sees
/// them: recomputed from the listed terms and the top radix.
fn extended_terms(base: &DivisibleBase) -> Vec<u64> {
    (0..=base.positions()).map(|i| base.term(i).expect("within capacity")).collect()
}

fn uzn(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let bases = alpha_bases(cfg)?;
    let units: Vec<(usize, usize)> = bases
        .iter()
        .enumerate()
        .flat_map(|(b, base)| (0..base.positions()).map(move |n| (b, n)))
        .collect();
    let mut tally = sweep(&units, |&(bi, n)| {
        let base = &bases[bi];
        let terms = extended_terms(base);
        let a_n = terms[n];
        let cap = terms[terms.len() - 1];
        let mut t = Tally::default();
        for z in 0..a_n {
            let z_digits = oracle::naive_digits(&terms, z);
            for w in 0..cap {
                let expected = w > z && (w - z) % a_n == 0;
                let got = match cfg.engine {
                    Engine::Optimized => alpha::u_zn_member(base, z, n, w).ok(),
                    Engine::Oracle => Some(w > z && oracle::naive_digits(&terms, w)[..n] == z_digits[..n]),
                };
                t.check(got == Some(expected), || json!({"base": base.terms(), "z": z, "n": n, "w": w, "got": got}));
            }
        }
        t
    });
    tally.count("bases", bases.len() as u64);
    Ok(tally)
}

fn telescoping(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let bases = alpha_bases(cfg)?;
    let units: Vec<(usize, usize)> = bases
        .iter()
        .enumerate()
        .flat_map(|(b, base)| (0..base.positions()).map(move |n| (b, n)))
        .collect();
    Ok(sweep(&units, |&(bi, n)| {
        let base = &bases[bi];
        let terms = extended_terms(base);
        let top = base.positions() - 1;
        let mut t = Tally::default();
        for k in 0..=n {
            if n < top {
                let ok = match cfg.engine {
                    Engine::Optimized => alpha::telescoping_check(base, k, n) == Ok(true),
                    Engine::Oracle => {
                        let cascade: u64 = (k + 1..=n).map(|i| (terms[i + 1] / terms[i] - 1) * terms[i]).sum();
                        cascade + terms[k + 1] == terms[n + 1]
                    }
                };
                t.count("telescoping", 1);
                t.check(ok, || json!({"base": base.terms(), "k": k, "n": n}));
            }
            // Every digit vector on positions 0..=k, shifted past a maximal tail.
            for low_value in 0..terms[k + 1] {
                let low = &oracle::naive_digits(&terms[..=k + 1], low_value)[..=k];
                for b in 0..3u64 {
                    let ok = match cfg.engine {
                        Engine::Optimized => alpha::maximal_tail_shift(base, low, n, b) == Ok(true),
                        Engine::Oracle => {
                            let z = terms[k + 1] - low_value;
                            let tail: u64 = (k + 1..=n).map(|i| terms[i + 1] - terms[i]).sum();
                            let w = b * terms[n + 1] + tail + low_value;
                            w + z == (b + 1) * terms[n + 1]
                        }
                    };
                    t.count("tail_shift", 1);
                    t.check(ok, || json!({"base": base.terms(), "low": low, "n": n, "b": b}));
                }
            }
        }
        t
    }))
}

fn carry_bound(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let bases = alpha_bases(cfg)?;
    let units: Vec<(usize, usize)> = bases
        .iter()
        .enumerate()
        .flat_map(|(b, base)| (0..base.positions().min(7)).map(move |s2| (b, s2)))
        .collect();
    Ok(sweep(&units, |&(bi, s2)| {
        let base = &bases[bi];
        let terms = extended_terms(base);
        let top_radix = terms[s2 + 1] / terms[s2];
        let mut t = Tally::default();
        for u_value in 0..terms[s2] {
            let u = &oracle::naive_digits(&terms[..=s2], u_value)[..s2];
            for v_low in 0..terms[s2] {
                for v_top in 0..top_radix - 1 {
                    if u_value == 0 && v_low == 0 && v_top == 0 {
                        continue;
                    }
                    let mut v = oracle::naive_digits(&terms[..=s2], v_low)[..s2].to_vec();
                    v.push(v_top);
                    let ok = match cfg.engine {
                        Engine::Optimized => alpha::carry_bound_check(base, s2, u, &v) == Ok(true),
                        Engine::Oracle => {
                            let total = u_value + v_low + v_top * terms[s2];
                            0 < total && total < terms[s2 + 1]
                        }
                    };
                    t.check(ok, || json!({"base": base.terms(), "s2": s2, "u": u, "v": v}));
                }
            }
        }
        t
    }))
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    Singletons,
    Doubled,
    Reversed,
}

fn family(shape: Shape, n: usize) -> Vec<FinSet> {
    (0..n)
        .map(|i| match shape {
            Shape::Singletons => FinSet::singleton(i),
            Shape::Doubled => FinSet::singleton(2 * i).with(2 * i + 1),
            Shape::Reversed => FinSet::singleton(n - 1 - i),
        })
        .collect()
}

/// Partial partitions of `0..n` into blocks, each block listed once, blocks
/// ordered by least element.
fn partial_partitions(n: usize) -> Vec<Vec<FinSet>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<FinSet>, out: &mut Vec<Vec<FinSet>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        go(i + 1, n, blocks, out);
        for j in 0..blocks.len() {
            let saved = blocks[j];
            blocks[j] = saved.with(i);
            go(i + 1, n, blocks, out);
            blocks[j] = saved;
        }
        blocks.push(FinSet::singleton(i));
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

fn parity_core(cfg: &SuiteConfig) -> Result<Tally, SuiteError> {
    let max = cfg.order.unwrap_or(6);
    if !(1..=8).contains(&max) {
        return Err(bad(format!("parity-core supports families of 1..=8 members, got {max}")));
    }
    let units: Vec<(Shape, usize)> = [Shape::Singletons, Shape::Doubled, Shape::Reversed]
        .into_iter()
        .flat_map(|shape| (1..=max).map(move |n| (shape, n)))
        .collect();
    Ok(sweep(&units, |&(shape, n)| {
        let members = family(shape, n);
        let fam = FUFamily::new(members.clone()).expect("disjoint by construction");
        let mut t = Tally::default();
        decomposition_checks(cfg.engine, &fam, &mut t);
        clash_checks(cfg.engine, &fam, &mut t);
        t
    }))
}

fn decomposition_checks(engine: Engine, fam: &FUFamily, t: &mut Tally) {
    let members = fam.members();
    let n = members.len();
    let as_set = |v: Vec<usize>| v.into_iter().collect::<FinSet>();
    for code in 0..3usize.pow(n as u32) {
        let (mut xi, mut yi, mut c) = (FinSet::EMPTY, FinSet::EMPTY, code);
        for i in 0..n {
            match c % 3 {
                1 => xi = xi.with(i),
                2 => yi = yi.with(i),
                _ => {}
            }
            c /= 3;
        }
        let (x, y) = (fam.union_of(xi), fam.union_of(yi));
        let (pi_x, pi_y, pi_xy, emerged, separated, gap_tally) = match engine {
            Engine::Optimized => {
                let gaps = fam.classify_gaps(x, y).expect("unions of members");
                let tally: usize = gaps
                    .iter()
                    .map(|g| match g.kind {
                        GapKind::Both => 2,
                        GapKind::BeginOnly | GapKind::EndOnly => 1,
                        GapKind::Neither => 0,
                    })
                    .sum();
                (
                    fam.pi(x).expect("union"),
                    fam.pi(y).expect("union"),
                    fam.pi(x.union(y)).expect("union"),
                    fam.emerged_indices(x, y).expect("disjoint"),
                    fam.parity_additive(x, y).expect("disjoint"),
                    tally,
                )
            }
            Engine::Oracle => {
                let tally: usize = oracle::naive_gaps(members, x, y)
                    .iter()
                    .map(|&(_, _, first, last)| first as usize + last as usize)
                    .sum();
                let separated = match (xi.first(), xi.last(), yi.first(), yi.last()) {
                    (Some(x0), Some(x1), Some(y0), Some(y1)) => x1 + 1 < y0 || y1 + 1 < x0,
                    _ => false,
                };
                (
                    as_set(oracle::naive_pi(members, x)),
                    as_set(oracle::naive_pi(members, y)),
                    as_set(oracle::naive_pi(members, x.union(y))),
                    as_set(oracle::naive_emerged(members, x, y)),
                    separated,
                    tally,
                )
            }
        };
        let parts_disjoint = pi_x.is_disjoint(pi_y) && emerged.is_disjoint(pi_x.union(pi_y));
        t.check(parts_disjoint && pi_xy == pi_x.union(pi_y).union(emerged), || {
            json!({"check": "decomposition", "members": members, "x": x, "y": y})
        });
        if separated {
            t.count("separated_pairs", 1);
            t.check(emerged.is_empty(), || json!({"check": "additivity", "members": members, "x": x, "y": y}));
        }
        if let (Some(lo), Some(hi)) = (xi.first(), xi.last()) {
            let inside = emerged.iter().filter(|&i| lo <= i && i < hi).count();
            t.check(inside == gap_tally, || {
                json!({"check": "gaps", "members": members, "x": x, "y": y, "emerged": inside, "gap_tally": gap_tally})
            });
        }
    }
}

fn clash_checks(engine: Engine, fam: &FUFamily, t: &mut Tally) {
    let members = fam.members();
    let n = members.len();
    for blocks in partial_partitions(n) {
        if blocks.is_empty() {
            continue;
        }
        let t_members: Vec<FinSet> = blocks.iter().map(|b| fam.union_of(*b)).collect();
        let cond = FUFamily::new(t_members.clone()).expect("disjoint blocks");
        let cover = fam.full_cover(&cond);
        let first_b = (0..n).rev().take_while(|&i| cover[i].is_some()).last();
        let Some(first_b) = first_b else { continue };
        for b in first_b..n {
            // (|π(x∪y)|, |π(x∪z)|, |π(y)|, |π(z)|, π(x) even, π(z) empty-set flag)
            let sizes = match engine {
                Engine::Optimized => match fam.construct_xyz(&cond, b, &cover) {
                    Ok(r) => {
                        t.check(r.covered, || json!({"check": "cover", "members": members, "t": t_members, "b": b}));
                        let clash = r.verdict == Verdict::ParityClash;
                        Some((r.pi_xy.len(), r.pi_xz.len(), r.pi_y.len(), r.pi_z.len(), r.pi_x.len(), clash))
                    }
                    Err(_) => None,
                },
                Engine::Oracle => oracle::naive_xyz(members, &t_members, b).map(|(x, _, y, z)| {
                    let pi = |s: FinSet| oracle::naive_pi(members, s).len();
                    let (xy, xz) = (pi(x.union(y)), pi(x.union(z)));
                    (xy, xz, pi(y), pi(z), pi(x), xy % 2 == 1 || xz % 2 == 1)
                }),
            };
            let Some((xy, xz, y, z, x, clash)) = sizes else {
                t.count("too_short", 1);
                continue;
            };
            t.count("instances", 1);
            t.check((xy + xz + y + z) % 2 == 1, || {
                json!({"check": "parity-sum", "members": members, "t": t_members, "b": b})
            });
            if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                t.count("homogeneous_instances", 1);
                t.check(clash, || json!({"check": "clash", "members": members, "t": t_members, "b": b}));
            }
            if !clash {
                t.count("both_even_instances", 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(suite: Suite, engine: Engine) -> SuiteReport {
        let cfg = SuiteConfig { seed: 7, engine, samples: Some(20), ..Default::default() };
        run_suite(suite, &cfg).unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn engines_agree_on_every_suite() {
        for suite in Suite::ALL {
            let fast = run(suite, Engine::Optimized);
            let slow = run(suite, Engine::Oracle);
            assert!(fast.passed(), "{suite}: {:?}", fast.violations);
            assert!(slow.passed(), "{suite}: {:?}", slow.violations);
            // the optimized engine adds rejection and cover checks to these two
            if !matches!(suite, Suite::TrivialSum | Suite::ParityCore) {
                assert_eq!(fast.checked, slow.checked, "{suite}");
            }
            assert_eq!(fast.stats, slow.stats, "{suite}");
        }
    }

    #[test]
    fn growth_counterexample_is_reported() {
        let cfg = SuiteConfig { seq: Some(vec![1, 2, 4, 8]), factor: Some(4), ..Default::default() };
        for engine in [Engine::Optimized, Engine::Oracle] {
            let r = run_suite(Suite::Growth, &SuiteConfig { engine, ..cfg.clone() }).unwrap();
            assert!(!r.passed());
            assert_eq!(r.violations[0]["n"], 1);
        }
    }

    #[test]
    fn block_assignments_are_canonical() {
        // Three indices into at most two blocks ordered by maximum.
        let all = increasing_block_assignments(3, 2);
        assert!(all.iter().all(|b| b.windows(2).all(|w| w[0].last() < w[1].last())));
        let distinct: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(partial_partitions(3).len(), 15);
    }

    #[test]
    fn literal_clash_statement_fails_without_homogeneity() {
        let r = run(Suite::ParityCore, Engine::Optimized);
        assert!(r.stats["both_even_instances"] > 0);
        assert!(r.stats["homogeneous_instances"] > 0);
    }
}
