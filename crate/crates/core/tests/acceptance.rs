//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fuforge::oracle::{self, LemmaHypothesis};
use fuforge::search::{self, Coloring, ColoringSpec, Domain, Generators, ThresholdOutcome, WitnessOutcome};
use fuforge::suites::{self, Engine, Suite, SuiteConfig, SuiteReport};

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn run(suite: Suite, cfg: SuiteConfig) -> SuiteReport {
    suites::run_suite(suite, &SuiteConfig { seed: SEED, ..cfg }).expect("suite configuration is valid")
}

/// Runs a suite under both engines; passes when both find nothing.
fn both_engines(suite: Suite, cfg: SuiteConfig) -> (bool, String) {
    let fast = run(suite, SuiteConfig { engine: Engine::Optimized, ..cfg.clone() });
    let slow = run(suite, SuiteConfig { engine: Engine::Oracle, ..cfg });
    let ok = fast.passed() && slow.passed();
    let mut detail = format!(
        "{suite}: {} checks / {} violations (oracle: {} / {})",
        fast.checked, fast.violation_count, slow.checked, slow.violation_count
    );
    if let Some(v) = fast.violations.first().or(slow.violations.first()) {
        detail.push_str(&format!("; first: {v}"));
    }
    (ok, detail)
}

fn tricks() -> Verdict {
    let started = Instant::now();
    let (ok, detail) = both_engines(Suite::Tricks, SuiteConfig { order: Some(3), ..Default::default() });
    let elapsed = started.elapsed();
    verdict(ok && elapsed < Duration::from_secs(60), format!("{detail}; {:.1}s", elapsed.as_secs_f64()))
}

fn idempotents_and_galvin() -> Verdict {
    let (a, da) = both_engines(Suite::Idempotent, SuiteConfig { order: Some(3), ..Default::default() });
    let (b, db) = both_engines(Suite::Galvin, SuiteConfig { order: Some(3), ..Default::default() });
    verdict(a && b, format!("{da}; {db}"))
}

fn growth() -> Verdict {
    let (ok, detail) = both_engines(Suite::Growth, SuiteConfig { samples: Some(1000), factor: Some(2), ..Default::default() });
    verdict(ok, detail)
}

fn heredity() -> Verdict {
    let (ok, detail) = both_engines(Suite::Heredity, SuiteConfig { samples: Some(200), ..Default::default() });
    verdict(ok, detail)
}

fn trivial_sums() -> Verdict {
    let started = Instant::now();
    let binary: Vec<u64> = (0..8).map(|i| 1 << i).collect();
    let mixed = vec![1, 2, 6, 24, 120];
    let mut ok = true;
    let mut notes = Vec::new();
    for (terms, p, bound) in [(&binary, 8, 256), (&mixed, 5, 120)] {
        let repaired = oracle::naive_lemma_sweep(terms, p, 3, bound, LemmaHypothesis::EarlyTermsBelowB, u64::MAX)
            .expect("sweep finishes");
        let literal = oracle::naive_lemma_sweep(terms, p, 3, bound, LemmaHypothesis::AsStated, u64::MAX)
            .expect("sweep finishes");
        ok &= repaired.is_empty();
        notes.push(format!(
            "base {terms:?}: {} counterexamples with early terms below b ({} when only x_m is required below b)",
            repaired.len(),
            literal.len()
        ));
    }
    let suite = run(Suite::TrivialSum, SuiteConfig::default());
    ok &= suite.passed();
    notes.push(format!(
        "split verified on {} instances, {} rejections checked, {} failures",
        suite.stats.get("instances").copied().unwrap_or(0),
        suite.stats.get("as_stated_counterexamples").copied().unwrap_or(0),
        suite.violation_count
    ));
    let elapsed = started.elapsed();
    ok &= elapsed < Duration::from_secs(300);
    verdict(ok, format!("{}; {:.1}s", notes.join("; "), elapsed.as_secs_f64()))
}

fn alpha_identities() -> Verdict {
    let mut bases: Vec<Vec<u64>> = (2..=12).map(|p| (0..p).map(|i| 1u64 << i).collect()).collect();
    bases.push(vec![1, 2, 6, 24, 120]);
    let mut ok = true;
    let mut checked = 0;
    let mut first_failure = None;
    for base in &bases {
        for suite in [Suite::Uzn, Suite::Telescoping, Suite::CarryBound] {
            let r = run(suite, SuiteConfig { base: Some(base.clone()), ..Default::default() });
            checked += r.checked;
            if !r.passed() {
                ok = false;
                first_failure.get_or_insert_with(|| format!("{suite} on {base:?}: {:?}", r.violations.first()));
            }
        }
    }
    let mut detail = format!("{} bases, {checked} checks", bases.len());
    if let Some(f) = first_failure {
        detail.push_str(&format!("; first failure: {f}"));
    }
    verdict(ok, detail)
}

fn parity_core() -> Verdict {
    let started = Instant::now();
    let (ok, detail) = both_engines(Suite::ParityCore, SuiteConfig { order: Some(6), ..Default::default() });
    let elapsed = started.elapsed();
    verdict(ok && elapsed < Duration::from_secs(300), format!("{detail}; {:.1}s", elapsed.as_secs_f64()))
}

fn search_differential() -> Verdict {
    let threshold = match search::fs_threshold(2, 2, 32, None).expect("valid parameters").outcome {
        ThresholdOutcome::Resolved { threshold, .. } => threshold,
        other => return verdict(false, format!("threshold unresolved: {other:?}")),
    };
    let mut mismatches = Vec::new();
    // past the threshold too, as far as the naive enumeration stays cheap
    for n in 1..=16 {
        let fast = search::fs_forced(2, 2, n, None).expect("valid parameters");
        let naive = oracle::naive_threshold(2, 2, n, 1 << 16).expect("within budget");
        if fast != Some(naive) {
            mismatches.push(format!("N={n}: engine {fast:?}, oracle {naive}"));
        }
    }

    // every witness the engine emits on every 2-colouring up to the threshold
    let mut witnesses = 0u64;
    for n in 1..=threshold {
        for code in 0u32..1 << n {
            let colors: Vec<u8> = (0..n).map(|i| (code >> i & 1) as u8).collect();
            let c = Coloring::build(Domain::Interval { n }, 2, &ColoringSpec::Table(colors.clone()), 0)
                .expect("table fits the domain");
            let found = search::fs_witness(&c, 2, None).expect("valid parameters").outcome;
            match (found, oracle::naive_fs_witness(&colors, 2)) {
                (WitnessOutcome::Found { witness }, Some((color, xs))) => {
                    witnesses += 1;
                    if !witness.verify(&c) || witness.color != color || witness.generators != Generators::Integers(xs) {
                        mismatches.push(format!("witness on {colors:?}"));
                    }
                }
                (WitnessOutcome::None, None) => {}
                (fast, slow) => mismatches.push(format!("{colors:?}: engine {fast:?}, oracle {slow:?}")),
            }
        }
    }
    let mut detail = format!("threshold(k=2, r=2) = {threshold}; {witnesses} witnesses re-verified");
    if let Some(m) = mismatches.first() {
        detail.push_str(&format!("; {} mismatches, first: {m}", mismatches.len()));
    }
    verdict(mismatches.is_empty(), detail)
}

fn determinism() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_fuforge");
    let seed = SEED.to_string();
    let mut runs: Vec<Vec<String>> = Suite::ALL
        .iter()
        .map(|s| vec!["verify".to_string(), s.to_string()])
        .collect();
    for q in [
        "search fs --N 40 --k 3 --colors random",
        "search fu --n 6 --k 3 --coloring random",
        "search pair --n 6 --k 2 --coloring random",
        "search fs-threshold --k 2 --r 2 --max 32",
    ] {
        runs.push(q.split(' ').map(str::to_string).collect());
    }
    let mut differing = Vec::new();
    for args in &runs {
        let outputs: Vec<Vec<u8>> = ["1", "4"]
            .iter()
            .map(|w| {
                let out = Command::new(exe)
                    .args(args)
                    .args(["--json", "--seed", &seed, "--workers", w])
                    .env_remove("FUFORGE_CACHE")
                    .output()
                    .expect("binary runs");
                out.stdout
            })
            .collect();
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(args.join(" "));
        }
    }
    verdict(
        differing.is_empty(),
        format!("{} commands with 1 and 4 workers; differing: {differing:?}", runs.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("tricks identities over all semigroups of order <= 3", tricks),
        ("idempotents and the Galvin star", idempotents_and_galvin),
        ("growth, distinct sums and greedy decoding", growth),
        ("heredity under condensation", heredity),
        ("trivial-sum lemma sweep", trivial_sums),
        ("alpha identities", alpha_identities),
        ("parity core", parity_core),
        ("search differential", search_differential),
        ("determinism across worker counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("{} {}. {name}: {}", if v.ok { "PASS" } else { "FAIL" }, i + 1, v.detail);
        failed += usize::from(!v.ok);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
