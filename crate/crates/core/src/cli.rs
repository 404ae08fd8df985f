//! The `fuforge` command line: verification suites, witness searches, digit
//! decoding and finite-sum exploration, with text or JSON output and an
//! append-only result cache for searches.

use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::alpha::{self, DivisibleBase};
use crate::finset::FinSet;
use crate::fs_engine::{self, CondensationOutcome, GrowthSequence};
use crate::oracle;
use crate::search::{self, Coloring, ColoringSpec, Domain};
use crate::semigroup::FiniteSemigroup;
use crate::suites::{self, Engine, Suite, SuiteConfig};

/// Bumped whenever cached search output would change shape or meaning.
pub const CACHE_VERSION: &str = concat!("fuforge-", env!("CARGO_PKG_VERSION"), "/cache-1");

/// Colourings the oracle threshold may enumerate when no budget is given.
const ORACLE_DEFAULT_BUDGET: u64 = 1 << 22;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Violation = 1,
    Usage = 2,
    Unresolved = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cache {path}: {source}")]
    Cache { path: PathBuf, source: std::io::Error },
}

fn input(msg: impl ToString) -> CliError {
    CliError::Input(msg.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "fuforge", version, about = "Finite-sum and finite-union combinatorics, made executable")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Route the computation through the brute-force reference implementations.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Report wall-clock time (omitted by default so output stays reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Seed for randomized sweeps and random colourings.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node budget per search subtree (colourings, for the oracle threshold).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
    /// JSON-lines file caching search results.
    #[arg(long, global = true, env = "FUFORGE_CACHE")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Search for monochromatic witnesses or thresholds.
    Search {
        #[command(subcommand)]
        kind: SearchCommand,
    },
    /// Print digit expansions and supports against a divisible base.
    Decode(DecodeArgs),
    /// List the finite sums of a sequence and test a condensation.
    Explore(ExploreArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// tricks, idempotent, galvin, growth, unique-sums, heredity, trivial-sum,
    /// uzn, telescoping, carry-bound or parity-core.
    pub suite: Suite,
    /// Largest semigroup order, or largest family size for parity-core.
    #[arg(long)]
    pub order: Option<usize>,
    /// Divisible base: `pow2` or comma-separated terms starting at 1.
    #[arg(long)]
    pub base: Option<String>,
    /// A single sequence to check instead of random ones.
    #[arg(long)]
    pub seq: Option<NumberList>,
    /// Growth factor.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub factor: Option<u64>,
    /// Number of random samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// A row-major operation table as JSON, e.g. `[[0,1],[1,0]]`.
    #[arg(long)]
    pub table: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum SearchCommand {
    /// Finite-sums witness in a coloured interval [1, N].
    Fs(ColoredArgs),
    /// Least N forcing a finite-sums witness under every r-colouring.
    FsThreshold(ThresholdArgs),
    /// Finite-unions witness among subsets of {0..n-1}.
    Fu(ColoredArgs),
    /// Homogeneous ordered-pair family over {0..n-1}.
    Pair(ColoredArgs),
}

#[derive(Debug, Args)]
pub struct ColoredArgs {
    /// Size of the ground interval or set.
    #[arg(long = "n", visible_alias = "N")]
    pub n: usize,
    /// Number of generators.
    #[arg(long)]
    pub k: usize,
    /// Number of colours.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// constant, parity, threshold:T, random[:SEED], size-parity, min-parity,
    /// sum-size-parity or table:c0,c1,...
    #[arg(long, visible_alias = "colors")]
    pub coloring: ColoringSpec,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Largest N to try.
    #[arg(long)]
    pub max: usize,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// `pow2` (sized to each value) or comma-separated terms starting at 1.
    #[arg(long)]
    pub base: String,
    #[arg(required = true)]
    pub values: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    #[arg(long)]
    pub seq: NumberList,
    /// Only sums over indices from this one on.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// A candidate condensation whose finite sums should lie in those of the sequence.
    #[arg(long)]
    pub condense: Option<NumberList>,
}

/// A comma-separated list of non-negative integers, e.g. `1,2,6,24`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberList(pub Vec<u64>);

impl std::str::FromStr for NumberList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_list(s).map(NumberList)
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|part| part.trim().parse::<u64>().map_err(|e| format!("'{part}': {e}")))
        .collect()
}

fn parse_base_terms(s: &str) -> Result<Vec<u64>, CliError> {
    if s == "pow2" {
        return Ok((0..12).map(|i| 1u64 << i).collect());
    }
    parse_list(s).map_err(input)
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub stdout: String,
    pub status: Status,
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage } else { Status::Ok }.into();
        }
    };
    match run(&cli) {
        Ok(resp) => {
            print!("{}", resp.stdout);
            resp.status.into()
        }
        Err(e) => {
            eprintln!("error: {e}");
            Status::Usage.into()
        }
    }
}

/// Runs a parsed command on a pool of the requested size.
pub fn run(cli: &Cli) -> Result<Response, CliError> {
    match cli.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build()
            .map_err(input)?
            .install(|| execute(cli)),
        None => execute(cli),
    }
}

fn execute(cli: &Cli) -> Result<Response, CliError> {
    let started = Instant::now();
    let (mut report, text, status) = match &cli.command {
        Command::Verify(args) => verify(cli, args)?,
        Command::Search { kind } => search_cmd(cli, kind)?,
        Command::Decode(args) => decode(cli, args)?,
        Command::Explore(args) => explore(cli, args)?,
    };
    let wall = started.elapsed().as_secs_f64();
    let stdout = if cli.json {
        if cli.timing {
            report["wall_time"] = json!(wall);
        }
        let mut s = serde_json::to_string_pretty(&report).expect("values serialize");
        s.push('\n');
        s
    } else {
        let mut s = text;
        if cli.timing {
            writeln!(s, "wall time: {wall:.3}s").unwrap();
        }
        s
    };
    Ok(Response { stdout, status })
}

type Outcome = (Value, String, Status);

fn engine(cli: &Cli) -> Engine {
    if cli.oracle {
        Engine::Oracle
    } else {
        Engine::Optimized
    }
}

fn verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let table = match &args.table {
        Some(raw) => {
            let rows: Vec<Vec<usize>> = serde_json::from_str(raw).map_err(|e| input(format!("--table: {e}")))?;
            Some(FiniteSemigroup::new(rows).map_err(input)?)
        }
        None => None,
    };
    let cfg = SuiteConfig {
        seed: cli.seed,
        engine: engine(cli),
        order: args.order,
        base: args.base.as_deref().map(parse_base_terms).transpose()?,
        seq: args.seq.clone().map(|l| l.0),
        factor: args.factor,
        samples: args.samples,
        table,
    };
    let report = suites::run_suite(args.suite, &cfg).map_err(input)?;
    let mut text = String::new();
    let engine_name = if cli.oracle { "oracle" } else { "optimized" };
    writeln!(
        text,
        "{} ({engine_name}, seed {}): {} checked, {} violations",
        report.suite, report.seed, report.checked, report.violation_count
    )
    .unwrap();
    for (k, v) in &report.stats {
        writeln!(text, "  {k}: {v}").unwrap();
    }
    for v in &report.violations {
        writeln!(text, "  violation: {v}").unwrap();
    }
    let status = if report.passed() { Status::Ok } else { Status::Violation };
    text.push_str(if report.passed() { "PASS\n" } else { "FAIL\n" });
    let value = serde_json::to_value(&report).expect("report serializes");
    Ok((value, text, status))
}

/// A search request as hashed into the cache key.
struct Request {
    command: &'static str,
    domain: Domain,
    r: usize,
    k: usize,
    coloring: Option<(String, String)>,
}

impl Request {
    fn key(&self, cli: &Cli) -> String {
        let canonical = json!({
            "command": self.command,
            "domain": self.domain,
            "r": self.r,
            "k": self.k,
            "coloring_hash": self.coloring.as_ref().map(|(_, h)| h),
            "budget": cli.budget,
            "oracle": cli.oracle,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    fn report(&self, cli: &Cli, result: Value, nodes: Option<u64>) -> Value {
        let mut report = json!({
            "command": self.command,
            "domain": self.domain,
            "r": self.r,
            "k": self.k,
            "engine": if cli.oracle { "oracle" } else { "optimized" },
            "result": result,
        });
        if let Some((spec, hash)) = &self.coloring {
            report["coloring"] = json!(spec);
            report["coloring_hash"] = json!(hash);
        }
        if let Some(n) = nodes {
            report["nodes_explored"] = json!(n);
        }
        report
    }
}

fn search_cmd(cli: &Cli, kind: &SearchCommand) -> Result<Outcome, CliError> {
    let (request, coloring) = match kind {
        SearchCommand::FsThreshold(a) => (
            Request { command: "fs-threshold", domain: Domain::Interval { n: a.max }, r: a.r, k: a.k, coloring: None },
            None,
        ),
        SearchCommand::Fs(a) | SearchCommand::Fu(a) | SearchCommand::Pair(a) => {
            let (command, domain) = match kind {
                SearchCommand::Fs(_) => ("fs", Domain::Interval { n: a.n }),
                SearchCommand::Fu(_) => ("fu", Domain::Subsets { n: a.n }),
                _ => ("pair", Domain::OrderedPairs { n: a.n }),
            };
            let c = Coloring::build(domain, a.r, &a.coloring, cli.seed).map_err(input)?;
            let hash = hex::encode(Sha256::digest(c.values()));
            let req = Request { command, domain, r: a.r, k: a.k, coloring: Some((a.coloring.to_string(), hash)) };
            (req, Some(c))
        }
    };

    let cache_path = cli.cache.as_deref();
    let key = request.key(cli);
    let cached = match cache_path {
        Some(p) => cache_lookup(p, &key)?,
        None => None,
    };
    let report = match cached {
        Some(report) => report,
        None => {
            let report = run_search(cli, kind, &request, coloring.as_ref())?;
            if let Some(p) = cache_path {
                cache_store(p, &key, &report)?;
            }
            report
        }
    };
    let status = match report["result"]["status"].as_str() {
        Some("unresolved") => Status::Unresolved,
        _ => Status::Ok,
    };
    let text = describe_search(&report);
    Ok((report, text, status))
}

fn run_search(cli: &Cli, kind: &SearchCommand, req: &Request, c: Option<&Coloring>) -> Result<Value, CliError> {
    if cli.oracle {
        return Ok(req.report(cli, oracle_search(cli, kind, c)?, None));
    }
    let (result, nodes) = match kind {
        SearchCommand::FsThreshold(a) => {
            let s = search::fs_threshold(a.k, a.r, a.max, cli.budget).map_err(input)?;
            (to_value(&s.outcome), s.nodes_explored)
        }
        SearchCommand::Fs(a) | SearchCommand::Fu(a) | SearchCommand::Pair(a) => {
            let c = c.expect("coloured searches build a colouring");
            let s = match kind {
                SearchCommand::Fs(_) => search::fs_witness(c, a.k, cli.budget),
                SearchCommand::Fu(_) => search::fu_witness(c, a.k, cli.budget),
                _ => search::pair_witness(c, a.k, cli.budget),
            }
            .map_err(input)?;
            (to_value(&s.outcome), s.nodes_explored)
        }
    };
    Ok(req.report(cli, result, Some(nodes)))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outcomes serialize")
}

fn oracle_search(cli: &Cli, kind: &SearchCommand, c: Option<&Coloring>) -> Result<Value, CliError> {
    let found = |color: u8, generators: Value| json!({"status": "found", "witness": {"color": color, "generators": generators}});
    let sets = |ts: Vec<FinSet>| serde_json::to_value(ts).expect("sets serialize");
    Ok(match kind {
        SearchCommand::FsThreshold(a) => {
            if a.k == 0 || a.r == 0 {
                return Err(input("k and r must be positive"));
            }
            let budget = cli.budget.unwrap_or(ORACLE_DEFAULT_BUDGET);
            let mut verdict = json!({"status": "unresolved", "bound": a.max, "reason": "bound"});
            for n in 1..=a.max {
                match oracle::naive_threshold(a.k, a.r, n, budget) {
                    Ok(true) => {
                        verdict = json!({"status": "resolved", "threshold": n});
                        break;
                    }
                    Ok(false) => {}
                    Err(_) => {
                        verdict = json!({"status": "unresolved", "bound": a.max, "reason": "budget"});
                        break;
                    }
                }
            }
            verdict
        }
        SearchCommand::Fs(a) | SearchCommand::Fu(a) | SearchCommand::Pair(a) => {
            let c = c.expect("coloured searches build a colouring");
            let min_k = if matches!(kind, SearchCommand::Pair(_)) { 2 } else { 1 };
            if a.k < min_k {
                return Err(input(format!("k must be at least {min_k}")));
            }
            let hit = match kind {
                SearchCommand::Fs(_) => oracle::naive_fs_witness(&c.values(), a.k).map(|(col, xs)| found(col, json!(xs))),
                SearchCommand::Fu(_) => oracle::naive_fu_witness(c, a.n, a.k).map(|(col, ts)| found(col, sets(ts))),
                _ => oracle::naive_pair_witness(c, a.n, a.k).map(|(col, ts)| found(col, sets(ts))),
            };
            hit.unwrap_or_else(|| json!({"status": "none"}))
        }
    })
}

fn describe_search(report: &Value) -> String {
    let result = &report["result"];
    let mut text = format!("{} on {} (r={}, k={}): ", report["command"].as_str().unwrap_or("?"), domain_label(&report["domain"]), report["r"], report["k"]);
    match result["status"].as_str() {
        Some("found") => {
            let w = &result["witness"];
            let gens: Vec<String> = w["generators"]
                .as_array()
                .map(|a| a.iter().map(|g| g.as_str().map_or_else(|| g.to_string(), str::to_string)).collect())
                .unwrap_or_default();
            write!(text, "found colour {}: ({})", w["color"], gens.join(",")).unwrap();
        }
        Some("none") => text.push_str("no witness"),
        Some("resolved") => write!(text, "threshold {}", result["threshold"]).unwrap(),
        Some("unresolved") => match result["reason"].as_str() {
            Some("bound") => write!(text, "unresolved, no threshold up to {}", result["bound"]).unwrap(),
            _ => text.push_str("unresolved, budget exhausted"),
        },
        _ => text.push_str("unknown result"),
    }
    text.push('\n');
    if let Some(n) = report["nodes_explored"].as_u64() {
        writeln!(text, "nodes explored: {n}").unwrap();
    }
    text
}

fn domain_label(v: &Value) -> String {
    serde_json::from_value::<Domain>(v.clone()).map_or_else(|_| v.to_string(), |d| d.to_string())
}

fn cache_lookup(path: &Path, key: &str) -> Result<Option<Value>, CliError> {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(source) => return Err(CliError::Cache { path: path.to_path_buf(), source }),
    };
    let mut hit = None;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|source| CliError::Cache { path: path.to_path_buf(), source })?;
        // unreadable or stale lines are skipped, never fatal
        let Ok(record) = serde_json::from_str::<Value>(&line) else { continue };
        if record["version"] == CACHE_VERSION && record["key"] == key {
            hit = Some(record["report"].clone());
        }
    }
    Ok(hit)
}

fn cache_store(path: &Path, key: &str, report: &Value) -> Result<(), CliError> {
    let record = json!({"version": CACHE_VERSION, "key": key, "report": report});
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|source| CliError::Cache { path: path.to_path_buf(), source })?;
    writeln!(file, "{record}").map_err(|source| CliError::Cache { path: path.to_path_buf(), source })
}

fn decode(cli: &Cli, args: &DecodeArgs) -> Result<Outcome, CliError> {
    let fixed = if args.base == "pow2" {
        None
    } else {
        Some(DivisibleBase::new(parse_list(&args.base).map_err(input)?).map_err(input)?)
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for &v in &args.values {
        let base = match &fixed {
            Some(b) => b.clone(),
            None => {
                let bits = (64 - v.leading_zeros() as usize).max(1);
                DivisibleBase::powers_of_two(bits).map_err(|e| input(format!("{v}: {e}")))?
            }
        };
        let digits: Vec<u64> = if cli.oracle {
            if v >= base.capacity() {
                return Err(input(format!("{v} exceeds the capacity {} of the base", base.capacity())));
            }
            oracle::naive_digits(base.terms(), v)
        } else {
            alpha::expand(&base, v).map_err(|e| input(format!("{v}: {e}")))?.digits().to_vec()
        };
        let support: FinSet = (0..digits.len()).filter(|&i| digits[i] != 0).collect();
        let line: Vec<String> = digits.iter().map(u64::to_string).collect();
        write!(text, "{} supp={support}", line.join(":")).unwrap();
        if let (Some(lo), Some(hi)) = (support.first(), support.last()) {
            write!(text, " alpha-min={lo} alpha-max={hi}").unwrap();
        }
        text.push('\n');
        rows.push(json!({
            "value": v,
            "base": base.terms(),
            "digits": digits,
            "support": support,
            "alpha_min": support.first(),
            "alpha_max": support.last(),
        }));
    }
    Ok((Value::Array(rows), text, Status::Ok))
}

fn explore(cli: &Cli, args: &ExploreArgs) -> Result<Outcome, CliError> {
    let seq = GrowthSequence::new(args.seq.0.clone()).map_err(input)?;
    if args.k >= seq.len() {
        return Err(input(format!("offset {} leaves no terms", args.k)));
    }
    let (sums, decoded): (Vec<u64>, Option<Vec<(u64, FinSet)>>) = if cli.oracle {
        let tail = &args.seq.0[args.k..];
        let all = oracle::naive_decode_all(tail).map_err(input)?;
        let unique = all.values().all(|reps| reps.len() == 1);
        let decoded = unique.then(|| {
            all.iter()
                .map(|(&s, reps)| (s, reps[0].iter().map(|i| i + args.k).collect()))
                .collect()
        });
        (all.keys().copied().collect(), decoded)
    } else {
        let export = fs_engine::enumerate_fs(&seq, args.k).map_err(input)?.export();
        let decoded = export.decode.map(|d| d.into_iter().map(|e| (e.sum, e.support)).collect());
        (export.sums, decoded)
    };

    let mut text = String::new();
    let factor = seq.growth_factor();
    writeln!(
        text,
        "sequence {}: {}, {} sums from index {}",
        join(&args.seq.0),
        factor.map_or_else(|| "no growth factor".to_string(), |g| format!("growth factor {g}")),
        sums.len(),
        args.k
    )
    .unwrap();
    match &decoded {
        Some(entries) => {
            for (s, supp) in entries {
                writeln!(text, "  {s} = sum over {supp}").unwrap();
            }
        }
        None => writeln!(text, "  sums are not uniquely represented: {}", join(&sums)).unwrap(),
    }

    let mut report = json!({
        "sequence": args.seq.0,
        "offset": args.k,
        "growth_factor": factor,
        "sums": sums,
        "decode": decoded.as_ref().map(|d| d.iter().map(|(s, supp)| json!({"sum": s, "support": supp})).collect::<Vec<_>>()),
    });

    if let Some(NumberList(y)) = &args.condense {
        let catalog = fs_engine::enumerate_fs(&seq, 0).map_err(input)?;
        let outcome = catalog.condensation(y).map_err(input)?;
        match &outcome {
            CondensationOutcome::Accepted(r) => {
                let blocks: Vec<String> = r.condensation.blocks.iter().map(FinSet::to_string).collect();
                writeln!(
                    text,
                    "condensation {}: blocks {}, disjoint {}, increasing {}, growth inherited {}",
                    join(y),
                    blocks.join(" "),
                    yes_no(r.blocks_disjoint),
                    yes_no(r.increasing),
                    r.growth_inherited.map_or("n/a", yes_no)
                )
                .unwrap();
            }
            CondensationOutcome::Refused { violating_sum } => {
                writeln!(text, "condensation {}: refused, {violating_sum} is not a finite sum", join(y)).unwrap();
            }
        }
        report["condensation"] = serde_json::to_value(&outcome).expect("outcome serializes");
    }
    Ok((report, text, Status::Ok))
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Response {
        let cli = Cli::try_parse_from(std::iter::once("fuforge").chain(args.iter().copied())).expect("parses");
        run(&cli).expect("runs")
    }

    #[test]
    fn decode_matches_documented_lines() {
        assert!(run_args(&["decode", "--base", "pow2", "13"]).stdout.starts_with("1:0:1:1 supp={0,2,3}"));
        assert!(run_args(&["decode", "--base", "1,2,6,24", "17"]).stdout.starts_with("1:2:2:0 "));
        assert_eq!(run_args(&["decode", "--base", "pow2", "0"]).stdout, "0 supp={}\n");
    }

    #[test]
    fn decode_oracle_agrees() {
        for base in ["pow2", "1,2,6,24"] {
            let fast = run_args(&["decode", "--base", base, "0", "5", "17", "95"]);
            let slow = run_args(&["decode", "--oracle", "--base", base, "0", "5", "17", "95"]);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn search_examples() {
        let r = run_args(&["search", "fs", "--N", "3", "--k", "2", "--colors", "constant", "--json"]);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["result"]["witness"]["generators"], json!([1, 2]));
        let r = run_args(&["search", "fu", "--n", "4", "--k", "2", "--coloring", "size-parity", "--json"]);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["result"]["witness"]["generators"], json!(["{0,1}", "{2,3}"]));
        assert_eq!(r.status, Status::Ok);
    }

    #[test]
    fn tiny_budget_is_unresolved() {
        let r = run_args(&["search", "fs-threshold", "--k", "3", "--r", "2", "--max", "40", "--budget", "1"]);
        assert_eq!(r.status, Status::Unresolved);
    }

    #[test]
    fn explore_reports_supports_and_condensations() {
        let r = run_args(&["explore", "--seq", "1,5,25", "--condense", "6,25"]);
        assert!(r.stdout.contains("growth factor 4"));
        assert!(r.stdout.contains("31 = sum over {0,1,2}"));
        assert!(r.stdout.contains("blocks {0,1} {2}"));
        let slow = run_args(&["explore", "--oracle", "--seq", "1,5,25", "--json"]);
        let fast = run_args(&["explore", "--seq", "1,5,25", "--json"]);
        assert_eq!(slow, fast);
    }

    #[test]
    fn list_parsing_rejects_garbage() {
        assert_eq!(parse_list("1, 2,3"), Ok(vec![1, 2, 3]));
        assert!(parse_list("1,x").is_err());
        assert!(Cli::try_parse_from(["fuforge", "verify", "nonsense"]).is_err());
    }
}
