use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use sigrad::conditions::luca_log_bound;
use sigrad::facts::{claim_catalog, load_claims, verify_all, ClaimResult, ClaimVerdict, FactsError};
use sigrad::multigraph::run_identity_suite;
use sigrad::search::{mutual_pair_search, solution_search, MutualPair, SearchConfig, SearchError, DEFAULT_BLOCK_SIZE};

use crate::{Breach, Refuted, WORKERS_ENV};

/// Accepts plain decimal integers and powers of ten written `10^k`.
fn parse_count(text: &str) -> Result<u64, String> {
    let t = text.trim().replace('_', "");
    if let Some(k) = t.strip_prefix("10^") {
        let k: u32 = k.parse().map_err(|_| format!("'{text}' is not a number"))?;
        return 10u64.checked_pow(k).ok_or_else(|| format!("'{text}' is too large"));
    }
    t.parse().map_err(|_| format!("'{text}' is not a number"))
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Upper bound (inclusive); accepts 10^k.
    #[arg(long, value_parser = parse_count)]
    pub limit: u64,
    /// Worker threads; defaults to $SIGRAD_WORKERS, then the number of CPUs.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Integers per sieve block.
    #[arg(long = "block", default_value_t = DEFAULT_BLOCK_SIZE)]
    pub block: u64,
    #[arg(long)]
    pub structured: bool,
    /// Suppress progress on standard error.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct SearchDocument {
    pub limit: u64,
    pub block_size: u64,
    pub workers: usize,
    pub solutions: Vec<u64>,
}

fn default_workers() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => bail!("{WORKERS_ENV} must be a positive integer, got '{v}'"),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

pub fn search(args: &SearchArgs, out: &mut impl Write) -> Result<()> {
    let workers = match args.workers {
        Some(w) => w,
        None => default_workers()?,
    };
    let cfg = SearchConfig {
        limit: args.limit,
        block_size: args.block,
        workers,
    };
    cfg.validate()?;
    let start = Instant::now();
    let step = (cfg.block_count() / 10).max(1);
    let progress = |done: u64, total: u64| {
        if done.is_multiple_of(step) || done == total {
            eprintln!("progress: {done}/{total} blocks");
        }
    };
    let outcome = solution_search(&cfg, if args.quiet { None } else { Some(&progress) }).map_err(|e| match e {
        SearchError::Verification(_) => anyhow::Error::new(Breach(e.to_string())),
        other => anyhow::Error::new(other),
    })?;
    let elapsed = start.elapsed();
    if args.structured {
        let doc = SearchDocument {
            limit: cfg.limit,
            block_size: cfg.block_size,
            workers: cfg.workers,
            solutions: outcome.solutions.clone(),
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else {
        for n in &outcome.solutions {
            writeln!(out, "{n}")?;
        }
    }
    if !args.quiet {
        eprintln!(
            "searched 1..={} with {} worker(s), block {}: {} solution(s) in {:.3} s",
            cfg.limit,
            cfg.workers,
            cfg.block_size,
            outcome.solutions.len(),
            elapsed.as_secs_f64()
        );
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PairsArgs {
    /// Largest prime considered; accepts 10^k.
    #[arg(long, value_parser = parse_count)]
    pub bound: u64,
    #[arg(long)]
    pub structured: bool,
}

pub fn pairs(args: &PairsArgs, out: &mut impl Write) -> Result<()> {
    if args.bound >= 1 << 31 {
        bail!("bound must be below 2^31");
    }
    let found: Vec<MutualPair> = mutual_pair_search(args.bound);
    if args.structured {
        writeln!(out, "{}", serde_json::to_string_pretty(&found)?)?;
    } else {
        for MutualPair { p, q } in found {
            writeln!(out, "({p},{q})")?;
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct FactsArgs {
    /// Claim ledger to verify instead of the shipped one.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub structured: bool,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct FactsDocument {
    pub verified: usize,
    pub corrected: usize,
    pub refuted: usize,
    pub results: Vec<ClaimResult>,
}

pub fn facts(args: &FactsArgs, out: &mut impl Write) -> Result<()> {
    let claims = match &args.file {
        Some(path) => load_claims(path)?,
        None => claim_catalog(),
    };
    let results = verify_all(&claims).map_err(|e| match e {
        FactsError::CrossCheck(_) => anyhow::Error::new(Breach(e.to_string())),
        other => anyhow::Error::new(other),
    })?;
    let count = |v: ClaimVerdict| results.iter().filter(|r| r.verdict == v).count();
    let doc = FactsDocument {
        verified: count(ClaimVerdict::Verified),
        corrected: count(ClaimVerdict::Corrected),
        refuted: count(ClaimVerdict::Refuted),
        results,
    };
    if args.structured {
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else {
        for r in &doc.results {
            let verdict = serde_json::to_value(r.verdict)?;
            writeln!(out, "{:<9} {:<30} {}", verdict.as_str().unwrap_or(""), r.id, r.computed)?;
            if let Some(note) = &r.note {
                writeln!(out, "          note: {note}")?;
            }
        }
        writeln!(
            out,
            "{} claims: {} verified, {} corrected, {} refuted",
            doc.results.len(),
            doc.verified,
            doc.corrected,
            doc.refuted
        )?;
    }
    if doc.refuted > 0 {
        return Err(Refuted(doc.refuted).into());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 1000)]
    pub graphs: usize,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(2..=64))]
    pub max_vertices: u32,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_multiplicity: u32,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

pub fn identity(args: &IdentityArgs, out: &mut impl Write) -> Result<()> {
    let s = run_identity_suite(args.graphs, args.max_vertices, args.max_multiplicity, args.seed);
    writeln!(out, "{}/{} identities hold", s.graphs_holding, s.graphs)?;
    writeln!(
        out,
        "{} vertices checked, {} also by path enumeration",
        s.vertices_checked, s.vertices_enumerated
    )?;
    writeln!(out, "seed {}", s.seed)?;
    for f in &s.failures {
        writeln!(out, "graph {} vertex {}: {}", f.graph_index, f.vertex, f.detail)?;
    }
    if !s.all_hold() {
        return Err(Breach(format!("{} path-sum failures", s.failures.len())).into());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct LucaArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub l: u64,
    #[arg(long)]
    pub t: u32,
}

pub fn luca(args: &LucaArgs, out: &mut impl Write) -> Result<()> {
    let b = luca_log_bound(args.k, args.l, args.t).context("bound parameters")?;
    writeln!(out, "n < exp(X) with X = {:e}", b.log_bound)?;
    writeln!(out, "ln X = {}", b.log_log_bound)?;
    Ok(())
}
