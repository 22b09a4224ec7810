use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use num_bigint::BigUint;
use num_traits::Zero;

use sigrad::arith::{factorize, h_int, Natural};
use sigrad::conditions::{
    bkkl_classify, chain_witnesses, closure_path_report, literature_conditions, ConditionReport, FirstEdge,
};
use sigrad::divisor_graph::{l_set, DivisorGraph};

use crate::view::{set, show_witness, AnalyzeReport, ArcView, ClosureView, GraphView, RationalView};
use crate::Breach;

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Decimal integer to analyse.
    pub n: String,
    /// Emit one JSON document instead of text.
    #[arg(long)]
    pub structured: bool,
    /// Write G(n) in DOT format to this file.
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Exponent of p in the first chain link: 2 reads sigma(p^2), 1 reads sigma(p).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub chain_exponent: u32,
    /// Longest chain listed.
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
}

fn parse_natural(text: &str) -> Result<Natural> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        bail!("'{text}' is not a decimal integer");
    }
    Ok(t.parse::<BigUint>()?)
}

pub fn build_report(n: &Natural, first_edge: FirstEdge, max_k: usize) -> Result<(AnalyzeReport, DivisorGraph)> {
    let f = factorize(n)?;
    let dg = DivisorGraph::build(&f)?;
    let l = l_set(&f);
    let parts = dg.closure_parts(&l)?;
    let sigma = f.sigma();
    let literature = literature_conditions(&f);
    let report = AnalyzeReport {
        n: n.to_string(),
        factorization: f.to_string(),
        sigma: sigma.to_string(),
        sigma_factorization: factorize(&sigma)?.to_string(),
        radical: f.radical().to_string(),
        h: RationalView::of(&h_int(&f)),
        known_solution: literature.known_solution,
        graph: GraphView::of(dg.graph()),
        closure_arcs: GraphView::of(&parts.c).arcs,
        closure: ClosureView::of(&dg.closure_identity_check(&l)),
        literature,
        form: bkkl_classify(&f),
        closure_paths: closure_path_report(&f, first_edge)?,
        chain_exponent: first_edge.exponent(),
        chain_max_k: max_k,
        chain_witnesses: chain_witnesses(&f, first_edge, Some(max_k)),
    };
    if let Some(id) = report.closure.identity.as_ref().filter(|i| !i.holds) {
        // The identity is only evaluated when the in-degrees allow it.
        if report.closure.degree_defects.is_empty() {
            return Err(Breach(format!("closure identity failed: {} != {}", id.lhs, id.rhs)).into());
        }
    }
    Ok((report, dg))
}

pub fn run(args: &AnalyzeArgs, out: &mut impl Write) -> Result<()> {
    let n = parse_natural(&args.n)?;
    if n.is_zero() {
        bail!("n must be positive");
    }
    if n == BigUint::from(1u32) {
        writeln!(out, "n = 1: sigma(1) = rad(1)^2 = 1, a known solution; G(n) needs n >= 2")?;
        return Ok(());
    }
    let first_edge = FirstEdge::try_from(args.chain_exponent)?;
    let (report, dg) = build_report(&n, first_edge, args.max_k)?;
    if let Some(path) = &args.dot {
        std::fs::write(path, dg.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    if args.structured {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        print_human(&report, out)?;
    }
    Ok(())
}

fn print_conditions(title: &str, r: &ConditionReport, out: &mut impl Write) -> Result<()> {
    writeln!(out, "{title}:")?;
    for e in &r.entries {
        let verdict = serde_json::to_value(e.verdict)?;
        writeln!(
            out,
            "  {:<34} {:<15} {} [{}]",
            e.id,
            verdict.as_str().unwrap_or(""),
            e.detail,
            show_witness(&e.witness)
        )?;
    }
    Ok(())
}

fn print_human(r: &AnalyzeReport, out: &mut impl Write) -> Result<()> {
    writeln!(out, "n = {} = {}", r.n, r.factorization)?;
    writeln!(out, "sigma(n) = {} = {}", r.sigma, r.sigma_factorization)?;
    writeln!(out, "rad(n) = {}", r.radical)?;
    writeln!(out, "h(n) = {} ~ {}", r.h.exact, r.h.decimal)?;
    if r.known_solution {
        writeln!(out, "known solution")?;
    }
    writeln!(out, "G(n): vertices {}", set(&r.graph.vertices))?;
    for a in &r.graph.arcs {
        writeln!(out, "  {} -> {} x{}", a.tail, a.head, a.multiplicity)?;
    }
    let c = &r.closure;
    writeln!(out, "L = {}", set(&c.l))?;
    writeln!(out, "N(L) = {}", set(&c.n))?;
    writeln!(out, "B(L) = {}", set(&c.b))?;
    writeln!(out, "M(L) = {}", set(&c.m))?;
    let arcs: Vec<String> = r.closure_arcs.iter().map(show_arc).collect();
    writeln!(out, "C(L) arcs: {}", set(&arcs))?;
    writeln!(out, "closure identity:")?;
    writeln!(out, "  precondition: {}", serde_json::to_string(&c.precondition)?)?;
    if !c.degree_defects.is_empty() {
        let d: Vec<String> = c.degree_defects.iter().map(|(v, k)| format!("{v} (in-degree {k})")).collect();
        writeln!(out, "  in-degree not 2: {}", d.join(", "))?;
    }
    if let Some(i) = &c.identity {
        writeln!(out, "  product identity: {} = {} {}", i.lhs, i.rhs, if i.holds { "holds" } else { "fails" })?;
    }
    if let Some(b) = &c.bound {
        writeln!(
            out,
            "  h(C) = {} ~ {}, bound^2 = {} ~ {}, strict: {}",
            b.h_c.exact, b.h_c.decimal, b.bound_squared.exact, b.bound_squared.decimal, b.strictly_exceeds
        )?;
    }
    writeln!(out, "{}", r.literature.note)?;
    print_conditions("literature conditions", &r.literature, out)?;
    let mut form = format!("form: {:?}", r.form.tag);
    if let Some(p1) = &r.form.p1 {
        form.push_str(&format!(", p1 = {p1}"));
    }
    if let Some(p2) = &r.form.p2 {
        form.push_str(&format!(", p2 = {p2}"));
    }
    writeln!(out, "{form}")?;
    let semantics = r.closure_paths.semantics.map(|s| s.label()).unwrap_or("");
    print_conditions(&format!("closure paths ({semantics})"), &r.closure_paths, out)?;
    writeln!(out, "chain witnesses (k <= {}, first exponent {}):", r.chain_max_k, r.chain_exponent)?;
    if r.chain_witnesses.is_empty() {
        writeln!(out, "  none")?;
    }
    for w in &r.chain_witnesses {
        let chain: Vec<String> = w.chain.iter().map(ToString::to_string).collect();
        writeln!(out, "  {} -> {} -> {}", w.p, chain.join(" -> "), w.p_prime)?;
    }
    Ok(())
}

fn show_arc(a: &ArcView) -> String {
    if a.multiplicity == 1 {
        format!("{}->{}", a.tail, a.head)
    } else {
        format!("{}->{} x{}", a.tail, a.head, a.multiplicity)
    }
}
