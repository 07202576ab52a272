//! Command-line front end: poset generation, invariant reports, the
//! exact extremal solver, and the bound arithmetic, with `--json`
//! switching every report to a machine format of identical content.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 budget exhausted
//! (the report is still printed, with exact=false).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use ordex_core::bounds;
use ordex_core::dimension::{dimension, has_dim_at_most, Realizer, DEFAULT_NODE_BUDGET};
use ordex_core::extremal::{
    ex_star_max_dim, verify_theorem1_instance, ExtremalResult, SolveOptions, DEFAULT_ORACLE_BUDGET,
};
use ordex_core::format::{parse_poset, write_dot, write_poset};
use ordex_core::invariants::{
    extract_low_dim_subposet, height, longest_chain, max_antichain, min_chain_cover,
    ExtractionKind,
};
use ordex_core::Poset;

#[derive(Parser)]
#[command(name = "ordex", version, about = "Exact finite-poset order toolkit")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a constructed poset to a file in `poset v1` format.
    Gen {
        /// Constructor and parameters: `chain N`, `antichain N`,
        /// `boolean N`, `standard M`, `random N DENSITY SEED`,
        /// `power K <constructor...>`.
        #[arg(required = true)]
        spec: Vec<String>,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
        /// Also write a Hasse diagram in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Report size, height, width, chain cover, and dimension with
    /// certificates.
    Analyze {
        input: PathBuf,
        /// Node budget for the dimension search.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Extract an induced subposet of dimension <= D with at least
    /// ceil(sqrt(D n)) elements.
    Extract {
        input: PathBuf,
        /// Dimension bound (>= 2).
        #[arg(short, long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact size of the largest induced subposet of dimension <= D,
    /// with witness and realizer.
    Exact {
        input: PathBuf,
        /// Dimension bound (>= 1).
        #[arg(short, long, default_value_t = 2)]
        dim: usize,
        /// Dimension-oracle call budget; when exhausted the best found
        /// value is reported with exact=false and exit code 3.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
        /// Worker threads; 0 uses all available.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bound arithmetic: exponent table, extraction lower bound, digit
    /// upper bound, and the lexicographic-power inequality.
    Bounds {
        #[command(subcommand)]
        sub: BoundsCommand,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Exponent-minimizing m per dimension, as TSV rows `d  m  exponent`.
    Table {
        #[arg(long)]
        json: bool,
    },
    /// Extraction guarantee sqrt(d n) for an n-element poset.
    Lower {
        n: u64,
        d: u64,
        #[arg(long)]
        json: bool,
    },
    /// Digit-decomposition upper bound on the extremal size at n
    /// elements, with the witness arithmetic.
    Cor2 {
        n: u64,
        d: u64,
        /// Antichain pair count per digit position; defaults to the
        /// exponent-optimal value for d.
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Check ex*(P^k) <= ex*(P)^k by solving both sides exactly.
    Thm1 {
        /// Base poset constructor in colon form, e.g. `standard:3`.
        spec: String,
        d: usize,
        k: u32,
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
    elements: usize,
}

/// `report v1` envelope shared by every command.
#[derive(Serialize)]
struct RunReport<T: Serialize> {
    report: &'static str,
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<InputDigest>,
    result: T,
    timing_ms: u64,
    exact: bool,
}

fn emit<T: Serialize>(
    json: bool,
    input: Option<InputDigest>,
    result: T,
    started: Instant,
    exact: bool,
    human: impl FnOnce(&T),
) -> Result<()> {
    if json {
        let report = RunReport {
            report: "v1",
            command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
            input,
            result,
            timing_ms: started.elapsed().as_millis() as u64,
            exact,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        human(&result);
    }
    Ok(())
}

fn load_poset(path: &Path) -> Result<(Poset, InputDigest)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone())
        .with_context(|| format!("{} is not UTF-8", path.display()))?;
    let poset = parse_poset(&text).with_context(|| format!("parsing {}", path.display()))?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        elements: poset.n(),
    };
    Ok((poset, digest))
}

fn parse_usize(token: &str, what: &str) -> Result<usize> {
    token
        .parse()
        .with_context(|| format!("{what}: expected a non-negative integer, got `{token}`"))
}

/// Builds a poset from constructor tokens; `power K ...` recurses on
/// the rest.
fn build_poset(tokens: &[&str]) -> Result<Poset> {
    let (kind, args) = tokens
        .split_first()
        .context("empty constructor specification")?;
    let expect = |k: usize| -> Result<()> {
        if args.len() != k {
            bail!("`{kind}` takes {k} parameter(s), got {}", args.len());
        }
        Ok(())
    };
    match *kind {
        "chain" => {
            expect(1)?;
            Ok(Poset::chain(parse_usize(args[0], "chain size")?))
        }
        "antichain" => {
            expect(1)?;
            Ok(Poset::antichain(parse_usize(args[0], "antichain size")?))
        }
        "boolean" => {
            expect(1)?;
            let k = args[0]
                .parse()
                .with_context(|| format!("boolean rank: got `{}`", args[0]))?;
            Ok(Poset::boolean_lattice(k)?)
        }
        "standard" => {
            expect(1)?;
            Ok(Poset::standard_example(parse_usize(args[0], "pair count")?)?)
        }
        "random" => {
            expect(3)?;
            let n = parse_usize(args[0], "element count")?;
            let density: f64 = args[1]
                .parse()
                .with_context(|| format!("density: got `{}`", args[1]))?;
            let seed: u64 = args[2]
                .parse()
                .with_context(|| format!("seed: got `{}`", args[2]))?;
            Ok(Poset::random(n, density, seed)?)
        }
        "power" => {
            let (k, rest) = args
                .split_first()
                .context("`power` needs an exponent and a base constructor")?;
            let k: u32 = k.parse().with_context(|| format!("exponent: got `{k}`"))?;
            Ok(build_poset(rest)?.lex_power(k)?)
        }
        other => bail!(
            "unknown constructor `{other}` (expected chain, antichain, boolean, standard, random, or power)"
        ),
    }
}

#[derive(Serialize)]
struct GenResult {
    spec: String,
    elements: usize,
    covers: usize,
    out: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    dot: Option<String>,
}

fn cmd_gen(spec: Vec<String>, out: PathBuf, dot: Option<PathBuf>, json: bool) -> Result<u8> {
    let started = Instant::now();
    let tokens: Vec<&str> = spec.iter().map(String::as_str).collect();
    let p = build_poset(&tokens)?;
    fs::write(&out, write_poset(&p)).with_context(|| format!("writing {}", out.display()))?;
    if let Some(dot_path) = &dot {
        fs::write(dot_path, write_dot(&p))
            .with_context(|| format!("writing {}", dot_path.display()))?;
    }
    let result = GenResult {
        spec: tokens.join(" "),
        elements: p.n(),
        covers: p.cover_relations().len(),
        out: out.display().to_string(),
        dot: dot.as_ref().map(|d| d.display().to_string()),
    };
    emit(json, None, result, started, true, |r| {
        println!("{}: {} elements, {} covers -> {}", r.spec, r.elements, r.covers, r.out);
        if let Some(d) = &r.dot {
            println!("hasse diagram -> {d}");
        }
    })?;
    Ok(0)
}

#[derive(Serialize)]
struct AnalyzeResult {
    n: usize,
    height: usize,
    longest_chain: Vec<usize>,
    width: usize,
    max_antichain: Vec<usize>,
    chain_cover_size: usize,
    chain_cover: Vec<Vec<usize>>,
    /// None when the search budget ran out before the dimension was
    /// pinned down.
    dimension: Option<usize>,
    realizer: Option<Realizer>,
}

fn cmd_analyze(input: PathBuf, budget: u64, json: bool) -> Result<u8> {
    let started = Instant::now();
    let (p, digest) = load_poset(&input)?;
    let (dim, realizer) = match dimension(&p, budget) {
        Ok((d, r)) => (Some(d), Some(r)),
        Err(_) => (None, None),
    };
    let exact = dim.is_some();
    let cover = min_chain_cover(&p);
    let result = AnalyzeResult {
        n: p.n(),
        height: height(&p),
        longest_chain: longest_chain(&p),
        width: ordex_core::invariants::width(&p),
        max_antichain: max_antichain(&p).members.members().to_vec(),
        chain_cover_size: cover.len(),
        chain_cover: cover.chains,
        dimension: dim,
        realizer,
    };
    emit(json, Some(digest), result, started, exact, |r| {
        println!("n:             {}", r.n);
        println!("height:        {}", r.height);
        println!("longest chain: {}", join(&r.longest_chain));
        println!("width:         {}", r.width);
        println!("max antichain: {}", join(&r.max_antichain));
        println!("chain cover:   {} chains", r.chain_cover_size);
        for c in &r.chain_cover {
            println!("  {}", join(c));
        }
        match r.dimension {
            Some(d) => println!("dimension:     {d}"),
            None => println!("dimension:     unknown (budget exhausted)"),
        }
        if let Some(realizer) = &r.realizer {
            println!("realizer:");
            for ext in &realizer.extensions {
                println!("  {}", join(ext.order()));
            }
        }
    })?;
    Ok(if exact { 0 } else { 3 })
}

#[derive(Serialize)]
struct ExtractResult {
    n: usize,
    d: usize,
    kind: ExtractionKind,
    subset: Vec<usize>,
    size: usize,
    guarantee: f64,
    integer_guarantee: usize,
    /// Realizer of the extracted subposet, produced whenever it is
    /// small enough to materialize.
    certificate: Option<Realizer>,
}

fn cmd_extract(input: PathBuf, dim: usize, json: bool) -> Result<u8> {
    let started = Instant::now();
    let (p, digest) = load_poset(&input)?;
    let r = extract_low_dim_subposet(&p, dim)?;
    let certificate = if r.subset.len() <= 4096 {
        let sub = p.induced(&r.subset)?;
        has_dim_at_most(&sub, dim, DEFAULT_NODE_BUDGET)
            .ok()
            .flatten()
    } else {
        None
    };
    let result = ExtractResult {
        n: p.n(),
        d: dim,
        kind: r.kind,
        subset: r.subset.members().to_vec(),
        size: r.subset.len(),
        guarantee: r.guarantee,
        integer_guarantee: r.integer_guarantee,
        certificate,
    };
    emit(json, Some(digest), result, started, true, |r| {
        println!("n:          {}", r.n);
        println!("d:          {}", r.d);
        let kind = match &r.kind {
            ExtractionKind::Antichain => "antichain".to_string(),
            ExtractionKind::ChainUnion { chains } => {
                format!("union of {} chains", chains.len())
            }
        };
        println!("kind:       {kind}");
        println!("size:       {} (guarantee {})", r.size, r.integer_guarantee);
        println!("subset:     {}", join(&r.subset));
        if let ExtractionKind::ChainUnion { chains } = &r.kind {
            for c in chains {
                println!("  {}", join(c));
            }
        }
        if let Some(cert) = &r.certificate {
            println!("realizer:");
            for ext in &cert.extensions {
                println!("  {}", join(ext.order()));
            }
        }
    })?;
    Ok(0)
}

#[derive(Serialize)]
struct ExactResult {
    n: usize,
    d: usize,
    #[serde(flatten)]
    solve: ExtremalResult,
}

fn cmd_exact(input: PathBuf, dim: usize, budget: u64, threads: usize, json: bool) -> Result<u8> {
    if dim < 1 {
        bail!("dimension bound must be at least 1");
    }
    let started = Instant::now();
    let (p, digest) = load_poset(&input)?;
    let opts = SolveOptions {
        oracle_budget: budget,
        threads,
        ..SolveOptions::default()
    };
    let solve = ex_star_max_dim(&p, dim, &opts);
    let exact = solve.exact;
    let result = ExactResult {
        n: p.n(),
        d: dim,
        solve,
    };
    emit(json, Some(digest), result, started, exact, |r| {
        println!("n:            {}", r.n);
        println!("d:            {}", r.d);
        let qual = if r.solve.exact {
            "exact"
        } else {
            "lower bound, budget exhausted"
        };
        println!("value:        {} ({qual})", r.solve.value);
        println!("witness:      {}", join(r.solve.witness.members()));
        println!("realizer:");
        for ext in &r.solve.certificate.extensions {
            println!("  {}", join(ext.order()));
        }
        println!("nodes:        {}", r.solve.stats.nodes);
        println!("oracle calls: {}", r.solve.stats.oracle_calls);
        println!("memo hits:    {}", r.solve.stats.memo_hits);
        println!("subproblems:  {}", r.solve.stats.subproblems);
    })?;
    Ok(if exact { 0 } else { 3 })
}

#[derive(Serialize)]
struct TableResult {
    rows: Vec<TableRow>,
}

#[derive(Serialize)]
struct TableRow {
    d: u64,
    m: u64,
    exponent: String,
}

fn cmd_bounds(sub: BoundsCommand) -> Result<u8> {
    let started = Instant::now();
    match sub {
        BoundsCommand::Table { json } => {
            let rows: Vec<TableRow> = bounds::minimization_table()
                .into_iter()
                .map(|r| TableRow {
                    d: r.d,
                    m: r.m,
                    exponent: bounds::format_exponent(r.exponent),
                })
                .collect();
            emit(json, None, TableResult { rows }, started, true, |t| {
                for r in &t.rows {
                    println!("{}\t{}\t{}", r.d, r.m, r.exponent);
                }
            })?;
            Ok(0)
        }
        BoundsCommand::Lower { n, d, json } => {
            let r = bounds::extraction_lower_bound(n, d)?;
            emit(json, None, r, started, true, |r| {
                println!("n:         {}", r.n);
                println!("d:         {}", r.d);
                println!("bound:     {:.4}", r.bound);
                println!("guarantee: {}", r.integer_guarantee);
            })?;
            Ok(0)
        }
        BoundsCommand::Cor2 { n, d, m, json } => {
            let r = match m {
                Some(m) => bounds::digit_upper_bound_with_m(n, m, d)?,
                None => bounds::digit_upper_bound(n, d)?,
            };
            emit(json, None, r, started, true, |r| {
                println!("n:              {}", r.n);
                println!("d:              {}", r.d);
                println!("m:              {}", r.m);
                println!("base:           {}", r.digits.base);
                println!("digits:         {}", join(&r.digits.digits));
                println!("digit bound:    {}", r.digit_bound);
                println!("smoothed bound: {:.4}", r.smoothed_bound);
                println!("exponent:       {}", bounds::format_exponent(r.exponent));
            })?;
            Ok(0)
        }
        BoundsCommand::Thm1 {
            spec,
            d,
            k,
            budget,
            threads,
            json,
        } => {
            let tokens: Vec<&str> = spec.split(':').collect();
            let p = build_poset(&tokens)?;
            let opts = SolveOptions {
                oracle_budget: budget,
                threads,
                ..SolveOptions::default()
            };
            let r = verify_theorem1_instance(&p, d, k, &opts)?;
            let exact = r.base.exact && r.power.exact;
            emit(json, None, r, started, exact, |r| {
                println!("base:    {spec}");
                println!("k:       {}", r.k);
                let lhs_qual = if r.power.exact { "exact" } else { "lower bound" };
                let base_qual = if r.base.exact { "exact" } else { "lower bound" };
                println!("lhs:     {} ({lhs_qual})", r.power.value);
                println!(
                    "rhs:     {}^{} = {} ({base_qual} base)",
                    r.base.value, r.k, r.rhs
                );
                println!("holds:   {}", if r.holds { "yes" } else { "no" });
            })?;
            Ok(if exact { 0 } else { 3 })
        }
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = match args.command {
        Command::Gen {
            spec,
            out,
            dot,
            json,
        } => cmd_gen(spec, out, dot, json),
        Command::Analyze {
            input,
            budget,
            json,
        } => cmd_analyze(input, budget, json),
        Command::Extract { input, dim, json } => cmd_extract(input, dim, json),
        Command::Exact {
            input,
            dim,
            budget,
            threads,
            json,
        } => cmd_exact(input, dim, budget, threads, json),
        Command::Bounds { sub } => cmd_bounds(sub),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
