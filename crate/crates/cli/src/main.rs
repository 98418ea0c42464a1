//! `wsep`: command-line front end. Every verb prints one JSON document (or a
//! JSONL/CSV stream) on stdout.
//!
//! Exit codes: 0 success, 2 invalid input, 3 budget exhausted, 1 when an
//! internal check fails.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use wsep::cliques::{build_compat_graph, complete_to_maximal, purity_of_graph};
use wsep::domains::{
    boundary_intervals, build_domain_AIJ, chord_chain, cluster_distance, lr_chain, lr_domain, lr_labels, lr_subset,
    DistanceMethod,
};
use wsep::ground::{all_subsets, binomial, k_subsets};
use wsep::mutations::{explore_mutation_graph, mutation_distance, DEFAULT_BUDGET};
use wsep::necklaces::{
    canonical_permutation, length_of, necklace_from_perm, necklace_rank, DecoratedPermutation,
};
use wsep::octahedron::{p4_counts, p4_counts_from_lengths};
use wsep::{Collection, Error, PurityMode, Relation, Subset};

#[derive(Parser)]
#[command(name = "wsep", version, about = "Weakly separated collections over the cyclic ground set [n]")]
struct Cli {
    /// Worker threads; falls back to the THREADS environment variable.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Jsonl,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Weak and chord separation of two subsets.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// List a domain: A_{I,J}, all k-subsets, boundary intervals or 2^[n].
    Domain(DomainArgs),
    /// Maximal-clique sizes of a domain under weak or chord separation.
    Purity {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value = "weak")]
        relation: Relation,
        /// Track only the smallest and largest clique.
        #[arg(long)]
        streaming: bool,
    },
    /// Cluster distance d(I, J).
    Distance {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "exact")]
        method: DistanceMethod,
    },
    /// Mutation distance D(I, J) by breadth-first search.
    Mutdist {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Permit problems beyond k(n-k) = 12.
        #[arg(long)]
        allow_large: bool,
    },
    /// Grassmann necklace, alignments and length of a decorated permutation.
    Necklace {
        /// One-line notation, e.g. 4,8,7,10,9,3,2,1,6,5.
        #[arg(long, conflicts_with = "a")]
        perm: Option<String>,
        /// Colour fixed points: "3:-1,5:1". Unlisted fixed points get +1.
        #[arg(long, requires = "perm")]
        colors: Option<String>,
        /// Use the canonical permutation of this subset of [n].
        #[arg(long, requires = "n")]
        a: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// LR(n) purity and the chain of every maximal collection (0-based labels).
    Lr {
        #[arg(long)]
        n: usize,
        /// Only collections containing this set, as 0-based labels.
        #[arg(long)]
        a: Option<String>,
    },
    /// Maximal chord-separated collections in 2^[n] and their chains.
    Chord {
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "v")]
        u: Option<String>,
        #[arg(long, requires = "u")]
        v: Option<String>,
    },
    /// Lattice counts for a set whose circle partition has four intervals.
    Octahedron {
        #[arg(long, requires = "a")]
        n: Option<usize>,
        #[arg(long, conflicts_with = "p")]
        a: Option<String>,
        /// The partition (p1,p2,p3,p4) directly.
        #[arg(long)]
        p: Option<String>,
    },
    /// Breadth-first exploration of the mutation graph of [n] choose k.
    Explore {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Start from a maximal collection containing this set.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    i: String,
    #[arg(long)]
    j: String,
}

#[derive(Args)]
struct DomainArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, requires = "j", conflicts_with_all = ["k", "all"])]
    i: Option<String>,
    #[arg(long, requires = "i")]
    j: Option<String>,
    #[arg(long, conflicts_with = "all")]
    k: Option<usize>,
    /// Only the n cyclic intervals of size k.
    #[arg(long, requires = "k")]
    boundary: bool,
    /// Every subset of [n].
    #[arg(long)]
    all: bool,
}

/// A report: one document, plus the items it streams in JSONL/CSV form.
struct Report {
    doc: Value,
    stream: Option<Vec<Value>>,
    code: u8,
}

impl Report {
    fn doc(doc: Value) -> Self {
        Report { doc, stream: None, code: 0 }
    }

    fn list<T: Serialize>(items: &[T]) -> Self {
        let stream: Vec<Value> = items.iter().map(to_value).collect();
        Report { doc: Value::Array(stream.clone()), stream: Some(stream), code: 0 }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified(_) | Error::ChainAbsent(_) | Error::NoProfile(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn parse_set(text: &str, n: usize) -> Result<Subset, Failure> {
    Ok(Subset::parse(text, n)?)
}

fn parse_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Failure::Input(format!("not a nonnegative integer: {t:?}"))))
        .collect()
}

fn build_domain(args: &DomainArgs) -> Result<Collection, Failure> {
    let n = args.n;
    let items = match (&args.i, &args.j, args.k) {
        (Some(i), Some(j), None) => return Ok(build_domain_AIJ(parse_set(i, n)?, parse_set(j, n)?)?),
        (None, None, Some(k)) if args.boundary => return Ok(boundary_intervals(k, n)?),
        (None, None, Some(k)) => k_subsets(n, k)?,
        (None, None, None) if args.all => all_subsets(n)?,
        _ => return Err(Failure::Input("choose one of --i/--j, --k or --all".into())),
    };
    Ok(Collection::new(items)?)
}

fn check(n: usize, a: &str, b: &str) -> Outcome {
    let (a, b) = (parse_set(a, n)?, parse_set(b, n)?);
    Ok(Report::doc(json!({
        "weakly_separated": a.is_weakly_separated(b)?,
        "chord_separated": a.is_chord_separated(b)?,
    })))
}

fn purity(args: &DomainArgs, relation: Relation, streaming: bool) -> Outcome {
    let domain = build_domain(args)?;
    let g = build_compat_graph(&domain, relation)?;
    let mode = if streaming { PurityMode::Streaming } else { PurityMode::Histogram };
    let report = purity_of_graph(&g, mode);
    let stream = if streaming { None } else { Some(g.maximal_cliques().iter().map(to_value).collect()) };
    Ok(Report { doc: to_value(&report), stream, code: 0 })
}

fn distance(pair: &PairArgs, method: DistanceMethod) -> Outcome {
    let (i, j) = (parse_set(&pair.i, pair.n)?, parse_set(&pair.j, pair.n)?);
    let d = cluster_distance(i, j, method)?;
    Ok(Report::doc(match method {
        DistanceMethod::Exact => json!({ "d": d.d }),
        DistanceMethod::Formula => json!({ "d": d.d, "upper_bound": d.upper_bound }),
    }))
}

fn mutdist(pair: &PairArgs, budget: usize, allow_large: bool) -> Outcome {
    let (i, j) = (parse_set(&pair.i, pair.n)?, parse_set(&pair.j, pair.n)?);
    let r = mutation_distance(i, j, budget, allow_large)?;
    let path = to_value(&r.path);
    let report = match r.distance {
        Some(d) => Report::doc(json!({ "distance": d, "nodes_explored": r.nodes_explored, "path": path })),
        None => Report {
            doc: json!({
                "distance": "budget-exhausted",
                "upper_bound": r.upper_bound,
                "nodes_explored": r.nodes_explored,
                "path": path,
            }),
            stream: None,
            code: 3,
        },
    };
    Ok(report)
}

fn decorated(perm: &str, colors: Option<&str>) -> Result<DecoratedPermutation, Failure> {
    let perm = parse_list(perm)?;
    let mut p = DecoratedPermutation::with_fixed_color(perm.clone(), 1)?;
    if let Some(spec) = colors {
        let mut map = p.colors().clone();
        for item in spec.split(',').filter(|t| !t.trim().is_empty()) {
            let (i, c) = item
                .split_once(':')
                .ok_or_else(|| Failure::Input(format!("colour entries look like 3:-1, got {item:?}")))?;
            let i: usize = i.trim().parse().map_err(|_| Failure::Input(format!("bad position {i:?}")))?;
            let c: i8 = c.trim().parse().map_err(|_| Failure::Input(format!("bad colour {c:?}")))?;
            map.insert(i, c);
        }
        p = DecoratedPermutation::new(perm, map)?;
    }
    Ok(p)
}

fn necklace(perm: Option<&str>, colors: Option<&str>, a: Option<&str>, n: Option<usize>, k: Option<usize>) -> Outcome {
    let p = match (perm, a, n) {
        (Some(perm), None, _) => decorated(perm, colors)?,
        (None, Some(a), Some(n)) => canonical_permutation(parse_set(a, n)?)?,
        _ => return Err(Failure::Input("give --perm, or --a with --n".into())),
    };
    let k = k.unwrap_or_else(|| necklace_rank(&p));
    let nk = necklace_from_perm(&p, k)?;
    let len = length_of(&p, k);
    Ok(Report {
        doc: json!({
            "perm": p.one_line(),
            "colors": p.colors(),
            "k": k,
            "necklace": to_value(&nk),
            "connected": nk.is_connected(),
            "alignments": len.alignments,
            "length": len.length,
        }),
        stream: Some(nk.sets().iter().map(to_value).collect()),
        code: 0,
    })
}

fn lr(n: usize, a: Option<&str>) -> Outcome {
    let domain = lr_domain(n)?;
    let filter = match a {
        Some(text) => Some(lr_subset(&parse_list(text)?, n)?),
        None => None,
    };
    if let Some(s) = filter {
        if !domain.contains(s) {
            return Err(Failure::Input(format!("{:?} is not in LR({n})", lr_labels(s))));
        }
    }
    let cliques = build_compat_graph(&domain, Relation::Weak)?.maximal_cliques();
    let mut rows = Vec::new();
    for w in cliques.iter().filter(|w| filter.is_none_or(|s| w.contains(s))) {
        let chain = lr_chain(w, n)?;
        let labels: Vec<Vec<usize>> = w.iter().map(|&s| lr_labels(s)).collect();
        rows.push(json!({ "collection": labels, "chain": to_value(&chain) }));
    }
    let sizes: Vec<usize> = cliques.iter().map(Collection::len).collect();
    let pure = sizes.iter().all(|&s| s == sizes[0]);
    Ok(Report {
        doc: json!({
            "n": n,
            "domain_size": domain.len(),
            "pure": pure,
            "rank": pure.then_some(sizes[0]),
            "collections": rows.len(),
            "chains": rows.iter().map(|r| r["chain"].clone()).collect::<Vec<_>>(),
        }),
        stream: Some(rows),
        code: 0,
    })
}

fn chord(n: usize, u: Option<&str>, v: Option<&str>) -> Outcome {
    let all = Collection::new(all_subsets(n)?)?;
    let cliques = build_compat_graph(&all, Relation::Chord)?.maximal_cliques();
    let expected: usize = (0..=3).map(|i| binomial(n, i)).sum();
    let sizes: Vec<usize> = cliques.iter().map(Collection::len).collect();
    let pure = sizes.iter().all(|&s| s == sizes[0]);
    let (u, v) = match (u, v) {
        (Some(u), Some(v)) => (parse_set(u, n)?, parse_set(v, n)?),
        _ => {
            return Ok(Report::doc(json!({
                "n": n,
                "pure": pure,
                "rank": pure.then_some(sizes[0]),
                "expected_rank": expected,
                "collections": cliques.len(),
            })))
        }
    };
    let around = |w: &Collection, s: Subset| [s, s.with(1), s.with(n), s.with(1).with(n)].iter().all(|&x| w.contains(x));
    let mut rows = Vec::new();
    for w in cliques.iter().filter(|w| around(w, u) && around(w, v)) {
        let chain = chord_chain(w, u, v)?;
        rows.push(json!({ "collection": to_value(w), "chain": to_value(&chain) }));
    }
    Ok(Report { doc: Value::Array(rows.clone()), stream: Some(rows), code: 0 })
}

fn octahedron(n: Option<usize>, a: Option<&str>, p: Option<&str>) -> Outcome {
    let counts = match (a, n, p) {
        (Some(a), Some(n), None) => p4_counts(parse_set(a, n)?)?,
        (None, None, Some(p)) => {
            let p = parse_list(p)?;
            let ok = p.len() == 4 && p.iter().all(|&x| x > 0) && p[0] + p[2] == p[1] + p[3];
            if !ok {
                return Err(Failure::Input("--p needs four positive parts with p1 + p3 = p2 + p4".into()));
            }
            p4_counts_from_lengths([p[0], p[1], p[2], p[3]])
        }
        _ => return Err(Failure::Input("give --a with --n, or --p".into())),
    };
    Ok(Report::doc(json!({
        "p": counts.p,
        "z_count": counts.z_count,
        "z_formula": counts.z_formula,
        "pq_interior": counts.interior_pq_count,
        "cuboid_formula": counts.cuboid_formula,
        "match": counts.matches(),
    })))
}

fn explore(n: usize, k: usize, seed: Option<&str>, budget: usize) -> Outcome {
    let all = Collection::new(k_subsets(n, k)?)?;
    let partial = match seed {
        Some(s) => Collection::new([parse_set(s, n)?])?,
        None => Collection::empty(),
    };
    let start = complete_to_maximal(&partial, &all)?;
    let graph = explore_mutation_graph(&start, budget, None);
    Ok(Report {
        doc: to_value(&graph.summary()),
        stream: Some(graph.nodes.iter().map(to_value).collect()),
        code: 0,
    })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { n, a, b } => check(*n, a, b),
        Command::Domain(args) => Ok(Report::list(build_domain(args)?.items())),
        Command::Purity { domain, relation, streaming } => purity(domain, *relation, *streaming),
        Command::Distance { pair, method } => distance(pair, *method),
        Command::Mutdist { pair, budget, allow_large } => mutdist(pair, *budget, *allow_large),
        Command::Necklace { perm, colors, a, n, k } => {
            necklace(perm.as_deref(), colors.as_deref(), a.as_deref(), *n, *k)
        }
        Command::Lr { n, a } => lr(*n, a.as_deref()),
        Command::Chord { n, u, v } => chord(*n, u.as_deref(), v.as_deref()),
        Command::Octahedron { n, a, p } => octahedron(*n, a.as_deref(), p.as_deref()),
        Command::Explore { n, k, seed, budget } => explore(*n, *k, seed.as_deref(), *budget),
    }
}

/// Flat CSV cell. Subsets and other integer lists become space-separated.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(xs) if xs.iter().all(Value::is_number) => {
            xs.iter().map(Value::to_string).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn write_csv(rows: &[Value], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match rows.first() {
        Some(Value::Object(first)) => {
            let keys: Vec<&String> = first.keys().collect();
            w.write_record(&keys)?;
            for row in rows {
                w.write_record(keys.iter().map(|k| cell(&row[k.as_str()])))?;
            }
        }
        _ => {
            w.write_record(["value"])?;
            for row in rows {
                w.write_record([cell(row)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn emit(report: &Report, format: Format) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match (format, &report.stream) {
        (Format::Json, _) => writeln!(out, "{}", report.doc)?,
        (Format::Jsonl, Some(items)) => {
            for item in items {
                writeln!(out, "{item}")?;
            }
        }
        (Format::Jsonl, None) => writeln!(out, "{}", report.doc)?,
        (Format::Csv, Some(items)) => write_csv(items, &mut out).map_err(io::Error::other)?,
        (Format::Csv, None) => write_csv(std::slice::from_ref(&report.doc), &mut out).map_err(io::Error::other)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| std::env::var("THREADS").ok().and_then(|t| t.parse().ok()));
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&report, cli.format) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(report.code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
