//! `lexiscan` command-line front end.
//!
//! Exit status is 0 on success, 1 when a correctness or coverage check
//! fails, and 2 for bad arguments or unreadable input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lexiscan::baselines::{build_perfect_index, forward_backward_search, oflazer_search, BruteForce, Trie};
use lexiscan::bench::{
    generate_lexicon, generate_queries, run_benchmark, verify_equivalence, BenchError, Engines, Method, QuerySpec,
    SymbolDistribution, SynthSpec,
};
use lexiscan::distance::{parse_operations, preset_operations, OperationSet};
use lexiscan::scdawg::{deserialize, load_lexicon, serialize, Lexicon, Scdawg};
use lexiscan::search::{SearchOptions, Searcher};
use lexiscan::{render, symbols};

#[derive(Parser)]
#[command(name = "lexiscan", version, about = "Approximate search in a word list")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a newline-separated word list.
    Build {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print every entry within the bound as `entry<TAB>distance`.
    Query(QueryArgs),
    /// Time several methods on a query file and print a CSV report.
    Bench(BenchArgs),
    /// Derive query patterns from random entries, one per line.
    GenQueries(GenQueriesArgs),
    /// Generate a synthetic word list.
    GenLexicon(GenLexiconArgs),
    /// Compare the index search with an exhaustive scan on generated queries.
    Verify(VerifyArgs),
    /// Print states and transitions of an index.
    Dump {
        #[arg(long)]
        index: PathBuf,
        /// Emit a Graphviz graph instead of the tab-separated listing.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Args)]
struct OpsArgs {
    /// Preset operation set: lev, lev-transpose or lev-merge-split.
    #[arg(long = "ops", default_value = "lev", conflicts_with = "ops_file")]
    preset: String,
    /// Operation file.
    #[arg(long)]
    ops_file: Option<PathBuf>,
}

impl OpsArgs {
    fn load(&self) -> Result<OperationSet> {
        match &self.ops_file {
            Some(f) => Ok(parse_operations(&read_text(f)?)?),
            None => Ok(preset_operations(&self.preset)?),
        }
    }
}

#[derive(Args)]
struct SeedArg {
    /// Random seed; LEXISCAN_SEED takes precedence when set.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl SeedArg {
    fn get(&self) -> Result<u64> {
        match std::env::var("LEXISCAN_SEED") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| anyhow!("LEXISCAN_SEED is not a number: {s:?}")),
            Err(_) => Ok(self.seed),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QueryMethod {
    New,
    Fb,
    Oflazer,
    Brute,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pattern: String,
    #[arg(long)]
    bound: u32,
    #[command(flatten)]
    ops: OpsArgs,
    #[arg(long, value_enum, default_value = "new")]
    method: QueryMethod,
    /// Turn off positional pruning.
    #[arg(long)]
    no_prune: bool,
    /// Solve every derived query bottom up instead of on demand.
    #[arg(long)]
    bottom_up: bool,
    /// Also print the close substrings as `~substring<TAB>distance` lines.
    #[arg(long)]
    include_substrings: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    lexicon: PathBuf,
    /// Query file, one pattern per line.
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    bound: u32,
    #[command(flatten)]
    ops: OpsArgs,
    /// Comma-separated methods; the first one is the reference for the answer check.
    #[arg(long, default_value = "ideal,new,fb,oflazer", value_delimiter = ',')]
    methods: Vec<String>,
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    /// Queries covered by the precomputed answer table (default: the query file).
    #[arg(long)]
    cover: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenQueriesArgs {
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    bound: u32,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = 3)]
    min_length_multiplier: usize,
    #[command(flatten)]
    ops: OpsArgs,
    /// Append the source entry after a tab.
    #[arg(long)]
    with_source: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Distribution {
    Uniform,
    Binomial,
}

#[derive(Args)]
struct GenLexiconArgs {
    #[arg(long, default_value_t = 1000)]
    entries: usize,
    #[arg(long, default_value_t = 50.0)]
    mean_len: f64,
    #[arg(long, default_value_t = 99)]
    alphabet: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    distribution: Distribution,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, default_value_t = 2)]
    bound: u32,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[command(flatten)]
    ops: OpsArgs,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_lexicon(path: &Path) -> Result<Lexicon> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let (lex, dups) = load_lexicon(&bytes).with_context(|| format!("bad lexicon {}", path.display()))?;
    if dups > 0 {
        eprintln!("note: ignored {dups} duplicate entries");
    }
    Ok(lex)
}

fn read_index(path: &Path) -> Result<Scdawg> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    deserialize(&bytes).with_context(|| format!("bad index {}", path.display()))
}

fn read_queries(path: &Path) -> Result<Vec<String>> {
    let text = read_text(path)?;
    let body = text.strip_suffix('\n').unwrap_or(&text);
    if body.is_empty() {
        bail!("{} holds no queries", path.display());
    }
    Ok(body.split('\n').map(str::to_string).collect())
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Returns the exit status; errors are usage or input problems.
fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Build { lexicon, out } => {
            let lex = read_lexicon(&lexicon)?;
            let index = Scdawg::build(&lex)?;
            fs::write(&out, serialize(&index)).with_context(|| format!("cannot write {}", out.display()))?;
            eprintln!("{} entries, {} states", index.entry_count(), index.state_count());
            Ok(0)
        }
        Command::Query(a) => query(a),
        Command::Bench(a) => bench(a),
        Command::GenQueries(a) => {
            let lex = read_lexicon(&a.lexicon)?;
            let ops = a.ops.load()?;
            let spec = QuerySpec {
                bound: a.bound,
                count: a.count,
                seed: a.seed.get()?,
                min_length_multiplier: a.min_length_multiplier,
            };
            let mut out = String::new();
            for q in generate_queries(&lex, &ops, &spec)? {
                if a.with_source {
                    let _ = writeln!(out, "{}\t{}", q.pattern, q.source);
                } else {
                    let _ = writeln!(out, "{}", q.pattern);
                }
            }
            emit(&a.output, &out)?;
            Ok(0)
        }
        Command::GenLexicon(a) => {
            let lex = generate_lexicon(&SynthSpec {
                distribution: match a.distribution {
                    Distribution::Uniform => SymbolDistribution::Uniform,
                    Distribution::Binomial => SymbolDistribution::Binomial,
                },
                entries: a.entries,
                mean_len: a.mean_len,
                alphabet_size: a.alphabet,
                seed: a.seed.get()?,
            })?;
            emit(&a.output, &lex.to_text())?;
            Ok(0)
        }
        Command::Verify(a) => {
            let lex = read_lexicon(&a.lexicon)?;
            let ops = a.ops.load()?;
            let report = verify_equivalence(&lex, &ops, a.bound, a.samples, a.seed.get()?, &SearchOptions::default())?;
            match report.counterexample {
                None => {
                    println!("pass\t{}", report.samples);
                    Ok(0)
                }
                Some(c) => {
                    println!("fail\t{}", c.pattern);
                    for m in &c.expected {
                        println!("expected\t{}\t{}", m.entry, m.distance);
                    }
                    for m in &c.got {
                        println!("got\t{}\t{}", m.entry, m.distance);
                    }
                    Ok(1)
                }
            }
        }
        Command::Dump { index, dot } => {
            let index = read_index(&index)?;
            print!("{}", if dot { dump_dot(&index) } else { dump_tsv(&index) });
            Ok(0)
        }
    }
}

fn query(a: QueryArgs) -> Result<u8> {
    let index = read_index(&a.index)?;
    let ops = a.ops.load()?;
    let p = symbols(&a.pattern);
    if a.method != QueryMethod::New && (a.no_prune || a.bottom_up || a.include_substrings) {
        bail!("--no-prune, --bottom-up and --include-substrings only apply to --method new");
    }
    let mut out = String::new();
    let matches = match a.method {
        QueryMethod::New => {
            let opts = SearchOptions {
                prune: !a.no_prune,
                bottom_up: a.bottom_up,
                include_substrings: a.include_substrings,
                ..SearchOptions::default()
            };
            let outcome = Searcher::new(&index, &ops).solve_with(&p, a.bound, &opts);
            for (s, d) in outcome.substrings.iter().flatten() {
                let _ = writeln!(out, "~{s}\t{d}");
            }
            outcome.matches
        }
        method => {
            let (lex, _) = Lexicon::from_entries(index.entries())?;
            match method {
                QueryMethod::Brute => BruteForce::new(&lex).search(&ops, &p, a.bound),
                QueryMethod::Oflazer => oflazer_search(&Trie::from_lexicon(&lex), &ops, &p, a.bound),
                _ => forward_backward_search(
                    &Trie::from_lexicon(&lex),
                    &Trie::reversed_from_lexicon(&lex),
                    &ops,
                    &p,
                    a.bound,
                ),
            }
        }
    };
    let mut head = String::new();
    for m in &matches {
        let _ = writeln!(head, "{}\t{}", m.entry, m.distance);
    }
    print!("{head}{out}");
    Ok(0)
}

fn bench(a: BenchArgs) -> Result<u8> {
    let methods = a
        .methods
        .iter()
        .map(|m| Method::from_name(m.trim()).ok_or_else(|| anyhow!("unknown method {m:?}")))
        .collect::<Result<Vec<_>>>()?;
    if methods.is_empty() {
        bail!("no methods given");
    }
    let lex = read_lexicon(&a.lexicon)?;
    let ops = a.ops.load()?;
    let queries = read_queries(&a.queries)?;
    let index = Scdawg::build(&lex)?;
    let forward_trie = Trie::from_lexicon(&lex);
    let reverse_trie = Trie::reversed_from_lexicon(&lex);
    let brute = BruteForce::new(&lex);
    let perfect = if methods.contains(&Method::Ideal) {
        let covered = match &a.cover {
            Some(f) => read_queries(f)?,
            None => queries.clone(),
        };
        Some(build_perfect_index(&lex, &ops, &covered, a.bound))
    } else {
        None
    };
    let engines = Engines {
        index: &index,
        forward_trie: &forward_trie,
        reverse_trie: &reverse_trie,
        brute: &brute,
        perfect: perfect.as_ref(),
        ops: &ops,
    };
    match run_benchmark(&engines, &methods, &queries, a.bound, a.repeat) {
        Ok(report) => {
            emit(&a.output, &report.to_csv())?;
            Ok(0)
        }
        Err(e @ (BenchError::Mismatch { .. } | BenchError::Coverage(_))) => {
            eprintln!("error: {e}");
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn dump_tsv(index: &Scdawg) -> String {
    let fwd = index.forward();
    let mut s = String::new();
    let _ = writeln!(s, "states\t{}", index.state_count());
    for q in 0..index.state_count() as u32 {
        let _ = writeln!(s, "state\t{q}\t{}\t{}", render(fwd.canonical(q), true), index.b_map(q));
    }
    for q in 0..index.state_count() as u32 {
        for e in fwd.edges(q) {
            let _ = writeln!(s, "right\t{q}\t{}\t{}", render(fwd.label(e), true), e.target);
        }
    }
    for (src, label, dst) in left_edges(index) {
        let _ = writeln!(s, "left\t{src}\t{label}\t{dst}");
    }
    s
}

/// Reverse-graph transitions in forward state ids, with the label read
/// left to right as it is prepended.
fn left_edges(index: &Scdawg) -> Vec<(u32, String, u32)> {
    let rev = index.reverse();
    let mut out = Vec::new();
    for rq in 0..index.state_count() as u32 {
        for e in rev.edges(rq) {
            let mut label = rev.label(e).to_vec();
            label.reverse();
            out.push((index.b_inv(rq), render(&label, true), index.b_inv(e.target)));
        }
    }
    out.sort();
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dump_dot(index: &Scdawg) -> String {
    let fwd = index.forward();
    let mut s = String::from("digraph scdawg {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in 0..index.state_count() as u32 {
        let name = if q == 0 {
            "ε".to_string()
        } else {
            render(fwd.canonical(q), true)
        };
        let _ = writeln!(s, "  q{q} [label=\"{q}: {}\"];", dot_escape(&name));
    }
    for q in 0..index.state_count() as u32 {
        for e in fwd.edges(q) {
            let _ = writeln!(
                s,
                "  q{q} -> q{} [label=\"{}\"];",
                e.target,
                dot_escape(&render(fwd.label(e), true))
            );
        }
    }
    for (src, label, dst) in left_edges(index) {
        let _ = writeln!(
            s,
            "  q{src} -> q{dst} [label=\"{}\", style=dashed];",
            dot_escape(&label)
        );
    }
    s.push_str("}\n");
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
