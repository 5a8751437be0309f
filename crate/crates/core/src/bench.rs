//! Query and lexicon generators, timing harness and randomized
//! verification against the exhaustive scan.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::baselines::{forward_backward_search, oflazer_search, BruteForce, PerfectIndex, Trie};
use crate::distance::{OpClass, OperationSet};
use crate::scdawg::{Lexicon, Scdawg};
use crate::search::{MatchResult, SearchOptions, Searcher};
use crate::symbol::{render, symbols, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuerySpec {
    pub bound: u32,
    pub count: usize,
    pub seed: u64,
    /// Patterns must have at least `bound * min_length_multiplier` symbols.
    pub min_length_multiplier: usize,
}

impl QuerySpec {
    pub fn new(bound: u32, count: usize, seed: u64) -> QuerySpec {
        QuerySpec {
            bound,
            count,
            seed,
            min_length_multiplier: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub pattern: String,
    pub source: String,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("no lexicon entry has the {needed} symbols required (longest has {longest})")]
    NoQualifying { needed: usize, longest: usize },
    #[error("could not derive a pattern of length {needed} after {attempts} attempts")]
    Exhausted { needed: usize, attempts: usize },
    #[error("query count must be at least 1")]
    ZeroCount,
    #[error("alphabet needs at least 2 symbols")]
    SmallAlphabet,
}

const ATTEMPTS: usize = 1000;

/// Patterns made from random entries by one random edit in each of `b`
/// equal-width blocks of the entry.
pub fn generate_queries(lexicon: &Lexicon, ops: &OperationSet, spec: &QuerySpec) -> Result<Vec<Query>, GenError> {
    if spec.count == 0 {
        return Err(GenError::ZeroCount);
    }
    let b = spec.bound as usize;
    let needed = (b * spec.min_length_multiplier).max(1);
    let words: Vec<Vec<Symbol>> = lexicon.entries().iter().map(|e| symbols(e)).collect();
    let pool: Vec<usize> = (0..words.len()).filter(|&k| words[k].len() >= needed).collect();
    if pool.is_empty() {
        return Err(GenError::NoQualifying {
            needed,
            longest: lexicon.max_len(),
        });
    }
    let alphabet: Vec<Symbol> = lexicon.alphabet().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    while out.len() < spec.count {
        let mut made = None;
        for _ in 0..ATTEMPTS {
            let k = pool[rng.gen_range(0..pool.len())];
            let p = mutate(&words[k], b, ops, &alphabet, &mut rng);
            if p.len() >= needed {
                made = Some((p, k));
                break;
            }
        }
        let (p, k) = made.ok_or(GenError::Exhausted {
            needed,
            attempts: ATTEMPTS,
        })?;
        out.push(Query {
            pattern: render(&p, false),
            source: lexicon.entries()[k].clone(),
        });
    }
    Ok(out)
}

/// One replacement `w[pos..pos + width] -> rhs`.
type Edit = (usize, usize, Vec<Symbol>);

fn mutate(w: &[Symbol], b: usize, ops: &OperationSet, alphabet: &[Symbol], rng: &mut ChaCha8Rng) -> Vec<Symbol> {
    let n = w.len();
    let mut edits: Vec<Edit> = Vec::new();
    for k in 0..b {
        let (lo, hi) = (k * n / b, (k + 1) * n / b);
        if let Some(e) = random_edit(w, lo, hi, ops, alphabet, rng) {
            edits.push(e);
        }
    }
    let mut p = w.to_vec();
    // blocks are disjoint; apply from the right so offsets stay valid
    for (pos, width, rhs) in edits.into_iter().rev() {
        p.splice(pos..pos + width, rhs);
    }
    p
}

fn random_edit(
    w: &[Symbol],
    lo: usize,
    hi: usize,
    ops: &OperationSet,
    alphabet: &[Symbol],
    rng: &mut ChaCha8Rng,
) -> Option<Edit> {
    let mut kinds: Vec<Option<OpClass>> = OpClass::ALL
        .into_iter()
        .filter(|&c| ops.class_weight(c).is_some())
        .map(Some)
        .collect();
    let explicit: Vec<_> = ops.explicit_ops().filter(|op| op.lhs.len() <= 2).collect();
    if !explicit.is_empty() {
        kinds.push(None);
    }
    let pick = |rng: &mut ChaCha8Rng| alphabet[rng.gen_range(0..alphabet.len())];
    for _ in 0..32 {
        let &kind = kinds.choose(rng)?;
        if hi <= lo {
            return kind.filter(|&c| c == OpClass::Insert).map(|_| (lo, 0, vec![pick(rng)]));
        }
        let pos = rng.gen_range(lo..hi);
        let pair = pos + 1 < hi;
        let edit = match kind {
            Some(OpClass::Substitute) if alphabet.len() > 1 => {
                let mut c = pick(rng);
                while c == w[pos] {
                    c = pick(rng);
                }
                Some((pos, 1, vec![c]))
            }
            Some(OpClass::Insert) => Some((pos, 0, vec![pick(rng)])),
            Some(OpClass::Delete) => Some((pos, 1, vec![])),
            Some(OpClass::Transpose) if pair && w[pos] != w[pos + 1] => Some((pos, 2, vec![w[pos + 1], w[pos]])),
            Some(OpClass::Merge) if pair => Some((pos, 2, vec![pick(rng)])),
            Some(OpClass::Split) => Some((pos, 1, vec![pick(rng), pick(rng)])),
            None => {
                let hits: Vec<(usize, usize)> = explicit
                    .iter()
                    .enumerate()
                    .flat_map(|(k, op)| {
                        let l = op.lhs.len();
                        (lo..hi)
                            .filter(move |&p| p + l <= hi && w[p..p + l] == op.lhs[..])
                            .map(move |p| (k, p))
                    })
                    .collect();
                hits.choose(rng)
                    .map(|&(k, p)| (p, explicit[k].lhs.len(), explicit[k].rhs.clone()))
            }
            _ => None,
        };
        if edit.is_some() {
            return edit;
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolDistribution {
    Uniform,
    /// Symbol index drawn from `Binomial(alphabet_size - 1, 0.5)`.
    Binomial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthSpec {
    pub distribution: SymbolDistribution,
    pub entries: usize,
    pub mean_len: f64,
    pub alphabet_size: usize,
    pub seed: u64,
}

/// The `k`-th synthetic symbol: printable ASCII first, then Latin-1.
pub fn synth_symbol(k: usize) -> char {
    const ASCII: usize = (b'~' - b'!' + 1) as usize;
    if k < ASCII {
        (b'!' + k as u8) as char
    } else {
        char::from_u32(0xA1 + (k - ASCII) as u32).unwrap()
    }
}

pub fn generate_lexicon(spec: &SynthSpec) -> Result<Lexicon, GenError> {
    if spec.alphabet_size < 2 {
        return Err(GenError::SmallAlphabet);
    }
    if spec.entries == 0 {
        return Err(GenError::ZeroCount);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let lengths = Poisson::new(spec.mean_len.max(0.1)).unwrap();
    let binom = Binomial::new(spec.alphabet_size as u64 - 1, 0.5).unwrap();
    let mut seen = HashSet::with_capacity(spec.entries);
    let mut out = Vec::with_capacity(spec.entries);
    while out.len() < spec.entries {
        let len = (lengths.sample(&mut rng) as usize).max(1);
        let word: String = (0..len)
            .map(|_| {
                let k = match spec.distribution {
                    SymbolDistribution::Uniform => rng.gen_range(0..spec.alphabet_size),
                    SymbolDistribution::Binomial => binom.sample(&mut rng) as usize,
                };
                synth_symbol(k)
            })
            .collect();
        if seen.insert(word.clone()) {
            out.push(word);
        }
    }
    Ok(Lexicon::from_entries(out).unwrap().0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Ideal,
    New,
    ForwardBackward,
    Oflazer,
    Brute,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Ideal,
        Method::New,
        Method::ForwardBackward,
        Method::Oflazer,
        Method::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ideal => "ideal",
            Method::New => "new",
            Method::ForwardBackward => "fb",
            Method::Oflazer => "oflazer",
            Method::Brute => "brute",
        }
    }

    pub fn from_name(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// Everything the methods search over.
pub struct Engines<'a> {
    pub index: &'a Scdawg,
    pub forward_trie: &'a Trie,
    pub reverse_trie: &'a Trie,
    pub brute: &'a BruteForce,
    pub perfect: Option<&'a PerfectIndex>,
    pub ops: &'a OperationSet,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("{method} and {reference} disagree on query {pattern:?}")]
    Mismatch {
        method: &'static str,
        reference: &'static str,
        pattern: String,
    },
    #[error(transparent)]
    Coverage(#[from] crate::baselines::CoverageError),
    #[error("perfect index missing or built for bound {built}, not {wanted}")]
    PerfectBound { built: u32, wanted: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodRow {
    pub method: &'static str,
    pub mean_us: f64,
    pub median_us: f64,
    pub total_answers: usize,
    pub checksum: u32,
    pub ratio_vs_ideal: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub bound: u32,
    pub queries: usize,
    pub rows: Vec<MethodRow>,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "method,bound,queries,mean_us,median_us,total_answers,checksum,ratio_vs_ideal";

    pub fn row(&self, method: Method) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.method == method.name())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let ratio = r.ratio_vs_ideal.map(|x| format!("{x:.3}")).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{:.3},{:.3},{},{:08x},{}",
                r.method, self.bound, self.queries, r.mean_us, r.median_us, r.total_answers, r.checksum, ratio
            );
        }
        s
    }
}

impl Engines<'_> {
    fn run(&self, method: Method, searcher: &Searcher, pattern: &str, b: u32) -> Result<Vec<MatchResult>, BenchError> {
        let p = || symbols(pattern);
        Ok(match method {
            Method::Ideal => {
                let pi = self.perfect.ok_or(BenchError::PerfectBound {
                    built: u32::MAX,
                    wanted: b,
                })?;
                pi.lookup(pattern)?.to_vec()
            }
            Method::New => searcher.solve(&p(), b),
            Method::ForwardBackward => forward_backward_search(self.forward_trie, self.reverse_trie, self.ops, &p(), b),
            Method::Oflazer => oflazer_search(self.forward_trie, self.ops, &p(), b),
            Method::Brute => self.brute.search(self.ops, &p(), b),
        })
    }

    /// Answers of one method for one query, in the output format.
    pub fn answer(&self, method: Method, pattern: &str, b: u32) -> Result<Vec<MatchResult>, BenchError> {
        let searcher = Searcher::new(self.index, self.ops);
        self.run(method, &searcher, pattern, b)
    }
}

fn write_answers(out: &mut Vec<u8>, answers: &[MatchResult]) {
    for m in answers {
        let _ = writeln!(out, "{}\t{}", m.entry, m.distance);
    }
}

/// Warms every method once, checks that all return the same answers, then
/// times `repeat` passes. Output formatting is part of the measured time.
pub fn run_benchmark(
    engines: &Engines,
    methods: &[Method],
    queries: &[String],
    b: u32,
    repeat: usize,
) -> Result<BenchReport, BenchError> {
    if methods.contains(&Method::Ideal) {
        match engines.perfect {
            Some(pi) if pi.bound() == b => {}
            Some(pi) => {
                return Err(BenchError::PerfectBound {
                    built: pi.bound(),
                    wanted: b,
                })
            }
            None => {
                return Err(BenchError::PerfectBound {
                    built: u32::MAX,
                    wanted: b,
                })
            }
        }
    }
    let searcher = Searcher::new(engines.index, engines.ops);
    let mut sums = Vec::new();
    let mut reference: Option<(Method, Vec<Vec<MatchResult>>)> = None;
    for &m in methods {
        let mut answers = Vec::with_capacity(queries.len());
        let mut buf = Vec::new();
        let mut total = 0;
        for q in queries {
            let a = engines.run(m, &searcher, q, b)?;
            total += a.len();
            write_answers(&mut buf, &a);
            answers.push(a);
        }
        match &reference {
            None => reference = Some((m, answers)),
            Some((rm, ra)) => {
                if let Some(k) = (0..queries.len()).find(|&k| ra[k] != answers[k]) {
                    return Err(BenchError::Mismatch {
                        method: m.name(),
                        reference: rm.name(),
                        pattern: queries[k].clone(),
                    });
                }
            }
        }
        sums.push((total, crc32fast::hash(&buf)));
    }
    let mut rows = Vec::new();
    let mut buf = Vec::new();
    for (&m, &(total, checksum)) in methods.iter().zip(&sums) {
        let mut per_query = vec![0f64; queries.len()];
        for _ in 0..repeat.max(1) {
            for (k, q) in queries.iter().enumerate() {
                let t = Instant::now();
                let a = engines.run(m, &searcher, q, b)?;
                buf.clear();
                write_answers(&mut buf, &a);
                std::hint::black_box(&buf);
                per_query[k] += t.elapsed().as_secs_f64() * 1e6;
            }
        }
        for t in &mut per_query {
            *t /= repeat.max(1) as f64;
        }
        let mean = per_query.iter().sum::<f64>() / per_query.len().max(1) as f64;
        per_query.sort_by(f64::total_cmp);
        let median = if per_query.is_empty() {
            0.0
        } else if per_query.len() % 2 == 1 {
            per_query[per_query.len() / 2]
        } else {
            (per_query[per_query.len() / 2 - 1] + per_query[per_query.len() / 2]) / 2.0
        };
        rows.push(MethodRow {
            method: m.name(),
            mean_us: mean,
            median_us: median,
            total_answers: total,
            checksum,
            ratio_vs_ideal: None,
        });
    }
    if let Some(ideal) = rows
        .iter()
        .find(|r| r.method == Method::Ideal.name())
        .map(|r| r.mean_us)
    {
        for r in &mut rows {
            r.ratio_vs_ideal = Some(if ideal > 0.0 { r.mean_us / ideal } else { f64::INFINITY });
        }
    }
    Ok(BenchReport {
        bound: b,
        queries: queries.len(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub pattern: String,
    pub expected: Vec<MatchResult>,
    pub got: Vec<MatchResult>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub samples: usize,
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares the index search with the exhaustive scan on generated
/// queries and stops at the first disagreement.
pub fn verify_equivalence(
    lexicon: &Lexicon,
    ops: &OperationSet,
    b: u32,
    samples: usize,
    seed: u64,
    options: &SearchOptions,
) -> Result<VerifyReport, GenError> {
    let spec = QuerySpec {
        bound: b,
        count: samples,
        seed,
        min_length_multiplier: 1,
    };
    let queries = generate_queries(lexicon, ops, &spec)?;
    let index = Scdawg::build(lexicon).expect("validated lexicon");
    let searcher = Searcher::new(&index, ops);
    let brute = BruteForce::new(lexicon);
    for (k, q) in queries.iter().enumerate() {
        let p = symbols(&q.pattern);
        let expected = brute.search(ops, &p, b);
        let got = searcher.solve_with(&p, b, options).matches;
        if got != expected {
            return Ok(VerifyReport {
                samples: k + 1,
                counterexample: Some(Counterexample {
                    pattern: q.pattern.clone(),
                    expected,
                    got,
                }),
            });
        }
    }
    Ok(VerifyReport {
        samples: queries.len(),
        counterexample: None,
    })
}
