//! Reference methods: exhaustive scan, filtered trie traversal, the
//! forward-backward split and a precomputed answer table.

use std::collections::HashMap;

use crate::distance::{distance, FilterStack, OperationSet};
use crate::scdawg::Lexicon;
use crate::search::MatchResult;
use crate::symbol::{render, symbols, Symbol};

/// Exhaustive scan with a length prefilter.
pub struct BruteForce {
    entries: Vec<(String, Vec<Symbol>)>,
}

impl BruteForce {
    pub fn new(lexicon: &Lexicon) -> BruteForce {
        BruteForce {
            entries: lexicon.entries().iter().map(|e| (e.clone(), symbols(e))).collect(),
        }
    }

    pub fn search(&self, ops: &OperationSet, pattern: &[Symbol], b: u32) -> Vec<MatchResult> {
        let slack = ops.length_slack(b);
        let mut out = Vec::new();
        for (e, w) in &self.entries {
            if w.len().abs_diff(pattern.len()) > slack {
                continue;
            }
            if let Some(d) = distance(ops, pattern, w, Some(b)).value() {
                out.push(MatchResult {
                    entry: e.clone(),
                    distance: d,
                });
            }
        }
        out.sort();
        out
    }
}

pub fn brute_force_search(lexicon: &Lexicon, ops: &OperationSet, pattern: &[Symbol], b: u32) -> Vec<MatchResult> {
    BruteForce::new(lexicon).search(ops, pattern, b)
}

/// Prefix tree in breadth-first order; the children of a node are
/// consecutive ids sorted by symbol.
#[derive(Clone, Debug)]
pub struct Trie {
    sym: Vec<Symbol>,
    first: Vec<u32>,
    end: Vec<u32>,
    is_final: Vec<bool>,
}

impl Trie {
    pub const ROOT: u32 = 0;

    pub fn new(words: &[Vec<Symbol>]) -> Trie {
        let mut words: Vec<&[Symbol]> = words.iter().map(|w| w.as_slice()).collect();
        words.sort_unstable();
        words.dedup();
        let mut t = Trie {
            sym: vec![Symbol::HASH],
            first: vec![0],
            end: vec![0],
            is_final: vec![false],
        };
        // (node, range of words sharing its prefix, depth)
        let mut queue = std::collections::VecDeque::from([(0u32, 0usize, words.len(), 0usize)]);
        while let Some((node, lo, hi, depth)) = queue.pop_front() {
            let mut k = lo;
            while k < hi && words[k].len() == depth {
                t.is_final[node as usize] = true;
                k += 1;
            }
            t.first[node as usize] = t.sym.len() as u32;
            while k < hi {
                let s = words[k][depth];
                let mut e = k;
                while e < hi && words[e][depth] == s {
                    e += 1;
                }
                let child = t.sym.len() as u32;
                t.sym.push(s);
                t.first.push(0);
                t.end.push(0);
                t.is_final.push(false);
                queue.push_back((child, k, e, depth + 1));
                k = e;
            }
            t.end[node as usize] = t.sym.len() as u32;
        }
        t
    }

    pub fn from_lexicon(lexicon: &Lexicon) -> Trie {
        let words: Vec<Vec<Symbol>> = lexicon.entries().iter().map(|e| symbols(e)).collect();
        Trie::new(&words)
    }

    /// Trie over the reversed entries.
    pub fn reversed_from_lexicon(lexicon: &Lexicon) -> Trie {
        let words: Vec<Vec<Symbol>> = lexicon
            .entries()
            .iter()
            .map(|e| {
                let mut w = symbols(e);
                w.reverse();
                w
            })
            .collect();
        Trie::new(&words)
    }

    pub fn state_count(&self) -> usize {
        self.sym.len()
    }

    pub fn is_final(&self, n: u32) -> bool {
        self.is_final[n as usize]
    }

    pub fn children(&self, n: u32) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        (self.first[n as usize]..self.end[n as usize]).map(move |c| (self.sym[c as usize], c))
    }

    pub fn child(&self, n: u32, s: Symbol) -> Option<u32> {
        let lo = self.first[n as usize] as usize;
        let hi = self.end[n as usize] as usize;
        self.sym[lo..hi].binary_search(&s).ok().map(|k| (lo + k) as u32)
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        w.iter()
            .try_fold(Self::ROOT, |n, &s| self.child(n, s))
            .is_some_and(|n| self.is_final(n))
    }
}

/// Depth-first trie walk pruned by the filter's viability test.
pub fn oflazer_search(trie: &Trie, ops: &OperationSet, pattern: &[Symbol], b: u32) -> Vec<MatchResult> {
    let mut fs = FilterStack::new(ops, pattern, b);
    let mut path = Vec::new();
    let mut out = Vec::new();
    let mut stack: Vec<(u32, usize)> = trie.children(Trie::ROOT).map(|(_, c)| (c, 1)).collect();
    stack.reverse();
    if trie.is_final(Trie::ROOT) {
        if let Some(d) = fs.distance() {
            out.push(MatchResult {
                entry: String::new(),
                distance: d,
            });
        }
    }
    while let Some((n, depth)) = stack.pop() {
        fs.truncate(depth - 1);
        path.truncate(depth - 1);
        let s = trie.sym[n as usize];
        if !fs.push(s) {
            continue;
        }
        path.push(s);
        if trie.is_final(n) {
            if let Some(d) = fs.distance() {
                out.push(MatchResult {
                    entry: render(&path, false),
                    distance: d,
                });
            }
        }
        for (_, c) in trie.children(n) {
            stack.push((c, depth + 1));
        }
    }
    out.sort();
    out
}

/// Forward-backward search. The forward pass walks the trie with the
/// full filter plus a filter for the first half of the pattern with half
/// the bound, which must be met before the walk may go on unchecked. The
/// backward pass does the same on the reversed trie with the reversed
/// second half. Every answer has an alignment in which one of the halves
/// costs at most `b / 2`.
pub fn forward_backward_search(
    fwd: &Trie,
    rev: &Trie,
    ops: &OperationSet,
    pattern: &[Symbol],
    b: u32,
) -> Vec<MatchResult> {
    let h = pattern.len().div_ceil(2);
    let half = b / 2;
    let mut out = staged(fwd, ops, pattern, &pattern[..h], half, b, false);
    let rops = ops.reversed();
    let rpat: Vec<Symbol> = pattern.iter().rev().copied().collect();
    out.extend(staged(rev, &rops, &rpat, &rpat[..pattern.len() - h], half, b, true));
    out.sort();
    out.dedup();
    out
}

fn staged(
    trie: &Trie,
    ops: &OperationSet,
    pattern: &[Symbol],
    head: &[Symbol],
    half: u32,
    b: u32,
    reversed: bool,
) -> Vec<MatchResult> {
    let omega = ops.omega_max();
    let mut full = FilterStack::new(ops, pattern, b);
    let mut sub = FilterStack::new(ops, head, half);
    let passed_at = |sub: &FilterStack| {
        let row = sub.row(sub.depth());
        (0..omega.min(head.len() + 1)).any(|j| row[head.len() - j] <= half)
    };
    let mut out = Vec::new();
    let mut path: Vec<Symbol> = Vec::new();
    // depth at which the head filter was satisfied on the current path
    let mut passed: Option<usize> = passed_at(&sub).then_some(0);
    let accept = |path: &[Symbol], d: u32, out: &mut Vec<MatchResult>| {
        let entry = if reversed {
            path.iter().rev().copied().collect::<Vec<_>>()
        } else {
            path.to_vec()
        };
        out.push(MatchResult {
            entry: render(&entry, false),
            distance: d,
        });
    };
    if trie.is_final(Trie::ROOT) && passed.is_some() {
        if let Some(d) = full.distance() {
            accept(&path, d, &mut out);
        }
    }
    let mut stack: Vec<(u32, usize)> = trie.children(Trie::ROOT).map(|(_, c)| (c, 1)).collect();
    while let Some((n, depth)) = stack.pop() {
        full.truncate(depth - 1);
        path.truncate(depth - 1);
        if passed.is_some_and(|p| p >= depth) {
            passed = None;
        }
        let s = trie.sym[n as usize];
        if passed.is_none() {
            sub.truncate(depth - 1);
            if !sub.push(s) {
                continue;
            }
        }
        if !full.push(s) {
            continue;
        }
        path.push(s);
        if passed.is_none() && passed_at(&sub) {
            passed = Some(depth);
        }
        if passed.is_some() && trie.is_final(n) {
            if let Some(d) = full.distance() {
                accept(&path, d, &mut out);
            }
        }
        for (_, c) in trie.children(n) {
            stack.push((c, depth + 1));
        }
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("query {0:?} is not covered by the precomputed index")]
pub struct CoverageError(pub String);

/// Precomputed answers for a fixed query set, bound and operation set.
#[derive(Clone, Debug)]
pub struct PerfectIndex {
    bound: u32,
    answers: HashMap<String, Vec<MatchResult>>,
}

impl PerfectIndex {
    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    pub fn lookup(&self, pattern: &str) -> Result<&[MatchResult], CoverageError> {
        self.answers
            .get(pattern)
            .map(|v| v.as_slice())
            .ok_or_else(|| CoverageError(pattern.to_string()))
    }
}

pub fn build_perfect_index<S: AsRef<str>>(
    lexicon: &Lexicon,
    ops: &OperationSet,
    queries: &[S],
    b: u32,
) -> PerfectIndex {
    let bf = BruteForce::new(lexicon);
    let mut answers = HashMap::new();
    for q in queries {
        let q = q.as_ref();
        if !answers.contains_key(q) {
            answers.insert(q.to_string(), bf.search(ops, &symbols(q), b));
        }
    }
    PerfectIndex { bound: b, answers }
}

pub fn perfect_lookup<'a>(pi: &'a PerfectIndex, pattern: &str) -> Result<&'a [MatchResult], CoverageError> {
    pi.lookup(pattern)
}
