//! Approximate search over the bidirectional index.
//!
//! The pattern is cut into `b + 1` pieces arranged in a balanced tree. Exact
//! hits of the pieces are grown outwards: a hit of a left child to the
//! right, a hit of a right child to the left, each time under a filter for
//! the parent's substring and bound. What reaches the root is a set of
//! lexicon substrings within distance `b`; the entries among them are the
//! answer.

mod tree;

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;

pub use tree::{
    build_query_tree, derived_queries, reduct, DerivedQuery, PatternTooShort, QueryNode, QueryTree, ReductError,
};

use crate::distance::{distance, FilterStack, OperationSet};
use crate::scdawg::{Cdawg, Cursor, Scdawg};
use crate::symbol::{symbols, Symbol};

/// A substring solution of some query, with its exact distance to the
/// query's pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    pub cursor: Cursor,
    pub achieved: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchResult {
    pub entry: String,
    pub distance: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Append symbols.
    Right,
    /// Prepend symbols.
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Reject cursors whose occurrences cannot line up with the rest of
    /// the pattern.
    pub prune: bool,
    /// Materialize every node's solution set instead of streaming.
    pub bottom_up: bool,
    /// Report the root's substring solutions too. Turns pruning off, since
    /// pruning only keeps substrings that can still grow into an entry.
    pub include_substrings: bool,
    /// Drop all left extensions. Breaks completeness; only for exercising
    /// the verification harness.
    pub skip_left: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune: true,
            bottom_up: false,
            include_substrings: false,
            skip_left: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Cursors visited while extending.
    pub steps: u64,
    /// Cursors rejected by positional pruning.
    pub pruned: u64,
    /// Distinct candidates emitted over all derived queries.
    pub candidates: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    pub matches: Vec<MatchResult>,
    /// The pattern was too short to split and a plain traversal was used.
    pub fallback: bool,
    /// Substring solutions at the root, sorted, if requested.
    pub substrings: Option<Vec<(String, u32)>>,
    pub stats: SearchStats,
}

/// Allowed pattern-coordinate ranges for the text around a cursor.
#[derive(Clone, Copy, Debug)]
struct Window {
    pre: (i64, i64),
    suf: (i64, i64),
}

/// Keeps a cursor iff some occurrence could have a prefix of length in
/// `pre` and a suffix of length in `suf`, each widened by `slack`.
pub fn positional_prune(index: &Scdawg, c: Cursor, pre: (usize, usize), suf: (usize, usize), slack: usize) -> bool {
    let s = slack as i64;
    fits(
        index,
        c,
        Window {
            pre: (pre.0 as i64 - s, pre.1 as i64 + s),
            suf: (suf.0 as i64 - s, suf.1 as i64 + s),
        },
    )
}

#[inline]
fn fits(index: &Scdawg, c: Cursor, w: Window) -> bool {
    let b = index.boundary_bounds(c);
    (b.min_pre as i64) <= w.pre.1
        && (b.max_pre as i64) >= w.pre.0
        && (b.min_suf as i64) <= w.suf.1
        && (b.max_suf as i64) >= w.suf.0
}

/// Index plus operation set, with the reversed operations precomputed for
/// left extensions.
pub struct Searcher<'a> {
    index: &'a Scdawg,
    ops: &'a OperationSet,
    rev_ops: OperationSet,
}

struct Job<'p> {
    pattern: &'p [Symbol],
    rev_pattern: &'p [Symbol],
    lo: usize,
    hi: usize,
    bound: u32,
    seed: Cursor,
    side: Side,
    window: Option<Window>,
}

impl<'a> Searcher<'a> {
    pub fn new(index: &'a Scdawg, ops: &'a OperationSet) -> Searcher<'a> {
        Searcher {
            index,
            ops,
            rev_ops: ops.reversed(),
        }
    }

    pub fn index(&self) -> &Scdawg {
        self.index
    }

    pub fn ops(&self) -> &OperationSet {
        self.ops
    }

    pub fn solve(&self, pattern: &[Symbol], b: u32) -> Vec<MatchResult> {
        self.solve_with(pattern, b, &SearchOptions::default()).matches
    }

    pub fn solve_str(&self, pattern: &str, b: u32) -> Vec<MatchResult> {
        self.solve(&symbols(pattern), b)
    }

    pub fn solve_with(&self, pattern: &[Symbol], b: u32, opts: &SearchOptions) -> SearchOutcome {
        let mut stats = SearchStats::default();
        let Ok(tree) = build_query_tree(pattern.len(), b) else {
            let matches = self.traverse_entries(pattern, b, &mut stats);
            let substrings = opts
                .include_substrings
                .then(|| self.render(&self.substring_solutions(pattern, b)));
            return SearchOutcome {
                matches,
                fallback: true,
                substrings,
                stats,
            };
        };
        let root = if opts.bottom_up {
            let rev: Vec<Symbol> = pattern.iter().rev().copied().collect();
            let dq = DerivedQuery {
                node: QueryTree::ROOT,
                i: 0,
                j: 0,
            };
            self.bottom_up(pattern, &rev, &tree, dq, opts.skip_left, &mut stats)
        } else {
            let opts = SearchOptions {
                prune: opts.prune && !opts.include_substrings,
                ..*opts
            };
            let mut run = Run::new(self, pattern, b, &tree, opts);
            run.go();
            stats = run.stats;
            run.root
        };
        let mut matches = Vec::new();
        for c in &root {
            if self.index.is_entry(c.cursor) {
                let entry = self.index.cursor_symbols(c.cursor);
                let d = distance(self.ops, pattern, entry, Some(b))
                    .value()
                    .expect("root candidates are within bound");
                debug_assert_eq!(d, c.achieved);
                matches.push(MatchResult {
                    entry: self.index.cursor_string(c.cursor),
                    distance: d,
                });
            }
        }
        matches.sort();
        SearchOutcome {
            matches,
            fallback: false,
            substrings: opts.include_substrings.then(|| self.render(&root)),
            stats,
        }
    }

    fn render(&self, cands: &[Candidate]) -> Vec<(String, u32)> {
        let mut out: Vec<(String, u32)> = cands
            .iter()
            .map(|c| (self.index.cursor_string(c.cursor), c.achieved))
            .collect();
        out.sort();
        out
    }

    /// Exact hit of a leaf's reduct.
    pub fn solve_leaf(&self, pattern: &[Symbol], tree: &QueryTree, dq: DerivedQuery) -> Option<Candidate> {
        let (lo, hi) = dq.range(tree);
        self.index
            .locate(&pattern[lo..hi])
            .map(|cursor| Candidate { cursor, achieved: 0 })
    }

    /// Grows every seed towards `side` under the filter for the parent's
    /// reduct and collects all accepted strings, seeds included. No
    /// positional pruning.
    pub fn extend_candidates(
        &self,
        pattern: &[Symbol],
        tree: &QueryTree,
        parent: DerivedQuery,
        seeds: &[Candidate],
        side: Side,
    ) -> Vec<Candidate> {
        let rev: Vec<Symbol> = pattern.iter().rev().copied().collect();
        let (lo, hi) = parent.range(tree);
        let mut stats = SearchStats::default();
        let mut out = Vec::new();
        for s in seeds {
            let job = Job {
                pattern,
                rev_pattern: &rev,
                lo,
                hi,
                bound: tree.node(parent.node).bound,
                seed: s.cursor,
                side,
                window: None,
            };
            self.extend(&job, &mut stats, &mut out);
        }
        out.sort();
        out.dedup();
        out
    }

    /// All lexicon substrings within `b` of the pattern, found by growing
    /// the empty string to the right.
    pub fn substring_solutions(&self, pattern: &[Symbol], b: u32) -> Vec<Candidate> {
        let mut out = Vec::new();
        let job = Job {
            pattern,
            rev_pattern: &[],
            lo: 0,
            hi: pattern.len(),
            bound: b,
            seed: self.index.root_cursor(),
            side: Side::Right,
            window: None,
        };
        self.extend(&job, &mut SearchStats::default(), &mut out);
        out.sort();
        out
    }

    /// Materialized solution set of one derived query, computed from its
    /// children without pruning.
    pub fn solve_node_bottom_up(&self, pattern: &[Symbol], tree: &QueryTree, dq: DerivedQuery) -> Vec<Candidate> {
        let rev: Vec<Symbol> = pattern.iter().rev().copied().collect();
        self.bottom_up(pattern, &rev, tree, dq, false, &mut SearchStats::default())
    }

    fn bottom_up(
        &self,
        pattern: &[Symbol],
        rev: &[Symbol],
        tree: &QueryTree,
        dq: DerivedQuery,
        skip_left: bool,
        stats: &mut SearchStats,
    ) -> Vec<Candidate> {
        let node = tree.node(dq.node);
        let (lo, hi) = dq.range(tree);
        let mut out = Vec::new();
        match node.children {
            None => out.extend(self.solve_leaf(pattern, tree, dq)),
            Some(_) if !dq.splits(tree) => {
                let seed = self.index.root_cursor();
                let job = Job {
                    pattern,
                    rev_pattern: rev,
                    lo,
                    hi,
                    bound: node.bound,
                    seed,
                    side: Side::Right,
                    window: None,
                };
                self.extend(&job, stats, &mut out);
            }
            Some((l, r)) => {
                let m = tree.node(l).hi;
                let omega = self.ops.omega_max();
                for k in 0..omega {
                    let mut jobs = Vec::new();
                    if lo + k <= m {
                        jobs.push((DerivedQuery { node: l, i: dq.i, j: k }, Side::Right));
                    }
                    if m + k <= hi && !skip_left {
                        jobs.push((DerivedQuery { node: r, i: k, j: dq.j }, Side::Left));
                    }
                    for (child, side) in jobs {
                        for seed in self.bottom_up(pattern, rev, tree, child, skip_left, stats) {
                            let job = Job {
                                pattern,
                                rev_pattern: rev,
                                lo,
                                hi,
                                bound: node.bound,
                                seed: seed.cursor,
                                side,
                                window: None,
                            };
                            self.extend(&job, stats, &mut out);
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        stats.candidates += out.len() as u64;
        out
    }

    /// Depth-first growth of one seed. Appends accepted strings to `out`.
    fn extend(&self, job: &Job, stats: &mut SearchStats, out: &mut Vec<Candidate>) {
        let n = job.pattern.len();
        let (graph, ops, pat, start): (&Cdawg, &OperationSet, &[Symbol], Cursor) = match job.side {
            Side::Right => (self.index.forward(), self.ops, &job.pattern[job.lo..job.hi], job.seed),
            Side::Left => (
                self.index.reverse(),
                &self.rev_ops,
                &job.rev_pattern[n - job.hi..n - job.lo],
                self.index.to_reverse(job.seed),
            ),
        };
        let mut fs = FilterStack::new(ops, pat, job.bound);
        for &s in graph.cursor_symbols(start) {
            if !fs.push(s) {
                return;
            }
        }
        let mut stack: Vec<(Cursor, usize, Option<Symbol>)> = vec![(start, fs.depth(), None)];
        while let Some((c, depth, sym)) = stack.pop() {
            if let Some(sym) = sym {
                fs.truncate(depth - 1);
                if !fs.push(sym) {
                    continue;
                }
            }
            stats.steps += 1;
            let fc = match job.side {
                Side::Right => c,
                Side::Left => self.index.from_reverse(c),
            };
            if let Some(w) = job.window {
                if !fits(self.index, fc, w) {
                    stats.pruned += 1;
                    continue;
                }
            }
            if let Some(d) = fs.distance() {
                out.push(Candidate {
                    cursor: fc,
                    achieved: d,
                });
            }
            graph.for_each_step(c, |s, next| {
                if !s.is_sentinel() {
                    stack.push((next, depth + 1, Some(s)));
                }
            });
        }
    }

    /// Filtered walk over whole entries, used when the pattern is too short
    /// to split.
    fn traverse_entries(&self, pattern: &[Symbol], b: u32, stats: &mut SearchStats) -> Vec<MatchResult> {
        let fwd = self.index.forward();
        let mut out = Vec::new();
        let Some(start) = fwd.step(fwd.root_cursor(), Symbol::HASH) else {
            return out;
        };
        let mut fs = FilterStack::new(self.ops, pattern, b);
        let mut stack: Vec<(Cursor, usize, Option<Symbol>)> = vec![(start, 0, None)];
        while let Some((c, depth, sym)) = stack.pop() {
            if let Some(sym) = sym {
                fs.truncate(depth - 1);
                if !fs.push(sym) {
                    continue;
                }
            }
            stats.steps += 1;
            if let Some(d) = fs.distance() {
                if fwd.step(c, Symbol::DOLLAR).is_some() {
                    out.push(MatchResult {
                        entry: self.index.cursor_string(c),
                        distance: d,
                    });
                }
            }
            fwd.for_each_step(c, |s, next| {
                if !s.is_sentinel() {
                    stack.push((next, depth + 1, Some(s)));
                }
            });
        }
        out.sort();
        out
    }
}

/// One streaming search: candidates are pushed up the tree as soon as they
/// are found.
struct Run<'s, 'a> {
    s: &'s Searcher<'a>,
    pattern: &'s [Symbol],
    rev: Vec<Symbol>,
    b: u32,
    tree: &'s QueryTree,
    demands: Vec<Vec<DerivedQuery>>,
    opts: SearchOptions,
    seen: FxHashSet<(DerivedQuery, Cursor)>,
    root: Vec<Candidate>,
    stats: SearchStats,
}

impl<'s, 'a> Run<'s, 'a> {
    fn new(s: &'s Searcher<'a>, pattern: &'s [Symbol], b: u32, tree: &'s QueryTree, opts: SearchOptions) -> Self {
        let mut demands = vec![Vec::new(); tree.nodes().len()];
        for dq in derived_queries(tree, s.ops.omega_max()) {
            demands[dq.node].push(dq);
        }
        Run {
            s,
            pattern,
            rev: pattern.iter().rev().copied().collect(),
            b,
            tree,
            demands,
            opts,
            seen: FxHashSet::default(),
            root: Vec::new(),
            stats: SearchStats::default(),
        }
    }

    fn go(&mut self) {
        for leaf in self.tree.leaves() {
            for k in 0..self.demands[leaf].len() {
                let dq = self.demands[leaf][k];
                if let Some(c) = self.s.solve_leaf(self.pattern, self.tree, dq) {
                    self.emit(dq, c);
                }
            }
        }
        for n in 0..self.tree.nodes().len() {
            for k in 0..self.demands[n].len() {
                let dq = self.demands[n][k];
                if dq.splits(self.tree) {
                    continue;
                }
                let (lo, hi) = dq.range(self.tree);
                let job = Job {
                    pattern: self.pattern,
                    rev_pattern: &self.rev,
                    lo,
                    hi,
                    bound: self.tree.node(n).bound,
                    seed: self.s.index.root_cursor(),
                    side: Side::Right,
                    window: None,
                };
                let mut out = Vec::new();
                self.s.extend(&job, &mut self.stats, &mut out);
                for c in out {
                    self.emit(dq, c);
                }
            }
        }
    }

    fn window(&self, lo: usize, hi: usize, achieved: u32, side: Side) -> Window {
        let n = self.pattern.len() as i64;
        let s = self.s.ops.length_slack(self.b.saturating_sub(achieved)) as i64;
        // an operation inside the node may straddle the moving end
        let e = self.s.ops.rho_max() as i64 - 1;
        let (lo, hi) = (lo as i64, hi as i64);
        match side {
            Side::Right => Window {
                pre: (lo - s, lo + s),
                suf: (n - hi - s - e, n - lo + s + e),
            },
            Side::Left => Window {
                pre: (lo - s - e, hi + s + e),
                suf: (n - hi - s, n - hi + s),
            },
        }
    }

    fn emit(&mut self, dq: DerivedQuery, cand: Candidate) {
        if !self.seen.insert((dq, cand.cursor)) {
            return;
        }
        self.stats.candidates += 1;
        let Some(p) = self.tree.node(dq.node).parent else {
            self.root.push(cand);
            return;
        };
        let left = self.tree.is_left_child(dq.node);
        if !left && self.opts.skip_left {
            return;
        }
        let side = if left { Side::Right } else { Side::Left };
        let parents: Vec<DerivedQuery> = self.demands[p]
            .iter()
            .filter(|pd| pd.splits(self.tree) && if left { pd.i == dq.i } else { pd.j == dq.j })
            .copied()
            .collect();
        let mut out = Vec::new();
        for pdq in parents {
            let (lo, hi) = pdq.range(self.tree);
            let window = self.opts.prune.then(|| self.window(lo, hi, cand.achieved, side));
            let job = Job {
                pattern: self.pattern,
                rev_pattern: &self.rev,
                lo,
                hi,
                bound: self.tree.node(p).bound,
                seed: cand.cursor,
                side,
                window,
            };
            out.clear();
            self.s.extend(&job, &mut self.stats, &mut out);
            for &c in &out {
                self.emit(pdq, c);
            }
        }
    }
}

/// Entries within `b` of `pattern`, sorted by entry.
pub fn solve(index: &Scdawg, ops: &OperationSet, pattern: &[Symbol], b: u32) -> Vec<MatchResult> {
    Searcher::new(index, ops).solve(pattern, b)
}

/// Root substring solutions as a map from string to distance.
pub fn substring_map(index: &Scdawg, cands: &[Candidate]) -> BTreeMap<String, u32> {
    cands
        .iter()
        .map(|c| (index.cursor_string(c.cursor), c.achieved))
        .collect()
}
