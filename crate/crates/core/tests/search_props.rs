mod common;

use std::collections::BTreeMap;

use common::{arb_ops, s};
use lexiscan::baselines::{forward_backward_search, oflazer_search, BruteForce, Trie};
use lexiscan::bench::{generate_queries, QuerySpec};
use lexiscan::distance::{distance, preset_operations, OpClass, Operation, OperationSet};
use lexiscan::scdawg::{oracle::substring_class_oracle, Lexicon, Scdawg};
use lexiscan::search::{build_query_tree, derived_queries, DerivedQuery, QueryTree, SearchOptions, Searcher};
use lexiscan::{render, symbols, Symbol};
use proptest::prelude::*;

fn lexicon(max_entries: usize, max_len: usize, alpha: &'static str) -> impl Strategy<Value = Lexicon> {
    let chars: Vec<char> = alpha.chars().collect();
    let word = prop::collection::vec(prop::sample::select(chars), 1..=max_len)
        .prop_map(|cs| cs.into_iter().collect::<String>());
    prop::collection::vec(word, 1..=max_entries).prop_map(|ws| Lexicon::from_entries(ws).unwrap().0)
}

fn preset() -> impl Strategy<Value = OperationSet> {
    prop::sample::select(vec!["lev", "lev-transpose", "lev-merge-split"]).prop_map(|p| preset_operations(p).unwrap())
}

/// Every lexicon substring within `b` of `p`, by enumeration.
fn sol_oracle(lex: &Lexicon, ops: &OperationSet, p: &[Symbol], b: u32) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for v in substring_class_oracle(lex).substrings() {
        if v.iter().any(|s| s.is_sentinel()) {
            continue;
        }
        if let Some(d) = distance(ops, p, &v, Some(b)).value() {
            out.insert(render(&v, false), d);
        }
    }
    out
}

fn check_all(lex: &Lexicon, ops: &OperationSet, p: &[Symbol], b: u32) -> Result<(), TestCaseError> {
    let idx = Scdawg::build(lex).unwrap();
    let searcher = Searcher::new(&idx, ops);
    let want = BruteForce::new(lex).search(ops, p, b);
    let got = searcher.solve(p, b);
    prop_assert_eq!(&got, &want, "new method, pattern {:?}", render(p, false));
    let unpruned = searcher.solve_with(
        p,
        b,
        &SearchOptions {
            prune: false,
            ..SearchOptions::default()
        },
    );
    prop_assert_eq!(&unpruned.matches, &want);
    let bottom = searcher.solve_with(
        p,
        b,
        &SearchOptions {
            bottom_up: true,
            ..SearchOptions::default()
        },
    );
    prop_assert_eq!(&bottom.matches, &want);
    let fwd = Trie::from_lexicon(lex);
    let rev = Trie::reversed_from_lexicon(lex);
    prop_assert_eq!(&oflazer_search(&fwd, ops, p, b), &want);
    prop_assert_eq!(&forward_backward_search(&fwd, &rev, ops, p, b), &want);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn presets_match_brute_force(
        lex in lexicon(40, 9, "abcd"),
        ops in preset(),
        p in "[abcde]{0,10}",
        b in 0u32..=3,
    ) {
        check_all(&lex, &ops, &symbols(&p), b)?;
    }

    #[test]
    fn random_operation_sets_match_brute_force(
        lex in lexicon(25, 7, "abc"),
        ops in arb_ops(),
        p in "[abc]{0,8}",
        b in 0u32..=3,
    ) {
        check_all(&lex, &ops, &symbols(&p), b)?;
    }

    #[test]
    fn generated_queries_match(lex in lexicon(60, 12, "abcdef"), ops in preset(), b in 0u32..=3, seed in any::<u64>()) {
        let spec = QuerySpec { bound: b, count: 3, seed, min_length_multiplier: 1 };
        if let Ok(qs) = generate_queries(&lex, &ops, &spec) {
            for q in qs {
                check_all(&lex, &ops, &symbols(&q.pattern), b)?;
            }
        }
    }

    #[test]
    fn root_solutions_are_all_close_substrings(
        lex in lexicon(12, 7, "abc"),
        ops in preset(),
        p in "[abc]{1,8}",
        b in 0u32..=2,
    ) {
        let p = symbols(&p);
        let idx = Scdawg::build(&lex).unwrap();
        let searcher = Searcher::new(&idx, &ops);
        let want = sol_oracle(&lex, &ops, &p, b);
        let out = searcher.solve_with(&p, b, &SearchOptions { include_substrings: true, ..SearchOptions::default() });
        let got: BTreeMap<String, u32> = out.substrings.unwrap().into_iter().collect();
        prop_assert_eq!(&got, &want);
        if let Ok(tree) = build_query_tree(p.len(), b) {
            let root = DerivedQuery { node: QueryTree::ROOT, i: 0, j: 0 };
            let bottom = lexiscan::search::substring_map(&idx, &searcher.solve_node_bottom_up(&p, &tree, root));
            prop_assert_eq!(&bottom, &want);
        }
    }

    #[test]
    fn every_derived_query_is_solved(
        lex in lexicon(12, 7, "abc"),
        ops in preset(),
        p in "[abc]{3,9}",
        b in 1u32..=3,
    ) {
        let p = symbols(&p);
        let Ok(tree) = build_query_tree(p.len(), b) else { return Ok(()) };
        let idx = Scdawg::build(&lex).unwrap();
        let searcher = Searcher::new(&idx, &ops);
        for dq in derived_queries(&tree, ops.omega_max()) {
            let (lo, hi) = dq.range(&tree);
            let bound = tree.node(dq.node).bound;
            let got = searcher.solve_node_bottom_up(&p, &tree, dq);
            for c in &got {
                prop_assert!(c.achieved <= bound);
            }
            let got = lexiscan::search::substring_map(&idx, &got);
            prop_assert_eq!(got, sol_oracle(&lex, &ops, &p[lo..hi], bound));
        }
    }

    #[test]
    fn tree_shape(len in 0usize..=40, b in 0u32..=10) {
        match build_query_tree(len, b) {
            Err(_) => prop_assert!(len < b as usize + 1),
            Ok(tree) => {
                let leaves = tree.leaves();
                prop_assert_eq!(leaves.len(), b as usize + 1);
                let mut at = 0;
                let (mut short, mut long) = (usize::MAX, 0);
                for &l in &leaves {
                    let n = tree.node(l);
                    prop_assert_eq!(n.lo, at);
                    prop_assert_eq!(n.bound, 0);
                    at = n.hi;
                    short = short.min(n.len());
                    long = long.max(n.len());
                }
                prop_assert_eq!(at, len);
                prop_assert!(long - short <= 1);
                for n in tree.nodes() {
                    if let Some((l, r)) = n.children {
                        let (l, r) = (tree.node(l), tree.node(r));
                        prop_assert_eq!(l.bound + r.bound, n.bound - 1);
                        prop_assert_eq!((l.lo, l.hi, r.hi), (n.lo, r.lo, n.hi));
                    }
                }
            }
        }
    }
}

#[test]
fn worked_example_sets() {
    let (lex, _) = Lexicon::from_entries(["ear", "lead", "real"]).unwrap();
    let idx = Scdawg::build(&lex).unwrap();
    let lev = preset_operations("lev").unwrap();
    let searcher = Searcher::new(&idx, &lev);
    let p = s("dread");
    let tree = build_query_tree(5, 2).unwrap();
    let root = DerivedQuery { node: 0, i: 0, j: 0 };
    let got = lexiscan::search::substring_map(&idx, &searcher.solve_node_bottom_up(&p, &tree, root));
    assert_eq!(got, sol_oracle(&lex, &lev, &p, 2));
    let names: Vec<&str> = got.keys().map(|k| k.as_str()).collect();
    assert_eq!(names, ["ead", "lead", "rea", "real"]);
    let out = searcher.solve_with(&p, 2, &SearchOptions::default());
    let entries: Vec<(&str, u32)> = out.matches.iter().map(|m| (m.entry.as_str(), m.distance)).collect();
    assert_eq!(entries, [("lead", 2), ("real", 2)]);
    assert!(!out.fallback);
    assert_eq!(searcher.solve_str("ear", 0).len(), 1);
    let lt = preset_operations("lev-transpose").unwrap();
    let got = Searcher::new(&idx, &lt).solve_str("laed", 1);
    assert_eq!(got.len(), 1);
    assert_eq!((got[0].entry.as_str(), got[0].distance), ("lead", 1));
}

/// Explicit operations of width three let a single operation swallow a
/// whole one-symbol piece.
#[test]
fn wide_operations() {
    let ops = OperationSet::new(
        &[(OpClass::Substitute, 1), (OpClass::Insert, 1), (OpClass::Delete, 1)],
        &[
            Operation {
                lhs: s("abc"),
                rhs: s("x"),
                weight: 1,
            },
            Operation {
                lhs: s("x"),
                rhs: s("abc"),
                weight: 1,
            },
            Operation {
                lhs: s("cab"),
                rhs: s("bca"),
                weight: 1,
            },
        ],
    )
    .unwrap();
    let (lex, _) = Lexicon::from_entries(["xbb", "abcx", "bcax", "cxa", "aaabca", "cabca", "xxx"]).unwrap();
    let idx = Scdawg::build(&lex).unwrap();
    let searcher = Searcher::new(&idx, &ops);
    let brute = BruteForce::new(&lex);
    for p in [
        "abcbb", "xabc", "abcabc", "cabx", "xbca", "ab", "abcaaa", "cabcab", "xx",
    ] {
        let p = s(p);
        for b in 0..=3 {
            assert_eq!(
                searcher.solve(&p, b),
                brute.search(&ops, &p, b),
                "{} {b}",
                render(&p, false)
            );
        }
    }
}

#[test]
fn wide_random() {
    use proptest::test_runner::{Config, TestRunner};
    let mut runner = TestRunner::new(Config::with_cases(150));
    let ops = OperationSet::new(
        &[
            (OpClass::Substitute, 1),
            (OpClass::Insert, 1),
            (OpClass::Delete, 1),
            (OpClass::Transpose, 1),
        ],
        &[
            Operation {
                lhs: s("abc"),
                rhs: s("c"),
                weight: 1,
            },
            Operation {
                lhs: s("b"),
                rhs: s("cab"),
                weight: 1,
            },
        ],
    )
    .unwrap();
    runner
        .run(&(lexicon(20, 7, "abc"), "[abc]{0,8}", 0u32..=3), |(lex, p, b)| {
            check_all(&lex, &ops, &symbols(&p), b)
        })
        .unwrap();
}
