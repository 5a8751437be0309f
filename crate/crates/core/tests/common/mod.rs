#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use lexiscan::distance::{OpClass, Operation, OperationSet};
use lexiscan::{symbols, Symbol};
use proptest::prelude::*;

/// Every concrete operation of `ops` whose sides use only `alphabet`.
pub fn enumerate_ops(ops: &OperationSet, alphabet: &[Symbol]) -> Vec<Operation> {
    let mut out: BTreeMap<(Vec<Symbol>, Vec<Symbol>), u32> = BTreeMap::new();
    let mut add = |l: Vec<Symbol>, r: Vec<Symbol>, w: u32| {
        out.entry((l, r)).or_insert(w);
    };
    // explicit tuples first so they shadow the class weight for that tuple
    for op in ops.explicit_ops() {
        if op.lhs.iter().chain(&op.rhs).all(|s| alphabet.contains(s)) {
            add(op.lhs.clone(), op.rhs.clone(), op.weight);
        }
    }
    for &a in alphabet {
        add(vec![a], vec![a], 0);
    }
    for class in OpClass::ALL {
        let Some(w) = ops.class_weight(class) else { continue };
        for &a in alphabet {
            match class {
                OpClass::Insert => add(vec![], vec![a], w),
                OpClass::Delete => add(vec![a], vec![], w),
                _ => {}
            }
            for &b in alphabet {
                match class {
                    OpClass::Substitute if a != b => add(vec![a], vec![b], w),
                    OpClass::Transpose if a != b => add(vec![a, b], vec![b, a], w),
                    _ => {}
                }
                for &c in alphabet {
                    match class {
                        OpClass::Merge => add(vec![a, b], vec![c], w),
                        OpClass::Split => add(vec![a], vec![b, c], w),
                        _ => {}
                    }
                }
            }
        }
    }
    out.into_iter()
        .map(|((lhs, rhs), weight)| Operation { lhs, rhs, weight })
        .collect()
}

fn alphabet_of(parts: &[&[Symbol]]) -> Vec<Symbol> {
    let set: BTreeSet<Symbol> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    set.into_iter().collect()
}

/// Minimum alignment weight by forward recursion over enumerated operations.
pub fn oracle_distance(ops: &OperationSet, v: &[Symbol], w: &[Symbol]) -> Option<u32> {
    let concrete = enumerate_ops(ops, &alphabet_of(&[v, w]));
    let mut memo: HashMap<(usize, usize), Option<u32>> = HashMap::new();
    fn go(
        i: usize,
        j: usize,
        v: &[Symbol],
        w: &[Symbol],
        ops: &[Operation],
        memo: &mut HashMap<(usize, usize), Option<u32>>,
    ) -> Option<u32> {
        if i == v.len() && j == w.len() {
            return Some(0);
        }
        if let Some(&r) = memo.get(&(i, j)) {
            return r;
        }
        let mut best: Option<u32> = None;
        for op in ops {
            if v[i..].starts_with(&op.lhs) && w[j..].starts_with(&op.rhs) {
                if let Some(rest) = go(i + op.lhs.len(), j + op.rhs.len(), v, w, ops, memo) {
                    let total = rest + op.weight;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
            }
        }
        memo.insert((i, j), best);
        best
    }
    go(0, 0, v, w, &concrete, &mut memo)
}

/// Textbook Wagner-Fischer with unit costs.
pub fn wagner_fischer(a: &[Symbol], b: &[Symbol]) -> u32 {
    let mut prev: Vec<u32> = (0..=b.len() as u32).collect();
    for i in 1..=a.len() {
        let mut cur = vec![i as u32; b.len() + 1];
        for j in 1..=b.len() {
            let cost = u32::from(a[i - 1] != b[j - 1]);
            cur[j] = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
        }
        prev = cur;
    }
    prev[b.len()]
}

pub fn rev(v: &[Symbol]) -> Vec<Symbol> {
    v.iter().rev().copied().collect()
}

pub fn word(alpha: &'static str, max: usize) -> impl Strategy<Value = Vec<Symbol>> + Clone {
    let chars: Vec<char> = alpha.chars().collect();
    prop::collection::vec(prop::sample::select(chars), 0..=max)
        .prop_map(|cs| cs.into_iter().map(Symbol::from).collect())
}

pub fn nonempty_word(alpha: &'static str, max: usize) -> impl Strategy<Value = Vec<Symbol>> {
    let chars: Vec<char> = alpha.chars().collect();
    prop::collection::vec(prop::sample::select(chars), 1..=max)
        .prop_map(|cs| cs.into_iter().map(Symbol::from).collect())
}

/// Operation sets mixing random classes with random explicit tuples over "abc".
pub fn arb_ops() -> impl Strategy<Value = OperationSet> {
    let class = prop::sample::select(OpClass::ALL.to_vec());
    let classes = prop::collection::vec((class, 1u32..=3), 0..=6);
    let explicit = prop::collection::vec((word("abc", 2), word("abc", 2), 1u32..=3), 0..=4);
    (classes, explicit).prop_map(|(classes, explicit)| {
        let ops: Vec<Operation> = explicit
            .into_iter()
            .filter(|(l, r, _)| !(l.is_empty() && r.is_empty()) && !(l.len() == 1 && l == r))
            .map(|(lhs, rhs, weight)| Operation { lhs, rhs, weight })
            .collect();
        let classes: Vec<(OpClass, u32)> = classes;
        OperationSet::new(&classes, &ops).expect("valid random set")
    })
}

/// Random sets that only use width-1 left sides.
pub fn arb_narrow_ops() -> impl Strategy<Value = OperationSet> {
    let class = prop::sample::select(vec![
        OpClass::Substitute,
        OpClass::Insert,
        OpClass::Delete,
        OpClass::Split,
    ]);
    let classes = prop::collection::vec((class, 1u32..=3), 0..=4);
    let explicit = prop::collection::vec((word("abc", 1), word("abc", 2), 1u32..=3), 0..=4);
    (classes, explicit).prop_map(|(classes, explicit)| {
        let ops: Vec<Operation> = explicit
            .into_iter()
            .filter(|(l, r, _)| !(l.is_empty() && r.is_empty()) && !(l.len() == 1 && l == r))
            .map(|(lhs, rhs, weight)| Operation { lhs, rhs, weight })
            .collect();
        let classes: Vec<(OpClass, u32)> = classes;
        OperationSet::new(&classes, &ops).expect("valid random set")
    })
}

pub fn s(text: &str) -> Vec<Symbol> {
    symbols(text)
}

/// Every string over `alpha` of length at most `max`, shortest first.
pub fn all_strings(alpha: &[Symbol], max: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for &a in alpha {
                let mut x = w.clone();
                x.push(a);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
