//! Brute-force substring classes, for checking the index on small inputs.

use std::collections::{BTreeMap, BTreeSet};

use super::Lexicon;
use crate::symbol::{symbols, Symbol};

/// Substrings of the delimited lexicon grouped by their canonical
/// extension: the longest `aXb` such that every occurrence of `X` sits
/// inside an occurrence of `aXb`.
#[derive(Clone, Debug)]
pub struct SubstringClasses {
    texts: Vec<Vec<Symbol>>,
    /// canonical string -> members, shortest first
    pub classes: BTreeMap<Vec<Symbol>, Vec<Vec<Symbol>>>,
}

impl SubstringClasses {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn canonical(&self, x: &[Symbol]) -> Option<Vec<Symbol>> {
        canonical(&self.texts, x)
    }

    /// All distinct substrings, the empty one included.
    pub fn substrings(&self) -> BTreeSet<Vec<Symbol>> {
        self.classes.values().flatten().cloned().collect()
    }

    pub fn texts(&self) -> &[Vec<Symbol>] {
        &self.texts
    }
}

fn occurrences(texts: &[Vec<Symbol>], x: &[Symbol]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (t, text) in texts.iter().enumerate() {
        if x.len() > text.len() {
            continue;
        }
        for i in 0..=text.len() - x.len() {
            if &text[i..i + x.len()] == x {
                out.push((t, i));
            }
        }
    }
    out
}

fn canonical(texts: &[Vec<Symbol>], x: &[Symbol]) -> Option<Vec<Symbol>> {
    let occ = occurrences(texts, x);
    if occ.is_empty() {
        return None;
    }
    let mut left = 0;
    loop {
        let mut seen = None;
        let ok = occ.iter().all(|&(t, i)| {
            if i < left + 1 {
                return false;
            }
            let s = texts[t][i - left - 1];
            *seen.get_or_insert(s) == s
        });
        if !ok {
            break;
        }
        left += 1;
    }
    let mut right = 0;
    loop {
        let mut seen = None;
        let ok = occ.iter().all(|&(t, i)| {
            let j = i + x.len() + right;
            if j >= texts[t].len() {
                return false;
            }
            let s = texts[t][j];
            *seen.get_or_insert(s) == s
        });
        if !ok {
            break;
        }
        right += 1;
    }
    let (t, i) = occ[0];
    Some(texts[t][i - left..i + x.len() + right].to_vec())
}

/// Groups every substring of `#W$` over all entries by canonical extension.
pub fn substring_class_oracle(lexicon: &Lexicon) -> SubstringClasses {
    let texts: Vec<Vec<Symbol>> = lexicon
        .entries()
        .iter()
        .map(|e| {
            let mut v = vec![Symbol::HASH];
            v.extend(symbols(e));
            v.push(Symbol::DOLLAR);
            v
        })
        .collect();
    let mut subs = BTreeSet::new();
    for t in &texts {
        for i in 0..=t.len() {
            for j in i..=t.len() {
                subs.insert(t[i..j].to_vec());
            }
        }
    }
    let mut classes: BTreeMap<Vec<Symbol>, Vec<Vec<Symbol>>> = BTreeMap::new();
    for x in subs {
        let c = canonical(&texts, &x).unwrap();
        classes.entry(c).or_default().push(x);
    }
    for members in classes.values_mut() {
        members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    }
    SubstringClasses { texts, classes }
}
