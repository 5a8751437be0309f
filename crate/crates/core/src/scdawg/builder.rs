//! Online construction.
//!
//! Strings are fed into a generalized suffix automaton. A node of that
//! automaton stands for a state of the compact graph exactly when it is the
//! root or its out-degree differs from one; nodes with a single successor
//! are interior points of compact edges. Out-degrees only grow and node
//! lengths never change, so once a node is promoted it keeps its id and its
//! canonical string for good.

use rustc_hash::FxHashMap;

use super::cdawg::{Cdawg, Edge};
use super::BuildError;
use crate::symbol::Symbol;

pub(crate) const NONE: u32 = u32::MAX;

/// Which sentinel opens and which closes every added string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `#W$`
    Forward,
    /// `$W#`
    Reverse,
}

impl Orientation {
    fn delimiters(self) -> (Symbol, Symbol) {
        match self {
            Orientation::Forward => (Symbol::HASH, Symbol::DOLLAR),
            Orientation::Reverse => (Symbol::DOLLAR, Symbol::HASH),
        }
    }
}

/// Incrementally built compact word graph over a growing set of strings.
pub struct CdawgBuilder {
    orientation: Orientation,
    text: Vec<Symbol>,
    blocks: Vec<(u32, u32)>,
    // automaton nodes
    len: Vec<u32>,
    link: Vec<u32>,
    end: Vec<u32>,
    head: Vec<u32>,
    outdeg: Vec<u32>,
    // automaton edges as singly linked lists, plus a lookup table keyed
    // by (node, symbol)
    e_sym: Vec<Symbol>,
    e_target: Vec<u32>,
    e_next: Vec<u32>,
    lookup: FxHashMap<u64, u32>,
    // compact state id per node, and back
    cid: Vec<u32>,
    node_of: Vec<u32>,
    touched: Vec<u32>,
}

impl CdawgBuilder {
    pub fn new(orientation: Orientation) -> CdawgBuilder {
        let mut b = CdawgBuilder {
            orientation,
            text: Vec::new(),
            blocks: Vec::new(),
            len: Vec::new(),
            link: Vec::new(),
            end: Vec::new(),
            head: Vec::new(),
            outdeg: Vec::new(),
            e_sym: Vec::new(),
            e_target: Vec::new(),
            e_next: Vec::new(),
            lookup: FxHashMap::default(),
            cid: Vec::new(),
            node_of: Vec::new(),
            touched: Vec::new(),
        };
        b.new_node(0, NONE, NONE);
        b.cid[0] = 0;
        b.node_of.push(0);
        b
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Number of compact states.
    pub fn state_count(&self) -> usize {
        self.node_of.len()
    }

    pub fn text(&self) -> &[Symbol] {
        &self.text
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    /// Length of the canonical string of compact state `q`.
    pub fn length(&self, q: u32) -> u32 {
        self.len[self.node_of[q as usize] as usize]
    }

    /// Text index of the last symbol of one occurrence of the canonical
    /// string; `None` for the root.
    pub fn end_pos(&self, q: u32) -> Option<u32> {
        let e = self.end[self.node_of[q as usize] as usize];
        (e != NONE).then_some(e)
    }

    pub fn suffix_link(&self, q: u32) -> Option<u32> {
        let l = self.link[self.node_of[q as usize] as usize];
        (l != NONE).then(|| self.cid[l as usize])
    }

    fn new_node(&mut self, len: u32, link: u32, end: u32) -> u32 {
        let id = self.len.len() as u32;
        self.len.push(len);
        self.link.push(link);
        self.end.push(end);
        self.head.push(NONE);
        self.outdeg.push(0);
        self.cid.push(NONE);
        id
    }

    #[inline]
    fn key(node: u32, sym: Symbol) -> u64 {
        (node as u64) << 32 | sym.code() as u64
    }

    #[inline]
    fn find(&self, node: u32, sym: Symbol) -> Option<u32> {
        self.lookup.get(&Self::key(node, sym)).copied()
    }

    fn add_edge(&mut self, node: u32, sym: Symbol, target: u32) {
        let e = self.e_sym.len() as u32;
        self.e_sym.push(sym);
        self.e_target.push(target);
        self.e_next.push(self.head[node as usize]);
        self.head[node as usize] = e;
        self.outdeg[node as usize] += 1;
        self.lookup.insert(Self::key(node, sym), e);
        self.touched.push(node);
    }

    fn clone_node(&mut self, q: u32, len: u32) -> u32 {
        let c = self.new_node(len, self.link[q as usize], self.end[q as usize]);
        let mut e = self.head[q as usize];
        let mut copied = Vec::new();
        while e != NONE {
            copied.push((self.e_sym[e as usize], self.e_target[e as usize]));
            e = self.e_next[e as usize];
        }
        for (sym, target) in copied.into_iter().rev() {
            self.add_edge(c, sym, target);
        }
        c
    }

    /// Re-points `sym` edges aimed at `from` to `to`, walking suffix links from `p`.
    fn redirect(&mut self, mut p: u32, sym: Symbol, from: u32, to: u32) {
        while p != NONE {
            match self.find(p, sym) {
                Some(e) if self.e_target[e as usize] == from => self.e_target[e as usize] = to,
                _ => break,
            }
            p = self.link[p as usize];
        }
    }

    fn extend(&mut self, last: u32, sym: Symbol, pos: u32) -> u32 {
        let next_len = self.len[last as usize] + 1;
        if let Some(e) = self.find(last, sym) {
            let q = self.e_target[e as usize];
            if self.len[q as usize] == next_len {
                return q;
            }
            let c = self.clone_node(q, next_len);
            self.redirect(last, sym, q, c);
            self.link[q as usize] = c;
            return c;
        }
        let cur = self.new_node(next_len, NONE, pos);
        let mut p = last;
        while p != NONE && self.find(p, sym).is_none() {
            self.add_edge(p, sym, cur);
            p = self.link[p as usize];
        }
        if p == NONE {
            self.link[cur as usize] = 0;
            return cur;
        }
        let q = self.e_target[self.find(p, sym).unwrap() as usize];
        if self.len[p as usize] + 1 == self.len[q as usize] {
            self.link[cur as usize] = q;
        } else {
            let c = self.clone_node(q, self.len[p as usize] + 1);
            self.redirect(p, sym, q, c);
            self.link[q as usize] = c;
            self.link[cur as usize] = c;
        }
        cur
    }

    /// Adds one delimited string. Returns the ids of the states it created,
    /// ordered by canonical length (ids are consecutive).
    pub fn add_string(&mut self, s: &[Symbol]) -> Result<Vec<u32>, BuildError> {
        let (open, close) = self.orientation.delimiters();
        if s.len() < 2 || s[0] != open || s[s.len() - 1] != close || s[1..s.len() - 1].iter().any(|x| x.is_sentinel()) {
            return Err(BuildError::SentinelMisuse);
        }
        if self.text.len() + s.len() >= (NONE / 2) as usize {
            return Err(BuildError::TooLarge);
        }
        let base = self.text.len() as u32;
        self.text.extend_from_slice(s);
        self.blocks.push((base, base + s.len() as u32 - 1));
        let first_new = self.len.len() as u32;
        self.touched.clear();
        let mut last = 0;
        for (k, &sym) in s.iter().enumerate() {
            last = self.extend(last, sym, base + k as u32);
        }
        let mut fresh: Vec<u32> = (first_new..self.len.len() as u32).collect();
        fresh.append(&mut self.touched);
        fresh.sort_unstable();
        fresh.dedup();
        fresh.retain(|&n| self.cid[n as usize] == NONE && self.outdeg[n as usize] != 1);
        fresh.sort_by_key(|&n| (self.len[n as usize], n));
        let mut ids = Vec::with_capacity(fresh.len());
        for n in fresh {
            let id = self.node_of.len() as u32;
            self.cid[n as usize] = id;
            self.node_of.push(n);
            ids.push(id);
        }
        Ok(ids)
    }

    /// Compact state reached from state `q` by the edge starting with `sym`.
    pub fn transition(&self, q: u32, sym: Symbol) -> Option<u32> {
        let e = self.find(self.node_of[q as usize], sym)?;
        Some(self.explicit_target(self.e_target[e as usize]).0)
    }

    /// Follows single-successor nodes up to the next compact state; returns
    /// its id and the number of symbols skipped.
    fn explicit_target(&self, mut node: u32) -> (u32, u32) {
        let mut skipped = 0;
        while self.cid[node as usize] == NONE {
            node = self.e_target[self.head[node as usize] as usize];
            skipped += 1;
        }
        (self.cid[node as usize], skipped)
    }

    /// Compact edges of state `q`, sorted by first symbol.
    pub fn edges(&self, q: u32) -> Vec<Edge> {
        let mut out = Vec::new();
        let mut e = self.head[self.node_of[q as usize] as usize];
        while e != NONE {
            let (target, skipped) = self.explicit_target(self.e_target[e as usize]);
            let len = skipped + 1;
            let tend = self.end[self.node_of[target as usize] as usize];
            out.push(Edge {
                sym: self.e_sym[e as usize],
                start: tend + 1 - len,
                len,
                target,
            });
            e = self.e_next[e as usize];
        }
        out.sort_by_key(|e| e.sym);
        out
    }

    /// Freezes the graph. Edge label lengths along single-successor chains
    /// are memoized so the pass is linear.
    pub fn finish(self) -> Cdawg {
        let nodes = self.len.len();
        // (compact target, skipped symbols) for every node
        let mut resolved: Vec<(u32, u32)> = vec![(NONE, 0); nodes];
        for (n, &id) in self.cid.iter().enumerate() {
            if id != NONE {
                resolved[n] = (id, 0);
            }
        }
        let mut chain = Vec::new();
        for start in 0..nodes as u32 {
            let mut n = start;
            while resolved[n as usize].0 == NONE {
                chain.push(n);
                n = self.e_target[self.head[n as usize] as usize];
            }
            let (target, mut skipped) = resolved[n as usize];
            while let Some(m) = chain.pop() {
                skipped += 1;
                resolved[m as usize] = (target, skipped);
            }
        }
        let states = self.node_of.len();
        let mut offsets = Vec::with_capacity(states + 1);
        let mut edges = Vec::new();
        let mut end_pos = Vec::with_capacity(states);
        let mut length = Vec::with_capacity(states);
        let mut suffix_link = Vec::with_capacity(states);
        for q in 0..states {
            let n = self.node_of[q] as usize;
            end_pos.push(self.end[n]);
            length.push(self.len[n]);
            suffix_link.push(if self.link[n] == NONE {
                NONE
            } else {
                self.cid[self.link[n] as usize]
            });
            offsets.push(edges.len() as u32);
            let first = edges.len();
            let mut e = self.head[n];
            while e != NONE {
                let (target, skipped) = resolved[self.e_target[e as usize] as usize];
                let len = skipped + 1;
                let tend = self.end[self.node_of[target as usize] as usize];
                edges.push(Edge {
                    sym: self.e_sym[e as usize],
                    start: tend + 1 - len,
                    len,
                    target,
                });
                e = self.e_next[e as usize];
            }
            edges[first..].sort_by_key(|e| e.sym);
        }
        offsets.push(edges.len() as u32);
        Cdawg::from_parts(self.text, self.blocks, end_pos, length, suffix_link, offsets, edges)
    }
}
