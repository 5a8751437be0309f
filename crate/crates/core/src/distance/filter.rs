use std::sync::Arc;

use super::dp::{first_row, next_row, straddle_viable};
use super::ops::OperationSet;
use crate::symbol::Symbol;

/// Incremental decision state for a fixed pattern and bound.
///
/// Besides the current row the state keeps `rho_max - 1` earlier rows and
/// consumed symbols, which is what multi-symbol right sides need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterState {
    pattern: Arc<[Symbol]>,
    bound: u32,
    consumed: usize,
    /// `rows[0]` is current, `rows[k]` is `k` symbols back.
    rows: Vec<Vec<u32>>,
    tail: Vec<Symbol>,
}

impl FilterState {
    pub fn pattern(&self) -> &[Symbol] {
        &self.pattern
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn consumed_length(&self) -> usize {
        self.consumed
    }

    /// The current row; `None` marks cells above the bound.
    pub fn dp_row(&self) -> Vec<Option<u32>> {
        self.rows[0].iter().map(|&v| (v <= self.bound).then_some(v)).collect()
    }
}

pub fn filter_start(ops: &OperationSet, pattern: &[Symbol], bound: u32) -> FilterState {
    let mut row = vec![0; pattern.len() + 1];
    first_row(ops, pattern, bound + 1, &mut row);
    FilterState {
        pattern: pattern.into(),
        bound,
        consumed: 0,
        rows: vec![row],
        tail: Vec::new(),
    }
}

/// Feeds one symbol. Returns `None` exactly when no continuation of the
/// consumed string can end within the bound.
pub fn filter_step(ops: &OperationSet, state: &FilterState, sym: Symbol) -> Option<FilterState> {
    let keep = ops.rho_max();
    let mut tail = state.tail.clone();
    tail.push(sym);
    let mut row = vec![0; state.pattern.len() + 1];
    let prev: Vec<&[u32]> = state.rows.iter().map(|r| r.as_slice()).collect();
    let min = next_row(ops, &state.pattern, &prev, &tail, state.bound + 1, &mut row);
    let mut rows = Vec::with_capacity(keep);
    rows.push(row);
    rows.extend(state.rows.iter().take(keep - 1).cloned());
    if min > state.bound {
        let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
        if !straddle_viable(ops, &state.pattern, &refs, &tail, state.bound) {
            return None;
        }
    }
    if tail.len() >= keep {
        tail.drain(..tail.len() + 1 - keep);
    }
    Some(FilterState {
        pattern: state.pattern.clone(),
        bound: state.bound,
        consumed: state.consumed + 1,
        rows,
        tail,
    })
}

/// Distance between pattern and consumed string when within the bound.
pub fn filter_distance(state: &FilterState) -> Option<u32> {
    let v = *state.rows[0].last().unwrap();
    (v <= state.bound).then_some(v)
}

/// Depth-indexed filter for depth-first traversals: rows for every prefix of
/// the current path live in one buffer, so backtracking is a truncation.
pub struct FilterStack<'a> {
    ops: &'a OperationSet,
    pattern: &'a [Symbol],
    bound: u32,
    width: usize,
    rows: Vec<u32>,
    syms: Vec<Symbol>,
}

impl<'a> FilterStack<'a> {
    pub fn new(ops: &'a OperationSet, pattern: &'a [Symbol], bound: u32) -> FilterStack<'a> {
        let width = pattern.len() + 1;
        let mut rows = vec![0; width];
        first_row(ops, pattern, bound + 1, &mut rows);
        FilterStack {
            ops,
            pattern,
            bound,
            width,
            rows,
            syms: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.syms.len()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn truncate(&mut self, depth: usize) {
        self.syms.truncate(depth);
    }

    /// Row after `depth` symbols.
    pub fn row(&self, depth: usize) -> &[u32] {
        &self.rows[depth * self.width..(depth + 1) * self.width]
    }

    /// Consumes `sym` if the extended path stays viable.
    pub fn push(&mut self, sym: Symbol) -> bool {
        let depth = self.syms.len();
        let w = self.width;
        let need = (depth + 2) * w;
        if self.rows.len() < need {
            self.rows.resize(need, 0);
        }
        self.syms.push(sym);
        let rho = self.ops.rho_max();
        let tail_start = (depth + 1).saturating_sub(rho);
        let (before, after) = self.rows.split_at_mut((depth + 1) * w);
        let out = &mut after[..w];
        let back = (depth + 1 - tail_start).min(depth + 1);
        let mut prev: [&[u32]; 8] = [&[]; 8];
        let nprev = back.min(8);
        for (k, slot) in prev.iter_mut().enumerate().take(nprev) {
            let d = depth - k;
            *slot = &before[d * w..(d + 1) * w];
        }
        let min = next_row(
            self.ops,
            self.pattern,
            &prev[..nprev],
            &self.syms[tail_start..],
            self.bound + 1,
            out,
        );
        if min > self.bound && !self.straddles(depth + 1) {
            self.syms.pop();
            return false;
        }
        true
    }

    fn straddles(&self, depth: usize) -> bool {
        if self.ops.rho_max() < 2 {
            return false;
        }
        let keep = self.ops.rho_max().min(depth + 1);
        let rows: Vec<&[u32]> = (0..keep).map(|k| self.row(depth - k)).collect();
        let tail_start = depth.saturating_sub(self.ops.rho_max());
        straddle_viable(self.ops, self.pattern, &rows, &self.syms[tail_start..depth], self.bound)
    }

    /// Distance between the pattern and the current path, if within bound.
    pub fn distance(&self) -> Option<u32> {
        let v = self.row(self.depth())[self.width - 1];
        (v <= self.bound).then_some(v)
    }
}
