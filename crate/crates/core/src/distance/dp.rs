//! Row recurrences shared by the distance functions and every filter.
//!
//! Rows are indexed by pattern prefix length. Row `m` holds, for each `i`,
//! the cheapest alignment of `pattern[..i]` against the first `m` consumed
//! symbols. Values at or above `cap` all mean "too expensive".

use super::ops::{OpClass, OperationSet};
use crate::symbol::Symbol;

pub(crate) const INF: u32 = u32::MAX / 4;

#[inline]
fn add(base: u32, w: u32, cap: u32) -> u32 {
    (base + w).min(cap)
}

/// Row for the empty consumed string.
pub(crate) fn first_row(ops: &OperationSet, pattern: &[Symbol], cap: u32, out: &mut [u32]) {
    out[0] = 0;
    for i in 1..=pattern.len() {
        let mut best = cap;
        for &(l, r) in ops.shapes() {
            if r != 0 || l == 0 || l > i {
                continue;
            }
            let base = out[i - l];
            if base >= best {
                continue;
            }
            if let Some(w) = ops.weight_of(&pattern[i - l..i], &[]) {
                best = best.min(add(base, w, cap));
            }
        }
        out[i] = best;
    }
}

/// Computes the row after consuming `tail.last()`.
///
/// `prev[k]` is the row `k + 1` steps back and `tail` ends with the newest
/// symbol; both hold `min(consumed, rho_max)` entries. Returns the row minimum.
pub(crate) fn next_row(
    ops: &OperationSet,
    pattern: &[Symbol],
    prev: &[&[u32]],
    tail: &[Symbol],
    cap: u32,
    out: &mut [u32],
) -> u32 {
    debug_assert!(!tail.is_empty() && prev.len() >= tail.len().min(ops.rho_max()));
    if ops.is_unit() {
        return unit_row(ops, pattern, prev[0], *tail.last().unwrap(), cap, out);
    }
    let n = pattern.len();
    let mut min = cap;
    for i in 0..=n {
        let mut best = cap;
        for &(l, r) in ops.shapes() {
            if l > i || r > tail.len() || (l == 0 && r == 0) {
                continue;
            }
            let base = if r == 0 { out[i - l] } else { prev[r - 1][i - l] };
            if base >= best {
                continue;
            }
            if let Some(w) = ops.weight_of(&pattern[i - l..i], &tail[tail.len() - r..]) {
                best = best.min(add(base, w, cap));
            }
        }
        out[i] = best;
        min = min.min(best);
    }
    min
}

fn unit_row(ops: &OperationSet, pattern: &[Symbol], prev: &[u32], sym: Symbol, cap: u32, out: &mut [u32]) -> u32 {
    let ws = ops.class_weight(OpClass::Substitute).unwrap_or(INF);
    let wi = ops.class_weight(OpClass::Insert).unwrap_or(INF);
    let wd = ops.class_weight(OpClass::Delete).unwrap_or(INF);
    let mut left = if prev[0] < cap { add(prev[0], wi, cap) } else { cap };
    out[0] = left;
    let mut min = left;
    for i in 1..=pattern.len() {
        let diag = prev[i - 1];
        let mut best = if pattern[i - 1] == sym {
            diag
        } else if diag < cap {
            add(diag, ws, cap)
        } else {
            cap
        };
        let up = prev[i];
        if up < best {
            best = best.min(add(up, wi, cap));
        }
        if left < best {
            best = best.min(add(left, wd, cap));
        }
        out[i] = best;
        left = best;
        min = min.min(best);
    }
    min
}

/// Whether an operation whose right side has already begun with the last
/// `k` consumed symbols can still finish within `bound`.
///
/// `rows[k]` is the row `k` steps back (so `rows[0]` is the current row) and
/// `tail` ends with the newest symbol.
pub(crate) fn straddle_viable(
    ops: &OperationSet,
    pattern: &[Symbol],
    rows: &[&[u32]],
    tail: &[Symbol],
    bound: u32,
) -> bool {
    let n = pattern.len();
    for k in 1..ops.rho_max() {
        if k >= rows.len() || k > tail.len() {
            break;
        }
        let row = rows[k];
        let prefix = &tail[tail.len() - k..];
        for &(l, r) in ops.shapes() {
            if r <= k {
                continue;
            }
            for i in 0..=n.saturating_sub(l) {
                if i + l > n || row[i] > bound {
                    continue;
                }
                if let Some(w) = ops.min_weight_with_prefix(&pattern[i..i + l], prefix, r) {
                    if row[i] + w <= bound {
                        return true;
                    }
                }
            }
        }
    }
    false
}
