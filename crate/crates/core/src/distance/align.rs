use super::dp::{first_row, next_row, INF};
use super::ops::{OpClass, Operation, OperationSet};
use crate::symbol::Symbol;

/// Outcome of a distance computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Value(u32),
    OverCutoff,
    Unreachable,
}

impl Distance {
    pub fn value(self) -> Option<u32> {
        match self {
            Distance::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("no alignment turns the first string into the second")]
pub struct Unreachable;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alignment {
    pub ops: Vec<Operation>,
}

impl Alignment {
    pub fn left(&self) -> Vec<Symbol> {
        self.ops.iter().flat_map(|o| o.lhs.iter().copied()).collect()
    }

    pub fn right(&self) -> Vec<Symbol> {
        self.ops.iter().flat_map(|o| o.rhs.iter().copied()).collect()
    }

    pub fn weight(&self) -> u32 {
        self.ops.iter().map(|o| o.weight).sum()
    }
}

/// Cheapest alignment weight turning `v` into `w`.
///
/// With a cutoff, weights above it come back as `OverCutoff`. Operation sets
/// without both insertion and deletion can leave pairs unconnected; those
/// are `Unreachable` (for such sets the cutoff is applied only at the end).
pub fn distance(ops: &OperationSet, v: &[Symbol], w: &[Symbol], cutoff: Option<u32>) -> Distance {
    let early = cutoff.filter(|_| ops.is_complete());
    if let Some(c) = early {
        if ops.is_unit() {
            return unit_banded(ops, v, w, c);
        }
    }
    let cap = early.map_or(INF, |c| c + 1);
    let rho = ops.rho_max();
    let width = v.len() + 1;
    // window[0] is the newest row, window[k] the row k symbols back
    let mut window: Vec<Vec<u32>> = (0..=rho).map(|_| vec![cap; width]).collect();
    let mut mins = vec![cap; rho + 1];
    first_row(ops, v, cap, &mut window[0]);
    mins[0] = window[0].iter().copied().min().unwrap();
    for m in 1..=w.len() {
        window.rotate_right(1);
        mins.rotate_right(1);
        let nprev = m.min(rho);
        let (cur, prev) = window.split_first_mut().unwrap();
        let prev: Vec<&[u32]> = prev[..nprev].iter().map(|r| r.as_slice()).collect();
        mins[0] = next_row(ops, v, &prev, &w[m - nprev..m], cap, cur);
        if early.is_some() && mins[..rho].iter().all(|&x| x >= cap) {
            return Distance::OverCutoff;
        }
    }
    let last = window[0][v.len()];
    if last >= INF {
        Distance::Unreachable
    } else if last >= cap || cutoff.is_some_and(|c| last > c) {
        Distance::OverCutoff
    } else {
        Distance::Value(last)
    }
}

/// Cutoff distance for substitute/insert/delete sets, restricted to the
/// diagonal band that the cutoff leaves reachable.
fn unit_banded(ops: &OperationSet, v: &[Symbol], w: &[Symbol], cutoff: u32) -> Distance {
    let slack = ops.length_slack(cutoff);
    let (n, total) = (v.len(), w.len());
    if n.abs_diff(total) > slack {
        return Distance::OverCutoff;
    }
    let cap = cutoff + 1;
    let ws = ops.class_weight(OpClass::Substitute).unwrap_or(INF);
    let wi = ops.class_weight(OpClass::Insert).unwrap_or(INF);
    let wd = ops.class_weight(OpClass::Delete).unwrap_or(INF);
    let mut prev = vec![cap; n + 1];
    first_row(ops, v, cap, &mut prev);
    let mut cur = vec![cap; n + 1];
    for m in 1..=total {
        let lo = m.saturating_sub(slack);
        let hi = n.min(m + slack);
        let sym = w[m - 1];
        let mut left = cap;
        let mut min = cap;
        for i in lo..=hi {
            let mut best = prev[i].saturating_add(wi).min(cap);
            if i > 0 {
                let diag = prev[i - 1];
                let sub = if v[i - 1] == sym { diag } else { diag.saturating_add(ws) };
                best = best.min(sub).min(left.saturating_add(wd));
            }
            let best = best.min(cap);
            cur[i] = best;
            left = best;
            min = min.min(best);
        }
        if lo > 0 {
            cur[lo - 1] = cap;
        }
        if hi < n {
            cur[hi + 1] = cap;
        }
        if min >= cap {
            return Distance::OverCutoff;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    match prev[n] {
        x if x <= cutoff => Distance::Value(x),
        _ => Distance::OverCutoff,
    }
}

fn full_matrix(ops: &OperationSet, v: &[Symbol], w: &[Symbol]) -> Vec<Vec<u32>> {
    let rho = ops.rho_max();
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(w.len() + 1);
    let mut row = vec![0; v.len() + 1];
    first_row(ops, v, INF, &mut row);
    rows.push(row);
    for m in 1..=w.len() {
        let nprev = m.min(rho);
        let mut out = vec![0; v.len() + 1];
        let prev: Vec<&[u32]> = (1..=nprev).map(|k| rows[m - k].as_slice()).collect();
        next_row(ops, v, &prev, &w[m - nprev..m], INF, &mut out);
        rows.push(out);
    }
    rows
}

/// Backtrace preference: identity, substitution, deletion, insertion, wider.
fn rank(l: usize, r: usize, weight: u32) -> (u8, usize, usize) {
    match (l, r) {
        (1, 1) if weight == 0 => (0, 0, 0),
        (1, 1) => (1, 0, 0),
        (1, 0) => (2, 0, 0),
        (0, 1) => (3, 0, 0),
        _ => (4, l, r),
    }
}

/// One optimal alignment, chosen deterministically.
pub fn align(ops: &OperationSet, v: &[Symbol], w: &[Symbol]) -> Result<Alignment, Unreachable> {
    let d = full_matrix(ops, v, w);
    if d[w.len()][v.len()] >= INF {
        return Err(Unreachable);
    }
    let (mut i, mut m) = (v.len(), w.len());
    let mut out = Vec::new();
    while i > 0 || m > 0 {
        let target = d[m][i];
        let mut pick: Option<((u8, usize, usize), Operation)> = None;
        for &(l, r) in ops.shapes() {
            if l > i || r > m || (l == 0 && r == 0) {
                continue;
            }
            let lhs = &v[i - l..i];
            let rhs = &w[m - r..m];
            let Some(weight) = ops.weight_of(lhs, rhs) else {
                continue;
            };
            let base = d[m - r][i - l];
            if base >= INF || base + weight != target {
                continue;
            }
            let key = rank(l, r, weight);
            if pick.as_ref().is_none_or(|(k, _)| key < *k) {
                pick = Some((
                    key,
                    Operation {
                        lhs: lhs.to_vec(),
                        rhs: rhs.to_vec(),
                        weight,
                    },
                ));
            }
        }
        let (_, op) = pick.expect("finite cell has an optimal predecessor");
        i -= op.lhs.len();
        m -= op.rhs.len();
        out.push(op);
    }
    out.reverse();
    Ok(Alignment { ops: out })
}

/// Splits `alignment` around position `k` of its left side.
///
/// The first part is the shortest prefix whose left side is the longest
/// prefix of `left[..k]` reachable by whole operations; the optional middle
/// operation is the one crossing `k`.
pub fn split_alignment(alignment: &Alignment, k: usize) -> (Alignment, Option<Operation>, Alignment) {
    let mut covered = 0;
    let mut idx = 0;
    let ops = &alignment.ops;
    while idx < ops.len() && covered < k && covered + ops[idx].lhs.len() <= k {
        covered += ops[idx].lhs.len();
        idx += 1;
    }
    let first = Alignment {
        ops: ops[..idx].to_vec(),
    };
    if covered == k {
        return (
            first,
            None,
            Alignment {
                ops: ops[idx..].to_vec(),
            },
        );
    }
    let middle = ops[idx].clone();
    (
        first,
        Some(middle),
        Alignment {
            ops: ops[idx + 1..].to_vec(),
        },
    )
}
