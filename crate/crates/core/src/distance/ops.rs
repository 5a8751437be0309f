use std::collections::BTreeMap;
use std::fmt;

use crate::symbol::{render, symbols, Symbol};

/// Largest weight accepted for any operation; keeps DP sums far from overflow.
pub const MAX_WEIGHT: u32 = 1 << 20;

/// Longest side accepted for an explicit operation.
pub const MAX_SIDE: usize = 8;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OpsError {
    #[error("unknown preset `{0}` (expected lev, lev-transpose or lev-merge-split)")]
    UnknownPreset(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid operation: {0}")]
    Invalid(String),
}

/// A rewriting step turning `lhs` (pattern side) into `rhs` (candidate side).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operation {
    pub lhs: Vec<Symbol>,
    pub rhs: Vec<Symbol>,
    pub weight: u32,
}

impl Operation {
    pub fn width(&self) -> usize {
        self.lhs.len()
    }

    pub fn is_identity(&self) -> bool {
        self.lhs.len() == 1 && self.lhs == self.rhs
    }
}

impl fmt::Debug for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}|{}|{}>",
            render(&self.lhs, true),
            render(&self.rhs, true),
            self.weight
        )
    }
}

/// Operation families that apply to every symbol, kept procedural.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpClass {
    /// `<a, c>` with `a != c`
    Substitute,
    /// `<"", c>`
    Insert,
    /// `<a, "">`
    Delete,
    /// `<ab, ba>` with `a != b`
    Transpose,
    /// `<ab, c>`
    Merge,
    /// `<a, bc>`
    Split,
}

impl OpClass {
    pub const ALL: [OpClass; 6] = [
        OpClass::Substitute,
        OpClass::Insert,
        OpClass::Delete,
        OpClass::Transpose,
        OpClass::Merge,
        OpClass::Split,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpClass::Substitute => "substitute",
            OpClass::Insert => "insert",
            OpClass::Delete => "delete",
            OpClass::Transpose => "transpose",
            OpClass::Merge => "merge",
            OpClass::Split => "split",
        }
    }

    pub fn from_name(name: &str) -> Option<OpClass> {
        OpClass::ALL.into_iter().find(|c| c.name() == name)
    }

    /// `(|lhs|, |rhs|)`
    pub fn shape(self) -> (usize, usize) {
        match self {
            OpClass::Substitute => (1, 1),
            OpClass::Insert => (0, 1),
            OpClass::Delete => (1, 0),
            OpClass::Transpose => (2, 2),
            OpClass::Merge => (2, 1),
            OpClass::Split => (1, 2),
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// A set of weighted operations: identities, implicit classes and explicit
/// tuples. Explicit tuples override class weights for the exact pair they name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationSet {
    classes: [Option<u32>; 6],
    explicit: BTreeMap<Vec<Symbol>, Vec<(Vec<Symbol>, u32)>>,
    omega_max: usize,
    rho_max: usize,
    shapes: Vec<(usize, usize)>,
}

impl OperationSet {
    pub fn new(classes: &[(OpClass, u32)], explicit: &[Operation]) -> Result<OperationSet, OpsError> {
        let mut set = OperationSet {
            classes: [None; 6],
            explicit: BTreeMap::new(),
            omega_max: 1,
            rho_max: 1,
            shapes: Vec::new(),
        };
        for &(class, w) in classes {
            if w == 0 || w > MAX_WEIGHT {
                return Err(OpsError::Invalid(format!(
                    "class {} has invalid weight {w}",
                    class.name()
                )));
            }
            let slot = &mut set.classes[class.index()];
            *slot = Some(slot.map_or(w, |old| old.min(w)));
        }
        for op in explicit {
            set.insert_explicit(op).map_err(OpsError::Invalid)?;
        }
        set.finish();
        Ok(set)
    }

    fn insert_explicit(&mut self, op: &Operation) -> Result<(), String> {
        if op.lhs.is_empty() && op.rhs.is_empty() {
            return Err("both sides empty".into());
        }
        if op.is_identity() {
            return Err("weight given for an identity operation".into());
        }
        if op.weight == 0 {
            return Err("zero weight on a non-identity operation".into());
        }
        if op.weight > MAX_WEIGHT {
            return Err(format!("weight exceeds {MAX_WEIGHT}"));
        }
        if op.lhs.len() > MAX_SIDE || op.rhs.len() > MAX_SIDE {
            return Err(format!("side longer than {MAX_SIDE} symbols"));
        }
        if op.lhs.iter().chain(&op.rhs).any(|s| s.is_sentinel()) {
            return Err("sentinel symbol in operation".into());
        }
        let list = self.explicit.entry(op.lhs.clone()).or_default();
        match list.iter_mut().find(|(r, _)| *r == op.rhs) {
            Some(entry) => entry.1 = entry.1.min(op.weight),
            None => {
                list.push((op.rhs.clone(), op.weight));
                list.sort();
            }
        }
        Ok(())
    }

    fn finish(&mut self) {
        let mut shapes = vec![(1, 1)];
        let mut omega = 1;
        let mut rho = 1;
        for class in OpClass::ALL {
            if self.classes[class.index()].is_some() {
                shapes.push(class.shape());
            }
        }
        for (lhs, list) in &self.explicit {
            for (rhs, _) in list {
                shapes.push((lhs.len(), rhs.len()));
            }
        }
        shapes.sort();
        shapes.dedup();
        for &(l, r) in &shapes {
            omega = omega.max(l);
            rho = rho.max(r);
        }
        self.shapes = shapes;
        self.omega_max = omega;
        self.rho_max = rho;
    }

    /// Maximum `|lhs|` over all operations.
    pub fn omega_max(&self) -> usize {
        self.omega_max
    }

    /// Maximum `|rhs|` over all operations.
    pub fn rho_max(&self) -> usize {
        self.rho_max
    }

    pub fn class_weight(&self, class: OpClass) -> Option<u32> {
        self.classes[class.index()]
    }

    /// Every `(|lhs|, |rhs|)` pair some operation can have, identities included.
    pub fn shapes(&self) -> &[(usize, usize)] {
        &self.shapes
    }

    pub fn explicit_ops(&self) -> impl Iterator<Item = Operation> + '_ {
        self.explicit.iter().flat_map(|(lhs, list)| {
            list.iter().map(move |(rhs, w)| Operation {
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                weight: *w,
            })
        })
    }

    pub fn has_explicit(&self) -> bool {
        !self.explicit.is_empty()
    }

    /// True when only width-1, single-output shapes exist and no explicit
    /// tuples need to be looked up.
    pub(crate) fn is_unit(&self) -> bool {
        self.explicit.is_empty() && self.omega_max == 1 && self.rho_max == 1
    }

    /// True when every pair of strings is connected by some alignment.
    pub fn is_complete(&self) -> bool {
        self.class_weight(OpClass::Insert).is_some() && self.class_weight(OpClass::Delete).is_some()
    }

    /// Weight of the cheapest operation rewriting `lhs` into `rhs`.
    pub fn weight_of(&self, lhs: &[Symbol], rhs: &[Symbol]) -> Option<u32> {
        if lhs.len() == 1 && rhs.len() == 1 && lhs[0] == rhs[0] {
            return Some(0);
        }
        if !self.explicit.is_empty() {
            if let Some(list) = self.explicit.get(lhs) {
                if let Some((_, w)) = list.iter().find(|(r, _)| r == rhs) {
                    return Some(*w);
                }
            }
        }
        self.class_weight_of(lhs, rhs)
    }

    fn class_weight_of(&self, lhs: &[Symbol], rhs: &[Symbol]) -> Option<u32> {
        let class = match (lhs.len(), rhs.len()) {
            (1, 1) => OpClass::Substitute,
            (0, 1) => OpClass::Insert,
            (1, 0) => OpClass::Delete,
            (2, 2) => {
                if lhs[0] != lhs[1] && lhs[0] == rhs[1] && lhs[1] == rhs[0] {
                    OpClass::Transpose
                } else {
                    return None;
                }
            }
            (2, 1) => OpClass::Merge,
            (1, 2) => OpClass::Split,
            _ => return None,
        };
        self.classes[class.index()]
    }

    /// Cheapest operation with the given `lhs`, an `rhs` of length `rhs_len`
    /// and `rhs` starting with `prefix`. Used to test whether a partially
    /// produced right side can still be completed.
    pub(crate) fn min_weight_with_prefix(&self, lhs: &[Symbol], prefix: &[Symbol], rhs_len: usize) -> Option<u32> {
        debug_assert!(prefix.len() < rhs_len);
        let mut best: Option<u32> = None;
        let mut take = |w: u32| best = Some(best.map_or(w, |b| b.min(w)));
        if let Some(list) = self.explicit.get(lhs) {
            for (r, w) in list {
                if r.len() == rhs_len && r.starts_with(prefix) {
                    take(*w);
                }
            }
        }
        match (lhs.len(), rhs_len, prefix.len()) {
            (2, 2, 1) => {
                if lhs[0] != lhs[1] && prefix[0] == lhs[1] {
                    if let Some(w) = self.weight_of(lhs, &[lhs[1], lhs[0]]) {
                        take(w);
                    }
                }
            }
            (1, 2, 1) => {
                // the free second symbol can always avoid an explicit override
                if let Some(w) = self.class_weight(OpClass::Split) {
                    take(w);
                }
            }
            _ => {}
        }
        best
    }

    /// Upper bound on how far a budget of `budget` can move string length.
    pub fn length_slack(&self, budget: u32) -> usize {
        let mut slack = 0u64;
        let mut consider = |diff: usize, w: u32| {
            slack = slack.max(budget as u64 * diff as u64 / w as u64);
        };
        for class in OpClass::ALL {
            if let Some(w) = self.class_weight(class) {
                let (l, r) = class.shape();
                consider(l.abs_diff(r), w);
            }
        }
        for (lhs, list) in &self.explicit {
            for (rhs, w) in list {
                consider(lhs.len().abs_diff(rhs.len()), *w);
            }
        }
        slack as usize
    }

    /// Mirror image: `<X, Y>` becomes `<X^rev, Y^rev>`.
    pub fn reversed(&self) -> OperationSet {
        let mut out = OperationSet {
            classes: self.classes,
            explicit: BTreeMap::new(),
            omega_max: 1,
            rho_max: 1,
            shapes: Vec::new(),
        };
        for op in self.explicit_ops() {
            let rev = Operation {
                lhs: op.lhs.iter().rev().copied().collect(),
                rhs: op.rhs.iter().rev().copied().collect(),
                weight: op.weight,
            };
            out.insert_explicit(&rev).expect("reversal keeps operations valid");
        }
        out.finish();
        out
    }
}

/// Built-in operation sets; all non-identity weights are 1.
pub fn preset_operations(name: &str) -> Result<OperationSet, OpsError> {
    let classes: &[OpClass] = match name {
        "lev" => &[OpClass::Substitute, OpClass::Insert, OpClass::Delete],
        "lev-transpose" => &[
            OpClass::Substitute,
            OpClass::Insert,
            OpClass::Delete,
            OpClass::Transpose,
        ],
        "lev-merge-split" => &[
            OpClass::Substitute,
            OpClass::Insert,
            OpClass::Delete,
            OpClass::Merge,
            OpClass::Split,
        ],
        other => return Err(OpsError::UnknownPreset(other.to_string())),
    };
    let weighted: Vec<(OpClass, u32)> = classes.iter().map(|&c| (c, 1)).collect();
    OperationSet::new(&weighted, &[])
}

pub const PRESETS: [&str; 3] = ["lev", "lev-transpose", "lev-merge-split"];

pub fn reverse_operations(ops: &OperationSet) -> OperationSet {
    ops.reversed()
}

/// Parses the tab-separated operation file format.
///
/// ```text
/// classes: substitute insert delete transpose=2
/// ab<TAB>ba<TAB>1
/// ```
pub fn parse_operations(text: &str) -> Result<OperationSet, OpsError> {
    let mut classes = Vec::new();
    let mut ops = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let err = |message: String| OpsError::Parse { line: line_no, message };
        if raw.is_empty() {
            continue;
        }
        if idx == 0 {
            if let Some(rest) = raw.strip_prefix("classes:") {
                for item in rest.split_whitespace() {
                    let (name, weight) = match item.split_once('=') {
                        Some((n, w)) => {
                            let w: u32 = w.parse().map_err(|_| err(format!("bad class weight `{w}`")))?;
                            (n, w)
                        }
                        None => (item, 1),
                    };
                    let class = OpClass::from_name(name).ok_or_else(|| err(format!("unknown class `{name}`")))?;
                    if weight == 0 || weight > MAX_WEIGHT {
                        return Err(err(format!("class {name} has invalid weight {weight}")));
                    }
                    classes.push((class, weight));
                }
                continue;
            }
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 3 {
            return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        let weight: u32 = fields[2]
            .trim()
            .parse()
            .map_err(|_| err(format!("bad weight `{}`", fields[2])))?;
        let op = Operation {
            lhs: symbols(fields[0]),
            rhs: symbols(fields[1]),
            weight,
        };
        if op.lhs.len() == 1 && op.lhs == op.rhs {
            return Err(err("weight given for an identity operation".into()));
        }
        ops.push((line_no, op));
    }
    let mut set = OperationSet::new(&classes, &[]).map_err(|e| match e {
        OpsError::Invalid(message) => OpsError::Parse { line: 1, message },
        other => other,
    })?;
    for (line, op) in &ops {
        set.insert_explicit(op)
            .map_err(|message| OpsError::Parse { line: *line, message })?;
    }
    set.finish();
    Ok(set)
}
