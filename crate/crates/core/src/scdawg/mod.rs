//! Bidirectional substring index.
//!
//! A forward compact graph over `#W$` and a reverse one over `$W^rev#` have
//! isomorphic state sets. The bijection between them lets a cursor grow on
//! either side in constant time per symbol.

mod builder;
mod cdawg;
mod format;
mod lexicon;
pub mod oracle;

pub use builder::{CdawgBuilder, Orientation};
pub use cdawg::{Cdawg, Cursor, Edge};
pub use format::{deserialize, serialize, FormatError, FORMAT_VERSION, MAGIC};
pub use lexicon::{load_lexicon, Lexicon, LexiconError};

use builder::NONE;

use crate::symbol::{render, symbols, Symbol};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("string must start and end with its delimiters and contain no other sentinel")]
    SentinelMisuse,
    #[error("lexicon too large for 32-bit text positions")]
    TooLarge,
    #[error("index corrupted: {0}")]
    Corrupt(String),
}

/// Length ranges of the text around a substring, over all its occurrences
/// inside lexicon entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub min_pre: u32,
    pub max_pre: u32,
    pub min_suf: u32,
    pub max_suf: u32,
}

/// The two graphs, the state bijection and per-state context bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scdawg {
    forward: Cdawg,
    reverse: Cdawg,
    b_map: Vec<u32>,
    b_inv: Vec<u32>,
    /// Per forward state, in delimited coordinates (delimiters counted).
    bounds: Vec<[u32; 4]>,
    max_entry_len: u32,
}

/// Counters collected while building.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub resolve_calls: usize,
}

/// Builds both graphs word by word and resolves the bijection for every
/// state as soon as it appears.
pub struct ScdawgBuilder {
    forward: CdawgBuilder,
    reverse: CdawgBuilder,
    b_map: Vec<u32>,
    b_inv: Vec<u32>,
    stats: BuildStats,
    max_entry_len: u32,
}

impl Default for ScdawgBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ScdawgBuilder {
    pub fn new() -> ScdawgBuilder {
        ScdawgBuilder {
            forward: CdawgBuilder::new(Orientation::Forward),
            reverse: CdawgBuilder::new(Orientation::Reverse),
            b_map: vec![0],
            b_inv: vec![0],
            stats: BuildStats::default(),
            max_entry_len: 0,
        }
    }

    pub fn forward(&self) -> &CdawgBuilder {
        &self.forward
    }

    pub fn reverse(&self) -> &CdawgBuilder {
        &self.reverse
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    pub fn b_map(&self, q: u32) -> Option<u32> {
        self.b_map.get(q as usize).copied().filter(|&x| x != NONE)
    }

    pub fn add_entry(&mut self, word: &[Symbol]) -> Result<(), BuildError> {
        let mut fwd = Vec::with_capacity(word.len() + 2);
        fwd.push(Symbol::HASH);
        fwd.extend_from_slice(word);
        fwd.push(Symbol::DOLLAR);
        let mut rev = Vec::with_capacity(word.len() + 2);
        rev.push(Symbol::DOLLAR);
        rev.extend(word.iter().rev());
        rev.push(Symbol::HASH);
        let fresh = self.forward.add_string(&fwd)?;
        let fresh_rev = self.reverse.add_string(&rev)?;
        if self.forward.state_count() != self.reverse.state_count() {
            return Err(BuildError::Corrupt(format!(
                "forward has {} states, reverse has {}",
                self.forward.state_count(),
                self.reverse.state_count()
            )));
        }
        self.b_map.resize(self.forward.state_count(), NONE);
        self.b_inv.resize(self.forward.state_count(), NONE);
        for q in fresh {
            self.resolve_state(q)?;
        }
        if let Some(q) = fresh_rev.into_iter().find(|&q| self.b_inv[q as usize] == NONE) {
            return Err(BuildError::Corrupt(format!("reverse state {q} has no forward partner")));
        }
        self.max_entry_len = self.max_entry_len.max(word.len() as u32);
        Ok(())
    }

    /// Partner of forward state `q` in the reverse graph. The partner of `q`
    /// is reached from the partner of its suffix link by the symbol that
    /// precedes the link's canonical string inside `q`'s canonical string.
    pub fn resolve_state(&mut self, q: u32) -> Result<u32, BuildError> {
        if self.b_map[q as usize] != NONE {
            return Ok(self.b_map[q as usize]);
        }
        let mut stack = vec![q];
        while let Some(&x) = stack.last() {
            let link = self
                .forward
                .suffix_link(x)
                .ok_or_else(|| BuildError::Corrupt(format!("state {x} has no suffix link")))?;
            let partner = self.b_map[link as usize];
            if partner == NONE {
                stack.push(link);
                continue;
            }
            let end = self.forward.end_pos(x).unwrap();
            let sym = self.forward.text()[(end - self.forward.length(link)) as usize];
            let target = self
                .reverse
                .transition(partner, sym)
                .ok_or_else(|| BuildError::Corrupt(format!("reverse state {partner} lacks a {sym:?} transition")))?;
            self.stats.resolve_calls += 1;
            self.b_map[x as usize] = target;
            self.b_inv[target as usize] = x;
            stack.pop();
        }
        Ok(self.b_map[q as usize])
    }

    pub fn finish(self) -> Scdawg {
        let forward = self.forward.finish();
        let reverse = self.reverse.finish();
        let suf = suffix_ranges(&forward);
        let pre = suffix_ranges(&reverse);
        let bounds = (0..forward.state_count())
            .map(|q| {
                let p = pre[self.b_map[q] as usize];
                let s = suf[q];
                [p.0, p.1, s.0, s.1]
            })
            .collect();
        Scdawg {
            forward,
            reverse,
            b_map: self.b_map,
            b_inv: self.b_inv,
            bounds,
            max_entry_len: self.max_entry_len,
        }
    }
}

/// Min and max number of symbols following the canonical string of each
/// state up to the end of its delimited string.
fn suffix_ranges(g: &Cdawg) -> Vec<(u32, u32)> {
    let n = g.state_count();
    let max_len = (0..n as u32).map(|q| g.length(q)).max().unwrap_or(0) as usize;
    let mut buckets = vec![0u32; max_len + 2];
    for q in 0..n as u32 {
        buckets[g.length(q) as usize + 1] += 1;
    }
    for i in 1..buckets.len() {
        buckets[i] += buckets[i - 1];
    }
    let mut order = vec![0u32; n];
    for q in 0..n as u32 {
        let slot = &mut buckets[g.length(q) as usize];
        order[*slot as usize] = q;
        *slot += 1;
    }
    let mut out = vec![(0u32, 0u32); n];
    // edges always lead to strictly longer canonical strings
    for &q in order.iter().rev() {
        let edges = g.edges(q);
        if edges.is_empty() {
            continue;
        }
        let mut lo = u32::MAX;
        let mut hi = 0;
        for e in edges {
            let (tl, th) = out[e.target as usize];
            lo = lo.min(e.len + tl);
            hi = hi.max(e.len + th);
        }
        out[q as usize] = (lo, hi);
    }
    out
}

impl Scdawg {
    pub fn build(lexicon: &Lexicon) -> Result<Scdawg, BuildError> {
        Ok(Self::build_with_stats(lexicon)?.0)
    }

    pub fn build_with_stats(lexicon: &Lexicon) -> Result<(Scdawg, BuildStats), BuildError> {
        let mut b = ScdawgBuilder::new();
        for e in lexicon.entries() {
            b.add_entry(&symbols(e))?;
        }
        let stats = b.stats();
        Ok((b.finish(), stats))
    }

    pub(crate) fn from_parts(
        forward: Cdawg,
        reverse: Cdawg,
        b_map: Vec<u32>,
        bounds: Vec<[u32; 4]>,
    ) -> Result<Scdawg, String> {
        let n = forward.state_count();
        if reverse.state_count() != n || b_map.len() != n || bounds.len() != n {
            return Err("state arrays disagree in length".into());
        }
        let mut b_inv = vec![NONE; n];
        for (q, &p) in b_map.iter().enumerate() {
            if p as usize >= n || b_inv[p as usize] != NONE {
                return Err("state map is not a bijection".into());
            }
            b_inv[p as usize] = q as u32;
        }
        if b_map.first() != Some(&0) {
            return Err("root must map to root".into());
        }
        let max_entry_len = forward.blocks().iter().map(|&(b, e)| e - b - 1).max().unwrap_or(0);
        Ok(Scdawg {
            forward,
            reverse,
            b_map,
            b_inv,
            bounds,
            max_entry_len,
        })
    }

    pub(crate) fn raw_bounds(&self) -> &[[u32; 4]] {
        &self.bounds
    }

    pub fn forward(&self) -> &Cdawg {
        &self.forward
    }

    pub fn reverse(&self) -> &Cdawg {
        &self.reverse
    }

    pub fn state_count(&self) -> usize {
        self.forward.state_count()
    }

    pub fn b_map(&self, q: u32) -> u32 {
        self.b_map[q as usize]
    }

    pub fn b_inv(&self, q: u32) -> u32 {
        self.b_inv[q as usize]
    }

    pub fn entry_count(&self) -> usize {
        self.forward.blocks().len()
    }

    pub fn max_entry_len(&self) -> u32 {
        self.max_entry_len
    }

    /// Indexed entries in insertion order.
    pub fn entries(&self) -> impl Iterator<Item = String> + '_ {
        let text = self.forward.text();
        self.forward
            .blocks()
            .iter()
            .map(move |&(b, e)| render(&text[b as usize + 1..e as usize], false))
    }

    pub fn root_cursor(&self) -> Cursor {
        self.forward.root_cursor()
    }

    pub fn extend_right(&self, c: Cursor, sym: Symbol) -> Option<Cursor> {
        self.forward.step(c, sym)
    }

    /// The same substring as seen from the reverse graph (reversed).
    #[inline]
    pub fn to_reverse(&self, c: Cursor) -> Cursor {
        mirror(&self.forward, &self.reverse, &self.b_map, c)
    }

    #[inline]
    pub fn from_reverse(&self, c: Cursor) -> Cursor {
        mirror(&self.reverse, &self.forward, &self.b_inv, c)
    }

    pub fn extend_left(&self, c: Cursor, sym: Symbol) -> Option<Cursor> {
        let r = self.reverse.step(self.to_reverse(c), sym)?;
        Some(self.from_reverse(r))
    }

    pub fn locate(&self, s: &[Symbol]) -> Option<Cursor> {
        self.forward.locate(s)
    }

    /// Whether the cursor spells a whole entry.
    pub fn is_entry(&self, c: Cursor) -> bool {
        self.extend_left(c, Symbol::HASH)
            .and_then(|h| self.extend_right(h, Symbol::DOLLAR))
            .is_some()
    }

    pub fn cursor_symbols(&self, c: Cursor) -> &[Symbol] {
        self.forward.cursor_symbols(c)
    }

    pub fn cursor_string(&self, c: Cursor) -> String {
        render(self.cursor_symbols(c), false)
    }

    /// Like [`Scdawg::cursor_string`] but shows delimiters as `#` and `$`.
    pub fn cursor_string_marked(&self, c: Cursor) -> String {
        render(self.cursor_symbols(c), true)
    }

    /// Ranges of the entry text before and after the cursor's substring,
    /// over all its occurrences. Meaningful for delimiter-free cursors.
    pub fn boundary_bounds(&self, c: Cursor) -> Bounds {
        if c.len == 0 {
            let m = self.max_entry_len;
            return Bounds {
                min_pre: 0,
                max_pre: m,
                min_suf: 0,
                max_suf: m,
            };
        }
        let [a, b, x, y] = self.bounds[c.state as usize];
        let (before, after) = self.forward.margins(c);
        Bounds {
            min_pre: (a + before).saturating_sub(1),
            max_pre: (b + before).saturating_sub(1),
            min_suf: (x + after).saturating_sub(1),
            max_suf: (y + after).saturating_sub(1),
        }
    }
}

fn mirror(src: &Cdawg, dst: &Cdawg, map: &[u32], c: Cursor) -> Cursor {
    if c.len == 0 {
        return dst.root_cursor();
    }
    let (_, after) = src.margins(c);
    let state = map[c.state as usize];
    Cursor {
        state,
        pos: dst.start_pos(state) + after,
        len: c.len,
    }
}
