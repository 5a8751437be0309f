use super::builder::NONE;
use crate::symbol::Symbol;

/// A compact edge. Its label is `text[start .. start + len]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub sym: Symbol,
    pub start: u32,
    pub len: u32,
    pub target: u32,
}

/// One substring of the indexed text: the `len` symbols starting at `pos`,
/// placed inside the stored occurrence of the canonical string of `state`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cursor {
    pub state: u32,
    pub pos: u32,
    pub len: u32,
}

/// Frozen compact word graph over a set of delimited strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdawg {
    text: Vec<Symbol>,
    blocks: Vec<(u32, u32)>,
    end_pos: Vec<u32>,
    length: Vec<u32>,
    suffix_link: Vec<u32>,
    offsets: Vec<u32>,
    edges: Vec<Edge>,
}

impl Cdawg {
    pub(crate) fn from_parts(
        text: Vec<Symbol>,
        blocks: Vec<(u32, u32)>,
        end_pos: Vec<u32>,
        length: Vec<u32>,
        suffix_link: Vec<u32>,
        offsets: Vec<u32>,
        edges: Vec<Edge>,
    ) -> Cdawg {
        Cdawg {
            text,
            blocks,
            end_pos,
            length,
            suffix_link,
            offsets,
            edges,
        }
    }

    pub const ROOT: u32 = 0;

    pub fn state_count(&self) -> usize {
        self.length.len()
    }

    pub fn transition_count(&self) -> usize {
        self.edges.len()
    }

    pub fn text(&self) -> &[Symbol] {
        &self.text
    }

    /// Inclusive `[begin, end]` text interval of every added string.
    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    pub fn length(&self, q: u32) -> u32 {
        self.length[q as usize]
    }

    /// `None` for the root, whose canonical string is empty.
    pub fn end_pos(&self, q: u32) -> Option<u32> {
        let e = self.end_pos[q as usize];
        (e != NONE).then_some(e)
    }

    /// One past the stored canonical occurrence; 0 for the root.
    #[inline]
    pub(crate) fn end_excl(&self, q: u32) -> u32 {
        let e = self.end_pos[q as usize];
        if e == NONE {
            0
        } else {
            e + 1
        }
    }

    /// Text index where the stored canonical occurrence starts.
    #[inline]
    pub fn start_pos(&self, q: u32) -> u32 {
        self.end_excl(q) - self.length[q as usize]
    }

    pub fn suffix_link(&self, q: u32) -> Option<u32> {
        let l = self.suffix_link[q as usize];
        (l != NONE).then_some(l)
    }

    pub fn is_sink(&self, q: u32) -> bool {
        self.edges(q).is_empty()
    }

    pub fn canonical(&self, q: u32) -> &[Symbol] {
        let s = self.start_pos(q) as usize;
        &self.text[s..s + self.length[q as usize] as usize]
    }

    pub fn edges(&self, q: u32) -> &[Edge] {
        &self.edges[self.offsets[q as usize] as usize..self.offsets[q as usize + 1] as usize]
    }

    pub fn label(&self, e: &Edge) -> &[Symbol] {
        &self.text[e.start as usize..(e.start + e.len) as usize]
    }

    #[inline]
    pub fn find_edge(&self, q: u32, sym: Symbol) -> Option<&Edge> {
        let edges = self.edges(q);
        edges.binary_search_by_key(&sym, |e| e.sym).ok().map(|i| &edges[i])
    }

    pub fn root_cursor(&self) -> Cursor {
        Cursor {
            state: Self::ROOT,
            pos: 0,
            len: 0,
        }
    }

    /// Cursor for the substring one symbol longer on the right.
    #[inline]
    pub fn step(&self, c: Cursor, sym: Symbol) -> Option<Cursor> {
        let next = c.pos + c.len;
        if next < self.end_excl(c.state) {
            return (self.text[next as usize] == sym).then_some(Cursor { len: c.len + 1, ..c });
        }
        let e = self.find_edge(c.state, sym)?;
        Some(Cursor {
            state: e.target,
            pos: e.start - c.len,
            len: c.len + 1,
        })
    }

    /// Calls `f` with every one-symbol right extension of `c`.
    #[inline]
    pub fn for_each_step(&self, c: Cursor, mut f: impl FnMut(Symbol, Cursor)) {
        let next = c.pos + c.len;
        if next < self.end_excl(c.state) {
            f(self.text[next as usize], Cursor { len: c.len + 1, ..c });
            return;
        }
        for e in self.edges(c.state) {
            f(
                e.sym,
                Cursor {
                    state: e.target,
                    pos: e.start - c.len,
                    len: c.len + 1,
                },
            );
        }
    }

    pub fn locate(&self, s: &[Symbol]) -> Option<Cursor> {
        s.iter().try_fold(self.root_cursor(), |c, &sym| self.step(c, sym))
    }

    pub fn cursor_symbols(&self, c: Cursor) -> &[Symbol] {
        &self.text[c.pos as usize..(c.pos + c.len) as usize]
    }

    /// Symbols of the canonical occurrence before and after the cursor.
    #[inline]
    pub(crate) fn margins(&self, c: Cursor) -> (u32, u32) {
        if c.len == 0 {
            return (0, 0);
        }
        let before = c.pos - self.start_pos(c.state);
        let after = self.end_excl(c.state) - (c.pos + c.len);
        (before, after)
    }

    #[allow(clippy::type_complexity)]
    pub(crate) fn raw_parts(&self) -> (&[u32], &[u32], &[u32], &[u32], &[Edge]) {
        (
            &self.end_pos,
            &self.length,
            &self.suffix_link,
            &self.offsets,
            &self.edges,
        )
    }
}
