//! Binary index file.
//!
//! Layout (integers little-endian): magic, `u32` version, symbol table,
//! then for each graph (forward first) its text, block table, per-state
//! arrays and edges, then the state map, the context bounds and a CRC-32 of
//! everything before it.

use super::builder::NONE;
use super::cdawg::{Cdawg, Edge};
use super::Scdawg;
use crate::symbol::Symbol;

pub const MAGIC: &[u8; 4] = b"SCDG";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("file truncated")]
    Truncated,
    #[error("checksum mismatch")]
    Checksum,
    #[error("malformed index: {0}")]
    Malformed(String),
}

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn state(&mut self, v: u32) {
        self.u64(if v == NONE { u64::MAX } else { v as u64 });
    }
}

pub fn serialize(index: &Scdawg) -> Vec<u8> {
    let mut table: Vec<Symbol> = index
        .forward()
        .text()
        .iter()
        .copied()
        .filter(|s| !s.is_sentinel())
        .collect();
    table.sort_unstable();
    table.dedup();
    let id = |s: Symbol| -> u32 {
        if s.is_sentinel() {
            s.code()
        } else {
            table.binary_search(&s).unwrap() as u32 + 2
        }
    };
    let mut w = Writer { buf: Vec::new() };
    w.buf.extend_from_slice(MAGIC);
    w.u32(FORMAT_VERSION);
    w.u32(table.len() as u32);
    for s in &table {
        w.u32(s.to_char().unwrap() as u32);
    }
    for g in [index.forward(), index.reverse()] {
        w.u64(g.text().len() as u64);
        for &s in g.text() {
            w.u32(id(s));
        }
        w.u64(g.blocks().len() as u64);
        for &(b, e) in g.blocks() {
            w.u64(b as u64);
            w.u64(e as u64);
        }
        let (end_pos, length, link, _, edges) = g.raw_parts();
        w.u64(end_pos.len() as u64);
        for &x in end_pos {
            w.state(x);
        }
        for &x in length {
            w.u64(x as u64);
        }
        for &x in link {
            w.state(x);
        }
        w.u64(edges.len() as u64);
        for q in 0..g.state_count() as u32 {
            for e in g.edges(q) {
                w.u64(q as u64);
                w.u32(id(e.sym));
                w.u64(e.start as u64);
                w.u64(e.len as u64);
                w.u64(e.target as u64);
            }
        }
    }
    for q in 0..index.state_count() as u32 {
        w.u64(index.b_map(q) as u64);
    }
    for b in index.raw_bounds() {
        for &x in b {
            w.u64(x as u64);
        }
    }
    let crc = crc32fast::hash(&w.buf);
    w.u32(crc);
    w.buf
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], FormatError> {
        let end = self.at.checked_add(n).ok_or(FormatError::Truncated)?;
        let s = self.buf.get(self.at..end).ok_or(FormatError::Truncated)?;
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// A 32-bit quantity stored in 64 bits.
    fn narrow(&mut self) -> Result<u32, FormatError> {
        let v = self.u64()?;
        u32::try_from(v)
            .ok()
            .filter(|&x| x != NONE)
            .ok_or_else(|| bad(format!("value {v} out of range")))
    }

    fn state(&mut self) -> Result<u32, FormatError> {
        match self.u64()? {
            u64::MAX => Ok(NONE),
            v => u32::try_from(v)
                .ok()
                .filter(|&x| x != NONE)
                .ok_or_else(|| bad(format!("value {v} out of range"))),
        }
    }

    /// Element count, checked against the bytes left so a corrupt count
    /// cannot trigger a huge allocation.
    fn count(&mut self, elem: usize) -> Result<usize, FormatError> {
        let n = self.narrow()? as usize;
        if n.saturating_mul(elem) > self.buf.len() - self.at {
            return Err(FormatError::Truncated);
        }
        Ok(n)
    }
}

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::Malformed(msg.into())
}

fn read_graph(r: &mut Reader, table: &[Symbol]) -> Result<Cdawg, FormatError> {
    let sym = |id: u32| -> Result<Symbol, FormatError> {
        match id {
            0 => Ok(Symbol::HASH),
            1 => Ok(Symbol::DOLLAR),
            _ => table
                .get(id as usize - 2)
                .copied()
                .ok_or_else(|| bad(format!("unknown symbol id {id}"))),
        }
    };
    let n = r.count(4)?;
    let text = (0..n).map(|_| sym(r.u32()?)).collect::<Result<Vec<_>, _>>()?;
    let nb = r.count(16)?;
    let mut blocks = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (b, e) = (r.narrow()?, r.narrow()?);
        if b >= e || e as usize >= text.len() {
            return Err(bad("block out of range"));
        }
        blocks.push((b, e));
    }
    let states = r.count(24)?;
    if states == 0 {
        return Err(bad("no states"));
    }
    let end_pos = (0..states).map(|_| r.state()).collect::<Result<Vec<_>, _>>()?;
    let length = (0..states).map(|_| r.narrow()).collect::<Result<Vec<_>, _>>()?;
    let link = (0..states).map(|_| r.state()).collect::<Result<Vec<_>, _>>()?;
    for q in 0..states {
        let ok = if q == 0 {
            end_pos[0] == NONE && length[0] == 0 && link[0] == NONE
        } else {
            end_pos[q] != NONE
                && (end_pos[q] as usize) < text.len()
                && length[q] >= 1
                && length[q] <= end_pos[q] + 1
                && (link[q] as usize) < states
                && length[link[q] as usize] < length[q]
        };
        if !ok {
            return Err(bad(format!("state {q} is inconsistent")));
        }
    }
    let ne = r.count(36)?;
    let mut offsets = vec![0u32; states + 1];
    let mut edges = Vec::with_capacity(ne);
    let mut prev: Option<(u32, Symbol)> = None;
    for _ in 0..ne {
        let q = r.narrow()?;
        let e = Edge {
            sym: sym(r.u32()?)?,
            start: r.narrow()?,
            len: r.narrow()?,
            target: r.narrow()?,
        };
        let in_range = (q as usize) < states
            && (e.target as usize) < states
            && e.len >= 1
            && (e.start as usize + e.len as usize) <= text.len()
            && text[e.start as usize] == e.sym
            && length[e.target as usize] >= length[q as usize] + e.len
            && end_pos[e.target as usize] + 1 == e.start + e.len
            && prev.is_none_or(|p| p < (q, e.sym));
        if !in_range {
            return Err(bad("edge out of range or out of order"));
        }
        prev = Some((q, e.sym));
        offsets[q as usize + 1] += 1;
        edges.push(e);
    }
    for q in 0..states {
        offsets[q + 1] += offsets[q];
    }
    Ok(Cdawg::from_parts(text, blocks, end_pos, length, link, offsets, edges))
}

pub fn deserialize(bytes: &[u8]) -> Result<Scdawg, FormatError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    if bytes.len() < 12 {
        return Err(FormatError::Truncated);
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(FormatError::Version(version));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    if crc32fast::hash(body) != u32::from_le_bytes(tail.try_into().unwrap()) {
        return Err(FormatError::Checksum);
    }
    let mut r = Reader { buf: body, at: 8 };
    let nsym = r.u32()? as usize;
    if nsym.saturating_mul(4) > body.len() {
        return Err(FormatError::Truncated);
    }
    let mut table = Vec::with_capacity(nsym);
    for _ in 0..nsym {
        let c = char::from_u32(r.u32()?).ok_or_else(|| bad("symbol is not a scalar value"))?;
        table.push(Symbol::from_char(c));
    }
    if table.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("symbol table not sorted"));
    }
    let forward = read_graph(&mut r, &table)?;
    let reverse = read_graph(&mut r, &table)?;
    let n = forward.state_count();
    let b_map = (0..n).map(|_| r.narrow()).collect::<Result<Vec<_>, _>>()?;
    let mut bounds = Vec::with_capacity(n);
    for _ in 0..n {
        bounds.push([r.narrow()?, r.narrow()?, r.narrow()?, r.narrow()?]);
    }
    if r.at != body.len() {
        return Err(bad("trailing bytes"));
    }
    Scdawg::from_parts(forward, reverse, b_map, bounds).map_err(FormatError::Malformed)
}
