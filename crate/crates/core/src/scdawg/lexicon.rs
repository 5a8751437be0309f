use std::collections::{BTreeSet, HashSet};

use crate::symbol::{symbols, Symbol};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("lexicon is empty")]
    Empty,
    #[error("lexicon is not valid UTF-8 (byte {0})")]
    InvalidUtf8(usize),
    #[error("line {0} is empty")]
    EmptyLine(usize),
}

/// The indexed word list, in input order and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<String>,
}

impl Lexicon {
    /// Builds a lexicon, dropping repeated entries. Returns the lexicon and
    /// the number of dropped duplicates.
    pub fn from_entries<I, S>(entries: I) -> Result<(Lexicon, usize), LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut dropped = 0;
        for (idx, e) in entries.into_iter().enumerate() {
            let e: String = e.into();
            if e.is_empty() {
                return Err(LexiconError::EmptyLine(idx + 1));
            }
            if seen.insert(e.clone()) {
                out.push(e);
            } else {
                dropped += 1;
            }
        }
        if out.is_empty() {
            return Err(LexiconError::Empty);
        }
        Ok((Lexicon { entries: out }, dropped))
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of entry lengths in symbols.
    pub fn total_size(&self) -> usize {
        self.entries.iter().map(|e| e.chars().count()).sum()
    }

    pub fn max_len(&self) -> usize {
        self.entries.iter().map(|e| e.chars().count()).max().unwrap_or(0)
    }

    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.entries.iter().flat_map(|e| symbols(e)).collect()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.iter().any(|e| e == word)
    }

    /// One entry per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(e);
            out.push('\n');
        }
        out
    }
}

/// Parses a newline-separated word list. A final newline is optional.
pub fn load_lexicon(bytes: &[u8]) -> Result<(Lexicon, usize), LexiconError> {
    let text = std::str::from_utf8(bytes).map_err(|e| LexiconError::InvalidUtf8(e.valid_up_to()))?;
    if text.is_empty() {
        return Err(LexiconError::Empty);
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    Lexicon::from_entries(body.split('\n'))
}
