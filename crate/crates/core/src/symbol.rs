use std::fmt;

/// One symbol of the indexed alphabet.
///
/// Unicode scalars are stored shifted by two so that the two sentinels sort
/// first and keep ids 0 and 1 in every serialized symbol table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

impl Symbol {
    /// Begin-of-entry marker.
    pub const HASH: Symbol = Symbol(0);
    /// End-of-entry marker.
    pub const DOLLAR: Symbol = Symbol(1);

    pub const fn from_char(c: char) -> Symbol {
        Symbol(c as u32 + 2)
    }

    /// Returns the character, or `None` for a sentinel.
    pub fn to_char(self) -> Option<char> {
        if self.0 < 2 {
            None
        } else {
            char::from_u32(self.0 - 2)
        }
    }

    pub fn is_sentinel(self) -> bool {
        self.0 < 2
    }

    /// Internal code; sentinels are 0 and 1.
    pub fn code(self) -> u32 {
        self.0
    }

    /// Inverse of [`Symbol::code`]; rejects codes that map to no scalar.
    pub fn from_code(code: u32) -> Option<Symbol> {
        if code < 2 || char::from_u32(code.wrapping_sub(2)).is_some() {
            Some(Symbol(code))
        } else {
            None
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::HASH => f.write_str("#"),
            Symbol::DOLLAR => f.write_str("$"),
            s => write!(f, "{:?}", s.to_char().unwrap_or('\u{fffd}')),
        }
    }
}

impl From<char> for Symbol {
    fn from(c: char) -> Symbol {
        Symbol::from_char(c)
    }
}

pub fn symbols(s: &str) -> Vec<Symbol> {
    s.chars().map(Symbol::from_char).collect()
}

/// Renders symbols as text. Sentinels are dropped unless `sentinels` is set,
/// in which case they appear as `#` and `$`.
pub fn render(syms: &[Symbol], sentinels: bool) -> String {
    let mut out = String::with_capacity(syms.len());
    for &s in syms {
        match s {
            Symbol::HASH if sentinels => out.push('#'),
            Symbol::DOLLAR if sentinels => out.push('$'),
            s => {
                if let Some(c) = s.to_char() {
                    out.push(c);
                }
            }
        }
    }
    out
}
