use std::fmt;

use crate::error::{Error, Result};

/// A finite word over the alphabet `{0, .., q-1}`.
///
/// Symbols are stored one byte each, so `q` is limited to 256.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seq {
    q: u16,
    symbols: Vec<u8>,
}

pub const MAX_Q: u16 = 256;

pub(crate) fn check_q(q: u16) -> Result<()> {
    if (2..=MAX_Q).contains(&q) {
        Ok(())
    } else {
        Err(Error::param(format!("alphabet size q={q} must be in 2..=256")))
    }
}

impl Seq {
    pub fn new(q: u16, symbols: Vec<u8>) -> Result<Self> {
        check_q(q)?;
        if let Some((position, &s)) = symbols.iter().enumerate().find(|(_, &s)| u16::from(s) >= q) {
            return Err(Error::InvalidSymbol {
                symbol: u32::from(s),
                position,
                q,
            });
        }
        Ok(Seq { q, symbols })
    }

    /// Builds a word without range checks. Callers guarantee every symbol is `< q`.
    pub(crate) fn from_raw(q: u16, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| u16::from(s) < q));
        Seq { q, symbols }
    }

    pub fn binary(bits: &[u8]) -> Result<Self> {
        Seq::new(2, bits.to_vec())
    }

    pub fn zeros(q: u16, len: usize) -> Result<Self> {
        Seq::new(q, vec![0; len])
    }

    /// Parses the textual form: a digit string when `q <= 10`, otherwise
    /// comma-separated decimal symbols. Surrounding whitespace is ignored.
    pub fn parse(text: &str, q: u16) -> Result<Self> {
        Self::parse_at(text, q, 1)
    }

    pub(crate) fn parse_at(text: &str, q: u16, line: usize) -> Result<Self> {
        check_q(q)?;
        let lead = text.len() - text.trim_start().len();
        let body = text.trim();
        let mut symbols = Vec::with_capacity(body.len());
        if q <= 10 {
            for (i, ch) in body.char_indices() {
                let column = lead + i + 1;
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::parse(line, column, format!("unexpected character {ch:?}")))?;
                if d >= u32::from(q) {
                    return Err(Error::parse(
                        line,
                        column,
                        format!("symbol {d} out of range for q={q}"),
                    ));
                }
                symbols.push(d as u8);
            }
        } else if !body.is_empty() {
            let mut offset = 0;
            for field in body.split(',') {
                let column = lead + offset + 1;
                offset += field.len() + 1;
                let v: u32 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line, column, format!("invalid symbol {:?}", field.trim())))?;
                if v >= u32::from(q) {
                    return Err(Error::parse(
                        line,
                        column,
                        format!("symbol {v} out of range for q={q}"),
                    ));
                }
                symbols.push(v as u8);
            }
        }
        Ok(Seq { q, symbols })
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.symbols.last().copied()
    }

    /// Copy of `self[start..end]` (0-based, half open).
    pub fn slice(&self, start: usize, end: usize) -> Seq {
        Seq::from_raw(self.q, self.symbols[start..end].to_vec())
    }

    pub fn concat(parts: &[Seq]) -> Result<Seq> {
        let q = parts.first().map_or(2, |s| s.q);
        let mut symbols = Vec::with_capacity(parts.iter().map(Seq::len).sum());
        for p in parts {
            if p.q != q {
                return Err(Error::AlphabetMismatch {
                    expected: q,
                    found: p.q,
                });
            }
            symbols.extend_from_slice(&p.symbols);
        }
        Ok(Seq { q, symbols })
    }

    /// Hamming weight (number of non-zero symbols).
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    /// Sum of the symbols modulo `q`.
    pub fn mod_sum(&self) -> u32 {
        mod_sum(&self.symbols, self.q)
    }
}

pub(crate) fn mod_sum(symbols: &[u8], q: u16) -> u32 {
    let total: u64 = symbols.iter().map(|&s| u64::from(s)).sum();
    (total % u64::from(q)) as u32
}

/// Writes the textual form of a raw symbol slice.
pub(crate) fn write_symbols(f: &mut impl fmt::Write, symbols: &[u8], q: u16) -> fmt::Result {
    if q <= 10 {
        for &s in symbols {
            f.write_char(char::from(b'0' + s))?;
        }
    } else {
        for (i, s) in symbols.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write!(f, "{s}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.symbols, self.q)
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq[q={}](", self.q)?;
        write_symbols(f, &self.symbols, self.q)?;
        write!(f, ")")
    }
}
