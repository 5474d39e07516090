//! Segmented edit channel: applying, enumerating and sampling edit patterns.
//!
//! Patterns are indexed on the channel input. Segment positions are 1-based
//! for deletions; an insertion position `p` in `0..=b` places the new symbol
//! after the first `p` symbols of the segment.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::ChannelKind;
use crate::error::{Error, Result};
use crate::seq::Seq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentEdit {
    None,
    Delete { pos: usize },
    Insert { pos: usize, symbol: u8 },
}

impl SegmentEdit {
    /// Net change in length caused by this edit.
    pub fn delta(self) -> isize {
        match self {
            SegmentEdit::None => 0,
            SegmentEdit::Delete { .. } => -1,
            SegmentEdit::Insert { .. } => 1,
        }
    }
}

/// One optional edit per segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EditPattern {
    edits: Vec<SegmentEdit>,
}

impl EditPattern {
    pub fn new(edits: Vec<SegmentEdit>) -> Self {
        EditPattern { edits }
    }

    pub fn identity(k: usize) -> Self {
        EditPattern {
            edits: vec![SegmentEdit::None; k],
        }
    }

    pub fn edits(&self) -> &[SegmentEdit] {
        &self.edits
    }

    pub fn k(&self) -> usize {
        self.edits.len()
    }

    pub fn delta(&self) -> isize {
        self.edits.iter().map(|e| e.delta()).sum()
    }

    /// Checks positions and symbols against a segment length and alphabet.
    pub fn validate(&self, b: usize, q: u16) -> Result<()> {
        for (i, e) in self.edits.iter().enumerate() {
            match *e {
                SegmentEdit::None => {}
                SegmentEdit::Delete { pos } if (1..=b).contains(&pos) => {}
                SegmentEdit::Insert { pos, symbol } if pos <= b && u16::from(symbol) < q => {}
                _ => {
                    return Err(Error::param(format!(
                        "segment {} edit {e:?} is invalid for b={b}, q={q}",
                        i + 1
                    )))
                }
            }
        }
        Ok(())
    }

    /// Whether every edit is allowed on `kind`'s channel.
    pub fn allowed_on(&self, kind: ChannelKind) -> bool {
        self.edits.iter().all(|e| {
            matches!(
                (kind, e),
                (_, SegmentEdit::None)
                    | (
                        ChannelKind::Deletion | ChannelKind::InsDel,
                        SegmentEdit::Delete { .. }
                    )
                    | (
                        ChannelKind::Insertion | ChannelKind::InsDel,
                        SegmentEdit::Insert { .. }
                    )
            )
        })
    }

    /// Parses `seg<i>:none | seg<i>:del@<pos> | seg<i>:ins@<pos>=<sym>`, `;`-separated.
    /// Segments not mentioned are left unedited; `k` fixes the pattern length.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let mut edits = vec![SegmentEdit::None; k];
        let mut seen = vec![false; k];
        let mut offset = 0;
        for field in text.split(';') {
            let column = offset + 1 + (field.len() - field.trim_start().len());
            offset += field.len() + 1;
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::parse(1, column, msg);
            let (seg, op) = field
                .split_once(':')
                .ok_or_else(|| bad(format!("expected seg<i>:<edit>, found {field:?}")))?;
            let i: usize = seg
                .strip_prefix("seg")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| bad(format!("invalid segment label {seg:?}")))?;
            if i == 0 || i > k {
                return Err(bad(format!("segment {i} is outside 1..={k}")));
            }
            if seen[i - 1] {
                return Err(bad(format!("segment {i} is edited twice")));
            }
            seen[i - 1] = true;
            edits[i - 1] = if op == "none" {
                SegmentEdit::None
            } else if let Some(pos) = op.strip_prefix("del@") {
                SegmentEdit::Delete {
                    pos: pos
                        .parse()
                        .map_err(|_| bad(format!("invalid position {pos:?}")))?,
                }
            } else if let Some(rest) = op.strip_prefix("ins@") {
                let (pos, sym) = rest
                    .split_once('=')
                    .ok_or_else(|| bad(format!("insertion needs =<symbol>, found {rest:?}")))?;
                SegmentEdit::Insert {
                    pos: pos
                        .parse()
                        .map_err(|_| bad(format!("invalid position {pos:?}")))?,
                    symbol: sym.parse().map_err(|_| bad(format!("invalid symbol {sym:?}")))?,
                }
            } else {
                return Err(bad(format!("unknown edit {op:?}")));
            };
        }
        Ok(EditPattern { edits })
    }
}

impl fmt::Display for EditPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.edits.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            match e {
                SegmentEdit::None => write!(f, "seg{}:none", i + 1)?,
                SegmentEdit::Delete { pos } => write!(f, "seg{}:del@{pos}", i + 1)?,
                SegmentEdit::Insert { pos, symbol } => write!(f, "seg{}:ins@{pos}={symbol}", i + 1)?,
            }
        }
        Ok(())
    }
}

/// Applies `pattern` to `x`, segment by segment.
pub fn apply(x: &Seq, pattern: &EditPattern, b: usize) -> Result<Seq> {
    let k = pattern.k();
    if b == 0 || x.len() != k * b {
        return Err(Error::LengthMismatch {
            expected: k * b,
            found: x.len(),
        });
    }
    pattern.validate(b, x.q())?;
    let mut out = Vec::with_capacity(x.len() + k);
    for (seg, e) in x.symbols().chunks(b).zip(pattern.edits()) {
        match *e {
            SegmentEdit::None => out.extend_from_slice(seg),
            SegmentEdit::Delete { pos } => {
                out.extend_from_slice(&seg[..pos - 1]);
                out.extend_from_slice(&seg[pos..]);
            }
            SegmentEdit::Insert { pos, symbol } => {
                out.extend_from_slice(&seg[..pos]);
                out.push(symbol);
                out.extend_from_slice(&seg[pos..]);
            }
        }
    }
    Seq::new(x.q(), out)
}

/// Number of per-segment options on `kind`'s channel.
pub fn options_per_segment(kind: ChannelKind, q: u16, b: usize) -> usize {
    let inserts = (b + 1) * q as usize;
    match kind {
        ChannelKind::Deletion => 1 + b,
        ChannelKind::Insertion => 1 + inserts,
        ChannelKind::InsDel => 1 + b + inserts,
    }
}

/// The `index`-th per-segment option: none, then deletions by position,
/// then insertions by position and symbol.
pub fn segment_option(kind: ChannelKind, q: u16, b: usize, index: usize) -> SegmentEdit {
    if index == 0 {
        return SegmentEdit::None;
    }
    let mut i = index - 1;
    if kind != ChannelKind::Insertion {
        if i < b {
            return SegmentEdit::Delete { pos: i + 1 };
        }
        i -= b;
    }
    let q = q as usize;
    SegmentEdit::Insert {
        pos: i / q,
        symbol: (i % q) as u8,
    }
}

/// Every valid pattern of `kind` for `k` segments of length `b`, in
/// mixed-radix order with segment 1 as the most significant digit.
#[derive(Debug, Clone)]
pub struct PatternSpace {
    kind: ChannelKind,
    q: u16,
    b: usize,
    k: usize,
    radix: usize,
    total: u128,
}

impl PatternSpace {
    pub fn new(kind: ChannelKind, q: u16, b: usize, k: usize) -> Self {
        let radix = options_per_segment(kind, q, b);
        let total = (radix as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        PatternSpace {
            kind,
            q,
            b,
            k,
            radix,
            total,
        }
    }

    pub fn len(&self) -> u128 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn get(&self, mut index: u128) -> EditPattern {
        let mut edits = vec![SegmentEdit::None; self.k];
        for slot in edits.iter_mut().rev() {
            let digit = (index % self.radix as u128) as usize;
            index /= self.radix as u128;
            *slot = segment_option(self.kind, self.q, self.b, digit);
        }
        EditPattern { edits }
    }

    pub fn iter(&self) -> impl Iterator<Item = EditPattern> + '_ {
        (0..self.total).map(move |i| self.get(i))
    }
}

/// All patterns, refusing to produce more than `cap`.
pub fn enumerate_patterns(kind: ChannelKind, q: u16, b: usize, k: usize, cap: u128) -> Result<PatternSpace> {
    let space = PatternSpace::new(kind, q, b, k);
    if space.len() > cap {
        return Err(Error::Budget {
            what: "edit pattern enumeration",
            needed: space.len(),
            budget: cap,
        });
    }
    Ok(space)
}

/// Version tag of the pattern sampler. Bump when the stream changes.
pub const SAMPLER_VERSION: u32 = 1;

/// SplitMix64 finaliser.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a parent seed and a child index.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(u64::from(SAMPLER_VERSION) << 56)))
}

/// Samples one pattern. Segment `i` (0-based) draws from a ChaCha8 stream
/// seeded with `split_seed(seed, i)`: first a Bernoulli(`p_edit`) draw, then
/// for insertion-deletion channels a fair coin (deletion on heads), then a
/// uniform position and, for insertions, a uniform symbol.
pub fn sample_pattern(
    kind: ChannelKind,
    q: u16,
    b: usize,
    k: usize,
    p_edit: f64,
    seed: u64,
) -> Result<EditPattern> {
    if !(0.0..=1.0).contains(&p_edit) {
        return Err(Error::param(format!("p_edit={p_edit} must be in [0, 1]")));
    }
    let edits = (0..k)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, i as u64));
            if !rng.gen_bool(p_edit) {
                return SegmentEdit::None;
            }
            let delete = match kind {
                ChannelKind::Deletion => true,
                ChannelKind::Insertion => false,
                ChannelKind::InsDel => rng.gen_bool(0.5),
            };
            if delete {
                SegmentEdit::Delete {
                    pos: rng.gen_range(1..=b),
                }
            } else {
                SegmentEdit::Insert {
                    pos: rng.gen_range(0..=b),
                    symbol: rng.gen_range(0..q) as u8,
                }
            }
        })
        .collect();
    Ok(EditPattern { edits })
}
