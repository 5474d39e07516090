//! Segment-by-segment decoders for the three segmented channels.
//!
//! Each decoder finalises segment `i` and the exact start of segment `i+1`
//! before reading further. The received word is held in a working stream
//! from which decided insertions can be removed; every symbol keeps its
//! original 1-based position for the trace.
//!
//! A few boundary configurations admit two readings that agree on every
//! symbol the case tables look at. There the decoder follows one reading and
//! keeps the other as a fork. A finished decode that had forks is accepted
//! only if [`explains`] confirms it; otherwise the next fork is resumed.

mod deletion;
mod insdel;
mod insertion;

use std::cell::Cell;
use std::collections::VecDeque;
use std::fmt;
use std::rc::Rc;

use crate::code::{ChannelKind, SegmentedCode};
use crate::error::{Error, Result};
use crate::seq::{write_symbols, Seq};
use crate::vt::VtParams;

/// Edit the decoder attributes to a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InferredEdit {
    None,
    Deletion,
    Insertion,
}

impl InferredEdit {
    pub fn name(self) -> &'static str {
        match self {
            InferredEdit::None => "none",
            InferredEdit::Deletion => "del",
            InferredEdit::Insertion => "ins",
        }
    }

    pub fn delta(self) -> isize {
        match self {
            InferredEdit::None => 0,
            InferredEdit::Deletion => -1,
            InferredEdit::Insertion => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentTrace {
    /// 1-based segment index.
    pub index: usize,
    /// 1-based position in the received word where the segment starts.
    pub start: usize,
    pub edit: InferredEdit,
    pub segment: Seq,
}

/// Per-segment record of a decode.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodeTrace {
    pub segments: Vec<SegmentTrace>,
}

impl DecodeTrace {
    /// Received length implied by the inferred edits.
    pub fn implied_len(&self, b: usize) -> usize {
        self.segments
            .iter()
            .map(|s| (b as isize + s.edit.delta()) as usize)
            .sum()
    }
}

impl fmt::Display for DecodeTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.segments {
            write!(f, "i={} start={} edit={} seg=", s.index, s.start, s.edit.name())?;
            write_symbols(f, s.segment.symbols(), s.segment.q())?;
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub x: Seq,
    pub trace: DecodeTrace,
}

/// Admissible received lengths for `k` segments on `kind`'s channel.
pub fn length_range(kind: ChannelKind, b: usize, k: usize) -> (usize, usize) {
    let n = k * b;
    match kind {
        ChannelKind::Deletion => (n - k, n),
        ChannelKind::Insertion => (n, n + k),
        ChannelKind::InsDel => (n - k, n + k),
    }
}

/// Decodes `y` into the transmitted word, dispatching on the code's channel.
pub fn decode(code: &SegmentedCode, y: &Seq, k: usize) -> Result<Decoded> {
    if y.q() != code.q() {
        return Err(Error::AlphabetMismatch {
            expected: code.q(),
            found: y.q(),
        });
    }
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let (lo, hi) = length_range(code.kind(), code.b(), k);
    if y.len() < lo || y.len() > hi {
        return Err(Error::violation(
            1,
            format!(
                "received length {} outside {lo}..={hi} for k={k}, b={}",
                y.len(),
                code.b()
            ),
        ));
    }
    let mut stack = vec![Decoder::new(code, y, k)];
    let mut forked = false;
    let mut first_err = None;
    while let Some(mut dec) = stack.pop() {
        let r = run(&mut dec);
        forked |= !dec.forks.is_empty();
        stack.append(&mut dec.forks);
        match r {
            Ok(d) if !forked || explains(code, &d.x, y) => return Ok(d),
            Ok(_) => {
                first_err.get_or_insert_with(|| {
                    Error::violation(k, "decoded word does not explain the received word")
                });
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one branch ran"))
}

fn run(dec: &mut Decoder<'_>) -> Result<Decoded> {
    while dec.segment() <= dec.k {
        match dec.code.kind() {
            ChannelKind::Deletion => deletion::step(dec)?,
            ChannelKind::Insertion if dec.code.q() == 2 => insertion::step_binary(dec)?,
            ChannelKind::Insertion => insertion::step_qary(dec)?,
            ChannelKind::InsDel => insdel::step(dec)?,
        }
    }
    dec.finish()
}

/// Whether `y` can arise from `x` on the code's channel with at most one
/// edit per segment, every segment of `x` being a codeword of its role.
pub fn explains(code: &SegmentedCode, x: &Seq, y: &Seq) -> bool {
    let b = code.b();
    if x.q() != code.q() || y.q() != code.q() || x.is_empty() || !x.len().is_multiple_of(b) {
        return false;
    }
    let deltas: &[isize] = match code.kind() {
        ChannelKind::Deletion => &[-1, 0],
        ChannelKind::Insertion => &[0, 1],
        ChannelKind::InsDel => &[-1, 0, 1],
    };
    let y = y.symbols();
    let mut reach = vec![0usize];
    let mut prev = None;
    for seg in x.symbols().chunks(b) {
        if code.set(code.next_role(prev)).index_of(seg).is_none() {
            return false;
        }
        prev = seg.last().copied();
        let mut next: Vec<usize> = Vec::new();
        for &p in &reach {
            for &d in deltas {
                let end = (p + b).wrapping_add_signed(d);
                if end <= y.len() && within_one_edit(seg, &y[p..end]) && !next.contains(&end) {
                    next.push(end);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        reach = next;
    }
    reach.contains(&y.len())
}

/// `s == r`, or one is obtained from the other by deleting a single symbol.
fn within_one_edit(s: &[u8], r: &[u8]) -> bool {
    let (long, short) = match s.len().abs_diff(r.len()) {
        0 => return s == r,
        1 if s.len() > r.len() => (s, r),
        1 => (r, s),
        _ => return false,
    };
    let i = long.iter().zip(short).take_while(|(a, b)| a == b).count();
    long[i + 1..] == short[i..]
}

pub fn decode_deletion(code: &SegmentedCode, y: &Seq, k: usize) -> Result<Decoded> {
    expect_kind(code, ChannelKind::Deletion)?;
    decode(code, y, k)
}

pub fn decode_insertion(code: &SegmentedCode, y: &Seq, k: usize) -> Result<Decoded> {
    expect_kind(code, ChannelKind::Insertion)?;
    decode(code, y, k)
}

pub fn decode_insdel(code: &SegmentedCode, y: &Seq, k: usize) -> Result<Decoded> {
    expect_kind(code, ChannelKind::InsDel)?;
    decode(code, y, k)
}

fn expect_kind(code: &SegmentedCode, kind: ChannelKind) -> Result<()> {
    if code.kind() == kind {
        Ok(())
    } else {
        Err(Error::param(format!(
            "expected a {kind} code, got a {} code",
            code.kind()
        )))
    }
}

/// Cap on alternative branches over a whole decode.
const MAX_FORKS: usize = 64;

/// Shared state of a running decode.
#[derive(Clone)]
pub(crate) struct Decoder<'a> {
    pub code: &'a SegmentedCode,
    pub b: usize,
    k: usize,
    /// Unconsumed symbols with their original 0-based positions.
    stream: VecDeque<(u8, usize)>,
    total: usize,
    /// Symbols popped or removed so far.
    used: usize,
    /// `used` when the current segment began.
    used_at_start: usize,
    out: Vec<u8>,
    prev_last: Option<u8>,
    trace: Vec<SegmentTrace>,
    /// Alternative states created during the last run.
    forks: Vec<Decoder<'a>>,
    /// Forks left for the whole decode, shared by all branches.
    fork_budget: Rc<Cell<usize>>,
}

impl<'a> Decoder<'a> {
    fn new(code: &'a SegmentedCode, y: &Seq, k: usize) -> Self {
        Decoder {
            code,
            b: code.b(),
            k,
            stream: y.symbols().iter().copied().zip(0..).collect(),
            total: y.len(),
            used: 0,
            used_at_start: 0,
            out: Vec::with_capacity(k * code.b()),
            prev_last: None,
            trace: Vec::with_capacity(k),
            forks: Vec::new(),
            fork_budget: Rc::new(Cell::new(MAX_FORKS)),
        }
    }

    /// Records an alternative reading: `alt` is applied to a copy of the
    /// current state, which is kept if it succeeds.
    pub fn fork(&mut self, alt: impl FnOnce(&mut Decoder<'a>) -> Result<()>) {
        let left = self.fork_budget.get();
        if left == 0 {
            return;
        }
        self.fork_budget.set(left - 1);
        let pending = std::mem::take(&mut self.forks);
        let mut other = self.clone();
        self.forks = pending;
        if alt(&mut other).is_ok() {
            self.forks.push(other);
        }
    }

    /// 1-based index of the segment being decoded.
    pub fn segment(&self) -> usize {
        self.trace.len() + 1
    }

    pub fn is_last(&self) -> bool {
        self.segment() == self.k
    }

    pub fn remaining(&self) -> usize {
        self.stream.len()
    }

    pub fn role(&self) -> usize {
        self.code.next_role(self.prev_last)
    }

    pub fn params(&self) -> VtParams {
        *self.code.set(self.role()).params()
    }

    pub fn peek(&self, i: usize) -> Option<u8> {
        self.stream.get(i).map(|&(s, _)| s)
    }

    /// Symbol at `i`, or a contract violation naming `case` when the stream is too short.
    pub fn at(&self, i: usize, case: &str) -> Result<u8> {
        self.peek(i).ok_or_else(|| {
            Error::violation(
                self.segment(),
                format!("{case}: lookahead beyond end of received word"),
            )
        })
    }

    /// Copy of `stream[start..end]`, if available.
    pub fn window(&self, start: usize, end: usize) -> Option<Vec<u8>> {
        (end <= self.stream.len()).then(|| self.stream.range(start..end).map(|&(s, _)| s).collect())
    }

    pub fn window_or(&self, start: usize, end: usize, case: &str) -> Result<Vec<u8>> {
        self.window(start, end).ok_or_else(|| {
            Error::violation(
                self.segment(),
                format!("{case}: window beyond end of received word"),
            )
        })
    }

    /// Deletes a symbol ahead of the cursor as a decided insertion.
    pub fn remove(&mut self, i: usize) {
        if self.stream.remove(i).is_some() {
            self.used += 1;
        }
    }

    pub fn violation(&self, case: impl Into<String>) -> Error {
        Error::violation(self.segment(), case)
    }

    /// Finalises the current segment: consumes `advance` symbols and records
    /// the decoded word. The inferred edit follows from the symbols used.
    pub fn emit(&mut self, segment: Vec<u8>, advance: usize) -> Result<()> {
        let start = self.stream.front().map_or(self.total, |&(_, orig)| orig) + 1;
        if advance > self.stream.len() {
            return Err(self.violation("segment extends beyond end of received word"));
        }
        self.stream.drain(..advance);
        self.used += advance;
        let used = self.used - self.used_at_start;
        let edit = match used as isize - self.b as isize {
            -1 => InferredEdit::Deletion,
            0 => InferredEdit::None,
            1 => InferredEdit::Insertion,
            d => {
                return Err(self.violation(format!("segment accounts for {d:+} symbols, more than one edit")))
            }
        };
        debug_assert_eq!(segment.len(), self.b);
        self.prev_last = segment.last().copied();
        self.out.extend_from_slice(&segment);
        self.trace.push(SegmentTrace {
            index: self.segment(),
            start,
            edit,
            segment: Seq::from_raw(self.code.q(), segment),
        });
        self.used_at_start = self.used;
        Ok(())
    }

    fn finish(&mut self) -> Result<Decoded> {
        if !self.stream.is_empty() {
            return Err(Error::violation(
                self.k,
                format!(
                    "{} received symbols left after the last segment",
                    self.stream.len()
                ),
            ));
        }
        Ok(Decoded {
            x: Seq::from_raw(self.code.q(), std::mem::take(&mut self.out)),
            trace: DecodeTrace {
                segments: std::mem::take(&mut self.trace),
            },
        })
    }
}

/// Wraps a VT step failure as a contract violation of the current segment.
pub(crate) fn vt_step<T>(dec: &Decoder<'_>, case: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| dec.violation(format!("{case}: {e}")))
}
