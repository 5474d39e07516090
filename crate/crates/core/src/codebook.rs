//! Plain-text codebook files.
//!
//! ```text
//! segcode v1
//! kind=deletion q=2 b=8 Ms=8 sets=2
//! set label=0 a=0 n=8
//! 00000000
//! ...
//! set label=1 a=4 n=8
//! ...
//! ```
//!
//! q-ary sets carry `c=<sum residue>` after `a`. Blank lines and lines
//! starting with `#` are ignored. Reading checks structure (membership,
//! role constraints, ordering, equal sizes) but not that the sets are the
//! maximal classes a fresh build would pick.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use crate::code::{ChannelKind, SegmentedCode};
use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::vt::VtParams;

pub const MAGIC: &str = "segcode v1";

/// Streams `code` in the text format.
pub fn write_codebook(code: &SegmentedCode, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(
        out,
        "kind={} q={} b={} Ms={} sets={}",
        code.kind(),
        code.q(),
        code.b(),
        code.ms(),
        code.sets().len()
    )?;
    for set in code.sets() {
        let p = set.params();
        write!(out, "set label={} a={}", set.label(), p.a())?;
        if let Some(c) = p.c() {
            write!(out, " c={c}")?;
        }
        writeln!(out, " n={}", set.len())?;
        for w in set.iter() {
            writeln!(out, "{w}")?;
        }
    }
    Ok(())
}

pub fn codebook_to_string(code: &SegmentedCode) -> String {
    let mut buf = Vec::new();
    write_codebook(code, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

struct Lines<I> {
    inner: I,
    line: usize,
}

impl<I: Iterator<Item = io::Result<String>>> Lines<I> {
    /// Next meaningful line with its number, or `None` at end of input.
    fn next(&mut self) -> Result<Option<(usize, String)>> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l.map_err(|e| Error::parse(self.line, 1, e.to_string()))?;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Ok(Some((self.line, t.to_string())));
            }
        }
        Ok(None)
    }

    fn expect(&mut self, what: &str) -> Result<(usize, String)> {
        self.next()?.ok_or_else(|| {
            Error::parse(
                self.line + 1,
                1,
                format!("unexpected end of input, expected {what}"),
            )
        })
    }
}

fn fields(line: usize, text: &str, skip: usize) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for tok in text.split_whitespace().skip(skip) {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line, 1, format!("expected key=value, found {tok:?}")))?;
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::parse(line, 1, format!("duplicate key {k:?}")));
        }
    }
    Ok(map)
}

fn take<T: std::str::FromStr>(line: usize, map: &mut HashMap<String, String>, key: &str) -> Result<T> {
    let v = map
        .remove(key)
        .ok_or_else(|| Error::parse(line, 1, format!("missing key {key:?}")))?;
    v.parse()
        .map_err(|_| Error::parse(line, 1, format!("bad value {v:?} for {key:?}")))
}

fn no_extra(line: usize, map: &HashMap<String, String>) -> Result<()> {
    match map.keys().next() {
        Some(k) => Err(Error::parse(line, 1, format!("unknown key {k:?}"))),
        None => Ok(()),
    }
}

/// Reads a codebook, validating its structure.
pub fn read_codebook(input: impl BufRead) -> Result<SegmentedCode> {
    let mut lines = Lines {
        inner: input.lines(),
        line: 0,
    };
    let (ln, magic) = lines.expect("header")?;
    if magic != MAGIC {
        return Err(Error::parse(
            ln,
            1,
            format!("expected {MAGIC:?}, found {magic:?}"),
        ));
    }
    let (ln, head) = lines.expect("parameter line")?;
    let mut h = fields(ln, &head, 0)?;
    let kind: String = take(ln, &mut h, "kind")?;
    let kind: ChannelKind = kind.parse()?;
    let q: u16 = take(ln, &mut h, "q")?;
    let b: usize = take(ln, &mut h, "b")?;
    let ms: usize = take(ln, &mut h, "Ms")?;
    let nsets: usize = take(ln, &mut h, "sets")?;
    no_extra(ln, &h)?;

    let mut sets = Vec::with_capacity(nsets);
    for expected in 0..nsets {
        let (ln, text) = lines.expect("set line")?;
        if text.split_whitespace().next() != Some("set") {
            return Err(Error::parse(
                ln,
                1,
                format!("expected a set line, found {text:?}"),
            ));
        }
        let mut f = fields(ln, &text, 1)?;
        let label: usize = take(ln, &mut f, "label")?;
        if label != expected {
            return Err(Error::parse(
                ln,
                1,
                format!("expected set label {expected}, found {label}"),
            ));
        }
        let a: u32 = take(ln, &mut f, "a")?;
        let c: Option<u32> = if q > 2 { Some(take(ln, &mut f, "c")?) } else { None };
        let n: usize = take(ln, &mut f, "n")?;
        no_extra(ln, &f)?;
        if n != ms {
            return Err(Error::parse(
                ln,
                1,
                format!("set {label} declares n={n}, header has Ms={ms}"),
            ));
        }
        let params = VtParams::new(b, q, a, c)?;
        let mut words = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, text) = lines.expect("codeword")?;
            let w = Seq::parse_at(&text, q, ln)?;
            if w.len() != b {
                return Err(Error::parse(
                    ln,
                    1,
                    format!("codeword of length {} where b={b}", w.len()),
                ));
            }
            words.push(w);
        }
        sets.push((params, words));
    }
    if let Some((ln, text)) = lines.next()? {
        return Err(Error::parse(ln, 1, format!("trailing content {text:?}")));
    }
    SegmentedCode::from_sets(kind, q, b, sets)
}

pub fn parse_codebook(text: &str) -> Result<SegmentedCode> {
    read_codebook(text.as_bytes())
}
