use super::{vt_step, Decoder};
use crate::error::Result;
use crate::vt::correct_insertion;

/// Final segment: the remaining length decides whether an insertion occurred.
fn last(dec: &mut Decoder<'_>) -> Result<()> {
    let b = dec.b;
    let p = dec.params();
    let l = dec.remaining();
    if l != b && l != b + 1 {
        return Err(dec.violation(format!("final segment has {l} symbols")));
    }
    let w = dec.window_or(0, b, "final segment")?;
    if p.contains(&w) {
        return dec.emit(w, l);
    }
    if l == b {
        return Err(dec.violation("final segment is not in its class"));
    }
    let r = dec.window_or(0, b + 1, "final segment")?;
    let s = vt_step(dec, "final segment insertion", correct_insertion(&r, &p))?;
    dec.emit(s, b + 1)
}

/// Resolves a window that fails its class check: the segment took an insertion.
fn mismatch(dec: &mut Decoder<'_>) -> Result<()> {
    let b = dec.b;
    let r = dec.window_or(0, b + 1, "insertion")?;
    let s = vt_step(dec, "insertion", correct_insertion(&r, &dec.params()))?;
    dec.emit(s, b + 1)
}

pub(super) fn step_binary(dec: &mut Decoder<'_>) -> Result<()> {
    if dec.is_last() {
        return last(dec);
    }
    let b = dec.b;
    let w = dec.window_or(0, b, "window")?;
    if !dec.params().contains(&w) {
        return mismatch(dec);
    }
    let y0 = dec.at(b, "boundary")?;
    let y1 = dec.at(b + 1, "boundary")?;
    if (y0, y1) != (0, 1) {
        // the symbol after the window is inserted
        dec.remove(b);
        return dec.emit(w, b);
    }
    let y2 = dec.at(b + 2, "boundary")?;
    let y3 = dec.at(b + 3, "boundary")?;
    if (y2, y3) != (0, 1) {
        return dec.emit(w, b);
    }

    // 0101 after the window: decide segments i and i+1 together
    let next = *dec.code.set(0).params();
    let lead = dec.window(b, b + 2);
    let mid = dec.window(b + 2, b + 3);
    let tail1 = dec.window(b + 3, 2 * b + 1);
    let tail2 = dec.window(b + 4, 2 * b + 1);
    let alt1 = lead.as_ref().zip(tail1).map(|(l, t)| [l.as_slice(), &t].concat());
    let alt2 = lead
        .zip(mid)
        .zip(tail2)
        .map(|((l, m), t)| [l.as_slice(), &m, &t].concat());
    let alt3 = dec.window(b + 2, 2 * b + 2);
    let ok = |c: &Option<Vec<u8>>| c.as_ref().is_some_and(|c| next.contains(c));
    let hits: Vec<(usize, Vec<u8>)> = [alt1, alt2, alt3]
        .into_iter()
        .enumerate()
        .filter(|(_, c)| ok(c))
        .map(|(i, c)| (i, c.unwrap()))
        .collect();
    let take = move |dec: &mut Decoder<'_>, which: usize, cand: Vec<u8>, w: Vec<u8>| -> Result<()> {
        match which {
            0 | 1 => {
                dec.emit(w, b)?;
                dec.remove(2 + which);
                dec.emit(cand, b)
            }
            _ => {
                dec.emit(w, b + 1)?;
                dec.emit(cand, b + 1)
            }
        }
    };
    let Some((first, rest)) = hits.split_first() else {
        return Err(dec.violation("0101 boundary: no candidate matches"));
    };
    // candidates can coincide for words such as 0100..0; keep the others as forks
    for (which, cand) in rest {
        let (which, cand, w) = (*which, cand.clone(), w.clone());
        dec.fork(|alt| take(alt, which, cand, w));
    }
    take(dec, first.0, first.1.clone(), w)
}

pub(super) fn step_qary(dec: &mut Decoder<'_>) -> Result<()> {
    if dec.is_last() {
        return last(dec);
    }
    let b = dec.b;
    let w = dec.window_or(0, b, "window")?;
    if !dec.params().contains(&w) {
        return mismatch(dec);
    }
    let y0 = dec.at(b, "boundary")?;
    if y0 != 0 {
        dec.remove(b);
        return dec.emit(w, b);
    }
    let y1 = dec.at(b + 1, "boundary")?;
    if y1 > 1 {
        dec.remove(b + 1);
        return dec.emit(w, b);
    }
    let y2 = dec.at(b + 2, "boundary")?;
    if y2 > 1 {
        dec.remove(b + 2);
        return dec.emit(w, b);
    }
    match (y1, y2) {
        (0, 1) => {
            // 00101 may also be a trailing 0 of segment i followed by a
            // prefix 001 that took a 1 after its first symbol
            let tail = (dec.peek(b + 3), dec.peek(b + 4));
            if tail == (Some(0), Some(1)) {
                if let Some(zb) = dec
                    .window(b + 1, b + 2)
                    .zip(dec.window(b + 3, 2 * b + 2))
                    .map(|(h, t)| [h, t].concat())
                    .filter(|z| dec.params().contains(z))
                {
                    let w2 = w.clone();
                    dec.fork(|alt| {
                        alt.emit(w2, b + 1)?;
                        alt.remove(1);
                        alt.emit(zb, b)
                    });
                }
            }
            dec.emit(w, b)
        }
        (0, 0) => dec.emit(w, b + 1),
        (1, 0) => {
            dec.remove(b + 1);
            dec.emit(w, b)
        }
        _ => Err(dec.violation("boundary 011 cannot occur")),
    }
}
