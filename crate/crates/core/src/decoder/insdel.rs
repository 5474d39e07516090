use super::{vt_step, Decoder};
use crate::code::{insdel_prefix, satisfies_role, ChannelKind};
use crate::error::Result;
use crate::vt::{correct_deletion, correct_insertion};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Edit {
    Del,
    Ins,
}

fn last(dec: &mut Decoder<'_>) -> Result<()> {
    let b = dec.b;
    let p = dec.params();
    match dec.remaining() {
        l if l + 1 == b => {
            let r = dec.window_or(0, b - 1, "final segment")?;
            let s = vt_step(dec, "final segment deletion", correct_deletion(&r, &p))?;
            dec.emit(s, b - 1)
        }
        l if l == b || l == b + 1 => {
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
        l => Err(dec.violation(format!("final segment has {l} symbols"))),
    }
}

pub(super) fn step(dec: &mut Decoder<'_>) -> Result<()> {
    if dec.is_last() {
        return last(dec);
    }
    let b = dec.b;
    let p = dec.params();
    let w = dec.window_or(0, b, "window")?;
    if p.contains(&w) {
        return matched(dec, w);
    }

    // window fails its class: read the edit type off the symbols around position b
    let t0 = dec.at(b - 3, "window")?;
    let t1 = dec.at(b - 2, "window")?;
    let t2 = dec.at(b - 1, "window")?;
    let t3 = dec.at(b, "window")?;
    let edit = if t1 == t2 && t2 == t3 {
        Edit::Ins
    } else if t1 == t2 {
        Edit::Del
    } else if t1 == t3 {
        let mut z = w[..b - 1].to_vec();
        z.push(t3);
        if !p.contains(&z) {
            Edit::Del
        } else {
            let u = dec.window_or(b, b + 3, "window")?;
            if u[0] == u[1] && u[1] == u[2] {
                return dec.emit(z, b - 1);
            }
            return dec.emit(z, b + 1);
        }
    } else if t2 == t3 {
        if t0 == t1 {
            Edit::Del
        } else {
            Edit::Ins
        }
    } else {
        // three distinct symbols, only possible for q > 2
        Edit::Del
    };
    match edit {
        Edit::Del => {
            let s = vt_step(dec, "deletion", correct_deletion(&w[..b - 1], &p))?;
            dec.emit(s, b - 1)
        }
        Edit::Ins => {
            let r = dec.window_or(0, b + 1, "insertion")?;
            let s = vt_step(dec, "insertion", correct_insertion(&r, &p))?;
            dec.emit(s, b + 1)
        }
    }
}

/// The window is a class member, so it is the segment; decide whether the
/// symbol after it was inserted from the next segment's prefix.
fn matched(dec: &mut Decoder<'_>, w: Vec<u8>) -> Result<()> {
    let b = dec.b;
    let next_role = dec.code.next_role(w.last().copied());
    let z = insdel_prefix(next_role)[0];
    let ahead = dec.window_or(b, b + 5, "boundary")?;
    let u: Vec<u8> = ahead.iter().map(|&s| u8::from(s != z)).collect();
    let inserted = match u[..] {
        [1, ..] => true,
        [0, 0, 0, ..] => true,
        [0, 1, 1, ..] => false,
        [0, 1, 0, 0, 1] => true,
        [0, 1, 0, 1, 1] => false,
        [0, 0, 1, 1, _] => false,
        [0, 0, 1, 0, 1] => return split(dec, w, next_role, z),
        _ => {
            let pat: String = u.iter().map(|d| char::from(b'0' + d)).collect();
            return Err(dec.violation(format!("boundary pattern {pat} cannot occur")));
        }
    };
    dec.emit(w, if inserted { b + 1 } else { b })
}

/// Boundary pattern 00101: either the symbol after the window was inserted
/// and the next segment lost a symbol of its prefix, or the next segment
/// took an insertion inside its prefix. Try both readings of segment i+1.
fn split(dec: &mut Decoder<'_>, w: Vec<u8>, next_role: usize, z: u8) -> Result<()> {
    let b = dec.b;
    let q = dec.code.q();
    let params = *dec.code.set(next_role).params();
    let z1 = dec.window(b + 4, 2 * b + 2).map(|t| [&[z, z][..], &t].concat());
    let z2 = dec
        .window(b, b + 3)
        .zip(dec.window(b + 4, 2 * b + 1))
        .map(|(h, t)| [h, t].concat());
    let fits = |c: &Option<Vec<u8>>| {
        c.as_ref()
            .is_some_and(|c| params.contains(c) && satisfies_role(ChannelKind::InsDel, q, next_role, c))
    };
    match (fits(&z1), fits(&z2)) {
        (true, false) => take_z1(dec, w, z1.unwrap()),
        (false, true) => take_z2(dec, w, z2.unwrap()),
        (true, true) => {
            // both readings fit when Z1 == Z2; keep the other as a fork
            let (w1, z1) = (w.clone(), z1.unwrap());
            dec.fork(|alt| take_z1(alt, w1, z1));
            take_z2(dec, w, z2.unwrap())
        }
        (false, false) => Err(dec.violation("boundary 00101: no candidate matches")),
    }
}

fn take_z1(dec: &mut Decoder<'_>, w: Vec<u8>, z1: Vec<u8>) -> Result<()> {
    let b = dec.b;
    dec.emit(w, b + 1)?;
    dec.emit(z1, b + 1)
}

fn take_z2(dec: &mut Decoder<'_>, w: Vec<u8>, z2: Vec<u8>) -> Result<()> {
    let b = dec.b;
    dec.emit(w, b)?;
    dec.emit(z2, b + 1)
}
