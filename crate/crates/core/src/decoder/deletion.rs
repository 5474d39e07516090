use super::{vt_step, Decoder};
use crate::error::Result;
use crate::vt::correct_deletion;

pub(super) fn step(dec: &mut Decoder<'_>) -> Result<()> {
    let b = dec.b;
    let p = dec.params();
    if dec.is_last() {
        return match dec.remaining() {
            l if l + 1 == b => {
                let w = dec.window_or(0, b - 1, "final segment")?;
                let s = vt_step(dec, "final segment deletion", correct_deletion(&w, &p))?;
                dec.emit(s, b - 1)
            }
            l if l == b => {
                let w = dec.window_or(0, b, "final segment")?;
                if !p.contains(&w) {
                    return Err(dec.violation("final segment is not in its class"));
                }
                dec.emit(w, b)
            }
            l => Err(dec.violation(format!("final segment has {l} symbols"))),
        };
    }
    let w = dec.window_or(0, b, "window")?;
    if p.contains(&w) {
        return dec.emit(w, b);
    }
    let s = vt_step(dec, "deletion", correct_deletion(&w[..b - 1], &p))?;
    dec.emit(s, b - 1)
}
