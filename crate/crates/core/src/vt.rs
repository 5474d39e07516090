//! Varshamov-Tenengolts primitives for binary and q-ary alphabets.
//!
//! A binary word of length `b` belongs to `VT_a(b)` when its weighted sum
//! `sum j*s_j (mod b+1)` equals `a`. For `q > 2` membership in `VT_{a,c}(b)`
//! is decided by the syndrome of the auxiliary rise/fall word (length `b-1`,
//! taken mod `b`) together with the symbol sum mod `q`. Every class corrects
//! one insertion or one deletion.

use std::collections::BTreeSet;

use crate::enumerate::Template;
use crate::error::{Error, Result};
use crate::seq::{check_q, mod_sum, Seq};

/// Largest `q^b` for which class members are materialised into a list.
pub const ENUMERATION_BUDGET: u128 = 1 << 28;

/// Parameters of a single VT class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VtParams {
    b: usize,
    q: u16,
    a: u32,
    c: Option<u32>,
}

impl VtParams {
    pub fn new(b: usize, q: u16, a: u32, c: Option<u32>) -> Result<Self> {
        check_q(q)?;
        if b == 0 {
            return Err(Error::param("code length b must be at least 1"));
        }
        if q == 2 {
            if c.is_some() {
                return Err(Error::param("sum residue c is only defined for q > 2"));
            }
            if a as usize > b {
                return Err(Error::param(format!("syndrome a={a} must be in 0..={b}")));
            }
        } else {
            if b < 2 {
                return Err(Error::param("q-ary VT classes need b >= 2"));
            }
            let c = c.ok_or_else(|| Error::param("q-ary VT classes need a sum residue c"))?;
            if a as usize >= b {
                return Err(Error::param(format!("syndrome a={a} must be in 0..{b}")));
            }
            if c >= u32::from(q) {
                return Err(Error::param(format!("sum residue c={c} must be in 0..{q}")));
            }
        }
        Ok(VtParams { b, q, a, c })
    }

    pub fn binary(b: usize, a: u32) -> Result<Self> {
        VtParams::new(b, 2, a, None)
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn c(&self) -> Option<u32> {
        self.c
    }

    /// The class of an arbitrary word of the right alphabet, as `(a, c)`.
    pub fn of(symbols: &[u8], q: u16) -> Result<Self> {
        let (a, c) = class_key(symbols, q);
        VtParams::new(symbols.len(), q, a, (q > 2).then_some(c))
    }

    /// Dense index of the class among all classes of this `(b, q)`:
    /// `a` for binary, `a*q + c` otherwise.
    pub fn index(&self) -> usize {
        match self.c {
            None => self.a as usize,
            Some(c) => self.a as usize * self.q as usize + c as usize,
        }
    }

    pub(crate) fn contains(&self, symbols: &[u8]) -> bool {
        if symbols.len() != self.b {
            return false;
        }
        let (a, c) = class_key(symbols, self.q);
        a == self.a && self.c.is_none_or(|want| want == c)
    }
}

/// Number of distinct VT classes for length `b` over alphabet `q`.
pub fn class_count(b: usize, q: u16) -> usize {
    if q == 2 {
        b + 1
    } else {
        b * q as usize
    }
}

/// `sum j*s_j mod (len+1)` over a 0/1 slice, positions counted from 1.
pub(crate) fn syndrome_bits(bits: &[u8]) -> u32 {
    let m = bits.len() as u64 + 1;
    let total: u64 = bits
        .iter()
        .enumerate()
        .map(|(i, &s)| (i as u64 + 1) * u64::from(s))
        .sum();
    (total % m) as u32
}

/// Syndrome of the auxiliary word of `symbols`, computed without materialising it.
pub(crate) fn aux_syndrome(symbols: &[u8]) -> u32 {
    let b = symbols.len();
    if b < 2 {
        return 0;
    }
    let total: u64 = symbols
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] >= w[0])
        .map(|(j, _)| j as u64 + 1)
        .sum();
    (total % b as u64) as u32
}

/// `(a, c)` class key of a word; `c` is 0 for binary words.
pub(crate) fn class_key(symbols: &[u8], q: u16) -> (u32, u32) {
    if q == 2 {
        (syndrome_bits(symbols), 0)
    } else {
        (aux_syndrome(symbols), mod_sum(symbols, q))
    }
}

#[cfg(test)]
pub(crate) fn class_index(symbols: &[u8], q: u16) -> usize {
    let (a, c) = class_key(symbols, q);
    if q == 2 {
        a as usize
    } else {
        a as usize * q as usize + c as usize
    }
}

/// VT syndrome of a binary word.
pub fn syndrome(s: &Seq) -> Result<u32> {
    if s.q() != 2 {
        return Err(Error::AlphabetMismatch {
            expected: 2,
            found: s.q(),
        });
    }
    Ok(syndrome_bits(s.symbols()))
}

/// Auxiliary binary word `alpha_2 .. alpha_b`, with `alpha_i = 1` iff `s_i >= s_{i-1}`.
pub fn aux_binary(s: &Seq) -> Result<Seq> {
    if s.len() < 2 {
        return Err(Error::param("auxiliary word needs a word of length >= 2"));
    }
    let bits = s.symbols().windows(2).map(|w| u8::from(w[1] >= w[0])).collect();
    Ok(Seq::from_raw(2, bits))
}

fn check_shape(s: &Seq, p: &VtParams, len: usize) -> Result<()> {
    if s.q() != p.q {
        return Err(Error::AlphabetMismatch {
            expected: p.q,
            found: s.q(),
        });
    }
    if s.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: s.len(),
        });
    }
    Ok(())
}

pub fn vt_member(s: &Seq, p: &VtParams) -> Result<bool> {
    check_shape(s, p, p.b)?;
    Ok(p.contains(s.symbols()))
}

/// Streams every member of the class in lexicographic order, with no memory budget.
pub fn visit_vt(p: &VtParams, mut f: impl FnMut(&[u8])) {
    Template::full(p.q, p.b).for_each(|w| {
        if p.contains(w) {
            f(w)
        }
    });
}

/// All members of the class in lexicographic order.
pub fn enumerate_vt(p: &VtParams) -> Result<Vec<Seq>> {
    let space = Template::full(p.q, p.b).count();
    if space > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            what: "VT class enumeration",
            needed: space,
            budget: ENUMERATION_BUDGET,
        });
    }
    let mut out = Vec::new();
    visit_vt(p, |w| out.push(Seq::from_raw(p.q, w.to_vec())));
    Ok(out)
}

fn unique(mut found: Vec<Vec<u8>>, q: u16) -> Result<Seq> {
    found.sort_unstable();
    found.dedup();
    match found.len() {
        0 => Err(Error::DecodeFailure),
        1 => Ok(Seq::from_raw(q, found.pop().unwrap())),
        _ => Err(Error::Ambiguous),
    }
}

/// Recovers the class member from which `r` arises by one deletion.
pub fn decode_one_deletion(r: &Seq, p: &VtParams) -> Result<Seq> {
    check_shape(r, p, p.b - 1)?;
    let found = if p.q == 2 {
        deletion_candidates_binary(r.symbols(), p.a)
    } else {
        deletion_candidates(r.symbols(), p)
    };
    unique(found, p.q)
}

/// Recovers the class member from which `r` arises by one insertion.
pub fn decode_one_insertion(r: &Seq, p: &VtParams) -> Result<Seq> {
    check_shape(r, p, p.b + 1)?;
    let found = if p.q == 2 {
        insertion_candidates_binary(r.symbols(), p.a)
    } else {
        insertion_candidates(r.symbols(), p)
    };
    unique(found, p.q)
}

/// Slice-level deletion decoding used by the segment decoders.
pub(crate) fn correct_deletion(r: &[u8], p: &VtParams) -> Result<Vec<u8>> {
    debug_assert_eq!(r.len() + 1, p.b);
    let found = if p.q == 2 {
        deletion_candidates_binary(r, p.a)
    } else {
        deletion_candidates(r, p)
    };
    unique(found, p.q).map(Seq::into_symbols)
}

pub(crate) fn correct_insertion(r: &[u8], p: &VtParams) -> Result<Vec<u8>> {
    debug_assert_eq!(r.len(), p.b + 1);
    let found = if p.q == 2 {
        insertion_candidates_binary(r, p.a)
    } else {
        insertion_candidates(r, p)
    };
    unique(found, p.q).map(Seq::into_symbols)
}

// Inserting `x` right after an equal symbol gives the same word as inserting it
// before that symbol, so only the first slot of each run is tried.
fn deletion_candidates(r: &[u8], p: &VtParams) -> Vec<Vec<u8>> {
    let mut found = Vec::new();
    let mut cand = Vec::with_capacity(r.len() + 1);
    for pos in 0..=r.len() {
        for x in 0..p.q {
            let x = x as u8;
            if pos > 0 && r[pos - 1] == x {
                continue;
            }
            cand.clear();
            cand.extend_from_slice(&r[..pos]);
            cand.push(x);
            cand.extend_from_slice(&r[pos..]);
            if p.contains(&cand) {
                found.push(cand.clone());
            }
        }
    }
    found
}

fn insertion_candidates(r: &[u8], p: &VtParams) -> Vec<Vec<u8>> {
    let mut found = Vec::new();
    let mut cand = Vec::with_capacity(r.len());
    for pos in 0..r.len() {
        if pos > 0 && r[pos - 1] == r[pos] {
            continue;
        }
        cand.clear();
        cand.extend_from_slice(&r[..pos]);
        cand.extend_from_slice(&r[pos + 1..]);
        if p.contains(&cand) {
            found.push(cand.clone());
        }
    }
    found
}

// Binary fast paths: the syndrome of each candidate follows from prefix
// weighted sums and suffix weights in O(1).
fn deletion_candidates_binary(r: &[u8], a: u32) -> Vec<Vec<u8>> {
    let m = r.len() as u64 + 2;
    let weighted: u64 = r
        .iter()
        .enumerate()
        .map(|(i, &s)| (i as u64 + 1) * u64::from(s))
        .sum();
    let mut ones_after: u64 = r.iter().map(|&s| u64::from(s)).sum();
    let mut found = Vec::new();
    for pos in 0..=r.len() {
        for x in 0..2u8 {
            if !(pos > 0 && r[pos - 1] == x) {
                let syn = (weighted + ones_after + (pos as u64 + 1) * u64::from(x)) % m;
                if syn == u64::from(a) {
                    let mut cand = Vec::with_capacity(r.len() + 1);
                    cand.extend_from_slice(&r[..pos]);
                    cand.push(x);
                    cand.extend_from_slice(&r[pos..]);
                    found.push(cand);
                }
            }
        }
        if pos < r.len() {
            ones_after -= u64::from(r[pos]);
        }
    }
    found
}

fn insertion_candidates_binary(r: &[u8], a: u32) -> Vec<Vec<u8>> {
    let m = r.len() as u64;
    let weighted: u64 = r
        .iter()
        .enumerate()
        .map(|(i, &s)| (i as u64 + 1) * u64::from(s))
        .sum();
    let mut ones_after: u64 = r.iter().map(|&s| u64::from(s)).sum();
    let mut found = Vec::new();
    for pos in 0..r.len() {
        ones_after -= u64::from(r[pos]);
        if pos > 0 && r[pos - 1] == r[pos] {
            continue;
        }
        let removed = (pos as u64 + 1) * u64::from(r[pos]) + ones_after;
        let syn = (weighted - removed) % m;
        if syn == u64::from(a) {
            let mut cand = Vec::with_capacity(r.len() - 1);
            cand.extend_from_slice(&r[..pos]);
            cand.extend_from_slice(&r[pos + 1..]);
            found.push(cand);
        }
    }
    found
}

/// All distinct words obtained by deleting one symbol.
pub fn d1_set(s: &Seq) -> BTreeSet<Seq> {
    let w = s.symbols();
    (0..w.len())
        .map(|i| {
            let mut v = w.to_vec();
            v.remove(i);
            Seq::from_raw(s.q(), v)
        })
        .collect()
}

/// All distinct words obtained by inserting one symbol.
pub fn i1_set(s: &Seq) -> BTreeSet<Seq> {
    let w = s.symbols();
    let mut out = BTreeSet::new();
    for pos in 0..=w.len() {
        for x in 0..s.q() {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.extend_from_slice(&w[..pos]);
            v.push(x as u8);
            v.extend_from_slice(&w[pos..]);
            out.insert(Seq::from_raw(s.q(), v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(s: &str) -> Seq {
        Seq::parse(s, 2).unwrap()
    }

    #[test]
    fn syndrome_examples() {
        assert_eq!(syndrome(&bin("100")).unwrap(), 1);
        assert_eq!(syndrome(&bin("011")).unwrap(), 1);
        assert_eq!(syndrome(&bin("0000")).unwrap(), 0);
        assert!(syndrome(&Seq::parse("012", 3).unwrap()).is_err());
    }

    #[test]
    fn aux_examples() {
        let s = Seq::parse("1022", 3).unwrap();
        assert_eq!(aux_binary(&s).unwrap().to_string(), "011");
        assert_eq!(aux_binary(&bin("000")).unwrap().to_string(), "11");
        assert_eq!(
            aux_binary(&Seq::parse("210", 3).unwrap()).unwrap().to_string(),
            "00"
        );
        assert!(aux_binary(&bin("1")).is_err());
        // aux syndrome without materialising agrees with the explicit route
        assert_eq!(
            aux_syndrome(s.symbols()),
            syndrome(&aux_binary(&s).unwrap()).unwrap()
        );
    }

    #[test]
    fn membership_examples() {
        assert!(vt_member(&bin("100"), &VtParams::binary(3, 1).unwrap()).unwrap());
        assert!(!vt_member(&bin("100"), &VtParams::binary(3, 0).unwrap()).unwrap());
        let p = VtParams::new(3, 3, 0, Some(0)).unwrap();
        assert!(vt_member(&Seq::parse("000", 3).unwrap(), &p).unwrap());
        assert!(vt_member(&bin("1000"), &VtParams::binary(3, 1).unwrap()).is_err());
    }

    #[test]
    fn params_validate_ranges() {
        assert!(VtParams::binary(3, 3).is_ok());
        assert!(VtParams::binary(3, 4).is_err());
        assert!(VtParams::new(3, 3, 3, Some(0)).is_err());
        assert!(VtParams::new(3, 3, 2, Some(3)).is_err());
        assert!(VtParams::new(3, 3, 2, None).is_err());
        assert!(VtParams::new(3, 2, 2, Some(0)).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let one = enumerate_vt(&VtParams::binary(3, 1).unwrap()).unwrap();
        assert_eq!(one, vec![bin("011"), bin("100")]);
        let zero = enumerate_vt(&VtParams::binary(3, 0).unwrap()).unwrap();
        assert_eq!(zero, vec![bin("000"), bin("101")]);
        let total: usize = (0..=3)
            .map(|a| enumerate_vt(&VtParams::binary(3, a).unwrap()).unwrap().len())
            .sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn enumeration_budget() {
        let p = VtParams::binary(29, 0).unwrap();
        assert!(matches!(enumerate_vt(&p), Err(Error::Budget { .. })));
    }

    #[test]
    fn single_edit_decoding_examples() {
        let p1 = VtParams::binary(3, 1).unwrap();
        let p0 = VtParams::binary(3, 0).unwrap();
        assert_eq!(decode_one_deletion(&bin("11"), &p1).unwrap(), bin("011"));
        assert_eq!(decode_one_deletion(&bin("00"), &p1).unwrap(), bin("100"));
        assert_eq!(decode_one_deletion(&bin("00"), &p0).unwrap(), bin("000"));
        assert_eq!(decode_one_insertion(&bin("0110"), &p1).unwrap(), bin("011"));
        assert_eq!(decode_one_insertion(&bin("1100"), &p1).unwrap(), bin("100"));
        assert_eq!(
            decode_one_insertion(&bin("1111"), &p1).unwrap_err(),
            Error::DecodeFailure
        );
    }

    #[test]
    fn neighbourhoods() {
        let d: Vec<String> = d1_set(&bin("010")).iter().map(|s| s.to_string()).collect();
        assert_eq!(d, vec!["00", "01", "10"]);
        let i: Vec<String> = i1_set(&bin("0")).iter().map(|s| s.to_string()).collect();
        assert_eq!(i, vec!["00", "01", "10"]);
        let s = bin("01101");
        assert!(i1_set(&s).len() <= 2 * (s.len() + 1));
    }

    #[test]
    fn class_index_is_dense() {
        for q in [2u16, 3, 4] {
            let b = 4;
            let mut seen = vec![false; class_count(b, q)];
            Template::full(q, b).for_each(|w| seen[class_index(w, q)] = true);
            assert!(seen.iter().all(|&x| x));
        }
    }
}
