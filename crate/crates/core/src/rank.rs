//! Counting, ranking and unranking of the members of a VT class that satisfy
//! a role constraint.
//!
//! Words are scanned left to right with a state made of the last symbol, a
//! flag for the binary insertion exclusion `011..1`, the running syndrome and
//! the running symbol sum. The same transition drives the class census and
//! the per-class completion table used for rank/unrank, so codebooks never
//! have to be materialised.

use crate::code::{insdel_prefix, ChannelKind};
use crate::error::{Error, Result};
use crate::vt::VtParams;

/// Upper bound on the entries of one completion table, `(b+1) * states`.
pub(crate) const TABLE_BUDGET: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Role {
    pub kind: ChannelKind,
    pub q: u16,
    pub b: usize,
    pub label: usize,
}

impl Role {
    fn binary(&self) -> bool {
        self.q == 2
    }

    fn modulus(&self) -> usize {
        if self.binary() {
            self.b + 1
        } else {
            self.b
        }
    }

    fn sums(&self) -> usize {
        if self.binary() {
            1
        } else {
            self.q as usize
        }
    }

    fn states(&self) -> usize {
        self.q as usize * 2 * self.modulus() * self.sums()
    }

    pub(crate) fn check_budget(&self) -> Result<()> {
        let bits = self.b as f64 * f64::from(self.q).log2();
        if bits >= 120.0 {
            return Err(Error::param(format!(
                "q^b = {}^{} does not fit the counting range",
                self.q, self.b
            )));
        }
        let entries = (self.b as u128 + 1) * self.states() as u128;
        if entries > TABLE_BUDGET {
            return Err(Error::Budget {
                what: "code construction (counting table)",
                needed: entries,
                budget: TABLE_BUDGET,
            });
        }
        Ok(())
    }

    /// Position-local part of the role constraint.
    fn allowed(&self, pos: usize, prev: Option<u8>, s: u8) -> bool {
        let b = self.b;
        match self.kind {
            ChannelKind::Deletion => {
                if pos >= 2 {
                    true
                } else if self.binary() {
                    s as usize == self.label
                } else {
                    s as usize != self.label
                }
            }
            ChannelKind::Insertion => {
                if self.binary() {
                    match pos {
                        0 => s == 0,
                        1 => s == 1,
                        3 => !(prev == Some(0) && s == 1),
                        _ => true,
                    }
                } else {
                    pos >= 3 || s == [0, 0, 1][pos]
                }
            }
            ChannelKind::InsDel => {
                if pos < 5 {
                    s == insdel_prefix(self.label)[pos]
                } else if pos + 2 >= b {
                    prev == Some(s)
                } else {
                    true
                }
            }
        }
    }

    fn tracks_ones(&self) -> bool {
        self.kind == ChannelKind::Insertion && self.binary()
    }

    fn encode(&self, last: u8, flag: bool, syn: usize, sum: usize) -> usize {
        ((last as usize * 2 + usize::from(flag)) * self.modulus() + syn) * self.sums() + sum
    }

    fn decode_state(&self, st: usize) -> (u8, bool, usize, usize) {
        let sum = st % self.sums();
        let rest = st / self.sums();
        let syn = rest % self.modulus();
        let rest = rest / self.modulus();
        ((rest / 2) as u8, rest % 2 == 1, syn, sum)
    }

    fn start(&self, s: u8) -> Option<usize> {
        if !self.allowed(0, None, s) {
            return None;
        }
        let syn = if self.binary() {
            s as usize % self.modulus()
        } else {
            0
        };
        let sum = s as usize % self.sums();
        Some(self.encode(s, self.tracks_ones() && s == 0, syn, sum))
    }

    fn step(&self, pos: usize, st: usize, s: u8) -> Option<usize> {
        let (last, flag, syn, sum) = self.decode_state(st);
        if !self.allowed(pos, Some(last), s) {
            return None;
        }
        let m = self.modulus();
        let syn = if self.binary() {
            (syn + (pos + 1) * s as usize) % m
        } else if s >= last {
            (syn + pos) % m
        } else {
            syn
        };
        let sum = (sum + s as usize) % self.sums();
        Some(self.encode(s, flag && s == 1, syn, sum))
    }

    fn class_of(&self, st: usize) -> Option<usize> {
        let (_, flag, syn, sum) = self.decode_state(st);
        if flag {
            return None;
        }
        Some(syn * self.sums() + sum)
    }

    /// Number of constrained words in every class, indexed like `VtParams::index`.
    pub(crate) fn census(&self) -> Vec<u128> {
        let n = self.states();
        let mut cur = vec![0u128; n];
        for s in 0..self.q {
            if let Some(st) = self.start(s as u8) {
                cur[st] += 1;
            }
        }
        for pos in 1..self.b {
            let mut next = vec![0u128; n];
            for (st, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for s in 0..self.q {
                    if let Some(t) = self.step(pos, st, s as u8) {
                        next[t] += c;
                    }
                }
            }
            cur = next;
        }
        let mut classes = vec![0u128; self.modulus() * self.sums()];
        for (st, &c) in cur.iter().enumerate() {
            if let Some(k) = self.class_of(st) {
                classes[k] += c;
            }
        }
        classes
    }
}

/// Lexicographic rank/unrank within the constrained members of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Ranker {
    role: Role,
    target: usize,
    /// `ways[p][st]`: completions of positions `p..b` from state `st`.
    ways: Vec<Vec<u128>>,
}

impl Ranker {
    pub(crate) fn new(role: Role, params: &VtParams) -> Ranker {
        let target = params.a() as usize * role.sums() + params.c().unwrap_or(0) as usize;
        let n = role.states();
        let b = role.b;
        let mut ways = vec![vec![0u128; n]; b + 1];
        for (st, w) in ways[b].iter_mut().enumerate() {
            *w = u128::from(role.class_of(st) == Some(target));
        }
        for pos in (1..b).rev() {
            for st in 0..n {
                let mut total = 0;
                for s in 0..role.q {
                    if let Some(t) = role.step(pos, st, s as u8) {
                        total += ways[pos + 1][t];
                    }
                }
                ways[pos][st] = total;
            }
        }
        Ranker { role, target, ways }
    }

    fn first(&self, s: u8) -> u128 {
        self.role.start(s).map_or(0, |st| self.ways[1][st])
    }

    /// Total number of constrained class members.
    #[cfg(test)]
    pub(crate) fn total(&self) -> u128 {
        (0..self.role.q).map(|s| self.first(s as u8)).sum()
    }

    /// The `idx`-th member in lexicographic order.
    pub(crate) fn unrank(&self, mut idx: u128) -> Option<Vec<u8>> {
        let q = self.role.q;
        let mut word = Vec::with_capacity(self.role.b);
        let mut st = None;
        for s in 0..q {
            let c = self.first(s as u8);
            if idx < c {
                st = self.role.start(s as u8);
                word.push(s as u8);
                break;
            }
            idx -= c;
        }
        let mut st = st?;
        for pos in 1..self.role.b {
            let mut chosen = None;
            for s in 0..q {
                if let Some(t) = self.role.step(pos, st, s as u8) {
                    let c = self.ways[pos + 1][t];
                    if idx < c {
                        chosen = Some((s as u8, t));
                        break;
                    }
                    idx -= c;
                }
            }
            let (s, t) = chosen?;
            word.push(s);
            st = t;
        }
        Some(word)
    }

    /// Position of `w` among the members, or `None` if it is not one.
    pub(crate) fn rank(&self, w: &[u8]) -> Option<u128> {
        let q = self.role.q;
        if w.len() != self.role.b || w.iter().any(|&s| u16::from(s) >= q) {
            return None;
        }
        let mut idx: u128 = (0..w[0]).map(|s| self.first(s)).sum();
        let mut st = self.role.start(w[0])?;
        for (pos, &sym) in w.iter().enumerate().skip(1) {
            for s in 0..sym {
                if let Some(t) = self.role.step(pos, st, s) {
                    idx += self.ways[pos + 1][t];
                }
            }
            st = self.role.step(pos, st, sym)?;
        }
        (self.role.class_of(st) == Some(self.target)).then_some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::satisfies_role;
    use crate::vt::class_index;

    fn all_words(q: u16, b: usize) -> Vec<Vec<u8>> {
        let mut out = vec![vec![]];
        for _ in 0..b {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..q).map(move |s| {
                        let mut v = w.clone();
                        v.push(s as u8);
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn check(role: Role) {
        let words = all_words(role.q, role.b);
        let census = role.census();
        let mut expect = vec![0u128; census.len()];
        for w in &words {
            if satisfies_role(role.kind, role.q, role.label, w) {
                expect[class_index(w, role.q)] += 1;
            }
        }
        assert_eq!(census, expect, "{role:?}");
        for (k, &n) in census.iter().enumerate() {
            let params = if role.q == 2 {
                VtParams::binary(role.b, k as u32).unwrap()
            } else {
                let qq = role.q as usize;
                VtParams::new(role.b, role.q, (k / qq) as u32, Some((k % qq) as u32)).unwrap()
            };
            let r = Ranker::new(role, &params);
            assert_eq!(r.total(), n);
            let members: Vec<&Vec<u8>> = words
                .iter()
                .filter(|w| satisfies_role(role.kind, role.q, role.label, w) && params.contains(w))
                .collect();
            for (i, w) in members.iter().enumerate() {
                assert_eq!(r.unrank(i as u128).as_ref(), Some(*w));
                assert_eq!(r.rank(w), Some(i as u128));
            }
            assert_eq!(r.unrank(n), None);
        }
        for w in &words {
            if !satisfies_role(role.kind, role.q, role.label, w) {
                let params = VtParams::of(w, role.q).unwrap();
                assert_eq!(Ranker::new(role, &params).rank(w), None);
            }
        }
    }

    #[test]
    fn matches_brute_force() {
        for kind in ChannelKind::ALL {
            for (q, b) in [
                (2u16, kind.min_b()),
                (2, 9),
                (3, kind.min_b()),
                (4, 5.max(kind.min_b())),
            ] {
                for label in 0..kind.role_count(q) {
                    check(Role { kind, q, b, label });
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let role = Role {
            kind: ChannelKind::Deletion,
            q: 2,
            b: 200,
            label: 0,
        };
        assert!(role.check_budget().is_err());
        let role = Role { b: 16, q: 4, ..role };
        assert!(role.check_budget().is_ok());
    }
}
