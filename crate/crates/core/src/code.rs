//! Construction of the three segmented code families.
//!
//! Each family draws a segment's codeword from a subset of one VT class
//! whose members carry a fixed prefix (and, for insertion-deletion codes, a
//! constant suffix). For every role the largest constrained class is kept
//! and all roles are trimmed to the same size `M_s`, so that a message is
//! a list of per-segment indices in `[0, M_s)`.

use std::fmt;
use std::str::FromStr;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rank::{Ranker, Role};
use crate::seq::{check_q, Seq};
use crate::vt::VtParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Deletion,
    Insertion,
    InsDel,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [ChannelKind::Deletion, ChannelKind::Insertion, ChannelKind::InsDel];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Deletion => "deletion",
            ChannelKind::Insertion => "insertion",
            ChannelKind::InsDel => "insdel",
        }
    }

    /// Smallest segment length the construction supports.
    pub fn min_b(self) -> usize {
        match self {
            ChannelKind::Deletion => 4,
            ChannelKind::Insertion => 6,
            ChannelKind::InsDel => 8,
        }
    }

    /// Number of codeword sets (roles) used by the construction.
    pub fn role_count(self, q: u16) -> usize {
        match self {
            ChannelKind::Deletion if q > 2 => q as usize,
            ChannelKind::Deletion | ChannelKind::InsDel => 2,
            ChannelKind::Insertion => 1,
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "deletion" | "del" => Ok(ChannelKind::Deletion),
            "insertion" | "ins" => Ok(ChannelKind::Insertion),
            "insdel" | "insertion-deletion" => Ok(ChannelKind::InsDel),
            other => Err(Error::param(format!("unknown channel kind {other:?}"))),
        }
    }
}

const INSDEL_PREFIX: [[u8; 5]; 2] = [[0, 0, 1, 1, 1], [1, 1, 0, 0, 0]];

/// The fixed prefix of an insertion-deletion role (label 0 or 1).
pub fn insdel_prefix(label: usize) -> [u8; 5] {
    INSDEL_PREFIX[label]
}

fn check_params(kind: ChannelKind, q: u16, b: usize) -> Result<()> {
    check_q(q)?;
    if b < kind.min_b() {
        return Err(Error::param(format!(
            "{kind} codes need b >= {}, got b={b}",
            kind.min_b()
        )));
    }
    Role { kind, q, b, label: 0 }.check_budget()
}

/// Direct check of the prefix/suffix constraint of `label` for `kind`.
pub fn satisfies_role(kind: ChannelKind, q: u16, label: usize, w: &[u8]) -> bool {
    let b = w.len();
    match kind {
        ChannelKind::Deletion => {
            if b < 2 {
                return false;
            }
            if q == 2 {
                let p = label as u8;
                w[0] == p && w[1] == p
            } else {
                let j = label as u8;
                w[0] != j && w[1] != j
            }
        }
        ChannelKind::Insertion => {
            if q == 2 {
                b >= 4
                    && w[..2] == [0, 1]
                    && w[2..4] != [0, 1]
                    && !(w[0] == 0 && w[1..].iter().all(|&s| s == 1))
            } else {
                b >= 3 && w[..3] == [0, 0, 1]
            }
        }
        ChannelKind::InsDel => {
            b >= 8
                && label < 2
                && w[..5] == INSDEL_PREFIX[label]
                && w[b - 3] == w[b - 2]
                && w[b - 2] == w[b - 1]
        }
    }
}

/// Maximal constrained class of one role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleSize {
    pub label: usize,
    pub params: VtParams,
    pub size: usize,
}

/// Per-role maximal class sizes and the resulting codewords per segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSizes {
    pub kind: ChannelKind,
    pub q: u16,
    pub b: usize,
    pub roles: Vec<RoleSize>,
    pub ms: usize,
}

fn role_size(kind: ChannelKind, q: u16, b: usize, label: usize) -> Result<RoleSize> {
    let counts = Role { kind, q, b, label }.census();
    // first maximum in (a, c) order is the smallest a, then smallest c
    let (best, &size) = counts
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, &n)| n)
        .expect("at least one class");
    let size = usize::try_from(size)
        .map_err(|_| Error::param(format!("class of size {size} does not fit in memory indices")))?;
    let params = if q == 2 {
        VtParams::binary(b, best as u32)?
    } else {
        let qq = q as usize;
        VtParams::new(b, q, (best / qq) as u32, Some((best % qq) as u32))?
    };
    Ok(RoleSize { label, params, size })
}

fn map_roles<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(&f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sizes of the maximal constrained classes, without materialising codewords.
pub fn set_sizes(kind: ChannelKind, q: u16, b: usize) -> Result<SetSizes> {
    check_params(kind, q, b)?;
    let roles = map_roles(kind.role_count(q), |label| role_size(kind, q, b, label))?;
    let ms = roles.iter().map(|r| r.size).min().unwrap_or(0);
    if ms == 0 {
        return Err(Error::EmptyCode);
    }
    Ok(SetSizes {
        kind,
        q,
        b,
        roles,
        ms,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Words {
    Listed(Vec<Seq>),
    Ranked(Arc<Ranker>),
}

/// Codewords of one role: a trimmed subset of a single VT class.
///
/// Built codes keep the set implicit: codeword `i` is the `i`-th member of
/// the constrained class in lexicographic order. Codes assembled from
/// explicit lists (for example a loaded codebook) keep the list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSet {
    label: usize,
    params: VtParams,
    len: usize,
    words: Words,
}

impl CodeSet {
    pub fn label(&self) -> usize {
        self.label
    }

    pub fn params(&self) -> &VtParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Codeword at position `i` of the sorted set.
    pub fn codeword(&self, i: usize) -> Option<Seq> {
        if i >= self.len {
            return None;
        }
        match &self.words {
            Words::Listed(v) => Some(v[i].clone()),
            Words::Ranked(r) => r.unrank(i as u128).map(|w| Seq::from_raw(self.params.q(), w)),
        }
    }

    /// All codewords in order.
    pub fn iter(&self) -> impl Iterator<Item = Seq> + '_ {
        (0..self.len).map(|i| self.codeword(i).expect("index in range"))
    }

    pub fn to_vec(&self) -> Vec<Seq> {
        self.iter().collect()
    }

    /// Position of `w` in the sorted set.
    pub fn index_of(&self, w: &[u8]) -> Option<usize> {
        match &self.words {
            Words::Listed(v) => v.binary_search_by(|c| c.symbols().cmp(w)).ok(),
            Words::Ranked(r) => r.rank(w).filter(|&i| i < self.len as u128).map(|i| i as usize),
        }
    }
}

/// An immutable segmented code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedCode {
    kind: ChannelKind,
    q: u16,
    b: usize,
    ms: usize,
    sets: Vec<CodeSet>,
}

impl SegmentedCode {
    /// Assembles a code from explicit sets, checking every structural invariant:
    /// role count and labels, class membership, role constraints, strictly
    /// sorted codewords and equal set sizes.
    pub fn from_sets(kind: ChannelKind, q: u16, b: usize, sets: Vec<(VtParams, Vec<Seq>)>) -> Result<Self> {
        check_q(q)?;
        if b < kind.min_b() {
            return Err(Error::param(format!(
                "{kind} codes need b >= {}, got b={b}",
                kind.min_b()
            )));
        }
        let code = Self::from_sets_unchecked(kind, q, b, sets)?;
        for set in &code.sets {
            if set.params.b() != b || set.params.q() != q {
                return Err(Error::param(format!(
                    "set {} has parameters for b={} q={}",
                    set.label,
                    set.params.b(),
                    set.params.q()
                )));
            }
            let Words::Listed(words) = &set.words else {
                continue;
            };
            for (i, w) in words.iter().enumerate() {
                if w.len() != b || w.q() != q {
                    return Err(Error::param(format!(
                        "set {} codeword {i} has the wrong shape",
                        set.label
                    )));
                }
                if !set.params.contains(w.symbols()) {
                    return Err(Error::param(format!(
                        "set {} codeword {w} is not in its VT class",
                        set.label
                    )));
                }
                if !satisfies_role(kind, q, set.label, w.symbols()) {
                    return Err(Error::param(format!(
                        "set {} codeword {w} violates the {kind} role constraint",
                        set.label
                    )));
                }
            }
            if words.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::param(format!(
                    "set {} codewords are not strictly sorted",
                    set.label
                )));
            }
        }
        Ok(code)
    }

    /// Assembles a code checking only shape (role count, equal set sizes).
    /// Used for experiments such as unconstrained control codes.
    pub fn from_sets_unchecked(
        kind: ChannelKind,
        q: u16,
        b: usize,
        sets: Vec<(VtParams, Vec<Seq>)>,
    ) -> Result<Self> {
        if sets.len() != kind.role_count(q) {
            return Err(Error::param(format!(
                "{kind} codes over q={q} use {} sets, got {}",
                kind.role_count(q),
                sets.len()
            )));
        }
        let ms = sets.first().map_or(0, |s| s.1.len());
        if ms == 0 {
            return Err(Error::EmptyCode);
        }
        if sets.iter().any(|s| s.1.len() != ms) {
            return Err(Error::param("all sets must hold the same number of codewords"));
        }
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(label, (params, codewords))| CodeSet {
                label,
                params,
                len: codewords.len(),
                words: Words::Listed(codewords),
            })
            .collect();
        Ok(SegmentedCode { kind, q, b, ms, sets })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Codewords per segment.
    pub fn ms(&self) -> usize {
        self.ms
    }

    pub fn sets(&self) -> &[CodeSet] {
        &self.sets
    }

    pub fn set(&self, label: usize) -> &CodeSet {
        &self.sets[label]
    }

    /// Rate per segment, `log2(M_s) / b`.
    pub fn rate(&self) -> f64 {
        (self.ms as f64).log2() / self.b as f64
    }

    pub fn next_role(&self, prev_last: Option<u8>) -> usize {
        next_role(self.kind, self.q, prev_last)
    }

    /// Concatenates the codewords selected by `message`, choosing each
    /// segment's role from the last symbol of the previous segment.
    pub fn encode(&self, message: &[usize]) -> Result<Seq> {
        if message.is_empty() {
            return Err(Error::param("message must contain at least one index"));
        }
        let mut out = Vec::with_capacity(message.len() * self.b);
        let mut prev = None;
        for (i, &m) in message.iter().enumerate() {
            if m >= self.ms {
                return Err(Error::param(format!(
                    "message index {m} at segment {} is out of range 0..{}",
                    i + 1,
                    self.ms
                )));
            }
            let w = self.sets[self.next_role(prev)]
                .codeword(m)
                .expect("index checked against M_s");
            out.extend_from_slice(w.symbols());
            prev = w.symbols().last().copied();
        }
        Ok(Seq::from_raw(self.q, out))
    }

    /// Inverse of [`encode`](Self::encode) for an undistorted word.
    pub fn message_of(&self, x: &Seq) -> Result<Vec<usize>> {
        if !x.len().is_multiple_of(self.b) {
            return Err(Error::LengthMismatch {
                expected: (x.len() / self.b + 1) * self.b,
                found: x.len(),
            });
        }
        let mut prev = None;
        x.symbols()
            .chunks(self.b)
            .enumerate()
            .map(|(i, seg)| {
                let role = self.next_role(prev);
                prev = seg.last().copied();
                self.sets[role]
                    .index_of(seg)
                    .ok_or_else(|| Error::param(format!("segment {} is not a codeword of set {role}", i + 1)))
            })
            .collect()
    }
}

/// Role of the next segment given the last symbol of the previous one
/// (`None` for the first segment).
pub fn next_role(kind: ChannelKind, q: u16, prev_last: Option<u8>) -> usize {
    let Some(s) = prev_last else { return 0 };
    match kind {
        ChannelKind::Insertion => 0,
        ChannelKind::Deletion if q > 2 => s as usize,
        ChannelKind::Deletion => 1 - (s as usize & 1),
        // binary: last bit 0 -> label 1, 1 -> label 0; q-ary: even -> 1, odd -> 0
        ChannelKind::InsDel => usize::from(s % 2 == 0),
    }
}

/// Builds the code for `(kind, q, b)`.
pub fn build_code(kind: ChannelKind, q: u16, b: usize) -> Result<SegmentedCode> {
    let sizes = set_sizes(kind, q, b)?;
    let ms = sizes.ms;
    let sets = map_roles(sizes.roles.len(), |label| {
        let params = sizes.roles[label].params;
        let ranker = Ranker::new(Role { kind, q, b, label }, &params);
        Ok(CodeSet {
            label,
            params,
            len: ms,
            words: Words::Ranked(Arc::new(ranker)),
        })
    })?;
    Ok(SegmentedCode { kind, q, b, ms, sets })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        assert_eq!(build_code(ChannelKind::Deletion, 2, 8).unwrap().ms(), 8);
        assert_eq!(build_code(ChannelKind::Insertion, 2, 16).unwrap().ms(), 724);
        assert_eq!(build_code(ChannelKind::InsDel, 2, 15).unwrap().ms(), 16);
        assert_eq!(set_sizes(ChannelKind::Deletion, 2, 16).unwrap().ms, 964);
        assert_eq!(set_sizes(ChannelKind::InsDel, 2, 8).unwrap().ms, 1);
    }

    #[test]
    fn below_minimum_is_rejected() {
        for kind in ChannelKind::ALL {
            assert!(matches!(
                build_code(kind, 2, kind.min_b() - 1),
                Err(Error::Parameter(_))
            ));
        }
        assert!(matches!(
            set_sizes(ChannelKind::Deletion, 255, 15),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn next_role_rules() {
        use ChannelKind::*;
        assert_eq!(next_role(Deletion, 2, None), 0);
        assert_eq!(next_role(Deletion, 2, Some(1)), 0);
        assert_eq!(next_role(Deletion, 2, Some(0)), 1);
        assert_eq!(next_role(Deletion, 4, Some(3)), 3);
        assert_eq!(next_role(Insertion, 2, Some(1)), 0);
        assert_eq!(next_role(InsDel, 2, Some(0)), 1);
        assert_eq!(next_role(InsDel, 2, Some(1)), 0);
        assert_eq!(next_role(InsDel, 3, Some(2)), 1);
        assert_eq!(next_role(InsDel, 4, Some(3)), 0);
        for kind in ChannelKind::ALL {
            assert_eq!(next_role(kind, 3, None), 0);
        }
    }

    #[test]
    fn encode_alternates_prefixes() {
        let code = build_code(ChannelKind::Deletion, 2, 8).unwrap();
        let x = code.encode(&[0, 0, 0]).unwrap();
        assert_eq!(x.len(), 24);
        let s = x.symbols();
        assert_eq!(&s[..8], code.set(0).codeword(0).unwrap().symbols());
        let last = s[7];
        assert_eq!(s[8], 1 - last);
        assert_eq!(s[9], 1 - last);
        assert_eq!(code.message_of(&x).unwrap(), vec![0, 0, 0]);
        assert!(code.encode(&[8]).is_err());
        assert!(code.encode(&[]).is_err());
    }

    #[test]
    fn from_sets_rejects_constraint_violations() {
        let code = build_code(ChannelKind::Deletion, 2, 8).unwrap();
        let mut sets: Vec<_> = code.sets().iter().map(|s| (*s.params(), s.to_vec())).collect();
        sets.swap(0, 1);
        assert!(SegmentedCode::from_sets(ChannelKind::Deletion, 2, 8, sets).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("insdel".parse::<ChannelKind>().unwrap(), ChannelKind::InsDel);
        assert_eq!("Deletion".parse::<ChannelKind>().unwrap(), ChannelKind::Deletion);
        assert!("burst".parse::<ChannelKind>().is_err());
    }
}
