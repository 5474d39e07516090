//! Zero-error verification of built codes and the Liu-Mitzenmacher
//! sufficient conditions for segmented insertion codes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::Duration;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{apply, options_per_segment, sample_pattern, split_seed, EditPattern, PatternSpace};
use crate::code::SegmentedCode;
use crate::decoder::decode;
use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::vt::i1_set;

/// Default cap on decode operations for exhaustive runs.
pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// Edit probability per segment used by [`verify_sampled`].
pub const DEFAULT_P_EDIT: f64 = 0.5;
/// Number of violations kept verbatim in a report.
pub const MAX_RECORDED: usize = 100;

const CHUNK: u128 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Decoded(Seq),
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub message: Vec<usize>,
    pub codeword: Seq,
    pub pattern: EditPattern,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub mode: Mode,
    pub k: usize,
    pub codewords_tested: u128,
    pub patterns_tested: u128,
    pub decodes: u128,
    pub violation_count: u128,
    /// The first [`MAX_RECORDED`] violations in enumeration order.
    pub violations: Vec<Violation>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn is_zero_error(&self) -> bool {
        self.violation_count == 0
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            Mode::Exhaustive => writeln!(f, "mode=exhaustive k={}", self.k)?,
            Mode::Sampled { seed } => writeln!(f, "mode=sampled k={} seed={seed}", self.k)?,
        }
        writeln!(f, "codewords_tested={}", self.codewords_tested)?;
        writeln!(f, "patterns_tested={}", self.patterns_tested)?;
        writeln!(f, "decodes={}", self.decodes)?;
        writeln!(f, "violations={}", self.violation_count)?;
        for v in &self.violations {
            let msg: Vec<String> = v.message.iter().map(|m| m.to_string()).collect();
            write!(
                f,
                "violation message={} x={} pattern={} ",
                msg.join(","),
                v.codeword,
                v.pattern
            )?;
            match &v.outcome {
                Outcome::Decoded(s) => writeln!(f, "decoded={s}")?,
                Outcome::Failed(e) => writeln!(f, "error={e}")?,
            }
        }
        writeln!(f, "elapsed_ms={}", self.elapsed.as_millis())
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn timer() -> impl Fn() -> Duration {
    let t = std::time::Instant::now();
    move || t.elapsed()
}

#[cfg(target_arch = "wasm32")]
fn timer() -> impl Fn() -> Duration {
    || Duration::ZERO
}

/// Runs one trial and returns the violation, if any.
fn trial(code: &SegmentedCode, message: &[usize], pattern: &EditPattern) -> Option<Violation> {
    let x = code.encode(message).expect("message indices are in range");
    let y = apply(&x, pattern, code.b()).expect("patterns fit the code");
    let outcome = match decode(code, &y, message.len()) {
        Ok(d) if d.x == x && d.trace.implied_len(code.b()) == y.len() => return None,
        Ok(d) => Outcome::Decoded(d.x),
        Err(e) => Outcome::Failed(e),
    };
    Some(Violation {
        message: message.to_vec(),
        codeword: x,
        pattern: pattern.clone(),
        outcome,
    })
}

fn message_at(ms: usize, k: usize, mut index: u128) -> Vec<usize> {
    let mut m = vec![0; k];
    for d in m.iter_mut().rev() {
        *d = (index % ms as u128) as usize;
        index /= ms as u128;
    }
    m
}

#[derive(Default)]
struct Tally {
    count: u128,
    kept: Vec<Violation>,
}

impl Tally {
    fn push(&mut self, v: Violation) {
        self.count += 1;
        if self.kept.len() < MAX_RECORDED {
            self.kept.push(v);
        }
    }

    fn merge(parts: Vec<Tally>) -> Tally {
        let mut out = Tally::default();
        for p in parts {
            out.count += p.count;
            let room = MAX_RECORDED - out.kept.len();
            out.kept.extend(p.kept.into_iter().take(room));
        }
        out
    }
}

fn run_chunks(n: u128, f: impl Fn(u128, u128) -> Tally + Sync) -> Tally {
    let chunks = n.div_ceil(CHUNK);
    let range = move |c: u128| (c * CHUNK, ((c + 1) * CHUNK).min(n));
    #[cfg(feature = "parallel")]
    let parts: Vec<Tally> = {
        use rayon::prelude::*;
        (0..chunks as u64)
            .into_par_iter()
            .map(|c| {
                let (lo, hi) = range(c as u128);
                f(lo, hi)
            })
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Tally> = (0..chunks)
        .map(|c| {
            let (lo, hi) = range(c);
            f(lo, hi)
        })
        .collect();
    Tally::merge(parts)
}

/// Decodes every message under every edit pattern, using the default budget.
pub fn verify_exhaustive(code: &SegmentedCode, k: usize) -> Result<VerifyReport> {
    verify_exhaustive_with(code, k, DEFAULT_BUDGET)
}

/// Like [`verify_exhaustive`], refusing runs of more than `budget` decodes.
pub fn verify_exhaustive_with(code: &SegmentedCode, k: usize, budget: u128) -> Result<VerifyReport> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let clock = timer();
    let messages = (code.ms() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let patterns = PatternSpace::new(code.kind(), code.q(), code.b(), k);
    let total = messages.saturating_mul(patterns.len());
    if total > budget {
        return Err(Error::Budget {
            what: "exhaustive verification (use sampled verification instead)",
            needed: total,
            budget,
        });
    }
    let p = patterns.len();
    let tally = run_chunks(total, |lo, hi| {
        let mut t = Tally::default();
        let mut current: Option<(u128, Vec<usize>)> = None;
        for idx in lo..hi {
            let mi = idx / p;
            if current.as_ref().map(|c| c.0) != Some(mi) {
                current = Some((mi, message_at(code.ms(), k, mi)));
            }
            let msg = &current.as_ref().unwrap().1;
            if let Some(v) = trial(code, msg, &patterns.get(idx % p)) {
                t.push(v);
            }
        }
        t
    });
    Ok(VerifyReport {
        mode: Mode::Exhaustive,
        k,
        codewords_tested: messages,
        patterns_tested: p,
        decodes: total,
        violation_count: tally.count,
        violations: tally.kept,
        elapsed: clock(),
    })
}

/// Decodes `n_messages` random messages, each under `n_patterns` random
/// edit patterns, using [`DEFAULT_P_EDIT`].
pub fn verify_sampled(
    code: &SegmentedCode,
    k: usize,
    n_messages: u64,
    n_patterns: u64,
    seed: u64,
) -> Result<VerifyReport> {
    verify_sampled_with(code, k, n_messages, n_patterns, DEFAULT_P_EDIT, seed)
}

/// Sampled verification. Message `m` draws its indices from
/// `split_seed(seed, m)`; its `j`-th pattern uses seed
/// `split_seed(split_seed(seed, m), j + 1)`.
pub fn verify_sampled_with(
    code: &SegmentedCode,
    k: usize,
    n_messages: u64,
    n_patterns: u64,
    p_edit: f64,
    seed: u64,
) -> Result<VerifyReport> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p_edit) {
        return Err(Error::param(format!("p_edit={p_edit} must be in [0, 1]")));
    }
    let clock = timer();
    let total = n_messages as u128 * n_patterns as u128;
    let tally = run_chunks(n_messages as u128, |lo, hi| {
        let mut t = Tally::default();
        for m in lo..hi {
            let ms = split_seed(seed, m as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(ms);
            let msg: Vec<usize> = (0..k).map(|_| rng.gen_range(0..code.ms())).collect();
            for j in 0..n_patterns {
                let pat = sample_pattern(code.kind(), code.q(), code.b(), k, p_edit, split_seed(ms, j + 1))
                    .expect("p_edit checked above");
                if let Some(v) = trial(code, &msg, &pat) {
                    t.push(v);
                }
            }
        }
        t
    });
    Ok(VerifyReport {
        mode: Mode::Sampled { seed },
        k,
        codewords_tested: n_messages as u128,
        patterns_tested: n_patterns as u128,
        decodes: total,
        violation_count: tally.count,
        violations: tally.kept,
        elapsed: clock(),
    })
}

/// Per-segment pattern count times the number of codewords, for `k` segments.
pub fn exhaustive_cost(code: &SegmentedCode, k: usize) -> u128 {
    let per = options_per_segment(code.kind(), code.q(), code.b()) as u128;
    (code.ms() as u128 * per)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX)
}

/// Outcome of checking the three Liu-Mitzenmacher conditions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LmReport {
    pub condition1_ok: bool,
    pub condition2_ok: bool,
    pub condition3_ok: bool,
    /// `(u, v, w)` with `w` in both insertion balls.
    pub witness1: Option<(Seq, Seq, Seq)>,
    /// `(u, v, w)` with `w` a prefix of a supersequence of `u` and a suffix
    /// of a supersequence of `v`.
    pub witness2: Option<(Seq, Seq, Seq)>,
    /// A codeword of the alternating form.
    pub witness3: Option<Seq>,
}

impl LmReport {
    pub fn all_ok(&self) -> bool {
        self.condition1_ok && self.condition2_ok && self.condition3_ok
    }
}

impl fmt::Display for LmReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = |b: bool| if b { "pass" } else { "fail" };
        write!(f, "condition1={}", ok(self.condition1_ok))?;
        if let Some((u, v, w)) = &self.witness1 {
            write!(f, " u={u} v={v} common={w}")?;
        }
        writeln!(f)?;
        write!(f, "condition2={}", ok(self.condition2_ok))?;
        if let Some((u, v, w)) = &self.witness2 {
            write!(f, " u={u} v={v} common={w}")?;
        }
        writeln!(f)?;
        write!(f, "condition3={}", ok(self.condition3_ok))?;
        if let Some(w) = &self.witness3 {
            write!(f, " word={w}")?;
        }
        writeln!(f)
    }
}

/// True when every run after the first has length one, i.e. the word is
/// `y*(zy)*` or `y*(zy)*z`.
pub fn is_alternating_tail(w: &[u8]) -> bool {
    let first = w.iter().take_while(|&&s| Some(&s) == w.first()).count();
    w[first.min(w.len())..].windows(2).all(|p| p[0] != p[1])
}

/// Checks a binary codebook of equal-length words against the three conditions.
pub fn lm_check(codebook: &[Seq]) -> Result<LmReport> {
    let words: BTreeSet<&Seq> = codebook.iter().collect();
    let words: Vec<&Seq> = words.into_iter().collect();
    if let Some(w) = words.first() {
        for s in &words {
            if s.q() != 2 {
                return Err(Error::param("lm_check needs binary words"));
            }
            if s.len() != w.len() {
                return Err(Error::LengthMismatch {
                    expected: w.len(),
                    found: s.len(),
                });
            }
        }
    }
    let balls: Vec<BTreeSet<Seq>> = words.iter().map(|w| i1_set(w)).collect();
    let mut report = LmReport {
        condition1_ok: true,
        condition2_ok: true,
        condition3_ok: true,
        ..LmReport::default()
    };

    let mut owner: HashMap<&[u8], usize> = HashMap::new();
    'c1: for (i, ball) in balls.iter().enumerate() {
        for s in ball {
            if let Some(&j) = owner.get(s.symbols()) {
                report.condition1_ok = false;
                report.witness1 = Some((words[j].clone(), words[i].clone(), s.clone()));
                break 'c1;
            }
            owner.insert(s.symbols(), i);
        }
    }

    // suffix string -> up to two distinct owners
    let mut suffixes: HashMap<&[u8], [Option<usize>; 2]> = HashMap::new();
    for (j, ball) in balls.iter().enumerate() {
        for s in ball {
            let e = suffixes.entry(&s.symbols()[1..]).or_default();
            if e[0].is_none() {
                e[0] = Some(j);
            } else if e[0] != Some(j) && e[1].is_none() {
                e[1] = Some(j);
            }
        }
    }
    'c2: for (i, ball) in balls.iter().enumerate() {
        for s in ball {
            let pre = &s.symbols()[..s.len() - 1];
            if let Some(e) = suffixes.get(pre) {
                if let Some(j) = e.iter().flatten().copied().find(|&j| j != i) {
                    report.condition2_ok = false;
                    report.witness2 =
                        Some((words[i].clone(), words[j].clone(), Seq::from_raw(2, pre.to_vec())));
                    break 'c2;
                }
            }
        }
    }

    if let Some(w) = words.iter().find(|w| is_alternating_tail(w.symbols())) {
        report.condition3_ok = false;
        report.witness3 = Some((*w).clone());
    }
    Ok(report)
}
