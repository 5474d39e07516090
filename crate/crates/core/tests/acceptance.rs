//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach
//! stdout. Criteria listed in `KNOWN_RED` are expected to fail; the run
//! still fails if such a criterion's failure changes character or if it
//! unexpectedly passes.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use segcode::bounds::{chernoff_tail_check, lower_bound_ceil, rate_lower_bound, rate_upper_bound};
use segcode::channel::{apply, EditPattern};
use segcode::decoder::explains;
use segcode::verify::{lm_check, verify_exhaustive, verify_sampled, Outcome, VerifyReport};
use segcode::vt::{d1_set, decode_one_deletion, decode_one_insertion, enumerate_vt, i1_set, VtParams};
use segcode::{build_code, set_sizes, ChannelKind, SegmentedCode, Seq};

/// Criterion 4 cannot pass: q-ary insertion codes built from the prefix
/// constraint alone admit pairs of codewords with a common channel output.
const KNOWN_RED: &[usize] = &[4];

struct Outcome_ {
    pass: bool,
    detail: String,
    /// For a known-red criterion: whether the failure is the expected one.
    expected_failure: bool,
}

fn pass(detail: String) -> Outcome_ {
    Outcome_ {
        pass: true,
        detail,
        expected_failure: false,
    }
}

fn fail(detail: String) -> Outcome_ {
    Outcome_ {
        pass: false,
        detail,
        expected_failure: false,
    }
}

// Published counts for q = 2, b = 8..24: (count, bracket) per channel.
const DELETION: [(u64, u64); 17] = [
    (8, 8),
    (13, 13),
    (24, 24),
    (44, 43),
    (79, 79),
    (147, 147),
    (276, 274),
    (512, 512),
    (964, 964),
    (1824, 1821),
    (3450, 3450),
    (6554, 6554),
    (12490, 12484),
    (23832, 23832),
    (45591, 45591),
    (87392, 87382),
    (167773, 167773),
];
const INSERTION: [(u64, u64); 17] = [
    (6, 6),
    (10, 10),
    (18, 18),
    (33, 32),
    (60, 59),
    (111, 110),
    (208, 205),
    (384, 384),
    (724, 723),
    (1368, 1366),
    (2588, 2587),
    (4916, 4916),
    (9369, 9363),
    (17847, 17874),
    (34194, 34193),
    (65544, 65536),
    (125831, 125830),
];
const INSDEL: [(u64, u64); 17] = [
    (1, 1),
    (2, 1),
    (2, 1),
    (2, 2),
    (4, 3),
    (6, 5),
    (12, 9),
    (16, 16),
    (34, 31),
    (59, 57),
    (114, 108),
    (206, 205),
    (399, 391),
    (746, 745),
    (1435, 1425),
    (2736, 2731),
    (5257, 5243),
];

fn table() -> [(ChannelKind, &'static [(u64, u64); 17]); 3] {
    [
        (ChannelKind::Deletion, &DELETION),
        (ChannelKind::Insertion, &INSERTION),
        (ChannelKind::InsDel, &INSDEL),
    ]
}

fn criterion1() -> Outcome_ {
    let mut mismatches = Vec::new();
    let mut flagged = String::new();
    for (kind, rows) in table() {
        for (i, &(published, _)) in rows.iter().enumerate() {
            let b = 8 + i;
            let ms = set_sizes(kind, 2, b).unwrap().ms as u64;
            if kind == ChannelKind::Insertion && b == 21 {
                flagged = format!(
                    "(insertion, b=21) computed {ms}, printed {published}, printed bracket {}",
                    rows[i].1
                );
                continue;
            }
            if ms != published {
                mismatches.push(format!("({kind}, b={b}) computed {ms} vs {published}"));
            }
        }
    }
    let detail = format!("50/51 rows exact; flagged {flagged}");
    if mismatches.is_empty() {
        pass(detail)
    } else {
        fail(mismatches.join("; "))
    }
}

fn criterion2() -> Outcome_ {
    let mut bad = Vec::new();
    for (kind, rows) in table() {
        for (i, &(_, bracket)) in rows.iter().enumerate() {
            let b = 8 + i;
            let got = lower_bound_ceil(kind, 2, b).unwrap();
            if got != u128::from(bracket) {
                bad.push(format!("({kind}, b={b}) {got} vs {bracket}"));
            }
        }
    }
    if bad.is_empty() {
        pass("51/51 brackets exact".into())
    } else {
        fail(bad.join("; "))
    }
}

fn criterion3() -> Outcome_ {
    use ChannelKind::*;
    let runs = [
        (Deletion, 2, 8, 2),
        (Deletion, 2, 10, 2),
        (Deletion, 2, 12, 2),
        (Deletion, 2, 8, 3),
        (Insertion, 2, 8, 2),
        (Insertion, 2, 10, 2),
        (Insertion, 2, 8, 3),
        (InsDel, 2, 8, 3),
        (InsDel, 2, 10, 3),
        (Deletion, 3, 8, 2),
        (Insertion, 3, 8, 2),
        (InsDel, 3, 9, 2),
    ];
    let mut decodes = 0u128;
    let mut bad = Vec::new();
    for (kind, q, b, k) in runs {
        let code = build_code(kind, q, b).unwrap();
        let r = verify_exhaustive(&code, k).unwrap();
        decodes += r.decodes;
        if !r.is_zero_error() {
            bad.push(format!(
                "({kind}, q={q}, b={b}, k={k}) {} violations",
                r.violation_count
            ));
        }
    }
    if bad.is_empty() {
        pass(format!(
            "{} configurations, {decodes} decodes, zero violations",
            runs.len()
        ))
    } else {
        fail(bad.join("; "))
    }
}

fn certified(code: &SegmentedCode, r: &VerifyReport) -> bool {
    r.violations.iter().all(|v| match &v.outcome {
        Outcome::Decoded(xh) => {
            let y = apply(&v.codeword, &v.pattern, code.b()).unwrap();
            *xh != v.codeword && explains(code, xh, &y)
        }
        Outcome::Failed(_) => false,
    })
}

fn criterion4() -> Outcome_ {
    let mut parts = Vec::new();
    let mut clean = true;
    let mut only_confusions = true;
    for q in [2u16, 4] {
        for kind in ChannelKind::ALL {
            let code = build_code(kind, q, 16).unwrap();
            let r = verify_sampled(&code, 8, 10_000, 100, 2024).unwrap();
            if !r.is_zero_error() {
                clean = false;
                let ok = certified(&code, &r);
                // anything other than q-ary insertion confusions is a real defect
                only_confusions &= ok && kind == ChannelKind::Insertion && q > 2;
                parts.push(format!(
                    "({kind}, q={q}) {} violations in {} decodes, {} recorded, all confusable pairs: {ok}",
                    r.violation_count,
                    r.decodes,
                    r.violations.len()
                ));
            }
        }
    }
    if clean {
        pass("6 configurations x 10^6 decodes, zero violations".into())
    } else {
        Outcome_ {
            pass: false,
            detail: format!("{}; other configurations clean", parts.join("; ")),
            expected_failure: only_confusions,
        }
    }
}

fn criterion5() -> Outcome_ {
    let mut checks = 0u64;
    for q in [2u16, 3] {
        for b in 2..=9 {
            let classes: Vec<VtParams> = if q == 2 {
                (0..=b as u32).map(|a| VtParams::binary(b, a).unwrap()).collect()
            } else {
                (0..b as u32)
                    .flat_map(|a| (0..3).map(move |c| VtParams::new(b, 3, a, Some(c)).unwrap()))
                    .collect()
            };
            let mut total = 0usize;
            for p in &classes {
                let members = enumerate_vt(p).unwrap();
                total += members.len();
                // oracle: for every received word, the members whose ball holds it
                let mut dels: HashMap<Seq, Vec<&Seq>> = HashMap::new();
                let mut inss: HashMap<Seq, Vec<&Seq>> = HashMap::new();
                for s in &members {
                    for y in d1_set(s) {
                        dels.entry(y).or_default().push(s);
                    }
                    for y in i1_set(s) {
                        inss.entry(y).or_default().push(s);
                    }
                }
                for s in &members {
                    for y in d1_set(s) {
                        if dels[&y] != [s] || decode_one_deletion(&y, p).as_ref() != Ok(s) {
                            return fail(format!("deletion q={q} b={b} {s} -> {y}"));
                        }
                        checks += 1;
                    }
                    for y in i1_set(s) {
                        if inss[&y] != [s] || decode_one_insertion(&y, p).as_ref() != Ok(s) {
                            return fail(format!("insertion q={q} b={b} {s} -> {y}"));
                        }
                        checks += 1;
                    }
                }
            }
            if total != (q as usize).pow(b as u32) {
                return fail(format!("partition q={q} b={b}: {total}"));
            }
        }
    }
    pass(format!(
        "{checks} single-edit decodes agree with the oracle; partitions exact"
    ))
}

fn criterion6() -> Outcome_ {
    for b in 6..=14 {
        let code = build_code(ChannelKind::Insertion, 2, b).unwrap();
        let r = lm_check(&code.set(0).to_vec()).unwrap();
        if !r.all_ok() {
            return fail(format!("b={b}: {r}"));
        }
    }
    let alt = lm_check(&[Seq::parse("0101", 2).unwrap()]).unwrap();
    let pair = lm_check(&[Seq::parse("00", 2).unwrap(), Seq::parse("01", 2).unwrap()]).unwrap();
    if alt.condition3_ok || alt.witness3.is_none() || pair.condition1_ok || pair.witness1.is_none() {
        return fail("negative cases not detected".into());
    }
    pass("insertion codebooks b=6..14 satisfy all three conditions; negative witnesses found".into())
}

fn criterion7() -> Outcome_ {
    let mut points = 0;
    for q in [2u16, 3, 4] {
        for b in [32usize, 64, 128, 256] {
            let tail = chernoff_tail_check(q, b, segcode::bounds::default_kappa(q, b)).unwrap();
            for k in [1usize, 8, 100, 1_000_000] {
                let rep = rate_upper_bound(q, b, k, None, None).unwrap();
                let Some(upper) = rep.rate_upper else { continue };
                points += 1;
                if !tail.holds {
                    return fail(format!("tail inequality fails at q={q} b={b}"));
                }
                for kind in ChannelKind::ALL {
                    let lower = rate_lower_bound(kind, q, b).unwrap();
                    // largest b' <= b whose code sizes fit the counting range
                    let (bb, ms) = (kind.min_b()..=b)
                        .rev()
                        .find_map(|bb| set_sizes(kind, q, bb).ok().map(|s| (bb, s.ms)))
                        .unwrap();
                    let achieved = (ms as f64).log2() / bb as f64;
                    if lower > upper || achieved > upper {
                        return fail(format!(
                            "({kind}, q={q}, b={b}, k={k}): lower {lower:.4}, achieved {achieved:.4} at b={bb}, upper {upper:.4}"
                        ));
                    }
                }
            }
        }
    }
    pass(format!(
        "{points} valid (q, b, k) points; lower and achieved rates below the converse, tail inequality holds"
    ))
}

fn criterion8() -> Outcome_ {
    let x = Seq::parse("011100010", 2).unwrap();
    let cases = [
        ("seg1:del@3;seg2:del@3;seg3:none", "0110010"),
        ("seg1:ins@3=1;seg2:ins@0=0;seg3:ins@2=1", "011101000110"),
        ("seg1:del@3;seg2:ins@0=0;seg3:ins@2=1", "0101000110"),
    ];
    for (pat, want) in cases {
        let got = apply(&x, &EditPattern::parse(pat, 3).unwrap(), 3)
            .unwrap()
            .to_string();
        if got != want {
            return fail(format!("{pat}: {got} vs {want}"));
        }
    }
    pass("0110010; 011101000110; 0101000110".into())
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, fn() -> Outcome_);
    let criteria: [Criterion; 8] = [
        (1, "codeword counts", criterion1),
        (2, "lower-bound brackets", criterion2),
        (3, "zero-error, exhaustive", criterion3),
        (4, "zero-error, sampled", criterion4),
        (5, "VT primitives vs oracle", criterion5),
        (6, "LM conditions", criterion6),
        (7, "bounds coherence", criterion7),
        (8, "worked examples", criterion8),
    ];
    let mut ok = true;
    for (n, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let secs = t.elapsed().as_secs_f64();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} [{tag}] {name} ({secs:.1}s): {}", o.detail);
        let known = KNOWN_RED.contains(&n);
        ok &= if known {
            !o.pass && o.expected_failure
        } else {
            o.pass
        };
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected result");
        ExitCode::FAILURE
    }
}
