use proptest::prelude::*;

use segcode::channel::{apply, sample_pattern, EditPattern, SegmentEdit};
use segcode::code::satisfies_role;
use segcode::vt::vt_member;
use segcode::{build_code, decode, ChannelKind, InferredEdit, SegmentedCode};

fn kind() -> impl Strategy<Value = ChannelKind> {
    prop_oneof![
        Just(ChannelKind::Deletion),
        Just(ChannelKind::Insertion),
        Just(ChannelKind::InsDel)
    ]
}

/// Codes whose decoder is zero-error; q-ary insertion codes are excluded
/// because some of them admit confusable codeword pairs.
fn zero_error_code() -> impl Strategy<Value = SegmentedCode> {
    (kind(), 2u16..=4, 0usize..6).prop_filter_map("q-ary insertion", |(kind, q, extra)| {
        if kind == ChannelKind::Insertion && q > 2 {
            return None;
        }
        let b = kind.min_b().max(8) + extra;
        Some(build_code(kind, q, b).unwrap())
    })
}

fn message(ms: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..ms, k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_under_random_edits(
        (code, m) in zero_error_code().prop_flat_map(|c| {
            let ms = c.ms();
            (Just(c), message(ms, 6))
        }),
        seed in any::<u64>(),
        p in 0.0f64..=1.0,
    ) {
        let x = code.encode(&m).unwrap();
        let pat = sample_pattern(code.kind(), code.q(), code.b(), 6, p, seed).unwrap();
        let y = apply(&x, &pat, code.b()).unwrap();
        let d = decode(&code, &y, 6).unwrap();
        prop_assert_eq!(&d.x, &x);
        prop_assert_eq!(code.message_of(&d.x).unwrap(), m);
        // the trace accounts for every received symbol
        prop_assert_eq!(d.trace.implied_len(code.b()), y.len());
        let net: isize = d.trace.segments.iter().map(|s| s.edit.delta()).sum();
        prop_assert_eq!(net, pat.delta());
        for s in &d.trace.segments {
            prop_assert!(s.edit != InferredEdit::Insertion || code.kind() != ChannelKind::Deletion);
            prop_assert!(s.edit != InferredEdit::Deletion || code.kind() != ChannelKind::Insertion);
        }
        // same input, same trace
        let again = decode(&code, &y, 6).unwrap();
        prop_assert_eq!(again.trace.to_string(), d.trace.to_string());
    }

    #[test]
    fn codewords_meet_role_constraints(kind in kind(), q in 2u16..=4, extra in 0usize..5, pick in any::<prop::sample::Index>()) {
        let b = kind.min_b().max(6) + extra;
        let code = build_code(kind, q, b).unwrap();
        for set in code.sets() {
            let i = pick.index(set.len());
            let w = set.codeword(i).unwrap();
            prop_assert!(satisfies_role(kind, q, set.label(), w.symbols()));
            prop_assert!(vt_member(&w, set.params()).unwrap());
            prop_assert_eq!(set.index_of(w.symbols()), Some(i));
            if i + 1 < set.len() {
                prop_assert!(w < set.codeword(i + 1).unwrap());
            }
        }
    }

    #[test]
    fn segments_alternate_with_previous_symbol(
        (code, m) in (prop_oneof![Just(ChannelKind::Deletion), Just(ChannelKind::InsDel)], 2u16..=4)
            .prop_map(|(k, q)| build_code(k, q, 10).unwrap())
            .prop_flat_map(|c| { let ms = c.ms(); (Just(c), message(ms, 5)) })
    ) {
        let x = code.encode(&m).unwrap();
        for seg in 1..5 {
            let last = x.symbols()[seg * 10 - 1];
            prop_assert_ne!(x.symbols()[seg * 10], last);
            prop_assert_ne!(x.symbols()[seg * 10 + 1], last);
        }
    }

    #[test]
    fn apply_is_length_exact_and_reversible(
        q in 2u16..=4,
        bits in prop::collection::vec(any::<u8>(), 24),
        edit in 0usize..3, pos in 0usize..=8, sym in any::<u8>(),
    ) {
        let x = segcode::Seq::new(q, bits.iter().map(|s| s % q as u8).collect()).unwrap();
        let sym = sym % q as u8;
        let e = match edit {
            0 => SegmentEdit::None,
            1 => SegmentEdit::Delete { pos: pos.max(1) },
            _ => SegmentEdit::Insert { pos, symbol: sym },
        };
        let pat = EditPattern::new(vec![SegmentEdit::None, e, SegmentEdit::None]);
        let y = apply(&x, &pat, 8).unwrap();
        prop_assert_eq!(y.len() as isize, 24 + e.delta());
        let mut back = y.symbols().to_vec();
        match e {
            SegmentEdit::None => {}
            SegmentEdit::Delete { pos } => back.insert(8 + pos - 1, x.symbols()[8 + pos - 1]),
            SegmentEdit::Insert { pos, .. } => { back.remove(8 + pos); }
        }
        prop_assert_eq!(back, x.symbols().to_vec());
    }

    #[test]
    fn large_implicit_codes_rank_consistently(kind in kind(), pick in any::<prop::sample::Index>()) {
        let code = build_code(kind, 4, 16).unwrap();
        let i = pick.index(code.ms());
        for set in code.sets() {
            let w = set.codeword(i).unwrap();
            prop_assert_eq!(set.index_of(w.symbols()), Some(i));
            prop_assert!(satisfies_role(kind, 4, set.label(), w.symbols()));
        }
    }
}
