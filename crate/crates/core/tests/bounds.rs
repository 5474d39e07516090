use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use segcode::bounds::{
    chernoff_tail_check, count_lower_bound, default_kappa, lower_bound_ceil, rate_upper_bound, run_threshold,
};
use segcode::{set_sizes, ChannelKind};

fn binom(n: usize, t: usize) -> BigInt {
    (0..t).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// The tail sum computed with exact rationals.
fn exact_tail(q: u16, b: usize, terms: usize) -> BigRational {
    let q = BigInt::from(q);
    let mut sum = BigRational::zero();
    for t in 0..terms {
        let num = (q.clone() - BigInt::one()).pow(t as u32) * binom(b - 1, t);
        let den = q.pow(b as u32);
        sum += BigRational::new(num, den);
    }
    sum
}

#[test]
fn tail_sum_matches_exact_rational() {
    for q in [2u16, 3, 4] {
        for b in [32, 64, 128, 256, 512] {
            let kappa = default_kappa(q, b);
            let c = chernoff_tail_check(q, b, kappa).unwrap();
            let exact = exact_tail(q, b, c.terms);
            if exact.is_zero() {
                assert_eq!(c.lhs, 0.0);
                continue;
            }
            // compare logarithms, the values themselves can underflow f64
            let (n, d) = (exact.numer().clone(), exact.denom().clone());
            let ln = |x: &BigInt| {
                let bits = x.bits().saturating_sub(60);
                (x >> bits).to_f64().unwrap().ln() + bits as f64 * std::f64::consts::LN_2
            };
            let ln_exact = ln(&n) - ln(&d);
            assert!((c.ln_lhs - ln_exact).abs() < 1e-9, "q={q} b={b}");
        }
    }
}

#[test]
fn tail_inequality_on_grid() {
    for q in [2u16, 3, 4] {
        for b in [32, 64, 128, 256, 512] {
            let kappa = default_kappa(q, b);
            let c = chernoff_tail_check(q, b, kappa).unwrap();
            if run_threshold(q, b, kappa) >= 1.0 {
                assert!(c.holds, "q={q} b={b}: {} > {}", c.ln_lhs, c.ln_rhs);
            } else {
                assert_eq!(c.terms, 0);
            }
        }
    }
    assert!(chernoff_tail_check(2, 64, default_kappa(2, 64)).unwrap().holds);
    assert!(chernoff_tail_check(4, 256, default_kappa(4, 256)).unwrap().holds);
}

#[test]
fn lower_bound_never_exceeds_construction() {
    for kind in ChannelKind::ALL {
        for b in kind.min_b()..=18 {
            let ms = set_sizes(kind, 2, b).unwrap().ms;
            assert!(
                count_lower_bound(kind, 2, b).unwrap() <= ms as f64,
                "{kind} b={b}"
            );
        }
        for q in [3u16, 4] {
            for b in kind.min_b().max(5)..=12 {
                let ms = set_sizes(kind, q, b).unwrap().ms;
                assert!(
                    count_lower_bound(kind, q, b).unwrap() <= ms as f64,
                    "{kind} q={q} b={b}"
                );
            }
        }
    }
}

#[test]
fn qary_brackets() {
    // q^(b-2)(q-1)^2/(qb), q^(b-3)/(qb), q^(b-7)/(qb) at q=3, b=9
    assert_eq!(
        lower_bound_ceil(ChannelKind::Deletion, 3, 9).unwrap(),
        (2187 * 4u128).div_ceil(27)
    );
    assert_eq!(
        lower_bound_ceil(ChannelKind::Insertion, 3, 9).unwrap(),
        729u128.div_ceil(27)
    );
    assert_eq!(
        lower_bound_ceil(ChannelKind::InsDel, 3, 9).unwrap(),
        9u128.div_ceil(27)
    );
}

#[test]
fn built_rate_below_converse_when_valid() {
    for q in [2u16, 4] {
        let ms = set_sizes(ChannelKind::Deletion, q, 16).unwrap().ms;
        let rate = (ms as f64).log2() / 16.0;
        for k in [1, 10, 100] {
            let rep = rate_upper_bound(q, 16, k, None, None).unwrap();
            if let Some(u) = rep.rate_upper {
                assert!(rate <= u, "q={q} k={k}");
            }
        }
    }
}

#[test]
fn upper_bound_gap_shrinks_with_b() {
    for q in [2u16, 3, 4] {
        let gaps: Vec<f64> = [64, 128, 256, 512, 1024, 2048, 4096]
            .iter()
            .map(|&b| {
                let u = rate_upper_bound(q, b, 100, None, None)
                    .unwrap()
                    .rate_upper
                    .unwrap();
                let bf = b as f64;
                u - (f64::from(q).log2() - bf.log2() / bf)
            })
            .collect();
        assert!(gaps.iter().all(|&g| g > 0.0), "q={q} {gaps:?}");
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "q={q} {gaps:?}");
    }
}

#[test]
fn defaults_invalid_at_sixteen() {
    for q in [2u16, 3, 4] {
        let rep = rate_upper_bound(q, 16, 100, None, None).unwrap();
        assert!(!rep.factor_ok && !rep.valid && rep.rate_upper.is_none());
    }
}
