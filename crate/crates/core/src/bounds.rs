//! Rate bounds: the pigeonhole lower bounds of the three constructions and
//! the non-asymptotic converse with its binomial tail inequality.
//!
//! Everything that can grow like `q^b` is evaluated in log space.

use std::fmt;

use crate::code::ChannelKind;
use crate::error::{Error, Result};
use crate::seq::check_q;

fn check_kind(kind: ChannelKind, q: u16, b: usize) -> Result<()> {
    check_q(q)?;
    if b < kind.min_b() {
        return Err(Error::param(format!(
            "{kind} codes need b >= {}, got b={b}",
            kind.min_b()
        )));
    }
    Ok(())
}

/// `log2` of the pigeonhole lower bound on the codewords per segment.
pub fn log2_count_lower_bound(kind: ChannelKind, q: u16, b: usize) -> Result<f64> {
    check_kind(kind, q, b)?;
    let bf = b as f64;
    let lq = f64::from(q).log2();
    Ok(if q == 2 {
        let den = (bf + 1.0).log2();
        match kind {
            ChannelKind::Deletion => bf - 2.0 - den,
            // 2^(b-2) - 2^(b-4) - 1 = 3 * 2^(b-4) * (1 - 1/(3 * 2^(b-4)))
            ChannelKind::Insertion => {
                let tail = -(3.0 * (bf - 4.0).exp2()).recip();
                bf - 4.0 + 3f64.log2() + tail.ln_1p() / std::f64::consts::LN_2 - den
            }
            ChannelKind::InsDel => bf - 7.0 - den,
        }
    } else {
        let den = lq + bf.log2();
        match kind {
            ChannelKind::Deletion => (bf - 2.0) * lq + 2.0 * f64::from(q - 1).log2() - den,
            ChannelKind::Insertion => (bf - 3.0) * lq - den,
            ChannelKind::InsDel => (bf - 7.0) * lq - den,
        }
    })
}

/// The pigeonhole lower bound as a real number (`inf` once it leaves `f64`).
pub fn count_lower_bound(kind: ChannelKind, q: u16, b: usize) -> Result<f64> {
    Ok(log2_count_lower_bound(kind, q, b)?.exp2())
}

/// `log2(count_lower_bound) / b`.
pub fn rate_lower_bound(kind: ChannelKind, q: u16, b: usize) -> Result<f64> {
    Ok(log2_count_lower_bound(kind, q, b)? / b as f64)
}

/// The lower bound as an exact fraction `(numerator, denominator)`.
pub fn count_lower_bound_fraction(kind: ChannelKind, q: u16, b: usize) -> Result<(u128, u128)> {
    check_kind(kind, q, b)?;
    let overflow = || Error::param(format!("lower bound for q={q} b={b} exceeds 128 bits"));
    let pow = |base: u128, e: usize| -> Result<u128> {
        u32::try_from(e)
            .ok()
            .and_then(|e| base.checked_pow(e))
            .ok_or_else(overflow)
    };
    let qq = u128::from(q);
    let bb = b as u128;
    if q == 2 {
        let num = match kind {
            ChannelKind::Deletion => pow(2, b - 2)?,
            ChannelKind::Insertion => pow(2, b - 2)? - pow(2, b - 4)? - 1,
            ChannelKind::InsDel => pow(2, b - 7)?,
        };
        Ok((num, bb + 1))
    } else {
        let num = match kind {
            ChannelKind::Deletion => pow(qq, b - 2)?
                .checked_mul((qq - 1) * (qq - 1))
                .ok_or_else(overflow)?,
            ChannelKind::Insertion => pow(qq, b - 3)?,
            ChannelKind::InsDel => pow(qq, b - 7)?,
        };
        Ok((num, qq * bb))
    }
}

/// `ceil(count_lower_bound)` computed exactly.
pub fn lower_bound_ceil(kind: ChannelKind, q: u16, b: usize) -> Result<u128> {
    let (n, d) = count_lower_bound_fraction(kind, q, b)?;
    Ok(n.div_ceil(d))
}

/// Default `alpha = 1 - b^(-1/3)`.
pub fn default_alpha(b: usize) -> f64 {
    1.0 - (b as f64).cbrt().recip()
}

/// Default `kappa = (b^(1/3) - 1) * log2(b(q-1)) / log2(b)`.
pub fn default_kappa(q: u16, b: usize) -> f64 {
    let bf = b as f64;
    (bf.cbrt() - 1.0) * (bf * f64::from(q - 1)).log2() / bf.log2()
}

/// Smallest admissible `kappa`, `log(2q) / log(b)`.
pub fn kappa_floor(q: u16, b: usize) -> f64 {
    (2.0 * f64::from(q)).ln() / (b as f64).ln()
}

/// Run-count threshold `r = (q-1)b/q - sqrt(2 kappa (q-1) b ln b / q)`.
pub fn run_threshold(q: u16, b: usize, kappa: f64) -> f64 {
    let (qf, bf) = (f64::from(q), b as f64);
    (qf - 1.0) * bf / qf - (2.0 * kappa * (qf - 1.0) * bf * bf.ln() / qf).sqrt()
}

/// Evaluation of the converse bound at one `(q, b, k, alpha, kappa)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateBoundReport {
    pub q: u16,
    pub b: usize,
    pub k: usize,
    pub alpha: f64,
    pub kappa: f64,
    pub r: f64,
    pub epsilon: f64,
    pub mu: f64,
    /// `1 - epsilon - q/((q-1)b)`; must be positive for `T1` to be defined.
    pub t1_factor: f64,
    pub log2_t1: f64,
    pub log2_t2: f64,
    pub kappa_ok: bool,
    pub factor_ok: bool,
    pub r_ok: bool,
    pub valid: bool,
    /// `(1 + max(log2 T1, log2 T2)) / (kb)`, or `None` when not valid.
    pub rate_upper: Option<f64>,
}

impl fmt::Display for RateBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={} b={} k={}", self.q, self.b, self.k)?;
        writeln!(
            f,
            "alpha={:.6} kappa={:.6} r={:.6}",
            self.alpha, self.kappa, self.r
        )?;
        writeln!(
            f,
            "epsilon={:.6} mu={:.6} t1_factor={:.6}",
            self.epsilon, self.mu, self.t1_factor
        )?;
        writeln!(f, "log2_T1={:.6} log2_T2={:.6}", self.log2_t1, self.log2_t2)?;
        writeln!(
            f,
            "kappa_ok={} factor_ok={} r_ok={} valid={}",
            self.kappa_ok, self.factor_ok, self.r_ok, self.valid
        )?;
        match self.rate_upper {
            Some(r) => write!(f, "rate_upper={r:.6}"),
            None => write!(f, "rate_upper=no bound"),
        }
    }
}

/// The converse bound with the default `alpha` and `kappa` unless given.
pub fn rate_upper_bound(
    q: u16,
    b: usize,
    k: usize,
    alpha: Option<f64>,
    kappa: Option<f64>,
) -> Result<RateBoundReport> {
    check_q(q)?;
    if b < 2 || k == 0 {
        return Err(Error::param(format!("need b >= 2 and k >= 1, got b={b} k={k}")));
    }
    if let Some(a) = alpha {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::param(format!("alpha must lie in (0, 1), got {a}")));
        }
    }
    if let Some(kp) = kappa {
        if kp.partial_cmp(&kappa_floor(q, b)) != Some(std::cmp::Ordering::Greater) || !kp.is_finite() {
            return Err(Error::param(format!(
                "kappa must exceed log(2q)/log(b) = {:.6}, got {kp}",
                kappa_floor(q, b)
            )));
        }
    }
    let alpha = alpha.unwrap_or_else(|| default_alpha(b));
    let kappa = kappa.unwrap_or_else(|| default_kappa(q, b));
    let (qf, bf, kf) = (f64::from(q), b as f64, k as f64);
    let lq = qf.log2();

    let r = run_threshold(q, b, kappa);
    let epsilon = (2.0 * kappa * qf * bf.ln() / ((qf - 1.0) * bf)).sqrt();
    let mu = bf * (qf - 1.0) / qf;
    let t1_factor = 1.0 - epsilon - qf / ((qf - 1.0) * bf);

    let log2_t1 = 1.0 + kf * bf * lq - alpha * kf * (bf * (qf - 1.0)).log2() - alpha * kf * t1_factor.log2();
    let log2_t2 = kf + ((bf + 1.0 - alpha) * kf + 1.0) * lq - kappa * (1.0 - alpha) * kf * bf.log2();

    let kappa_ok = kappa > kappa_floor(q, b);
    let factor_ok = t1_factor > 0.0;
    let r_ok = r >= 1.0;
    let valid = kappa_ok && factor_ok && r_ok;
    let rate_upper = valid.then(|| (1.0 + log2_t1.max(log2_t2)) / (kf * bf));
    Ok(RateBoundReport {
        q,
        b,
        k,
        alpha,
        kappa,
        r,
        epsilon,
        mu,
        t1_factor,
        log2_t1,
        log2_t2,
        kappa_ok,
        factor_ok,
        r_ok,
        valid,
        rate_upper,
    })
}

/// Coarse grid search over `alpha` and `kappa` for the smallest valid bound.
/// `steps` points are tried per axis; `kappa` ranges up to four times its default.
pub fn best_rate_upper_bound(q: u16, b: usize, k: usize, steps: usize) -> Result<Option<RateBoundReport>> {
    let steps = steps.max(2);
    let lo = kappa_floor(q, b);
    let hi = 4.0 * default_kappa(q, b).max(lo);
    let mut best: Option<RateBoundReport> = None;
    for i in 1..steps {
        let alpha = i as f64 / steps as f64;
        for j in 1..=steps {
            let kappa = lo + (hi - lo) * j as f64 / steps as f64;
            let rep = rate_upper_bound(q, b, k, Some(alpha), Some(kappa))?;
            if let Some(u) = rep.rate_upper {
                if best.as_ref().and_then(|r| r.rate_upper).is_none_or(|v| u < v) {
                    best = Some(rep);
                }
            }
        }
    }
    Ok(best)
}

/// Result of the binomial tail check.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffCheck {
    pub r: f64,
    /// Number of summed terms, `ceil(r)` (zero when `r < 1`).
    pub terms: usize,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn ln_choose(n: usize, t: usize) -> f64 {
    (1..=t).map(|i| ((n - t + i) as f64 / i as f64).ln()).sum()
}

/// Checks `sum_{t=0}^{ceil(r)-1} (1-1/q)^t (1/q)^(b-t) C(b-1, t) <= b^(-kappa)`.
///
/// Terms are combined with a log-sum-exp so nothing underflows before the
/// comparison, which is made between logarithms.
pub fn chernoff_tail_check(q: u16, b: usize, kappa: f64) -> Result<ChernoffCheck> {
    check_q(q)?;
    if b < 2 || !kappa.is_finite() {
        return Err(Error::param(format!(
            "need b >= 2 and finite kappa, got b={b} kappa={kappa}"
        )));
    }
    let r = run_threshold(q, b, kappa);
    let ln_rhs = -kappa * (b as f64).ln();
    let terms = if r < 1.0 { 0 } else { (r.ceil() as usize).min(b) };
    let qf = f64::from(q);
    let (lp, lr) = ((1.0 - 1.0 / qf).ln(), -qf.ln());
    let logs: Vec<f64> = (0..terms)
        .map(|t| t as f64 * lp + (b - t) as f64 * lr + ln_choose(b - 1, t))
        .collect();
    let ln_lhs = match logs.iter().copied().fold(f64::NEG_INFINITY, f64::max) {
        m if m == f64::NEG_INFINITY => f64::NEG_INFINITY,
        m => m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln(),
    };
    Ok(ChernoffCheck {
        r,
        terms,
        ln_lhs,
        ln_rhs,
        lhs: ln_lhs.exp(),
        rhs: ln_rhs.exp(),
        holds: ln_lhs <= ln_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_examples() {
        assert_eq!(lower_bound_ceil(ChannelKind::Deletion, 2, 16).unwrap(), 964);
        assert_eq!(lower_bound_ceil(ChannelKind::Insertion, 2, 8).unwrap(), 6);
        assert_eq!(lower_bound_ceil(ChannelKind::InsDel, 2, 24).unwrap(), 5243);
        assert!(lower_bound_ceil(ChannelKind::InsDel, 2, 7).is_err());
    }

    #[test]
    fn log_form_agrees_with_fraction() {
        for kind in ChannelKind::ALL {
            for q in [2u16, 3, 4] {
                for b in kind.min_b()..30 {
                    let (n, d) = count_lower_bound_fraction(kind, q, b).unwrap();
                    let exact = n as f64 / d as f64;
                    let got = count_lower_bound(kind, q, b).unwrap();
                    assert!((got - exact).abs() <= 1e-9 * exact, "{kind} q={q} b={b}");
                }
            }
        }
    }

    #[test]
    fn defaults_at_small_b_are_invalid() {
        let rep = rate_upper_bound(2, 8, 10, None, None).unwrap();
        assert!(!rep.valid);
        assert!(rep.epsilon > 1.0);
        assert_eq!(rep.rate_upper, None);
        assert!(rep.to_string().contains("no bound"));
    }

    #[test]
    fn valid_reports_stay_below_log_q() {
        for q in [2u16, 3, 4] {
            for b in [64, 128, 256, 1024, 4096] {
                let rep = rate_upper_bound(q, b, 50, None, None).unwrap();
                if rep.valid {
                    assert!(rep.rate_upper.unwrap() < f64::from(q).log2(), "q={q} b={b}");
                }
            }
        }
    }

    #[test]
    fn supplied_parameters_are_checked() {
        assert!(rate_upper_bound(2, 64, 1, Some(1.0), None).is_err());
        assert!(rate_upper_bound(2, 64, 1, None, Some(0.1)).is_err());
        assert!(rate_upper_bound(2, 64, 0, None, None).is_err());
    }

    #[test]
    fn empty_tail_sum() {
        // a huge kappa drives r below one
        let c = chernoff_tail_check(2, 32, 50.0).unwrap();
        assert!(c.r < 1.0);
        assert_eq!(c.terms, 0);
        assert_eq!(c.lhs, 0.0);
        assert!(c.holds);
    }

    #[test]
    fn grid_search_finds_a_valid_point() {
        let best = best_rate_upper_bound(2, 256, 20, 12).unwrap().unwrap();
        assert!(best.valid);
        assert!(best.rate_upper.unwrap() < 1.0);
        assert!(best_rate_upper_bound(2, 4, 1, 8).unwrap().is_none());
    }
}
