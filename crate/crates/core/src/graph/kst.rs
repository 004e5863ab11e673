//! Kővári–Sós–Turán edge bounds for graphs without a `K_{t,t}` subgraph.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `(t-1)^{1/t}/2 · n^{2-1/t} + t·n/2`, rounded upward by a few ulps so that
/// comparisons against it never flag a graph that actually meets the bound.
/// For exact decisions use [`kst_bound_holds`].
pub fn kst_edge_bound(n: u64, t: u32) -> f64 {
    assert!(t >= 1, "t must be positive");
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let t = f64::from(t);
    let lead = (t - 1.0).powf(1.0 / t) / 2.0 * n.powf(2.0 - 1.0 / t);
    let v = lead + t * n / 2.0;
    (v * (1.0 + 16.0 * f64::EPSILON)).next_up()
}

/// Exact test of `m <= (t-1)^{1/t}/2 · n^{2-1/t} + t·n/2`.
///
/// Rearranged to `2m - tn <= ((t-1) n^{2t-1})^{1/t}` and, when the left side
/// is positive, raised to the `t`-th power.
pub fn kst_bound_holds(n: u64, t: u32, m: u64) -> bool {
    assert!(t >= 1, "t must be positive");
    let lhs = 2 * u128::from(m);
    let linear = u128::from(t) * u128::from(n);
    if lhs <= linear {
        return true;
    }
    let d = BigUint::from(lhs - linear);
    let rhs = BigUint::from(t - 1) * BigUint::from(n).pow(2 * t - 1);
    d.pow(t) <= rhs
}

/// Smallest `n >= 1` from which every `K_{t,t}`-subgraph-free graph on `n`
/// vertices has at most `n^{2-1/t}` edges, i.e. the KST bound is at most
/// `n^{2-1/t}`.
///
/// The condition `t·n/2 <= (1 - (t-1)^{1/t}/2) n^{2-1/t}` is equivalent to
/// `a^{1/t} + t <= 2 b^{1/t}` with integers `b = n^{t-1}`, `a = (t-1) b`, and is
/// monotone in `n`; it is decided exactly with integer root brackets.
pub fn kst_threshold(t: u32) -> u64 {
    assert!(t >= 1, "t must be positive");
    if t == 1 {
        return 1;
    }
    (1u64..)
        .find(|&n| {
            let b = BigUint::from(n).pow(t - 1);
            let a = BigUint::from(t - 1) * &b;
            root_sum_at_most(&a, &b, t, t)
        })
        .expect("the KST threshold exists for every t")
}

/// Decides `a^{1/k} + c <= 2 b^{1/k}` exactly.
fn root_sum_at_most(a: &BigUint, b: &BigUint, k: u32, c: u32) -> bool {
    let ra = a.nth_root(k);
    let rb = b.nth_root(k);
    if ra.pow(k) == *a && rb.pow(k) == *b {
        return ra + BigUint::from(c) <= rb * 2u32;
    }
    let mut bits = 32u32;
    while bits <= 8192 {
        let (a_lo, a_hi) = scaled_root(a, k, bits);
        let (b_lo, b_hi) = scaled_root(b, k, bits);
        let shift = BigUint::from(c) << bits;
        if &a_hi + &shift <= &b_lo * 2u32 {
            return true;
        }
        if &a_lo + &shift > &b_hi * 2u32 {
            return false;
        }
        bits *= 2;
    }
    // Unresolved at 8192 bits of precision means equality to that precision.
    true
}

/// Floor and ceiling of `x^{1/k} · 2^bits`.
fn scaled_root(x: &BigUint, k: u32, bits: u32) -> (BigUint, BigUint) {
    if x.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let scaled = x << (bits as usize * k as usize);
    let lo = scaled.nth_root(k);
    let hi = if lo.pow(k) == scaled {
        lo.clone()
    } else {
        &lo + BigUint::one()
    };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_bound_examples() {
        assert!((kst_edge_bound(4, 1) - 2.0).abs() < 1e-9);
        assert!(kst_edge_bound(4, 1) >= 2.0);
        assert!((kst_edge_bound(4, 2) - 8.0).abs() < 1e-9);
        assert!(kst_edge_bound(4, 2) >= 8.0);
        assert_eq!(kst_edge_bound(0, 3), 0.0);
    }

    #[test]
    fn exact_bound_agrees_with_float_away_from_ties() {
        for t in 1..=5u32 {
            for n in 0..40u64 {
                let b = kst_edge_bound(n, t);
                for m in 0..=(n * n) {
                    let f = m as f64;
                    if (f - b).abs() > 1e-6 {
                        assert_eq!(kst_bound_holds(n, t, m), f <= b, "n={n} t={t} m={m}");
                    }
                }
            }
        }
        // exact tie: n = 4, t = 2 gives exactly 8
        assert!(kst_bound_holds(4, 2, 8));
        assert!(!kst_bound_holds(4, 2, 9));
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(kst_threshold(1), 1);
        assert_eq!(kst_threshold(2), 4);
        // t = 3: smallest n with n^{2/3} >= 3/(2 - 2^{1/3}); verify by substitution.
        let target = 3.0 / (2.0 - 2f64.powf(1.0 / 3.0));
        let n3 = kst_threshold(3);
        assert!((n3 as f64).powf(2.0 / 3.0) >= target);
        assert!(((n3 - 1) as f64).powf(2.0 / 3.0) < target);
        assert_eq!(n3, 9);
    }

    #[test]
    fn threshold_matches_float_search() {
        for t in 2..=12u32 {
            let tf = f64::from(t);
            let c = (tf - 1.0).powf(1.0 / tf);
            let float = (1u64..)
                .find(|&n| {
                    let n = n as f64;
                    tf * n / 2.0 <= (1.0 - c / 2.0) * n.powf(2.0 - 1.0 / tf) + 1e-9
                })
                .unwrap();
            assert_eq!(kst_threshold(t), float, "t={t}");
        }
    }

    #[test]
    fn simplified_bound_holds_from_threshold_on() {
        for t in 1..=6u32 {
            let nt = kst_threshold(t);
            for n in nt..nt + 50 {
                let simple = (n as f64).powf(2.0 - 1.0 / f64::from(t));
                assert!(kst_edge_bound(n, t) <= simple * (1.0 + 1e-9), "t={t} n={n}");
            }
        }
    }
}
