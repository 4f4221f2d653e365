//! Machine-word fast paths for the campaign hot loops.
//!
//! Each function returns the exact answer, or `None` when an intermediate
//! product would overflow; callers then promote to [`super::QuadValue`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::cmp::Ordering;

/// A positive rational `num/den` small enough for word arithmetic.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallRatio {
    pub num: i64,
    pub den: i64,
}

impl SmallRatio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let g = num.gcd(&den);
        SmallRatio { num: num / g, den: den / g }
    }

    /// Narrows a rational whose numerator and denominator fit in 32 bits.
    /// The bound keeps every product in this module inside `u128`.
    pub fn from_big(r: &BigRational) -> Option<Self> {
        let num = r.numer().to_i64()?;
        let den = r.denom().to_i64()?;
        if num.unsigned_abs() > u32::MAX as u64 || den > u32::MAX as i64 {
            return None;
        }
        Some(SmallRatio { num, den })
    }

    pub fn to_big(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

/// `⌊√x⌋`.
#[inline]
pub fn isqrt(x: u128) -> u128 {
    x.isqrt()
}

/// `⌊n√3⌋` for `|n| < 2^62`.
#[inline]
pub fn floor_mul_sqrt3(n: i128) -> Option<i128> {
    let m = n.unsigned_abs();
    let sq = m.checked_mul(m)?.checked_mul(3)?;
    let r = isqrt(sq) as i128;
    Some(if n < 0 { -r - 1 } else { r })
}

/// `⌊(p + q√3) / r⌋` for `r > 0`.
#[inline]
pub fn floor_affine(p: i128, q: i128, r: i128) -> Option<i128> {
    debug_assert!(r > 0);
    if q == 0 {
        return Some(p.div_euclid(r));
    }
    // q√3 ∈ (f, f+1) strictly, and no multiple of r lies strictly inside
    // (p+f, p+f+1), so the floor is decided by p+f alone.
    let f = floor_mul_sqrt3(q)?;
    Some(p.checked_add(f)?.div_euclid(r))
}

/// Nearest integer to `(p + q√3) / r` for `r > 0`; halves round up.
#[inline]
pub fn round_affine(p: i128, q: i128, r: i128) -> Option<i128> {
    floor_affine(
        p.checked_mul(2)?.checked_add(r)?,
        q.checked_mul(2)?,
        r.checked_mul(2)?,
    )
}

/// Compares the integer `k` with `c·√3` where `c ≥ 0`.
#[inline]
fn cmp_int_sqrt3(k: i128, c: u128) -> Option<Ordering> {
    if k < 0 {
        return Some(Ordering::Less);
    }
    let k = k as u128;
    let lhs = k.checked_mul(k)?;
    let rhs = c.checked_mul(c)?.checked_mul(3)?;
    Some(lhs.cmp(&rhs))
}

/// Compares `‖n√3‖` with `eps`.
///
/// `Equal` is returned only for `n = 0` and `eps = 0`; otherwise the distance
/// is irrational and never equals a rational.
pub fn cmp_dist_sqrt3(n: i64, eps: SmallRatio) -> Option<Ordering> {
    let a = n.unsigned_abs() as u128;
    if a == 0 {
        return Some(0i64.cmp(&eps.num));
    }
    let p = eps.num as i128;
    let q = eps.den as i128;
    let m = floor_mul_sqrt3(a as i128)?;
    let qa = (q as u128).checked_mul(a)?;
    // f = a√3 − m. dist < eps iff f < eps or f > 1 − eps.
    // f < eps  iff  q·m + p > q·a·√3
    let low = q.checked_mul(m)?.checked_add(p)?;
    if cmp_int_sqrt3(low, qa)? == Ordering::Greater {
        return Some(Ordering::Less);
    }
    // f > 1 − eps  iff  q·(m+1) − p < q·a·√3
    let high = q.checked_mul(m + 1)?.checked_sub(p)?;
    if cmp_int_sqrt3(high, qa)? == Ordering::Less {
        return Some(Ordering::Less);
    }
    Some(Ordering::Greater)
}

/// `‖n√3‖ < eps`, exact, with big-integer promotion on overflow.
pub fn dist_lt(n: i64, eps: &BigRational) -> bool {
    if let Some(e) = SmallRatio::from_big(eps) {
        if let Some(ord) = cmp_dist_sqrt3(n, e) {
            return ord == Ordering::Less;
        }
    }
    slow_dist(n, eps) == Ordering::Less
}

/// `‖n√3‖ ≤ eps`, exact.
pub fn dist_le(n: i64, eps: &BigRational) -> bool {
    if let Some(e) = SmallRatio::from_big(eps) {
        if let Some(ord) = cmp_dist_sqrt3(n, e) {
            return ord != Ordering::Greater;
        }
    }
    slow_dist(n, eps) != Ordering::Greater
}

fn slow_dist(n: i64, eps: &BigRational) -> Ordering {
    let w = super::dist_to_nearest(&BigInt::from(n));
    w.distance().cmp(&super::QuadValue::rational(eps.clone()))
}

/// `{s√3} ∈ [lo, hi]` for `0 ≤ lo ≤ hi ≤ 1`.
pub fn frac_in_window(s: i64, lo: SmallRatio, hi: SmallRatio) -> Option<bool> {
    let m = floor_mul_sqrt3(s as i128)?;
    let c = (s as i128).unsigned_abs();
    let neg = s < 0;
    // lo + m ≤ s√3 ≤ hi + m, each side scaled by the bound's denominator.
    let ge_lo = {
        let k = (lo.den as i128).checked_mul(m)?.checked_add(lo.num as i128)?;
        let c = (lo.den as u128).checked_mul(c)?;
        cmp_signed_sqrt3(k, c, neg)? != Ordering::Greater
    };
    if !ge_lo {
        return Some(false);
    }
    let k = (hi.den as i128).checked_mul(m)?.checked_add(hi.num as i128)?;
    let c = (hi.den as u128).checked_mul(c)?;
    Some(cmp_signed_sqrt3(k, c, neg)? != Ordering::Less)
}

/// Compares `k` with `±c√3`.
fn cmp_signed_sqrt3(k: i128, c: u128, neg: bool) -> Option<Ordering> {
    if !neg {
        cmp_int_sqrt3(k, c)
    } else {
        // k vs −c√3  ⇔  −k vs c√3, reversed.
        cmp_int_sqrt3(k.checked_neg()?, c).map(Ordering::reverse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{dist_to_nearest, floor_mul_sqrt3 as big_floor, QuadValue};

    #[test]
    fn floor_matches_big() {
        for n in -2000i128..2000 {
            assert_eq!(
                BigInt::from(floor_mul_sqrt3(n).unwrap()),
                big_floor(&BigInt::from(n)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn affine_rounding_matches_quad() {
        for p in -30i128..30 {
            for q in -30i128..30 {
                for r in 1i128..5 {
                    let v = QuadValue::new(
                        BigRational::new(p.into(), r.into()),
                        BigRational::new(q.into(), r.into()),
                    );
                    assert_eq!(BigInt::from(floor_affine(p, q, r).unwrap()), v.floor());
                    assert_eq!(BigInt::from(round_affine(p, q, r).unwrap()), v.round());
                }
            }
        }
    }

    #[test]
    fn dist_matches_big() {
        let eps = SmallRatio::new(1, 17);
        for n in -500i64..500 {
            let fast = cmp_dist_sqrt3(n, eps).unwrap() == Ordering::Less;
            let slow = dist_to_nearest(&BigInt::from(n)).distance()
                < QuadValue::rational(eps.to_big());
            assert_eq!(fast, slow, "n = {n}");
        }
    }

    #[test]
    fn known_small_distances() {
        let e = SmallRatio::new(1, 17);
        let valid: Vec<i64> = (1..60).filter(|&n| cmp_dist_sqrt3(n, e) == Some(Ordering::Less)).collect();
        assert_eq!(valid, vec![11, 15, 26, 30, 41, 45, 56]);
    }

    #[test]
    fn window_matches_quad() {
        let lo = SmallRatio::new(1, 2);
        let hi = SmallRatio::new(3, 5);
        for s in -300i64..300 {
            let f = QuadValue::sqrt3_times(BigRational::from_integer(s.into())).frac();
            let slow = f >= QuadValue::rational(lo.to_big()) && f <= QuadValue::rational(hi.to_big());
            assert_eq!(frac_in_window(s, lo, hi).unwrap(), slow, "s = {s}");
        }
    }
}
