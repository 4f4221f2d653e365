use proptest::prelude::*;
use std::cmp::Ordering;
use trisearch_core::diophantine::{min_multiplier_in_window, min_multiplier_scan};
use trisearch_core::geom::{canonical_form, trapezoid_sum_check};
use trisearch_core::{BigInt, BigRational, LatticePoint, LatticeTriangle, QuadValue};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Sign of `a + b√3` by an integer square root at scale `10^40`.
///
/// Scaling by `ad·bd·10^40` gives `x ± t` with `t = |y|·√3·10^40`
/// irrational for `y ≠ 0`, so `t` lies strictly between `m = ⌊t⌋` and `m + 1`.
fn reference_sign(an: i64, ad: i64, bn: i64, bd: i64) -> Ordering {
    let scale = BigInt::from(10u32).pow(40);
    let x = BigInt::from(an) * bd * &scale;
    let y = BigInt::from(bn) * ad;
    let zero = BigInt::from(0);
    if y == zero {
        return x.cmp(&zero);
    }
    let n: BigInt = &y * &y * 3 * &scale * &scale;
    let m = n.sqrt();
    let lo = if y > zero { &x + &m } else { &x - &m - 1 };
    if lo >= zero {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn quad_sign_matches_reference(an in -10_000i64..10_000, ad in 1i64..500,
                                   bn in -10_000i64..10_000, bd in 1i64..500) {
        let v = QuadValue::new(ratio(an, ad), ratio(bn, bd));
        prop_assert_eq!(v.sign(), reference_sign(an, ad, bn, bd));
    }

    #[test]
    fn quad_field_identities(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000) {
        let x = QuadValue::from_ints(a, b);
        let y = QuadValue::from_ints(c, d);
        prop_assert_eq!(&(&x * &y) - &(&y * &x), QuadValue::zero());
        if !y.is_zero() {
            prop_assert_eq!(x.checked_div(&y).unwrap() * &y, x.clone());
        }
        prop_assert_eq!(x.floor() + BigInt::from(1), (&x + &QuadValue::one()).floor() );
    }

    #[test]
    fn canonical_form_is_invariant(c in prop::array::uniform3((-60i64..60, -60i64..60)),
                                   sym in 0u8..8, dx in -1000i64..1000, dy in -1000i64..1000) {
        let tri = LatticeTriangle::from_coords(c);
        let moved = LatticeTriangle { p: tri.p.map(|v| {
            let t = v.transform(sym);
            LatticePoint::new(t.x + dx, t.y + dy)
        }) };
        prop_assert_eq!(canonical_form(&tri), canonical_form(&moved));
        prop_assert_eq!(tri.twice_area(), moved.twice_area());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn trapezoid_identity(o in (-1000i64..1000, -1000i64..1000), dir in (-30i64..30, -30i64..30),
                          k_ow in 1i64..40, k_ab in 0i64..40, off in (-500i64..500, -500i64..500)) {
        prop_assume!(dir != (0, 0));
        let o = LatticePoint::new(o.0, o.1);
        let w = LatticePoint::new(o.x + k_ow * dir.0, o.y + k_ow * dir.1);
        let a = LatticePoint::new(o.x + off.0, o.y + off.1);
        let b = LatticePoint::new(a.x + k_ab * dir.0, a.y + k_ab * dir.1);
        let (lhs, rhs) = trapezoid_sum_check(o, a, b, w).unwrap();
        prop_assert_eq!(QuadValue::rational(BigRational::from_integer(lhs.into())), rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn euclid_descent_is_minimal(lo_n in 0i64..1000, width in 1i64..200) {
        let lo = ratio(lo_n, 1000);
        let hi = ratio((lo_n + width).min(1000), 1000);
        prop_assume!(lo < hi);
        let fast = min_multiplier_in_window(&lo, &hi).unwrap();
        let scan = min_multiplier_scan(&lo, &hi, 1_000_000).unwrap();
        prop_assert_eq!(fast, scan);
    }
}
