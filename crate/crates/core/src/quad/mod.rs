//! Exact arithmetic in ℚ(√3).
//!
//! Every comparison involving √3 in this crate is decided here, by integer
//! arithmetic on the rational coefficients. Floating point is only used by
//! [`QuadValue::approx`] for rendering.

pub mod fast;
pub mod surd;

use num_bigint::BigInt;
use num_integer::{Integer};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use surd::{Surd, SurdField, SurdTerm};

/// The number `a + b·√3` with rational `a`, `b`.
///
/// 1 and √3 are linearly independent over ℚ, so the derived coefficient-wise
/// equality coincides with equality of real values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadValue {
    #[serde(with = "crate::serde_util::rational")]
    a: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    b: BigRational,
}

impl QuadValue {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadValue { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadValue::new(int(a), int(b))
    }

    pub fn rational(a: BigRational) -> Self {
        QuadValue::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        QuadValue::from_ints(0, 0)
    }

    pub fn one() -> Self {
        QuadValue::from_ints(1, 0)
    }

    pub fn sqrt3() -> Self {
        QuadValue::from_ints(0, 1)
    }

    /// `n·√3` for an integer or half-integer multiplier.
    pub fn sqrt3_times(n: BigRational) -> Self {
        QuadValue::new(BigRational::zero(), n)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Sign of the real number `a + b√3`.
    pub fn sign(&self) -> Ordering {
        sign_of_pair(&self.a, &self.b)
    }

    pub fn abs(&self) -> QuadValue {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Conjugate `a − b√3`.
    pub fn conj(&self) -> QuadValue {
        QuadValue::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 3b²`; zero only for zero.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * int(3)
    }

    pub fn recip(&self) -> Option<QuadValue> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(QuadValue::new(c.a / &n, c.b / &n))
    }

    pub fn checked_div(&self, rhs: &QuadValue) -> Option<QuadValue> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn scale(&self, k: &BigRational) -> QuadValue {
        QuadValue::new(&self.a * k, &self.b * k)
    }

    /// Largest integer `m` with `m ≤ self`.
    pub fn floor(&self) -> BigInt {
        // self = (p + r·√3) / d with integers p, r and d > 0.
        let d = self.a.denom().lcm(self.b.denom());
        let p = self.a.numer() * (&d / self.a.denom());
        let r = self.b.numer() * (&d / self.b.denom());
        if r.is_zero() {
            return p.div_floor(&d);
        }
        // r√3 lies strictly between f and f+1, so no integer multiple of d
        // can fall strictly inside (p+f, p+f+1).
        let f = floor_mul_sqrt3(&r);
        (p + f).div_floor(&d)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Nearest integer; exact halves round up (only reachable when rational).
    pub fn round(&self) -> BigInt {
        (self + &QuadValue::rational(half())).floor()
    }

    /// Fractional part `{x} = x − ⌊x⌋ ∈ [0, 1)`.
    pub fn frac(&self) -> QuadValue {
        self - &QuadValue::rational(BigRational::from_integer(self.floor()))
    }

    /// `‖x‖`, the distance to the nearest integer.
    pub fn dist_to_int(&self) -> QuadValue {
        let k = self.round();
        (self - &QuadValue::rational(BigRational::from_integer(k))).abs()
    }

    pub fn approx(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * 3f64.sqrt()
    }
}

impl PartialOrd for QuadValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadValue {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_quad(self, other)
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√3", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{} − {}√3", self.a, -self.b.clone()),
            (false, false) => write!(f, "{} + {}√3", self.a, self.b),
        }
    }
}

macro_rules! quad_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&QuadValue> for &QuadValue {
            type Output = QuadValue;
            fn $m(self, rhs: &QuadValue) -> QuadValue {
                let f: fn(&QuadValue, &QuadValue) -> QuadValue = $body;
                f(self, rhs)
            }
        }
        impl $tr<QuadValue> for QuadValue {
            type Output = QuadValue;
            fn $m(self, rhs: QuadValue) -> QuadValue {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadValue> for QuadValue {
            type Output = QuadValue;
            fn $m(self, rhs: &QuadValue) -> QuadValue {
                (&self).$m(rhs)
            }
        }
        impl $tr<QuadValue> for &QuadValue {
            type Output = QuadValue;
            fn $m(self, rhs: QuadValue) -> QuadValue {
                self.$m(&rhs)
            }
        }
    };
}

quad_binop!(Add, add, |x, y| QuadValue::new(&x.a + &y.a, &x.b + &y.b));
quad_binop!(Sub, sub, |x, y| QuadValue::new(&x.a - &y.a, &x.b - &y.b));
quad_binop!(Mul, mul, |x, y| QuadValue::new(
    &x.a * &y.a + &x.b * &y.b * int(3),
    &x.a * &y.b + &x.b * &y.a
));

impl Neg for &QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        QuadValue::new(-self.a.clone(), -self.b.clone())
    }
}

impl Neg for QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        QuadValue::new(-self.a, -self.b)
    }
}

/// `n·√3` rounded to the nearest integer, with the exact residue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracWitness {
    #[serde(with = "crate::serde_util::bigint")]
    pub n: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    pub k: BigInt,
    /// `n√3 − k`, strictly inside (−1/2, 1/2).
    pub residue: QuadValue,
}

impl FracWitness {
    /// `‖n√3‖` as an exact value.
    pub fn distance(&self) -> QuadValue {
        self.residue.abs()
    }

    pub fn distance_lt(&self, eps: &QuadValue) -> bool {
        self.distance() < *eps
    }

    pub fn distance_le(&self, eps: &QuadValue) -> bool {
        self.distance() <= *eps
    }
}

/// Sign of `a + b√3` as −1, 0 or +1.
pub fn sign_quad(v: &QuadValue) -> i8 {
    match v.sign() {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

pub fn compare_quad(u: &QuadValue, v: &QuadValue) -> Ordering {
    let d = u - v;
    d.sign()
}

/// `⌊n√3⌋`.
pub fn floor_mul_sqrt3(n: &BigInt) -> BigInt {
    let r = (n * n * 3u32).sqrt();
    if n.is_negative() {
        -r - 1
    } else {
        r
    }
}

/// Nearest integer to `n√3` together with the exact signed residue.
pub fn dist_to_nearest(n: &BigInt) -> FracWitness {
    let m = floor_mul_sqrt3(n);
    // m is nearest iff n√3 − m < 1/2 iff 2m + 1 − 2n√3 > 0.
    let probe = QuadValue::new(
        BigRational::from_integer(&m * 2 + 1),
        BigRational::from_integer(-(n * BigInt::from(2))),
    );
    let k = if probe.sign() == Ordering::Greater { m } else { m + 1 };
    let residue = QuadValue::new(BigRational::from_integer(-k.clone()), BigRational::from_integer(n.clone()));
    debug_assert!(residue.abs() < QuadValue::rational(half()));
    FracWitness { n: n.clone(), k, residue }
}

pub(crate) fn sign_of_pair(a: &BigRational, b: &BigRational) -> Ordering {
    let sa = rsign(a);
    let sb = rsign(b);
    if sb == Ordering::Equal || sa == sb {
        return sa;
    }
    if sa == Ordering::Equal {
        return sb;
    }
    // Opposite signs: the term of larger magnitude wins. a² = 3b² only at zero.
    let lhs = a * a;
    let rhs = b * b * int(3);
    if lhs > rhs {
        sa
    } else {
        sb
    }
}

pub(crate) fn rsign(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators: divide at reduced precision.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}
