//! Exact sums of square roots over a fixed list of rational radicands.
//!
//! A [`SurdField`] holds radicands `r₀ … r_{k−1}`; a [`Surd`] is a rational
//! combination of the `2^k` products `√(r_{i₁}·…·r_{i_j})`, indexed by bit
//! mask. The sign of an element is decided by peeling off the top radical:
//! for `x = A + B·√r` with `A`, `B` in the smaller tower, the sign is that of
//! `A` or `B` when they agree, and otherwise that of `A² − r·B²` picks the
//! dominant term. Nothing here needs the radicands to be independent.

use super::{ratio_to_f64, rsign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

const MAX_RADICANDS: usize = 6;

#[derive(Debug, PartialEq, Eq)]
pub struct SurdField {
    radicands: Vec<BigRational>,
}

impl SurdField {
    pub fn new(radicands: Vec<BigRational>) -> Arc<Self> {
        assert!(radicands.len() <= MAX_RADICANDS, "too many radicands");
        assert!(
            radicands.iter().all(|r| !r.is_negative()),
            "radicands must be nonnegative"
        );
        Arc::new(SurdField { radicands })
    }

    pub fn from_ints(radicands: &[i64]) -> Arc<Self> {
        SurdField::new(
            radicands
                .iter()
                .map(|&r| BigRational::from_integer(BigInt::from(r)))
                .collect(),
        )
    }

    pub fn radicands(&self) -> &[BigRational] {
        &self.radicands
    }

    fn size(&self) -> usize {
        1 << self.radicands.len()
    }

    fn mask_radicand(&self, mask: usize) -> BigRational {
        let mut r = BigRational::one();
        for (i, g) in self.radicands.iter().enumerate() {
            if mask & (1 << i) != 0 {
                r *= g;
            }
        }
        r
    }
}

/// An element of a [`SurdField`].
#[derive(Clone, Debug)]
pub struct Surd {
    field: Arc<SurdField>,
    coeffs: Vec<BigRational>,
}

/// One term `coef·√radicand` of a serialized [`Surd`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurdTerm {
    #[serde(with = "crate::serde_util::rational")]
    pub coef: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub radicand: BigRational,
}

impl Surd {
    pub fn rational(field: &Arc<SurdField>, r: BigRational) -> Surd {
        let mut coeffs = vec![BigRational::zero(); field.size()];
        coeffs[0] = r;
        Surd { field: field.clone(), coeffs }
    }

    pub fn int(field: &Arc<SurdField>, n: i64) -> Surd {
        Surd::rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    /// `√rᵢ` for the i-th radicand of the field.
    pub fn root(field: &Arc<SurdField>, i: usize) -> Surd {
        assert!(i < field.radicands.len());
        let mut coeffs = vec![BigRational::zero(); field.size()];
        coeffs[1 << i] = BigRational::one();
        Surd { field: field.clone(), coeffs }
    }

    /// Embeds `a + b√3`, given the index of a radicand equal to 3.
    pub fn from_quad(field: &Arc<SurdField>, v: &super::QuadValue, sqrt3_index: usize) -> Surd {
        debug_assert_eq!(
            field.radicands[sqrt3_index],
            BigRational::from_integer(BigInt::from(3))
        );
        let mut s = Surd::rational(field, v.a().clone());
        s.coeffs[1 << sqrt3_index] = v.b().clone();
        s
    }

    pub fn field(&self) -> &Arc<SurdField> {
        &self.field
    }

    pub fn scale(&self, k: &BigRational) -> Surd {
        Surd {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn square(&self) -> Surd {
        self * self
    }

    pub fn sign(&self) -> Ordering {
        sign_rec(&self.coeffs, &self.field.radicands)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.sign() != Ordering::Less
    }

    /// Exact comparison of real values.
    pub fn cmp_value(&self, other: &Surd) -> Ordering {
        (self - other).sign()
    }

    pub fn approx(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| ratio_to_f64(c) * ratio_to_f64(&self.field.mask_radicand(m)).sqrt())
            .sum()
    }

    /// Largest integer not exceeding the value. The float estimate only seeds
    /// the search; the answer is fixed by exact sign tests.
    pub fn floor(&self) -> BigInt {
        let est = self.approx().floor();
        let mut k = if est.is_finite() && est.abs() < 1e30 {
            BigInt::from(est as i128)
        } else {
            BigInt::zero()
        };
        let at = |k: &BigInt| (self - &Surd::rational(&self.field, BigRational::from_integer(k.clone()))).sign();
        while at(&k) == Ordering::Less {
            k -= 1;
        }
        while at(&(&k + 1)) != Ordering::Less {
            k += 1;
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Rational coefficient of the product of radicands selected by `mask`.
    pub fn coeff(&self, mask: usize) -> &BigRational {
        &self.coeffs[mask]
    }

    /// Nonzero terms `coef·√radicand`, radicands multiplied out.
    pub fn terms(&self) -> Vec<SurdTerm> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| SurdTerm {
                coef: c.clone(),
                radicand: self.field.mask_radicand(m),
            })
            .collect()
    }
}

/// Sign of `Σ coef·√radicand` for an arbitrary list of terms.
pub fn sign_of_terms(terms: &[SurdTerm]) -> Ordering {
    if terms.len() > MAX_RADICANDS {
        // Merge equal radicands first; a long list usually collapses.
        let mut merged: Vec<SurdTerm> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|m| m.radicand == t.radicand) {
                Some(m) => m.coef += &t.coef,
                None => merged.push(t.clone()),
            }
        }
        assert!(merged.len() <= MAX_RADICANDS, "too many distinct radicands");
        return sign_of_terms(&merged);
    }
    let field = SurdField::new(terms.iter().map(|t| t.radicand.clone()).collect());
    let mut acc = Surd::int(&field, 0);
    for (i, t) in terms.iter().enumerate() {
        acc = &acc + &Surd::root(&field, i).scale(&t.coef);
    }
    acc.sign()
}

fn sign_rec(coeffs: &[BigRational], rads: &[BigRational]) -> Ordering {
    let k = rads.len();
    if k == 0 {
        return rsign(&coeffs[0]);
    }
    let half = 1 << (k - 1);
    let (lo, hi) = coeffs.split_at(half);
    let lower = &rads[..k - 1];
    let sb = sign_rec(hi, lower);
    let sa = sign_rec(lo, lower);
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let r = &rads[k - 1];
    let a2 = mul_rec(lo, lo, lower);
    let b2 = mul_rec(hi, hi, lower);
    let diff: Vec<BigRational> = a2.iter().zip(&b2).map(|(x, y)| x - y * r).collect();
    match sign_rec(&diff, lower) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

fn mul_rec(x: &[BigRational], y: &[BigRational], rads: &[BigRational]) -> Vec<BigRational> {
    let n = x.len();
    let mut out = vec![BigRational::zero(); n];
    let mut factor_cache: Vec<Option<BigRational>> = vec![None; n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let common = i & j;
            let f = factor_cache[common].get_or_insert_with(|| {
                let mut r = BigRational::one();
                for (b, g) in rads.iter().enumerate() {
                    if common & (1 << b) != 0 {
                        r *= g;
                    }
                }
                r
            });
            out[i ^ j] += xi * yj * &*f;
        }
    }
    out
}

fn check_same(a: &Surd, b: &Surd) {
    assert!(
        Arc::ptr_eq(&a.field, &b.field) || a.field == b.field,
        "surds from different fields"
    );
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        check_same(self, rhs);
        Surd {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        check_same(self, rhs);
        Surd {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        check_same(self, rhs);
        Surd {
            field: self.field.clone(),
            coeffs: mul_rec(&self.coeffs, &rhs.coeffs, &self.field.radicands),
        }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        &self + &rhs
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        &self - &rhs
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

/// `true` iff `√a ≥ b` for rationals, `a ≥ 0`.
pub fn sqrt_ge(a: &BigRational, b: &BigRational) -> bool {
    !b.is_positive() || b * b <= *a
}

/// Float rendering of an exact value, for reports only.
pub fn approx_terms(terms: &[SurdTerm]) -> f64 {
    terms
        .iter()
        .map(|t| t.coef.to_f64().unwrap_or(f64::NAN) * ratio_to_f64(&t.radicand).sqrt())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn single_radical_signs() {
        let f = SurdField::from_ints(&[3]);
        let s3 = Surd::root(&f, 0);
        // 7 − 4√3 > 0, 12 − 7√3 < 0
        assert_eq!((&Surd::int(&f, 7) - &s3.scale(&r(4, 1))).sign(), Ordering::Greater);
        assert_eq!((&Surd::int(&f, 12) - &s3.scale(&r(7, 1))).sign(), Ordering::Less);
    }

    #[test]
    fn nested_signs() {
        let f = SurdField::from_ints(&[2, 3, 5]);
        let s2 = Surd::root(&f, 0);
        let s3 = Surd::root(&f, 1);
        let s5 = Surd::root(&f, 2);
        // √2 + √3 ≈ 3.1463 vs √10 ≈ 3.1623: √2 + √3 − √5·√2 < 0
        let x = &(&s2 + &s3) - &(&s5 * &s2);
        assert_eq!(x.sign(), Ordering::Less);
        // (√2 + √3)² = 5 + 2√6
        let sq = (&s2 + &s3).square();
        let expect = &Surd::int(&f, 5) + &(&s2 * &s3).scale(&r(2, 1));
        assert_eq!(sq.cmp_value(&expect), Ordering::Equal);
        // Dependent radicands are fine: √2·√2 − 2 = 0.
        assert_eq!((&(&s2 * &s2) - &Surd::int(&f, 2)).sign(), Ordering::Equal);
    }

    #[test]
    fn perfect_square_radicand() {
        let f = SurdField::from_ints(&[3, 16]);
        let four = Surd::root(&f, 1);
        assert_eq!(four.cmp_value(&Surd::int(&f, 4)), Ordering::Equal);
        assert_eq!(four.floor(), BigInt::from(4));
    }

    #[test]
    fn floor_of_surd() {
        let f = SurdField::from_ints(&[2, 3]);
        let x = &Surd::root(&f, 0) + &Surd::root(&f, 1); // 3.146…
        assert_eq!(x.floor(), BigInt::from(3));
        assert_eq!(x.ceil(), BigInt::from(4));
        assert_eq!((-&x).floor(), BigInt::from(-4));
    }

    #[test]
    fn terms_sign() {
        let t = vec![
            SurdTerm { coef: r(1, 1), radicand: r(2, 1) },
            SurdTerm { coef: r(1, 1), radicand: r(3, 1) },
            SurdTerm { coef: r(-1, 1), radicand: r(10, 1) },
        ];
        assert_eq!(sign_of_terms(&t), Ordering::Less);
    }
}
