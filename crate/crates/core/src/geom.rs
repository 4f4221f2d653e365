//! Integer lattice geometry: triangles, squared sides, twice-areas, the
//! non-obtuse predicate, membership in `T(D)` and canonical forms.

use crate::error::{Error, Result};
use crate::quad::QuadValue;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Coordinates are kept below this bound so that squared lengths and
/// determinants fit in `i128` with room to spare.
pub const COORD_LIMIT: i64 = 1 << 40;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn checked(x: i64, y: i64) -> Result<Self> {
        for c in [x, y] {
            if c.unsigned_abs() >= COORD_LIMIT as u64 {
                return Err(Error::CoordinateRange(c));
            }
        }
        Ok(LatticePoint { x, y })
    }

    pub fn sub(self, o: LatticePoint) -> (i64, i64) {
        (self.x - o.x, self.y - o.y)
    }

    pub fn dist_sq(self, o: LatticePoint) -> i128 {
        let (dx, dy) = self.sub(o);
        norm_sq(dx, dy)
    }

    /// Applies one of the 8 symmetries of the square lattice fixing the origin.
    pub fn transform(self, sym: u8) -> LatticePoint {
        let (x, y) = (self.x, self.y);
        let (x, y) = match sym & 3 {
            0 => (x, y),
            1 => (-y, x),
            2 => (-x, -y),
            _ => (y, -x),
        };
        if sym & 4 != 0 {
            LatticePoint::new(x, -y)
        } else {
            LatticePoint::new(x, y)
        }
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[i64; 2]>::deserialize(d)?;
        LatticePoint::checked(x, y).map_err(serde::de::Error::custom)
    }
}

#[inline]
pub fn norm_sq(x: i64, y: i64) -> i128 {
    let (x, y) = (x as i128, y as i128);
    x * x + y * y
}

#[inline]
pub fn cross(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

#[inline]
pub fn dot(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.0 as i128 + a.1 as i128 * b.1 as i128
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeTriangle {
    pub p: [LatticePoint; 3],
}

impl Serialize for LatticeTriangle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.p.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeTriangle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(LatticeTriangle { p: <[LatticePoint; 3]>::deserialize(d)? })
    }
}

/// Sorted squared sides and twice the area.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleMetrics {
    pub s: [i128; 3],
    pub t: i128,
}

impl TriangleMetrics {
    pub fn min_side_sq(&self) -> i128 {
        self.s[0]
    }

    /// `4t² = 4·s1·s2 − (s1 + s2 − s3)²`, in big integers.
    pub fn heron_holds(&self) -> bool {
        let [s1, s2, s3] = self.s.map(BigInt::from);
        let t = BigInt::from(self.t);
        let k = &s1 + &s2 - &s3;
        BigInt::from(4) * &t * &t == BigInt::from(4) * s1 * s2 - &k * &k
    }
}

impl LatticeTriangle {
    pub fn new(p0: LatticePoint, p1: LatticePoint, p2: LatticePoint) -> Self {
        LatticeTriangle { p: [p0, p1, p2] }
    }

    pub fn from_coords(c: [(i64, i64); 3]) -> Self {
        LatticeTriangle { p: c.map(|(x, y)| LatticePoint::new(x, y)) }
    }

    pub fn twice_area(&self) -> i128 {
        twice_area(self)
    }

    pub fn metrics(&self) -> TriangleMetrics {
        squared_sides(self)
    }
}

pub fn twice_area(tri: &LatticeTriangle) -> i128 {
    let [a, b, c] = tri.p;
    cross(b.sub(a), c.sub(a)).abs()
}

pub fn squared_sides(tri: &LatticeTriangle) -> TriangleMetrics {
    let [a, b, c] = tri.p;
    let mut s = [a.dist_sq(b), b.dist_sq(c), c.dist_sq(a)];
    s.sort_unstable();
    let m = TriangleMetrics { s, t: twice_area(tri) };
    debug_assert!(m.heron_holds());
    m
}

/// Largest angle at most a right angle. Degenerate triangles are rejected.
pub fn is_nonobtuse(tri: &LatticeTriangle) -> Result<bool> {
    let m = squared_sides(tri);
    if m.t == 0 {
        return Err(Error::Degenerate);
    }
    Ok(m.s[0] + m.s[1] >= m.s[2])
}

/// Membership in `T(√q)`: non-obtuse with every squared side at least `q`.
#[allow(non_snake_case)]
pub fn in_T(tri: &LatticeTriangle, q: &BigRational) -> Result<bool> {
    if !is_nonobtuse(tri)? {
        return Ok(false);
    }
    let m = squared_sides(tri);
    Ok(BigRational::from_integer(BigInt::from(m.s[0])) >= *q)
}

/// Representative of the orbit under translations, the 8 lattice symmetries
/// and vertex relabelling: for each symmetry sort the vertices, translate the
/// first to the origin, and keep the lexicographically least result.
pub fn canonical_form(tri: &LatticeTriangle) -> LatticeTriangle {
    (0..8u8)
        .map(|sym| {
            let mut p = tri.p.map(|v| v.transform(sym));
            p.sort_unstable();
            let o = p[0];
            LatticeTriangle { p: p.map(|v| LatticePoint::new(v.x - o.x, v.y - o.y)) }
        })
        .min()
        .expect("eight symmetries")
}

/// Both sides of `|OB|² + |AW|² = |AO|² + |BW|² + 2|AB|·|OW|`.
///
/// With `AB ∥ OW` pointing the same way, `|AB|·|OW|` is the dot product of
/// `B − A` and `W − O`, so the right-hand side is an integer; it is returned
/// as a [`QuadValue`] with zero √3 part.
pub fn trapezoid_sum_check(
    o: LatticePoint,
    a: LatticePoint,
    b: LatticePoint,
    w: LatticePoint,
) -> Result<(i128, QuadValue)> {
    let ab = b.sub(a);
    let ow = w.sub(o);
    if cross(ab, ow) != 0 {
        return Err(Error::NotParallel);
    }
    let d = dot(ab, ow);
    if d < 0 {
        return Err(Error::NotTrapezoidOrder);
    }
    let lhs = o.dist_sq(b) + a.dist_sq(w);
    let rhs = a.dist_sq(o) + b.dist_sq(w) + 2 * d;
    let rhs = QuadValue::rational(BigRational::from_integer(BigInt::from(rhs)));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(c: [(i64, i64); 3]) -> LatticeTriangle {
        LatticeTriangle::from_coords(c)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn area_examples() {
        assert_eq!(twice_area(&tri([(0, 0), (1, 0), (0, 1)])), 1);
        assert_eq!(twice_area(&tri([(0, 0), (30, 112), (-82, 82)])), 11644);
        assert_eq!(twice_area(&tri([(0, 0), (2, 4), (1, 2)])), 0);
    }

    #[test]
    fn side_examples() {
        let m = squared_sides(&tri([(0, 0), (2, 0), (1, 2)]));
        assert_eq!((m.s, m.t), ([4, 5, 5], 4));
        let m = squared_sides(&tri([(0, 0), (30, 112), (-82, 82)]));
        assert_eq!((m.s, m.t), ([13444, 13444, 13448], 11644));
        assert!(m.heron_holds());
    }

    #[test]
    fn obtuse_examples() {
        assert!(is_nonobtuse(&tri([(0, 0), (1, 0), (0, 1)])).unwrap());
        assert!(!is_nonobtuse(&tri([(0, 0), (4, 0), (1, 1)])).unwrap());
        assert!(is_nonobtuse(&tri([(0, 0), (2, 0), (1, 2)])).unwrap());
        assert!(matches!(is_nonobtuse(&tri([(0, 0), (2, 4), (1, 2)])), Err(Error::Degenerate)));
    }

    #[test]
    fn membership_examples() {
        let unit = tri([(0, 0), (1, 0), (0, 1)]);
        assert!(in_T(&unit, &q(1)).unwrap());
        assert!(!in_T(&unit, &q(2)).unwrap());
        assert!(in_T(&tri([(0, 0), (30, 112), (-82, 82)]), &q(13421)).unwrap());
    }

    #[test]
    fn canonical_examples() {
        let a = canonical_form(&tri([(5, 5), (6, 5), (5, 6)]));
        let b = canonical_form(&tri([(0, 0), (0, 1), (1, 0)]));
        let c = canonical_form(&tri([(0, 0), (-1, 0), (0, -1)]));
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(canonical_form(&a), a);
    }

    #[test]
    fn trapezoid_examples() {
        let p = LatticePoint::new;
        let (l, r) = trapezoid_sum_check(p(0, 0), p(1, 1), p(2, 1), p(3, 0)).unwrap();
        assert_eq!(l, 10);
        assert_eq!(r, QuadValue::from_ints(10, 0));
        let (l, r) = trapezoid_sum_check(p(0, 0), p(0, 1), p(1, 1), p(1, 0)).unwrap();
        assert_eq!((l, r), (4, QuadValue::from_ints(4, 0)));
        assert!(matches!(
            trapezoid_sum_check(p(0, 0), p(0, 1), p(1, 2), p(1, 0)),
            Err(Error::NotParallel)
        ));
    }

    #[test]
    fn serde_shape() {
        let t = tri([(0, 0), (30, 112), (-82, 82)]);
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(js, "[[0,0],[30,112],[-82,82]]");
        let m = serde_json::to_string(&t.metrics()).unwrap();
        assert_eq!(m, r#"{"s":[13444,13444,13448],"t":11644}"#);
    }
}
