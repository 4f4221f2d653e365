//! Naive reference enumerator: every triangle with a vertex at the origin
//! and the other two in a square box.
#![allow(dead_code)]

use trisearch_core::geom::{canonical_form, in_T};
use trisearch_core::{BigRational, LatticePoint, LatticeTriangle};

/// `(S, sorted canonical M-triangles)` for integer `q ≥ 1`.
///
/// The right isosceles triangle with legs `k = ⌈√q⌉` bounds the answer by
/// `T = k²`. In a non-obtuse triangle the two sides at the largest angle
/// satisfy `T ≥ (√3/2)·a·b`, so with `a ≥ √q` every side is at most
/// `√2·2T/(√3·√q)`; the box half-width `R` is the least integer with
/// `3q·R² ≥ 8T²`.
pub fn naive_s(q: u64) -> (u64, Vec<LatticeTriangle>) {
    let mut k = 0u64;
    while k * k < q {
        k += 1;
    }
    let t0 = (k * k) as i128;
    let mut r = 0i64;
    while 3 * q as i128 * (r as i128).pow(2) < 8 * t0 * t0 {
        r += 1;
    }
    let qr = BigRational::from_integer((q as i64).into());
    let pts: Vec<LatticePoint> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| LatticePoint::new(x, y)))
        .filter(|p| (p.x as i128).pow(2) + (p.y as i128).pow(2) >= q as i128)
        .collect();
    let o = LatticePoint::new(0, 0);
    let mut best = t0;
    let mut found: Vec<LatticeTriangle> = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let tri = LatticeTriangle::new(o, a, b);
            let t = tri.twice_area();
            if t == 0 || t > best || a.dist_sq(b) < q as i128 {
                continue;
            }
            if !in_T(&tri, &qr).unwrap() {
                continue;
            }
            if t < best {
                best = t;
                found.clear();
            }
            found.push(canonical_form(&tri));
        }
    }
    found.sort_unstable();
    found.dedup();
    (best as u64, found)
}
