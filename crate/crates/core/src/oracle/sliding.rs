//! Sliding: two M-triangles `OWA`, `OWB` on a common edge `OW` with `A ≠ B`
//! strictly on the same side of the line `OW`.

use super::{exact_S, SValue};
use crate::error::{Error, Result};
use crate::geom::{cross, trapezoid_sum_check, LatticePoint};
use crate::quad::int;
use crate::quad::surd::{sign_of_terms, SurdTerm};
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlidingWitness {
    pub o: LatticePoint,
    pub w: LatticePoint,
    pub a: LatticePoint,
    pub b: LatticePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlidingReport {
    #[serde(with = "crate::serde_util::rational")]
    pub q: BigRational,
    pub s: u64,
    pub slides: bool,
    pub witness: Option<SlidingWitness>,
    pub bound_ok: Option<bool>,
}

/// For every placement of every M-triangle with a directed edge `e` from the
/// origin in the domain `x > 0, y ≥ 0` and the apex on the left of `e`,
/// the set of apex positions keyed by `e`.
fn apexes_by_edge(sv: &SValue) -> BTreeMap<(i64, i64), BTreeSet<LatticePoint>> {
    let mut map: BTreeMap<(i64, i64), BTreeSet<LatticePoint>> = BTreeMap::new();
    for tri in &sv.m_triangles {
        for sym in 0..8u8 {
            let p = tri.p.map(|v| v.transform(sym));
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    let k = 3 - i - j;
                    let e = p[j].sub(p[i]);
                    if e.0 <= 0 || e.1 < 0 {
                        continue;
                    }
                    let apex = p[k].sub(p[i]);
                    if cross(e, apex) > 0 {
                        map.entry(e).or_default().insert(LatticePoint::new(apex.0, apex.1));
                    }
                }
            }
        }
    }
    map
}

/// Sliding witness from an already computed [`SValue`].
pub fn sliding_from(sv: &SValue) -> SlidingReport {
    let witness = apexes_by_edge(sv).into_iter().find(|(_, s)| s.len() >= 2).map(|(e, s)| {
        let mut it = s.into_iter();
        let a = it.next().expect("two apexes");
        let b = it.next().expect("two apexes");
        SlidingWitness { o: LatticePoint::new(0, 0), w: LatticePoint::new(e.0, e.1), a, b }
    });
    let bound_ok = witness.map(|_| sliding_bound_holds(&sv.q, sv.s));
    SlidingReport { q: sv.q.clone(), s: sv.s, slides: witness.is_some(), witness, bound_ok }
}

pub fn detect_sliding(q: &BigRational) -> Result<SlidingReport> {
    Ok(sliding_from(&exact_S(q)?))
}

/// `s > √3/2·q + √q/(2√3) − 1`, i.e. `2√3·(s + 1) > 3q + √q`.
pub fn sliding_bound_holds(q: &BigRational, s: u64) -> bool {
    let terms = [
        SurdTerm { coef: int(2) * int(s as i64 + 1), radicand: int(3) },
        SurdTerm { coef: -(q * int(3)), radicand: int(1) },
        SurdTerm { coef: int(-1), radicand: q.clone() },
    ];
    sign_of_terms(&terms) == std::cmp::Ordering::Greater
}

/// The lower bound at a sliding value, with the two facts its proof rests
/// on re-checked on the witness: the trapezoid identity, and
/// `max(|OB|², |AW|²) ≥ q + √q`.
pub fn check_sliding_bound(q: &BigRational) -> Result<bool> {
    let rep = detect_sliding(q)?;
    let Some(w) = rep.witness else {
        return Err(Error::Precondition(format!("no sliding at q = {q}")));
    };
    Ok(check_witness(q, &w)? && sliding_bound_holds(q, rep.s))
}

/// Trapezoid identity and the side bound on one witness.
pub fn check_witness(q: &BigRational, w: &SlidingWitness) -> Result<bool> {
    // Orient AB along OW.
    let (a, b) = if crate::geom::dot(w.b.sub(w.a), w.w.sub(w.o)) >= 0 { (w.a, w.b) } else { (w.b, w.a) };
    let (lhs, rhs) = trapezoid_sum_check(w.o, a, b, w.w)?;
    if rhs != crate::quad::QuadValue::rational(BigRational::from_integer(lhs.into())) {
        return Ok(false);
    }
    let m = BigRational::from_integer(w.o.dist_sq(b).max(a.dist_sq(w.w)).into());
    // m ≥ q + √q  ⇔  m − q ≥ 0 and (m − q)² ≥ q
    let gap = m - q;
    Ok(!gap.is_negative() && &gap * &gap >= *q)
}
