//! Right-hand sides of the area bounds, as sums of square-root terms.

use crate::quad::surd::SurdTerm;
use crate::quad::int;
use num_rational::BigRational;
use num_traits::Zero;

fn term(coef: BigRational, radicand: BigRational) -> SurdTerm {
    SurdTerm { coef, radicand }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn push(out: &mut Vec<SurdTerm>, coef: BigRational, radicand: BigRational) {
    if !coef.is_zero() {
        out.push(term(coef, radicand));
    }
}

/// `√3/2·q + (2√3 + √2)·√q·eps + 7·eps²`.
pub fn reduction_rhs(q: &BigRational, eps: &BigRational) -> Vec<SurdTerm> {
    let mut out = Vec::new();
    push(&mut out, q / int(2), int(3));
    push(&mut out, eps * int(2), q * int(3));
    push(&mut out, eps.clone(), q * int(2));
    push(&mut out, eps * eps * int(7), int(1));
    out
}

/// `√3/2·q + (√3·δ + ε/2)·√q + 2εy + 1/50` with `ε = (3√3 − 5)/2` and
/// `δ = 13/100`, expanded over the radicands 3, 3q, q and 1.
pub fn explicit_rhs(q: &BigRational, y: &BigRational) -> Vec<SurdTerm> {
    let delta = ratio(13, 100);
    let mut out = Vec::new();
    push(&mut out, q / int(2) + y * int(3), int(3));
    push(&mut out, delta + ratio(3, 4), q * int(3));
    push(&mut out, ratio(-5, 4), q.clone());
    push(&mut out, ratio(1, 50) - y * int(5), int(1));
    out
}
