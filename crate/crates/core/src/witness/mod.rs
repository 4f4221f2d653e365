//! Upper bounds on `S(D)` from explicit near-equilateral triangles.
//!
//! Given `(x, y)` with `‖√3x‖` and `‖√3y‖` small, the rotation of `(x, y)` by
//! 60° about the origin lands close to the lattice point `(z, t)`, and the
//! triangle `(0,0), (2x, 2y), (z, t)` is non-obtuse with area close to the
//! equilateral one. Every certificate produced here is verified exactly by
//! [`verify_certificate`] before it is returned.

mod bounds;

pub use bounds::{explicit_rhs, reduction_rhs};

use crate::diophantine::{seven_eps, seven_point_step, valid_multipliers};
use crate::error::{Error, Result};
use crate::geom::{in_T, LatticePoint, LatticeTriangle};
use crate::quad::fast;
use crate::quad::surd::{sign_of_terms, SurdTerm};
use crate::quad::{int, QuadValue, Surd, SurdField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::sync::Arc;

/// A pair `(x, y)` of integers or half-integers, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub twice_x: i64,
    pub twice_y: i64,
    #[serde(with = "crate::serde_util::rational")]
    pub norm_sq: BigRational,
    pub eps: QuadValue,
    /// `x² + y² − N`, as a sum of square-root terms.
    pub slack: Vec<SurdTerm>,
}

impl PairWitness {
    pub fn x(&self) -> BigRational {
        BigRational::new(self.twice_x.into(), 2.into())
    }

    pub fn y(&self) -> BigRational {
        BigRational::new(self.twice_y.into(), 2.into())
    }

    fn build(twice_x: i64, twice_y: i64, eps: QuadValue, n: &Surd) -> Self {
        let norm_sq = norm_sq_of(twice_x, twice_y);
        let slack = &Surd::rational(n.field(), norm_sq.clone()) - n;
        PairWitness { twice_x, twice_y, norm_sq, eps, slack: slack.terms() }
    }
}

fn norm_sq_of(twice_x: i64, twice_y: i64) -> BigRational {
    let (a, b) = (twice_x as i128, twice_y as i128);
    BigRational::new(BigInt::from(a * a + b * b), BigInt::from(4))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// Integer pair, rational `eps`, the basic reduction bound.
    Reduction,
    /// Half-integer pair, `ε = (3√3 − 5)/2`, `δ = 13/100`.
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub kind: WitnessKind,
    #[serde(with = "crate::serde_util::rational")]
    pub q: BigRational,
    pub eps: QuadValue,
    #[serde(with = "crate::serde_util::opt_rational", default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<BigRational>,
    pub pair: PairWitness,
    pub z: i64,
    pub t: i64,
    pub triangle: LatticeTriangle,
    pub twice_area: i128,
    pub bound_rhs: Vec<SurdTerm>,
}

impl WitnessCertificate {
    /// `twice_area − √3/2·q`.
    pub fn residual(&self) -> QuadValue {
        QuadValue::new(BigRational::from_integer(self.twice_area.into()), -(&self.q / int(2)))
    }

    pub fn eps_rational(&self) -> Option<&BigRational> {
        self.eps.is_rational().then(|| self.eps.a())
    }
}

/// `‖v‖` for `v` in ℚ(√3).
fn dist(v: &QuadValue) -> QuadValue {
    v.dist_to_int()
}

fn half_int(twice: i64) -> BigRational {
    BigRational::new(twice.into(), 2.into())
}

/// `x − √3y` and `y + √3x`.
fn rotated(twice_x: i64, twice_y: i64) -> (QuadValue, QuadValue) {
    let (x, y) = (half_int(twice_x), half_int(twice_y));
    (QuadValue::new(x.clone(), -y.clone()), QuadValue::new(y, x))
}

fn q_field(q: &BigRational, extra: &[i64]) -> Arc<SurdField> {
    let mut r: Vec<BigRational> = extra.iter().map(|&k| int(k)).collect();
    r.push(q.clone());
    SurdField::new(r)
}

/// Inclusive range of integers `R` with `(√q + √2·eps)² ≤ 4R ≤ (√q + 2·eps)²`.
pub fn reduction_norm_range(q: &BigRational, eps: &BigRational) -> (BigInt, BigInt) {
    let f = q_field(q, &[2]);
    let sq = Surd::root(&f, 1);
    let lo = (&sq + &Surd::root(&f, 0).scale(eps)).square();
    let hi = (&sq + &Surd::int(&f, 2).scale(eps)).square();
    let four = BigInt::from(4);
    let r_lo = Integer::div_ceil(&lo.ceil(), &four);
    let r_hi = Integer::div_floor(&hi.floor(), &four);
    (r_lo, r_hi)
}

/// Pairs `(x, y)` of nonnegative integers with `‖√3x‖, ‖√3y‖ < eps` and
/// `x² + y²` in the reduction annulus, ascending in `x` then `y`.
pub fn reduction_pairs(q: &BigRational, eps: &BigRational) -> Vec<(i64, i64)> {
    let (r_lo, r_hi) = reduction_norm_range(q, eps);
    let (Some(r_lo), Some(r_hi)) = (r_lo.to_i128(), r_hi.to_i128()) else {
        return Vec::new();
    };
    if r_hi < r_lo || r_hi < 0 {
        return Vec::new();
    }
    let r_lo = r_lo.max(0);
    let x_max = fast::isqrt(r_hi as u128) as i64;
    let mut xs = vec![0i64];
    xs.extend(valid_multipliers(x_max, eps));
    let mut out = Vec::new();
    for &x in &xs {
        let x2 = x as i128 * x as i128;
        let lo = (r_lo - x2).max(0) as u128;
        let hi = (r_hi - x2) as u128;
        let mut y = fast::isqrt(lo) as i64;
        if (y as u128) * (y as u128) < lo {
            y += 1;
        }
        let y_hi = fast::isqrt(hi) as i64;
        while y <= y_hi {
            if fast::dist_lt(y, eps) {
                out.push((x, y));
            }
            y += 1;
        }
    }
    out
}

/// Greedy pair: the largest `x ≤ √N` with `‖√3x‖ < eps`, then the smallest
/// `y ≥ √(N − x²)` with `‖√3y‖ < eps`.
pub fn find_pair(n: &BigRational, eps: &BigRational) -> Result<PairWitness> {
    if *n < BigRational::one() || !eps.is_positive() || *eps >= BigRational::one() {
        return Err(Error::InvalidArgument(format!("find_pair needs N >= 1 and 0 < eps < 1, got N = {n}, eps = {eps}")));
    }
    let root = n.floor().to_integer().sqrt();
    let root = root.to_i64().ok_or_else(|| Error::InvalidArgument("N too large".into()))?;
    let x = crate::diophantine::largest_below(root, eps)?
        .s
        .to_i64()
        .expect("x below an i64 bound");
    let rest = n - BigRational::from_integer(BigInt::from(x as i128 * x as i128));
    let mut y = rest.ceil().to_integer().sqrt().to_i64().expect("bounded by x");
    while BigRational::from_integer(BigInt::from(y as i128 * y as i128)) < rest {
        y += 1;
    }
    while !fast::dist_lt(y, eps) {
        y += 1;
    }
    let field = SurdField::new(Vec::new());
    let n_surd = Surd::rational(&field, n.clone());
    Ok(PairWitness::build(2 * x, 2 * y, QuadValue::rational(eps.clone()), &n_surd))
}

fn assemble(
    kind: WitnessKind,
    q: &BigRational,
    eps: QuadValue,
    delta: Option<BigRational>,
    pair: PairWitness,
) -> Result<WitnessCertificate> {
    let (c1, c2) = rotated(pair.twice_x, pair.twice_y);
    let z = c1.round().to_i64().ok_or_else(|| Error::InvalidArgument("coordinate overflow".into()))?;
    let t = c2.round().to_i64().ok_or_else(|| Error::InvalidArgument("coordinate overflow".into()))?;
    let triangle = LatticeTriangle::new(
        LatticePoint::checked(0, 0)?,
        LatticePoint::checked(pair.twice_x, pair.twice_y)?,
        LatticePoint::checked(z, t)?,
    );
    let bound_rhs = match kind {
        WitnessKind::Reduction => reduction_rhs(q, eps.a()),
        WitnessKind::Explicit => explicit_rhs(q, &half_int(pair.twice_y)),
    };
    let cert = WitnessCertificate {
        kind,
        q: q.clone(),
        eps,
        delta,
        pair,
        z,
        t,
        twice_area: triangle.twice_area(),
        triangle,
        bound_rhs,
    };
    check_certificate(&cert)?;
    Ok(cert)
}

fn no_witness(q: &BigRational, eps: impl ToString) -> Error {
    Error::NoWitness { q: q.to_string(), eps: eps.to_string() }
}

/// The reduction witness for `(q, eps)`: the first admissible pair in
/// ascending `(x, y)` order.
pub fn build_witness(q: &BigRational, eps: &BigRational) -> Result<WitnessCertificate> {
    check_reduction_args(q, eps)?;
    let pairs = reduction_pairs(q, eps);
    let &(x, y) = pairs.first().ok_or_else(|| no_witness(q, eps))?;
    reduction_certificate(q, eps, x, y)
}

/// Every reduction witness for `(q, eps)`, ascending in `(x, y)`.
pub fn all_witnesses(q: &BigRational, eps: &BigRational) -> Result<Vec<WitnessCertificate>> {
    check_reduction_args(q, eps)?;
    reduction_pairs(q, eps)
        .into_iter()
        .map(|(x, y)| reduction_certificate(q, eps, x, y))
        .collect()
}

fn check_reduction_args(q: &BigRational, eps: &BigRational) -> Result<()> {
    if *q < int(100) || !eps.is_positive() || *eps >= crate::quad::half() {
        return Err(Error::InvalidArgument(format!("reduction witness needs q >= 100 and 0 < eps < 1/2, got q = {q}, eps = {eps}")));
    }
    Ok(())
}

fn reduction_certificate(q: &BigRational, eps: &BigRational, x: i64, y: i64) -> Result<WitnessCertificate> {
    let field = SurdField::new(vec![int(2), q.clone()]);
    let d = Surd::root(&field, 1);
    // N = ((√q + √2·eps)/2)², the lower end of the annulus.
    let n = (&d + &Surd::root(&field, 0).scale(eps)).square().scale(&BigRational::new(1.into(), 4.into()));
    let pair = PairWitness::build(2 * x, 2 * y, QuadValue::rational(eps.clone()), &n);
    assemble(WitnessKind::Reduction, q, QuadValue::rational(eps.clone()), None, pair)
}

/// `δ = 13/100`.
pub fn explicit_delta() -> BigRational {
    BigRational::new(13.into(), 100.into())
}

/// Field `ℚ(√3, √5, √q)` with `√N = (√q + √5·ε/2)/2` and `ε = (3√3 − 5)/2`.
fn explicit_sqrt_n(q: &BigRational) -> Surd {
    let f = q_field(q, &[3, 5]);
    let eps = Surd::from_quad(&f, &seven_eps(), 0);
    let half = BigRational::new(1.into(), 2.into());
    (&Surd::root(&f, 2) + &(&Surd::root(&f, 1) * &eps).scale(&half)).scale(&half)
}

/// Largest integer `j ≥ 0` with `j² ≤ v`, for `v ≥ 0`.
fn floor_sqrt_surd(v: &Surd) -> BigInt {
    let est = v.approx().max(0.0).sqrt().floor();
    let mut j = BigInt::from(est as i128);
    let sq = |j: &BigInt| Surd::rational(v.field(), BigRational::from_integer(j * j));
    while j.is_positive() && sq(&j).cmp_value(v) == Ordering::Greater {
        j -= 1;
    }
    while sq(&(&j + 1)).cmp_value(v) != Ordering::Greater {
        j += 1;
    }
    j
}

/// `a ≤ c·√w` for `c ≥ 0`, `w ≥ 0`, decided by squaring.
fn le_scaled_sqrt(a: &Surd, c: &BigRational, w: &Surd) -> bool {
    if a.sign() != Ordering::Greater {
        return true;
    }
    (&w.scale(&(c * c)) - &a.square()).is_nonnegative()
}

/// The half-integer pair for `N` given through `√N`.
fn halfint_pair_from_root(root: &Surd) -> Result<PairWitness> {
    let f = root.field().clone();
    let n = root.square();
    let eps = seven_eps();
    // 2x: the seven-point step below ⌊2√N⌋ on the integers, no shift.
    let top = root.scale(&int(2)).floor();
    let (s, _) = seven_point_step(&(&top * 2), &QuadValue::zero());
    let twice_x = (&top - s).to_i64().ok_or_else(|| Error::InvalidArgument("N too large".into()))?;
    // √3x lies within ε/2 of k/2; y must make y + k/2 an integer.
    let k = QuadValue::sqrt3_times(int(twice_x)).round();
    let x = half_int(twice_x);
    let rest = &n - &Surd::rational(&f, &x * &x);
    let j = floor_sqrt_surd(&rest.scale(&int(4)));
    let mut twice_top: BigInt = j + 14;
    let parity: BigInt = &twice_top - &k;
    if parity.is_odd() {
        twice_top -= 1;
    }
    let shift = QuadValue::rational(-x.clone());
    let (s, _) = seven_point_step(&twice_top, &shift);
    let twice_y = (&twice_top - 2 * s).to_i64().expect("bounded by 2x");
    let pair = PairWitness::build(twice_x, twice_y, eps, &n);
    check_halfint_pair(&pair, root)?;
    Ok(pair)
}

/// The conditions on a half-integer pair for `N = root²`, all exact.
fn check_halfint_pair(pair: &PairWitness, root: &Surd) -> Result<()> {
    let f = root.field().clone();
    let n = root.square();
    let eps = seven_eps();
    let (c1, c2) = rotated(pair.twice_x, pair.twice_y);
    let fail = |what: &str| Err(Error::CheckFailed(format!("half-integer pair: {what}")));
    if dist(&c1) >= eps {
        return fail("‖x − √3y‖ < ε");
    }
    if dist(&c2).scale(&int(2)) >= eps {
        return fail("‖y + √3x‖ < ε/2");
    }
    let r = Surd::rational(&f, pair.norm_sq.clone());
    let slack = &r - &n;
    if !slack.is_nonnegative() {
        return fail("x² + y² ≥ N");
    }
    // w = 7√N − 49/4; f(N) = 49 + 14·√w.
    let w = &root.scale(&int(7)) - &Surd::rational(&f, BigRational::new(49.into(), 4.into()));
    if !w.is_nonnegative() {
        return fail("7√N ≥ 49/4");
    }
    if !le_scaled_sqrt(&(&slack - &Surd::int(&f, 49)), &int(14), &w) {
        return fail("x² + y² ≤ N + f(N)");
    }
    let y_minus_7 = Surd::rational(&f, pair.y() - int(7));
    if !le_scaled_sqrt(&y_minus_7, &BigRational::one(), &w) {
        return fail("y ≤ 7 + √(7√N − 49/4)");
    }
    Ok(())
}

/// Half-integers `x, y` with `‖x − √3y‖ < ε`, `‖y + √3x‖ < ε/2`,
/// `x² + y² ∈ [N, N + f(N)]` and `y ≤ 7 + √(7√N − 49/4)`.
pub fn find_halfint_pair(n: &BigRational) -> Result<PairWitness> {
    if *n <= int(1000) {
        return Err(Error::InvalidArgument(format!("find_halfint_pair needs N > 1000, got {n}")));
    }
    let f = SurdField::new(vec![int(3), n.clone()]);
    halfint_pair_from_root(&Surd::root(&f, 1))
}

/// The explicit witness with `ε = (3√3 − 5)/2` and `δ = 13/100`.
pub fn build_witness_explicit(q: &BigRational) -> Result<WitnessCertificate> {
    if *q <= int(1_000_000) {
        return Err(Error::InvalidArgument(format!("explicit witness needs q > 10^6, got {q}")));
    }
    let root = explicit_sqrt_n(q);
    let pair = halfint_pair_from_root(&root)?;
    let delta = explicit_delta();
    if !explicit_upper_ok(q, &pair.norm_sq, &delta) {
        return Err(no_witness(q, seven_eps()));
    }
    assemble(WitnessKind::Explicit, q, seven_eps(), Some(delta), pair)
}

/// `4R ≤ (√q + δ)²`.
fn explicit_upper_ok(q: &BigRational, norm_sq: &BigRational, delta: &BigRational) -> bool {
    let f = SurdField::new(vec![q.clone()]);
    let lhs = Surd::rational(&f, norm_sq * int(4));
    let rhs = (&Surd::root(&f, 0) + &Surd::rational(&f, delta.clone())).square();
    lhs.cmp_value(&rhs) != Ordering::Greater
}

/// `N + f(N) ≥ ((√q + δ)/2)²`, the reach of the half-integer construction.
pub fn explicit_feasible(q: &BigRational) -> bool {
    let root = explicit_sqrt_n(q);
    let f = root.field().clone();
    let n = root.square();
    let w = &root.scale(&int(7)) - &Surd::rational(&f, BigRational::new(49.into(), 4.into()));
    let target = (&Surd::root(&f, 2) + &Surd::rational(&f, explicit_delta()))
        .square()
        .scale(&BigRational::new(1.into(), 4.into()));
    // target − N − 49 ≤ 14·√w
    le_scaled_sqrt(&(&(&target - &n) - &Surd::int(&f, 49)), &int(14), &w)
}

/// The ladder of `eps` values tried by [`best_bound`]: `D^(−1/5)·2^(j/4)`
/// for `j ≥ −16` while below 1/2, each rounded to a multiple of `2^(−20)`.
pub fn eps_ladder(q: &BigRational) -> Vec<BigRational> {
    let d = crate::quad::ratio_to_f64(q).sqrt();
    let base = d.powf(-0.2);
    let den = 1i64 << 20;
    let mut out: Vec<BigRational> = Vec::new();
    for j in -16..64 {
        let e = base * 2f64.powf(j as f64 / 4.0);
        let num = (e * den as f64).round() as i64;
        let r = BigRational::new(num.into(), den.into());
        if r >= crate::quad::half() {
            break;
        }
        if r.is_positive() && out.last() != Some(&r) {
            out.push(r);
        }
    }
    out
}

/// The smallest reduction witness over [`eps_ladder`]. Ties keep the
/// smaller `eps`, then the earlier pair.
pub fn best_bound(q: &BigRational) -> Result<WitnessCertificate> {
    if *q < int(100) {
        return Err(Error::InvalidArgument(format!("best_bound needs q >= 100, got {q}")));
    }
    let mut best: Option<WitnessCertificate> = None;
    for eps in eps_ladder(q) {
        let pairs = reduction_pairs(q, &eps);
        for (x, y) in pairs {
            let area = quick_area(x, y);
            if best.as_ref().is_some_and(|b| area >= b.twice_area) {
                continue;
            }
            let cert = reduction_certificate(q, &eps, x, y)?;
            best = Some(cert);
        }
    }
    best.ok_or_else(|| Error::CapExceeded { cap: 0, what: format!("no reduction witness on the eps ladder for q = {q}") })
}

/// Twice the area of the reduction triangle, without building a certificate.
fn quick_area(x: i64, y: i64) -> i128 {
    let (x, y) = (x as i128, y as i128);
    let z = fast::round_affine(x, -y, 1).expect("small");
    let t = fast::round_affine(y, x, 1).expect("small");
    (2 * x * t - 2 * y * z).abs()
}

/// Re-derives every property of a certificate from its raw fields.
pub fn verify_certificate(cert: &WitnessCertificate) -> Result<bool> {
    match check_certificate(cert) {
        Ok(()) => Ok(true),
        Err(Error::CheckFailed(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Like [`verify_certificate`], but names the first failed check.
pub fn check_certificate(cert: &WitnessCertificate) -> Result<()> {
    let fail = |what: String| Err(Error::CheckFailed(what));
    let p = &cert.pair;
    let q = &cert.q;
    if !q.is_positive() {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    if p.norm_sq != norm_sq_of(p.twice_x, p.twice_y) {
        return fail("norm_sq differs from x² + y²".into());
    }
    if p.eps != cert.eps {
        return fail("pair eps differs from certificate eps".into());
    }
    let expected = LatticeTriangle::new(
        LatticePoint::new(0, 0),
        LatticePoint::new(p.twice_x, p.twice_y),
        LatticePoint::new(cert.z, cert.t),
    );
    if cert.triangle != expected {
        return fail("triangle is not (0,0), (2x,2y), (z,t)".into());
    }
    let area = cert.triangle.twice_area();
    if area != cert.twice_area {
        return fail(format!("twice_area {} but determinant gives {area}", cert.twice_area));
    }
    let (c1, c2) = rotated(p.twice_x, p.twice_y);
    if BigInt::from(cert.z) != c1.round() || BigInt::from(cert.t) != c2.round() {
        return fail("(z, t) is not the nearest lattice point to (x − √3y, y + √3x)".into());
    }
    match in_T(&cert.triangle, q) {
        Ok(true) => {}
        Ok(false) => return fail("triangle is not in T(√q)".into()),
        Err(e) => return fail(format!("triangle: {e}")),
    }
    match cert.kind {
        WitnessKind::Reduction => check_reduction_conditions(cert)?,
        WitnessKind::Explicit => check_explicit_conditions(cert)?,
    }
    let rhs = match cert.kind {
        WitnessKind::Reduction => reduction_rhs(q, cert.eps.a()),
        WitnessKind::Explicit => explicit_rhs(q, &p.y()),
    };
    if !same_terms(&rhs, &cert.bound_rhs) {
        return fail("bound_rhs does not match the bound for (q, eps)".into());
    }
    let mut diff = rhs;
    diff.push(SurdTerm { coef: BigRational::from_integer((-area).into()), radicand: BigRational::one() });
    if sign_of_terms(&diff) == Ordering::Less {
        return fail("twice_area exceeds the bound".into());
    }
    Ok(())
}

fn same_terms(a: &[SurdTerm], b: &[SurdTerm]) -> bool {
    let mut d: Vec<SurdTerm> = a.to_vec();
    d.extend(b.iter().map(|t| SurdTerm { coef: -t.coef.clone(), radicand: t.radicand.clone() }));
    // Equality of values, not of presentations.
    sign_of_terms(&d) == Ordering::Equal
}

fn check_reduction_conditions(cert: &WitnessCertificate) -> Result<()> {
    let fail = |what: &str| Err(Error::CheckFailed(format!("reduction: {what}")));
    let p = &cert.pair;
    if !cert.eps.is_rational() || p.twice_x.is_odd() || p.twice_y.is_odd() {
        return fail("x, y must be integers and eps rational");
    }
    let eps = cert.eps.a();
    if !eps.is_positive() || *eps >= crate::quad::half() {
        return fail("0 < eps < 1/2");
    }
    if cert.q < int(100) {
        return fail("q ≥ 100");
    }
    let (x, y) = (p.twice_x / 2, p.twice_y / 2);
    if !fast::dist_lt(x, eps) || !fast::dist_lt(y, eps) {
        return fail("‖√3x‖ < eps and ‖√3y‖ < eps");
    }
    let (r_lo, r_hi) = reduction_norm_range(&cert.q, eps);
    let r = p.norm_sq.to_integer();
    if r < r_lo || r > r_hi {
        return fail("2√(x² + y²) ∈ [D + √2·eps, D + 2·eps]");
    }
    Ok(())
}

fn check_explicit_conditions(cert: &WitnessCertificate) -> Result<()> {
    let fail = |what: &str| Err(Error::CheckFailed(format!("explicit: {what}")));
    if cert.eps != seven_eps() || cert.delta.as_ref() != Some(&explicit_delta()) {
        return fail("ε = (3√3 − 5)/2 and δ = 13/100");
    }
    if cert.q <= int(1_000_000) {
        return fail("q > 10^6");
    }
    let root = explicit_sqrt_n(&cert.q);
    check_halfint_pair(&cert.pair, &root)?;
    if !explicit_upper_ok(&cert.q, &cert.pair.norm_sq, &explicit_delta()) {
        return fail("2√(x² + y²) ≤ D + δ");
    }
    Ok(())
}

#[cfg(test)]
mod tests;
