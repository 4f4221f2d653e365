//! Multiples of √3 near prescribed residues modulo 1.
//!
//! Windows are closed unless stated otherwise. The distance tests that come
//! from the witness construction use a strict `<`, the seven-point cover uses
//! `≤`; each function names the comparison it performs.

use crate::error::{Error, Result};
use crate::quad::fast;
use crate::quad::{int, QuadValue};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// A solution of `3v² − 2 = u²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    #[serde(with = "crate::serde_util::bigint")]
    pub v: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    pub u: BigInt,
}

impl PellSolution {
    pub fn new(v: BigInt, u: BigInt) -> Option<Self> {
        let ok = v.is_positive() && u.is_positive() && BigInt::from(3) * &v * &v - 2 == &u * &u;
        ok.then_some(PellSolution { v, u })
    }

    /// `{v√3} = v√3 − u`, since `u < v√3 < u + 1`.
    pub fn frac(&self) -> QuadValue {
        QuadValue::new(BigRational::from_integer(-self.u.clone()), BigRational::from_integer(self.v.clone()))
    }
}

/// A multiplier together with the exact fractional part it produces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowWitness {
    #[serde(with = "crate::serde_util::bigint")]
    pub s: BigInt,
    pub frac: QuadValue,
}

impl WindowWitness {
    fn of(s: BigInt, shift: &QuadValue) -> Self {
        let frac = (QuadValue::sqrt3_times(BigRational::from_integer(s.clone())) + shift).frac();
        WindowWitness { s, frac }
    }
}

/// The first `count` Pell solutions in increasing `v`, each checked by
/// substitution. The recurrence is `(u, v) ↦ (2u + 3v, u + 2v)` from `(1, 1)`.
pub fn pell_stream(count: usize) -> Vec<PellSolution> {
    let mut out = Vec::with_capacity(count);
    let (mut u, mut v) = (BigInt::one(), BigInt::one());
    while out.len() < count {
        out.push(PellSolution::new(v.clone(), u.clone()).expect("recurrence preserves 3v^2 - 2 = u^2"));
        let nu = &u * 2 + &v * 3;
        let nv = &u + &v * 2;
        u = nu;
        v = nv;
    }
    out
}

/// `{v√3} > 1/(3v)`, exactly.
pub fn frac_lower_bound_check(sol: &PellSolution) -> bool {
    let bound = QuadValue::rational(BigRational::new(BigInt::one(), &sol.v * 3));
    sol.frac() > bound
}

fn check_window(lo: &BigRational, hi: &BigRational) -> Result<()> {
    if lo.is_negative() || lo >= hi || *hi > BigRational::one() {
        return Err(Error::InvalidArgument(format!("window [{lo}, {hi}] must satisfy 0 <= lo < hi <= 1")));
    }
    Ok(())
}

fn frac_in(s: &BigInt, lo: &QuadValue, hi: &QuadValue) -> Option<QuadValue> {
    let f = QuadValue::sqrt3_times(BigRational::from_integer(s.clone())).frac();
    (f >= *lo && f <= *hi).then_some(f)
}

/// Smallest `s ≥ 1` with `{s√3} ∈ [lo, hi]`, by ascending scan.
///
/// This is the reference implementation. `cap` bounds the scan.
pub fn min_multiplier_scan(lo: &BigRational, hi: &BigRational, cap: u64) -> Result<WindowWitness> {
    check_window(lo, hi)?;
    let small = (fast::SmallRatio::from_big(lo), fast::SmallRatio::from_big(hi));
    let (ql, qh) = (QuadValue::rational(lo.clone()), QuadValue::rational(hi.clone()));
    for s in 1..=cap {
        let hit = match small {
            (Some(l), Some(h)) => fast::frac_in_window(s as i64, l, h),
            _ => None,
        };
        let hit = hit.unwrap_or_else(|| frac_in(&BigInt::from(s), &ql, &qh).is_some());
        if hit {
            return Ok(WindowWitness::of(BigInt::from(s), &QuadValue::zero()));
        }
    }
    Err(Error::CapExceeded { cap, what: format!("no s with {{s*sqrt3}} in [{lo}, {hi}]") })
}

/// Smallest `s ≥ 1` with `{s√3} ∈ [lo, hi]`.
///
/// Computed by a Euclid-style descent on the pair `(√3, 1)` that runs in
/// `O(log(1/(hi − lo)))` steps; agrees with [`min_multiplier_scan`].
pub fn min_multiplier_in_window(lo: &BigRational, hi: &BigRational) -> Result<WindowWitness> {
    check_window(lo, hi)?;
    let lo = QuadValue::rational(lo.clone());
    let hi = QuadValue::rational(hi.clone());
    let sqrt3 = QuadValue::sqrt3();
    let c = QuadValue::from_ints(-1, 1);
    if c >= lo && c <= hi {
        return Ok(WindowWitness::of(BigInt::one(), &QuadValue::zero()));
    }
    // s = 1 + x: {x√3 + c} ∈ [lo, hi]. With c outside the window, the
    // shifted window [lo − c, hi − c] taken mod 1 does not wrap.
    let one = QuadValue::one();
    let (l, r) = if hi < c { (&lo - &c + &one, &hi - &c + &one) } else { (&lo - &c, &hi - &c) };
    let x = first_hit(&sqrt3, &one, &l, &r);
    let s = x + 1;
    let w = WindowWitness::of(s, &QuadValue::zero());
    debug_assert!(w.frac >= lo && w.frac <= hi);
    Ok(w)
}

/// Least `x ≥ 0` such that `L ≤ A·x − M·y ≤ R` for some integer `y`.
///
/// Requires `0 ≤ L ≤ R < M`, `A, M > 0` and `A/M` irrational.
fn first_hit(a: &QuadValue, m: &QuadValue, l: &QuadValue, r: &QuadValue) -> BigInt {
    if l.is_zero() {
        return BigInt::zero();
    }
    let a = modulo(a, m);
    let x0 = ceil_div(l, &a);
    let ax0 = a.scale(&BigRational::from_integer(x0.clone()));
    if ax0 <= *r {
        return x0;
    }
    let k = floor_div(l, &a);
    let ka = a.scale(&BigRational::from_integer(k));
    let l1 = l - &ka;
    let r1 = r - &ka;
    let m_mod = modulo(m, &a);
    let y = first_hit(&m_mod, &a, &(&a - &r1), &(&a - &l1));
    let top = l + &m.scale(&BigRational::from_integer(y));
    ceil_div(&top, &a)
}

fn floor_div(x: &QuadValue, y: &QuadValue) -> BigInt {
    x.checked_div(y).expect("nonzero divisor").floor()
}

fn ceil_div(x: &QuadValue, y: &QuadValue) -> BigInt {
    x.checked_div(y).expect("nonzero divisor").ceil()
}

fn modulo(x: &QuadValue, m: &QuadValue) -> QuadValue {
    let k = floor_div(x, m);
    x - &m.scale(&BigRational::from_integer(k))
}

/// A multiplier `s` with `{s√3} ∈ [lo, lo + 10^(−k)]`, where `10^(−k)` is the
/// largest power of ten not exceeding `hi − lo`, found on the circle.
///
/// Follows the induction on `k` with Pell steps: from a witness landing just
/// below the target, keep adding a Pell multiplier `v` whose `{v√3}` is
/// smaller than the target width until the window is reached. The result is
/// valid but in general not minimal.
pub fn pell_jump_witness(lo: &BigRational, hi: &BigRational) -> Result<WindowWitness> {
    check_window(lo, hi)?;
    let width = hi - lo;
    let mut k = 0u32;
    while BigRational::new(BigInt::one(), BigInt::from(10).pow(k)) > width {
        k += 1;
    }
    let s = pell_jump(&QuadValue::rational(lo.clone()), k);
    Ok(WindowWitness::of(s, &QuadValue::zero()))
}

fn ten_pow_neg(k: u32) -> QuadValue {
    QuadValue::rational(BigRational::new(BigInt::one(), BigInt::from(10).pow(k)))
}

/// `{s√3}` lies on the circle within `[x, x + 10^(−k)]`.
fn pell_jump(x: &QuadValue, k: u32) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    let prev = ten_pow_neg(k - 1);
    let eps = ten_pow_neg(k);
    let mut s = pell_jump(&(x - &prev).frac(), k - 1);
    let sol = pell_stream(64)
        .into_iter()
        .find(|p| p.frac() < eps)
        .expect("Pell fractions tend to zero");
    let step = sol.frac();
    let offset = |s: &BigInt| (QuadValue::sqrt3_times(BigRational::from_integer(s.clone())) - x).frac();
    let mut d = offset(&s);
    while d > eps {
        s += &sol.v;
        d = (&d + &step).frac();
    }
    s
}

/// Largest `k ≤ n` with `‖k√3‖ < eps`, by descending scan.
pub fn largest_below(n: i64, eps: &BigRational) -> Result<WindowWitness> {
    if !eps.is_positive() || *eps >= BigRational::one() {
        return Err(Error::InvalidArgument(format!("eps = {eps} must lie in (0, 1)")));
    }
    let mut k = n;
    loop {
        if fast::dist_lt(k, eps) {
            let s = BigInt::from(k);
            return Ok(WindowWitness::of(s, &QuadValue::zero()));
        }
        k -= 1;
    }
}

/// All `1 ≤ x ≤ x_max` with `‖√3x‖ < eps`, ascending.
pub fn valid_multipliers(x_max: i64, eps: &BigRational) -> Vec<i64> {
    collect_parallel(1, x_max, |x| fast::dist_lt(x, eps))
}

/// All `0 ≤ x ≤ x_max` with `‖2√3x‖ ≤ tol`, ascending.
pub fn valid_double_multipliers(x_max: i64, tol: &BigRational) -> Vec<i64> {
    collect_parallel(0, x_max, |x| fast::dist_le(2 * x, tol))
}

fn collect_parallel(from: i64, to: i64, pred: impl Fn(i64) -> bool + Sync) -> Vec<i64> {
    const CHUNK: i64 = 1 << 16;
    if to < from {
        return Vec::new();
    }
    let chunks = (to - from) / CHUNK + 1;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = from + c * CHUNK;
            let hi = (lo + CHUNK - 1).min(to);
            (lo..=hi).filter(|&x| pred(x)).collect::<Vec<_>>()
        })
        .flatten_iter()
        .collect()
}

/// `ε = (3√3 − 5)/2`, half the largest gap of the seven-point set.
pub fn seven_eps() -> QuadValue {
    QuadValue::new(BigRational::new((-5).into(), 2.into()), BigRational::new(3.into(), 2.into()))
}

/// `{s√3}` for `s = 0, …, 6`.
pub fn seven_points() -> Vec<QuadValue> {
    (0..7).map(|s| QuadValue::sqrt3_times(int(s)).frac()).collect()
}

/// Arcs `[a, b]` of the circle between consecutive seven-point values, with
/// their lengths, in circle order starting at 0.
pub fn seven_arcs() -> Vec<(QuadValue, QuadValue, QuadValue)> {
    let mut pts = seven_points();
    pts.sort();
    let mut arcs = Vec::new();
    for i in 0..pts.len() {
        let a = pts[i].clone();
        let (b, len) = if i + 1 < pts.len() {
            (pts[i + 1].clone(), &pts[i + 1] - &a)
        } else {
            (QuadValue::one(), &QuadValue::one() - &a)
        };
        arcs.push((a, b, len));
    }
    arcs
}

/// The largest circular gap among `{0, {√3}, …, {6√3}}`; equals `3√3 − 5`.
pub fn seven_gap() -> QuadValue {
    seven_arcs().into_iter().map(|(_, _, l)| l).max().expect("seven arcs")
}

/// Lattice cosets accepted by [`grid_point_in_segment`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grid {
    Integers,
    /// All of `½ℤ`.
    HalfIntegers,
    /// The coset `ℤ + ½`.
    OddHalves,
}

impl Grid {
    /// Largest grid point `≤ v`, as `2g`.
    pub fn largest_twice_at_most(self, v: &BigRational) -> BigInt {
        let two_v = (v * int(2)).floor().to_integer();
        match self {
            Grid::HalfIntegers => two_v,
            Grid::Integers => {
                if two_v.is_even() { two_v } else { two_v - 1 }
            }
            Grid::OddHalves => {
                if two_v.is_odd() { two_v } else { two_v - 1 }
            }
        }
    }
}

/// Circular distance between two residues in `[0, 1)`.
fn circ_dist(a: &QuadValue, b: &QuadValue) -> QuadValue {
    let d = (a - b).abs();
    let e = &QuadValue::one() - &d;
    d.min(e)
}

/// Given a grid point `n` (as `2n`) and a shift `v`, returns `s ∈ 0..7` such
/// that `‖(n − s)√3 + v‖ ≤ ε`.
pub fn seven_point_step(twice_n: &BigInt, shift: &QuadValue) -> (u32, QuadValue) {
    let n = BigRational::new(twice_n.clone(), BigInt::from(2));
    let target = (QuadValue::sqrt3_times(n) + shift).frac();
    let (s, d) = seven_points()
        .iter()
        .enumerate()
        .map(|(s, p)| (s as u32, circ_dist(p, &target)))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("seven points");
    debug_assert!(d <= seven_eps());
    (s, d)
}

/// A point `g` of `grid` in `[j_lo, j_hi]` with `‖g√3 + shift‖ ≤ ε` for
/// `ε = (3√3 − 5)/2`. Both properties are re-checked before returning.
pub fn grid_point_in_segment(
    j_lo: &BigRational,
    j_hi: &BigRational,
    shift: &BigRational,
    grid: Grid,
) -> Result<BigRational> {
    if j_hi - j_lo < int(7) {
        return Err(Error::SegmentTooShort { lo: j_lo.to_string(), hi: j_hi.to_string() });
    }
    let twice_n = grid.largest_twice_at_most(j_hi);
    let shift_q = QuadValue::rational(shift.clone());
    let (s, _) = seven_point_step(&twice_n, &shift_q);
    let g = BigRational::new(twice_n - BigInt::from(2 * s), BigInt::from(2));
    let dist = (QuadValue::sqrt3_times(g.clone()) + &shift_q).dist_to_int();
    if g < *j_lo || g > *j_hi || dist > seven_eps() {
        return Err(Error::CheckFailed(format!("seven-point reduction produced {g}")));
    }
    Ok(g)
}

/// `s·ε` for the minimal multiplier of each window `[lo, lo + eps]` with
/// `lo = i/steps`; the largest value seen is what the search constant has to
/// cover in practice.
pub fn empirical_s_eps(eps: &BigRational, steps: u32) -> Result<BigRational> {
    let mut best = BigRational::zero();
    for i in 0..steps {
        let lo = BigRational::new(BigInt::from(i), BigInt::from(steps)) * (BigRational::one() - eps);
        let hi = &lo + eps;
        let w = min_multiplier_in_window(&lo, &hi)?;
        best = best.max(BigRational::from_integer(w.s) * eps);
    }
    Ok(best)
}

/// Whether some point of the seven-point set is within `ε` of `{target}`
/// on the circle.
pub fn seven_cover_holds(target: &QuadValue) -> bool {
    let t = target.frac();
    seven_points().iter().any(|p| circ_dist(p, &t) <= seven_eps())
}
