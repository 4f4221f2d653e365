//! Upper-bound step table for `S` from near-equilateral triangles built on
//! pairs with `‖2√3x‖, ‖2√3y‖ ≤ tol`.

use super::checkpoint::Checkpointer;
use super::cover::RunOptions;
use super::residual::small_d_bound;
use crate::diophantine::valid_double_multipliers;
use crate::error::{Error, Result};
use crate::geom::{LatticePoint, LatticeTriangle};
use crate::quad::fast::{isqrt, round_affine};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRow {
    pub min_side_sq: i128,
    pub best_twice_area: i128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepTable {
    pub r_max: i64,
    #[serde(with = "crate::serde_util::rational")]
    pub tol: BigRational,
    pub list_size: usize,
    pub pair_count: u64,
    pub triangle_count: u64,
    /// Descending in `min_side_sq`; each row certifies `S(√q) ≤ best_twice_area`
    /// for every `q ≤ min_side_sq`.
    pub rows: Vec<StepRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
}

/// Pareto frontier of `(min_side_sq, twice_area)`: larger sides, smaller area.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frontier(BTreeMap<i128, i128>);

impl Frontier {
    pub fn insert(&mut self, side: i128, area: i128) {
        if let Some((_, &a)) = self.0.range(side..).next() {
            if a <= area {
                return;
            }
        }
        let dominated: Vec<i128> = self
            .0
            .range(..=side)
            .rev()
            .take_while(|(_, &a)| a >= area)
            .map(|(&s, _)| s)
            .collect();
        for s in dominated {
            self.0.remove(&s);
        }
        self.0.insert(side, area);
    }

    pub fn merge(mut self, other: Frontier) -> Frontier {
        for (s, a) in other.0 {
            self.insert(s, a);
        }
        self
    }

    /// Least area among entries with `side ≥ q`.
    pub fn bound(&self, q: i128) -> Option<i128> {
        self.0.range(q..).next().map(|(_, &a)| a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i128, i128)> + '_ {
        self.0.iter().map(|(&s, &a)| (s, a))
    }
}

/// `(0,0), (x,y), (z,t)` with `(z, t)` nearest to `((x − √3y)/2, (y + √3x)/2)`;
/// returns `(min_side_sq, twice_area)` when non-degenerate and non-obtuse.
#[inline]
pub fn pair_triangle(x: i64, y: i64) -> Option<(i128, i128, LatticeTriangle)> {
    let (xi, yi) = (x as i128, y as i128);
    let z = round_affine(xi, -yi, 2)? as i64;
    let t = round_affine(yi, xi, 2)? as i64;
    let tri = LatticeTriangle::new(LatticePoint::new(0, 0), LatticePoint::new(x, y), LatticePoint::new(z, t));
    let m = tri.metrics();
    if m.t == 0 || m.s[0] + m.s[1] < m.s[2] {
        return None;
    }
    Some((m.s[0], m.t, tri))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TableState {
    r_max: i64,
    #[serde(with = "crate::serde_util::rational")]
    tol: BigRational,
    next_index: usize,
    pair_count: u64,
    triangle_count: u64,
    frontier: Frontier,
}

pub fn triangle_table(r_max: i64, tol: &BigRational) -> Result<StepTable> {
    triangle_table_with(r_max, tol, &RunOptions::default())
}

pub fn triangle_table_with(r_max: i64, tol: &BigRational, opts: &RunOptions) -> Result<StepTable> {
    let started = Instant::now();
    if r_max < 10_000 {
        return Err(Error::InvalidArgument(format!("r_max must be at least 10^4, got {r_max}")));
    }
    let x_max = isqrt((r_max - 1) as u128) as i64;
    let list = valid_double_multipliers(x_max, tol);
    let mut frontier = Frontier::default();
    let (mut start, mut pair_count, mut triangle_count) = (0usize, 0u64, 0u64);
    let ckpt = opts.checkpoint.as_ref().map(|p| Checkpointer::new(p.clone()));
    if let Some(c) = &ckpt {
        if let Some(st) = c.load::<TableState>()? {
            if st.r_max != r_max || st.tol != *tol {
                return Err(Error::InvalidArgument("checkpoint belongs to a different configuration".into()));
            }
            frontier = st.frontier;
            start = st.next_index;
            pair_count = st.pair_count;
            triangle_count = st.triangle_count;
        }
    }
    // The outer index runs over x > 0; x = 0 is not in the rotation domain.
    let first_pos = list.iter().position(|&x| x > 0).unwrap_or(list.len());
    start = start.max(first_pos);
    let every = if opts.every == 0 { list.len().max(1) } else { opts.every };
    let r_max = r_max as i128;
    while start < list.len() {
        let end = (start + every).min(list.len());
        let (f, pairs, tris) = (start..end)
            .into_par_iter()
            .fold(
                || (Frontier::default(), 0u64, 0u64),
                |(mut f, mut pairs, mut tris), i| {
                    let x = list[i];
                    let x2 = (x as i128).pow(2);
                    for &y in list.iter().take_while(|&&y| x2 + (y as i128).pow(2) < r_max) {
                        pairs += 1;
                        if let Some((side, area, _)) = pair_triangle(x, y) {
                            tris += 1;
                            f.insert(side, area);
                        }
                    }
                    (f, pairs, tris)
                },
            )
            .reduce(|| (Frontier::default(), 0, 0), |a, b| (a.0.merge(b.0), a.1 + b.1, a.2 + b.2));
        frontier = frontier.merge(f);
        pair_count += pairs;
        triangle_count += tris;
        start = end;
        if let Some(c) = &ckpt {
            c.save(&TableState {
                r_max: r_max as i64,
                tol: tol.clone(),
                next_index: start,
                pair_count,
                triangle_count,
                frontier: frontier.clone(),
            })?;
        }
    }
    let mut rows: Vec<StepRow> =
        frontier.iter().map(|(s, a)| StepRow { min_side_sq: s, best_twice_area: a }).collect();
    rows.reverse();
    Ok(StepTable {
        r_max: r_max as i64,
        tol: tol.clone(),
        list_size: list.len(),
        pair_count,
        triangle_count,
        rows,
        duration_seconds: Some(started.elapsed().as_secs_f64()),
    })
}

/// Least table bound applying to `q`, if any row reaches it.
pub fn table_bound(table: &StepTable, q: i128) -> Option<i128> {
    // Rows are descending in side; the last row with side ≥ q has least area.
    table.rows.iter().take_while(|r| r.min_side_sq >= q).last().map(|r| r.best_twice_area)
}

/// Outcome of checking the small-`D` inequality against a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub q_lo: i128,
    pub q_hi: i128,
    pub steps_checked: u64,
    /// Critical `q` where the table bound fails the inequality.
    pub failures: Vec<(i128, i128)>,
    /// Set when the table has no row reaching `q_hi`.
    pub uncovered_from: Option<i128>,
}

impl TableCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.uncovered_from.is_none()
    }
}

fn is_sum_of_two_squares(n: i128) -> bool {
    let mut a = 0i128;
    while 2 * a * a <= n {
        let r = n - a * a;
        let b = isqrt(r as u128) as i128;
        if b * b == r {
            return true;
        }
        a += 1;
    }
    false
}

/// Checks `bound(q) < √3/2·q + √q/(2√3) − 1` for every critical `q` in
/// `[q_lo, q_hi]`. On each step of the table the bound is constant and the
/// right side increases with `q`, so only the least critical `q` of each
/// step needs testing.
pub fn check_small_d(table: &StepTable, q_lo: i128, q_hi: i128) -> TableCheck {
    let mut asc: Vec<&StepRow> = table.rows.iter().collect();
    asc.reverse();
    let mut check = TableCheck { q_lo, q_hi, steps_checked: 0, failures: Vec::new(), uncovered_from: None };
    let mut prev_side = i128::MIN;
    let mut covered_to = q_lo - 1;
    for row in asc {
        let lo = (prev_side + 1).max(q_lo);
        let hi = row.min_side_sq.min(q_hi);
        prev_side = row.min_side_sq;
        if lo > hi {
            continue;
        }
        check.steps_checked += 1;
        covered_to = hi;
        let s = row.best_twice_area as u64;
        if small_d_bound(&BigRational::from_integer(lo.into()), s) {
            continue;
        }
        let mut c = lo;
        while c <= hi && !is_sum_of_two_squares(c) {
            c += 1;
        }
        if c <= hi && !small_d_bound(&BigRational::from_integer(c.into()), s) {
            check.failures.push((c, row.best_twice_area));
        }
        if prev_side >= q_hi {
            break;
        }
    }
    if covered_to < q_hi {
        check.uncovered_from = Some(covered_to + 1);
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_pair() {
        let (side, area, tri) = pair_triangle(15, 56).unwrap();
        assert_eq!(tri, LatticeTriangle::from_coords([(0, 0), (15, 56), (-41, 41)]));
        assert_eq!((side, area), (3361, 2911));
    }

    #[test]
    fn frontier_keeps_pareto_set() {
        let mut f = Frontier::default();
        f.insert(10, 100);
        f.insert(5, 120);
        f.insert(20, 90);
        f.insert(15, 95);
        let v: Vec<_> = f.iter().collect();
        assert_eq!(v, vec![(20, 90)]);
        f.insert(30, 200);
        f.insert(25, 150);
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![(20, 90), (25, 150), (30, 200)]);
        assert_eq!(f.bound(21), Some(150));
        assert_eq!(f.bound(31), None);
    }

    #[test]
    fn small_table_is_sound() {
        let t = triangle_table(200_000, &BigRational::new(1.into(), 10.into())).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0].min_side_sq > w[1].min_side_sq
            && w[0].best_twice_area > w[1].best_twice_area));
        assert_eq!(table_bound(&t, 3361).map(|a| a <= 2911), Some(true));
    }

    #[test]
    fn sums_of_squares() {
        let v: Vec<i128> = (1..=10).filter(|&n| is_sum_of_two_squares(n)).collect();
        assert_eq!(v, vec![1, 2, 4, 5, 8, 9, 10]);
    }
}
