//! Coverage of the reals by `2√(x² + y²)` over pairs from the `‖√3x‖ < eps`
//! list.
//!
//! Values are binned by integer square roots. A run of `m` empty bins between
//! occupied ones hides a gap between consecutive values of width in
//! `(m·w, (m + 2)·w)`; runs where the critical length `L = (2 − √2)·eps`
//! falls inside that range are settled by a second pass that recovers the
//! extreme values in the two bounding bins and compares them exactly.

use super::checkpoint::{self, Checkpointer};
use crate::diophantine::valid_multipliers;
use crate::error::{Error, Result};
use crate::quad::fast::isqrt;
use crate::quad::int;
use crate::quad::surd::{sign_of_terms, SurdTerm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverConfig {
    pub x_max: i64,
    #[serde(with = "crate::serde_util::rational")]
    pub eps: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub bin_width: BigRational,
    /// Gaps below this value are counted but not listed.
    #[serde(with = "crate::serde_util::rational")]
    pub report_floor: BigRational,
}

impl CoverConfig {
    pub fn new(x_max: i64, eps: BigRational, bin_width: Option<BigRational>) -> Self {
        let bin_width = bin_width.unwrap_or_else(|| default_bin_width(&eps));
        CoverConfig { x_max, eps, bin_width, report_floor: BigRational::new(x_max.into(), 3.into()) }
    }
}

/// `1/n` for the least `n` with `1/n ≤ (2 − √2)·eps/2`.
pub fn default_bin_width(eps: &BigRational) -> BigRational {
    // 1/n ≤ L/2  ⇔  n ≥ 2/L; L is irrational, so step up from a float guess.
    let l = (2.0 - 2f64.sqrt()) * crate::quad::ratio_to_f64(eps);
    let mut n = ((2.0 / l).floor() as i64).max(1);
    while !width_ok(&BigRational::new(1.into(), n.into()), eps) {
        n += 1;
    }
    BigRational::new(1.into(), n.into())
}

/// `w ≤ (2 − √2)·eps/2`.
pub fn width_ok(w: &BigRational, eps: &BigRational) -> bool {
    // 2w ≤ (2 − √2)eps  ⇔  √2·eps ≤ 2eps − 2w
    let terms = [
        SurdTerm { coef: eps * int(2) - w * int(2), radicand: int(1) },
        SurdTerm { coef: -eps.clone(), radicand: int(2) },
    ];
    w.is_positive() && sign_of_terms(&terms) != Ordering::Less
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    #[serde(with = "crate::serde_util::rational")]
    pub lo: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub hi: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub x_max: i64,
    #[serde(with = "crate::serde_util::rational")]
    pub eps: BigRational,
    pub list_size: usize,
    #[serde(with = "crate::serde_util::rational")]
    pub bin_width: BigRational,
    pub bin_count: u64,
    pub pair_count: u64,
    /// Every interval of length `(2 − √2)·eps` inside this range contains a value.
    #[serde(with = "crate::serde_util::rational")]
    pub covered_lo: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub covered_hi: BigRational,
    pub violation_count: u64,
    pub ambiguous_resolved: u64,
    /// Bin-granular bounds on each violating gap at or above `report_floor`.
    pub gaps: Vec<Gap>,
    #[serde(with = "crate::serde_util::rational")]
    pub report_floor: BigRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
}

impl CoverReport {
    /// True iff `[lo, hi]` lies inside the covered range.
    pub fn covers(&self, lo: &BigRational, hi: &BigRational) -> bool {
        self.covered_lo <= *lo && *hi <= self.covered_hi
    }
}

/// Bin arithmetic: bin of `2√R` is `⌊√(4R·d²)⌋ div n` for width `n/d`.
#[derive(Copy, Clone, Debug)]
struct Binner {
    n: u128,
    d2x4: u128,
}

impl Binner {
    fn new(w: &BigRational) -> Result<Self> {
        let n = w.numer().to_u128().ok_or_else(|| Error::InvalidArgument("bin width too fine".into()))?;
        let d = w.denom().to_u128().ok_or_else(|| Error::InvalidArgument("bin width too fine".into()))?;
        Ok(Binner { n, d2x4: 4 * d * d })
    }

    #[inline]
    fn bin(&self, r: u128) -> u64 {
        let v = r * self.d2x4;
        let s = if v < (1u128 << 52) {
            let mut s = (v as f64).sqrt() as u128;
            while s * s > v {
                s -= 1;
            }
            while (s + 1) * (s + 1) <= v {
                s += 1;
            }
            s
        } else {
            isqrt(v)
        };
        (s / self.n) as u64
    }
}

struct Bitmap {
    words: Vec<AtomicU64>,
}

impl Bitmap {
    fn new(bits: u64) -> Self {
        Bitmap { words: (0..bits.div_ceil(64)).map(|_| AtomicU64::new(0)).collect() }
    }

    #[inline]
    fn set(&self, i: u64) {
        self.words[(i / 64) as usize].fetch_or(1 << (i % 64), AtomicOrdering::Relaxed);
    }

    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize].load(AtomicOrdering::Relaxed) >> (i % 64) & 1 == 1
    }

    fn snapshot(&self) -> Vec<u64> {
        self.words.iter().map(|w| w.load(AtomicOrdering::Relaxed)).collect()
    }

    fn restore(&self, words: &[u64]) {
        for (a, &b) in self.words.iter().zip(words) {
            a.store(b, AtomicOrdering::Relaxed);
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CoverState {
    config: CoverConfig,
    next_index: usize,
    pair_count: u64,
    bitmap: checkpoint::RunLength,
}

/// Options for long runs: a checkpoint file and how many outer indices to
/// process between checkpoints.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub checkpoint: Option<PathBuf>,
    pub every: usize,
}

pub fn cover_scan(cfg: &CoverConfig) -> Result<CoverReport> {
    cover_scan_with(cfg, &RunOptions::default())
}

pub fn cover_scan_with(cfg: &CoverConfig, opts: &RunOptions) -> Result<CoverReport> {
    let started = Instant::now();
    if cfg.x_max < 100 {
        return Err(Error::InvalidArgument(format!("x_max must be at least 100, got {}", cfg.x_max)));
    }
    if !cfg.eps.is_positive() || cfg.eps >= BigRational::one() {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {}", cfg.eps)));
    }
    if !width_ok(&cfg.bin_width, &cfg.eps) {
        return Err(Error::InvalidArgument(format!(
            "bin width {} exceeds (2 - sqrt 2)*eps/2 for eps = {}",
            cfg.bin_width, cfg.eps
        )));
    }
    let list = valid_multipliers(cfg.x_max, &cfg.eps);
    let binner = Binner::new(&cfg.bin_width)?;
    let r_top = 2 * (cfg.x_max as u128).pow(2);
    let bin_count = binner.bin(r_top) + 2;
    let bitmap = Bitmap::new(bin_count);

    let mut start = 0usize;
    let mut pair_count = 0u64;
    let ckpt = opts.checkpoint.as_ref().map(|p| Checkpointer::new(p.clone()));
    if let Some(c) = &ckpt {
        if let Some(st) = c.load::<CoverState>()? {
            if st.config != *cfg {
                return Err(Error::InvalidArgument("checkpoint belongs to a different configuration".into()));
            }
            bitmap.restore(&st.bitmap.decode());
            start = st.next_index;
            pair_count = st.pair_count;
        }
    }
    let every = if opts.every == 0 { list.len().max(1) } else { opts.every };
    let sq: Vec<u128> = list.iter().map(|&x| (x as u128).pow(2)).collect();
    while start < list.len() {
        let end = (start + every).min(list.len());
        let count: u64 = (start..end)
            .into_par_iter()
            .map(|i| {
                let xi = sq[i];
                for &yj in &sq[i..] {
                    bitmap.set(binner.bin(xi + yj));
                }
                (sq.len() - i) as u64
            })
            .sum();
        pair_count += count;
        start = end;
        if let Some(c) = &ckpt {
            let st = CoverState {
                config: cfg.clone(),
                next_index: start,
                pair_count,
                bitmap: checkpoint::RunLength::encode(&bitmap.snapshot()),
            };
            c.save(&st)?;
        }
    }

    let mut report = classify(cfg, &list, &sq, &binner, &bitmap, bin_count)?;
    report.pair_count = pair_count;
    report.duration_seconds = Some(started.elapsed().as_secs_f64());
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Fine,
    Violation,
    Ambiguous,
}

fn classify(
    cfg: &CoverConfig,
    list: &[i64],
    sq: &[u128],
    binner: &Binner,
    bitmap: &Bitmap,
    bin_count: u64,
) -> Result<CoverReport> {
    let w = &cfg.bin_width;
    // Empty runs (left occupied bin, right occupied bin).
    let mut runs: Vec<(u64, u64)> = Vec::new();
    let mut last: Option<u64> = None;
    let mut first: Option<u64> = None;
    for b in 0..bin_count {
        if bitmap.get(b) {
            if let Some(l) = last {
                if b > l + 1 {
                    runs.push((l, b));
                }
            }
            first.get_or_insert(b);
            last = Some(b);
        }
    }
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::CheckFailed("no values were binned".into()));
    };
    let crit = [
        SurdTerm { coef: cfg.eps.clone() * int(2), radicand: int(1) },
        SurdTerm { coef: -cfg.eps.clone(), radicand: int(2) },
    ];
    // Least k with k·w > L; verdicts depend on the run length only.
    let exceeds = |k: u64| {
        let mut t = crit.to_vec();
        t.push(SurdTerm { coef: -(w * BigRational::from_integer(k.into())), radicand: int(1) });
        sign_of_terms(&t) == Ordering::Less
    };
    let l_approx = (2.0 - 2f64.sqrt()) * crate::quad::ratio_to_f64(&cfg.eps) / crate::quad::ratio_to_f64(w);
    let mut k_star = (l_approx.floor() as u64).saturating_sub(2);
    while !exceeds(k_star) {
        k_star += 1;
    }
    while k_star > 0 && exceeds(k_star - 1) {
        k_star -= 1;
    }
    let mut verdicts: Vec<Verdict> = runs
        .iter()
        .map(|&(l, r)| {
            let m = r - l - 1;
            if m + 2 < k_star {
                Verdict::Fine
            } else if m >= k_star {
                Verdict::Violation
            } else {
                Verdict::Ambiguous
            }
        })
        .collect();

    let ambiguous: Vec<usize> = (0..runs.len()).filter(|&i| verdicts[i] == Verdict::Ambiguous).collect();
    if !ambiguous.is_empty() {
        let (lo_max, hi_min) = boundary_extremes(&runs, &ambiguous, sq, binner);
        let l_f = (2.0 - 2f64.sqrt()) * crate::quad::ratio_to_f64(&cfg.eps);
        for (k, &i) in ambiguous.iter().enumerate() {
            // 2√R₂ − 2√R₁ > L ? Decided in floating point unless too close to call.
            let (r1, r2) = (lo_max[k] as f64, hi_min[k] as f64);
            let diff = 2.0 * (r2 - r1) / (r2.sqrt() + r1.sqrt()) - l_f;
            let violation = if diff.abs() > 1e-9 {
                diff > 0.0
            } else {
                let mut t = vec![
                    SurdTerm { coef: int(2), radicand: BigRational::from_integer(BigInt::from(hi_min[k])) },
                    SurdTerm { coef: int(-2), radicand: BigRational::from_integer(BigInt::from(lo_max[k])) },
                ];
                t.extend(crit.iter().map(|c| SurdTerm { coef: -c.coef.clone(), radicand: c.radicand.clone() }));
                sign_of_terms(&t) == Ordering::Greater
            };
            verdicts[i] = if violation { Verdict::Violation } else { Verdict::Fine };
        }
    }

    // The longest stretch of bins free of violations.
    let mut best = (first, first);
    let mut seg_start = first;
    for (i, &(l, r)) in runs.iter().enumerate() {
        if verdicts[i] == Verdict::Violation {
            if l - seg_start > best.1 - best.0 {
                best = (seg_start, l);
            }
            seg_start = r;
        }
    }
    if last - seg_start > best.1 - best.0 {
        best = (seg_start, last);
    }
    let edge = |b: u64| w * BigRational::from_integer(b.into());
    let mut gaps = Vec::new();
    let mut violation_count = 0;
    for (i, &(l, r)) in runs.iter().enumerate() {
        if verdicts[i] == Verdict::Violation {
            violation_count += 1;
            let g = Gap { lo: edge(l), hi: edge(r + 1) };
            if g.hi >= cfg.report_floor {
                gaps.push(g);
            }
        }
    }
    Ok(CoverReport {
        x_max: cfg.x_max,
        eps: cfg.eps.clone(),
        list_size: list.len(),
        bin_width: w.clone(),
        bin_count,
        pair_count: 0,
        covered_lo: edge(best.0 + 1),
        covered_hi: edge(best.1),
        violation_count,
        ambiguous_resolved: ambiguous.len() as u64,
        gaps,
        report_floor: cfg.report_floor.clone(),
        duration_seconds: None,
    })
}

/// For each ambiguous run, the largest `R` binned into its left bin and the
/// smallest `R` binned into its right bin.
fn boundary_extremes(
    runs: &[(u64, u64)],
    ambiguous: &[usize],
    sq: &[u128],
    binner: &Binner,
) -> (Vec<u128>, Vec<u128>) {
    use std::collections::HashMap;
    let mut left: HashMap<u64, usize> = HashMap::new();
    let mut right: HashMap<u64, usize> = HashMap::new();
    for (k, &i) in ambiguous.iter().enumerate() {
        left.insert(runs[i].0, k);
        right.insert(runs[i].1, k);
    }
    let n = ambiguous.len();
    let mut marked = vec![0u64; (runs.last().map_or(0, |r| r.1) / 64 + 1) as usize];
    for b in left.keys().chain(right.keys()) {
        marked[(b / 64) as usize] |= 1 << (b % 64);
    }
    let merge = |mut a: (Vec<u128>, Vec<u128>), b: (Vec<u128>, Vec<u128>)| {
        for k in 0..n {
            a.0[k] = a.0[k].max(b.0[k]);
            a.1[k] = a.1[k].min(b.1[k]);
        }
        a
    };
    (0..sq.len())
        .into_par_iter()
        .fold(
            || (vec![0u128; n], vec![u128::MAX; n]),
            |mut acc, i| {
                for &yj in &sq[i..] {
                    let r = sq[i] + yj;
                    let b = binner.bin(r);
                    if marked[(b / 64) as usize] >> (b % 64) & 1 == 0 {
                        continue;
                    }
                    if let Some(&k) = left.get(&b) {
                        acc.0[k] = acc.0[k].max(r);
                    }
                    if let Some(&k) = right.get(&b) {
                        acc.1[k] = acc.1[k].min(r);
                    }
                }
                acc
            },
        )
        .reduce(|| (vec![0u128; n], vec![u128::MAX; n]), merge)
}
