//! Sliding over every critical value up to a bound, against a frozen snapshot.

use crate::error::Result;
use crate::oracle::sliding::sliding_from;
use crate::oracle::{critical_values, exact_S, SlidingReport};
use crate::quad::int;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The sliding set recorded from an earlier verified run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlidingSnapshot {
    pub q_max: u64,
    pub sliding: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlidingScan {
    pub q_max: u64,
    pub reports: Vec<SlidingReport>,
    pub sliding: Vec<u64>,
    /// Sliding values where the lower bound failed; always empty unless the
    /// enumeration or the comparator is broken.
    pub bound_violations: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_match: Option<bool>,
}

impl SlidingScan {
    pub fn snapshot(&self) -> SlidingSnapshot {
        SlidingSnapshot { q_max: self.q_max, sliding: self.sliding.clone() }
    }

    /// Compares the overlap `q ≤ min(q_max, snapshot.q_max)`.
    pub fn matches(&self, snap: &SlidingSnapshot) -> bool {
        let top = self.q_max.min(snap.q_max);
        let mine: Vec<u64> = self.sliding.iter().copied().filter(|&q| q <= top).collect();
        let theirs: Vec<u64> = snap.sliding.iter().copied().filter(|&q| q <= top).collect();
        mine == theirs
    }
}

pub fn sliding_scan(q_max: u64, snapshot: Option<&SlidingSnapshot>) -> Result<SlidingScan> {
    let reports: Vec<SlidingReport> = critical_values(q_max)
        .into_par_iter()
        .map(|q| exact_S(&int(q as i64)).map(|sv| sliding_from(&sv)))
        .collect::<Result<_>>()?;
    let as_u64 = |r: &SlidingReport| r.q.to_integer().try_into().expect("integer q");
    let sliding: Vec<u64> = reports.iter().filter(|r| r.slides).map(as_u64).collect();
    let bound_violations: Vec<u64> =
        reports.iter().filter(|r| r.slides && r.bound_ok != Some(true)).map(as_u64).collect();
    let mut scan = SlidingScan { q_max, reports, sliding, bound_violations, snapshot_match: None };
    scan.snapshot_match = snapshot.map(|s| scan.matches(s));
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let s = sliding_scan(4, None).unwrap();
        assert_eq!(s.sliding, vec![1, 2, 4]);
        assert!(s.bound_violations.is_empty());
        assert!(s.matches(&s.snapshot()));
    }
}
