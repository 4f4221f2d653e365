//! Residuals `twice_area − √3/2·q` of the best reduction witnesses.

use crate::error::Result;
use crate::quad::surd::{sign_of_terms, SurdTerm};
use crate::quad::{int, QuadValue};
use crate::witness::{best_bound, verify_certificate};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    #[serde(with = "crate::serde_util::rational")]
    pub q: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub eps_used: BigRational,
    pub twice_area: i128,
    /// `twice_area − √3/2·q`, exact.
    pub residual: QuadValue,
    /// For display only.
    pub residual_approx: f64,
    pub residual_positive: bool,
    /// The certificate re-verified, including its own area bound.
    pub reduction_ok: bool,
    /// `twice_area < √3/2·q + √q/(2√3) − 1`, exact.
    pub small_d_bound_ok: bool,
}

/// `s < √3/2·q + √q/(2√3) − 1`, i.e. `2√3·(s + 1) < 3q + √q`.
pub fn small_d_bound(q: &BigRational, s: u64) -> bool {
    let terms = [
        SurdTerm { coef: q * int(3), radicand: int(1) },
        SurdTerm { coef: int(1), radicand: q.clone() },
        SurdTerm { coef: int(-2) * int(s as i64 + 1), radicand: int(3) },
    ];
    sign_of_terms(&terms) == Ordering::Greater
}

pub fn residual_row(q: &BigRational) -> Result<ResidualRow> {
    let cert = best_bound(q)?;
    let residual = cert.residual();
    Ok(ResidualRow {
        q: q.clone(),
        eps_used: cert.eps.a().clone(),
        twice_area: cert.twice_area,
        residual_approx: residual.approx(),
        residual_positive: residual.sign() == Ordering::Greater,
        residual,
        reduction_ok: verify_certificate(&cert)?,
        small_d_bound_ok: small_d_bound(q, cert.twice_area as u64),
    })
}

/// One row per `q`, in input order.
pub fn residual_scan(q_list: &[BigRational]) -> Result<Vec<ResidualRow>> {
    q_list.par_iter().map(residual_row).collect()
}

/// `n` integers `round(d²)` for `d` log-spaced over `[d_lo, d_hi]`.
pub fn log_spaced(d_lo: f64, d_hi: f64, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|i| {
            let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            let d = d_lo * (d_hi / d_lo).powf(t);
            BigRational::from_integer(((d * d).round() as i64).into())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_row() {
        let row = residual_row(&int(13421)).unwrap();
        assert!(row.twice_area <= 11644);
        assert!(row.residual_positive && row.reduction_ok);
        assert!(row.residual_approx < 21.1);
    }

    #[test]
    fn small_d_examples() {
        // q = 4·10⁶: √3/2·q + √q/(2√3) − 1 ≈ 3464677.97
        assert!(small_d_bound(&int(4_000_000), 3_464_677));
        assert!(!small_d_bound(&int(4_000_000), 3_464_678));
    }

    #[test]
    fn log_spacing_endpoints() {
        let v = log_spaced(2000.0, 100_000.0, 50);
        assert_eq!(v.len(), 50);
        assert_eq!(v[0], int(4_000_000));
        assert_eq!(v[49], BigRational::from_integer(10_000_000_000i64.into()));
    }
}
