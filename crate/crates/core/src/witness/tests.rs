use super::*;
use crate::geom::squared_sides;

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn reduction_example() {
    let c = build_witness(&r(13421, 1), &r(1, 17)).unwrap();
    assert_eq!((c.pair.twice_x, c.pair.twice_y), (30, 112));
    assert_eq!((c.z, c.t), (-82, 82));
    assert_eq!(c.twice_area, 11644);
    assert_eq!(squared_sides(&c.triangle).s, [13444, 13444, 13448]);
    assert!(verify_certificate(&c).unwrap());
    let js = serde_json::to_string(&c).unwrap();
    let back: WitnessCertificate = serde_json::from_str(&js).unwrap();
    assert_eq!(back, c);
    assert!(verify_certificate(&back).unwrap());
}

#[test]
fn tampering_is_detected() {
    let c = build_witness(&r(13421, 1), &r(1, 17)).unwrap();
    let mut bad = c.clone();
    bad.twice_area = 11643;
    assert!(!verify_certificate(&bad).unwrap());
    let mut bad = c.clone();
    bad.q = r(13445, 1);
    assert!(!verify_certificate(&bad).unwrap());
    let mut bad = c;
    bad.z += 1;
    assert!(!verify_certificate(&bad).unwrap());
}

#[test]
fn tiny_eps_has_no_witness() {
    assert!(matches!(build_witness(&r(13421, 1), &r(1, 1000)), Err(Error::NoWitness { .. })));
}

#[test]
fn greedy_pair_examples() {
    let p = find_pair(&r(3361, 1), &r(1, 17)).unwrap();
    assert_eq!((p.twice_x, p.twice_y), (112, 30));
    assert_eq!(p.norm_sq, r(3361, 1));
    let p = find_pair(&r(1_000_000, 1), &r(1, 10)).unwrap();
    assert_eq!((p.twice_x, p.twice_y), (2000, 0));
    let p = find_pair(&r(4, 1), &r(1, 2)).unwrap();
    assert_eq!((p.twice_x, p.twice_y), (4, 0));
    assert!(p.slack.is_empty());
}

#[test]
fn halfint_pair_bounds() {
    for n in [1001i64, 5000, 77_777, 1_000_000, 123_456_789] {
        let p = find_halfint_pair(&r(n, 1)).unwrap();
        assert!(p.norm_sq >= r(n, 1));
    }
    let p = find_halfint_pair(&r(1_000_000, 1)).unwrap();
    assert!((p.twice_x - 2000).abs() <= 7);
    assert!(p.y() <= r(906, 10));
}

#[test]
fn explicit_witness_verifies() {
    for q in [1_000_001i64, 4_000_000, 49_000_000_000_001, 123_456_789_012] {
        match build_witness_explicit(&r(q, 1)) {
            Ok(c) => assert!(verify_certificate(&c).unwrap(), "q = {q}"),
            Err(Error::NoWitness { .. }) => assert!(q < 44_890_000_000_000, "q = {q}"),
            Err(e) => panic!("q = {q}: {e}"),
        }
    }
}

#[test]
fn best_bound_example() {
    let c = best_bound(&r(13421, 1)).unwrap();
    assert!(verify_certificate(&c).unwrap());
    assert!(c.twice_area <= 11644);
    assert_eq!(c.residual().sign(), Ordering::Greater);
}

#[test]
fn ladder_is_increasing() {
    let l = eps_ladder(&r(13421, 1));
    assert!(l.windows(2).all(|w| w[0] < w[1]));
    assert!(l.last().unwrap() < &r(1, 2));
}
