mod common;

use trisearch_core::oracle::{critical_values, exact_S};
use trisearch_core::BigRational;

#[test]
fn exact_s_matches_naive_box_up_to_100() {
    for q in critical_values(100) {
        let got = exact_S(&BigRational::from_integer((q as i64).into())).unwrap();
        let (s, tris) = common::naive_s(q);
        assert_eq!(got.s, s, "S at q = {q}");
        assert_eq!(got.m_triangles, tris, "M-triangles at q = {q}");
    }
}

#[test]
fn first_values() {
    let s: Vec<u64> = [1i64, 2, 4]
        .iter()
        .map(|&q| exact_S(&BigRational::from_integer(q.into())).unwrap().s)
        .collect();
    assert_eq!(s, vec![1, 2, 4]);
}
