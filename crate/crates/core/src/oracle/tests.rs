use super::*;

fn q(n: i64) -> BigRational {
    int(n)
}

#[test]
fn critical_examples() {
    assert_eq!(critical_values(10), vec![1, 2, 4, 5, 8, 9, 10]);
    assert_eq!(critical_values(1), vec![1]);
}

#[test]
fn small_s_values() {
    let s1 = exact_S(&q(1)).unwrap();
    assert_eq!(s1.s, 1);
    assert_eq!(s1.m_triangles, vec![LatticeTriangle::from_coords([(0, 0), (0, 1), (1, 0)])]);
    assert_eq!(exact_S(&q(2)).unwrap().s, 2);
    assert_eq!(exact_S(&q(4)).unwrap().s, 4);
}

#[test]
fn lower_bound_and_monotone() {
    let mut prev = 0;
    for c in critical_values(600) {
        let sv = exact_S(&q(c as i64)).unwrap();
        assert!(exceeds_main_term(&sv.q, sv.s), "q = {c}");
        assert!(sv.s >= prev, "q = {c}");
        prev = sv.s;
    }
}

#[test]
fn rational_q_matches_ceiling() {
    let a = exact_S(&BigRational::new(37.into(), 2.into())).unwrap();
    let b = exact_S(&q(19)).unwrap();
    assert_eq!(a.s, b.s);
    assert_eq!(a.m_triangles, b.m_triangles);
}

#[test]
fn tiny_budget_reports_partial_bound() {
    match exact_S_with_budget(&q(5000), 10) {
        Err(Error::Budget { partial_bound }) => assert!(partial_bound >= exact_S(&q(5000)).unwrap().s),
        other => panic!("expected budget error, got {other:?}"),
    }
}
