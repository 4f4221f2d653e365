//! One line per acceptance criterion. Exits non-zero when any criterion fails.

mod common;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use std::time::Instant;
use trisearch_core::campaigns::table::check_small_d;
use trisearch_core::campaigns::{cover_scan, log_spaced, residual_scan, sliding_scan, triangle_table, CoverConfig};
use trisearch_core::diophantine::{frac_lower_bound_check, pell_stream, seven_eps, seven_gap};
use trisearch_core::geom::{squared_sides, trapezoid_sum_check};
use trisearch_core::oracle::sliding::check_witness;
use trisearch_core::oracle::{critical_values, detect_sliding, exact_S, exceeds_main_term};
use trisearch_core::witness::{best_bound, build_witness, verify_certificate, WitnessCertificate};
use trisearch_core::{BigInt, BigRational, LatticePoint, LatticeTriangle, QuadValue};

type Outcome = Result<String, String>;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn exact_small_values() -> Outcome {
    for (q, want) in [(1, 1), (2, 2), (4, 4)] {
        let s = exact_S(&int(q)).map_err(|e| e.to_string())?.s;
        ensure(s == want, format!("S({q}) = {s}, expected {want}"))?;
    }
    let crit = critical_values(100);
    for &q in &crit {
        let got = exact_S(&int(q as i64)).map_err(|e| e.to_string())?;
        let (s, tris) = common::naive_s(q);
        ensure(got.s == s && got.m_triangles == tris, format!("mismatch with naive box at q = {q}"))?;
    }
    Ok(format!("S = 1, 2, 4 and naive box agrees on {} critical q <= 100", crit.len()))
}

fn sliding_detection() -> Outcome {
    for q in [1, 2, 4] {
        let rep = detect_sliding(&int(q)).map_err(|e| e.to_string())?;
        let w = rep.witness.ok_or(format!("no sliding at q = {q}"))?;
        ensure(check_witness(&int(q), &w).map_err(|e| e.to_string())?, format!("witness at q = {q} fails"))?;
    }
    let scan = sliding_scan(400, None).map_err(|e| e.to_string())?;
    ensure(scan.bound_violations.is_empty(), format!("lower bound fails at {:?}", scan.bound_violations))?;
    Ok(format!("{} sliding values up to 400, zero bound violations: {:?}", scan.sliding.len(), scan.sliding))
}

fn certificate_reproduction() -> Outcome {
    let cert = build_witness(&int(13421), &ratio(1, 17)).map_err(|e| e.to_string())?;
    let want = LatticeTriangle::from_coords([(0, 0), (30, 112), (-82, 82)]);
    ensure(cert.triangle == want, format!("triangle {:?}", cert.triangle))?;
    ensure(cert.twice_area == 11644, format!("twice_area {}", cert.twice_area))?;
    let m = squared_sides(&cert.triangle);
    ensure(m.s == [13444, 13444, 13448], format!("sides {:?}", m.s))?;
    ensure(verify_certificate(&cert).map_err(|e| e.to_string())?, "certificate rejected")?;
    let json = serde_json::to_string(&cert).map_err(|e| e.to_string())?;
    let back: WitnessCertificate = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(back == cert && verify_certificate(&back).map_err(|e| e.to_string())?, "JSON round trip")?;
    Ok("(0,0),(30,112),(-82,82), twice_area 11644, verified after JSON round trip".into())
}

fn seven_point_gap() -> Outcome {
    let want = QuadValue::new(int(-5), int(3));
    ensure(seven_gap() == want, "gap is not 3*sqrt3 - 5")?;
    ensure(seven_gap() == &seven_eps() + &seven_eps(), "gap is not 2*eps")?;
    Ok("gap = 3*sqrt3 - 5 = 2*eps".into())
}

fn pell_stream_check() -> Outcome {
    let sols = pell_stream(5);
    let v: Vec<BigInt> = sols.iter().map(|s| s.v.clone()).collect();
    let want: Vec<BigInt> = [1, 3, 11, 41, 153].into_iter().map(BigInt::from).collect();
    ensure(v == want, format!("v = {v:?}"))?;
    for s in &sols {
        ensure(BigInt::from(3) * &s.v * &s.v - 2 == &s.u * &s.u, format!("3v^2 - 2 != u^2 at v = {}", s.v))?;
        ensure(frac_lower_bound_check(s), format!("frac bound fails at v = {}", s.v))?;
    }
    Ok("v = 1, 3, 11, 41, 153 satisfy 3v^2 - 2 = u^2 and {v*sqrt3} > 1/(3v)".into())
}

fn trapezoid_identity() -> Outcome {
    let strat = (
        (-10_000i64..10_000, -10_000i64..10_000),
        (-50i64..50, -50i64..50).prop_filter("nonzero", |d| *d != (0, 0)),
        1i64..100,
        0i64..100,
        (-5_000i64..5_000, -5_000i64..5_000),
    );
    let mut runner = TestRunner::deterministic();
    for _ in 0..10_000 {
        let (o, dir, k_ow, k_ab, off) = strat.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let o = LatticePoint::new(o.0, o.1);
        let w = LatticePoint::new(o.x + k_ow * dir.0, o.y + k_ow * dir.1);
        let a = LatticePoint::new(o.x + off.0, o.y + off.1);
        let b = LatticePoint::new(a.x + k_ab * dir.0, a.y + k_ab * dir.1);
        let (lhs, rhs) = trapezoid_sum_check(o, a, b, w).map_err(|e| e.to_string())?;
        ensure(QuadValue::rational(int(lhs as i64)) == rhs, format!("unequal at O={o:?} A={a:?} B={b:?} W={w:?}"))?;
    }
    Ok("10000 random trapezoids, both sides equal".into())
}

fn cover_scan_desk() -> Outcome {
    let cfg = CoverConfig::new(300_000, ratio(1, 17), None);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("pool");
        pool.install(|| cover_scan(&cfg)).map(|mut r| {
            r.duration_seconds = None;
            r
        })
    };
    let one = run(1).map_err(|e| e.to_string())?;
    let eight = run(8).map_err(|e| e.to_string())?;
    let a = serde_json::to_string(&one).map_err(|e| e.to_string())?;
    let b = serde_json::to_string(&eight).map_err(|e| e.to_string())?;
    ensure(a == b, "reports differ between 1 and 8 workers")?;
    let range = format!(
        "covered [{:.1}, {:.1}], bin width {}",
        trisearch_core::quad::ratio_to_f64(&one.covered_lo),
        trisearch_core::quad::ratio_to_f64(&one.covered_hi),
        one.bin_width
    );
    ensure(one.covers(&int(100_000), &int(600_000)), format!("{range} does not contain [1e5, 6e5]"))?;
    Ok(format!("{range}, identical across 1 and 8 workers"))
}

fn triangle_table_desk() -> Outcome {
    let table = triangle_table(1_000_000_000, &ratio(1, 10)).map_err(|e| e.to_string())?;
    let check = check_small_d(&table, 2000 * 2000, 30_000 * 30_000);
    let head: Vec<_> = check.failures.iter().take(3).collect();
    ensure(
        check.ok(),
        format!(
            "{} of {} steps fail (first: {head:?}), uncovered from {:?}",
            check.failures.len(),
            check.steps_checked,
            check.uncovered_from
        ),
    )?;
    Ok(format!("{} steps checked, all below the bound", check.steps_checked))
}

fn residual_scan_desk() -> Outcome {
    let rows = residual_scan(&log_spaced(2000.0, 100_000.0, 50)).map_err(|e| e.to_string())?;
    ensure(rows.len() == 50, "row count")?;
    ensure(rows.iter().all(|r| r.reduction_ok), "a certificate failed its own inequality")?;
    let bad: Vec<String> = rows.iter().filter(|r| !r.small_d_bound_ok).map(|r| r.q.to_string()).collect();
    ensure(bad.is_empty(), format!("small_d_bound_ok is false at q = {}", bad.join(", ")))?;
    Ok("50 certificates verified, all within the small-D bound".into())
}

fn sandwich() -> Outcome {
    let crit: Vec<u64> = critical_values(10_000).into_iter().filter(|&q| q >= 100).collect();
    let mut both = 0;
    for &q in &crit {
        let qr = int(q as i64);
        let Ok(cert) = best_bound(&qr) else { continue };
        both += 1;
        let s = exact_S(&qr).map_err(|e| e.to_string())?.s;
        ensure(exceeds_main_term(&qr, s), format!("S({q}) = {s} not above sqrt3/2*q"))?;
        ensure(s as i128 <= cert.twice_area, format!("S({q}) = {s} above best_bound {}", cert.twice_area))?;
    }
    ensure(both > 0, "best_bound produced no certificate")?;
    Ok(format!("{both} of {} critical q in [100, 10^4] where best_bound applies", crit.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact small values", exact_small_values),
        ("sliding detection", sliding_detection),
        ("certificate reproduction", certificate_reproduction),
        ("seven-point gap", seven_point_gap),
        ("Pell stream", pell_stream_check),
        ("trapezoid identity", trapezoid_identity),
        ("cover scan, desk scale", cover_scan_desk),
        ("triangle table, desk scale", triangle_table_desk),
        ("residual scan", residual_scan_desk),
        ("sandwich", sandwich),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let started = Instant::now();
        let outcome = f();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
