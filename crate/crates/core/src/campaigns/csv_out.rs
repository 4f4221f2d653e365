//! CSV renderings of campaign reports. Columns are listed per writer;
//! rationals are written as `p/q` strings and `*_approx` columns are floats
//! for display.

use super::{CoverReport, ResidualRow, SlidingScan, StepTable};
use crate::error::{Error, Result};
use std::io::Write;

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Columns: `kind,lo,hi`. One `covered` row, then one `gap` row per listed gap.
pub fn write_cover<W: Write>(r: &CoverReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "lo", "hi"]).map_err(csv_err)?;
    w.write_record(["covered", &r.covered_lo.to_string(), &r.covered_hi.to_string()]).map_err(csv_err)?;
    for g in &r.gaps {
        w.write_record(["gap", &g.lo.to_string(), &g.hi.to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: `min_side_sq,best_twice_area`, descending in `min_side_sq`.
pub fn write_table<W: Write>(t: &StepTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["min_side_sq", "best_twice_area"]).map_err(csv_err)?;
    for row in &t.rows {
        w.write_record([row.min_side_sq.to_string(), row.best_twice_area.to_string()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: `q,eps_used,twice_area,residual_a,residual_b,residual_approx,
/// residual_positive,reduction_ok,small_d_bound_ok`.
pub fn write_residuals<W: Write>(rows: &[ResidualRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "q",
        "eps_used",
        "twice_area",
        "residual_a",
        "residual_b",
        "residual_approx",
        "residual_positive",
        "reduction_ok",
        "small_d_bound_ok",
    ])
    .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.eps_used.to_string(),
            r.twice_area.to_string(),
            r.residual.a().to_string(),
            r.residual.b().to_string(),
            format!("{:.6}", r.residual_approx),
            r.residual_positive.to_string(),
            r.reduction_ok.to_string(),
            r.small_d_bound_ok.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: `q,s,slides,o,w,a,b,bound_ok`; points are written as `x;y`.
pub fn write_sliding<W: Write>(s: &SlidingScan, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["q", "s", "slides", "o", "w", "a", "b", "bound_ok"]).map_err(csv_err)?;
    let pt = |p: crate::geom::LatticePoint| format!("{};{}", p.x, p.y);
    for r in &s.reports {
        let (o, ww, a, b) = match r.witness {
            Some(x) => (pt(x.o), pt(x.w), pt(x.a), pt(x.b)),
            None => Default::default(),
        };
        let ok = r.bound_ok.map(|b| b.to_string()).unwrap_or_default();
        w.write_record([r.q.to_string(), r.s.to_string(), r.slides.to_string(), o, ww, a, b, ok])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
