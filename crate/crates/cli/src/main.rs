//! `trisearch`: exact searches and certificates for minimal-area non-obtuse
//! lattice triangles.
//!
//! Exit codes: 0 when everything verified, 1 when a violation was found
//! (gap, failed bound, snapshot mismatch, rejected certificate), 2 on usage
//! errors.

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use trisearch_core::campaigns::{self, csv_out, CoverConfig, RunOptions, SlidingSnapshot};
use trisearch_core::serde_util::parse_rational;
use trisearch_core::{diophantine, oracle, witness, BigRational, Error};

#[derive(Parser)]
#[command(name = "trisearch", version, about = "Exact bounds on S(D) for non-obtuse lattice triangles")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Worker threads; outputs do not depend on it.
    #[arg(long, global = true, env = "TRISEARCH_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s)
}

#[derive(Subcommand)]
enum Cmd {
    /// Solutions of 3v² − 2 = u².
    Pell {
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// The largest gap among {s√3}, s = 0..6.
    Gap7,
    /// Build and verify a witness certificate for q = D².
    Witness {
        #[arg(long, value_parser = rational)]
        d2: BigRational,
        /// Use this eps for the reduction witness; default searches the eps ladder.
        #[arg(long, value_parser = rational, conflicts_with = "explicit")]
        eps: Option<BigRational>,
        /// Half-integer witness with ε = (3√3 − 5)/2, δ = 13/100.
        #[arg(long)]
        explicit: bool,
    },
    /// Re-check a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Exact S and the M-triangles at q.
    Sval {
        #[arg(long, value_parser = rational)]
        q: BigRational,
    },
    /// Sliding at one q or over all critical values up to q-max.
    Sliding {
        #[arg(long, value_parser = rational, conflicts_with = "q_max", required_unless_present = "q_max")]
        q: Option<BigRational>,
        #[arg(long)]
        q_max: Option<u64>,
        /// Frozen sliding set to compare against.
        #[arg(long, requires = "q_max")]
        snapshot: Option<PathBuf>,
        /// Record the sliding set found by this run.
        #[arg(long, requires = "q_max")]
        write_snapshot: Option<PathBuf>,
    },
    /// Coverage of the reals by 2√(x² + y²) over the ‖√3x‖ < eps list.
    Cover {
        #[arg(long, default_value_t = 300_000)]
        x_max: i64,
        #[arg(long, value_parser = rational, default_value = "1/17")]
        eps: BigRational,
        #[arg(long, value_parser = rational)]
        bin_width: Option<BigRational>,
        /// List violating gaps only above this value (default x_max/3).
        #[arg(long, value_parser = rational)]
        report_floor: Option<BigRational>,
        /// Range that must be covered; violations inside it set exit code 1.
        #[arg(long, value_parser = rational, num_args = 2, value_names = ["LO", "HI"])]
        require: Option<Vec<BigRational>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Step table of upper bounds from pairs with ‖2√3x‖ ≤ tol.
    Table {
        #[arg(long, default_value_t = 1_000_000_000)]
        r_max: i64,
        #[arg(long, value_parser = rational, default_value = "1/10")]
        tol: BigRational,
        /// Check the small-D inequality for √q in [LO, HI].
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        check_d: Option<Vec<u64>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Residuals of the best witnesses at log-spaced q.
    Residuals {
        #[arg(long, value_parser = rational)]
        d2_min: BigRational,
        #[arg(long, value_parser = rational)]
        d2_max: BigRational,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Full-scale parameters (cover x_max = 3.5·10⁶, table r_max = 10¹²).
    #[arg(long)]
    full: bool,
    /// Resumable state file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Outer-loop indices between checkpoints.
    #[arg(long, default_value_t = 2000)]
    checkpoint_every: usize,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions { checkpoint: self.checkpoint.clone(), every: if self.checkpoint.is_some() { self.checkpoint_every } else { 0 } }
    }
}

struct Output {
    format: Format,
    sink: Box<dyn Write>,
}

impl Output {
    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut self.sink, v)?;
        writeln!(self.sink)?;
        Ok(())
    }

    fn csv_unsupported(&self, verb: &str) -> Result<()> {
        if self.format == Format::Csv {
            anyhow::bail!(Usage(format!("--format csv is not available for `{verb}`")));
        }
        Ok(())
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let sink: Box<dyn Write> = match &cli.common.out {
        Some(p) => match File::create(p) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let mut out = Output { format: cli.common.format, sink };
    let result = run(cli.cmd, &mut out).and_then(|ok| {
        out.sink.flush()?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<Usage>().is_some()
                || matches!(e.downcast_ref::<Error>(), Some(Error::InvalidArgument(_) | Error::SegmentTooShort { .. }));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

/// Returns whether everything verified.
fn run(cmd: Cmd, out: &mut Output) -> Result<bool> {
    match cmd {
        Cmd::Pell { count } => {
            out.csv_unsupported("pell")?;
            let sols = diophantine::pell_stream(count);
            let ok = sols.iter().all(diophantine::frac_lower_bound_check);
            out.json(&sols)?;
            Ok(ok)
        }
        Cmd::Gap7 => {
            out.csv_unsupported("gap7")?;
            let gap = diophantine::seven_gap();
            let ok = gap == trisearch_core::QuadValue::from_ints(-5, 3);
            out.json(&serde_json::json!({ "gap": gap, "approx": gap.approx() }))?;
            Ok(ok)
        }
        Cmd::Witness { d2, eps, explicit } => {
            out.csv_unsupported("witness")?;
            let cert = if explicit {
                witness::build_witness_explicit(&d2)
            } else if let Some(eps) = eps {
                witness::build_witness(&d2, &eps)
            } else {
                witness::best_bound(&d2)
            };
            match cert {
                Ok(c) => {
                    out.json(&c)?;
                    Ok(witness::verify_certificate(&c)?)
                }
                Err(e @ Error::NoWitness { .. }) => {
                    eprintln!("{e}");
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Verify { cert } => {
            out.csv_unsupported("verify")?;
            let text = std::fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let c: witness::WitnessCertificate = serde_json::from_str(&text).map_err(|e| Usage(format!("malformed certificate: {e}")))?;
            let verdict = witness::check_certificate(&c);
            let ok = verdict.is_ok();
            let reason = verdict.err().map(|e| e.to_string());
            out.json(&serde_json::json!({ "verified": ok, "failed_check": reason }))?;
            Ok(ok)
        }
        Cmd::Sval { q } => {
            out.csv_unsupported("sval")?;
            let sv = oracle::exact_S(&q)?;
            let ok = oracle::exceeds_main_term(&sv.q, sv.s);
            out.json(&sv)?;
            Ok(ok)
        }
        Cmd::Sliding { q, q_max, snapshot, write_snapshot } => {
            if let Some(q) = q {
                out.csv_unsupported("sliding --q")?;
                let rep = oracle::detect_sliding(&q)?;
                let ok = !rep.slides || rep.bound_ok == Some(true);
                out.json(&rep)?;
                return Ok(ok);
            }
            let q_max = q_max.expect("clap enforces q or q-max");
            let snap: Option<SlidingSnapshot> = match &snapshot {
                Some(p) => Some(serde_json::from_str(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?),
                None => None,
            };
            let scan = campaigns::sliding_scan(q_max, snap.as_ref())?;
            if let Some(p) = write_snapshot {
                std::fs::write(&p, serde_json::to_string_pretty(&scan.snapshot())? + "\n")?;
            }
            match out.format {
                Format::Json => out.json(&scan)?,
                Format::Csv => csv_out::write_sliding(&scan, &mut out.sink)?,
            }
            Ok(scan.bound_violations.is_empty() && scan.snapshot_match != Some(false))
        }
        Cmd::Cover { x_max, eps, bin_width, report_floor, require, run } => {
            let x_max = if run.full { 3_500_000 } else { x_max };
            let mut cfg = CoverConfig::new(x_max, eps, bin_width);
            if let Some(f) = report_floor {
                cfg.report_floor = f;
            }
            let report = campaigns::cover_scan_with(&cfg, &run.options())?;
            match out.format {
                Format::Json => out.json(&report)?,
                Format::Csv => csv_out::write_cover(&report, &mut out.sink)?,
            }
            Ok(match require {
                Some(r) => report.covers(&r[0], &r[1]),
                None => true,
            })
        }
        Cmd::Table { r_max, tol, check_d, run } => {
            let r_max = if run.full { 1_000_000_000_000 } else { r_max };
            let table = campaigns::triangle_table_with(r_max, &tol, &run.options())?;
            let check = check_d.map(|d| {
                let (lo, hi) = (d[0] as i128, d[1] as i128);
                campaigns::table::check_small_d(&table, lo * lo, hi * hi)
            });
            match out.format {
                Format::Json => out.json(&serde_json::json!({ "table": table, "check": check }))?,
                Format::Csv => csv_out::write_table(&table, &mut out.sink)?,
            }
            Ok(check.is_none_or(|c| c.ok()))
        }
        Cmd::Residuals { d2_min, d2_max, points } => {
            let lo = trisearch_core::quad::ratio_to_f64(&d2_min).sqrt();
            let hi = trisearch_core::quad::ratio_to_f64(&d2_max).sqrt();
            if !(lo >= 10.0 && hi >= lo && points >= 1) {
                anyhow::bail!(Usage("need 100 <= d2-min <= d2-max and points >= 1".into()));
            }
            let qs = campaigns::log_spaced(lo, hi, points);
            let rows = campaigns::residual_scan(&qs)?;
            match out.format {
                Format::Json => out.json(&rows)?,
                Format::Csv => csv_out::write_residuals(&rows, &mut out.sink)?,
            }
            Ok(rows.iter().all(|r| r.reduction_ok && r.residual_positive && r.small_d_bound_ok))
        }
    }
}
