//! `lenslab`: exact lens-space invariants and surgery censuses.
//!
//! Exit codes: 0 success; 1 when a verification finds violations or
//! `--expect-feasible` is not met; 2 on invalid input.

mod cache;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lenslab_core::{
    d_borromean, dbound_scan_p, delta, feasible_genera, hj_expand, lambda_rec, sharpness_case,
    table1, torus_census, verify_dcw_p, DCalc, LensSpace, Rational,
};

use cache::Cache;
use output::Format;

#[derive(Parser)]
#[command(name = "lenslab", version, about = "Exact lens-space invariants and censuses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table, global = false)]
    format: Format,
}

#[derive(Args)]
struct CacheOpt {
    /// Result cache file (JSON lines); defaults to $LENSLAB_CACHE
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct Jobs {
    /// Worker threads for census scans (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// d-invariants of L(p,q) for every Spin^c structure
    D {
        p: i64,
        q: i64,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        cache: CacheOpt,
    },
    /// Casson-Walker invariant and the gap Delta = 12(lambda(p,q) - lambda(p,1))
    Lambda {
        p: i64,
        q: i64,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        cache: CacheOpt,
    },
    /// Hirzebruch-Jung continued fraction of p/q (all terms >= 2)
    Cf {
        p: i64,
        q: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Surgery obstruction for L(p,q): feasible genera and witnesses (JSON)
    Obstruct {
        p: i64,
        q: i64,
        /// Largest genus to try (default: the p >= 2g-1 cap)
        #[arg(long)]
        gmax: Option<i64>,
        /// Exit 1 unless at least one genus is feasible
        #[arg(long)]
        expect_feasible: bool,
    },
    /// d-invariant of the Borromean surgery piece at parameters (n, k, g)
    Borromean {
        n: i64,
        k: i64,
        g: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Check the gap bound census up to --pmax; exit 1 on violations
    VerifyDbound {
        #[arg(long)]
        pmax: i64,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Check sum_i d(p,q,i) = p*lambda(p,q) up to --pmax; exit 1 on violations
    VerifyDcw {
        #[arg(long)]
        pmax: i64,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Continued-fraction families [x], [x,2], ... with exact gap values
    Table1 {
        /// Largest x (families run over 4 <= x <= xmax)
        #[arg(long, default_value_t = 40)]
        xmax: i64,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Integral lens-space slopes on torus knots with ab <= --ab-max
    CensusTorus {
        #[arg(long, default_value_t = 200)]
        ab_max: i64,
        #[command(flatten)]
        common: Common,
    },
    /// The family L(4k+3, 4) attaining p = 4g+3, for k <= --kmax
    Sharpness {
        #[arg(long, default_value_t = 12)]
        kmax: i64,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        jobs: Jobs,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn configure_pool(jobs: &Jobs) {
    if let Some(n) = jobs.jobs {
        // ignore failure: the global pool can only be set once
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::D { p, q, common, cache } => cmd_d(p, q, common.format, cache),
        Command::Lambda { p, q, common, cache } => cmd_lambda(p, q, common.format, cache),
        Command::Cf { p, q, common } => cmd_cf(p, q, common.format),
        Command::Obstruct { p, q, gmax, expect_feasible } => {
            cmd_obstruct(p, q, gmax, expect_feasible)
        }
        Command::Borromean { n, k, g, common } => cmd_borromean(n, k, g, common.format),
        Command::VerifyDbound { pmax, jobs } => {
            configure_pool(&jobs);
            cmd_verify_dbound(pmax)
        }
        Command::VerifyDcw { pmax, jobs } => {
            configure_pool(&jobs);
            cmd_verify_dcw(pmax)
        }
        Command::Table1 { xmax, common, jobs } => {
            configure_pool(&jobs);
            cmd_table1(xmax, common.format)
        }
        Command::CensusTorus { ab_max, common } => cmd_census_torus(ab_max, common.format),
        Command::Sharpness { kmax, common, jobs } => {
            configure_pool(&jobs);
            cmd_sharpness(kmax, common.format)
        }
    }
}

type CmdResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn open_cache(flag: Option<PathBuf>) -> Option<Cache> {
    cache::resolve_path(flag).map(|p| Cache::open(&p))
}

fn cmd_d(p: i64, q: i64, format: Format, cache_opt: CacheOpt) -> CmdResult {
    let y = LensSpace::new(p, q)?;
    let mut cache = open_cache(cache_opt.cache);
    let values: Vec<Rational> = match cache.as_ref().and_then(|c| c.get(y.p(), y.q())) {
        Some(entry) if entry.d.is_some() => entry.d.clone().unwrap(),
        _ => {
            let table = DCalc::new().d_table(y);
            if let Some(c) = cache.as_mut() {
                c.put(cache::Entry {
                    p: y.p(),
                    q: y.q(),
                    lambda: lambda_rec(y.p(), y.q())?,
                    d: Some(table.values().to_vec()),
                });
            }
            table.values().to_vec()
        }
    };
    if let Some(c) = &cache {
        c.save()?;
    }
    let rows: Vec<Vec<String>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            vec![y.p().to_string(), y.q().to_string(), i.to_string(), v.to_string()]
        })
        .collect();
    #[derive(Serialize)]
    struct Row<'a> {
        p: i64,
        q: i64,
        i: i64,
        d: &'a Rational,
    }
    let json: Vec<Row> = values
        .iter()
        .enumerate()
        .map(|(i, d)| Row { p: y.p(), q: y.q(), i: i as i64, d })
        .collect();
    output::emit(format, &["p", "q", "i", "d"], &rows, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_lambda(p: i64, q: i64, format: Format, cache_opt: CacheOpt) -> CmdResult {
    let y = LensSpace::new(p, q)?;
    let mut cache = open_cache(cache_opt.cache);
    let lam = match cache.as_ref().and_then(|c| c.get(y.p(), y.q())) {
        Some(entry) => entry.lambda.clone(),
        None => {
            let lam = lambda_rec(y.p(), y.q())?;
            if let Some(c) = cache.as_mut() {
                c.put(cache::Entry { p: y.p(), q: y.q(), lambda: lam.clone(), d: None });
            }
            lam
        }
    };
    if let Some(c) = &cache {
        c.save()?;
    }
    let gap = delta(y.p(), y.q())?;
    #[derive(Serialize)]
    struct Row {
        p: i64,
        q: i64,
        lambda: Rational,
        delta: Rational,
    }
    let rows = vec![vec![
        y.p().to_string(),
        y.q().to_string(),
        lam.to_string(),
        gap.to_string(),
    ]];
    let json = vec![Row { p: y.p(), q: y.q(), lambda: lam, delta: gap }];
    output::emit(format, &["p", "q", "lambda", "delta"], &rows, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_cf(p: i64, q: i64, format: Format) -> CmdResult {
    let y = LensSpace::new(p, q)?;
    if y.is_s3() {
        return Err("p/q has no continued fraction expansion for p = 1".into());
    }
    let cf = hj_expand(y.p(), y.q())?;
    #[derive(Serialize)]
    struct Row<'a> {
        p: i64,
        q: i64,
        terms: &'a [i64],
    }
    let rows = vec![vec![y.p().to_string(), y.q().to_string(), cf.to_string()]];
    let json = vec![Row { p: y.p(), q: y.q(), terms: cf.terms() }];
    output::emit(format, &["p", "q", "terms"], &rows, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_obstruct(p: i64, q: i64, gmax: Option<i64>, expect_feasible: bool) -> CmdResult {
    let y = LensSpace::new(p, q)?;
    let report = feasible_genera(y, gmax)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    if expect_feasible && report.feasible.is_empty() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_borromean(n: i64, k: i64, g: i64, format: Format) -> CmdResult {
    let value = d_borromean(n, k, g)?;
    #[derive(Serialize)]
    struct Row {
        n: i64,
        k: i64,
        g: i64,
        d: Rational,
    }
    let rows =
        vec![vec![n.to_string(), k.to_string(), g.to_string(), value.to_string()]];
    let json = vec![Row { n, k, g, d: value }];
    output::emit(format, &["n", "k", "g", "d"], &rows, &json)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_dbound(pmax: i64) -> CmdResult {
    use rayon::prelude::*;
    let records: Vec<_> = (2..=pmax)
        .into_par_iter()
        .map(dbound_scan_p)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .filter(|r| r.is_violation())
        .collect();
    println!("{} violations (p <= {pmax})", records.len());
    if records.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    println!("p,q,delta,threshold");
    for r in &records {
        println!("{},{},{},{}", r.p, r.q, r.delta, r.threshold);
    }
    Ok(ExitCode::from(1))
}

fn cmd_verify_dcw(pmax: i64) -> CmdResult {
    use rayon::prelude::*;
    let violations: Vec<(i64, i64)> = (2..=pmax)
        .into_par_iter()
        .map(verify_dcw_p)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    println!("{} violations (p <= {pmax})", violations.len());
    if violations.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    println!("p,q");
    for (p, q) in &violations {
        println!("{p},{q}");
    }
    Ok(ExitCode::from(1))
}

fn cmd_table1(xmax: i64, format: Format) -> CmdResult {
    use rayon::prelude::*;
    let rows_data: Vec<_> = (4..=xmax.max(4))
        .into_par_iter()
        .map(|x| table1(x, x))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let rows: Vec<Vec<String>> = rows_data
        .iter()
        .map(|r| {
            vec![
                r.family.to_string(),
                r.x.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                r.delta.to_string(),
                r.printed.to_string(),
                r.matches.to_string(),
            ]
        })
        .collect();
    output::emit(
        format,
        &["family", "x", "p", "q", "delta", "printed", "matches"],
        &rows,
        &rows_data,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_census_torus(ab_max: i64, format: Format) -> CmdResult {
    let records = torus_census(ab_max)?;
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.a.to_string(),
                r.b.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                r.genus.to_string(),
                r.bound_ok.to_string(),
                r.equality.to_string(),
            ]
        })
        .collect();
    output::emit(
        format,
        &["a", "b", "p", "q", "genus", "bound_ok", "equality"],
        &rows,
        &records,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sharpness(kmax: i64, format: Format) -> CmdResult {
    use rayon::prelude::*;
    let records: Vec<_> = (1..=kmax.max(1))
        .into_par_iter()
        .map(sharpness_case)
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.candidate.p().to_string(),
                r.candidate.q().to_string(),
                r.minimal_genus.map_or_else(|| "-".into(), |g| g.to_string()),
                r.sharp.to_string(),
            ]
        })
        .collect();
    output::emit(format, &["k", "p", "q", "minimal_genus", "sharp"], &rows, &records)?;
    Ok(ExitCode::SUCCESS)
}
