//! The `sato-tate` command line.
//!
//! Exit status: 0 when every requested check passed, 1 when a check failed,
//! 2 for usage or argument errors, 3 for runtime errors such as missing caches.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cache::{load_cached, load_or_compute, Provenance};
use crate::curve_family::{is_prime, ScanStrategy, TraceHistogram};
use crate::equidistribution::Interval;
use crate::error::{invalid, Error, Result};
use crate::exact_kernel::{alternating_lemma_residual, s_m_direct, vandermonde_residual};
use crate::hypergeometric::s_m_hyper;
use crate::rational::ExactRational;
use crate::report::{
    discrepancy_rows, expsum_rows, moment_rows, report_table, trend_rows, Failure, Format,
    Output, Table,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

pub const CACHE_DIR_ENV: &str = "SATO_TATE_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "sato-tate", version, about = "Exact identity checks and Sato-Tate sweeps over all elliptic curves mod p")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Directory holding one trace-histogram file per prime.
    #[arg(long, global = true, env = CACHE_DIR_ENV, default_value = ".sato-tate-cache")]
    pub cache_dir: PathBuf,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Hecke-trace exponent c in [0, 1).
    #[arg(long = "c", global = true, default_value_t = 0.75)]
    pub c: f64,

    #[arg(long, global = true, default_value_t = 0.01)]
    pub epsilon: f64,

    /// Fail instead of scanning when a cache file is missing.
    #[arg(long, global = true)]
    pub no_compute: bool,

    /// Scan one curve per twist orbit instead of every curve.
    #[arg(long, global = true)]
    pub orbits: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the alternating binomial identity by both routes plus the lemma suites.
    Identities(IdentitiesArgs),
    /// Compute or load trace histograms and validate them.
    Scan(PrimesArg),
    /// Empirical moments against the Catalan numbers.
    Moments(MomentsArgs),
    /// Exact and floating exponential sums.
    Expsum(ExpsumArgs),
    /// Interval discrepancies with their Erdős–Turán bounds.
    Discrepancy(DiscrepancyArgs),
    /// Moments, exponential sums, discrepancies and the trend constant.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 500)]
    pub max_m: u64,
    /// Random instances per lemma suite.
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PrimesArg {
    /// Primes as `lo..hi` (inclusive), single values, or a comma list of both.
    #[arg(long, default_value = "5..199")]
    pub primes: PrimeSet,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub primes: PrimesArg,
    #[arg(long, default_value_t = 3)]
    pub max_r: u32,
}

#[derive(Debug, Args)]
pub struct ExpsumArgs {
    #[command(flatten)]
    pub primes: PrimesArg,
    #[arg(long, default_value_t = 8)]
    pub max_m: u64,
}

#[derive(Debug, Args)]
pub struct DiscrepancyArgs {
    #[command(flatten)]
    pub primes: PrimesArg,
    /// Comma-separated `lo:hi` intervals.
    #[arg(long)]
    pub intervals: Option<IntervalList>,
    /// Fixed Erdős–Turán cutoff instead of the optimal one.
    #[arg(long)]
    pub cutoff: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub primes: PrimesArg,
    #[arg(long, default_value_t = 8)]
    pub max_m: u64,
    #[arg(long, default_value_t = 3)]
    pub max_r: u32,
    #[arg(long)]
    pub intervals: Option<IntervalList>,
}

/// Sorted, deduplicated primes `>= 5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSet(pub Vec<u64>);

impl FromStr for PrimeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|e| invalid(format!("bad prime bound {v:?}: {e}")))
        };
        let mut primes = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            if let Some((lo, hi)) = part.split_once("..") {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let (lo, hi) = (num(lo)?, num(hi)?);
                primes.extend((lo.max(5)..=hi).filter(|&n| is_prime(n)));
            } else {
                let n = num(part)?;
                if n < 5 || !is_prime(n) {
                    return Err(Error::NotAdmissiblePrime(n));
                }
                primes.push(n);
            }
        }
        primes.sort_unstable();
        primes.dedup();
        if primes.is_empty() {
            return Err(invalid(format!("no primes >= 5 in {s:?}")));
        }
        Ok(PrimeSet(primes))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalList(pub Vec<Interval>);

impl FromStr for IntervalList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let list = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(Interval::from_str)
            .collect::<Result<Vec<_>>>()?;
        if list.is_empty() {
            return Err(invalid("empty interval list"));
        }
        Ok(IntervalList(list))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::NotAdmissiblePrime(_) => EXIT_USAGE,
                _ => EXIT_RUNTIME,
            }
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    if !(0.0..1.0).contains(&g.c) {
        return Err(invalid(format!("--c must lie in [0, 1), got {}", g.c)));
    }
    if !g.epsilon.is_finite() || g.epsilon <= 0.0 {
        return Err(invalid(format!("--epsilon must be > 0, got {}", g.epsilon)));
    }
    let workers = match g.workers {
        Some(0) => return Err(invalid("--workers must be >= 1")),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;

    // Progress notes are buffered: the pool closure must be Send.
    let mut notes: Vec<u8> = Vec::new();
    let result = pool.install(|| {
        let stderr: &mut dyn Write = &mut notes;
        run_command(cli, g, stderr)
    });
    let _ = stderr.write_all(&notes);
    let output = result?;
    write_output(g, &output, stdout)?;
    if output.failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        if g.format == Format::Csv {
            for f in &output.failures {
                let p = f.p.map(|p| format!(" p={p}")).unwrap_or_default();
                let _ = writeln!(stderr, "FAIL {}{p}: {}", f.check, f.detail);
            }
        }
        Ok(EXIT_CHECK_FAILED)
    }
}

fn run_command(cli: &Cli, g: &GlobalOpts, stderr: &mut dyn Write) -> Result<Output> {
    match &cli.command {
        Command::Identities(args) => cmd_identities(args),
        Command::Scan(args) => cmd_scan(g, &args.primes, stderr),
        Command::Moments(args) => {
            let hists = histograms(g, &args.primes.primes, stderr)?;
            let mut table = report_table();
            for h in &hists {
                table.extend(moment_rows(h, args.max_r));
            }
            let mut meta = base_meta("moments", g, &args.primes.primes);
            meta.insert("max_R".into(), args.max_r.to_string());
            Ok(Output { meta, table, failures: vec![] })
        }
        Command::Expsum(args) => {
            require(args.max_m >= 1, "--max-m must be >= 1")?;
            let hists = histograms(g, &args.primes.primes, stderr)?;
            let parts = hists
                .par_iter()
                .map(|h| expsum_rows(h, args.max_m))
                .collect::<Result<Vec<_>>>()?;
            let mut table = report_table();
            let mut failures = Vec::new();
            for (t, f) in parts {
                table.extend(t);
                failures.extend(f);
            }
            let mut meta = base_meta("expsum", g, &args.primes.primes);
            meta.insert("max_m".into(), args.max_m.to_string());
            Ok(Output { meta, table, failures })
        }
        Command::Discrepancy(args) => {
            if let Some(m) = args.cutoff {
                require(m >= 1, "--cutoff must be >= 1")?;
            }
            let intervals = interval_list(&args.intervals);
            let hists = histograms(g, &args.primes.primes, stderr)?;
            let mut table = report_table();
            let mut failures = Vec::new();
            let mut reports = Vec::new();
            for h in &hists {
                let (t, reps, f) = discrepancy_rows(h, &intervals, g.c, g.epsilon, args.cutoff)?;
                table.extend(t);
                reports.extend(reps);
                failures.extend(f);
            }
            table.extend(trend_rows(&reports, &intervals));
            let mut meta = base_meta("discrepancy", g, &args.primes.primes);
            meta.insert("intervals".into(), fmt_intervals(&intervals));
            if let Some(m) = args.cutoff {
                meta.insert("cutoff".into(), m.to_string());
            }
            Ok(Output { meta, table, failures })
        }
        Command::Report(args) => cmd_report(g, args, stderr),
    }
}

fn write_output(g: &GlobalOpts, output: &Output, stdout: &mut dyn Write) -> Result<()> {
    match &g.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            output
                .write(g.format, &mut w)
                .and_then(|_| w.flush())
                .map_err(|source| Error::Io { path: path.clone(), source })
        }
        None => output
            .write(g.format, stdout)
            .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg))
    }
}

fn interval_list(list: &Option<IntervalList>) -> Vec<Interval> {
    list.as_ref().map_or_else(Interval::defaults, |l| l.0.clone())
}

fn fmt_intervals(list: &[Interval]) -> String {
    list.iter()
        .map(|i| format!("{}:{}", i.lo(), i.hi()))
        .collect::<Vec<_>>()
        .join(",")
}

fn base_meta(command: &str, g: &GlobalOpts, primes: &PrimeSet) -> BTreeMap<String, String> {
    let list = &primes.0;
    BTreeMap::from([
        ("tool".into(), format!("sato-tate/{}", env!("CARGO_PKG_VERSION"))),
        ("command".into(), command.into()),
        ("primes".into(), format!("{}..{} ({} primes)", list[0], list[list.len() - 1], list.len())),
        ("c".into(), g.c.to_string()),
        ("epsilon".into(), g.epsilon.to_string()),
    ])
}

/// `s_m` by both routes for `m <= max_m`, then the randomized lemma suites.
pub fn cmd_identities(args: &IdentitiesArgs) -> Result<Output> {
    require(args.max_m >= 1, "--max-m must be >= 1")?;
    let mut table = Table::new(&["check", "param", "value", "expected", "pass"]);
    let mut failures = Vec::new();
    let mut record = |table: &mut Table, check: &str, param: String, value: String, expected: String, pass: bool| {
        if !pass {
            failures.push(Failure::new(check, None, format!("{param}: got {value}, expected {expected}")));
        }
        table.push(vec![check.into(), param, value, expected, pass.to_string()]);
    };

    let rows = (1..=args.max_m)
        .into_par_iter()
        .map(|m| Ok((m, s_m_direct(m)?, s_m_hyper(m)?)))
        .collect::<Result<Vec<_>>>()?;
    for (m, direct, hyper) in rows {
        let expected = if m == 1 {
            ExactRational::new(1, 2).unwrap()
        } else {
            ExactRational::zero()
        };
        let ok = direct == expected;
        record(&mut table, "s_m_direct", format!("m={m}"), direct.to_string(), expected.to_string(), ok);
        let ok = hyper == direct;
        record(&mut table, "s_m_hyper", format!("m={m}"), hyper.to_string(), direct.to_string(), ok);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut bad = Vec::new();
    for _ in 0..args.samples {
        let (r, s) = (rng.random_range(-20i64..=20), rng.random_range(-20i64..=20));
        let (m, n) = (rng.random_range(-5i64..=10), rng.random_range(-5i64..=10));
        let res = vandermonde_residual(&r.into(), &s.into(), m, n);
        if !res.is_zero() {
            bad.push(format!("({r},{s},{m},{n})->{res}"));
        }
    }
    let pass = bad.is_empty();
    record(
        &mut table,
        "vandermonde",
        format!("samples={} seed={}", args.samples, args.seed),
        format!("{} nonzero", bad.len()),
        "0 nonzero".into(),
        pass,
    );

    let mut bad = Vec::new();
    for _ in 0..args.samples {
        let (ell, m, s) = (
            rng.random_range(0i64..=15),
            rng.random_range(0i64..=15),
            rng.random_range(0i64..=15),
        );
        let n = rng.random_range(-5i64..=35);
        let res = alternating_lemma_residual(ell, m, s, n)?;
        if !res.is_zero() {
            bad.push(format!("({ell},{m},{s},{n})->{res}"));
        }
    }
    let pass = bad.is_empty();
    record(
        &mut table,
        "alternating_lemma",
        format!("samples={} seed={}", args.samples, args.seed),
        format!("{} nonzero", bad.len()),
        "0 nonzero".into(),
        pass,
    );

    let meta = BTreeMap::from([
        ("tool".into(), format!("sato-tate/{}", env!("CARGO_PKG_VERSION"))),
        ("command".into(), "identities".into()),
        ("max_m".into(), args.max_m.to_string()),
    ]);
    Ok(Output { meta, table, failures })
}

/// Loads or computes every histogram, validating each. Per-prime I/O
/// problems are reported on `stderr` without aborting the sweep.
pub fn cmd_scan(g: &GlobalOpts, primes: &PrimeSet, stderr: &mut dyn Write) -> Result<Output> {
    let strategy = strategy(g);
    let results: Vec<(u64, Result<(TraceHistogram, String)>)> = primes
        .0
        .par_iter()
        .map(|&p| (p, load_one(g, p, strategy)))
        .collect();

    let mut table = Table::new(&["p", "V_p", "buckets", "total", "max_abs_trace", "hasse", "symmetric"]);
    let mut failures = Vec::new();
    for (p, res) in results {
        match res {
            Ok((hist, note)) => {
                let _ = writeln!(stderr, "{note}");
                let max_abs = hist.buckets().map(|(t, _)| t.abs()).max().unwrap_or(0);
                let hasse = hist.buckets().all(|(t, _)| t * t <= 4 * p as i64);
                let symmetric = hist.buckets().all(|(t, c)| hist.count(-t) == c);
                if hist.total() != hist.v_p() || !hasse || !symmetric {
                    failures.push(Failure::new("histogram", Some(p), "structural check failed"));
                }
                table.push(vec![
                    p.to_string(),
                    hist.v_p().to_string(),
                    hist.counts().len().to_string(),
                    hist.total().to_string(),
                    max_abs.to_string(),
                    hasse.to_string(),
                    symmetric.to_string(),
                ]);
            }
            Err(e) => {
                let _ = writeln!(stderr, "p={p}: {e}");
                failures.push(Failure::new("scan", Some(p), e.to_string()));
            }
        }
    }
    Ok(Output {
        meta: base_meta("scan", g, primes),
        table,
        failures,
    })
}

fn strategy(g: &GlobalOpts) -> ScanStrategy {
    if g.orbits {
        ScanStrategy::TwistOrbits
    } else {
        ScanStrategy::Direct
    }
}

fn load_one(g: &GlobalOpts, p: u64, strategy: ScanStrategy) -> Result<(TraceHistogram, String)> {
    let start = Instant::now();
    if g.no_compute {
        let hist = load_cached(&g.cache_dir, p)?;
        return Ok((hist, format!("p={p} cached {:.3}s", start.elapsed().as_secs_f64())));
    }
    let loaded = load_or_compute(&g.cache_dir, p, strategy)?;
    let source = match loaded.provenance {
        Provenance::Cached => "cached",
        Provenance::Computed => "computed",
        Provenance::Recomputed => "recomputed (invalid cache)",
    };
    let mut note = format!("p={p} {source} {:.3}s", start.elapsed().as_secs_f64());
    if let Some(err) = loaded.write_error {
        note.push_str(&format!("; cache not written: {err}"));
    }
    Ok((loaded.hist, note))
}

/// Histograms for all primes in order; with `--no-compute` every missing
/// cache is listed in a single error.
fn histograms(g: &GlobalOpts, primes: &PrimeSet, stderr: &mut dyn Write) -> Result<Vec<TraceHistogram>> {
    if g.no_compute {
        let missing: Vec<String> = primes
            .0
            .iter()
            .filter(|&&p| !crate::cache::cache_path(&g.cache_dir, p).exists())
            .map(|p| p.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Io {
                path: g.cache_dir.clone(),
                source: std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("missing caches for primes {} (run `scan` first)", missing.join(",")),
                ),
            });
        }
    }
    let strategy = strategy(g);
    let loaded = primes
        .0
        .par_iter()
        .map(|&p| load_one(g, p, strategy))
        .collect::<Result<Vec<_>>>()?;
    Ok(loaded
        .into_iter()
        .map(|(hist, note)| {
            let _ = writeln!(stderr, "{note}");
            hist
        })
        .collect())
}

pub fn cmd_report(g: &GlobalOpts, args: &ReportArgs, stderr: &mut dyn Write) -> Result<Output> {
    require(args.max_m >= 1, "--max-m must be >= 1")?;
    let intervals = interval_list(&args.intervals);
    let hists = histograms(g, &args.primes.primes, stderr)?;
    let per_prime = hists
        .par_iter()
        .map(|h| {
            let mut table = moment_rows(h, args.max_r);
            let (ex, mut failures) = expsum_rows(h, args.max_m)?;
            table.extend(ex);
            let (disc, reps, f) = discrepancy_rows(h, &intervals, g.c, g.epsilon, None)?;
            table.extend(disc);
            failures.extend(f);
            Ok((table, reps, failures))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = report_table();
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for (t, reps, f) in per_prime {
        table.extend(t);
        reports.extend(reps);
        failures.extend(f);
    }
    table.extend(trend_rows(&reports, &intervals));

    let mut meta = base_meta("report", g, &args.primes.primes);
    meta.insert("max_m".into(), args.max_m.to_string());
    meta.insert("max_R".into(), args.max_r.to_string());
    meta.insert("intervals".into(), fmt_intervals(&intervals));
    Ok(Output { meta, table, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_sets() {
        assert_eq!(
            "5..50".parse::<PrimeSet>().unwrap().0,
            vec![5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
        assert_eq!("101".parse::<PrimeSet>().unwrap().0, vec![101]);
        assert_eq!("13,5..7,13".parse::<PrimeSet>().unwrap().0, vec![5, 7, 13]);
        assert_eq!("2..=11".parse::<PrimeSet>().unwrap().0, vec![5, 7, 11]);
        assert!("4..4".parse::<PrimeSet>().is_err());
        assert!("9".parse::<PrimeSet>().is_err());
        assert!("3".parse::<PrimeSet>().is_err());
        assert!("x..7".parse::<PrimeSet>().is_err());
    }

    #[test]
    fn interval_lists() {
        let l: IntervalList = "0:0.25,0.25:0.75".parse().unwrap();
        assert_eq!(l.0.len(), 2);
        assert!("0:2".parse::<IntervalList>().is_err());
        assert!("".parse::<IntervalList>().is_err());
    }

    #[test]
    fn identities_small() {
        let out = cmd_identities(&IdentitiesArgs { max_m: 10, samples: 50, seed: 1 }).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.table.rows[0], vec!["s_m_direct", "m=1", "1/2", "1/2", "true"]);
        assert!(cmd_identities(&IdentitiesArgs { max_m: 0, samples: 1, seed: 1 }).is_err());
    }
}
