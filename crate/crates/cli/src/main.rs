//! `primesg`: reproducible runs of the semigroup invariants, the assertion
//! program, and the windowed three-prime checks.
//!
//! Exit codes: 0 = all checks passed / output written, 1 = a check failed or
//! exceptions were found (witnesses printed), 2 = usage or I/O error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};

use clap::{Args, Parser, Subcommand, ValueEnum};
use primesg_core::goldbach::{self, Counting, WindowSpec};
use primesg_core::invariant_suite::{self as suite, InvariantRecord};
use primesg_core::report::{self, ChartMode, Meta};
use primesg_core::{Error, PrimeTable, Ratio};

/// Environment override for the default sieve limit.
const SIEVE_ENV: &str = "PRIMESG_SIEVE_LIMIT";
/// Last n of the full verification sweep.
const EXTENDED_N_HI: u64 = 7495;
const DEFAULT_N_RANGE: (u64, u64) = (1, 1000);

#[derive(Parser)]
#[command(name = "primesg", version, about)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Sieve limit override (also read from PRIMESG_SIEVE_LIMIT).
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-n invariants (n, p, f, g, e, u, s).
    Invariants(NArgs),
    /// Run the eleven assertions plus the multiplicity and f < 4p checks.
    Assert(NArgs),
    /// Minimum and maximum of u/p, f/p, g/p, s/p, e/n with arguments.
    Extremes(ExtremesArgs),
    /// Effective-bound checks on u/p and the supporting numeric thresholds.
    Corollaries(CorollaryArgs),
    /// Windowed three-prime representations.
    Goldbach {
        #[command(subcommand)]
        command: GoldbachCommand,
    },
    /// Representations with every summand within √N of N/3.
    Oppermann(OppermannArgs),
    /// SVG scatter of r(N), linear or log-log with regression line.
    Chart(ChartArgs),
}

#[derive(Args, Clone)]
struct NArgs {
    /// Single n.
    #[arg(long, conflicts_with = "n_range")]
    n: Option<u64>,
    /// Inclusive range `a:b` of prime indices.
    #[arg(long, value_parser = parse_range)]
    n_range: Option<(u64, u64)>,
    /// Full range 1:7495 with a progress indicator.
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtremesArgs {
    #[command(flatten)]
    range: NArgs,
    /// Print the g/p, u/p, f/p trend table every k-th n.
    #[arg(long)]
    trend: Option<usize>,
}

#[derive(Args)]
struct CorollaryArgs {
    #[command(flatten)]
    range: NArgs,
    /// K for the n·log n > (5/17)K premise.
    #[arg(long = "K")]
    k: Option<u64>,
    /// Spot-check u/p > 3 − 3/16598 at these n via the three-prime atom test.
    #[arg(long, value_delimiter = ',')]
    spot: Vec<u64>,
}

#[derive(Subcommand)]
enum GoldbachCommand {
    /// Odd N in [K, limit] without a window representation.
    Exceptions(ExceptionArgs),
    /// r(N) for every odd N in a range.
    Series(SeriesArgs),
    /// List representations of one N.
    Reps(RepsArgs),
}

#[derive(Args)]
struct WindowArgs {
    /// Window parameter t as `a/b` or an integer; t > 3.
    #[arg(long, default_value = "6", value_parser = parse_ratio)]
    t: Ratio,
    /// Strict inequality |N/3 − q| < N/t.
    #[arg(long)]
    open: bool,
}

impl WindowArgs {
    fn spec(&self) -> Result<WindowSpec, Error> {
        WindowSpec::with_closed(self.t.num(), self.t.den(), !self.open)
    }
}

#[derive(Args)]
struct ExceptionArgs {
    #[arg(long = "K", default_value_t = 7)]
    k: u64,
    #[arg(long)]
    limit: u64,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long = "N-range", value_parser = parse_range)]
    n_range: (u64, u64),
    #[command(flatten)]
    window: WindowArgs,
    /// Count ordered triples instead of multisets.
    #[arg(long)]
    ordered: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RepsArgs {
    #[arg(long = "N")]
    n: u64,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args)]
struct OppermannArgs {
    #[arg(long = "N-range", value_parser = parse_range, default_value = "7:99999")]
    n_range: (u64, u64),
    /// List the representations of a single N instead of scanning.
    #[arg(long = "N", conflicts_with = "n_range")]
    n: Option<u64>,
}

#[derive(Args)]
struct ChartArgs {
    #[arg(long = "N-range", value_parser = parse_range)]
    n_range: Option<(u64, u64)>,
    #[arg(long, value_enum, default_value = "linear")]
    mode: Mode,
    /// Preset: 1 = linear over 7:99999, 2 = log-log over 999:49999.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    figure: Option<u8>,
    /// Overlay the least-squares line (log-log only).
    #[arg(long)]
    fit: bool,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Linear,
    Loglog,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: u64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start {a:?}"))?;
    let b: u64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_ratio(s: &str) -> Result<Ratio, String> {
    let r: Ratio = s.parse().map_err(|e: Error| e.to_string())?;
    if r <= Ratio::new(3, 1) {
        return Err(format!("t must exceed 3, got {r}"));
    }
    Ok(r)
}

/// Outcome of a subcommand that ran to completion.
enum Verdict {
    Clean,
    Failed,
}

#[derive(Debug)]
struct CliError(String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<Verdict, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let sieve_override = match sieve_override(cli.sieve_limit) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx { sieve_override };
    let res = match cli.command {
        Command::Invariants(a) => ctx.invariants(&a),
        Command::Assert(a) => ctx.assert(&a),
        Command::Extremes(a) => ctx.extremes(&a),
        Command::Corollaries(a) => ctx.corollaries(&a),
        Command::Goldbach { command } => match command {
            GoldbachCommand::Exceptions(a) => ctx.exceptions(&a),
            GoldbachCommand::Series(a) => ctx.series(&a),
            GoldbachCommand::Reps(a) => ctx.reps(&a),
        },
        Command::Oppermann(a) => ctx.oppermann(&a),
        Command::Chart(a) => ctx.chart(&a),
    };
    match res {
        Ok(Verdict::Clean) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}

fn sieve_override(flag: Option<u64>) -> Result<Option<u64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(SIEVE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError(format!("{SIEVE_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(None),
    }
}

/// Upper bound on the n-th prime (n(ln n + ln ln n) for n >= 6).
fn nth_prime_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

struct Ctx {
    sieve_override: Option<u64>,
}

impl Ctx {
    fn table(&self, needed: u64) -> Result<PrimeTable, CliError> {
        let limit = self.sieve_override.unwrap_or(needed).max(2);
        if limit < needed {
            return Err(CliError(format!(
                "sieve limit {limit} is below the {needed} this range needs"
            )));
        }
        Ok(PrimeTable::sieve(limit)?)
    }

    fn semigroup_table(&self, n_hi: u64) -> Result<PrimeTable, CliError> {
        self.table(6 * nth_prime_bound(n_hi))
    }

    fn n_range(a: &NArgs) -> (u64, u64) {
        if let Some(n) = a.n {
            (n, n)
        } else if let Some(r) = a.n_range {
            r
        } else if a.extended {
            (1, EXTENDED_N_HI)
        } else {
            DEFAULT_N_RANGE
        }
    }

    fn records(&self, a: &NArgs) -> Result<Vec<InvariantRecord>, CliError> {
        let (lo, hi) = Self::n_range(a);
        if lo == 0 {
            return Err(CliError("n is 1-based".into()));
        }
        let table = self.semigroup_table(hi)?;
        let total = hi - lo + 1;
        let done = AtomicU64::new(0);
        let progress = |_n: u64| {
            let k = done.fetch_add(1, Ordering::Relaxed) + 1;
            if k.is_multiple_of(250) || k == total {
                eprint!("\r{k}/{total} n done");
                if k == total {
                    eprintln!();
                }
            }
        };
        let cb: Option<&(dyn Fn(u64) + Sync)> = if a.extended { Some(&progress) } else { None };
        Ok(suite::records(lo, hi, &table, cb)?)
    }

    fn invariants(&self, a: &NArgs) -> CliResult {
        let recs = self.records(a)?;
        let range = Self::n_range(a);
        match a.format.unwrap_or(Format::Csv) {
            Format::Csv => {
                let mut buf = Vec::new();
                report::write_csv(&mut buf, &report::RECORD_HEADER, &recs)
                    .map_err(|e| CliError(e.to_string()))?;
                write_out(&buf, a.out.as_deref())?;
                if let Some(out) = &a.out {
                    let json = report::to_json(Meta::new("invariants", range, None), &recs);
                    write_out(json.as_bytes(), Some(&out.with_extension("json")))?;
                }
            }
            Format::Json => {
                let json = report::to_json(Meta::new("invariants", range, None), &recs);
                write_out(json.as_bytes(), a.out.as_deref())?;
            }
            Format::Svg => return Err(CliError("invariants support csv or json".into())),
        }
        Ok(Verdict::Clean)
    }

    fn assert(&self, a: &NArgs) -> CliResult {
        let (lo, hi) = Self::n_range(a);
        if lo == 0 {
            return Err(CliError("n is 1-based".into()));
        }
        let table = self.semigroup_table(hi)?;
        let total = hi - lo + 1;
        let done = AtomicU64::new(0);
        let progress = |_n: u64| {
            let k = done.fetch_add(1, Ordering::Relaxed) + 1;
            if k.is_multiple_of(250) || k == total {
                eprint!("\r{k}/{total} n checked");
                if k == total {
                    eprintln!();
                }
            }
        };
        let cb: Option<&(dyn Fn(u64) + Sync)> = if a.extended { Some(&progress) } else { None };
        let rep = suite::run_appendix_assertions(lo, hi, &table, cb)?;

        let mut text = String::new();
        if a.format == Some(Format::Json) {
            text = serde_json_pretty(&rep);
        } else {
            text.push_str(&format!("assertions over n = {lo}..{hi}\n"));
            for r in &rep.results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} [{}] {}", r.label, r.description));
                if !r.equality_at.is_empty() {
                    text.push_str(&format!("  (equality at n = {})", join(&r.equality_at)));
                }
                text.push('\n');
                for w in &r.witnesses {
                    text.push_str(&format!(
                        "    witness n={} p={} f={} g={} e={} u={} s={}\n",
                        w.n, w.p, w.f, w.g, w.e, w.u, w.s
                    ));
                }
            }
            let verdict = if rep.all_pass() {
                "all assertions pass"
            } else {
                "ASSERTION FAILURES"
            };
            text.push_str(verdict);
            text.push('\n');
        }
        write_out(text.as_bytes(), a.out.as_deref())?;
        Ok(if rep.all_pass() {
            Verdict::Clean
        } else {
            Verdict::Failed
        })
    }

    fn extremes(&self, a: &ExtremesArgs) -> CliResult {
        let recs = self.records(&a.range)?;
        let ex = suite::ratio_extremes(&recs);
        let mut text = String::new();
        if a.range.format == Some(Format::Json) {
            text = serde_json_pretty(&ex);
        } else {
            text.push_str("ratio  min  argmin  max  argmax\n");
            for e in &ex {
                text.push_str(&format!(
                    "{}  {}  {}  {}  {}\n",
                    e.ratio.label(),
                    e.min,
                    e.argmin,
                    e.max,
                    e.argmax
                ));
            }
            if let Some(k) = a.trend {
                text.push_str("\nn  p  g/p  u/p  f/p\n");
                for t in suite::trend(&recs, k) {
                    text.push_str(&format!(
                        "{}  {}  {:.6}  {:.6}  {:.6}\n",
                        t.n, t.p, t.g_over_p, t.u_over_p, t.f_over_p
                    ));
                }
            }
        }
        write_out(text.as_bytes(), a.range.out.as_deref())?;
        Ok(Verdict::Clean)
    }

    fn corollaries(&self, a: &CorollaryArgs) -> CliResult {
        let recs = self.records(&a.range)?;
        let rep = suite::corollary_thresholds(&recs, a.k);
        let pt = suite::proof_thresholds();
        let mut ok =
            rep.all_pass() && pt.lambda_ok && pt.linear_step_ok && pt.delta_ok && pt.e_step_ok;

        let mut text = format!(
            "corollary checks over n = {}..{}\n",
            rep.range.0, rep.range.1
        );
        let line = |ok: bool, what: String| {
            format!("{} {}\n", if ok { "PASS" } else { "FAIL" }, what.trim_end())
        };
        text += &line(
            rep.cor2_failures.is_empty(),
            format!("8u >= 23p for n > 13 {}", fails(&rep.cor2_failures)),
        );
        text += &line(
            rep.cor3_failures.is_empty(),
            format!("u < 6p {}", fails(&rep.cor3_failures)),
        );
        text += &line(
            rep.cor1_constant_ok,
            "3*670294 = 2010882 > (16598/16597)*2010759.9".into(),
        );
        if !rep.cor1_checked.is_empty() {
            text += &line(
                rep.cor1_failures.is_empty(),
                format!(
                    "u/p > 3 - 3/16598 on {} n with p >= 670294 {}",
                    rep.cor1_checked.len(),
                    fails(&rep.cor1_failures)
                ),
            );
        }
        text += &line(
            pt.lambda_ok,
            format!("lambda(76129) = {:.6} > 2.46", pt.lambda_q),
        );
        text += &line(pt.linear_step_ok, "2.46(n-1) > 2.4n for n > 7495".into());
        text += &line(
            pt.delta_ok,
            format!("delta(76147) = {:.6} < 0.124 < 1/8", pt.delta_p),
        );
        text += &line(pt.e_step_ok, "1.4 > 5/4".into());
        if let Some(c4) = &rep.cor4 {
            text += &line(c4.ordering_ok, "163/47 > 17/5".into());
            text += &line(c4.summand_bound_ok, "(23/78)(17/5) > 1".into());
            text += &line(
                c4.violations.is_empty(),
                format!(
                    "K = {}: n log n > {:.3} from n = {}; u/p < 163/47 there {}",
                    c4.k,
                    c4.premise_bound,
                    c4.threshold_n,
                    fails(&c4.violations)
                ),
            );
        }
        if !a.spot.is_empty() {
            let hi = *a.spot.iter().max().expect("nonempty");
            let table = self.semigroup_table(hi)?;
            for &n in &a.spot {
                let sc = suite::cor1_spot_check(n, &table)?;
                let holds = !sc.premise || sc.holds;
                ok &= holds;
                text += &line(
                    holds,
                    format!(
                        "spot n={} p={} u={} e={} u/p={:.6} premise p>=670294: {} bound holds: {}",
                        sc.n,
                        sc.p,
                        sc.u,
                        sc.e,
                        sc.u as f64 / sc.p as f64,
                        sc.premise,
                        sc.holds
                    ),
                );
            }
        }
        write_out(text.as_bytes(), a.range.out.as_deref())?;
        Ok(if ok { Verdict::Clean } else { Verdict::Failed })
    }

    fn exceptions(&self, a: &ExceptionArgs) -> CliResult {
        let w = a.window.spec()?;
        let table = self.table(a.limit)?;
        let ex = goldbach::h_exceptions(a.k, &w, a.limit, &table)?;
        if ex.is_empty() {
            println!(
                "no exceptions for K={} t={} in [{}, {}]",
                a.k,
                w.t(),
                a.k,
                a.limit
            );
            Ok(Verdict::Clean)
        } else {
            println!("{}", join(&ex));
            Ok(Verdict::Failed)
        }
    }

    fn series(&self, a: &SeriesArgs) -> CliResult {
        let w = a.window.spec()?;
        let (lo, hi) = a.n_range;
        let table = self.table(hi)?;
        let counting = if a.ordered {
            Counting::Ordered
        } else {
            Counting::Unordered
        };
        let series = goldbach::count_series(lo, hi, &w, counting, &table)?;
        let rows = report::series_rows(&series, |n| table.is_prime(n));
        let meta = Meta::new(
            if a.ordered {
                "series-ordered"
            } else {
                "series"
            },
            (lo, hi),
            Some(w.t().to_string()),
        );
        match a.format.unwrap_or(Format::Csv) {
            Format::Csv => {
                let mut buf = Vec::new();
                report::write_csv(&mut buf, &report::SERIES_HEADER, &rows)
                    .map_err(|e| CliError(e.to_string()))?;
                write_out(&buf, a.out.as_deref())?;
                if let Some(out) = &a.out {
                    write_out(
                        report::to_json(meta, &rows).as_bytes(),
                        Some(&out.with_extension("json")),
                    )?;
                }
            }
            Format::Json => write_out(report::to_json(meta, &rows).as_bytes(), a.out.as_deref())?,
            Format::Svg => return Err(CliError("use the chart command for svg".into())),
        }
        Ok(Verdict::Clean)
    }

    fn reps(&self, a: &RepsArgs) -> CliResult {
        let w = a.window.spec()?;
        let table = self.table(a.n.max(7))?;
        let reps = goldbach::window_reps(a.n, &w, &table)?;
        for r in &reps {
            println!("{} = {} + {} + {}", a.n, r.q1, r.q2, r.q3);
        }
        println!("r({}) = {} at t = {}", a.n, reps.len(), w.t());
        Ok(if reps.is_empty() {
            Verdict::Failed
        } else {
            Verdict::Clean
        })
    }

    fn oppermann(&self, a: &OppermannArgs) -> CliResult {
        if let Some(n) = a.n {
            let table = self.table(n.max(7))?;
            let reps = goldbach::sqrt_window_reps(n, &table)?;
            for r in &reps {
                println!("{n} = {} + {} + {}", r.q1, r.q2, r.q3);
            }
            return Ok(if reps.is_empty() {
                Verdict::Failed
            } else {
                Verdict::Clean
            });
        }
        let (lo, hi) = a.n_range;
        let table = self.table(hi.max(7))?;
        let failures = goldbach::sqrt_window_failures(lo, hi, &table)?;
        if failures.is_empty() {
            println!(
                "every odd N in [{}, {hi}] has a representation within sqrt(N) of N/3",
                lo.max(7)
            );
            Ok(Verdict::Clean)
        } else {
            println!("{}", join(&failures));
            Ok(Verdict::Failed)
        }
    }

    fn chart(&self, a: &ChartArgs) -> CliResult {
        let (range, mode, fit) = match a.figure {
            Some(1) => ((7, 99_999), ChartMode::Linear, false),
            Some(2) => ((999, 49_999), ChartMode::LogLog, true),
            _ => {
                let mode = match a.mode {
                    Mode::Linear => ChartMode::Linear,
                    Mode::Loglog => ChartMode::LogLog,
                };
                let range = a
                    .n_range
                    .ok_or_else(|| CliError("chart needs --N-range or --figure".into()))?;
                (range, mode, a.fit)
            }
        };
        let w = a.window.spec()?;
        let table = self.table(range.1)?;
        let series = goldbach::rep_count_series(range.0, range.1, &w, &table)?;
        let is_prime = |n: u64| table.is_prime(n);
        let fit = if fit {
            if mode != ChartMode::LogLog {
                return Err(CliError("--fit needs --mode loglog".into()));
            }
            let fit = report::fit_loglog(&series, range.0, range.1, is_prime)?;
            println!(
                "fit: ln r = {:.6} ln N + {:.6}  (points {}, residual sd {:.6}, prime-N mean residual {:.6})",
                fit.slope, fit.intercept, fit.n_points, fit.residual_std, fit.prime_subset_mean_residual
            );
            if !fit.excluded.is_empty() {
                let side = sidecar(&a.out);
                write_out(format!("{}\n", join(&fit.excluded)).as_bytes(), Some(&side))?;
                println!(
                    "{} points with r(N) = 0 excluded, listed in {}",
                    fit.excluded.len(),
                    side.display()
                );
            }
            Some(fit)
        } else {
            None
        };
        report::emit_chart(&series, mode, fit.as_ref(), is_prime, &a.out)?;
        println!("wrote {}", a.out.display());
        Ok(Verdict::Clean)
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".excluded.txt");
    PathBuf::from(s)
}

fn fails(ns: &[u64]) -> String {
    if ns.is_empty() {
        String::new()
    } else {
        format!("(failing n: {})", join(ns))
    }
}

fn join(ns: &[u64]) -> String {
    ns.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn serde_json_pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn write_out(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
