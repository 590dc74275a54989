//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs the full n = 1..7495 sweep and the N <= 99,999
//! scans, so expect a few minutes on a single core.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use primesg_core::goldbach::{
    self, count_series, h_exceptions, ordered_count, sqrt_window_failures, window_reps, Counting,
    WindowSpec,
};
use primesg_core::invariant_suite::{
    self as suite, delta_fn, lambda_fn, ratio_extremes, AssertionId, InvariantRecord, RatioKind,
};
use primesg_core::report::{self, ChartMode};
use primesg_core::semigroup::{oracle_membership, SemigroupInstance};
use primesg_core::{PrimeTable, Ratio};

const FULL_N_HI: u64 = 7495;
const DEFAULT_N_HI: u64 = 1000;
const GOLDBACH_LIMIT: u64 = 99_999;
/// Relative error allowed when recovering synthetic power laws.
const REGRESSION_REL_TOL: f64 = 1e-10;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    if elapsed <= budget {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, budget {budget:?}"))
    }
}

struct Fixture {
    semigroup_table: PrimeTable,
    goldbach_table: PrimeTable,
    full: Vec<InvariantRecord>,
    full_elapsed: Duration,
}

fn small_brute(n: u64, p: u64) -> (u64, u64, u64, u64, u64) {
    // invariants from the brute-force oracle alone, window 0..=6p
    let bound = 6 * p;
    let member: Vec<bool> = (0..=bound).map(|m| oracle_membership(m, p)).collect();
    let f = (1..=bound).rev().find(|&m| !member[m as usize]).unwrap();
    let g = (1..=f).filter(|&m| !member[m as usize]).count() as u64;
    let atoms: Vec<u64> = (1..=bound)
        .filter(|&a| member[a as usize])
        .filter(|&a| !(1..a).any(|w| member[w as usize] && member[(a - w) as usize]))
        .collect();
    let _ = n;
    (f, g, atoms.len() as u64, *atoms.last().unwrap(), f + 1 - g)
}

fn c1(_: &Fixture) -> Outcome {
    let start = Instant::now();
    let t = PrimeTable::sieve(100).unwrap();
    let mut msgs = Vec::new();
    let mut ok = true;
    for (n, expect) in [(1, (1, 1, 2, 3, 1)), (2, (4, 3, 3, 7, 2))] {
        let r = suite::record(n, &t).unwrap();
        let got = (r.f, r.g, r.e, r.u, r.s);
        let oracle = small_brute(n, r.p);
        ok &= got == expect && oracle == expect;
        msgs.push(format!("n={n} (f,g,e,u,s)={got:?} oracle={oracle:?}"));
    }
    let time = within(start.elapsed(), Duration::from_secs(1));
    check(
        ok && time.is_ok(),
        format!("{}; {:?}", msgs.join("; "), time),
    )
}

fn c2(_: &Fixture) -> Outcome {
    let start = Instant::now();
    let t = PrimeTable::sieve(6 * 113).unwrap();
    let r8 = suite::record(8, &t).unwrap();
    let r15 = suite::record(15, &t).unwrap();
    let r30 = suite::record(30, &t).unwrap();
    let ok8 = (r8.p, r8.f, r8.e, r8.s) == (19, 63, 10, 24)
        && 19 * r8.f == 63 * r8.p
        && 5 * 8 == 4 * r8.e
        && 19 * r8.s == 24 * r8.p;
    let ok15 = (r15.p, r15.u) == (47, 163) && 47 * r15.u == 163 * r15.p;
    let ok30 = r30.f as i64 - 3 * r30.p as i64 == 30;
    let time = within(start.elapsed(), Duration::from_secs(5));
    check(
        ok8 && ok15 && ok30 && time.is_ok(),
        format!(
            "S(8): p={} f={} e={} s={}; S(15): p={} u={}; S(30): f-3p={}; {:?}",
            r8.p,
            r8.f,
            r8.e,
            r8.s,
            r15.p,
            r15.u,
            r30.f as i64 - 3 * r30.p as i64,
            time
        ),
    )
}

fn c3(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let rep = suite::run_appendix_assertions(1, DEFAULT_N_HI, &fx.semigroup_table, None).unwrap();
    let t1000 = within(start.elapsed(), Duration::from_secs(60));
    let full = suite::assertions_for_records(&fx.full);
    let t_full = within(fx.full_elapsed, Duration::from_secs(3600));
    let failing: Vec<_> = rep
        .results
        .iter()
        .chain(full.results.iter())
        .filter(|r| !r.pass)
        .map(|r| r.label)
        .collect();
    let listing_count = rep
        .results
        .iter()
        .filter(|r| {
            !matches!(
                r.id,
                AssertionId::Multiplicity | AssertionId::FrobeniusBelow4p
            )
        })
        .count();
    check(
        rep.all_pass() && full.all_pass() && listing_count == 11 && t1000.is_ok() && t_full.is_ok(),
        format!(
            "1..1000: {} checks, 1..7495: {} checks, failing {:?}; 1..1000 {:?}, full sweep {:?} ({:?})",
            rep.results.len(),
            full.results.len(),
            failing,
            t1000,
            fx.full_elapsed,
            t_full
        ),
    )
}

fn c4(fx: &Fixture) -> Outcome {
    let ex: BTreeMap<&str, _> = ratio_extremes(&fx.full)
        .into_iter()
        .map(|e| (e.ratio.label(), e))
        .collect();
    let up = &ex[RatioKind::UOverP.label()];
    let fp = &ex[RatioKind::FOverP.label()];
    let sp = &ex[RatioKind::SOverP.label()];
    let en = &ex[RatioKind::EOverN.label()];
    let ok = (up.min, up.argmin) == (Ratio::new(3, 2), 1)
        && (en.min, en.argmin) == (Ratio::new(5, 4), 8)
        && (up.max, up.argmax) == (Ratio::new(163, 47), 15)
        && (fp.max, fp.argmax) == (Ratio::new(63, 19), 8)
        && (sp.max, sp.argmax) == (Ratio::new(24, 19), 8);
    check(
        ok,
        format!(
            "n=1..{FULL_N_HI}: min u/p={}@{} min e/n={}@{} max u/p={}@{} max f/p={}@{} max s/p={}@{}",
            up.min, up.argmin, en.min, en.argmin, up.max, up.argmax, fp.max, fp.argmax, sp.max, sp.argmax
        ),
    )
}

fn c5(fx: &Fixture) -> Outcome {
    let t = &fx.goldbach_table;
    let start = Instant::now();
    let ex7 = h_exceptions(7, &WindowSpec::new(7, 1).unwrap(), 9999, t).unwrap();
    let ex6 = h_exceptions(7, &WindowSpec::sixth(), GOLDBACH_LIMIT, t).unwrap();
    let at = window_reps(27, &WindowSpec::new(27, 4).unwrap(), t).unwrap();
    let larger = [
        (2701u64, 400u64),
        (271, 40),
        (68, 10),
        (7, 1),
        (15, 2),
        (8, 1),
        (26, 1),
        (1000, 1),
    ];
    let none_above = larger.iter().all(|&(a, b)| {
        window_reps(27, &WindowSpec::new(a, b).unwrap(), t)
            .unwrap()
            .is_empty()
    });
    let time = within(start.elapsed(), Duration::from_secs(300));
    check(
        ex7 == [23, 27] && ex6.is_empty() && !at.is_empty() && none_above && time.is_ok(),
        format!(
            "H(7,7) exceptions {ex7:?}; H(7,6) exceptions to {GOLDBACH_LIMIT}: {ex6:?}; r(27) at t=27/4: {}; none for {} sampled t>27/4: {none_above}; {:?}",
            at.len(),
            larger.len(),
            time
        ),
    )
}

fn c6(fx: &Fixture) -> Outcome {
    let start = Instant::now();
    let fails = sqrt_window_failures(7, GOLDBACH_LIMIT, &fx.goldbach_table).unwrap();
    let time = within(start.elapsed(), Duration::from_secs(300));
    check(
        fails.is_empty() && time.is_ok(),
        format!(
            "odd N in 7..={GOLDBACH_LIMIT} without sqrt-window representation: {fails:?}; {time:?}"
        ),
    )
}

fn c7(fx: &Fixture) -> Outcome {
    let lam = lambda_fn(76_129.0).unwrap();
    let del = delta_fn(76_147);
    let cor = suite::corollary_thresholds(&fx.full, None);
    check(
        lam > 2.46 && del < 0.124 && cor.cor2_failures.is_empty() && cor.cor3_failures.is_empty(),
        format!(
            "lambda(76129)={lam:.6}; delta(76147)={del:.6}; 8u<23p at n>13: {:?}; u>=6p: {:?}",
            cor.cor2_failures, cor.cor3_failures
        ),
    )
}

fn c8(_: &Fixture) -> Outcome {
    let t = PrimeTable::sieve(2001).unwrap();
    let mut mismatches = Vec::new();
    for n in 1..=5 {
        let s = SemigroupInstance::build(n, &t).unwrap();
        for m in 0..=200 {
            if s.is_member(m) != oracle_membership(m, s.p) {
                mismatches.push((n, m));
            }
        }
    }
    let mut count_mismatch = Vec::new();
    for (a, b) in [(6, 1), (7, 1), (27, 4)] {
        let w = WindowSpec::new(a, b).unwrap();
        let unordered = count_series(7, 2001, &w, Counting::Unordered, &t).unwrap();
        for n in (7..=2001).step_by(2) {
            let reps = window_reps(n, &w, &t).unwrap();
            let weighted: u64 = reps.iter().map(|r| r.orderings()).sum();
            let ordered = ordered_count(n, &w, &t).unwrap();
            if weighted != ordered || unordered.counts[&n] != reps.len() as u64 {
                count_mismatch.push((a, b, n));
            }
        }
    }
    check(
        mismatches.is_empty() && count_mismatch.is_empty(),
        format!(
            "membership mismatches (n<=5, m<=200): {mismatches:?}; ordered/unordered mismatches (N<=2001): {count_mismatch:?}"
        ),
    )
}

fn c9(fx: &Fixture) -> Outcome {
    let rep = suite::assertions_for_records(&fx.full);
    let a8 = rep.get(AssertionId::A8);
    let a10 = rep.get(AssertionId::A10);
    let trend = suite::trend(&fx.full, 1000);
    let rows: Vec<String> = trend
        .iter()
        .map(|r| format!("n={} g/p={:.4} u/p={:.4}", r.n, r.g_over_p, r.u_over_p))
        .collect();
    check(
        a8.pass && a10.pass,
        format!(
            "(u-3p)^10<p^7 for n>46: {}; (f-3p)^10<p^7 for n>30: {}; trend (report only): {}",
            a8.pass,
            a10.pass,
            rows.join(", ")
        ),
    )
}

fn c10(fx: &Fixture) -> Outcome {
    let t = &fx.goldbach_table;
    let is_prime = |n: u64| t.is_prime(n);
    let mut notes = Vec::new();

    let fig1 = goldbach::rep_count_series(7, GOLDBACH_LIMIT, &WindowSpec::sixth(), t).unwrap();
    let svg1a = report::render_chart(&fig1, ChartMode::Linear, None, is_prime).unwrap();
    let svg1b = report::render_chart(&fig1, ChartMode::Linear, None, is_prime).unwrap();
    let fig1_ok = svg1a == svg1b && svg1a.matches("<circle").count() == fig1.counts.len();
    notes.push(format!(
        "fig1 {} points deterministic={}",
        fig1.counts.len(),
        svg1a == svg1b
    ));

    let fig2 = goldbach::rep_count_series(999, 49_999, &WindowSpec::sixth(), t).unwrap();
    let fit = report::fit_loglog(&fig2, 999, 49_999, is_prime).unwrap();
    let svg2a = report::render_chart(&fig2, ChartMode::LogLog, Some(&fit), is_prime).unwrap();
    let svg2b = report::render_chart(&fig2, ChartMode::LogLog, Some(&fit), is_prime).unwrap();
    let fig2_ok = svg2a == svg2b && svg2a.contains("#2ca02c") && svg2a.contains("#d62728");
    notes.push(format!(
        "fig2 slope={:.4} intercept={:.4} prime mean residual={:.4}",
        fit.slope, fit.intercept, fit.prime_subset_mean_residual
    ));

    let mut worst = 0f64;
    for (a, b) in [(2.0, -3.5), (1.7, 0.25), (0.5, 10.0), (-1.25, 4.0)] {
        let pts: Vec<(f64, f64)> = (0..500)
            .map(|i| {
                let x = (999.0 + 100.0 * i as f64).ln();
                (x, a * x + b)
            })
            .collect();
        let (sa, sb) = report::ols(&pts).unwrap();
        worst = worst.max(((sa - a) / a).abs()).max(((sb - b) / b).abs());
    }
    notes.push(format!("synthetic worst rel err={worst:.2e}"));

    check(
        fig1_ok && fig2_ok && worst <= REGRESSION_REL_TOL && fit.prime_subset_mean_residual > 0.0,
        notes.join("; "),
    )
}

type Criterion = fn(&Fixture) -> Outcome;

fn main() -> ExitCode {
    let semigroup_table = PrimeTable::sieve(6 * 76_129).unwrap();
    let goldbach_table = PrimeTable::sieve(GOLDBACH_LIMIT).unwrap();
    let start = Instant::now();
    let full = suite::records(1, FULL_N_HI, &semigroup_table, None).unwrap();
    let full_elapsed = start.elapsed();
    let fx = Fixture {
        semigroup_table,
        goldbach_table,
        full,
        full_elapsed,
    };

    let criteria: [(&str, Criterion); 10] = [
        ("1 small-n golden values vs brute-force oracle", c1),
        ("2 listing equalities at n = 8, 15, 30", c2),
        ("3 assertion program on 1..1000 and 1..7495", c3),
        ("4 ratio extremes", c4),
        ("5 three-prime window exceptions", c5),
        ("6 sqrt(N) window", c6),
        ("7 analytic thresholds", c7),
        ("8 oracle equivalence", c8),
        ("9 substituted asymptotic checks", c9),
        ("10 figure reproduction and regression", c10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let out = f(&fx);
        println!(
            "criterion {name}: {} -- {}",
            if out.ok { "PASS" } else { "FAIL" },
            out.detail
        );
        if !out.ok {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
