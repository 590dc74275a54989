use std::sync::LazyLock;

use proptest::prelude::*;

use primesg_core::goldbach::{self, WindowSpec};
use primesg_core::invariant_suite::{self as suite, InvariantRecord};
use primesg_core::reach::reachable;
use primesg_core::report::{self, SeriesRow};
use primesg_core::semigroup::SemigroupInstance;
use primesg_core::PrimeTable;

static MILLION: LazyLock<PrimeTable> = LazyLock::new(|| PrimeTable::sieve(1_000_000).unwrap());
// p(2000) = 17389
static SMALL: LazyLock<PrimeTable> = LazyLock::new(|| PrimeTable::sieve(6 * 17_389).unwrap());

fn trial_division(m: u64) -> bool {
    m >= 2
        && (2..)
            .take_while(|d| d * d <= m)
            .all(|d| !m.is_multiple_of(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pi_matches_trial_division(x in 0u64..=1_000_000) {
        // count primes <= x by trial division over a short stretch plus a checkpoint
        let base = x.saturating_sub(500);
        let below = if base == 0 { 0 } else { MILLION.prime_pi(base - 1).unwrap() };
        let local = (base..=x).filter(|&m| trial_division(m)).count() as u64;
        prop_assert_eq!(MILLION.prime_pi(x).unwrap(), below + local);
    }

    #[test]
    fn nth_prime_and_pi_are_inverse(n in 1u64..=78_498) {
        let p = MILLION.nth_prime(n).unwrap();
        prop_assert!(trial_division(p));
        prop_assert_eq!(MILLION.prime_pi(p).unwrap(), n);
    }

    #[test]
    fn semigroup_invariants(n in 2u64..=300) {
        let s = SemigroupInstance::build(n, &SMALL).unwrap();
        let p = s.p;
        prop_assert!(s.is_member(0) && s.is_member(p));
        prop_assert!((1..p).all(|m| !s.is_member(m)));
        prop_assert!(!s.is_member(s.frobenius));
        prop_assert!((s.frobenius + 1..=s.bound).all(|m| s.is_member(m)));
        prop_assert!(s.frobenius < 4 * p);
        let gaps = (1..=s.frobenius).filter(|&m| !s.is_member(m)).count() as u64;
        prop_assert_eq!(s.genus, gaps);
        let below_f = (0..s.frobenius).filter(|&m| s.is_member(m)).count() as u64;
        prop_assert_eq!(s.sporadic, below_f);
        prop_assert_eq!(s.sporadic, s.frobenius + 1 - s.genus);
        // smallest positive member is the multiplicity p
        prop_assert_eq!((1..).find(|&m| s.is_member(m)), Some(p));
        // even members are sums of at least two odd generators
        prop_assert!((1..=s.bound).filter(|m| m % 2 == 0 && s.is_member(*m)).all(|m| m >= 2 * p));
        prop_assert!(s.atoms.iter().all(|&a| SMALL.is_prime(a) && a >= p && a <= s.bound));
        prop_assert_eq!(s.embedding_dim, s.atoms.len() as u64);
        prop_assert_eq!(Some(&s.largest_atom), s.atoms.iter().max());
        prop_assert_eq!(&reachable(&s.atoms, s.bound), s.membership());
    }

    #[test]
    fn window_monotone_in_t(half in 3u64..5_000, a in 7u64..60, da in 0u64..40) {
        let n = 2 * half + 1;
        let t = WindowSpec::new(a, 2).unwrap();
        let tighter = WindowSpec::new(a + da, 2).unwrap();
        let wide = goldbach::window_reps(n, &t, &MILLION).unwrap();
        let narrow = goldbach::window_reps(n, &tighter, &MILLION).unwrap();
        prop_assert!(narrow.iter().all(|r| wide.contains(r)));
        for r in wide {
            prop_assert_eq!(r.sum(), n);
            prop_assert!(r.q1 <= r.q2 && r.q2 <= r.q3);
            for q in [r.q1, r.q2, r.q3] {
                prop_assert!(trial_division(q));
                // |3q - N| * t_num <= 3 N t_den
                prop_assert!((3 * q).abs_diff(n) * a <= 3 * n * 2);
            }
        }
    }

    #[test]
    fn sqrt_window_reps_revalidate(half in 3u64..20_000) {
        let n = 2 * half + 1;
        for r in goldbach::sqrt_window_reps(n, &MILLION).unwrap() {
            prop_assert_eq!(r.sum(), n);
            for q in [r.q1, r.q2, r.q3] {
                let d = (3 * q).abs_diff(n);
                prop_assert!(d * d <= 9 * n);
            }
        }
    }

    #[test]
    fn record_csv_round_trip(rows in proptest::collection::vec(any::<[u32; 7]>(), 0..20)) {
        let recs: Vec<InvariantRecord> = rows
            .iter()
            .map(|v| InvariantRecord {
                n: v[0].into(), p: v[1].into(), f: v[2].into(), g: v[3].into(),
                e: v[4].into(), u: v[5].into(), s: v[6].into(),
            })
            .collect();
        let mut buf = Vec::new();
        report::write_csv(&mut buf, &report::RECORD_HEADER, &recs).unwrap();
        prop_assert_eq!(report::read_csv::<InvariantRecord, _>(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn series_csv_round_trip(rows in proptest::collection::vec((any::<u64>(), any::<u64>(), any::<bool>()), 0..20)) {
        let rows: Vec<SeriesRow> = rows.into_iter().map(|(n, r, is_prime)| SeriesRow { n, r, is_prime }).collect();
        let mut buf = Vec::new();
        report::write_csv(&mut buf, &report::SERIES_HEADER, &rows).unwrap();
        prop_assert_eq!(report::read_csv::<SeriesRow, _>(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn regression_recovers_power_law(a in -3.0f64..3.0, b in -5.0f64..5.0) {
        prop_assume!(a.abs() > 1e-3 && b.abs() > 1e-3);
        let pts: Vec<(f64, f64)> = (0..200).map(|i| {
            let x = (999.0 + 250.0 * i as f64).ln();
            (x, a * x + b)
        }).collect();
        let (sa, sb) = report::ols(&pts).unwrap();
        prop_assert!(((sa - a) / a).abs() < 1e-10);
        prop_assert!(((sb - b) / b).abs() < 1e-10);
    }
}

#[test]
fn sieve_is_deterministic() {
    assert_eq!(
        PrimeTable::sieve(300_007).unwrap(),
        PrimeTable::sieve(300_007).unwrap()
    );
}

#[test]
fn closed_and_open_sixth_windows_agree() {
    let open = WindowSpec::with_closed(6, 1, false).unwrap();
    let closed = WindowSpec::sixth();
    let a = goldbach::count_series(7, 20_001, &closed, goldbach::Counting::Unordered, &MILLION)
        .unwrap();
    let b =
        goldbach::count_series(7, 20_001, &open, goldbach::Counting::Unordered, &MILLION).unwrap();
    assert_eq!(a, b);
    for n in (7..=2_001).step_by(2) {
        assert_eq!(
            goldbach::window_reps(n, &closed, &MILLION).unwrap(),
            goldbach::window_reps(n, &open, &MILLION).unwrap()
        );
    }
}

#[test]
fn records_are_ordered_and_strictly_below_caps() {
    let recs = suite::records(1, 2_000, &SMALL, None).unwrap();
    assert!(recs.windows(2).all(|w| w[0].n + 1 == w[1].n));
    // exact integer form of u/p < 163/47 away from n = 15
    assert!(recs
        .iter()
        .filter(|r| r.n != 15)
        .all(|r| 47 * r.u < 163 * r.p));
}

#[test]
fn emitted_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let recs = suite::records(1, 50, &SMALL, None).unwrap();
    let path = dir.path().join("records.csv");
    report::emit_records_csv(&recs, &path).unwrap();
    assert_eq!(report::load_records_csv(&path).unwrap(), recs);

    let t = PrimeTable::sieve(11).unwrap();
    let series = goldbach::rep_count_series(7, 11, &WindowSpec::sixth(), &t).unwrap();
    let rows = report::series_rows(&series, |n| t.is_prime(n));
    let path = dir.path().join("series.csv");
    report::emit_series_csv(&rows, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("N,r,is_prime\n7,1,true\n"));
    assert_eq!(report::load_series_csv(&path).unwrap(), rows);

    let path = dir.path().join("empty.csv");
    report::emit_records_csv(&[], &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,p,f,g,e,u,s\n");
}
