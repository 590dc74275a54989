//! Per-n invariant records, the eleven-assertion verification program, the
//! analytic helper functions λ and δ, and ratio extreme searches.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::rational::Ratio;
use crate::semigroup::{atoms_three_prime, SemigroupInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub n: u64,
    pub p: u64,
    pub f: u64,
    pub g: u64,
    pub e: u64,
    pub u: u64,
    pub s: u64,
}

impl InvariantRecord {
    pub fn from_instance(s: &SemigroupInstance) -> Self {
        InvariantRecord {
            n: s.n,
            p: s.p,
            f: s.frobenius,
            g: s.genus,
            e: s.embedding_dim,
            u: s.largest_atom,
            s: s.sporadic,
        }
    }

    pub fn ratio(&self, kind: RatioKind) -> Ratio {
        match kind {
            RatioKind::UOverP => Ratio::new(self.u, self.p),
            RatioKind::FOverP => Ratio::new(self.f, self.p),
            RatioKind::GOverP => Ratio::new(self.g, self.p),
            RatioKind::SOverP => Ratio::new(self.s, self.p),
            RatioKind::EOverN => Ratio::new(self.e, self.n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioKind {
    #[serde(rename = "u/p")]
    UOverP,
    #[serde(rename = "f/p")]
    FOverP,
    #[serde(rename = "g/p")]
    GOverP,
    #[serde(rename = "s/p")]
    SOverP,
    #[serde(rename = "e/n")]
    EOverN,
}

impl RatioKind {
    pub const ALL: [RatioKind; 5] = [
        RatioKind::UOverP,
        RatioKind::FOverP,
        RatioKind::GOverP,
        RatioKind::SOverP,
        RatioKind::EOverN,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RatioKind::UOverP => "u/p",
            RatioKind::FOverP => "f/p",
            RatioKind::GOverP => "g/p",
            RatioKind::SOverP => "s/p",
            RatioKind::EOverN => "e/n",
        }
    }
}

/// Invariants of S(n).
pub fn record(n: u64, table: &PrimeTable) -> Result<InvariantRecord> {
    SemigroupInstance::build(n, table).map(|s| InvariantRecord::from_instance(&s))
}

/// Records for `n_lo..=n_hi`, computed in parallel, returned in order of n.
/// `progress` is called once per finished n (in arbitrary order).
pub fn records(
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
    progress: Option<&(dyn Fn(u64) + Sync)>,
) -> Result<Vec<InvariantRecord>> {
    Ok(evaluate(n_lo, n_hi, table, progress)?
        .into_iter()
        .map(|c| c.record)
        .collect())
}

/// A record plus the one quantity the sanity checks read from the
/// membership window directly.
#[derive(Debug, Clone)]
struct Evaluated {
    record: InvariantRecord,
    multiplicity: u64,
}

fn evaluate(
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
    progress: Option<&(dyn Fn(u64) + Sync)>,
) -> Result<Vec<Evaluated>> {
    check_range(n_lo, n_hi)?;
    (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| {
            let s = SemigroupInstance::build(n, table)?;
            let multiplicity = (1..=s.bound)
                .find(|&m| s.is_member(m))
                .unwrap_or(s.bound + 1);
            if let Some(cb) = progress {
                cb(n);
            }
            Ok(Evaluated {
                record: InvariantRecord::from_instance(&s),
                multiplicity,
            })
        })
        .collect()
}

fn check_range(n_lo: u64, n_hi: u64) -> Result<()> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::Domain(format!("invalid n range {n_lo}:{n_hi}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AssertionId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
    Multiplicity,
    FrobeniusBelow4p,
}

impl AssertionId {
    pub const ALL: [AssertionId; 13] = [
        AssertionId::A1,
        AssertionId::A2,
        AssertionId::A3,
        AssertionId::A4,
        AssertionId::A5,
        AssertionId::A6,
        AssertionId::A7,
        AssertionId::A8,
        AssertionId::A9,
        AssertionId::A10,
        AssertionId::A11,
        AssertionId::Multiplicity,
        AssertionId::FrobeniusBelow4p,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AssertionId::A1 => "1",
            AssertionId::A2 => "2",
            AssertionId::A3 => "3",
            AssertionId::A4 => "4",
            AssertionId::A5 => "5",
            AssertionId::A6 => "6",
            AssertionId::A7 => "7",
            AssertionId::A8 => "8",
            AssertionId::A9 => "9",
            AssertionId::A10 => "10",
            AssertionId::A11 => "11",
            AssertionId::Multiplicity => "multiplicity",
            AssertionId::FrobeniusBelow4p => "f<4p",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            AssertionId::A1 => "n<2 or u>2*p",
            AssertionId::A2 => "s>n-1",
            AssertionId::A3 => "e>n",
            AssertionId::A4 => "(n=8 and 5*n=4*e) or (5*n<4*e)",
            AssertionId::A5 => "(n=15 and 47*u=163*p) or (n<>15 and 47*u<163*p)",
            AssertionId::A6 => "(n=8 and 19*f=63*p) or (n<>8 and 19*f<63*p)",
            AssertionId::A7 => "(n=8 and 19*s=24*p) or (n<>8 and 19*s<24*p)",
            AssertionId::A8 => "(n<=46) or ((u-3*p)^10 < p^7)",
            AssertionId::A9 => "(n=30 and f-3*p=n) or (f-3*p<n)",
            AssertionId::A10 => "(n<=30) or ((f-3*p)^10 < p^7)",
            AssertionId::A11 => "(n<=13) or (8*u >= 23*p)",
            AssertionId::Multiplicity => "smallest positive member = p",
            AssertionId::FrobeniusBelow4p => "f < 4*p",
        }
    }
}

/// Outcome of one assertion at one n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Passed through a strict-inequality (or trivially true) branch.
    Pass,
    /// Passed through the listing's equality branch.
    PassEquality,
    Fail,
}

fn pow_lt(base: i64, exp: u32, other: u64, other_exp: u32) -> bool {
    BigInt::from(base).pow(exp) < BigInt::from(other).pow(other_exp)
}

fn evaluate_one(id: AssertionId, r: &InvariantRecord, multiplicity: u64) -> Outcome {
    use Outcome::*;
    let (n, p, f, e, u, s) = (
        i128::from(r.n),
        i128::from(r.p),
        i128::from(r.f),
        i128::from(r.e),
        i128::from(r.u),
        i128::from(r.s),
    );
    let plain = |ok: bool| if ok { Pass } else { Fail };
    let branch = |special: bool, eq: bool, lt: bool| {
        if special && eq {
            PassEquality
        } else if !special && lt {
            Pass
        } else {
            Fail
        }
    };
    match id {
        AssertionId::A1 => plain(n < 2 || u > 2 * p),
        AssertionId::A2 => plain(s > n - 1),
        AssertionId::A3 => plain(e > n),
        // equality branch is "(n=8 and ...) or (5n<4e)": strict branch open to all n
        AssertionId::A4 => {
            if n == 8 && 5 * n == 4 * e {
                PassEquality
            } else {
                plain(5 * n < 4 * e)
            }
        }
        AssertionId::A5 => branch(n == 15, 47 * u == 163 * p, 47 * u < 163 * p),
        AssertionId::A6 => branch(n == 8, 19 * f == 63 * p, 19 * f < 63 * p),
        AssertionId::A7 => branch(n == 8, 19 * s == 24 * p, 19 * s < 24 * p),
        AssertionId::A8 => plain(n <= 46 || pow_lt((u - 3 * p) as i64, 10, r.p, 7)),
        AssertionId::A9 => {
            if n == 30 && f - 3 * p == n {
                PassEquality
            } else {
                plain(f - 3 * p < n)
            }
        }
        AssertionId::A10 => plain(n <= 30 || pow_lt((f - 3 * p) as i64, 10, r.p, 7)),
        AssertionId::A11 => plain(n <= 13 || 8 * u >= 23 * p),
        AssertionId::Multiplicity => plain(multiplicity == r.p),
        AssertionId::FrobeniusBelow4p => plain(f < 4 * p),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssertionResult {
    pub id: AssertionId,
    pub label: &'static str,
    pub description: &'static str,
    pub pass: bool,
    /// Failing records.
    pub witnesses: Vec<InvariantRecord>,
    /// n values at which the equality branch was taken.
    pub equality_at: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssertionReport {
    pub range: (u64, u64),
    pub results: Vec<AssertionResult>,
}

impl AssertionReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn get(&self, id: AssertionId) -> &AssertionResult {
        self.results
            .iter()
            .find(|r| r.id == id)
            .expect("report holds every assertion")
    }
}

/// Evaluates the eleven listing assertions plus the two sanity checks on
/// every n in `n_lo..=n_hi`. Failures are data, not errors; an error means
/// the semigroup itself could not be built.
pub fn run_appendix_assertions(
    n_lo: u64,
    n_hi: u64,
    table: &PrimeTable,
    progress: Option<&(dyn Fn(u64) + Sync)>,
) -> Result<AssertionReport> {
    let evaluated = evaluate(n_lo, n_hi, table, progress)?;
    Ok(assertions_from(n_lo, n_hi, &evaluated))
}

/// Same as [`run_appendix_assertions`] for records already computed. The
/// multiplicity check is taken from `p` itself here.
pub fn assertions_for_records(records: &[InvariantRecord]) -> AssertionReport {
    let evaluated: Vec<_> = records
        .iter()
        .map(|r| Evaluated {
            record: r.clone(),
            multiplicity: r.p,
        })
        .collect();
    let lo = records.first().map_or(0, |r| r.n);
    let hi = records.last().map_or(0, |r| r.n);
    assertions_from(lo, hi, &evaluated)
}

fn assertions_from(n_lo: u64, n_hi: u64, evaluated: &[Evaluated]) -> AssertionReport {
    let results = AssertionId::ALL
        .iter()
        .map(|&id| {
            let mut witnesses = Vec::new();
            let mut equality_at = Vec::new();
            for ev in evaluated {
                match evaluate_one(id, &ev.record, ev.multiplicity) {
                    Outcome::Pass => {}
                    Outcome::PassEquality => equality_at.push(ev.record.n),
                    Outcome::Fail => witnesses.push(ev.record.clone()),
                }
            }
            AssertionResult {
                id,
                label: id.label(),
                description: id.description(),
                pass: witnesses.is_empty(),
                witnesses,
                equality_at,
            }
        })
        .collect();
    AssertionReport {
        range: (n_lo, n_hi),
        results,
    }
}

/// λ(x) = 3(ln x − 3/2) / (ln 3x − 1/2), defined for x > 1.
pub fn lambda_fn(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 1.0 {
        return Err(Error::Domain(format!("lambda needs x > 1, got {x}")));
    }
    Ok(3.0 * (x.ln() - 1.5) / ((3.0 * x).ln() - 0.5))
}

/// δ(p) = (8/5)·√3·ln(3p)/√p.
pub fn delta_fn(p: u64) -> f64 {
    let p = p as f64;
    1.6 * 3f64.sqrt() * (3.0 * p).ln() / p.sqrt()
}

/// `points` geometrically spaced samples in `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && lo > 0.0 && hi > lo);
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points).map(|i| lo * (step * i as f64).exp()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Extreme {
    pub ratio: RatioKind,
    pub min: Ratio,
    pub argmin: u64,
    pub max: Ratio,
    pub argmax: u64,
}

/// Minimum and maximum of each ratio over `records`, exact comparison;
/// ties go to the smallest n.
pub fn ratio_extremes(records: &[InvariantRecord]) -> Vec<Extreme> {
    if records.is_empty() {
        return Vec::new();
    }
    RatioKind::ALL
        .iter()
        .map(|&kind| {
            let first = &records[0];
            let mut ex = Extreme {
                ratio: kind,
                min: first.ratio(kind),
                argmin: first.n,
                max: first.ratio(kind),
                argmax: first.n,
            };
            for r in &records[1..] {
                let v = r.ratio(kind);
                if v < ex.min {
                    ex.min = v;
                    ex.argmin = r.n;
                }
                if v > ex.max {
                    ex.max = v;
                    ex.argmax = r.n;
                }
            }
            ex
        })
        .collect()
}

/// Report-only trend row for the asymptotic claims g ~ (5/2)p and u ~ 3p.
#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub n: u64,
    pub p: u64,
    pub g_over_p: f64,
    pub u_over_p: f64,
    pub f_over_p: f64,
}

pub fn trend(records: &[InvariantRecord], every: usize) -> Vec<TrendRow> {
    records
        .iter()
        .step_by(every.max(1))
        .map(|r| TrendRow {
            n: r.n,
            p: r.p,
            g_over_p: r.g as f64 / r.p as f64,
            u_over_p: r.u as f64 / r.p as f64,
            f_over_p: r.f as f64 / r.p as f64,
        })
        .collect()
}

/// Threshold p at and above which the effective lower bound on u/p applies.
pub const COR1_MIN_P: u64 = 670_294;
/// `3 − 3/16598` as an exact rational.
pub fn cor1_bound() -> Ratio {
    Ratio::new(3 * 16_598 - 3, 16_598)
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryReport {
    pub range: (u64, u64),
    /// n > 13 with 8u < 23p.
    pub cor2_failures: Vec<u64>,
    /// n with u >= 6p.
    pub cor3_failures: Vec<u64>,
    /// n in range with p >= 670294 (checked) and those violating u/p > 3 − 3/16598.
    pub cor1_checked: Vec<u64>,
    pub cor1_failures: Vec<u64>,
    /// 3·670294 = 2010882 exceeds (16598/16597)·2010759.9.
    pub cor1_constant_ok: bool,
    pub cor4: Option<Cor4Report>,
}

impl CorollaryReport {
    pub fn all_pass(&self) -> bool {
        self.cor2_failures.is_empty()
            && self.cor3_failures.is_empty()
            && self.cor1_failures.is_empty()
            && self.cor1_constant_ok
            && self.cor4.as_ref().is_none_or(|c| c.all_pass())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Cor4Report {
    pub k: u64,
    /// (5/17)·K.
    pub premise_bound: f64,
    /// Smallest n with n·ln n > (5/17)·K.
    pub threshold_n: u64,
    /// 163/47 > 17/5.
    pub ordering_ok: bool,
    /// (23/78)·(17/5) > 1, so every summand exceeds p.
    pub summand_bound_ok: bool,
    /// n in range meeting the premise with u/p >= 163/47.
    pub violations: Vec<u64>,
}

impl Cor4Report {
    pub fn all_pass(&self) -> bool {
        self.ordering_ok && self.summand_bound_ok && self.violations.is_empty()
    }
}

pub fn corollary_thresholds(records: &[InvariantRecord], k: Option<u64>) -> CorollaryReport {
    let cor2_failures = records
        .iter()
        .filter(|r| r.n > 13 && 8 * r.u < 23 * r.p)
        .map(|r| r.n)
        .collect();
    let cor3_failures = records
        .iter()
        .filter(|r| r.u >= 6 * r.p)
        .map(|r| r.n)
        .collect();
    let bound = cor1_bound();
    let cor1: Vec<_> = records.iter().filter(|r| r.p >= COR1_MIN_P).collect();
    let cor1_checked = cor1.iter().map(|r| r.n).collect();
    let cor1_failures = cor1
        .iter()
        .filter(|r| Ratio::new(r.u, r.p) <= bound)
        .map(|r| r.n)
        .collect();
    // 2010882 > 2010759.9 · 16598/16597, scaled by 10 to stay integral
    let cor1_constant_ok = u128::from(3 * COR1_MIN_P) * 16_597 * 10 > 20_107_599u128 * 16_598
        && 3 * COR1_MIN_P == 2_010_882;

    let cor4 = k.map(|k| {
        let premise_bound = 5.0 * k as f64 / 17.0;
        let premise = |n: u64| (n as f64) * (n as f64).ln() > premise_bound;
        let threshold_n = (1..).find(|&n| premise(n)).expect("n ln n is unbounded");
        let cap = Ratio::new(163, 47);
        Cor4Report {
            k,
            premise_bound,
            threshold_n,
            ordering_ok: cap > Ratio::new(17, 5),
            summand_bound_ok: Ratio::new(23 * 17, 78 * 5) > Ratio::new(1, 1),
            violations: records
                .iter()
                .filter(|r| premise(r.n) && Ratio::new(r.u, r.p) >= cap)
                .map(|r| r.n)
                .collect(),
        }
    });

    CorollaryReport {
        range: (
            records.first().map_or(0, |r| r.n),
            records.last().map_or(0, |r| r.n),
        ),
        cor2_failures,
        cor3_failures,
        cor1_checked,
        cor1_failures,
        cor1_constant_ok,
        cor4,
    }
}

/// Spot check of the effective bound u/p > 3 − 3/16598 at one n, using the
/// three-prime atom test (no membership window). Requires a sieve to 6p.
#[derive(Debug, Clone, Serialize)]
pub struct SpotCheck {
    pub n: u64,
    pub p: u64,
    pub u: u64,
    pub e: u64,
    pub premise: bool,
    pub holds: bool,
}

pub fn cor1_spot_check(n: u64, table: &PrimeTable) -> Result<SpotCheck> {
    let p = table.nth_prime(n)?;
    let atoms = atoms_three_prime(n, table)?;
    let u = *atoms.last().expect("p is always an atom");
    Ok(SpotCheck {
        n,
        p,
        u,
        e: atoms.len() as u64,
        premise: p >= COR1_MIN_P,
        holds: Ratio::new(u, p) > cor1_bound(),
    })
}

/// Numeric steps behind the λ-based lower bounds on e and s.
#[derive(Debug, Clone, Serialize)]
pub struct ProofThresholds {
    /// λ(76129).
    pub lambda_q: f64,
    /// λ(76129) > 2.46.
    pub lambda_ok: bool,
    /// 2.46(n−1) > 2.4n for every n > 7495 (linear, checked at n = 7496).
    pub linear_step_ok: bool,
    /// δ(76147).
    pub delta_p: f64,
    /// δ(76147) < 0.124 < 1/8.
    pub delta_ok: bool,
    /// 1.4 > 5/4.
    pub e_step_ok: bool,
}

pub fn proof_thresholds() -> ProofThresholds {
    let lambda_q = lambda_fn(76_129.0).expect("76129 > 1");
    let delta_p = delta_fn(76_147);
    // 2.46(n-1) - 2.4n = 0.06n - 2.46 is increasing in n
    let n = 7_496i64;
    ProofThresholds {
        lambda_q,
        lambda_ok: lambda_q > 2.46,
        linear_step_ok: 246 * (n - 1) > 240 * n,
        delta_p,
        delta_ok: delta_p < 0.124 && 0.124 < 0.125,
        e_step_ok: Ratio::new(14, 10) > Ratio::new(5, 4),
    }
}
