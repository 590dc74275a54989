//! Three-prime representations `N = q1 + q2 + q3` with every summand close
//! to `N/3`.
//!
//! A window of width `t` admits `q` iff `|N/3 − q| <= N/t`, evaluated as
//! `|3q − N|·t_num <= 3N·t_den`. Representations are unordered multisets
//! `q1 <= q2 <= q3`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub t_num: u64,
    pub t_den: u64,
    /// Endpoint inclusion: `<=` when true, `<` when false.
    pub closed: bool,
}

impl WindowSpec {
    /// Closed window with `t = t_num / t_den`; requires `t > 3`.
    pub fn new(t_num: u64, t_den: u64) -> Result<Self> {
        Self::with_closed(t_num, t_den, true)
    }

    pub fn with_closed(t_num: u64, t_den: u64, closed: bool) -> Result<Self> {
        if t_den == 0 || u128::from(t_num) <= 3 * u128::from(t_den) {
            return Err(Error::Domain(format!(
                "window needs t > 3, got {t_num}/{t_den}"
            )));
        }
        Ok(WindowSpec {
            t_num,
            t_den,
            closed,
        })
    }

    pub fn from_ratio(t: Ratio) -> Result<Self> {
        Self::new(t.num(), t.den())
    }

    /// `t = 6`: the window `N/6 <= q <= N/2`.
    pub fn sixth() -> Self {
        WindowSpec {
            t_num: 6,
            t_den: 1,
            closed: true,
        }
    }

    pub fn t(&self) -> Ratio {
        Ratio::new(self.t_num, self.t_den)
    }

    #[inline]
    pub fn admits(&self, q: u64, n: u64) -> bool {
        let dev = u128::from((3 * q).abs_diff(n)) * u128::from(self.t_num);
        let lim = 3 * u128::from(n) * u128::from(self.t_den);
        if self.closed {
            dev <= lim
        } else {
            dev < lim
        }
    }

    /// Integer interval containing every admitted q (possibly slightly wider).
    fn envelope(&self, n: u64) -> (u64, u64) {
        // |3q - N| <= 3N t_den / t_num  =>  q in [N/3 - N t_den/t_num, N/3 + N t_den/t_num]
        let half = u128::from(n) * u128::from(self.t_den) / u128::from(self.t_num) + 1;
        let centre = u128::from(n / 3);
        let lo = centre.saturating_sub(half) as u64;
        let hi = (centre + half + 1).min(u128::from(n)) as u64;
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Representation {
    pub q1: u64,
    pub q2: u64,
    pub q3: u64,
}

impl Representation {
    pub fn sum(&self) -> u64 {
        self.q1 + self.q2 + self.q3
    }

    /// Number of distinct orderings: 1, 3 or 6.
    pub fn orderings(&self) -> u64 {
        match (self.q1 == self.q2, self.q2 == self.q3) {
            (true, true) => 1,
            (false, false) => 6,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSeries {
    pub n_lo: u64,
    pub n_hi: u64,
    pub counts: BTreeMap<u64, u64>,
}

fn check_odd(n: u64, table: &PrimeTable) -> Result<()> {
    if n < 7 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("N must be odd and >= 7, got {n}")));
    }
    if n > table.limit() {
        return Err(Error::Range {
            what: "N",
            value: n,
            max: table.limit(),
        });
    }
    Ok(())
}

/// Primes in `[lo, hi]` admitted by `admits`, ascending. The admitted set is
/// an interval around `n/3`.
fn window_primes(
    table: &PrimeTable,
    n: u64,
    lo: u64,
    hi: u64,
    admits: impl Fn(u64) -> bool,
) -> &[u64] {
    let all = table
        .primes_in_range(lo, hi)
        .expect("envelope lies inside the table");
    let start = all.partition_point(|&q| !admits(q) && 3 * q < n);
    let end = all.partition_point(|&q| admits(q) || 3 * q < n);
    &all[start..end]
}

/// Walks every unordered triple from the window primes summing to `n`.
/// Stops early when `visit` returns `false`. The window is an interval, so
/// `q1 <= q2 <= q3 <= max(window)` already puts `q3` inside it.
fn for_each_rep(
    n: u64,
    window: &[u64],
    table: &PrimeTable,
    mut visit: impl FnMut(Representation) -> bool,
) {
    let Some(&top) = window.last() else { return };
    for (i, &q1) in window.iter().enumerate() {
        if 3 * q1 > n {
            break;
        }
        // q3 = n - q1 - q2 <= top  =>  q2 >= n - q1 - top
        let rest = &window[i..];
        let from = rest.partition_point(|&q2| q1 + q2 + top < n);
        for &q2 in &rest[from..] {
            if q1 + 2 * q2 > n {
                break;
            }
            let q3 = n - q1 - q2;
            if table.is_prime(q3) && !visit(Representation { q1, q2, q3 }) {
                return;
            }
        }
    }
}

fn window_slice<'a>(n: u64, w: &WindowSpec, table: &'a PrimeTable) -> &'a [u64] {
    let (lo, hi) = w.envelope(n);
    window_primes(table, n, lo, hi, |q| w.admits(q, n))
}

/// All unordered window representations of odd `n`.
pub fn window_reps(n: u64, w: &WindowSpec, table: &PrimeTable) -> Result<Vec<Representation>> {
    check_odd(n, table)?;
    let mut out = Vec::new();
    for_each_rep(n, window_slice(n, w, table), table, |r| {
        out.push(r);
        true
    });
    Ok(out)
}

/// r(n): number of unordered window representations.
pub fn window_count(n: u64, w: &WindowSpec, table: &PrimeTable) -> Result<u64> {
    check_odd(n, table)?;
    let mut count = 0;
    for_each_rep(n, window_slice(n, w, table), table, |_| {
        count += 1;
        true
    });
    Ok(count)
}

pub fn has_window_rep(n: u64, w: &WindowSpec, table: &PrimeTable) -> Result<bool> {
    check_odd(n, table)?;
    let mut found = false;
    for_each_rep(n, window_slice(n, w, table), table, |_| {
        found = true;
        false
    });
    Ok(found)
}

/// Number of ordered triples `(q1, q2, q3)` of window primes summing to `n`.
/// Straight double loop over the window; shares no enumeration logic with
/// the unordered walk.
pub fn ordered_count(n: u64, w: &WindowSpec, table: &PrimeTable) -> Result<u64> {
    check_odd(n, table)?;
    let window: Vec<u64> = (2..=n)
        .filter(|&q| table.is_prime(q) && w.admits(q, n))
        .collect();
    let mut count = 0;
    for &a in &window {
        for &b in &window {
            if a + b < n {
                let c = n - a - b;
                if table.is_prime(c) && w.admits(c, n) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Odd-prime bitsets for counting pairs `a + b = m` word-parallel.
///
/// Bit `i` of `fwd` is set iff `2i + 1` is prime; `rev` holds the same bits
/// mirrored (`rev[k] = fwd[top - k]`). For even `m`, odd `a = 2i + 1` pairs
/// with `b = m − a = 2(c − i) + 1`, `c = m/2 − 1`, which is bit `i + top − c`
/// of `rev`, so one AND + popcount handles 64 candidates for `a`.
struct PairIndex {
    fwd: Vec<u64>,
    rev: Vec<u64>,
    top: u64,
}

impl PairIndex {
    fn new(table: &PrimeTable) -> Self {
        let top = (table.limit() - 1) / 2;
        let words = (top / 64 + 2) as usize;
        let mut fwd = vec![0u64; words];
        let mut rev = vec![0u64; words];
        for &q in &table.primes()[1..] {
            let i = (q - 1) / 2;
            fwd[(i / 64) as usize] |= 1 << (i % 64);
            let k = top - i;
            rev[(k / 64) as usize] |= 1 << (k % 64);
        }
        PairIndex { fwd, rev, top }
    }

    #[inline]
    fn rev_bits(&self, pos: u64) -> u64 {
        let w = (pos / 64) as usize;
        let b = pos % 64;
        let lo = self.rev[w] >> b;
        if b == 0 {
            lo
        } else {
            lo | self.rev.get(w + 1).map_or(0, |x| x << (64 - b))
        }
    }

    /// Number of odd primes `a` in `[a_lo, a_hi]` with `m − a` prime; `m` even.
    fn count_pairs(&self, m: u64, a_lo: u64, a_hi: u64) -> u64 {
        if a_lo > a_hi {
            return 0;
        }
        let i_lo = a_lo.max(3) / 2;
        let i_hi = (a_hi - 1) / 2;
        if i_lo > i_hi {
            return 0;
        }
        let c = m / 2 - 1;
        let shift = self.top - c;
        let mut total = 0u64;
        let mut w = i_lo / 64;
        while w * 64 <= i_hi {
            let base = w * 64;
            let mut mask = !0u64;
            if base < i_lo {
                mask &= !0u64 << (i_lo - base);
            }
            if i_hi < base + 63 {
                mask &= !0u64 >> (63 - (i_hi - base));
            }
            let f = self.fwd[w as usize] & mask;
            if f != 0 {
                total += u64::from((f & self.rev_bits(base + shift)).count_ones());
            }
            w += 1;
        }
        total
    }

    /// r(n) for a window that is the integer interval `[lo, hi]` with `lo >= 3`.
    fn window_count(&self, n: u64, lo: u64, hi: u64) -> u64 {
        let mut count = 0;
        let mut q1 = lo | 1;
        while 3 * q1 <= n {
            if self.fwd[((q1 - 1) / 2 / 64) as usize] >> (((q1 - 1) / 2) % 64) & 1 == 1 {
                let m = n - q1;
                // q1 <= q2 <= q3 = m - q2 <= hi
                let a_lo = q1.max(m.saturating_sub(hi));
                count += self.count_pairs(m, a_lo, m / 2);
            }
            q1 += 2;
        }
        count
    }

    /// Ordered triples from the integer-interval window `[lo, hi]`, `lo >= 3`.
    fn ordered_window_count(&self, n: u64, lo: u64, hi: u64) -> u64 {
        let mut count = 0;
        let mut q1 = lo | 1;
        while q1 <= hi && q1 < n {
            if self.fwd[((q1 - 1) / 2 / 64) as usize] >> (((q1 - 1) / 2) % 64) & 1 == 1 {
                let m = n - q1;
                // lo <= q2 <= hi and lo <= m - q2 <= hi
                let a_lo = lo.max(m.saturating_sub(hi));
                let a_hi = hi.min(m.saturating_sub(lo));
                count += self.count_pairs(m, a_lo, a_hi);
            }
            q1 += 2;
        }
        count
    }
}

/// How representations are counted in a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Counting {
    /// Multisets `q1 <= q2 <= q3`.
    #[default]
    Unordered,
    /// Ordered triples; each multiset counts 1, 3 or 6 times.
    Ordered,
}

/// Integer interval `[lo, hi]` of window members around `n/3`.
fn admitted_interval(n: u64, admits: impl Fn(u64) -> bool, lo: u64, hi: u64) -> Option<(u64, u64)> {
    let c = n / 3;
    // admitted integers form an interval containing n/3 rounded either way
    let centre = [c, c + 1].into_iter().find(|&q| admits(q))?;
    let (mut a, mut b) = (centre, centre);
    let (mut step_lo, mut step_hi) = (centre - lo.min(centre), hi.saturating_sub(centre));
    // binary search both ends
    while step_lo > 0 {
        if a >= step_lo && admits(a - step_lo) {
            a -= step_lo;
        } else {
            step_lo /= 2;
        }
    }
    while step_hi > 0 {
        if admits(b + step_hi) {
            b += step_hi;
        } else {
            step_hi /= 2;
        }
    }
    Some((a, b))
}

/// Odd `N` in `[k, limit]` with no window representation, ascending.
pub fn h_exceptions(k: u64, w: &WindowSpec, limit: u64, table: &PrimeTable) -> Result<Vec<u64>> {
    if k < 7 || k > limit {
        return Err(Error::Domain(format!(
            "need 7 <= K <= limit, got K={k}, limit={limit}"
        )));
    }
    if limit > table.limit() {
        return Err(Error::Range {
            what: "scan limit",
            value: limit,
            max: table.limit(),
        });
    }
    let first = k | 1;
    let odd: Vec<u64> = (first..=limit).step_by(2).collect();
    let flags: Vec<bool> = odd
        .par_iter()
        .map(|&n| has_window_rep(n, w, table).map(|b| !b))
        .collect::<Result<_>>()?;
    Ok(odd
        .into_iter()
        .zip(flags)
        .filter(|&(_, ex)| ex)
        .map(|(n, _)| n)
        .collect())
}

/// r(N) for every odd N in `[n_lo, n_hi]`, unordered.
pub fn rep_count_series(
    n_lo: u64,
    n_hi: u64,
    w: &WindowSpec,
    table: &PrimeTable,
) -> Result<RepSeries> {
    count_series(n_lo, n_hi, w, Counting::Unordered, table)
}

/// Representation counts for every odd N in `[n_lo, n_hi]`.
///
/// Uses word-parallel pair counting; small N whose window reaches 2 go
/// through the enumerating path.
pub fn count_series(
    n_lo: u64,
    n_hi: u64,
    w: &WindowSpec,
    counting: Counting,
    table: &PrimeTable,
) -> Result<RepSeries> {
    if n_lo < 7 || n_lo > n_hi {
        return Err(Error::Domain(format!("invalid N range {n_lo}:{n_hi}")));
    }
    if n_hi > table.limit() {
        return Err(Error::Range {
            what: "N",
            value: n_hi,
            max: table.limit(),
        });
    }
    let index = PairIndex::new(table);
    let first = n_lo | 1;
    let counts = (first..=n_hi)
        .step_by(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            let (lo, hi) = w.envelope(n);
            let c = match (admitted_interval(n, |q| w.admits(q, n), lo, hi), counting) {
                (Some((a, b)), Counting::Unordered) if a >= 3 => index.window_count(n, a, b),
                (Some((a, b)), Counting::Ordered) if a >= 3 => index.ordered_window_count(n, a, b),
                (_, Counting::Unordered) => window_count(n, w, table)?,
                (_, Counting::Ordered) => window_reps(n, w, table)?
                    .iter()
                    .map(|r| r.orderings())
                    .sum(),
            };
            Ok((n, c))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect();
    Ok(RepSeries { n_lo, n_hi, counts })
}

/// `(3q − N)^2 <= 9N`, i.e. `|N/3 − q| <= √N`.
#[inline]
pub fn in_sqrt_window(q: u64, n: u64) -> bool {
    let d = u128::from((3 * q).abs_diff(n));
    d * d <= 9 * u128::from(n)
}

/// Representations with every summand in `[N/3 − √N, N/3 + √N]`.
pub fn sqrt_window_reps(n: u64, table: &PrimeTable) -> Result<Vec<Representation>> {
    check_odd(n, table)?;
    let mut out = Vec::new();
    let window = sqrt_window_slice(n, table);
    for_each_rep(n, window, table, |r| {
        out.push(r);
        true
    });
    Ok(out)
}

pub fn has_sqrt_window_rep(n: u64, table: &PrimeTable) -> Result<bool> {
    check_odd(n, table)?;
    let mut found = false;
    let window = sqrt_window_slice(n, table);
    for_each_rep(n, window, table, |_| {
        found = true;
        false
    });
    Ok(found)
}

fn sqrt_window_slice(n: u64, table: &PrimeTable) -> &[u64] {
    let r = n.isqrt() + 1;
    let lo = (n / 3).saturating_sub(r);
    let hi = (n / 3 + r + 1).min(n);
    window_primes(table, n, lo, hi, |q| in_sqrt_window(q, n))
}

/// Odd `N` in `[n_lo, n_hi]` with no √N-window representation.
pub fn sqrt_window_failures(n_lo: u64, n_hi: u64, table: &PrimeTable) -> Result<Vec<u64>> {
    let first = n_lo.max(7) | 1;
    let odd: Vec<u64> = (first..=n_hi).step_by(2).collect();
    let ok: Vec<bool> = odd
        .par_iter()
        .map(|&n| has_sqrt_window_rep(n, table))
        .collect::<Result<_>>()?;
    Ok(odd
        .into_iter()
        .zip(ok)
        .filter(|&(_, ok)| !ok)
        .map(|(n, _)| n)
        .collect())
}
