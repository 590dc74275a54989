//! Prime table built by a segmented sieve of Eratosthenes.
//!
//! Primality is stored as one bit per integer in `0..=limit`. A cumulative
//! count is kept for every 64-bit word, so `prime_pi` is one table lookup
//! plus one popcount.

use crate::error::{Error, Result};

/// Numbers covered by one sieve segment. Must be a multiple of 64.
const SEGMENT: u64 = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    /// `rank[w]` = number of primes below `64 * w`.
    rank: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieves all primes `<= limit`.
    pub fn sieve(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!(
                "sieve limit must be >= 2, got {limit}"
            )));
        }
        let n_words = (limit / 64 + 1) as usize;
        let mut bits = vec![0u64; n_words];

        let base = small_primes(limit.isqrt());
        let mut lo = 0u64;
        while lo <= limit {
            let hi = (lo + SEGMENT - 1).min(limit);
            let w_lo = (lo / 64) as usize;
            let w_hi = (hi / 64) as usize;
            let seg = &mut bits[w_lo..=w_hi];
            seg.fill(!0);
            for &b in &base {
                if b * b > hi {
                    break;
                }
                let first = (b * b).max(lo.div_ceil(b) * b);
                let mut m = first;
                while m <= hi {
                    let off = m - lo;
                    seg[(off / 64) as usize] &= !(1u64 << (off % 64));
                    m += b;
                }
            }
            lo += SEGMENT;
        }
        bits[0] &= !0b11;
        let tail = limit % 64;
        if tail < 63 {
            bits[n_words - 1] &= (1u64 << (tail + 1)) - 1;
        }

        let mut rank = Vec::with_capacity(n_words + 1);
        let mut acc = 0u64;
        for &w in &bits {
            rank.push(acc);
            acc += u64::from(w.count_ones());
        }
        rank.push(acc);

        let mut primes = Vec::with_capacity(acc as usize);
        for (wi, &w) in bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as u64;
                primes.push(wi as u64 * 64 + b);
                w &= w - 1;
            }
        }

        Ok(PrimeTable {
            limit,
            bits,
            rank,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Ascending list of all primes `<= limit`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primality of `m`; `false` for any `m` beyond the limit.
    #[inline]
    pub fn is_prime(&self, m: u64) -> bool {
        m <= self.limit && (self.bits[(m / 64) as usize] >> (m % 64)) & 1 == 1
    }

    /// The `n`-th prime, 1-based (`nth_prime(1) == 2`).
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Domain("prime index is 1-based".into()));
        }
        self.primes
            .get((n - 1) as usize)
            .copied()
            .ok_or(Error::Range {
                what: "prime index",
                value: n,
                max: self.primes.len() as u64,
            })
    }

    /// π(x), the number of primes `<= x`.
    pub fn prime_pi(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::Range {
                what: "prime_pi argument",
                value: x,
                max: self.limit,
            });
        }
        Ok(self.pi_unchecked(x))
    }

    #[inline]
    fn pi_unchecked(&self, x: u64) -> u64 {
        let w = (x / 64) as usize;
        let b = x % 64;
        let mask = if b == 63 { !0 } else { (1u64 << (b + 1)) - 1 };
        self.rank[w] + u64::from((self.bits[w] & mask).count_ones())
    }

    /// Ascending primes `q` with `lo <= q <= hi`.
    pub fn primes_in_range(&self, lo: u64, hi: u64) -> Result<&[u64]> {
        if hi > self.limit {
            return Err(Error::Range {
                what: "range end",
                value: hi,
                max: self.limit,
            });
        }
        if lo > hi {
            return Err(Error::Domain(format!("empty range {lo}..={hi}")));
        }
        let start = if lo == 0 {
            0
        } else {
            self.pi_unchecked(lo - 1)
        } as usize;
        let end = self.pi_unchecked(hi) as usize;
        Ok(&self.primes[start..end])
    }
}

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
