//! The numerical semigroup S(n) generated by all primes `>= p(n)`.
//!
//! Membership is computed on the window `0..=bound` starting from
//! `bound = 6p`. Only generators `<= bound` can contribute to sums inside
//! the window, so the window is exact; it is complete once it contains `p`
//! consecutive members above the Frobenius number (`f + p <= bound`), since
//! adding `p` then reaches everything beyond it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use crate::reach::{reachable, Bitset};

/// How atoms are identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AtomStrategy {
    /// Test each generating prime against the membership window.
    #[default]
    Reachability,
    /// An odd prime `q` with `q < 5p` is an atom iff it is not a sum of three
    /// primes `>= p`. Needs no membership window.
    ThreePrime,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemigroupInstance {
    pub n: u64,
    pub p: u64,
    pub bound: u64,
    #[serde(skip)]
    member: Bitset,
    pub frobenius: u64,
    pub genus: u64,
    pub sporadic: u64,
    pub atoms: Vec<u64>,
    pub embedding_dim: u64,
    pub largest_atom: u64,
}

/// Sieve bound sufficient to build S(n) for every `n <= n_hi` with the
/// initial window.
pub fn required_sieve_limit(p_hi: u64) -> u64 {
    6 * p_hi
}

impl SemigroupInstance {
    pub fn build(n: u64, table: &PrimeTable) -> Result<Self> {
        let p = table.nth_prime(n)?;
        let mut bound = 6 * p;
        loop {
            if bound > table.limit() {
                return Err(Error::Range {
                    what: "semigroup window",
                    value: bound,
                    max: table.limit(),
                });
            }
            let generators = table.primes_in_range(p, bound)?;
            let member = reachable(generators, bound);
            // bits 1..p-1 are clear, so a gap always exists for p > 1
            let frobenius = member.last_zero().expect("p >= 2 leaves 1 as a gap");
            if frobenius + p > bound {
                bound *= 2;
                continue;
            }
            let sporadic = member.count_ones_upto(frobenius);
            let genus = frobenius + 1 - sporadic;
            let mut s = SemigroupInstance {
                n,
                p,
                bound,
                member,
                frobenius,
                genus,
                sporadic,
                atoms: Vec::new(),
                embedding_dim: 0,
                largest_atom: 0,
            };
            s.atoms = s.compute_atoms(table);
            s.embedding_dim = s.atoms.len() as u64;
            s.largest_atom = *s.atoms.last().expect("p is always an atom");
            return Ok(s);
        }
    }

    /// `true` iff `m` is in S(n). Every `m` beyond the window is a member.
    pub fn is_member(&self, m: u64) -> bool {
        m > self.bound || self.member.get(m)
    }

    pub fn membership(&self) -> &Bitset {
        &self.member
    }

    /// Minimal generating system. A prime `q` is not an atom iff
    /// `q = r + x` for a prime `r >= p` and a member `x >= p`.
    pub fn compute_atoms(&self, table: &PrimeTable) -> Vec<u64> {
        let p = self.p;
        let gens = table
            .primes_in_range(p, self.bound)
            .expect("window was built from this table");
        gens.iter()
            .copied()
            .filter(|&q| {
                let rs = &gens[..gens.partition_point(|&r| r + p <= q)];
                !rs.iter().any(|&r| self.member.get(q - r))
            })
            .collect()
    }

    /// Gaps `1..=f`, ascending.
    pub fn gaps(&self) -> Vec<u64> {
        (1..=self.frobenius)
            .filter(|&m| !self.member.get(m))
            .collect()
    }
}

/// Atoms of S(n) without building the membership window.
///
/// Primes `q` in `[p, 6p]` are tested for a representation as a sum of three
/// primes `>= p`. Below `5p` that test is exact for odd `p`; a prime in
/// `[5p, 6p]` with no three-prime representation cannot be classified this
/// way and is reported as an error.
pub fn atoms_three_prime(n: u64, table: &PrimeTable) -> Result<Vec<u64>> {
    let p = table.nth_prime(n)?;
    if p == 2 {
        return Err(Error::Domain("three-prime atom test needs odd p".into()));
    }
    let hi = 6 * p;
    if hi > table.limit() {
        return Err(Error::Range {
            what: "semigroup window",
            value: hi,
            max: table.limit(),
        });
    }
    let gens = table.primes_in_range(p, hi)?;
    let mut atoms = Vec::new();
    for &q in gens {
        if !is_three_prime_sum(q, gens, table) {
            if q >= 5 * p {
                return Err(Error::Domain(format!(
                    "prime {q} >= 5p has no three-prime representation; three-prime test inconclusive"
                )));
            }
            atoms.push(q);
        }
    }
    Ok(atoms)
}

/// Is `q = a + b + c` with primes `a <= b <= c` drawn from the ascending
/// slice `gens`?
fn is_three_prime_sum(q: u64, gens: &[u64], table: &PrimeTable) -> bool {
    for (i, &a) in gens.iter().enumerate() {
        if 3 * a > q {
            break;
        }
        for &b in &gens[i..] {
            if a + 2 * b > q {
                break;
            }
            if table.is_prime(q - a - b) {
                return true;
            }
        }
    }
    false
}

/// Brute-force membership: is `m` a sum (possibly empty) of primes `>= p`?
/// Exhaustive recursion over nondecreasing summands with trial-division
/// primality. Intended for small inputs only.
pub fn oracle_membership(m: u64, p: u64) -> bool {
    fn prime(x: u64) -> bool {
        x >= 2
            && (2..x)
                .take_while(|d| d * d <= x)
                .all(|d| !x.is_multiple_of(d))
    }
    fn go(rest: u64, min: u64) -> bool {
        rest == 0 || (min..=rest).any(|q| prime(q) && go(rest - q, q))
    }
    go(m, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::sieve(1000).unwrap()
    }

    #[test]
    fn s1() {
        let s = SemigroupInstance::build(1, &table()).unwrap();
        assert_eq!((s.p, s.frobenius, s.genus, s.sporadic), (2, 1, 1, 1));
        assert_eq!(s.atoms, vec![2, 3]);
        assert_eq!((s.embedding_dim, s.largest_atom), (2, 3));
    }

    #[test]
    fn s2() {
        let s = SemigroupInstance::build(2, &table()).unwrap();
        assert_eq!((s.p, s.frobenius, s.genus, s.sporadic), (3, 4, 3, 2));
        assert_eq!(s.gaps(), vec![1, 2, 4]);
        assert_eq!(s.atoms, vec![3, 5, 7]);
        assert!(!s.is_member(4));
        assert!(s.is_member(0));
    }

    #[test]
    fn s8() {
        let s = SemigroupInstance::build(8, &table()).unwrap();
        assert_eq!(
            (s.p, s.frobenius, s.embedding_dim, s.sporadic),
            (19, 63, 10, 24)
        );
        assert_eq!(s.atoms, vec![19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(!s.is_member(63));
        assert!((64..=90).all(|m| s.is_member(m)));
        assert!(s.is_member(10_000));
    }

    #[test]
    fn s15_s30() {
        let t = table();
        let s = SemigroupInstance::build(15, &t).unwrap();
        assert_eq!((s.p, s.largest_atom), (47, 163));
        let s = SemigroupInstance::build(30, &t).unwrap();
        assert_eq!((s.p, s.frobenius), (113, 369));
    }

    #[test]
    fn table_too_small() {
        let t = PrimeTable::sieve(100).unwrap();
        assert!(matches!(
            SemigroupInstance::build(8, &t),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn oracle_cases() {
        assert!(oracle_membership(0, 2));
        assert!(oracle_membership(0, 47));
        assert!(!oracle_membership(4, 3));
        assert!(oracle_membership(57, 19));
        assert!(!oracle_membership(63, 19));
    }

    #[test]
    fn three_prime_agrees_with_window() {
        let t = PrimeTable::sieve(6 * 600).unwrap();
        for n in 2..=100 {
            let s = SemigroupInstance::build(n, &t).unwrap();
            assert_eq!(atoms_three_prime(n, &t).unwrap(), s.atoms, "n={n}");
        }
        assert!(atoms_three_prime(1, &t).is_err());
    }

    #[test]
    fn atoms_regenerate_membership() {
        let t = table();
        for n in 1..=20 {
            let s = SemigroupInstance::build(n, &t).unwrap();
            assert_eq!(&reachable(&s.atoms, s.bound), s.membership(), "n={n}");
        }
    }
}
