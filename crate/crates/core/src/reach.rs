//! Word-parallel reachability: which `m <= bound` are sums (with repetition)
//! of a set of generators.

/// Fixed-length bitset over `0..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    bound: u64,
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(bound: u64) -> Self {
        Bitset {
            bound,
            words: vec![0; (bound / 64 + 1) as usize],
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    #[inline]
    pub fn get(&self, m: u64) -> bool {
        m <= self.bound && (self.words[(m / 64) as usize] >> (m % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, m: u64) {
        debug_assert!(m <= self.bound);
        self.words[(m / 64) as usize] |= 1 << (m % 64);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Largest `m <= bound` whose bit is clear.
    pub fn last_zero(&self) -> Option<u64> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            let inv = !w & self.word_mask(wi);
            if inv != 0 {
                return Some(wi as u64 * 64 + 63 - u64::from(inv.leading_zeros()));
            }
        }
        None
    }

    /// Number of set bits in `0..=hi`.
    pub fn count_ones_upto(&self, hi: u64) -> u64 {
        let hi = hi.min(self.bound);
        let last = (hi / 64) as usize;
        let full: u64 = self.words[..last]
            .iter()
            .map(|w| u64::from(w.count_ones()))
            .sum();
        let b = hi % 64;
        let mask = if b == 63 { !0 } else { (1u64 << (b + 1)) - 1 };
        full + u64::from((self.words[last] & mask).count_ones())
    }

    fn word_mask(&self, wi: usize) -> u64 {
        if wi + 1 < self.words.len() {
            !0
        } else {
            let tail = self.bound % 64;
            if tail == 63 {
                !0
            } else {
                (1u64 << (tail + 1)) - 1
            }
        }
    }

    fn is_word_full(&self, wi: usize) -> bool {
        let mask = self.word_mask(wi);
        self.words[wi] & mask == mask
    }
}

/// Sums of `generators` (each usable any number of times, including zero
/// times) that are `<= bound`.
///
/// Each generator is one ascending pass of `word[w] |= word[w - q]` with the
/// source shifted by `q` bits. For `q >= 64` the source words lie strictly
/// below the target word and were already updated in the same pass, which is
/// what gives unbounded repetition. The suffix of all-ones words never
/// changes again and is skipped.
pub fn reachable(generators: &[u64], bound: u64) -> Bitset {
    let mut set = Bitset::new(bound);
    set.set(0);
    let n_words = set.words.len();
    let mut full_from = n_words;

    for &q in generators {
        if q == 0 || q > bound {
            continue;
        }
        if q < 64 {
            for m in q..=bound {
                if set.get(m - q) {
                    set.set(m);
                }
            }
        } else {
            let ws = (q / 64) as usize;
            let bs = (q % 64) as u32;
            let words = &mut set.words;
            if bs == 0 {
                for w in ws..full_from {
                    words[w] |= words[w - ws];
                }
            } else {
                if ws < full_from {
                    words[ws] |= words[0] << bs;
                }
                for w in ws + 1..full_from {
                    words[w] |= (words[w - ws] << bs) | (words[w - ws - 1] >> (64 - bs));
                }
            }
            let mask = set.word_mask(n_words - 1);
            set.words[n_words - 1] &= mask;
        }
        while full_from > 0 && set.is_word_full(full_from - 1) {
            full_from -= 1;
        }
    }
    set
}
