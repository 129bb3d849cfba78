//! Segmented sieve of Eratosthenes.
//!
//! Memory is proportional to the segment length plus the base primes up to
//! `√hi`, never to `hi` itself. Segments are independent, so callers may sieve
//! disjoint ranges on different threads and concatenate the results in range
//! order.

use crate::error::{Error, Result};

/// Upper limit accepted by [`primes_in`] and [`PrimeRange`].
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

/// Default segment length (number of integers per segment).
pub const SEGMENT_LEN: u64 = 1 << 20;

/// Primes up to `limit` by a plain (unsegmented) sieve.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sieve one segment `[lo, hi]` using `base`, which must contain every prime
/// up to `√hi`.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    if hi < lo || hi < 2 {
        return Vec::new();
    }
    let lo = lo.max(2);
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

/// The closed range `[lo, hi]` of integers whose primes are to be listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
    segment_len: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        if hi > MAX_SIEVE_LIMIT {
            return Err(Error::guard("sieve upper limit", hi, MAX_SIEVE_LIMIT));
        }
        Ok(PrimeRange {
            lo: lo.max(2),
            hi,
            segment_len: SEGMENT_LEN,
        })
    }

    pub fn with_segment_len(mut self, len: u64) -> Self {
        self.segment_len = len.max(1);
        self
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Splits the range into consecutive sub-ranges of at most one segment.
    pub fn segments(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut start = self.lo;
        while start <= self.hi {
            let end = start.saturating_add(self.segment_len - 1).min(self.hi);
            out.push((start, end));
            if end == u64::MAX {
                break;
            }
            start = end + 1;
        }
        out
    }

    /// Base primes sufficient to sieve any segment of this range.
    pub fn base_primes(&self) -> Vec<u64> {
        small_primes(isqrt(self.hi))
    }

    pub fn iter(&self) -> Primes {
        Primes {
            base: self.base_primes(),
            segments: self.segments().into_iter(),
            current: Vec::new().into_iter(),
        }
    }
}

impl IntoIterator for PrimeRange {
    type Item = u64;
    type IntoIter = Primes;
    fn into_iter(self) -> Primes {
        self.iter()
    }
}

/// Streaming iterator over the primes of a [`PrimeRange`], one segment at a
/// time.
pub struct Primes {
    base: Vec<u64>,
    segments: std::vec::IntoIter<(u64, u64)>,
    current: std::vec::IntoIter<u64>,
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some(p) = self.current.next() {
                return Some(p);
            }
            let (lo, hi) = self.segments.next()?;
            self.current = sieve_segment(lo, hi, &self.base).into_iter();
        }
    }
}

/// Exactly the primes in `[lo, hi]`, increasing.
pub fn primes_in(lo: u64, hi: u64) -> Result<Vec<u64>> {
    Ok(PrimeRange::new(lo, hi)?.iter().collect())
}

/// `π(x)`, the number of primes `≤ x`.
pub fn prime_count(x: u64) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    Ok(PrimeRange::new(2, x)?.iter().count() as u64)
}
