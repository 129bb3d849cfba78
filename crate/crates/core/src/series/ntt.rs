//! Convolution modulo an arbitrary `q ≤ 2^62` by number-theoretic transforms
//! over several word-size primes, recombined with Garner's algorithm.
//!
//! Every auxiliary prime is `c·2^25 + 1 < 2^31`, so transforms of length up to
//! `2^25` are available and all butterfly products fit in a `u64`.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modring::{factorize, mul_mod, pow_mod};

/// Primes `p = c·2^25 + 1`, largest first.
pub const NTT_PRIMES: [u64; 7] = [
    2_113_929_217,
    2_013_265_921,
    1_811_939_329,
    1_711_276_033,
    1_107_296_257,
    469_762_049,
    167_772_161,
];

pub const MAX_LOG_LEN: u32 = 25;

/// Largest supported convolution output length.
pub const MAX_TRANSFORM_LEN: usize = 1 << MAX_LOG_LEN;

#[derive(Clone, Copy, Debug)]
struct NttPrime {
    p: u64,
    generator: u64,
}

fn primitive_root(p: u64) -> u64 {
    let factors = factorize(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(f, _)| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("prime has a primitive root")
}

fn ntt_primes() -> &'static [NttPrime] {
    static PRIMES: OnceLock<Vec<NttPrime>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        NTT_PRIMES
            .iter()
            .map(|&p| NttPrime {
                p,
                generator: primitive_root(p),
            })
            .collect()
    })
}

fn bit_reverse(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

fn transform(a: &mut [u64], prime: NttPrime, invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let p = prime.p;
    bit_reverse(a);
    let mut twiddles = Vec::with_capacity(n / 2);
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(prime.generator, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        twiddles.clear();
        let mut t = 1u64;
        for _ in 0..half {
            twiddles.push(t);
            t = t * w % p;
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x;
                let v = *y * tw % p;
                *x = if u + v >= p { u + v - p } else { u + v };
                *y = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * n_inv % p;
        }
    }
}

/// Cyclic-free convolution of `a` and `b` modulo one NTT prime, truncated to
/// `out_len` terms.
fn convolve_one(a: &[u64], b: Option<&[u64]>, out_len: usize, size: usize, prime: NttPrime) -> Vec<u64> {
    let p = prime.p;
    let load = |src: &[u64]| {
        let mut buf = vec![0u64; size];
        for (dst, &x) in buf.iter_mut().zip(src) {
            *dst = x % p;
        }
        transform(&mut buf, prime, false);
        buf
    };
    let mut fa = load(a);
    match b {
        Some(b) => {
            let fb = load(b);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = *x * y % p;
            }
        }
        None => {
            for x in fa.iter_mut() {
                *x = *x * *x % p;
            }
        }
    }
    transform(&mut fa, prime, true);
    fa.truncate(out_len);
    fa
}

/// Number of auxiliary primes whose product exceeds `terms · (q-1)^2`.
fn primes_needed(terms: usize, q: u64) -> Result<usize> {
    let target = (terms.max(1) as f64).log2() + 2.0 * ((q.max(2) - 1) as f64).log2() + 1.0;
    let mut bits = 0.0;
    for (i, &p) in NTT_PRIMES.iter().enumerate() {
        bits += (p as f64).log2();
        if bits > target {
            return Ok(i + 1);
        }
    }
    Err(Error::guard("NTT coefficient bound (bits)", target as u64, bits as u64))
}

/// Precomputed Garner constants for recombining residues modulo the first `k`
/// primes into a value modulo `q`.
struct Garner {
    primes: Vec<u64>,
    // inv[i] = (p_0 ⋯ p_{i-1})^{-1} mod p_i
    inv: Vec<u64>,
    // prefix_mod_p[i][j] = (p_0 ⋯ p_{j-1}) mod p_i, j ≤ i
    prefix_mod_p: Vec<Vec<u64>>,
    // prefix_mod_q[j] = (p_0 ⋯ p_{j-1}) mod q
    prefix_mod_q: Vec<u64>,
    q: u64,
}

impl Garner {
    fn new(primes: &[u64], q: u64) -> Self {
        let k = primes.len();
        let mut prefix_mod_p = Vec::with_capacity(k);
        let mut inv = Vec::with_capacity(k);
        for i in 0..k {
            let pi = primes[i];
            let mut row = Vec::with_capacity(i + 1);
            let mut acc = 1 % pi;
            row.push(acc);
            for &pj in &primes[..i] {
                acc = mul_mod(acc, pj, pi);
                row.push(acc);
            }
            inv.push(pow_mod(acc, pi - 2, pi));
            prefix_mod_p.push(row);
        }
        let mut prefix_mod_q = Vec::with_capacity(k);
        let mut acc = 1 % q;
        for &p in primes {
            prefix_mod_q.push(acc);
            acc = mul_mod(acc, p % q, q);
        }
        Garner {
            primes: primes.to_vec(),
            inv,
            prefix_mod_p,
            prefix_mod_q,
            q,
        }
    }

    fn combine(&self, residues: &[u64], digits: &mut Vec<u64>) -> u64 {
        digits.clear();
        for (i, &r) in residues.iter().enumerate() {
            let pi = self.primes[i];
            // value of the mixed-radix prefix modulo p_i
            let mut partial = 0u64;
            for (j, &d) in digits.iter().enumerate() {
                partial = (partial + mul_mod(d, self.prefix_mod_p[i][j], pi)) % pi;
            }
            let diff = (r + pi - partial) % pi;
            digits.push(mul_mod(diff, self.inv[i], pi));
        }
        let mut out = 0u64;
        for (j, &d) in digits.iter().enumerate() {
            out = (out + mul_mod(d % self.q, self.prefix_mod_q[j], self.q)) % self.q;
        }
        out
    }
}

/// Product of `a` and `b` (coefficients in `[0, q)`) modulo `q`, truncated to
/// `out_len` coefficients. Passing `b = None` squares `a`.
pub fn convolve_mod(a: &[u64], b: Option<&[u64]>, out_len: usize, q: u64) -> Result<Vec<u64>> {
    let b_len = b.map_or(a.len(), |b| b.len());
    if a.is_empty() || b_len == 0 || out_len == 0 {
        return Ok(vec![0; out_len]);
    }
    let full = a.len() + b_len - 1;
    let out_len_eff = out_len.min(full);
    // Inputs beyond out_len cannot contribute to the kept coefficients.
    let a = &a[..a.len().min(out_len_eff)];
    let b = b.map(|b| &b[..b.len().min(out_len_eff)]);
    let b_len = b.map_or(a.len(), |b| b.len());
    let needed = (a.len() + b_len - 1).min(out_len_eff.max(1));
    let size = (a.len() + b_len - 1).next_power_of_two();
    if size > MAX_TRANSFORM_LEN {
        return Err(Error::guard("NTT transform length", size as u64, MAX_TRANSFORM_LEN as u64));
    }
    let k = primes_needed(a.len().min(b_len), q)?;
    let primes = &ntt_primes()[..k];
    let per_prime: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&prime| convolve_one(a, b, needed, size, prime))
        .collect();

    let garner = Garner::new(&NTT_PRIMES[..k], q);
    let mut out = vec![0u64; out_len];
    out[..needed]
        .par_chunks_mut(1 << 14)
        .enumerate()
        .for_each(|(chunk_idx, chunk)| {
            let base = chunk_idx << 14;
            let mut residues = vec![0u64; k];
            let mut digits = Vec::with_capacity(k);
            for (off, slot) in chunk.iter_mut().enumerate() {
                for (r, col) in residues.iter_mut().zip(&per_prime) {
                    *r = col[base + off];
                }
                *slot = garner.combine(&residues, &mut digits);
            }
        });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::is_prime;

    fn naive(a: &[u64], b: &[u64], out_len: usize, q: u64) -> Vec<u64> {
        let mut out = vec![0u128; out_len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < out_len {
                    out[i + j] = (out[i + j] + x as u128 * y as u128) % q as u128;
                }
            }
        }
        out.into_iter().map(|x| x as u64).collect()
    }

    #[test]
    fn auxiliary_primes_have_the_right_shape() {
        for &p in &NTT_PRIMES {
            assert!(is_prime(p));
            assert_eq!((p - 1) % (1 << 25), 0);
            assert!(p < 1 << 31);
        }
        for pr in ntt_primes() {
            assert_eq!(pow_mod(pr.generator, (pr.p - 1) / 2, pr.p), pr.p - 1);
        }
    }

    #[test]
    fn roundtrip_transform() {
        let prime = ntt_primes()[0];
        let orig: Vec<u64> = (0..64u64).map(|i| i * i * 7 + 3).collect();
        let mut a = orig.clone();
        transform(&mut a, prime, false);
        transform(&mut a, prime, true);
        assert_eq!(a, orig);
    }

    #[test]
    fn matches_naive_for_many_moduli() {
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for q in [2u64, 5, 8, 691, 2187, 1 << 31, 4_611_686_018_427_387_847, 1 << 62] {
            for (la, lb, out) in [(1, 1, 1), (3, 5, 7), (100, 37, 90), (257, 300, 600)] {
                let a: Vec<u64> = (0..la).map(|_| next() % q).collect();
                let b: Vec<u64> = (0..lb).map(|_| next() % q).collect();
                let got = convolve_mod(&a, Some(&b), out, q).unwrap();
                assert_eq!(got, naive(&a, &b, out, q), "q={q} la={la} lb={lb}");
                let sq = convolve_mod(&a, None, out, q).unwrap();
                assert_eq!(sq, naive(&a, &a, out, q));
            }
        }
    }

    #[test]
    fn prime_count_grows_with_modulus() {
        assert_eq!(primes_needed(1 << 20, 23).unwrap(), 1);
        assert_eq!(primes_needed(1 << 20, 2187).unwrap(), 2);
        assert!(primes_needed(1 << 24, 1 << 62).unwrap() <= NTT_PRIMES.len());
    }
}
