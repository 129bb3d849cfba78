//! Truncated q-expansions of the level-one Hecke eigenforms of weights 12, 16,
//! 18, 20, 22 and 26, reduced modulo a prime power.
//!
//! Each of these weights has a one-dimensional cusp space, so the normalised
//! eigenform is `Δ · E4^a · E6^b` for the unique `(a, b)` of the right weight.
//! `Δ = q ∏(1 - q^n)^24` is built from the sparse Jacobi expansion of
//! `∏(1 - q^n)^3`, one sparse squaring and two dense squarings.
//!
//! A series of precision `X` stores the coefficients `a(0), …, a(X)`.

mod cache;
mod exact;
pub mod ntt;

use serde::{Deserialize, Serialize};

pub use self::cache::{eigenform_coeffs_cached, CoefficientCache, CACHE_DIR_ENV};
pub use self::exact::{eigenform_exact, eisenstein_exact, ExactSeries, MAX_EXACT_PRECISION};
use crate::error::{Error, Result};
use crate::modring::{mul_mod, pow_mod, PrimePower};

/// Below this length the schoolbook product beats the transforms.
const NAIVE_CUTOFF: usize = 64;

/// A truncated power series with coefficients in `Z/qZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesModQ {
    modulus: PrimePower,
    coeffs: Vec<u64>,
}

impl SeriesModQ {
    /// Builds a series of precision `coeffs.len() - 1`, reducing every entry.
    pub fn new(modulus: PrimePower, mut coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a(0)");
        let q = modulus.q();
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        SeriesModQ { modulus, coeffs }
    }

    pub fn from_signed(modulus: PrimePower, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| modulus.reduce(c as i128)).collect();
        SeriesModQ { modulus, coeffs }
    }

    pub fn zero(modulus: PrimePower, precision: usize) -> Self {
        SeriesModQ {
            modulus,
            coeffs: vec![0; precision + 1],
        }
    }

    pub fn one(modulus: PrimePower, precision: usize) -> Self {
        let mut s = Self::zero(modulus, precision);
        s.coeffs[0] = 1 % modulus.q();
        s
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    /// The truncation order `X`.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// `a(n)`; panics if `n > X`.
    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs[n]
    }

    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision <= self.precision());
        SeriesModQ {
            modulus: self.modulus,
            coeffs: self.coeffs[..=precision].to_vec(),
        }
    }

    /// Multiplies by `q^k`, keeping the precision.
    pub fn shift(&self, k: usize) -> Self {
        let x = self.precision();
        let mut coeffs = vec![0; x + 1];
        if k <= x {
            coeffs[k..].copy_from_slice(&self.coeffs[..=x - k]);
        }
        SeriesModQ {
            modulus: self.modulus,
            coeffs,
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let q = self.modulus.q();
        let c = self.modulus.reduce(c as i128);
        SeriesModQ {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, q)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_compatible(self, other)?;
        let q = self.modulus.q();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| if a >= b { a - b } else { a + q - b })
            .collect();
        Ok(SeriesModQ {
            modulus: self.modulus,
            coeffs,
        })
    }
}

fn check_compatible(a: &SeriesModQ, b: &SeriesModQ) -> Result<()> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch(a.modulus.q(), b.modulus.q()));
    }
    if a.coeffs.len() != b.coeffs.len() {
        return Err(Error::LengthMismatch(a.precision(), b.precision()));
    }
    Ok(())
}

/// Truncated product, quasi-linear in `X`.
pub fn series_mul(a: &SeriesModQ, b: &SeriesModQ) -> Result<SeriesModQ> {
    check_compatible(a, b)?;
    if a.coeffs.len() <= NAIVE_CUTOFF {
        return series_mul_naive(a, b);
    }
    let q = a.modulus.q();
    let n = a.coeffs.len();
    let coeffs = if std::ptr::eq(a, b) || a.coeffs == b.coeffs {
        ntt::convolve_mod(&a.coeffs, None, n, q)?
    } else {
        ntt::convolve_mod(&a.coeffs, Some(&b.coeffs), n, q)?
    };
    Ok(SeriesModQ {
        modulus: a.modulus,
        coeffs,
    })
}

/// Schoolbook `O(X²)` product; the reference for [`series_mul`].
pub fn series_mul_naive(a: &SeriesModQ, b: &SeriesModQ) -> Result<SeriesModQ> {
    check_compatible(a, b)?;
    let q = a.modulus.q() as u128;
    let n = a.coeffs.len();
    let mut acc = vec![0u128; n];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs[..n - i].iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u128 * y as u128) % q;
        }
    }
    Ok(SeriesModQ {
        modulus: a.modulus,
        coeffs: acc.into_iter().map(|c| c as u64).collect(),
    })
}

/// A series with few nonzero integer coefficients, stored as
/// `(exponent, coefficient)` pairs in increasing exponent order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSeries {
    pub precision: usize,
    pub terms: Vec<(usize, i64)>,
}

impl SparseSeries {
    pub fn coeff(&self, n: usize) -> i64 {
        self.terms
            .binary_search_by_key(&n, |&(e, _)| e)
            .map_or(0, |i| self.terms[i].1)
    }

    /// Square of a sparse series as a dense series modulo `q`.
    pub fn square_mod(&self, modulus: PrimePower) -> SeriesModQ {
        let q = modulus.q();
        let x = self.precision;
        let reduced: Vec<(usize, u64)> = self
            .terms
            .iter()
            .map(|&(e, c)| (e, modulus.reduce(c as i128)))
            .collect();
        let mut coeffs = vec![0u64; x + 1];
        for (i, &(e1, c1)) in reduced.iter().enumerate() {
            for &(e2, c2) in &reduced[i..] {
                let e = e1 + e2;
                if e > x {
                    break;
                }
                let mut t = mul_mod(c1, c2, q);
                if e1 != e2 {
                    t = (t * 2) % q;
                }
                coeffs[e] = (coeffs[e] + t) % q;
            }
        }
        SeriesModQ { modulus, coeffs }
    }
}

/// `∏_{n≥1} (1 - q^n)^3 = Σ_{k≥0} (-1)^k (2k+1) q^{k(k+1)/2}`, truncated at `X`.
pub fn eta_cubed_exponents(precision: usize) -> SparseSeries {
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e > precision {
            break;
        }
        let c = (2 * k + 1) as i64;
        terms.push((e, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    SparseSeries { precision, terms }
}

/// `σ_r(n) mod q` for `0 ≤ n ≤ X` by a divisor sieve (`σ_r(0)` is set to 0).
pub fn divisor_sums_mod(r: u32, precision: usize, q: u64) -> Vec<u64> {
    let mut sigma = vec![0u64; precision + 1];
    for d in 1..=precision {
        let dr = pow_mod(d as u64, r as u64, q);
        if dr == 0 {
            continue;
        }
        let mut j = d;
        while j <= precision {
            let s = sigma[j] + dr;
            sigma[j] = if s >= q { s - q } else { s };
            j += d;
        }
    }
    sigma
}

/// `E4 = 1 + 240 Σ σ3(n) q^n` or `E6 = 1 - 504 Σ σ5(n) q^n` modulo `q`.
pub fn eisenstein(weight: u32, precision: usize, modulus: PrimePower) -> Result<SeriesModQ> {
    let (r, scale): (u32, i64) = match weight {
        4 => (3, 240),
        6 => (5, -504),
        w => return Err(Error::InvalidArgument(format!("Eisenstein weight {w} (expected 4 or 6)"))),
    };
    let q = modulus.q();
    let c = modulus.reduce(scale as i128);
    let mut coeffs = divisor_sums_mod(r, precision, q);
    for a in coeffs.iter_mut() {
        *a = mul_mod(*a, c, q);
    }
    coeffs[0] = 1 % q;
    Ok(SeriesModQ { modulus, coeffs })
}

/// `Δ = q ∏(1 - q^n)^24` modulo `q`.
pub fn delta(precision: usize, modulus: PrimePower) -> Result<SeriesModQ> {
    if precision == 0 {
        return Ok(SeriesModQ::zero(modulus, 0));
    }
    // ∏(1-q^n)^24 is only needed to precision X-1 before the shift.
    let eta6 = eta_cubed_exponents(precision - 1).square_mod(modulus);
    let eta12 = series_mul(&eta6, &eta6)?;
    let eta24 = series_mul(&eta12, &eta12)?;
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.push(0);
    coeffs.extend_from_slice(eta24.coeffs());
    Ok(SeriesModQ { modulus, coeffs })
}

/// Weights whose level-one cusp space is one-dimensional.
pub const SUPPORTED_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// The normalised eigenform of a supported weight, described by its product
/// recipe `Δ · E4^a · E6^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EigenformSpec {
    weight: u32,
}

impl EigenformSpec {
    pub fn new(weight: u32) -> Result<Self> {
        if SUPPORTED_WEIGHTS.contains(&weight) {
            Ok(EigenformSpec { weight })
        } else {
            Err(Error::UnsupportedWeight(weight))
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Exponents `(a, b)` of `E4` and `E6` multiplying `Δ`.
    pub fn recipe(&self) -> (u32, u32) {
        match self.weight {
            12 => (0, 0),
            16 => (1, 0),
            18 => (0, 1),
            20 => (2, 0),
            22 => (1, 1),
            26 => (2, 1),
            _ => unreachable!("weight validated at construction"),
        }
    }
}

/// Coefficients `a(0..=X)` of the normalised eigenform modulo `q`.
pub fn eigenform_coeffs(spec: EigenformSpec, precision: usize, modulus: PrimePower) -> Result<SeriesModQ> {
    if precision < 2 {
        return Err(Error::InvalidArgument(format!(
            "eigenform precision must be at least 2, got {precision}"
        )));
    }
    let (e4_pow, e6_pow) = spec.recipe();
    let mut f = delta(precision, modulus)?;
    if e4_pow > 0 {
        let e4 = eisenstein(4, precision, modulus)?;
        for _ in 0..e4_pow {
            f = series_mul(&f, &e4)?;
        }
    }
    if e6_pow > 0 {
        let e6 = eisenstein(6, precision, modulus)?;
        for _ in 0..e6_pow {
            f = series_mul(&f, &e6)?;
        }
    }
    Ok(f)
}
