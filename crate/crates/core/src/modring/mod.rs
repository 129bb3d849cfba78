//! Residue rings `Z/ℓ^m Z`, ℓ-adic valuations, multiplicative orders and
//! exact rationals.
//!
//! Residues are kept as canonical `u64` representatives below `q ≤ 2^62`,
//! so a product of two residues always fits in a `u128` before reduction.

mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use self::rational::ExactRational;
use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimePower`].
pub const MAX_MODULUS: u64 = 1 << 62;

#[inline]
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// `base^exp mod q` by square-and-multiply. `pow_mod(_, 0, 1)` is 0.
pub fn pow_mod(base: u64, mut exp: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let mut base = base % q;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in
/// increasing order. Only used on small inputs such as `ℓ - 1`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `min(ν_ℓ(x), cap)`; zero (and anything divisible by `ℓ^cap`) maps to `cap`.
pub fn val_ell(x: i128, ell: u64, cap: u32) -> u32 {
    debug_assert!(ell >= 2);
    let ell = ell as u128;
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while v < cap {
        if x == 0 || x % ell != 0 {
            return if x == 0 { cap } else { v };
        }
        x /= ell;
        v += 1;
    }
    cap
}

/// A prime power `q = ℓ^m` with `q ≤ 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    ell: u64,
    m: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(ell: u64, m: u32) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if m == 0 {
            return Err(Error::ZeroExponent(m));
        }
        let q = ell
            .checked_pow(m)
            .filter(|&q| q <= MAX_MODULUS)
            .ok_or(Error::ModulusTooLarge { ell, m })?;
        Ok(PrimePower { ell, m, q })
    }

    /// The prime `ℓ` itself as a modulus.
    pub fn prime(ell: u64) -> Result<Self> {
        Self::new(ell, 1)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `ℓ^j` for `j ≤ m`.
    pub fn ell_pow(&self, j: u32) -> u64 {
        assert!(j <= self.m, "ℓ^{j} exceeds modulus ℓ^{}", self.m);
        self.ell.pow(j)
    }

    pub fn phi(&self) -> u64 {
        self.q / self.ell * (self.ell - 1)
    }

    pub fn is_unit(&self, x: u64) -> bool {
        x % self.ell != 0
    }

    /// Canonical representative of a signed integer.
    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.q as i128) as u64
    }

    pub fn residue(&self, x: i128) -> Residue {
        Residue {
            value: self.reduce(x),
            modulus: *self,
        }
    }

    /// The units `1 ≤ u < q` with `ℓ ∤ u`, in increasing order.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.q).filter(move |u| u % self.ell != 0)
    }

    /// Same prime, exponent `m + 1`.
    pub fn next_level(&self) -> Result<Self> {
        Self::new(self.ell, self.m + 1)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "{}", self.ell)
        } else {
            write!(f, "{}^{}", self.ell, self.m)
        }
    }
}

pub fn euler_phi(q: &PrimePower) -> u64 {
    q.phi()
}

/// An element of `Z/qZ` in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: PrimePower,
}

impl Residue {
    pub fn new(value: u64, modulus: PrimePower) -> Self {
        Residue {
            value: value % modulus.q,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    pub fn is_unit(&self) -> bool {
        self.modulus.is_unit(self.value)
    }

    pub fn pow(self, exp: u64) -> Self {
        Residue {
            value: pow_mod(self.value, exp, self.modulus.q),
            modulus: self.modulus,
        }
    }

    /// Multiplicative order; see [`mult_order`].
    pub fn order(&self) -> Result<u64> {
        mult_order(self)
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic across different moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.q)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        let q = self.modulus.q;
        let s = self.value + rhs.value;
        Residue {
            value: if s >= q { s - q } else { s },
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let q = self.modulus.q;
        Residue {
            value: (q - self.value) % q,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check(&rhs);
        Residue {
            value: mul_mod(self.value, rhs.value, self.modulus.q),
            modulus: self.modulus,
        }
    }
}

/// Smallest `r ≥ 1` with `u^r ≡ 1 (mod q)`.
///
/// Starts from `φ(q)` and strips prime factors while the power stays 1.
pub fn mult_order(u: &Residue) -> Result<u64> {
    let modulus = u.modulus;
    if !u.is_unit() {
        return Err(Error::NotUnit {
            value: u.value,
            q: modulus.q,
        });
    }
    let q = modulus.q;
    let mut factors = factorize(modulus.ell - 1);
    if modulus.m > 1 {
        factors.push((modulus.ell, modulus.m - 1));
    }
    let mut order = modulus.phi();
    for (p, e) in factors {
        for _ in 0..e {
            if pow_mod(u.value, order / p, q) == 1 {
                order /= p;
            } else {
                break;
            }
        }
    }
    Ok(order)
}
