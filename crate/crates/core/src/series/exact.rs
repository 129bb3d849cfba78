//! Big-integer q-expansions for small precisions, used as an oracle for the
//! modular path and for sign/positivity checks that congruences cannot see.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{eta_cubed_exponents, EigenformSpec};
use crate::error::{Error, Result};
use crate::modring::PrimePower;

pub const MAX_EXACT_PRECISION: usize = 10_000;

/// Integer coefficients `a(0..=X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSeries {
    coeffs: Vec<BigInt>,
}

impl ExactSeries {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Reduction modulo `q` into canonical residues.
    pub fn reduce(&self, modulus: PrimePower) -> Vec<u64> {
        let q = BigInt::from(modulus.q());
        self.coeffs
            .iter()
            .map(|c| {
                let r = ((c % &q) + &q) % &q;
                u64::try_from(r).expect("residue below q")
            })
            .collect()
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactSeries { coeffs: out }
    }
}

fn check_precision(precision: usize) -> Result<()> {
    if precision > MAX_EXACT_PRECISION {
        return Err(Error::guard(
            "exact-mode precision",
            precision as u64,
            MAX_EXACT_PRECISION as u64,
        ));
    }
    Ok(())
}

/// Integer `E4` or `E6` to precision `X`.
pub fn eisenstein_exact(weight: u32, precision: usize) -> Result<ExactSeries> {
    check_precision(precision)?;
    let (r, scale): (u32, i64) = match weight {
        4 => (3, 240),
        6 => (5, -504),
        w => return Err(Error::InvalidArgument(format!("Eisenstein weight {w} (expected 4 or 6)"))),
    };
    // σ_5(n) < 2^128 comfortably for n ≤ 10^4.
    let mut sigma = vec![0u128; precision + 1];
    for d in 1..=precision {
        let dr = (d as u128).pow(r);
        for j in (d..=precision).step_by(d) {
            sigma[j] += dr;
        }
    }
    let mut coeffs: Vec<BigInt> = sigma.into_iter().map(|s| BigInt::from(s) * scale).collect();
    coeffs[0] = BigInt::from(1);
    Ok(ExactSeries { coeffs })
}

/// Integer `Δ` to precision `X`, as `q` times the eighth power of the sparse
/// `∏(1 - q^n)^3`.
pub fn delta_exact(precision: usize) -> Result<ExactSeries> {
    check_precision(precision)?;
    let mut coeffs = vec![BigInt::zero(); precision + 1];
    if precision == 0 {
        return Ok(ExactSeries { coeffs });
    }
    let eta3 = eta_cubed_exponents(precision - 1);
    let mut acc = vec![BigInt::zero(); precision];
    acc[0] = BigInt::from(1);
    for _ in 0..8 {
        let mut next = vec![BigInt::zero(); precision];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(e, c) in &eta3.terms {
                if i + e >= precision {
                    break;
                }
                next[i + e] += a * c;
            }
        }
        acc = next;
    }
    coeffs[1..].clone_from_slice(&acc);
    Ok(ExactSeries { coeffs })
}

/// Integer coefficients of the normalised eigenform; precision at most
/// [`MAX_EXACT_PRECISION`].
pub fn eigenform_exact(spec: EigenformSpec, precision: usize) -> Result<ExactSeries> {
    if precision < 2 {
        return Err(Error::InvalidArgument(format!(
            "eigenform precision must be at least 2, got {precision}"
        )));
    }
    let (e4_pow, e6_pow) = spec.recipe();
    let mut f = delta_exact(precision)?;
    if e4_pow > 0 {
        let e4 = eisenstein_exact(4, precision)?;
        for _ in 0..e4_pow {
            f = f.mul(&e4);
        }
    }
    if e6_pow > 0 {
        let e6 = eisenstein_exact(6, precision)?;
        for _ in 0..e6_pow {
            f = f.mul(&e6);
        }
    }
    Ok(f)
}
