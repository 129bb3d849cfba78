//! Exact counts of `E_{ℓ^m,t,d} = {A ∈ GL₂(Z/ℓ^m) : tr A = t, det A = d}`.
//!
//! Fix the top-left entry `x = a`. Then the bottom-right entry is `t - a` and
//! the off-diagonal pair must satisfy `yz ≡ -(a² - at + d)`. If that
//! right-hand side has valuation `j < m` there are `(j+1)·φ(ℓ^m)` pairs, and
//! if it vanishes there are `m·φ(ℓ^m) + ℓ^m`. So the whole count only depends
//! on the valuation histogram of `a² - at + d` over `a mod ℓ^m`, the
//! [`ZProfile`].

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{mul_mod, PrimePower};

/// Largest modulus for which profiles are computed by direct evaluation.
pub const MAX_PROFILE_MODULUS: u64 = 1 << 24;

/// Largest `ℓ^{4m}` the exhaustive enumeration will visit.
pub const MAX_BRUTE_MATRICES: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Formula,
    Brute,
}

/// Valuation histogram of `a² - at + d`: `counts[j]` for `j < m` is the
/// number of `a` with valuation exactly `j`, and `counts[m]` the number of
/// roots modulo `ℓ^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZProfile {
    pub modulus: PrimePower,
    pub t: u64,
    pub d: u64,
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDetCount {
    pub modulus: PrimePower,
    pub t: u64,
    pub d: u64,
    pub count: u128,
    pub method: CountMethod,
}

fn check_unit(modulus: &PrimePower, d: u64) -> Result<u64> {
    let d = d % modulus.q();
    if !modulus.is_unit(d) {
        return Err(Error::NotUnit {
            value: d,
            q: modulus.q(),
        });
    }
    Ok(d)
}

fn check_profile_size(modulus: &PrimePower) -> Result<()> {
    if modulus.q() > MAX_PROFILE_MODULUS {
        return Err(Error::guard("z-profile modulus", modulus.q(), MAX_PROFILE_MODULUS));
    }
    Ok(())
}

/// Valuation of a residue in `[0, q)`, capped at `m`.
#[inline]
fn residue_val(mut x: u64, ell: u64, m: u32) -> u32 {
    if x == 0 {
        return m;
    }
    let mut v = 0;
    while x % ell == 0 {
        x /= ell;
        v += 1;
    }
    v
}

pub fn z_profile(modulus: &PrimePower, t: u64, d: u64) -> Result<ZProfile> {
    let d = check_unit(modulus, d)?;
    check_profile_size(modulus)?;
    let (q, ell, m) = (modulus.q(), modulus.ell(), modulus.m());
    let t = t % q;
    let mut counts = vec![0u64; m as usize + 1];
    for a in 0..q {
        // a² - a·t + d mod q
        let a2 = mul_mod(a, a, q);
        let at = mul_mod(a, t, q);
        let v = (a2 + (q - at) + d) % q;
        counts[residue_val(v, ell, m) as usize] += 1;
    }
    Ok(ZProfile {
        modulus: *modulus,
        t,
        d,
        counts,
    })
}

/// Number of `(y, z)` with `yz ≡ c` when `ν(c) = j` (`j = m` meaning `c ≡ 0`).
fn pair_weight(modulus: &PrimePower, j: u32) -> u128 {
    let phi = modulus.phi() as u128;
    if j < modulus.m() {
        (j as u128 + 1) * phi
    } else {
        modulus.m() as u128 * phi + modulus.q() as u128
    }
}

impl ZProfile {
    /// `Σ_{j<m} (j+1)·z[j]·φ(ℓ^m) + z[m]·(m·φ(ℓ^m) + ℓ^m)`.
    pub fn matrix_count(&self) -> u128 {
        self.counts
            .iter()
            .enumerate()
            .map(|(j, &z)| z as u128 * pair_weight(&self.modulus, j as u32))
            .sum()
    }

    /// `z[j] ≤ 16·ℓ^{m - j/2}` for every `j`, checked as
    /// `z[j]² ≤ 256·ℓ^{2m - j}`.
    pub fn satisfies_bound(&self) -> bool {
        let ell = BigUint::from(self.modulus.ell());
        let m = self.modulus.m();
        self.counts.iter().enumerate().all(|(j, &z)| {
            let lhs = BigUint::from(z) * z;
            let rhs = ell.pow(2 * m - j as u32) * 256u32;
            lhs <= rhs
        })
    }

    pub fn to_csv_row(&self) -> String {
        self.counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `#E_{ℓ^m,t,d}` from the valuation profile, in `O(ℓ^m)` time.
pub fn count_trace_det(modulus: &PrimePower, t: u64, d: u64) -> Result<TraceDetCount> {
    let profile = z_profile(modulus, t, d)?;
    Ok(TraceDetCount {
        modulus: *modulus,
        t: profile.t,
        d: profile.d,
        count: profile.matrix_count(),
        method: CountMethod::Formula,
    })
}

fn check_brute_size(modulus: &PrimePower) -> Result<()> {
    let total = (modulus.q() as u128).pow(4);
    if total > MAX_BRUTE_MATRICES as u128 {
        return Err(Error::guard("matrices to enumerate", total, MAX_BRUTE_MATRICES));
    }
    Ok(())
}

/// `#E_{ℓ^m,t,d}` by visiting every 2×2 matrix modulo `ℓ^m`.
pub fn count_trace_det_brute(modulus: &PrimePower, t: u64, d: u64) -> Result<TraceDetCount> {
    let d = check_unit(modulus, d)?;
    check_brute_size(modulus)?;
    let q = modulus.q();
    let t = t % q;
    let mut count = 0u128;
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let yz = y * z % q;
                for w in 0..q {
                    let det = (x * w % q + q - yz) % q;
                    if (x + w) % q == t && det == d && modulus.is_unit(det) {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(TraceDetCount {
        modulus: *modulus,
        t,
        d,
        count,
        method: CountMethod::Brute,
    })
}

/// Every invertible matrix modulo `ℓ^m` bucketed by `(trace, det)`:
/// entry `t·q + d` holds `#E_{ℓ^m,t,d}` (zero for non-unit `d`).
pub fn trace_det_histogram_brute(modulus: &PrimePower) -> Result<Vec<u64>> {
    check_brute_size(modulus)?;
    let q = modulus.q() as usize;
    let mut hist = vec![0u64; q * q];
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let yz = y * z % q;
                for w in 0..q {
                    let det = (x * w % q + q - yz) % q;
                    if modulus.is_unit(det as u64) {
                        hist[((x + w) % q) * q + det] += 1;
                    }
                }
            }
        }
    }
    Ok(hist)
}

/// `#E_{ℓ^m,t,d}` for all traces `t` at once, for a fixed unit `d`, in
/// `O(m·ℓ^m)`.
///
/// For non-units `a`, `a² - at + d` is a unit. For units `a` it equals
/// `a·(c_a - t)` with `c_a = a + d/a`, so its valuation is `ν(c_a - t)`.
/// Counting how many `c_a` agree with `t` modulo each `ℓ^j` gives the
/// profile for every `t` simultaneously.
pub fn trace_counts_for_det(modulus: &PrimePower, d: u64) -> Result<Vec<u128>> {
    let d = check_unit(modulus, d)?;
    check_profile_size(modulus)?;
    let (q, ell, m) = (modulus.q(), modulus.ell(), modulus.m());
    let qs = q as usize;
    let mut hist = vec![0u64; qs];
    for a in 1..q {
        if a % ell == 0 {
            continue;
        }
        let inv = crate::modring::pow_mod(a, modulus.phi() - 1, q);
        let c = (a + mul_mod(d, inv, q)) % q;
        hist[c as usize] += 1;
    }
    // at_least[j][r] = #{a unit : c_a ≡ r mod ℓ^j}
    let mut at_least: Vec<Vec<u64>> = Vec::with_capacity(m as usize + 1);
    at_least.push(vec![q - q / ell]);
    for j in 1..=m {
        let lj = ell.pow(j) as usize;
        let mut folded = vec![0u64; lj];
        for (c, &h) in hist.iter().enumerate() {
            folded[c % lj] += h;
        }
        at_least.push(folded);
    }
    let non_units = (q / ell) as u128;
    let base = non_units * pair_weight(modulus, 0);
    let mut out = Vec::with_capacity(qs);
    for t in 0..qs {
        let mut total = base;
        for j in 0..=m {
            let ge_j = at_least[j as usize][t % at_least[j as usize].len()];
            let exact = if j < m {
                ge_j - at_least[j as usize + 1][t % at_least[j as usize + 1].len()]
            } else {
                ge_j
            };
            total += exact as u128 * pair_weight(modulus, j);
        }
        out.push(total);
    }
    Ok(out)
}

/// See [`ZProfile::satisfies_bound`].
pub fn z_bound_check(modulus: &PrimePower, t: u64, d: u64) -> Result<bool> {
    Ok(z_profile(modulus, t, d)?.satisfies_bound())
}
