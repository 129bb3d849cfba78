//! Degree bookkeeping for the cyclotomic layer cut out by the determinant of
//! the mod-`ℓ^m` representation attached to an eigenform of weight `k`.
//!
//! With `r_{ℓ^m} = gcd(k-1, φ(ℓ^m))`, the layer `A_{ℓ^m} ⊆ Q(ζ_{ℓ^m})` has
//! degree `φ(ℓ^m)/r_{ℓ^m}`. The generic image is the full group
//! `{A ∈ GL₂(Z/ℓ^m) : det A ∈ (units)^{k-1}}`, and the compositum with
//! `Q(ζ_{ℓ^m})` has degree `|SL₂(Z/ℓ^m)|·φ(ℓ^m)`.
//!
//! All functions take the weight `k` of the elliptic form.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{gcd, val_ell, PrimePower};

fn check_weight(k: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("weight k must be at least 2, got {k}")));
    }
    Ok(())
}

/// `gcd(k - 1, φ(ℓ^m))`.
pub fn r_lm(k: u64, ell: u64, m: u32) -> Result<u64> {
    check_weight(k)?;
    let q = PrimePower::new(ell, m)?;
    Ok(gcd(k - 1, q.phi()))
}

/// `[A_{ℓ^m} : Q] = φ(ℓ^m) / r_{ℓ^m}`.
pub fn degree_a(k: u64, ell: u64, m: u32) -> Result<u64> {
    let q = PrimePower::new(ell, m)?;
    Ok(q.phi() / r_lm(k, ell, m)?)
}

/// `[A_{ℓ^{m+1}} : A_{ℓ^m}] = ℓ · r_{ℓ^m} / r_{ℓ^{m+1}}`, which is 1 or `ℓ`.
pub fn tower_index(k: u64, ell: u64, m: u32) -> Result<u64> {
    let lower = r_lm(k, ell, m)?;
    let upper = r_lm(k, ell, m + 1)?;
    Ok(ell * lower / upper)
}

/// `|SL₂(Z/ℓ^m Z)| = ℓ^{3(m-1)} · ℓ(ℓ² - 1)`.
pub fn sl2_order(q: &PrimePower) -> BigUint {
    let ell = BigUint::from(q.ell());
    let base = &ell * (&ell * &ell - 1u32);
    base * ell.pow(3 * (q.m() - 1))
}

/// `|GL₂(Z/ℓ^m Z)| = |SL₂| · φ(ℓ^m)`.
pub fn gl2_order(q: &PrimePower) -> BigUint {
    sl2_order(q) * q.phi()
}

/// Order of `{A ∈ GL₂(Z/ℓ^m) : det A ∈ ((Z/ℓ^m)^×)^{k-1}}`.
pub fn generic_image_size(k: u64, ell: u64, m: u32) -> Result<BigUint> {
    let q = PrimePower::new(ell, m)?;
    let r = r_lm(k, ell, m)?;
    Ok(sl2_order(&q) * (q.phi() / r))
}

/// Generic `[L_{ℓ^m} : Q] = |SL₂(Z/ℓ^m)| · φ(ℓ^m)`, taking `Ã_{ℓ^m} = A_{ℓ^m}`.
pub fn generic_l_degree(k: u64, ell: u64, m: u32) -> Result<BigUint> {
    check_weight(k)?;
    let q = PrimePower::new(ell, m)?;
    Ok(gl2_order(&q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevel {
    pub m: u32,
    pub r: u64,
    pub deg_a: u64,
    /// `[A_{ℓ^{m+1}} : A_{ℓ^m}]`
    pub index: u64,
    pub image_size: BigUint,
    pub l_degree: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub k: u64,
    pub ell: u64,
    pub up_to_m: u32,
    pub levels: Vec<TowerLevel>,
    /// `[Ã_{ℓ^m} : A_{ℓ^m}]` is taken to be 1 but is only known to divide
    /// into at most `r_{ℓ^m} ≤ k - 1`; this records `k - 1`.
    pub atilde_index_bound: u64,
}

pub fn tower_report(k: u64, ell: u64, up_to_m: u32) -> Result<TowerReport> {
    check_weight(k)?;
    if up_to_m == 0 {
        return Err(Error::ZeroExponent(0));
    }
    // index at the top level needs ℓ^{up_to_m + 1}
    PrimePower::new(ell, up_to_m + 1)?;
    let levels = (1..=up_to_m)
        .map(|m| {
            Ok(TowerLevel {
                m,
                r: r_lm(k, ell, m)?,
                deg_a: degree_a(k, ell, m)?,
                index: tower_index(k, ell, m)?,
                image_size: generic_image_size(k, ell, m)?,
                l_degree: generic_l_degree(k, ell, m)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TowerReport {
        k,
        ell,
        up_to_m,
        levels,
        atilde_index_bound: k - 1,
    })
}

impl TowerReport {
    pub const CSV_HEADER: &'static str = "m,r,deg_A,index,image_size,L_degree";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for l in &self.levels {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                l.m, l.r, l.deg_a, l.index, l.image_size, l.l_degree
            );
        }
        out
    }

    /// `deg_A(m+1) = deg_A(m) · index(m)` across the table, and the index is
    /// 1 exactly for `m ≤ ν_ℓ(k-1)`.
    pub fn is_consistent(&self) -> bool {
        let nu = val_ell((self.k - 1) as i128, self.ell, 64);
        let steps_ok = self
            .levels
            .windows(2)
            .all(|w| w[1].deg_a == w[0].deg_a * w[0].index);
        let index_ok = self
            .levels
            .iter()
            .all(|l| (l.index == 1) == (l.m <= nu) && (l.index == 1 || l.index == self.ell));
        steps_ok && index_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::small_primes;

    /// Brute-force `(|SL₂(F_ℓ)|, |{A : det A ∈ (F_ℓ^×)^{k-1}}|)`.
    fn brute_gl2(k: u64, ell: u64) -> (u64, u64) {
        let powers: Vec<bool> = {
            let mut is_power = vec![false; ell as usize];
            for u in 1..ell {
                is_power[crate::modring::pow_mod(u, k - 1, ell) as usize] = true;
            }
            is_power
        };
        let (mut sl, mut img) = (0, 0);
        for a in 0..ell {
            for b in 0..ell {
                for c in 0..ell {
                    for d in 0..ell {
                        let det = (a * d + ell * ell - b * c) % ell;
                        if det == 1 {
                            sl += 1;
                        }
                        if det != 0 && powers[det as usize] {
                            img += 1;
                        }
                    }
                }
            }
        }
        (sl, img)
    }

    #[test]
    fn r_values() {
        assert_eq!(r_lm(12, 23, 1).unwrap(), 11);
        assert_eq!(r_lm(12, 5, 1).unwrap(), 1);
        assert_eq!(r_lm(12, 11, 2).unwrap(), 11);
        assert!(r_lm(1, 5, 1).is_err());
        assert!(r_lm(12, 6, 1).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_a(12, 23, 1).unwrap(), 2);
        assert_eq!(degree_a(12, 5, 2).unwrap(), 20);
        for m in 1..=10 {
            assert_eq!(degree_a(12, 2, m).unwrap(), 1 << (m - 1));
        }
    }

    #[test]
    fn indices() {
        assert_eq!(tower_index(12, 11, 1).unwrap(), 1);
        assert_eq!(tower_index(12, 11, 2).unwrap(), 11);
        assert_eq!(tower_index(12, 5, 1).unwrap(), 5);
    }

    #[test]
    fn image_sizes() {
        assert_eq!(generic_image_size(12, 5, 1).unwrap(), BigUint::from(480u32));
        assert_eq!(generic_image_size(12, 5, 2).unwrap(), BigUint::from(300_000u32));
        assert_eq!(generic_l_degree(12, 5, 1).unwrap(), BigUint::from(480u32));
        assert_eq!(generic_l_degree(10, 7, 1).unwrap(), BigUint::from(2016u32));
    }

    #[test]
    fn image_brute_force_small_primes() {
        for k in [10u64, 12, 16, 18] {
            for ell in small_primes(13) {
                let (sl, img) = brute_gl2(k, ell);
                let q = PrimePower::prime(ell).unwrap();
                assert_eq!(sl2_order(&q), BigUint::from(sl));
                assert_eq!(generic_image_size(k, ell, 1).unwrap(), BigUint::from(img));
                assert_eq!(generic_l_degree(k, ell, 1).unwrap(), BigUint::from(sl * (ell - 1)));
                let r = r_lm(k, ell, 1).unwrap();
                assert_eq!(
                    generic_image_size(k, ell, 1).unwrap() * r,
                    generic_l_degree(k, ell, 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn image_lower_bound_and_recursion() {
        for k in [10u64, 12, 14, 16, 18] {
            for ell in small_primes(200) {
                // value·(k-1) ≥ ℓ(ℓ-1)(ℓ²-1) ≥ (3/8)·ℓ⁴; the bare ℓ⁴/(k-1) only
                // holds up to that constant
                let size = generic_image_size(k, ell, 1).unwrap();
                assert!(size.clone() * (k - 1) >= BigUint::from(ell * (ell - 1) * (ell * ell - 1)));
                assert!(size * (k - 1) * 8u32 >= BigUint::from(ell).pow(4) * 3u32);
                if (k - 1) % ell != 0 {
                    for m in 2..=4 {
                        assert_eq!(
                            generic_image_size(k, ell, m).unwrap(),
                            generic_image_size(k, ell, m - 1).unwrap() * BigUint::from(ell).pow(4)
                        );
                    }
                    // matches (ℓ²-1)(ℓ²-ℓ)/r_ℓ · ℓ^{4(m-1)}
                    let r = r_lm(k, ell, 1).unwrap();
                    let closed = BigUint::from((ell * ell - 1) * (ell * ell - ell) / r);
                    assert_eq!(generic_image_size(k, ell, 1).unwrap(), closed);
                }
            }
        }
    }

    #[test]
    fn lower_bound_needs_a_constant() {
        // r_23 = 11 = k - 1, so the image is (ℓ²-1)(ℓ²-ℓ)/11 < ℓ⁴/11
        let size = generic_image_size(12, 23, 1).unwrap();
        assert_eq!(size, BigUint::from(24_288u32));
        assert!(size * 11u32 < BigUint::from(23u32).pow(4));
    }

    #[test]
    fn reports() {
        let t = tower_report(12, 11, 3).unwrap();
        assert_eq!(t.levels.iter().map(|l| l.index).collect::<Vec<_>>(), vec![1, 11, 11]);
        assert!(t.is_consistent());

        let t = tower_report(12, 2, 3).unwrap();
        assert_eq!(t.levels.iter().map(|l| l.deg_a).collect::<Vec<_>>(), vec![1, 2, 4]);

        let t = tower_report(10, 3, 3).unwrap();
        assert_eq!(t.levels.iter().map(|l| l.r).collect::<Vec<_>>(), vec![1, 3, 9]);
        assert_eq!(t.levels.iter().map(|l| l.deg_a).collect::<Vec<_>>(), vec![2, 2, 2]);
        assert_eq!(t.levels.iter().map(|l| l.index).collect::<Vec<_>>(), vec![1, 1, 3]);
        assert_eq!(t.atilde_index_bound, 9);
    }

    #[test]
    fn csv_layout() {
        let csv = tower_report(12, 5, 2).unwrap().to_csv();
        assert_eq!(csv, "m,r,deg_A,index,image_size,L_degree\n1,1,4,5,480,480\n2,1,20,5,300000,300000\n");
    }

    #[test]
    fn lemma_grid() {
        for k in [10u64, 12, 14, 16] {
            for ell in small_primes(50) {
                let report = tower_report(k, ell, 6).unwrap();
                assert!(report.is_consistent(), "k={k} ℓ={ell}");
                let last = &report.levels[5];
                assert_eq!(last.deg_a * last.index, degree_a(k, ell, 7).unwrap());
            }
        }
    }
}
