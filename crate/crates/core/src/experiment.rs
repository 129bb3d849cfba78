//! Prime scans comparing real eigenform data with the generic densities.
//!
//! Counts are tallied per prime segment on the rayon pool and merged by
//! per-cell addition, so results do not depend on scheduling. The prime
//! `p = ℓ` is never counted.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{delta_f_generic, det_for, g_u_root_count, DensityReport, LiftParams};
use crate::error::{Error, Result};
use crate::galois_tower::generic_l_degree;
use crate::matcount::trace_counts_for_det;
use crate::modring::{mul_mod, pow_mod, ExactRational, PrimePower};
use crate::primes::{sieve_segment, PrimeRange};
use crate::series::{eigenform_coeffs, eigenform_coeffs_cached, CoefficientCache, EigenformSpec, SeriesModQ};

/// Largest modulus for a full `(u, v)` table.
pub const MAX_TABLE_MODULUS: u64 = 10_000;
/// Largest scan limit.
pub const MAX_SCAN_LIMIT: u64 = 100_000_000;
pub const MIN_SCAN_LIMIT: u64 = 100;

/// Deviation (in binomial σ) at or below which a count is consistent.
pub const CONSISTENT_SIGMAS: f64 = 4.0;
/// Deviation at or above which a count is flagged as a congruence candidate.
pub const CONGRUENCE_SIGMAS: f64 = 10.0;

const SCAN_SEGMENT_LEN: u64 = 1 << 16;

/// `∏_{i=1}^{n/2} (a + p^{k-i} + p^{k-n-1+i})` modulo `ℓ^m`.
pub fn lambda_f_mod(a_p: u64, p: u64, params: LiftParams, modulus: &PrimePower) -> u64 {
    let q = modulus.q();
    let (k, n) = (params.k() as u64, params.n() as u64);
    let a = a_p % q;
    (1..=n / 2).fold(1 % q, |acc, i| {
        let factor = (a + pow_mod(p, k - i, q) + pow_mod(p, k - n - 1 + i, q)) % q;
        mul_mod(acc, factor, q)
    })
}

/// The same product over the integers.
pub fn lambda_f_exact(a_p: &BigInt, p: u64, params: LiftParams) -> BigInt {
    let (k, n) = (params.k(), params.n());
    let p = BigInt::from(p);
    (1..=n / 2)
        .map(|i| a_p + p.pow(k - i) + p.pow(k - n - 1 + i))
        .product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    PiFTable,
    PiF,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub mode: ScanMode,
    /// Weight of the elliptic form whose coefficients are scanned.
    pub weight: u32,
    pub params: Option<LiftParams>,
    pub modulus: PrimePower,
    pub x: u64,
}

impl ScanConfig {
    pub fn pi_f_table(weight: u32, modulus: PrimePower, x: u64) -> Result<Self> {
        EigenformSpec::new(weight)?;
        if modulus.q() > MAX_TABLE_MODULUS {
            return Err(Error::guard("table modulus", modulus.q(), MAX_TABLE_MODULUS));
        }
        Self::validated(ScanConfig {
            mode: ScanMode::PiFTable,
            weight,
            params: None,
            modulus,
            x,
        })
    }

    pub fn pi_f(params: LiftParams, modulus: PrimePower, x: u64) -> Result<Self> {
        Self::validated(ScanConfig {
            mode: ScanMode::PiF,
            weight: params.source_weight(),
            params: Some(params),
            modulus,
            x,
        })
    }

    fn validated(self) -> Result<Self> {
        if self.x < MIN_SCAN_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "scan limit must be at least {MIN_SCAN_LIMIT}, got {}",
                self.x
            )));
        }
        if self.x > MAX_SCAN_LIMIT {
            return Err(Error::guard("scan limit", self.x, MAX_SCAN_LIMIT));
        }
        Ok(self)
    }

    /// Coefficients `a(0..=x)` modulo `ℓ^m`, through the cache if given.
    pub fn coefficients(&self, cache: Option<&CoefficientCache>) -> Result<SeriesModQ> {
        let spec = EigenformSpec::new(self.weight)?;
        let x = self.x as usize;
        match cache {
            Some(c) => eigenform_coeffs_cached(c, spec, x, self.modulus),
            None => eigenform_coeffs(spec, x, self.modulus),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    /// Within [`CONSISTENT_SIGMAS`] of the generic prediction.
    Consistent,
    /// Between the two thresholds.
    Deviant,
    /// At least [`CONGRUENCE_SIGMAS`] away: the image is likely not generic.
    CongruenceCandidate,
}

impl ScanStatus {
    pub fn classify(sigmas: f64) -> Self {
        if sigmas <= CONSISTENT_SIGMAS {
            ScanStatus::Consistent
        } else if sigmas >= CONGRUENCE_SIGMAS {
            ScanStatus::CongruenceCandidate
        } else {
            ScanStatus::Deviant
        }
    }
}

/// `|count - δ·N| / √(δ(1-δ)N)`; infinite when `δ ∈ {0, 1}` and the count
/// disagrees.
pub fn binomial_sigmas(count: u64, delta: &ExactRational, trials: u64) -> f64 {
    let d = delta.to_f64();
    let n = trials as f64;
    let diff = (count as f64 - d * n).abs();
    let sd = (d * (1.0 - d) * n).sqrt();
    if sd == 0.0 {
        if diff < 0.5 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / sd
    }
}

/// `ℓ^{4m}·√x·ln(ℓ^m·x)`; reported for context only.
pub fn grh_error_scale(modulus: &PrimePower, x: u64) -> f64 {
    let q = modulus.q() as f64;
    let x = x as f64;
    q.powi(4) * x.sqrt() * (q * x).ln()
}

/// One cell of a `π_f(x, u, v; ℓ^m)` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub u: u64,
    pub v: u64,
    pub count: u64,
    pub expected: ExactRational,
    pub sigmas: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub config: ScanConfig,
    /// Primes `≤ x` other than `ℓ`.
    pub pi_x: u64,
    /// Non-zero cells only, keyed by `(u, v)`; serialised as `[u, v, count]`.
    #[serde(with = "sparse_table")]
    pub table: Option<BTreeMap<(u64, u64), u64>>,
    /// `π_F(x, ℓ^m)` from `λ_F(p)` directly.
    pub count: Option<u64>,
    /// `π_F(x, ℓ^m)` from the roots of `g_u`.
    pub root_set_count: Option<u64>,
    pub empirical: Option<ExactRational>,
    pub expected: Option<DensityReport>,
    /// Largest deviation over the scanned quantities.
    pub deviation_sigmas: f64,
    pub status: ScanStatus,
    pub grh_scale: f64,
}

pub const TABLE_CSV_HEADER: &str = "u,v,count,expected_num,expected_den,sigmas";

impl ScanResult {
    pub fn table_count(&self, u: u64, v: u64) -> u64 {
        self.table
            .as_ref()
            .and_then(|t| t.get(&(u, v)).copied())
            .unwrap_or(0)
    }

    /// Every `(u, v)` cell with its generic expectation, `u` a unit.
    pub fn cells(&self) -> Result<Vec<TableCell>> {
        let Some(table) = &self.table else {
            return Ok(Vec::new());
        };
        let modulus = self.config.modulus;
        let weight = self.config.weight;
        let l_degree = BigInt::from(generic_l_degree(weight as u64, modulus.ell(), modulus.m())?);
        let mut by_det: HashMap<u64, Vec<u128>> = HashMap::new();
        let mut out = Vec::with_capacity((modulus.phi() * modulus.q()) as usize);
        for u in modulus.units() {
            let d = det_for(u, weight, &modulus);
            if !by_det.contains_key(&d) {
                by_det.insert(d, trace_counts_for_det(&modulus, d)?);
            }
            let counts = &by_det[&d];
            for v in 0..modulus.q() {
                let expected = ExactRational::new(BigInt::from(counts[v as usize]), l_degree.clone());
                let count = table.get(&(u, v)).copied().unwrap_or(0);
                let sigmas = binomial_sigmas(count, &expected, self.pi_x);
                out.push(TableCell {
                    u,
                    v,
                    count,
                    expected,
                    sigmas,
                });
            }
        }
        Ok(out)
    }

    pub fn table_csv(&self) -> Result<String> {
        let mut out = String::from(TABLE_CSV_HEADER);
        out.push('\n');
        for c in self.cells()? {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.u,
                c.v,
                c.count,
                c.expected.numer(),
                c.expected.denom(),
                c.sigmas
            ));
        }
        Ok(out)
    }
}

mod sparse_table {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    type Table = BTreeMap<(u64, u64), u64>;

    pub fn serialize<S: Serializer>(t: &Option<Table>, s: S) -> Result<S::Ok, S::Error> {
        t.as_ref()
            .map(|t| t.iter().map(|(&(u, v), &c)| [u, v, c]).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Table>, D::Error> {
        let rows: Option<Vec<[u64; 3]>> = Option::deserialize(d)?;
        Ok(rows.map(|r| r.into_iter().map(|[u, v, c]| ((u, v), c)).collect()))
    }
}

fn check_coeffs(config: &ScanConfig, coeffs: &SeriesModQ) -> Result<()> {
    if coeffs.modulus() != config.modulus {
        return Err(Error::ModulusMismatch(coeffs.modulus().q(), config.modulus.q()));
    }
    if (coeffs.precision() as u64) < config.x {
        return Err(Error::LengthMismatch(coeffs.precision() + 1, config.x as usize + 1));
    }
    Ok(())
}

/// Folds `visit` over every prime `p ≤ x`, `p ≠ ℓ`, one accumulator per
/// segment, and merges the accumulators.
fn fold_primes<A, F, M>(config: &ScanConfig, init: impl Fn() -> A + Sync, visit: F, merge: M) -> Result<A>
where
    A: Send,
    F: Fn(&mut A, u64) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    let range = PrimeRange::new(2, config.x)?.with_segment_len(SCAN_SEGMENT_LEN);
    let base = range.base_primes();
    let ell = config.modulus.ell();
    let parts: Vec<A> = range
        .segments()
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = init();
            for p in sieve_segment(lo, hi, &base) {
                if p != ell {
                    visit(&mut acc, p);
                }
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(init(), merge))
}

/// `π_f(x, u, v; ℓ^m)` for every `(u, v)`.
pub fn scan_pi_f(config: &ScanConfig, coeffs: &SeriesModQ) -> Result<ScanResult> {
    if config.mode != ScanMode::PiFTable {
        return Err(Error::InvalidArgument("scan_pi_f needs a table configuration".into()));
    }
    check_coeffs(config, coeffs)?;
    let q = config.modulus.q();
    let a = coeffs.coeffs();
    let table = fold_primes(
        config,
        BTreeMap::<(u64, u64), u64>::new,
        |t, p| *t.entry((p % q, a[p as usize])).or_insert(0) += 1,
        |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_insert(0) += v;
            }
            x
        },
    )?;
    let pi_x = table.values().sum();
    let mut result = ScanResult {
        config: *config,
        pi_x,
        table: Some(table),
        count: None,
        root_set_count: None,
        empirical: None,
        expected: None,
        deviation_sigmas: 0.0,
        status: ScanStatus::Consistent,
        grh_scale: grh_error_scale(&config.modulus, config.x),
    };
    let worst = result
        .cells()?
        .iter()
        .map(|c| c.sigmas)
        .fold(0.0f64, f64::max);
    result.deviation_sigmas = worst;
    result.status = ScanStatus::classify(worst);
    Ok(result)
}

/// Convenience wrapper computing the coefficients first.
pub fn scan_pi_f_table(weight: u32, modulus: PrimePower, x: u64, cache: Option<&CoefficientCache>) -> Result<ScanResult> {
    let config = ScanConfig::pi_f_table(weight, modulus, x)?;
    let coeffs = config.coefficients(cache)?;
    scan_pi_f(&config, &coeffs)
}

/// `π_F(x, ℓ^m)`, counted directly from `λ_F(p)` and again from the roots
/// of `g_{p mod ℓ^m}`.
pub fn scan_pi_big_f(config: &ScanConfig, coeffs: &SeriesModQ) -> Result<ScanResult> {
    let params = match (config.mode, config.params) {
        (ScanMode::PiF, Some(p)) => p,
        _ => return Err(Error::InvalidArgument("scan_pi_F needs lift parameters".into())),
    };
    check_coeffs(config, coeffs)?;
    let modulus = config.modulus;
    let q = modulus.q();
    let a = coeffs.coeffs();
    let roots: HashMap<u64, Vec<u64>> = modulus
        .units()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|u| Ok((u, g_u_root_count(u, params, &modulus)?.roots)))
        .collect::<Result<_>>()?;
    // (primes, direct count, root-set count)
    let (pi_x, count, root_set_count) = fold_primes(
        config,
        || (0u64, 0u64, 0u64),
        |acc, p| {
            let ap = a[p as usize];
            acc.0 += 1;
            if lambda_f_mod(ap, p, params, &modulus) == 0 {
                acc.1 += 1;
            }
            if roots.get(&(p % q)).is_some_and(|r| r.binary_search(&ap).is_ok()) {
                acc.2 += 1;
            }
        },
        |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2),
    )?;
    let expected = delta_f_generic(params, &modulus)?;
    let sigmas = binomial_sigmas(count, &expected.delta_exact, pi_x);
    Ok(ScanResult {
        config: *config,
        pi_x,
        table: None,
        count: Some(count),
        root_set_count: Some(root_set_count),
        empirical: Some(ExactRational::new(count, pi_x.max(1))),
        expected: Some(expected),
        deviation_sigmas: sigmas,
        status: ScanStatus::classify(sigmas),
        grh_scale: grh_error_scale(&modulus, config.x),
    })
}

/// Convenience wrapper computing the coefficients first.
pub fn scan_pi_big_f_for(params: LiftParams, modulus: PrimePower, x: u64, cache: Option<&CoefficientCache>) -> Result<ScanResult> {
    let config = ScanConfig::pi_f(params, modulus, x)?;
    let coeffs = config.coefficients(cache)?;
    scan_pi_big_f(&config, &coeffs)
}
