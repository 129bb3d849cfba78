//! Exact generic densities.
//!
//! `δ_{u,v}(ℓ^m)` is the proportion of the generic image with
//! `(det, tr) = (u^{w-1}, v)` after fixing `p ≡ u`, i.e.
//! `#E_{ℓ^m,v,u^{w-1}} / (|SL₂(Z/ℓ^m)|·φ(ℓ^m))` for a form of weight `w`.
//! For a lift `F` of degree `n` and weight `k` built from `f` of weight
//! `2k - n`, `λ_F(p) ≡ 0` exactly when `a_f(p)` is a root of
//! `g_u(x) = ∏ (x - γ_{u,i})`, which gives `δ_F` as a sum of `δ_{u,w}`.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois_tower::generic_l_degree;
use crate::matcount::count_trace_det;
use crate::modring::{mult_order, pow_mod, ExactRational, PrimePower, Residue};
use crate::series::SUPPORTED_WEIGHTS;

/// Largest modulus for which roots of `g_u` are found by exhaustive scan.
pub const MAX_ROOT_SCAN_MODULUS: u64 = 1_000_000;

/// Degree `n` and weight `k` of a lift, with `k, n` even, `k > n + 1`, and
/// `2k - n` a weight with a unique normalised eigenform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftParams {
    k: u32,
    n: u32,
}

impl LiftParams {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        let invalid = |reason| Err(Error::InvalidLiftParams { k, n, reason });
        if n == 0 || n % 2 != 0 {
            return invalid("n must be a positive even integer");
        }
        if k % 2 != 0 {
            return invalid("k must be even");
        }
        if k <= n + 1 {
            return invalid("k must exceed n + 1");
        }
        if !SUPPORTED_WEIGHTS.contains(&(2 * k - n)) {
            return invalid("source weight 2k - n must be one of 12, 16, 18, 20, 22, 26");
        }
        Ok(LiftParams { k, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Weight `2k - n` of the elliptic form being lifted.
    pub fn source_weight(&self) -> u32 {
        2 * self.k - self.n
    }

    /// Every valid `(k, n)` with `n ≤ max_n`.
    pub fn all_valid(max_n: u32) -> Vec<LiftParams> {
        let mut out = Vec::new();
        for n in (2..=max_n).step_by(2) {
            for k in (n + 2..=(n + 26) / 2 + 1).filter(|k| k % 2 == 0) {
                if let Ok(p) = LiftParams::new(k, n) {
                    out.push(p);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRoots {
    pub modulus: PrimePower,
    pub u: u64,
    pub params: LiftParams,
    /// `γ_{u,i} = -u^{k-i} - u^{k-n-1+i}` for `i = 1..=n/2`.
    pub gamma: Vec<u64>,
}

fn check_unit(modulus: &PrimePower, u: u64) -> Result<u64> {
    let u = u % modulus.q();
    if !modulus.is_unit(u) {
        return Err(Error::NotUnit {
            value: u,
            q: modulus.q(),
        });
    }
    Ok(u)
}

pub fn gamma_roots(u: u64, params: LiftParams, modulus: &PrimePower) -> Result<GammaRoots> {
    let u = check_unit(modulus, u)?;
    let q = modulus.q();
    let (k, n) = (params.k as u64, params.n as u64);
    let gamma = (1..=n / 2)
        .map(|i| {
            let s = (pow_mod(u, k - i, q) + pow_mod(u, k - n - 1 + i, q)) % q;
            (q - s) % q
        })
        .collect();
    Ok(GammaRoots {
        modulus: *modulus,
        u,
        params,
        gamma,
    })
}

/// Roots of `g_u` modulo `ℓ^m`, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuRoots {
    pub roots: Vec<u64>,
}

impl GuRoots {
    /// `N_{g_u}(ℓ^m)`.
    pub fn count(&self) -> u64 {
        self.roots.len() as u64
    }
}

/// Valuation of `a - b` for residues, capped at `m`.
fn diff_val(a: u64, b: u64, modulus: &PrimePower) -> u32 {
    let q = modulus.q();
    let mut x = (a + q - b) % q;
    if x == 0 {
        return modulus.m();
    }
    let mut v = 0;
    while x % modulus.ell() == 0 {
        x /= modulus.ell();
        v += 1;
    }
    v
}

/// All `w mod ℓ^m` with `Σ_i min(ν(w - γ_{u,i}), m) ≥ m`.
pub fn g_u_root_count(u: u64, params: LiftParams, modulus: &PrimePower) -> Result<GuRoots> {
    if modulus.q() > MAX_ROOT_SCAN_MODULUS {
        return Err(Error::guard("root-scan modulus", modulus.q(), MAX_ROOT_SCAN_MODULUS));
    }
    let g = gamma_roots(u, params, modulus)?;
    let m = modulus.m();
    let roots = (0..modulus.q())
        .filter(|&w| g.gamma.iter().map(|&c| diff_val(w, c, modulus)).sum::<u32>() >= m)
        .collect();
    Ok(GuRoots { roots })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumNgu {
    pub params: LiftParams,
    pub ell: u64,
    /// `Σ_{u=1}^{ℓ-1} N_{g_u}(ℓ)`
    pub value: u64,
    /// `(n/2)·ℓ`
    pub main_term: u64,
    /// `#{u : ord_ℓ(u) ≤ n}`
    pub small_order: u64,
}

impl SumNgu {
    /// `#{u : ord_ℓ(u) ≤ n} ≤ n²`.
    pub fn small_order_bound_holds(&self) -> bool {
        self.small_order <= (self.params.n as u64).pow(2)
    }
}

pub fn sum_ngu(params: LiftParams, ell: u64) -> Result<SumNgu> {
    let modulus = PrimePower::prime(ell)?;
    let mut value = 0;
    let mut small_order = 0;
    for u in 1..ell {
        value += g_u_root_count(u, params, &modulus)?.count();
        if mult_order(&Residue::new(u, modulus))? <= params.n as u64 {
            small_order += 1;
        }
    }
    Ok(SumNgu {
        params,
        ell,
        value,
        main_term: params.n as u64 / 2 * ell,
        small_order,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Uv,
    Ikeda,
}

/// Assumptions every generic density rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "caveat")]
pub enum Caveat {
    /// Valid only when `ℓ` is non-exceptional for the form, so that the
    /// image is the full `{det ∈ units^{w-1}}` group.
    GenericImage,
    /// `[Ã_{ℓ^m} : A_{ℓ^m}]` is taken to be 1; it is only known to be at
    /// most `bound`.
    AtildeIndex { bound: u64 },
    /// The envelope constants are fitted to computed data, not proven.
    FittedEnvelope,
}

/// Upper envelope `constant / base^{exp_num/exp_den}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayBound {
    pub constant: ExactRational,
    pub base: u64,
    pub exp_num: u32,
    pub exp_den: u32,
}

impl DecayBound {
    fn new(constant: ExactRational, base: u64, exp_num: u32, exp_den: u32) -> Self {
        let g = exp_num.gcd(&exp_den).max(1);
        DecayBound {
            constant,
            base,
            exp_num: exp_num / g,
            exp_den: exp_den / g,
        }
    }

    /// `value ≤ C / b^{p/r}`, decided exactly as `value^r · b^p ≤ C^r`.
    pub fn holds(&self, value: &ExactRational) -> bool {
        if value.is_negative() {
            return true;
        }
        let lhs = value.pow(self.exp_den)
            * ExactRational::from_integer(BigInt::from(self.base).pow(self.exp_num));
        lhs <= self.constant.pow(self.exp_den)
    }

    pub fn to_f64(&self) -> f64 {
        self.constant.to_f64() / (self.base as f64).powf(self.exp_num as f64 / self.exp_den as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub kind: DensityKind,
    /// Weight of the elliptic form for `uv`; weight of the lift for `ikeda`.
    pub k: u32,
    pub n: Option<u32>,
    pub ell: u64,
    pub m: u32,
    pub u: Option<u64>,
    pub v: Option<u64>,
    pub delta_exact: ExactRational,
    pub main_term: ExactRational,
    /// Fitted bound on `|delta / main_term - 1|`, where one is known.
    pub main_term_rel_tol: Option<ExactRational>,
    pub decay_bound: Option<DecayBound>,
    pub caveats: Vec<Caveat>,
}

impl DensityReport {
    /// `|delta / main_term - 1| ≤ tol`, if a tolerance is attached.
    pub fn within_main_term(&self) -> Option<bool> {
        let tol = self.main_term_rel_tol.as_ref()?;
        let ratio = &self.delta_exact / &self.main_term;
        Some((ratio - ExactRational::one()).abs() <= *tol)
    }

    pub fn within_decay_bound(&self) -> Option<bool> {
        Some(self.decay_bound.as_ref()?.holds(&self.delta_exact))
    }
}

fn ell_pow_rational(modulus: &PrimePower, e: u32) -> ExactRational {
    ExactRational::from_integer(BigInt::from(modulus.ell()).pow(e))
}

fn generic_caveats(weight: u32) -> Vec<Caveat> {
    vec![
        Caveat::GenericImage,
        Caveat::AtildeIndex {
            bound: weight as u64 - 1,
        },
        Caveat::FittedEnvelope,
    ]
}

/// `d_u = u^{w-1}`, the determinant forced on Frobenius at `p ≡ u`.
pub fn det_for(u: u64, weight: u32, modulus: &PrimePower) -> u64 {
    pow_mod(u, weight as u64 - 1, modulus.q())
}

/// `δ_{u,v}(ℓ^m)` for a form of weight `weight`.
pub fn delta_uv_generic(weight: u32, modulus: &PrimePower, u: u64, v: u64) -> Result<DensityReport> {
    if weight < 2 {
        return Err(Error::InvalidArgument(format!("weight must be at least 2, got {weight}")));
    }
    let u = check_unit(modulus, u)?;
    let v = v % modulus.q();
    let count = count_trace_det(modulus, v, det_for(u, weight, modulus))?.count;
    let l_degree = generic_l_degree(weight as u64, modulus.ell(), modulus.m())?;
    let delta = ExactRational::new(BigInt::from(count), BigInt::from(l_degree));
    let ell = modulus.ell();
    let (rel_tol, decay) = if modulus.m() == 1 {
        (
            Some(ExactRational::new(5, ell)),
            Some(DecayBound::new(ExactRational::from_integer(ell + 5), ell, 3, 1)),
        )
    } else {
        (None, None)
    };
    Ok(DensityReport {
        kind: DensityKind::Uv,
        k: weight,
        n: None,
        ell,
        m: modulus.m(),
        u: Some(u),
        v: Some(v),
        delta_exact: delta,
        main_term: ExactRational::one() / ell_pow_rational(modulus, 2 * modulus.m()),
        main_term_rel_tol: rel_tol,
        decay_bound: decay,
        caveats: generic_caveats(weight),
    })
}

/// `Σ_u Σ_{g_u(w) ≡ 0} #E_{ℓ^m,w,d_u}` and `Σ_u N_{g_u}(ℓ^m)`.
fn ikeda_numerator(params: LiftParams, modulus: &PrimePower) -> Result<(u128, u64)> {
    let weight = params.source_weight();
    let units: Vec<u64> = modulus.units().collect();
    let parts = units
        .par_iter()
        .map(|&u| {
            let roots = g_u_root_count(u, params, modulus)?;
            let d = det_for(u, weight, modulus);
            let mut total = 0u128;
            for &w in &roots.roots {
                total += count_trace_det(modulus, w, d)?.count;
            }
            Ok((total, roots.count()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts
        .into_iter()
        .fold((0, 0), |(a, b), (c, d)| (a + c, b + d)))
}

/// `δ_F(ℓ^m)` for the lift of degree `n`, weight `k`, using the source weight
/// `2k - n` in `d_u`.
pub fn delta_f_generic(params: LiftParams, modulus: &PrimePower) -> Result<DensityReport> {
    let weight = params.source_weight();
    let (numerator, root_total) = ikeda_numerator(params, modulus)?;
    let l_degree = generic_l_degree(weight as u64, modulus.ell(), modulus.m())?;
    let delta = ExactRational::new(BigInt::from(numerator), BigInt::from(l_degree));
    let (ell, m, n) = (modulus.ell(), modulus.m(), params.n);
    let (main_term, rel_tol) = if m == 1 {
        (
            ExactRational::new(n / 2, ell),
            Some(ExactRational::new(10 * n * n, ell)),
        )
    } else {
        (
            ExactRational::from_integer(root_total) / ell_pow_rational(modulus, 2 * m),
            None,
        )
    };
    let decay = if n == 2 {
        DecayBound::new(ExactRational::from_integer(4), ell, m, 1)
    } else {
        DecayBound::new(ExactRational::from_integer(8 * m * m), ell, 3 * m, n)
    };
    Ok(DensityReport {
        kind: DensityKind::Ikeda,
        k: params.k,
        n: Some(n),
        ell,
        m,
        u: None,
        v: None,
        delta_exact: delta,
        main_term,
        main_term_rel_tol: rel_tol,
        decay_bound: Some(decay),
        caveats: generic_caveats(weight),
    })
}

/// Partitions of `m` into `n/2` weakly decreasing parts and the minimum of
/// `s₁ + ⌊(s₂+1)/2⌋` over them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionStat {
    pub n: u32,
    pub m: u32,
    pub partitions: Vec<Vec<u32>>,
    pub min_value: u32,
    /// `(q+1, …, q+1, q, …, q)` with `m = (n/2)q + i` and `i` copies of `q+1`.
    pub argmin: Vec<u32>,
    /// Every partition attaining `min_value`.
    pub minimisers: Vec<Vec<u32>>,
}

impl PartitionStat {
    pub fn objective(s: &[u32]) -> u32 {
        let s1 = s.first().copied().unwrap_or(0);
        let s2 = s.get(1).copied().unwrap_or(0);
        s1 + (s2 + 1) / 2
    }

    /// `min_value ≥ 3m/n`, i.e. `n·min_value ≥ 3m`.
    pub fn meets_lower_bound(&self) -> bool {
        self.n as u64 * self.min_value as u64 >= 3 * self.m as u64
    }

    pub fn argmin_attains_min(&self) -> bool {
        self.minimisers.contains(&self.argmin)
    }
}

fn push_partitions(remaining: u32, parts: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    // the remaining parts can hold at most parts·max
    if remaining as u64 > parts as u64 * max as u64 {
        return;
    }
    for s in (0..=max.min(remaining)).rev() {
        cur.push(s);
        push_partitions(remaining - s, parts - 1, s, cur, out);
        cur.pop();
    }
}

pub fn partitions_stat(n: u32, m: u32) -> Result<PartitionStat> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("n must be even and at least 2, got {n}")));
    }
    if m == 0 {
        return Err(Error::ZeroExponent(0));
    }
    let parts = (n / 2) as usize;
    let mut partitions = Vec::new();
    push_partitions(m, parts, m, &mut Vec::with_capacity(parts), &mut partitions);
    let min_value = partitions
        .iter()
        .map(|p| PartitionStat::objective(p))
        .min()
        .expect("m has at least one partition");
    let minimisers = partitions
        .iter()
        .filter(|p| PartitionStat::objective(p) == min_value)
        .cloned()
        .collect();
    let (q, i) = (m / (n / 2), m % (n / 2));
    let argmin = (0..n / 2).map(|j| if j < i { q + 1 } else { q }).collect();
    Ok(PartitionStat {
        n,
        m,
        partitions,
        min_value,
        argmin,
        minimisers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::small_primes;

    fn pp(ell: u64, m: u32) -> PrimePower {
        PrimePower::new(ell, m).unwrap()
    }

    fn lp(k: u32, n: u32) -> LiftParams {
        LiftParams::new(k, n).unwrap()
    }

    #[test]
    fn lift_params_validation() {
        assert_eq!(lp(10, 2).source_weight(), 18);
        assert!(LiftParams::new(9, 2).is_err());
        assert!(LiftParams::new(10, 3).is_err());
        assert!(LiftParams::new(4, 4).is_err());
        assert!(LiftParams::new(16, 2).is_err());
        let valid: Vec<(u32, u32)> = LiftParams::all_valid(6).iter().map(|p| (p.k(), p.n())).collect();
        assert_eq!(
            valid,
            vec![(10, 2), (12, 2), (14, 2), (8, 4), (10, 4), (12, 4), (12, 6), (14, 6), (16, 6)]
        );
    }

    #[test]
    fn gammas() {
        assert_eq!(gamma_roots(2, lp(8, 4), &pp(7, 1)).unwrap().gamma, vec![3, 2]);
        assert_eq!(gamma_roots(2, lp(10, 2), &pp(5, 1)).unwrap().gamma, vec![2]);
        for params in LiftParams::all_valid(6) {
            let g = gamma_roots(1, params, &pp(3, 4)).unwrap();
            assert!(g.gamma.iter().all(|&c| c == 79));
        }
        assert!(gamma_roots(7, lp(8, 4), &pp(7, 1)).is_err());
    }

    #[test]
    fn root_counts() {
        let r = g_u_root_count(2, lp(8, 4), &pp(7, 1)).unwrap();
        assert_eq!(r.roots, vec![2, 3]);
        let r = g_u_root_count(1, lp(8, 4), &pp(7, 2)).unwrap();
        assert_eq!(r.count(), 7);
        assert!(r.roots.iter().all(|w| (w + 2) % 7 == 0));
        let m = pp(5, 3);
        for u in m.units() {
            let r = g_u_root_count(u, lp(12, 2), &m).unwrap();
            assert_eq!(r.roots, gamma_roots(u, lp(12, 2), &m).unwrap().gamma);
        }
    }

    #[test]
    fn root_counts_against_product() {
        let m = pp(3, 3);
        for params in LiftParams::all_valid(6) {
            for u in m.units() {
                let g = gamma_roots(u, params, &m).unwrap();
                let expect: Vec<u64> = (0..27u64)
                    .filter(|&w| g.gamma.iter().fold(1u64, |acc, &c| acc * ((w + 27 - c) % 27) % 27) == 0)
                    .collect();
                assert_eq!(g_u_root_count(u, params, &m).unwrap().roots, expect);
            }
        }
    }

    #[test]
    fn root_count_at_most_half_degree() {
        for ell in small_primes(97) {
            for params in [lp(10, 2), lp(8, 4), lp(12, 6)] {
                let m = pp(ell, 1);
                for u in 1..ell {
                    let n = g_u_root_count(u, params, &m).unwrap().count();
                    assert!(n <= params.n() as u64 / 2);
                    if mult_order(&Residue::new(u, m)).unwrap() > params.n() as u64 {
                        assert_eq!(n, params.n() as u64 / 2, "ℓ={ell} u={u}");
                    }
                }
            }
        }
    }

    #[test]
    fn sums_of_root_counts() {
        let s = sum_ngu(lp(8, 4), 101).unwrap();
        assert!((202 - 32..=202).contains(&s.value), "{}", s.value);
        assert_eq!(s.main_term, 202);
        assert!(s.small_order_bound_holds());
        for ell in [5, 7, 23, 101] {
            assert_eq!(sum_ngu(lp(10, 2), ell).unwrap().value, ell - 1);
        }
        assert_eq!(sum_ngu(lp(8, 4), 7).unwrap().small_order, 4);
    }

    #[test]
    fn uv_densities() {
        let r = delta_uv_generic(12, &pp(5, 1), 1, 0).unwrap();
        assert_eq!(r.delta_exact, ExactRational::new(1, 16));
        assert_eq!(r.main_term, ExactRational::new(1, 25));
        let m = pp(101, 1);
        for (u, v) in [(1, 0), (2, 2), (3, 57), (100, 99), (50, 0)] {
            let r = delta_uv_generic(18, &m, u, v).unwrap();
            assert_eq!(r.within_main_term(), Some(true));
            assert_eq!(r.within_decay_bound(), Some(true));
        }
        assert!(delta_uv_generic(12, &pp(5, 1), 5, 0).is_err());
    }

    #[test]
    fn uv_sum_to_one() {
        for k in [10, 12, 18] {
            for (ell, e) in [(2, 3), (5, 1), (3, 2), (7, 1)] {
                let m = pp(ell, e);
                let total: ExactRational = m
                    .units()
                    .flat_map(|u| (0..m.q()).map(move |v| (u, v)))
                    .map(|(u, v)| delta_uv_generic(k, &m, u, v).unwrap().delta_exact)
                    .sum();
                assert_eq!(total, ExactRational::one(), "k={k} q={}", m.q());
            }
        }
    }

    #[test]
    fn ikeda_assembly_matches_uv_sum() {
        for params in [lp(10, 2), lp(14, 2)] {
            for m in [pp(7, 1), pp(5, 2), pp(2, 4)] {
                let direct = delta_f_generic(params, &m).unwrap().delta_exact;
                let k = params.k() as i128;
                let assembled: ExactRational = m
                    .units()
                    .map(|u| {
                        let w = m.reduce(
                            -(pow_mod(u, (k - 1) as u64, m.q()) as i128) - pow_mod(u, (k - 2) as u64, m.q()) as i128,
                        );
                        delta_uv_generic(params.source_weight(), &m, u, w).unwrap().delta_exact
                    })
                    .sum();
                assert_eq!(direct, assembled);
            }
        }
    }

    #[test]
    fn ikeda_spot_value() {
        // Σ_u #E_{7, γ_u, u^17} / 2016 with d_u = u^{w-1}, w = 18
        let r = delta_f_generic(lp(10, 2), &pp(7, 1)).unwrap();
        assert_eq!(r.delta_exact, ExactRational::new(47, 288));
        assert_eq!(r.main_term, ExactRational::new(1, 7));
    }

    #[test]
    fn ikeda_main_term_n2() {
        for ell in small_primes(199).into_iter().filter(|&l| l > 2) {
            let r = delta_f_generic(lp(10, 2), &pp(ell, 1)).unwrap();
            assert_eq!(r.within_main_term(), Some(true), "ℓ={ell}");
        }
    }

    #[test]
    fn ikeda_decay() {
        let r = delta_f_generic(lp(8, 4), &pp(5, 3)).unwrap();
        let bound = r.decay_bound.clone().unwrap();
        assert_eq!((bound.exp_num, bound.exp_den), (9, 4));
        assert!(r.within_decay_bound().unwrap());
        assert!(r.delta_exact.to_f64() <= 72.0 / 5f64.powf(2.25));
        for q in [pp(2, 5), pp(3, 4), pp(7, 2), pp(17, 1)] {
            let r = delta_f_generic(lp(10, 2), &q).unwrap();
            assert!(r.within_decay_bound().unwrap());
        }
    }

    #[test]
    fn decay_bound_exact_comparison() {
        let b = DecayBound::new(ExactRational::from_integer(8), 4, 1, 2);
        assert!(b.holds(&ExactRational::from_integer(4)));
        assert!(!b.holds(&ExactRational::new(4001, 1000)));
        assert_eq!(b.to_f64(), 4.0);
    }

    #[test]
    fn partitions() {
        let p = partitions_stat(4, 5).unwrap();
        assert_eq!(p.partitions, vec![vec![5, 0], vec![4, 1], vec![3, 2]]);
        assert_eq!(p.min_value, 4);
        assert_eq!(p.argmin, vec![3, 2]);
        assert_eq!(p.minimisers, vec![vec![3, 2]]);
        assert!(p.meets_lower_bound());

        let p = partitions_stat(2, 9).unwrap();
        assert_eq!(p.partitions, vec![vec![9]]);
        assert_eq!(p.min_value, 9);

        let p = partitions_stat(6, 7).unwrap();
        assert_eq!(p.min_value, 4);
        assert_eq!(p.argmin, vec![3, 2, 2]);
        assert!(p.argmin_attains_min());

        // ties: (4,2) and (3,3) both give 5
        let p = partitions_stat(4, 6).unwrap();
        assert_eq!(p.minimisers, vec![vec![4, 2], vec![3, 3]]);
        assert!(p.argmin_attains_min());
    }

    #[test]
    fn partition_bound_grid() {
        for n in [4, 6, 8] {
            for m in 1..=12 {
                let p = partitions_stat(n, m).unwrap();
                assert!(p.meets_lower_bound(), "n={n} m={m}");
                assert!(p.argmin_attains_min(), "n={n} m={m}");
                assert!(p
                    .partitions
                    .iter()
                    .all(|s| s.windows(2).all(|w| w[0] >= w[1]) && s.iter().sum::<u32>() == m));
            }
        }
    }

    #[test]
    fn report_serialises() {
        let r = delta_f_generic(lp(10, 2), &pp(7, 1)).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""delta_exact":{"num":"47","den":"288"}"#), "{json}");
        let back: DensityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
