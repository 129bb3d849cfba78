//! Self-verification: cross-module invariants, each reported as pass/fail.

use hecke_core::density::{delta_f_generic, delta_uv_generic, partitions_stat, LiftParams};
use hecke_core::experiment::{scan_pi_big_f_for, scan_pi_f_table, ScanStatus, CONSISTENT_SIGMAS};
use hecke_core::galois_tower::{sl2_order, tower_report};
use hecke_core::matcount::{count_trace_det, trace_det_histogram_brute, z_profile};
use hecke_core::modring::{gcd, pow_mod, ExactRational, PrimePower};
use hecke_core::primes::{primes_in, small_primes};
use hecke_core::series::{eigenform_coeffs, eigenform_exact, EigenformSpec, SUPPORTED_WEIGHTS};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

pub type CountFn = fn(&PrimePower, u64, u64) -> hecke_core::Result<u128>;

/// Implementations under test. Swapping one out lets the suite be checked
/// against deliberately broken code.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub count: CountFn,
}

fn formula_count(m: &PrimePower, t: u64, d: u64) -> hecke_core::Result<u128> {
    Ok(count_trace_det(m, t, d)?.count)
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks { count: formula_count }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<String, String>;

fn pp(ell: u64, m: u32) -> PrimePower {
    PrimePower::new(ell, m).expect("valid prime power")
}

fn lp(k: u32, n: u32) -> LiftParams {
    LiftParams::new(k, n).expect("valid lift parameters")
}

fn prime_powers_up_to(limit: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for ell in small_primes(limit) {
        let mut m = 1;
        while ell.pow(m) <= limit {
            out.push(pp(ell, m));
            m += 1;
        }
    }
    out
}

fn err(e: hecke_core::Error) -> String {
    e.to_string()
}

fn check_counts_against_enumeration(hooks: &Hooks, level: Level) -> Check {
    let mut moduli = vec![pp(2, 1), pp(3, 1), pp(2, 2), pp(5, 1), pp(7, 1), pp(2, 3), pp(3, 2)];
    if level == Level::Full {
        moduli.extend([pp(2, 4), pp(5, 2), pp(3, 3), pp(7, 2)]);
    }
    let mut cases = 0;
    for m in &moduli {
        let q = m.q();
        let hist = trace_det_histogram_brute(m).map_err(err)?;
        for t in 0..q {
            for d in m.units() {
                let got = (hooks.count)(m, t, d).map_err(err)?;
                let want = hist[(t * q + d) as usize] as u128;
                if got != want {
                    return Err(format!("q={q} t={t} d={d}: formula {got}, enumeration {want}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (t, d) cases over {} moduli", moduli.len()))
}

fn check_row_sums(hooks: &Hooks, level: Level) -> Check {
    let limit = if level == Level::Full { 343 } else { 27 };
    for m in prime_powers_up_to(limit) {
        let sl2 = sl2_order(&m);
        for d in m.units() {
            let mut row = 0u128;
            for t in 0..m.q() {
                row += (hooks.count)(&m, t, d).map_err(err)?;
            }
            if sl2 != row.into() {
                return Err(format!("q={} d={d}: Σ_t = {row}, |SL₂| = {sl2}", m.q()));
            }
        }
    }
    Ok(format!("moduli ≤ {limit}"))
}

fn check_z_bound(level: Level) -> Check {
    let limit = if level == Level::Full { 343 } else { 49 };
    for m in prime_powers_up_to(limit) {
        for t in 0..m.q() {
            for d in m.units() {
                let z = z_profile(&m, t, d).map_err(err)?;
                if !z.satisfies_bound() {
                    return Err(format!("q={} t={t} d={d}: {:?}", m.q(), z.counts));
                }
            }
        }
    }
    Ok(format!("moduli ≤ {limit}"))
}

fn check_sum_to_one(level: Level) -> Check {
    let mut moduli = vec![pp(5, 1), pp(7, 1), pp(3, 2)];
    if level == Level::Full {
        moduli.extend([pp(5, 2), pp(7, 2)]);
    }
    for k in [10, 12, 18] {
        for m in &moduli {
            let mut total = ExactRational::zero();
            for u in m.units() {
                for v in 0..m.q() {
                    total = total + delta_uv_generic(k, m, u, v).map_err(err)?.delta_exact;
                }
            }
            if total != ExactRational::one() {
                return Err(format!("k={k} q={}: Σ = {total}", m.q()));
            }
        }
    }
    Ok(format!("k ∈ {{10, 12, 18}}, {} moduli", moduli.len()))
}

fn check_assembly(level: Level) -> Check {
    let mut moduli = vec![pp(7, 1), pp(3, 2)];
    if level == Level::Full {
        moduli.extend([pp(5, 2), pp(3, 3), pp(2, 5)]);
    }
    for params in [lp(10, 2), lp(12, 2), lp(14, 2)] {
        let k = params.k() as u64;
        for m in &moduli {
            let q = m.q();
            let direct = delta_f_generic(params, m).map_err(err)?.delta_exact;
            let mut summed = ExactRational::zero();
            for u in m.units() {
                let w = (2 * q - pow_mod(u, k - 1, q) - pow_mod(u, k - 2, q)) % q;
                summed = summed + delta_uv_generic(params.source_weight(), m, u, w).map_err(err)?.delta_exact;
            }
            if direct != summed {
                return Err(format!("k={k} q={q}: {direct} vs {summed}"));
            }
        }
    }
    Ok("n = 2 lifts equal Σ_u δ_{u,γ_u}".into())
}

fn check_partitions() -> Check {
    for n in [4, 6, 8] {
        for m in 1..=12 {
            let s = partitions_stat(n, m).map_err(err)?;
            if !s.meets_lower_bound() || !s.argmin_attains_min() {
                return Err(format!("n={n} m={m}: min {} argmin {:?}", s.min_value, s.argmin));
            }
        }
    }
    Ok("n ∈ {4, 6, 8}, m ≤ 12".into())
}

fn check_tower() -> Check {
    for k in [10, 12, 14, 16] {
        for ell in small_primes(50) {
            if !tower_report(k, ell, 6).map_err(err)?.is_consistent() {
                return Err(format!("k={k} ℓ={ell}"));
            }
        }
    }
    Ok("k ∈ {10, 12, 14, 16}, ℓ ≤ 50, m ≤ 6".into())
}

fn check_eigenforms(level: Level) -> Check {
    let x = if level == Level::Full { 10_000 } else { 1_000 };
    let modulus = pp(1_000_003, 1);
    let q = modulus.q();
    for &w in &SUPPORTED_WEIGHTS {
        let spec = EigenformSpec::new(w).map_err(err)?;
        let a = eigenform_coeffs(spec, x, modulus).map_err(err)?;
        let exact = eigenform_exact(spec, 200).map_err(err)?.reduce(modulus);
        if exact[..] != a.coeffs()[..=200] {
            return Err(format!("weight {w}: modular and exact coefficients differ"));
        }
        let a = a.coeffs();
        let mul = |x: u64, y: u64| x * y % q;
        for m in 2..=x {
            for n in m..=x / m {
                if gcd(m as u64, n as u64) == 1 && a[m * n] != mul(a[m], a[n]) {
                    return Err(format!("weight {w}: a({m}·{n}) ≠ a({m})a({n})"));
                }
            }
        }
        for p in primes_in(2, (x as f64).sqrt() as u64).map_err(err)? {
            let rhs = (mul(a[p as usize], a[p as usize]) + q - pow_mod(p, w as u64 - 1, q)) % q;
            if a[(p * p) as usize] != rhs {
                return Err(format!("weight {w}: a({p}²)"));
            }
        }
    }
    Ok(format!("all weights, X = {x}"))
}

fn check_reduction_identity(level: Level) -> Check {
    let x = if level == Level::Full { 100_000 } else { 10_000 };
    for (params, m) in [(lp(10, 2), pp(23, 1)), (lp(8, 4), pp(5, 2)), (lp(12, 6), pp(7, 1))] {
        let r = scan_pi_big_f_for(params, m, x, None).map_err(err)?;
        if r.count != r.root_set_count {
            return Err(format!("q={}: {:?} vs {:?}", m.q(), r.count, r.root_set_count));
        }
    }
    Ok(format!("x = {x}"))
}

fn check_691() -> Check {
    let m = pp(691, 1);
    let x = 100_000;
    let tau = eigenform_coeffs(EigenformSpec::new(12).map_err(err)?, x, m).map_err(err)?;
    for p in primes_in(2, x as u64).map_err(err)? {
        if tau.coeff(p as usize) != (1 + pow_mod(p, 11, 691)) % 691 {
            return Err(format!("τ({p}) ≢ 1 + p¹¹ (mod 691)"));
        }
    }
    let scan = scan_pi_f_table(12, m, x as u64, None).map_err(err)?;
    if scan.status != ScanStatus::CongruenceCandidate {
        return Err(format!("ℓ = 691 scan not flagged ({:.1}σ)", scan.deviation_sigmas));
    }
    Ok(format!("p ≤ {x}; scan flagged at {:.0}σ", scan.deviation_sigmas))
}

fn check_statistical_scan() -> Check {
    let r = scan_pi_big_f_for(lp(10, 2), pp(23, 1), 1_000_000, None).map_err(err)?;
    if r.deviation_sigmas > CONSISTENT_SIGMAS {
        return Err(format!("π_F(10⁶, 23) off by {:.2}σ", r.deviation_sigmas));
    }
    Ok(format!("π_F(10⁶, 23) within {:.2}σ", r.deviation_sigmas))
}

/// Runs every check for `level` with the given implementations.
pub fn run_checks(level: Level, hooks: &Hooks) -> Vec<CheckResult> {
    let mut checks: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("matrix counts equal enumeration", Box::new(|| check_counts_against_enumeration(hooks, level))),
        ("fixed-determinant row sums", Box::new(|| check_row_sums(hooks, level))),
        ("z-profile bound", Box::new(|| check_z_bound(level))),
        ("δ_{u,v} sums to one", Box::new(|| check_sum_to_one(level))),
        ("δ_F assembly", Box::new(|| check_assembly(level))),
        ("partition bound", Box::new(check_partitions)),
        ("tower lemma", Box::new(check_tower)),
        ("eigenform coefficients", Box::new(|| check_eigenforms(level))),
        ("direct and root-set π_F agree", Box::new(|| check_reduction_identity(level))),
    ];
    if level == Level::Full {
        checks.push(("691 congruence", Box::new(check_691)));
        checks.push(("statistical scan", Box::new(check_statistical_scan)));
    }
    checks
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}
