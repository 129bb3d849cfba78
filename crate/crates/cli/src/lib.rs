//! The `hecke` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 guard violation, 3 verification
//! failure. Errors go to standard error prefixed with `error:`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use hecke_core::density::{delta_f_generic, delta_uv_generic, Caveat, DecayBound, DensityReport, LiftParams};
use hecke_core::experiment::{binomial_sigmas, scan_pi_big_f_for, scan_pi_f_table, ScanResult, ScanStatus};
use hecke_core::galois_tower::tower_report;
use hecke_core::matcount::{count_trace_det, count_trace_det_brute, z_profile};
use hecke_core::modring::PrimePower;
use hecke_core::series::CoefficientCache;

pub mod config;
pub mod output;
pub mod verify;

use config::{Layer, RunConfig};
use output::{unix_timestamp, Format, RationalJson};
use verify::{Hooks, Level};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hecke", version, about = "Matrix counts, generic densities and prime scans for Hecke eigenvalues")]
struct Cli {
    /// Output format [default: plain]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Coefficient cache directory [env: HECKE_CACHE_DIR; default: ./cache]
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads [env: HECKE_THREADS; default: all cores]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// key=value settings file (format, cache_dir, threads, no_timestamp)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Omit the timestamp from JSON output
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degrees of the cyclotomic layers A_{ℓ^m} for m = 1..max-m
    Tower {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        max_m: u32,
    },
    /// Count matrices in GL₂(Z/ℓ^m) with given trace and determinant
    Count {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        d: u64,
        /// Also enumerate every matrix
        #[arg(long)]
        brute: bool,
    },
    /// Exact generic densities
    #[command(subcommand)]
    Density(DensityCmd),
    /// Scan primes against eigenform coefficients
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Run the self-verification suite
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
    },
}

#[derive(Debug, Subcommand)]
enum DensityCmd {
    /// δ_{u,v}(ℓ^m) for a form of weight k
    Uv {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
    },
    /// δ_F(ℓ^m) for the lift of degree n and weight k
    Ikeda {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Debug, Subcommand)]
enum ScanCmd {
    /// Full (u, v) table of π_f(x, u, v; ℓ^m)
    Pif {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        x: u64,
        /// Write the table to this CSV file
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// A single cell π_f(x, u, v; ℓ^m)
    PifCell {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
    },
    /// π_F(x, ℓ^m) for the lift of degree n and weight k
    Ikeda {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        x: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Guard(String),
    Verify,
}

impl From<hecke_core::Error> for Failure {
    fn from(e: hecke_core::Error) -> Self {
        match e {
            hecke_core::Error::Guard { .. } | hecke_core::Error::ModulusTooLarge { .. } => Failure::Guard(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs the CLI on `argv` (program name first) with the process's standard
/// streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_hooks(argv, out, err, &Hooks::default())
}

/// [`run_with`], with the implementations used by `verify` swapped in.
pub fn run_with_hooks<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write, hooks: &Hooks) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let flags = Layer {
        format: cli.format,
        cache_dir: cli.cache_dir.clone(),
        threads: cli.threads.map(|t| t as usize),
        no_timestamp: cli.no_timestamp.then_some(true),
    };
    let cfg = match config::load(flags, cli.config.as_deref()) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli.command, &cfg, &mut buf, hooks));
    let _ = out.write_all(&buf);
    let _ = out.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Guard(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_GUARD
        }
        Err(Failure::Verify) => {
            let _ = writeln!(err, "error: verification failed");
            EXIT_VERIFY
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig, out: &mut dyn Write, hooks: &Hooks) -> Outcome {
    match cmd {
        Command::Tower { k, ell, max_m } => tower(*k, *ell, *max_m, cfg, out),
        Command::Count { ell, m, t, d, brute } => count(*ell, *m, *t, *d, *brute, cfg, out),
        Command::Density(DensityCmd::Uv { k, ell, m, u, v }) => {
            let modulus = PrimePower::new(*ell, *m)?;
            let report = delta_uv_generic(*k, &modulus, *u, *v)?;
            density(&report, cfg, out)
        }
        Command::Density(DensityCmd::Ikeda { k, n, ell, m }) => {
            let params = LiftParams::new(*k, *n)?;
            let modulus = PrimePower::new(*ell, *m)?;
            let report = delta_f_generic(params, &modulus)?;
            density(&report, cfg, out)
        }
        Command::Scan(ScanCmd::Pif { weight, ell, m, x, csv }) => {
            let modulus = PrimePower::new(*ell, *m)?;
            let cache = CoefficientCache::new(&cfg.cache_dir);
            let result = scan_pi_f_table(*weight, modulus, *x, Some(&cache))?;
            scan_table(&result, csv.as_deref(), cfg, out)
        }
        Command::Scan(ScanCmd::PifCell { weight, ell, m, x, u, v }) => {
            let modulus = PrimePower::new(*ell, *m)?;
            let cache = CoefficientCache::new(&cfg.cache_dir);
            let report = delta_uv_generic(*weight, &modulus, *u, *v)?;
            let result = scan_pi_f_table(*weight, modulus, *x, Some(&cache))?;
            scan_cell(&result, &report, cfg, out)
        }
        Command::Scan(ScanCmd::Ikeda { k, n, ell, m, x }) => {
            let params = LiftParams::new(*k, *n)?;
            let modulus = PrimePower::new(*ell, *m)?;
            let cache = CoefficientCache::new(&cfg.cache_dir);
            let result = scan_pi_big_f_for(params, modulus, *x, Some(&cache))?;
            scan_ikeda(&result, cfg, out)
        }
        Command::Verify { level } => verify_cmd(*level, hooks, cfg, out),
    }
}

fn timestamp(cfg: &RunConfig) -> Option<u64> {
    (!cfg.no_timestamp).then(unix_timestamp)
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TowerLevelJson {
    pub m: u32,
    pub r: u64,
    pub deg_a: u64,
    pub index: u64,
    pub image_size: String,
    pub l_degree: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TowerJson {
    pub k: u64,
    pub ell: u64,
    pub max_m: u32,
    /// `[Ã : A]` is assumed to be 1 but only known to be at most this.
    pub atilde_index_bound: u64,
    pub levels: Vec<TowerLevelJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<u64>,
}

fn tower(k: u64, ell: u64, max_m: u32, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let report = tower_report(k, ell, max_m)?;
    match cfg.format {
        Format::Csv | Format::Plain => write!(out, "{}", report.to_csv())?,
        Format::Json => {
            let levels = report
                .levels
                .iter()
                .map(|l| TowerLevelJson {
                    m: l.m,
                    r: l.r,
                    deg_a: l.deg_a,
                    index: l.index,
                    image_size: l.image_size.to_string(),
                    l_degree: l.l_degree.to_string(),
                })
                .collect();
            write_json(
                &TowerJson {
                    k,
                    ell,
                    max_m,
                    atilde_index_bound: report.atilde_index_bound,
                    levels,
                    generated_at: timestamp(cfg),
                },
                out,
            )?
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CountJson {
    pub ell: u64,
    pub m: u32,
    pub t: u64,
    pub d: u64,
    /// Counts as decimal strings, keyed by method.
    pub formula: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub brute: Option<String>,
    pub z_profile: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<u64>,
}

fn count(ell: u64, m: u32, t: u64, d: u64, brute: bool, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let modulus = PrimePower::new(ell, m)?;
    let profile = z_profile(&modulus, t, d)?;
    let formula = count_trace_det(&modulus, t, d)?;
    let brute = if brute {
        Some(count_trace_det_brute(&modulus, t, d)?)
    } else {
        None
    };
    let z = profile.to_csv_row();
    match cfg.format {
        Format::Plain => {
            writeln!(out, "formula: {}", formula.count)?;
            if let Some(b) = &brute {
                writeln!(out, "brute: {}", b.count)?;
            }
            writeln!(out, "z-profile: {z}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["method", "ell", "m", "t", "d", "count", "z_profile"])?;
            for c in std::iter::once(&formula).chain(brute.as_ref()) {
                let method = match c.method {
                    hecke_core::matcount::CountMethod::Formula => "formula",
                    hecke_core::matcount::CountMethod::Brute => "brute",
                };
                w.write_record([
                    method.to_string(),
                    ell.to_string(),
                    m.to_string(),
                    c.t.to_string(),
                    c.d.to_string(),
                    c.count.to_string(),
                    z.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => write_json(
            &CountJson {
                ell,
                m,
                t: formula.t,
                d: formula.d,
                formula: formula.count.to_string(),
                brute: brute.map(|b| b.count.to_string()),
                z_profile: profile.counts.clone(),
                generated_at: timestamp(cfg),
            },
            out,
        )?,
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecayJson {
    pub constant: RationalJson,
    pub base: u64,
    pub exp_num: u32,
    pub exp_den: u32,
    pub approx: f64,
    pub holds: bool,
}

impl DecayJson {
    fn new(b: &DecayBound, delta: &hecke_core::modring::ExactRational) -> Self {
        DecayJson {
            constant: (&b.constant).into(),
            base: b.base,
            exp_num: b.exp_num,
            exp_den: b.exp_den,
            approx: b.to_f64(),
            holds: b.holds(delta),
        }
    }
}

/// Density report as emitted by `density --format json`: the density itself
/// at top level as `num`/`den`/`decimal`.
#[derive(Debug, Serialize, Deserialize)]
pub struct DensityJson {
    #[serde(flatten)]
    pub delta: RationalJson,
    pub kind: String,
    pub k: u32,
    pub n: Option<u32>,
    pub ell: u64,
    pub m: u32,
    pub u: Option<u64>,
    pub v: Option<u64>,
    pub main_term: RationalJson,
    pub main_term_rel_tol: Option<RationalJson>,
    pub within_main_term: Option<bool>,
    pub decay_bound: Option<DecayJson>,
    pub caveats: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<u64>,
}

fn caveat_text(c: &Caveat) -> String {
    match c {
        Caveat::GenericImage => "assumes the generic image (ℓ non-exceptional)".into(),
        Caveat::AtildeIndex { bound } => format!("[Ã:A] taken as 1; only known to be at most {bound}"),
        Caveat::FittedEnvelope => "envelope constants are fitted, not proven".into(),
    }
}

impl DensityJson {
    pub fn new(r: &DensityReport, generated_at: Option<u64>) -> Self {
        DensityJson {
            delta: (&r.delta_exact).into(),
            kind: match r.kind {
                hecke_core::density::DensityKind::Uv => "uv".into(),
                hecke_core::density::DensityKind::Ikeda => "ikeda".into(),
            },
            k: r.k,
            n: r.n,
            ell: r.ell,
            m: r.m,
            u: r.u,
            v: r.v,
            main_term: (&r.main_term).into(),
            main_term_rel_tol: r.main_term_rel_tol.as_ref().map(Into::into),
            within_main_term: r.within_main_term(),
            decay_bound: r.decay_bound.as_ref().map(|b| DecayJson::new(b, &r.delta_exact)),
            caveats: r.caveats.iter().map(caveat_text).collect(),
            generated_at,
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn density(r: &DensityReport, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let j = DensityJson::new(r, timestamp(cfg));
    match cfg.format {
        Format::Json => write_json(&j, out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["kind", "k", "n", "ell", "m", "u", "v", "num", "den", "decimal", "main_num", "main_den"])?;
            w.write_record([
                j.kind.clone(),
                j.k.to_string(),
                opt(j.n),
                j.ell.to_string(),
                j.m.to_string(),
                opt(j.u),
                opt(j.v),
                j.delta.num.clone(),
                j.delta.den.clone(),
                j.delta.decimal.clone(),
                j.main_term.num.clone(),
                j.main_term.den.clone(),
            ])?;
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "delta = {} ≈ {}", r.delta_exact, j.delta.decimal)?;
            writeln!(out, "main term = {} ≈ {}", r.main_term, j.main_term.decimal)?;
            if let (Some(tol), Some(ok)) = (&r.main_term_rel_tol, j.within_main_term) {
                writeln!(out, "|delta/main - 1| ≤ {tol}: {}", if ok { "yes" } else { "no" })?;
            }
            if let Some(b) = &j.decay_bound {
                writeln!(
                    out,
                    "delta ≤ ({})/{}^({}/{}) ≈ {:.6e}: {}",
                    b.constant.to_rational().map_err(Failure::Usage)?,
                    b.base,
                    b.exp_num,
                    b.exp_den,
                    b.approx,
                    if b.holds { "yes" } else { "no" }
                )?;
            }
            for c in &j.caveats {
                writeln!(out, "caveat: {c}")?;
            }
        }
    }
    Ok(())
}

fn status_text(s: ScanStatus) -> &'static str {
    match s {
        ScanStatus::Consistent => "consistent",
        ScanStatus::Deviant => "deviant",
        ScanStatus::CongruenceCandidate => "congruence candidate",
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TableSummaryJson {
    pub weight: u32,
    pub ell: u64,
    pub m: u32,
    pub x: u64,
    pub pi_x: u64,
    pub nonzero_cells: usize,
    pub worst_sigmas: f64,
    pub status: String,
    pub grh_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<u64>,
}

fn scan_table(r: &ScanResult, csv_path: Option<&std::path::Path>, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    if let Some(path) = csv_path {
        std::fs::write(path, r.table_csv()?)?;
    }
    let c = &r.config;
    let summary = TableSummaryJson {
        weight: c.weight,
        ell: c.modulus.ell(),
        m: c.modulus.m(),
        x: c.x,
        pi_x: r.pi_x,
        nonzero_cells: r.table.as_ref().map_or(0, |t| t.len()),
        worst_sigmas: r.deviation_sigmas,
        status: status_text(r.status).into(),
        grh_scale: r.grh_scale,
        generated_at: timestamp(cfg),
    };
    match cfg.format {
        Format::Csv => write!(out, "{}", r.table_csv()?)?,
        Format::Json => write_json(&summary, out)?,
        Format::Plain => {
            writeln!(out, "weight {} mod {}, p ≤ {} ({} primes)", c.weight, c.modulus, c.x, r.pi_x)?;
            writeln!(out, "non-zero cells: {}", summary.nonzero_cells)?;
            writeln!(out, "worst cell: {:.2}σ ({})", r.deviation_sigmas, summary.status)?;
            writeln!(out, "GRH error scale: {:.3e}", r.grh_scale)?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CellJson {
    pub weight: u32,
    pub ell: u64,
    pub m: u32,
    pub x: u64,
    pub u: u64,
    pub v: u64,
    pub pi_x: u64,
    pub count: u64,
    pub expected: RationalJson,
    pub sigmas: f64,
    pub status: String,
    pub grh_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<u64>,
}

fn scan_cell(r: &ScanResult, expected: &DensityReport, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let (u, v) = (expected.u.unwrap_or(0), expected.v.unwrap_or(0));
    let count = r.table_count(u, v);
    let sigmas = binomial_sigmas(count, &expected.delta_exact, r.pi_x);
    let c = &r.config;
    let j = CellJson {
        weight: c.weight,
        ell: c.modulus.ell(),
        m: c.modulus.m(),
        x: c.x,
        u,
        v,
        pi_x: r.pi_x,
        count,
        expected: (&expected.delta_exact).into(),
        sigmas,
        status: status_text(ScanStatus::classify(sigmas)).into(),
        grh_scale: r.grh_scale,
        generated_at: timestamp(cfg),
    };
    match cfg.format {
        Format::Json => write_json(&j, out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["u", "v", "count", "expected_num", "expected_den", "sigmas"])?;
            w.write_record([
                u.to_string(),
                v.to_string(),
                count.to_string(),
                j.expected.num.clone(),
                j.expected.den.clone(),
                sigmas.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "π_f({}, {u}, {v}; {}) = {count} of {} primes", c.x, c.modulus, r.pi_x)?;
            writeln!(out, "expected density {} ≈ {}", expected.delta_exact, j.expected.decimal)?;
            writeln!(out, "deviation {:.2}σ ({})", sigmas, j.status)?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IkedaScanJson {
    pub k: u32,
    pub n: u32,
    pub ell: u64,
    pub m: u32,
    pub x: u64,
    pub pi_x: u64,
    pub count: u64,
    pub root_set_count: u64,
    pub empirical: RationalJson,
    pub expected: RationalJson,
    pub sigmas: f64,
    pub status: String,
    pub grh_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generated_at: Option<u64>,
}

fn scan_ikeda(r: &ScanResult, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let c = &r.config;
    let params = c.params.expect("ikeda scans carry lift parameters");
    let expected = r.expected.as_ref().expect("ikeda scans carry a density");
    let empirical = r.empirical.as_ref().expect("ikeda scans carry a ratio");
    let j = IkedaScanJson {
        k: params.k(),
        n: params.n(),
        ell: c.modulus.ell(),
        m: c.modulus.m(),
        x: c.x,
        pi_x: r.pi_x,
        count: r.count.unwrap_or(0),
        root_set_count: r.root_set_count.unwrap_or(0),
        empirical: empirical.into(),
        expected: (&expected.delta_exact).into(),
        sigmas: r.deviation_sigmas,
        status: status_text(r.status).into(),
        grh_scale: r.grh_scale,
        generated_at: timestamp(cfg),
    };
    match cfg.format {
        Format::Json => write_json(&j, out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["k", "n", "ell", "m", "x", "pi_x", "count", "expected_num", "expected_den", "sigmas"])?;
            w.write_record([
                j.k.to_string(),
                j.n.to_string(),
                j.ell.to_string(),
                j.m.to_string(),
                j.x.to_string(),
                j.pi_x.to_string(),
                j.count.to_string(),
                j.expected.num.clone(),
                j.expected.den.clone(),
                j.sigmas.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "π_F({}, {}) = {} of {} primes (root-set count {})", c.x, c.modulus, j.count, j.pi_x, j.root_set_count)?;
            writeln!(out, "empirical {} ≈ {}", empirical, j.empirical.decimal)?;
            writeln!(out, "expected {} ≈ {}", expected.delta_exact, j.expected.decimal)?;
            writeln!(out, "deviation {:.2}σ ({})", j.sigmas, j.status)?;
            writeln!(out, "GRH error scale: {:.3e}", j.grh_scale)?;
        }
    }
    Ok(())
}

fn verify_cmd(level: Level, hooks: &Hooks, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let results = verify::run_checks(level, hooks);
    match cfg.format {
        Format::Json => write_json(&results, out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["check", "passed", "detail"])?;
            for r in &results {
                w.write_record([r.name.as_str(), if r.passed { "true" } else { "false" }, r.detail.as_str()])?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for r in &results {
                writeln!(out, "{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail)?;
            }
        }
    }
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
