use std::process::Command;

use hecke_cli::output::RationalJson;
use hecke_cli::verify::Hooks;
use hecke_cli::{run_with, run_with_hooks, CountJson, DensityJson, IkedaScanJson, TowerJson};
use hecke_core::density::{delta_f_generic, delta_uv_generic, LiftParams};
use hecke_core::experiment::{scan_pi_big_f_for, scan_pi_f_table};
use hecke_core::galois_tower::tower_report;
use hecke_core::matcount::count_trace_det;
use hecke_core::modring::{ExactRational, PrimePower};
use hecke_core::series::CoefficientCache;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn hecke(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hecke").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hecke"));
    c.env_remove("HECKE_THREADS").env_remove("HECKE_CACHE_DIR");
    c
}

fn pp(ell: u64, m: u32) -> PrimePower {
    PrimePower::new(ell, m).unwrap()
}

#[test]
fn count_plain_example() {
    let r = hecke(&["count", "--ell", "5", "--m", "1", "--t", "0", "--d", "1", "--brute"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out, "formula: 30\nbrute: 30\nz-profile: 3,2\n");
}

#[test]
fn count_csv_matches_core() {
    let r = hecke(&["count", "--ell", "3", "--m", "2", "--t", "4", "--d", "7", "--brute", "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let expected = count_trace_det(&pp(3, 2), 4, 7).unwrap().count;
    let mut rdr = csv::Reader::from_reader(r.out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers, vec!["method", "ell", "m", "t", "d", "count", "z_profile"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    for (row, method) in rows.iter().zip(["formula", "brute"]) {
        assert_eq!(&row[0], method);
        assert_eq!(row[5].parse::<u128>().unwrap(), expected);
    }
}

#[test]
fn count_json_round_trip() {
    let r = hecke(&["count", "--ell", "7", "--m", "1", "--t", "3", "--d", "2", "--format", "json", "--no-timestamp"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let j: CountJson = serde_json::from_str(&r.out).unwrap();
    let core = count_trace_det(&pp(7, 1), 3, 2).unwrap();
    assert_eq!(j.formula, core.count.to_string());
    assert_eq!(j.brute, None);
    assert_eq!(j.generated_at, None);
    assert_eq!(j.z_profile.len(), 2);
}

#[test]
fn tower_index_column() {
    let r = hecke(&["tower", "--k", "12", "--ell", "11", "--max-m", "3"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let mut rdr = csv::Reader::from_reader(r.out.as_bytes());
    let idx = rdr.headers().unwrap().iter().position(|h| h == "index").unwrap();
    let index: Vec<String> = rdr.records().map(|row| row.unwrap()[idx].to_string()).collect();
    assert_eq!(index, ["1", "11", "11"]);
}

#[test]
fn tower_json_matches_core() {
    let r = hecke(&["tower", "--k", "22", "--ell", "5", "--max-m", "4", "--format", "json", "--no-timestamp"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let j: TowerJson = serde_json::from_str(&r.out).unwrap();
    let core = tower_report(22, 5, 4).unwrap();
    assert_eq!(j.levels.len(), core.levels.len());
    for (a, b) in j.levels.iter().zip(&core.levels) {
        assert_eq!((a.m, a.r, a.deg_a, a.index), (b.m, b.r, b.deg_a, b.index));
        assert_eq!(a.l_degree, b.l_degree.to_string());
    }
}

#[test]
fn density_ikeda_json() {
    // The published value for this example is 5/36; enumeration gives 47/288.
    let r = hecke(&["density", "ikeda", "--k", "10", "--n", "2", "--ell", "7", "--m", "1", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let j: DensityJson = serde_json::from_str(&r.out).unwrap();
    assert_eq!((j.delta.num.as_str(), j.delta.den.as_str()), ("47", "288"));
    assert_eq!(j.delta.decimal, "0.163194444444444");
    assert!(j.generated_at.is_some());
    let core = delta_f_generic(LiftParams::new(10, 2).unwrap(), &pp(7, 1)).unwrap();
    assert_eq!(j.delta.to_rational().unwrap(), core.delta_exact);
    assert_eq!(j.within_main_term, Some(true));
    assert!(j.decay_bound.unwrap().holds);
}

#[test]
fn density_uv_round_trip() {
    for (u, v) in [(1, 1), (3, 0), (5, 6)] {
        let (us, vs) = (u.to_string(), v.to_string());
        let r = hecke(&["density", "uv", "--k", "12", "--ell", "7", "--m", "1", "--u", &us, "--v", &vs, "--format", "json"]);
        assert_eq!(r.code, 0, "{}", r.err);
        let j: DensityJson = serde_json::from_str(&r.out).unwrap();
        let core = delta_uv_generic(12, &pp(7, 1), u, v).unwrap();
        assert_eq!(j.delta.to_rational().unwrap(), core.delta_exact);
        assert_eq!((j.u, j.v), (Some(u), Some(v)));
    }
}

#[test]
fn density_csv_row() {
    let r = hecke(&["density", "ikeda", "--k", "8", "--n", "4", "--ell", "5", "--m", "1", "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let mut rdr = csv::Reader::from_reader(r.out.as_bytes());
    let row = rdr.records().next().unwrap().unwrap();
    let core = delta_f_generic(LiftParams::new(8, 4).unwrap(), &pp(5, 1)).unwrap();
    let parsed = ExactRational::from_parts(&row[7], &row[8]).unwrap();
    assert_eq!(parsed, core.delta_exact);
}

#[test]
fn no_timestamp_is_bit_identical() {
    let args = ["density", "ikeda", "--k", "12", "--n", "4", "--ell", "5", "--m", "2", "--format", "json", "--no-timestamp"];
    let a = hecke(&args);
    let b = hecke(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.out, b.out);
    assert!(!a.out.contains("generated_at"));
}

#[test]
fn scan_pif_table_csv_matches_core() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("table.csv");
    let cache = dir.path().join("cache");
    let r = hecke(&[
        "scan",
        "pif",
        "--weight",
        "12",
        "--ell",
        "11",
        "--m",
        "1",
        "--x",
        "5000",
        "--csv",
        out_csv.to_str().unwrap(),
        "--cache-dir",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    let written = std::fs::read_to_string(&out_csv).unwrap();
    let core = scan_pi_f_table(12, pp(11, 1), 5000, None).unwrap();
    assert_eq!(written, core.table_csv().unwrap());
    assert!(r.out.contains("consistent"));
}

#[test]
fn scan_pif_cell_json() {
    let r = hecke(&["scan", "pif-cell", "--weight", "12", "--ell", "7", "--m", "1", "--x", "5000", "--u", "2", "--v", "3", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let j: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let core = scan_pi_f_table(12, pp(7, 1), 5000, None).unwrap();
    assert_eq!(j["count"], core.table_count(2, 3));
    let expected: RationalJson = serde_json::from_value(j["expected"].clone()).unwrap();
    assert_eq!(expected.to_rational().unwrap(), delta_uv_generic(12, &pp(7, 1), 2, 3).unwrap().delta_exact);
}

#[test]
fn scan_ikeda_json_matches_core() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let r = hecke(&["scan", "ikeda", "--k", "10", "--n", "2", "--ell", "7", "--m", "1", "--x", "5000", "--format", "json", "--cache-dir", cache]);
    assert_eq!(r.code, 0, "{}", r.err);
    let j: IkedaScanJson = serde_json::from_str(&r.out).unwrap();
    let core = scan_pi_big_f_for(LiftParams::new(10, 2).unwrap(), pp(7, 1), 5000, Some(&CoefficientCache::new(cache))).unwrap();
    assert_eq!(Some(j.count), core.count);
    assert_eq!(j.count, j.root_set_count);
    assert_eq!(j.pi_x, core.pi_x);
    assert!(j.grh_scale > 0.0);
}

#[test]
fn exit_codes() {
    let guard = hecke(&["count", "--ell", "1000003", "--m", "2", "--t", "0", "--d", "1", "--brute"]);
    assert_eq!(guard.code, 2);
    assert!(guard.err.starts_with("error:"));

    let scan_guard = hecke(&["scan", "pif", "--weight", "12", "--ell", "101", "--m", "2", "--x", "1000"]);
    assert_eq!(scan_guard.code, 2, "{}", scan_guard.err);

    let composite = hecke(&["count", "--ell", "4", "--m", "1", "--t", "0", "--d", "1"]);
    assert_eq!(composite.code, 1);
    assert!(composite.err.starts_with("error:"));

    let bad_params = hecke(&["density", "ikeda", "--k", "11", "--n", "2", "--ell", "7", "--m", "1"]);
    assert_eq!(bad_params.code, 1);

    let unknown = hecke(&["count", "--ell", "5", "--m", "1", "--t", "0", "--d", "1", "--frobnicate"]);
    assert_eq!(unknown.code, 1);
    assert!(unknown.err.starts_with("error:"));

    assert_eq!(hecke(&["--help"]).code, 0);
    assert_eq!(hecke(&["--threads", "0", "verify"]).code, 1);
}

#[test]
fn verify_quick_passes_and_catches_mutation() {
    let r = hecke(&["verify"]);
    assert_eq!(r.code, 0, "{}{}", r.out, r.err);
    assert!(r.out.lines().all(|l| l.starts_with("PASS ")));

    fn off_by_one(m: &PrimePower, t: u64, d: u64) -> hecke_core::Result<u128> {
        Ok(count_trace_det(m, t, d)?.count + 1)
    }
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with_hooks(["hecke", "verify"], &mut out, &mut err, &Hooks { count: off_by_one });
    assert_eq!(code, 3);
    assert!(String::from_utf8(out).unwrap().contains("FAIL "));
}

#[test]
fn binary_precedence_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("hecke.conf");
    std::fs::write(&conf, "# settings\nformat = json\nno_timestamp = true\n").unwrap();
    let conf = conf.to_str().unwrap();
    let base = ["count", "--ell", "5", "--m", "1", "--t", "0", "--d", "1"];

    let from_file = binary().args(base).args(["--config", conf]).output().unwrap();
    assert!(from_file.status.success());
    let j: CountJson = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(j.formula, "30");
    assert_eq!(j.generated_at, None);

    let flag_wins = binary().args(base).args(["--config", conf, "--format", "plain"]).output().unwrap();
    assert!(String::from_utf8(flag_wins.stdout).unwrap().starts_with("formula: 30"));

    let bad_env = binary().args(base).env("HECKE_THREADS", "lots").output().unwrap();
    assert_eq!(bad_env.status.code(), Some(1));
    assert!(String::from_utf8(bad_env.stderr).unwrap().starts_with("error:"));

    let env_ok = binary().args(base).env("HECKE_THREADS", "2").output().unwrap();
    assert!(env_ok.status.success());

    let guard = binary().args(["count", "--ell", "1000003", "--m", "2", "--t", "0", "--d", "1", "--brute"]).output().unwrap();
    assert_eq!(guard.status.code(), Some(2));
}
