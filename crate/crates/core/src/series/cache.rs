//! On-disk cache of eigenform coefficients.
//!
//! One text file per `(weight, q, X)`: a header line
//! `HDF1 weight=<w> ell=<ℓ> m=<m> X=<X>` followed by `a(0), …, a(X)` as
//! decimal residues, one per line.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use super::{eigenform_coeffs, EigenformSpec, SeriesModQ};
use crate::error::{Error, Result};
use crate::modring::PrimePower;

pub const CACHE_DIR_ENV: &str = "HECKE_CACHE_DIR";
const DEFAULT_DIR: &str = "./cache";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCache {
    dir: PathBuf,
}

impl CoefficientCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CoefficientCache { dir: dir.into() }
    }

    /// `$HECKE_CACHE_DIR`, or `./cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        CoefficientCache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, weight: u32, modulus: PrimePower, precision: usize) -> PathBuf {
        self.dir.join(format!(
            "hdf1_w{weight}_l{}_m{}_X{precision}.txt",
            modulus.ell(),
            modulus.m()
        ))
    }

    pub fn load(&self, weight: u32, modulus: PrimePower, precision: usize) -> Result<Option<SeriesModQ>> {
        let path = self.path_for(weight, modulus, precision);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        parse_cache_file(&text, weight, modulus, precision)
            .map(Some)
            .map_err(|reason| Error::CacheFormat {
                path: path.display().to_string(),
                reason,
            })
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place.
    pub fn store(&self, weight: u32, series: &SeriesModQ) -> Result<PathBuf> {
        static COUNTER: AtomicU64 = AtomicU64::new(0);
        fs::create_dir_all(&self.dir)?;
        let modulus = series.modulus();
        let path = self.path_for(weight, modulus, series.precision());
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}-{}",
            std::process::id(),
            COUNTER.fetch_add(1, Ordering::Relaxed),
            path.file_name().and_then(|n| n.to_str()).unwrap_or("series")
        ));
        {
            let mut out = BufWriter::new(fs::File::create(&tmp)?);
            write_series(&mut out, weight, series)?;
            out.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

pub fn write_series(out: &mut impl Write, weight: u32, series: &SeriesModQ) -> std::io::Result<()> {
    let modulus = series.modulus();
    writeln!(
        out,
        "HDF1 weight={weight} ell={} m={} X={}",
        modulus.ell(),
        modulus.m(),
        series.precision()
    )?;
    for c in series.coeffs() {
        writeln!(out, "{c}")?;
    }
    Ok(())
}

fn parse_cache_file(
    text: &str,
    weight: u32,
    modulus: PrimePower,
    precision: usize,
) -> std::result::Result<SeriesModQ, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let expected = format!(
        "HDF1 weight={weight} ell={} m={} X={precision}",
        modulus.ell(),
        modulus.m()
    );
    if header.trim_end() != expected {
        return Err(format!("header {header:?} does not match {expected:?}"));
    }
    let q = modulus.q();
    let mut coeffs = Vec::with_capacity(precision + 1);
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let c: u64 = line
            .parse()
            .map_err(|e| format!("line {}: {e}", i + 2))?;
        if c >= q {
            return Err(format!("line {}: {c} is not reduced mod {q}", i + 2));
        }
        coeffs.push(c);
    }
    if coeffs.len() != precision + 1 {
        return Err(format!("expected {} coefficients, found {}", precision + 1, coeffs.len()));
    }
    Ok(SeriesModQ::new(modulus, coeffs))
}

/// [`eigenform_coeffs`] backed by the disk cache; computes and stores on a
/// miss.
pub fn eigenform_coeffs_cached(
    cache: &CoefficientCache,
    spec: EigenformSpec,
    precision: usize,
    modulus: PrimePower,
) -> Result<SeriesModQ> {
    if let Some(s) = cache.load(spec.weight(), modulus, precision)? {
        return Ok(s);
    }
    let s = eigenform_coeffs(spec, precision, modulus)?;
    cache.store(spec.weight(), &s)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_file_layout() {
        let m = PrimePower::new(5, 2).unwrap();
        let s = SeriesModQ::new(m, vec![0, 1, 24, 3]);
        let mut buf = Vec::new();
        write_series(&mut buf, 12, &s).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "HDF1 weight=12 ell=5 m=2 X=3\n0\n1\n24\n3\n");
    }

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CoefficientCache::new(dir.path().join("nested"));
        let m = PrimePower::new(23, 1).unwrap();
        let spec = EigenformSpec::new(16).unwrap();
        assert!(cache.load(16, m, 500).unwrap().is_none());
        let fresh = eigenform_coeffs_cached(&cache, spec, 500, m).unwrap();
        let path = cache.path_for(16, m, 500);
        assert!(path.exists());
        let loaded = cache.load(16, m, 500).unwrap().unwrap();
        assert_eq!(fresh, loaded);
        // no temporary files left behind
        let leftovers = fs::read_dir(cache.dir())
            .unwrap()
            .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with(".tmp"))
            .count();
        assert_eq!(leftovers, 0);
    }

    #[test]
    fn corrupt_files_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CoefficientCache::new(dir.path());
        let m = PrimePower::new(5, 1).unwrap();
        fs::write(cache.path_for(12, m, 2), "HDF1 weight=12 ell=5 m=1 X=2\n0\n1\n").unwrap();
        assert!(matches!(cache.load(12, m, 2), Err(Error::CacheFormat { .. })));
        fs::write(cache.path_for(12, m, 2), "HDF1 weight=12 ell=5 m=1 X=2\n0\n1\n7\n").unwrap();
        assert!(matches!(cache.load(12, m, 2), Err(Error::CacheFormat { .. })));
        fs::write(cache.path_for(12, m, 2), "HDF1 weight=16 ell=5 m=1 X=2\n0\n1\n1\n").unwrap();
        assert!(matches!(cache.load(12, m, 2), Err(Error::CacheFormat { .. })));
    }

    #[test]
    fn concurrent_writers() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CoefficientCache::new(dir.path());
        let m = PrimePower::new(7, 2).unwrap();
        let spec = EigenformSpec::new(12).unwrap();
        let results: Vec<SeriesModQ> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|_| s.spawn(|| eigenform_coeffs_cached(&cache, spec, 2000, m).unwrap()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for r in &results {
            assert_eq!(r, &results[0]);
        }
        assert_eq!(cache.load(12, m, 2000).unwrap().unwrap(), results[0]);
    }
}
