//! Settings resolution: flags, then the `--config` file, then environment,
//! then defaults.

use std::path::{Path, PathBuf};

use hecke_core::series::CACHE_DIR_ENV;

use crate::output::Format;

pub const THREADS_ENV: &str = "HECKE_THREADS";
const DEFAULT_CACHE_DIR: &str = "./cache";

/// Settings that may come from any layer; `None` means "not set here".
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub no_timestamp: Option<bool>,
}

impl Layer {
    fn or(self, lower: Layer) -> Layer {
        Layer {
            format: self.format.or(lower.format),
            cache_dir: self.cache_dir.or(lower.cache_dir),
            threads: self.threads.or(lower.threads),
            no_timestamp: self.no_timestamp.or(lower.no_timestamp),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub format: Format,
    pub cache_dir: PathBuf,
    pub threads: usize,
    pub no_timestamp: bool,
}

fn parse_threads(value: &str, source: &str) -> Result<usize, String> {
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("{source}: threads must be a positive integer, got {value:?}")),
    }
}

fn parse_bool(value: &str, source: &str) -> Result<bool, String> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("{source}: expected true or false, got {other:?}")),
    }
}

/// One `key=value` per line; blank lines and `#` comments are ignored.
pub fn parse_config_file(text: &str, path: &Path) -> Result<Layer, String> {
    let mut layer = Layer::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let source = format!("{}:{}", path.display(), i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{source}: expected key=value"))?;
        let value = value.trim();
        match key.trim() {
            "format" => layer.format = Some(value.parse().map_err(|e| format!("{source}: {e}"))?),
            "cache_dir" => layer.cache_dir = Some(PathBuf::from(value)),
            "threads" => layer.threads = Some(parse_threads(value, &source)?),
            "no_timestamp" => layer.no_timestamp = Some(parse_bool(value, &source)?),
            other => return Err(format!("{source}: unknown key {other:?}")),
        }
    }
    Ok(layer)
}

pub fn env_layer(get: impl Fn(&str) -> Option<String>) -> Result<Layer, String> {
    let mut layer = Layer::default();
    if let Some(dir) = get(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
        layer.cache_dir = Some(PathBuf::from(dir));
    }
    if let Some(t) = get(THREADS_ENV).filter(|t| !t.is_empty()) {
        layer.threads = Some(parse_threads(&t, THREADS_ENV)?);
    }
    Ok(layer)
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn resolve(flags: Layer, file: Option<Layer>, env: Layer) -> RunConfig {
    let merged = flags.or(file.unwrap_or_default()).or(env);
    RunConfig {
        format: merged.format.unwrap_or(Format::Plain),
        cache_dir: merged.cache_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
        threads: merged.threads.unwrap_or_else(default_threads),
        no_timestamp: merged.no_timestamp.unwrap_or(false),
    }
}

/// Reads `--config`, if given, and the process environment.
pub fn load(flags: Layer, config_path: Option<&Path>) -> Result<RunConfig, String> {
    let file = match config_path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Some(parse_config_file(&text, p)?)
        }
        None => None,
    };
    let env = env_layer(|k| std::env::var(k).ok())?;
    Ok(resolve(flags, file, env))
}
