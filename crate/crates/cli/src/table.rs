//! Locating, loading and building the prime table for a command.

use std::path::PathBuf;

use primebounds::prime_core::{load_cache, save_cache};
use primebounds::{Error, PrimeTable};

use crate::Cli;

/// Directory holding the default cache file when `--cache` is not given.
pub const CACHE_DIR_ENV: &str = "PRIMEBOUNDS_CACHE_DIR";

const DEFAULT_FILE: &str = "primes.bin";

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    cli.cache.clone().or_else(|| {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(DEFAULT_FILE))
    })
}

fn finish(cli: &Cli, table: PrimeTable) -> PrimeTable {
    match cli.product_cap {
        Some(cap) => table.with_product_cap(cap),
        None => table,
    }
}

/// A table with at least `needed` primes (and at least `--count`), reusing
/// the cache when it is large enough and refreshing it otherwise.
pub fn obtain(cli: &Cli, needed: u64) -> Result<PrimeTable, Error> {
    let count = cli.count.max(needed);
    let path = cache_path(cli);
    if let Some(p) = path.as_ref().filter(|p| p.exists()) {
        let table = load_cache(p)?;
        if table.count() >= count {
            return Ok(finish(cli, table));
        }
    }
    let table = PrimeTable::build(count)?;
    if let Some(p) = path {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        save_cache(&table, &p)?;
    }
    Ok(finish(cli, table))
}

/// Builds `--count` primes and writes them to the configured cache path.
pub fn build_and_store(cli: &Cli) -> Result<(PrimeTable, PathBuf), Error> {
    let path = cache_path(cli).ok_or_else(|| Error::Domain {
        function: "sieve",
        detail: format!("no cache path: pass --cache or set {CACHE_DIR_ENV}"),
    })?;
    let table = PrimeTable::build(cli.count)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    save_cache(&table, &path)?;
    Ok((finish(cli, table), path))
}
