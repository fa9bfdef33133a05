//! Binary cache format.
//!
//! ```text
//! "PGT1" | count: u64 | primes: u64 x count
//!        | prefix sums: (low u64, high u64) x count
//!        | theta: (lo f64 bits, hi f64 bits) x count
//!        | checksum: u64
//! ```
//!
//! All integers little-endian. The checksum is the first eight bytes (read
//! little-endian) of the SHA-256 digest of everything before it.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{PrimeTable, DEFAULT_PRODUCT_CAP};
use crate::error::{Error, Result};
use crate::rigor::Interval;

pub const CACHE_MAGIC: &[u8; 4] = b"PGT1";

const HEADER_LEN: usize = 4 + 8;
const RECORD_LEN: usize = 8 + 16 + 16;

fn checksum(bytes: &[u8]) -> u64 {
    let digest = Sha256::digest(bytes);
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

pub fn encode(table: &PrimeTable) -> Vec<u8> {
    let n = table.primes.len();
    let mut out = Vec::with_capacity(HEADER_LEN + n * RECORD_LEN + 8);
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for &p in &table.primes {
        out.extend_from_slice(&p.to_le_bytes());
    }
    for &s in &table.prefix_sum {
        out.extend_from_slice(&(s as u64).to_le_bytes());
        out.extend_from_slice(&((s >> 64) as u64).to_le_bytes());
    }
    for t in &table.theta_prefix {
        out.extend_from_slice(&t.lo().to_bits().to_le_bytes());
        out.extend_from_slice(&t.hi().to_bits().to_le_bytes());
    }
    let sum = checksum(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

fn read_u64(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("bounds checked"))
}

pub fn decode(bytes: &[u8]) -> Result<PrimeTable> {
    if bytes.len() < HEADER_LEN + 8 {
        return Err(Error::CorruptCache(format!("file too short ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != CACHE_MAGIC {
        return Err(Error::CorruptCache("bad magic".into()));
    }
    let n = read_u64(bytes, 4);
    let expected = (n as u128) * RECORD_LEN as u128 + (HEADER_LEN + 8) as u128;
    if bytes.len() as u128 != expected {
        return Err(Error::CorruptCache(format!(
            "length {} does not match count {n} (expected {expected})",
            bytes.len()
        )));
    }
    let body = bytes.len() - 8;
    if checksum(&bytes[..body]) != read_u64(bytes, body) {
        return Err(Error::CorruptCache("checksum mismatch".into()));
    }
    if n == 0 {
        return Err(Error::CorruptCache("empty table".into()));
    }
    let n = n as usize;
    let mut at = HEADER_LEN;
    let mut primes = Vec::with_capacity(n);
    for _ in 0..n {
        primes.push(read_u64(bytes, at));
        at += 8;
    }
    let mut prefix_sum = Vec::with_capacity(n);
    for _ in 0..n {
        let lo = read_u64(bytes, at) as u128;
        let hi = read_u64(bytes, at + 8) as u128;
        prefix_sum.push(lo | (hi << 64));
        at += 16;
    }
    let mut theta_prefix = Vec::with_capacity(n);
    for i in 0..n {
        let lo = f64::from_bits(read_u64(bytes, at));
        let hi = f64::from_bits(read_u64(bytes, at + 8));
        at += 16;
        let iv = Interval::new(lo, hi)
            .map_err(|_| Error::CorruptCache(format!("bad theta interval at {}", i + 1)))?;
        theta_prefix.push(iv);
    }
    Ok(PrimeTable::from_parts(
        primes,
        prefix_sum,
        theta_prefix,
        DEFAULT_PRODUCT_CAP,
    ))
}

pub fn save_cache(table: &PrimeTable, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode(table))?;
    Ok(())
}

pub fn load_cache(path: impl AsRef<Path>) -> Result<PrimeTable> {
    decode(&fs::read(path)?)
}
