//! Segmented sieve of Eratosthenes over odd numbers.

use rayon::prelude::*;

/// Default segment length in integers (half of it in odd-only cells).
pub const DEFAULT_SEGMENT: u64 = 1 << 20;

const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// Plain sieve for the base primes up to `limit` inclusive.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Odd primes in `[lo, hi)`, given every odd base prime up to `sqrt(hi)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    // cell i stands for the odd number first + 2i
    let first = if lo.is_multiple_of(2) { lo + 1 } else { lo };
    if first >= hi {
        return Vec::new();
    }
    let cells = ((hi - first) as usize).div_ceil(2);
    let mut composite = vec![false; cells];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(first.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut idx = ((start - first) / 2) as usize;
        while idx < cells {
            composite[idx] = true;
            idx += p as usize;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| first + 2 * i as u64)
        .filter(|&v| v > 1)
        .collect()
}

/// All primes in `[lo, hi)`, segments sieved in parallel and concatenated in order.
pub fn primes_in(lo: u64, hi: u64, segment: u64) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let segment = segment.max(64);
    let base: Vec<u64> = simple_sieve(isqrt(hi) + 1)
        .into_iter()
        .filter(|&p| p > 2)
        .collect();
    let starts: Vec<u64> = (lo..hi).step_by(segment as usize).collect();
    let chunks: Vec<Vec<u64>> = starts
        .par_iter()
        .map(|&s| sieve_segment(s, (s + segment).min(hi), &base))
        .collect();
    let mut out = Vec::with_capacity(chunks.iter().map(Vec::len).sum::<usize>() + 1);
    if lo <= 2 && 2 < hi {
        out.push(2);
    }
    for c in chunks {
        out.extend(c);
    }
    out
}

/// Upper bound on the n-th prime: `n(ln n + ln ln n)` for n >= 6.
pub fn nth_prime_upper(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 2
}

/// The first `n` primes.
pub fn first_primes(n: u64, segment: u64) -> Vec<u64> {
    if n <= SMALL_PRIMES.len() as u64 {
        return SMALL_PRIMES[..n as usize].to_vec();
    }
    let mut limit = nth_prime_upper(n);
    let mut primes = primes_in(0, limit + 1, segment);
    // extend if the bound ever comes up short
    while (primes.len() as u64) < n {
        let next = limit + limit / 8 + 1024;
        primes.extend(primes_in(limit + 1, next + 1, segment));
        limit = next;
    }
    primes.truncate(n as usize);
    primes
}
