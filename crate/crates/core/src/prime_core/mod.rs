//! Prime tables: the first N primes with exact prefix sums and certified
//! enclosures of the Chebyshev function at every prime.

mod cache;
pub mod sieve;

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rigor::Interval;

pub use cache::{load_cache, save_cache, CACHE_MAGIC};

/// Default ceiling on exact primorial queries.
pub const DEFAULT_PRODUCT_CAP: u64 = 5000;

/// Default ceiling on table size (about 40 bytes per prime).
pub const DEFAULT_MAX_COUNT: u64 = 100_000_000;

/// Declared bound on the width contributed per accumulated term of theta:
/// `width(theta_prefix[i]) <= i * THETA_EPS_PER_TERM`.
///
/// Each term is `ln p` widened by 4 ulp each way (ulp of `ln p < 64` is at
/// most 2^-47); the exact fixed-point sum adds two final roundings of at
/// most `i * 2^-46` together.
pub const THETA_EPS_PER_TERM: f64 = 1.0 / (1u64 << 43) as f64;

// theta is accumulated exactly in i128 at this binary scale
const THETA_FIXED_BITS: i32 = 64;

#[derive(Clone, Debug)]
pub struct TableConfig {
    pub segment_size: u64,
    pub max_count: u64,
    pub product_cap: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self {
            segment_size: sieve::DEFAULT_SEGMENT,
            max_count: DEFAULT_MAX_COUNT,
            product_cap: DEFAULT_PRODUCT_CAP,
        }
    }
}

/// Immutable table of the first `count` primes, 1-indexed externally.
#[derive(Debug)]
pub struct PrimeTable {
    primes: Vec<u64>,
    prefix_sum: Vec<u128>,
    theta_prefix: Vec<Interval>,
    product_cap: u64,
    primorials: OnceLock<Vec<BigUint>>,
}

impl PartialEq for PrimeTable {
    fn eq(&self, other: &Self) -> bool {
        self.primes == other.primes
            && self.prefix_sum == other.prefix_sum
            && self.theta_prefix.len() == other.theta_prefix.len()
            && self
                .theta_prefix
                .iter()
                .zip(&other.theta_prefix)
                .all(|(a, b)| {
                    a.lo().to_bits() == b.lo().to_bits() && a.hi().to_bits() == b.hi().to_bits()
                })
    }
}

/// `E_n = p_1 p_2 ... p_n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclidNumber {
    pub n: u64,
    pub value: BigUint,
}

fn fixed_to_f64_down(v: i128) -> f64 {
    let f = v as f64;
    let f = if (f as i128) > v { f.next_down() } else { f };
    f / (THETA_FIXED_BITS as f64).exp2()
}

fn fixed_to_f64_up(v: i128) -> f64 {
    let f = v as f64;
    let f = if (f as i128) < v { f.next_up() } else { f };
    f / (THETA_FIXED_BITS as f64).exp2()
}

/// Per-term enclosure of `ln p` as exact fixed-point integers.
fn ln_term_fixed(p: u64) -> (i128, i128) {
    let t = Interval::point(p as f64)
        .ln()
        .expect("primes are positive");
    let scale = (THETA_FIXED_BITS as f64).exp2();
    // t * 2^64 >= 2^63 for p >= 2, so both products are exact integers
    ((t.lo() * scale) as i128, (t.hi() * scale) as i128)
}

impl PrimeTable {
    pub fn build(n_target: u64) -> Result<Self> {
        Self::build_with(n_target, &TableConfig::default())
    }

    pub fn build_with(n_target: u64, config: &TableConfig) -> Result<Self> {
        if n_target == 0 {
            return Err(Error::InvalidRange {
                from: 1,
                to: 0,
                detail: "a table needs at least one prime".into(),
            });
        }
        if n_target > config.max_count {
            return Err(Error::ResourceExhausted {
                requested: n_target,
                ceiling: config.max_count,
            });
        }
        let primes = sieve::first_primes(n_target, config.segment_size);
        Ok(Self::from_primes(primes, config.product_cap))
    }

    pub(crate) fn from_primes(primes: Vec<u64>, product_cap: u64) -> Self {
        let mut prefix_sum = Vec::with_capacity(primes.len());
        let mut theta_prefix = Vec::with_capacity(primes.len());
        let mut sum = 0u128;
        let (mut lo, mut hi) = (0i128, 0i128);
        for &p in &primes {
            sum += p as u128;
            prefix_sum.push(sum);
            let (tl, th) = ln_term_fixed(p);
            lo += tl;
            hi += th;
            theta_prefix.push(Interval::from_bounds_unchecked(
                fixed_to_f64_down(lo),
                fixed_to_f64_up(hi),
            ));
        }
        Self {
            primes,
            prefix_sum,
            theta_prefix,
            product_cap,
            primorials: OnceLock::new(),
        }
    }

    pub(crate) fn from_parts(
        primes: Vec<u64>,
        prefix_sum: Vec<u128>,
        theta_prefix: Vec<Interval>,
        product_cap: u64,
    ) -> Self {
        Self {
            primes,
            prefix_sum,
            theta_prefix,
            product_cap,
            primorials: OnceLock::new(),
        }
    }

    /// Same data with a different exact-product ceiling.
    pub fn with_product_cap(mut self, cap: u64) -> Self {
        self.product_cap = cap;
        self.primorials = OnceLock::new();
        self
    }

    pub fn count(&self) -> u64 {
        self.primes.len() as u64
    }

    pub fn product_cap(&self) -> u64 {
        self.product_cap
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prefix_sums(&self) -> &[u128] {
        &self.prefix_sum
    }

    pub fn theta_prefixes(&self) -> &[Interval] {
        &self.theta_prefix
    }

    pub fn largest(&self) -> u64 {
        *self.primes.last().expect("tables are never empty")
    }

    fn check_index(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.count() {
            return Err(Error::IndexOutOfRange {
                index: n,
                count: self.count(),
            });
        }
        Ok(n as usize - 1)
    }

    /// `p_n`.
    pub fn prime(&self, n: u64) -> Result<u64> {
        Ok(self.primes[self.check_index(n)?])
    }

    /// `p_1 + ... + p_n`.
    pub fn prefix_sum(&self, n: u64) -> Result<u128> {
        Ok(self.prefix_sum[self.check_index(n)?])
    }

    /// Certified enclosure of `theta(p_n) = ln(p_1 ... p_n)`.
    pub fn theta_of(&self, n: u64) -> Result<Interval> {
        Ok(self.theta_prefix[self.check_index(n)?])
    }

    /// Number of primes `<= x`, by binary search.
    pub fn pi_of(&self, x: u64) -> Result<u64> {
        if x > self.largest() {
            return Err(Error::ArgumentOutOfRange {
                value: x,
                largest: self.largest(),
            });
        }
        Ok(self.primes.partition_point(|&p| p <= x) as u64)
    }

    /// `n p_n - (p_1 + ... + p_n)`, which equals the integral of pi(t) over [2, p_n].
    pub fn mandl_gap(&self, n: u64) -> Result<i128> {
        let p = self.prime(n)? as i128;
        Ok(n as i128 * p - self.prefix_sum(n)? as i128)
    }

    /// Direct summation of `(p_i - p_{i-1})(i - 1)` for `2 <= i <= n`.
    pub fn pi_step_integral(&self, n: u64) -> Result<u128> {
        self.check_index(n)?;
        Ok(self.primes[..n as usize]
            .windows(2)
            .enumerate()
            .map(|(i, w)| (w[1] - w[0]) as u128 * (i as u128 + 1))
            .sum())
    }

    fn primorial_prefixes(&self) -> &[BigUint] {
        self.primorials.get_or_init(|| {
            let upto = self.product_cap.min(self.count()) as usize;
            let mut out = Vec::with_capacity(upto);
            let mut acc = BigUint::one();
            for &p in &self.primes[..upto] {
                acc *= p;
                out.push(acc.clone());
            }
            out
        })
    }

    /// Exact `p_1 p_2 ... p_n`, for `n` up to the product cap.
    pub fn primorial_exact(&self, n: u64) -> Result<&BigUint> {
        let idx = self.check_index(n)?;
        if n > self.product_cap {
            return Err(Error::ProductCapExceeded {
                index: n,
                cap: self.product_cap,
            });
        }
        Ok(&self.primorial_prefixes()[idx])
    }

    /// Exact primorial ignoring the cap; used for one-off fallbacks.
    pub(crate) fn primorial_uncapped(&self, n: u64) -> Result<BigUint> {
        if n <= self.product_cap {
            return self.primorial_exact(n).cloned();
        }
        let idx = self.check_index(n)?;
        Ok(product_tree(&self.primes[..=idx]))
    }

    pub fn euclid_number(&self, n: u64) -> Result<EuclidNumber> {
        let product = self.primorial_uncapped(n)?;
        Ok(EuclidNumber {
            n,
            value: product - 1u32,
        })
    }
}

fn product_tree(xs: &[u64]) -> BigUint {
    match xs.len() {
        0 => BigUint::one(),
        1 => BigUint::from(xs[0]),
        len => {
            let (a, b) = xs.split_at(len / 2);
            product_tree(a) * product_tree(b)
        }
    }
}
