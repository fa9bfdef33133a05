//! Independent oracles shared by the integration tests. Nothing here calls
//! the interval layer or libm-based bound functions of the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use primebounds::fixed::{self, FixedBounds};

/// Primes up to `limit` by trial division against earlier primes.
pub fn trial_division_primes(limit: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    'outer: for n in 2..=limit {
        for &p in &out {
            if p * p > n {
                break;
            }
            if n % p == 0 {
                continue 'outer;
            }
        }
        out.push(n);
    }
    out
}

/// `ln(p_1 ... p_n) * 2^bits` bounds from the big-integer logarithm.
pub fn theta_fixed(primes: &[u64], bits: u32) -> FixedBounds {
    primes
        .iter()
        .fold(FixedBounds::exact(BigInt::from(0), bits), |acc, &p| {
            acc.add(&fixed::ln_u64(p, bits))
        })
}

/// Bounds on `a / b` for positive fixed-point bounds, at the same scale.
pub fn fixed_div(a: &FixedBounds, b: &FixedBounds) -> FixedBounds {
    assert!(a.lo >= BigInt::from(0) && b.lo > BigInt::from(0));
    let bits = a.bits;
    let lo = (&a.lo << bits) / &b.hi;
    let hi = ((&a.hi << bits) / &b.lo) + 1;
    FixedBounds { lo, hi, bits }
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `1/ln t - 1/(t - 1)`, continuous at `t = 1` with value `1/2`.
fn li_regular_part(t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let u = t - 1.0;
    if u.abs() < 1e-4 {
        // Laurent expansion of 1/ln(1+u) - 1/u
        return 0.5 - u / 12.0 + u * u / 24.0;
    }
    1.0 / t.ln() - 1.0 / u
}

/// Principal-value `Li(x) = int_0^x dt / ln t` for `x > 1`, by subtracting
/// the pole: `int_0^x (1/ln t - 1/(t-1)) dt + ln(x - 1)`.
pub fn li_quadrature(x: f64) -> f64 {
    assert!(x > 1.0);
    let f = |t: f64| li_regular_part(t);
    // the regular part has a log singularity in its derivative at 0; split
    // geometrically so each piece is smooth enough for Simpson
    let mut total = 0.0;
    let (mut a, mut b) = (0.0, 1e-12);
    loop {
        total += simpson(&f, a, b, 1e-13);
        if b >= x {
            break;
        }
        a = b;
        b = (b * 2.0).min(x);
    }
    total + (x - 1.0).ln()
}
