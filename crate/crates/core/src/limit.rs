//! The p_n-th root of the primorial, `e^{theta(p_n)/p_n}`, and the explicit
//! bands around `e` that follow from `|theta(x) - x| < d x / ln^4 x`.

use std::io::Write;

use num_bigint::BigInt;
use serde::Serialize;

use crate::analytic::THETA_BAND_D;
use crate::error::{domain, Result};
use crate::fixed;
use crate::prime_core::PrimeTable;
use crate::rigor::{certify_less, Interval, Verdict};

/// The threshold quoted for the upper band: it is `ceil(e^{d^{1/4}})`.
pub const PAPER_P_THRESHOLD: u64 = 5_270_747_586_811_033;

// working precision for the threshold search
const THRESHOLD_BITS: u32 = 160;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergencePoint {
    pub n: u64,
    pub p_n: u64,
    pub theta: Interval,
    /// `theta(p_n) / p_n`
    pub ratio: Interval,
    /// `e^{ratio}`
    pub primorial_root: Interval,
    /// Absent at `n = 1`, where `ln(n ln n)` is undefined.
    pub band: Option<SimpleBand>,
}

/// `e (1 - d / L)` and, where `L > d`, `e (1 + d/L + d^2 / (2 L (L - d)))`,
/// with `L = ln^4(n ln n)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SimpleBand {
    pub lower: Interval,
    pub upper: Option<Interval>,
    /// `ln^4(n ln n) > d`, certified.
    pub upper_valid: bool,
}

/// Certified enclosure of `e^{theta(p_n)/p_n}`.
pub fn primorial_root(n: u64, table: &PrimeTable) -> Result<Interval> {
    Ok(ratio(n, table)?.exp())
}

fn ratio(n: u64, table: &PrimeTable) -> Result<Interval> {
    let theta = table.theta_of(n)?;
    theta.checked_div(Interval::from_u64(table.prime(n)?))
}

pub fn band_simple(n: u64) -> Result<SimpleBand> {
    if n < 2 {
        return Err(domain("band_simple", format!("requires n >= 2, got {n}")));
    }
    let nn = Interval::from_u64(n);
    let l4 = (nn * nn.ln()?).ln()?.powi(4);
    let d = Interval::from_u64(THETA_BAND_D);
    let e = Interval::e();
    let t = d.checked_div(l4)?;
    let lower = e * (Interval::point(1.0) - t);
    let upper_valid = certify_less(d, l4) == Verdict::Holds;
    let upper = if upper_valid {
        let corr = d.sqr().checked_div(Interval::point(2.0) * l4 * (l4 - d))?;
        Some(e * (Interval::point(1.0) + t + corr))
    } else {
        None
    };
    Ok(SimpleBand {
        lower,
        upper,
        upper_valid,
    })
}

/// `ln^4 p > d`, decided in big fixed-point arithmetic (exact at every integer `p`).
pub fn upper_band_applies(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let root = fixed::root_u64(THETA_BAND_D, 4, THRESHOLD_BITS);
    loop_decide(p, &root, THRESHOLD_BITS)
}

fn loop_decide(p: u64, root: &fixed::FixedBounds, bits: u32) -> bool {
    let mut bits = bits;
    let mut root = root.clone();
    loop {
        let lp = fixed::ln_u64(p, bits);
        if root.certainly_less(&lp) {
            return true;
        }
        if lp.certainly_less(&root) {
            return false;
        }
        // ln p = d^{1/4} exactly is impossible (e^{rational} is irrational), so refine
        bits *= 2;
        root = fixed::root_u64(THETA_BAND_D, 4, bits);
    }
}

/// Smallest integer `p` with `ln^4 p > d`, i.e. `ceil(e^{d^{1/4}})`.
pub fn band_validity_threshold() -> u64 {
    let root = fixed::root_u64(THETA_BAND_D, 4, THRESHOLD_BITS);
    let guess = (THETA_BAND_D as f64).powf(0.25).exp();
    let mut lo = (guess * (1.0 - 1e-12)) as u64;
    let mut hi = (guess * (1.0 + 1e-12)) as u64 + 1;
    while loop_decide(lo, &root, THRESHOLD_BITS) {
        lo /= 2;
    }
    while !loop_decide(hi, &root, THRESHOLD_BITS) {
        hi = hi.saturating_mul(2);
    }
    // invariant: !applies(lo), applies(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if loop_decide(mid, &root, THRESHOLD_BITS) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `d^{1/4}` scaled by `2^bits`, exposed for reporting.
pub fn fourth_root_of_d(bits: u32) -> (BigInt, BigInt) {
    let r = fixed::root_u64(THETA_BAND_D, 4, bits);
    (r.lo, r.hi)
}

/// The two elementary bounds behind the band.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExpBand {
    /// `1 - t`, below `e^{-t}`
    pub lower: Interval,
    /// `1 + t + t^2 / (2(1 - t))`, above `e^t`
    pub upper: Interval,
    pub lower_verdict: Verdict,
    pub upper_verdict: Verdict,
}

/// `sum_{k>=0} (-1)^{k} t^k / (k+2)!` or `sum_{k>=0} t^k / (k+2)!` for `0 < t < 1`.
fn exp_remainder_over_t2(t: Interval, alternating: bool) -> Result<Interval> {
    let mut term = Interval::point(0.5);
    let mut sum = term;
    let mut k = 0u64;
    let tt = if alternating { -t } else { t };
    loop {
        term = (term * tt).checked_div(Interval::from_u64(k + 3))?;
        k += 1;
        sum = sum + term;
        let mag = term.lo().abs().max(term.hi().abs());
        if mag < 1e-20 {
            // |tail| <= |term| * t / (k + 3) / (1 - t / (k + 3)) < |term|
            return Ok(sum + Interval::new(-mag, mag)?);
        }
    }
}

/// Certifies `e^{-t} > 1 - t` and `e^t < 1 + t + t^2/(2(1-t))` for `t` in `(0, 1)`.
///
/// Both comparisons are made after cancelling the common `1 + t` (resp.
/// `1 - t`) and dividing by `t^2`, which keeps them decidable for tiny `t`.
pub fn exp_band_lemma(t: Interval) -> Result<ExpBand> {
    if !(t.lo() > 0.0 && t.hi() < 1.0) {
        return Err(domain("exp_band_lemma", format!("requires 0 < t < 1, got {t:?}")));
    }
    let one = Interval::point(1.0);
    let lower = one - t;
    let upper = one + t + t.sqr().checked_div(Interval::point(2.0) * (one - t))?;
    // e^{-t} - (1 - t) = t^2 h(t), h > 0
    let h = exp_remainder_over_t2(t, true)?;
    let lower_verdict = certify_less(Interval::point(0.0), h);
    // e^t - 1 - t = t^2 g(t) against t^2 / (2(1 - t))
    let g = exp_remainder_over_t2(t, false)?;
    let cap = Interval::point(0.5).checked_div(one - t)?;
    let upper_verdict = certify_less(g, cap);
    Ok(ExpBand {
        lower,
        upper,
        lower_verdict,
        upper_verdict,
    })
}

pub fn convergence_point(n: u64, table: &PrimeTable) -> Result<ConvergencePoint> {
    let r = ratio(n, table)?;
    Ok(ConvergencePoint {
        n,
        p_n: table.prime(n)?,
        theta: table.theta_of(n)?,
        ratio: r,
        primorial_root: r.exp(),
        band: if n >= 2 { Some(band_simple(n)?) } else { None },
    })
}

/// Points at `n = stride, 2 stride, ...` up to `n_max`.
pub fn convergence_table(n_max: u64, stride: u64, table: &PrimeTable) -> Result<Vec<ConvergencePoint>> {
    if stride == 0 {
        return Err(domain("convergence_table", "stride must be positive"));
    }
    table.prime(n_max)?;
    (1..=n_max / stride)
        .map(|i| convergence_point(i * stride, table))
        .collect()
}

pub const CONVERGENCE_CSV_HEADER: [&str; 11] = [
    "n",
    "p_n",
    "theta_lo",
    "theta_hi",
    "ratio_lo",
    "ratio_hi",
    "root_lo",
    "root_hi",
    "band_lo",
    "band_hi",
    "band_valid",
];

pub fn write_convergence_csv<W: Write>(points: &[ConvergencePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONVERGENCE_CSV_HEADER)?;
    for p in points {
        let band_lo = p
            .band
            .map(|b| format!("{:e}", b.lower.lo()))
            .unwrap_or_default();
        let band_hi = p
            .band
            .and_then(|b| b.upper)
            .map(|u| format!("{:e}", u.hi()))
            .unwrap_or_default();
        let band_valid = p.band.map(|b| b.upper_valid).unwrap_or(false);
        w.write_record([
            p.n.to_string(),
            p.p_n.to_string(),
            format!("{:e}", p.theta.lo()),
            format!("{:e}", p.theta.hi()),
            format!("{:e}", p.ratio.lo()),
            format!("{:e}", p.ratio.hi()),
            format!("{:e}", p.primorial_root.lo()),
            format!("{:e}", p.primorial_root.hi()),
            band_lo,
            band_hi,
            band_valid.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
