//! Explicit analytic bound functions and constants, all evaluated as
//! certified intervals.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::prime_core::PrimeTable;
use crate::rigor::{certify_less, certify_less_eq, Interval, Verdict};

/// Euler–Mascheroni constant, 0.577215664901532860606512090082...
pub fn euler_gamma() -> Interval {
    let g = 0.577_215_664_901_532_9_f64;
    Interval::new(g.next_down(), g.next_up()).expect("finite literal")
}

/// The constant in the uniform theta error bound `|theta(x) - x| < d x / ln^4 x`.
pub const THETA_BAND_D: u64 = 1_717_433;

/// Coefficient of the `p_n^2 / ln^2 p_n` term in the half-gap minorant.
pub fn gap_coefficient() -> Interval {
    dec(1119, 4)
}

/// The variant coefficient that appears once in the prose of the crossover claim.
pub fn gap_coefficient_prose() -> Interval {
    dec(119, 4)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Constants {
    pub c: Interval,
    pub d: u64,
    pub euler_gamma: Interval,
}

impl Constants {
    pub fn compute() -> Self {
        Self {
            c: constant_c(),
            d: THETA_BAND_D,
            euler_gamma: euler_gamma(),
        }
    }
}

/// Enclosure of `mantissa * 10^-scale`.
pub(crate) fn dec(mantissa: i128, scale: u32) -> Interval {
    Interval::ratio(mantissa, 10i128.pow(scale)).expect("nonzero power of ten")
}

fn ln_of(x: Interval, function: &'static str) -> Result<Interval> {
    if x.lo() <= 0.0 {
        return Err(domain(function, format!("nonpositive argument {x:?}")));
    }
    x.ln()
}

/// Logarithmic integral (principal value from 0), via the Ramanujan–Soldner
/// series `gamma + ln ln x + sum_{k>=1} (ln x)^k / (k k!)`.
pub fn li(x: f64) -> Result<Interval> {
    li_interval(Interval::point(x))
}

pub fn li_interval(x: Interval) -> Result<Interval> {
    if !(x.lo() > 1.0) {
        return Err(domain("li", format!("argument must exceed 1, got {x:?}")));
    }
    let l = x.ln()?;
    let l = Interval::new(l.lo().max(f64::MIN_POSITIVE), l.hi())?;
    let mut term = l;
    let mut sum = term;
    let mut k = 1u64;
    loop {
        let kk = Interval::from_u64(k);
        let ratio = (l * kk).checked_div(Interval::from_u64((k + 1) * (k + 1)))?;
        term = term * ratio;
        k += 1;
        sum = sum + term;
        // the step ratio l k / (k+1)^2 decreases in k; bound the tail geometrically
        let next_ratio = l.hi() * k as f64 / ((k + 1) * (k + 1)) as f64 * (1.0 + 1e-15);
        if next_ratio < 0.5 && term.hi() <= 1e-12 * sum.lo().abs() {
            let tail = term.hi() * next_ratio / (1.0 - next_ratio) * (1.0 + 1e-15);
            sum = sum.extend_up(tail);
            break;
        }
    }
    Ok(euler_gamma() + l.ln()? + sum)
}

/// `c = 35995 - 3 Li(599^2) + 599^2 / ln 599`.
pub fn constant_c() -> Interval {
    let sq = 599.0 * 599.0;
    let li_sq = li(sq).expect("599^2 > 1");
    let ln599 = Interval::point(599.0).ln().expect("positive");
    let frac = Interval::point(sq).checked_div(ln599).expect("ln 599 > 0");
    Interval::point(35995.0) - li_sq.scale(3.0) + frac
}

/// `(x / ln x)(1 + 1/ln x)`; bounds pi(x) from below for x >= 599.
pub fn dusart_pi_lower(x: f64) -> Result<Interval> {
    pi_bound(x, Interval::point(1.0), "dusart_pi_lower")
}

/// `(x / ln x)(1 + 1.2762/ln x)`; bounds pi(x) from above for x >= 2.
pub fn dusart_pi_upper(x: f64) -> Result<Interval> {
    pi_bound(x, dec(12762, 4), "dusart_pi_upper")
}

fn pi_bound(x: f64, a: Interval, function: &'static str) -> Result<Interval> {
    if !(x > 1.0) {
        return Err(domain(function, format!("argument must exceed 1, got {x}")));
    }
    let xi = Interval::point(x);
    let l = xi.ln()?;
    let base = xi.checked_div(l)?;
    Ok(base * (Interval::point(1.0) + a.checked_div(l)?))
}

fn ln_n(n: u64, min: u64, function: &'static str) -> Result<Interval> {
    if n < min {
        return Err(domain(function, format!("requires n >= {min}, got {n}")));
    }
    ln_of(Interval::from_u64(n), function)
}

/// `(n ln n, n(ln n + ln ln n))`, bracketing `p_n` for n >= 6.
pub fn rosser_pn_bounds(n: u64) -> Result<(Interval, Interval)> {
    let l = ln_n(n, 6, "rosser_pn_bounds")?;
    let ni = Interval::from_u64(n);
    Ok((ni * l, ni * (l + l.ln()?)))
}

/// `n ln n`, below `p_n` for every n >= 1.
pub fn pn_floor(n: u64) -> Result<Interval> {
    let l = ln_n(n, 1, "pn_floor")?;
    Ok(Interval::from_u64(n) * l)
}

/// `ln n + ln ln n + (ln ln n - 0.4)/ln n`, above `ln p_{n+1}` for n >= 53.
pub fn logpn1_upper(n: u64) -> Result<Interval> {
    let l = ln_n(n, 2, "logpn1_upper")?;
    let ll = l.ln()?;
    Ok(l + ll + (ll - dec(4, 1)).checked_div(l)?)
}

/// `n(ln n + ln ln n - 1 + (ln ln n - 2.1454)/ln n)`, below `theta(p_n)` for n >= 3.
pub fn theta_lower_robin(n: u64) -> Result<Interval> {
    let l = ln_n(n, 3, "theta_lower_robin")?;
    let ll = l.ln()?;
    let inner = l + ll - Interval::point(1.0) + (ll - dec(21454, 4)).checked_div(l)?;
    Ok(Interval::from_u64(n) * inner)
}

/// `(1.7454 x^3 + 1.4 x^2 - 0.4) / (x^3 + x^2 - x - 1)` for `x > 1`.
///
/// The denominator is evaluated as `(x - 1)(x + 1)^2`.
pub fn prlb_ratio(x: Interval) -> Result<Interval> {
    if !(x.lo() > 1.0) {
        return Err(domain("prlb_ratio", format!("requires x > 1, got {x:?}")));
    }
    let x2 = x.sqr();
    let x3 = x2 * x;
    let num = dec(17454, 4) * x3 + dec(14, 1) * x2 - dec(4, 1);
    let one = Interval::point(1.0);
    let den = (x - one) * (x + one).sqr();
    num.checked_div(den)
}

/// The two steps of the log-ratio argument at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrlbFacts {
    /// ratio < 1.7454
    pub ratio_below_limit: Verdict,
    /// 1.85 < ln x
    pub log_above_185: Verdict,
    /// ratio < ln x
    pub ratio_below_log: Verdict,
}

pub fn prlb_facts(x: Interval) -> Result<PrlbFacts> {
    let r = prlb_ratio(x)?;
    let lx = x.ln()?;
    Ok(PrlbFacts {
        ratio_below_limit: certify_less(r, dec(17454, 4)),
        log_above_185: certify_less(dec(185, 2), lx),
        ratio_below_log: certify_less(r, lx),
    })
}

/// `c + coeff (n ln n)^2 / ln^2(n(ln n + ln ln n))`.
pub fn refined_gap_minorant_with(n: u64, coeff: Interval) -> Result<Interval> {
    let (lower, upper) = rosser_pn_bounds(n)?;
    let num = lower.sqr();
    let den = upper.ln()?.sqr();
    Ok(constant_c() + coeff * num.checked_div(den)?)
}

pub fn refined_gap_minorant(n: u64) -> Result<Interval> {
    refined_gap_minorant_with(n, gap_coefficient())
}

/// Certified `n^2 / 14 < minorant(n)`.
pub fn minorant_exceeds_square(n: u64, coeff: Interval) -> Result<Verdict> {
    let m = refined_gap_minorant_with(n, coeff)?;
    let target = Interval::from_u64(n).sqr().checked_div(Interval::point(14.0))?;
    Ok(certify_less(target, m))
}

/// Result of scanning the minorant comparison over `[6, limit]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinorantCrossover {
    /// Smallest n with the comparison certified true.
    pub first_holds: Option<u64>,
    /// One past the last n where it is not certified true, if it holds at `limit`.
    pub stable_from: Option<u64>,
    pub undecided: u64,
    pub limit: u64,
}

pub fn minorant_crossover(coeff: Interval, limit: u64) -> Result<MinorantCrossover> {
    let c = constant_c();
    let mut first_holds = None;
    let mut last_not = None;
    let mut undecided = 0;
    for n in 6..=limit {
        let (lower, upper) = rosser_pn_bounds(n)?;
        let m = c + coeff * lower.sqr().checked_div(upper.ln()?.sqr())?;
        let target = Interval::from_u64(n).sqr().checked_div(Interval::point(14.0))?;
        match certify_less(target, m) {
            Verdict::Holds => {
                first_holds.get_or_insert(n);
            }
            Verdict::Fails => last_not = Some(n),
            Verdict::Undecided => {
                undecided += 1;
                last_not = Some(n);
            }
        }
    }
    let stable_from = match last_not {
        None => Some(6),
        Some(k) if k < limit => Some(k + 1),
        Some(_) => None,
    };
    Ok(MinorantCrossover {
        first_holds,
        stable_from,
        undecided,
        limit,
    })
}

/// `(x - d x / ln^4 x, x + d x / ln^4 x)`.
pub fn theta_band(x: f64) -> Result<(Interval, Interval)> {
    if !(x > 1.0) {
        return Err(domain("theta_band", format!("argument must exceed 1, got {x}")));
    }
    let xi = Interval::point(x);
    let l4 = xi.ln()?.powi(4);
    let delta = (Interval::from_u64(THETA_BAND_D) * xi).checked_div(l4)?;
    Ok((xi - delta, xi + delta))
}

/// Tally of a certified sweep of one analytic bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepTally {
    pub checked: u64,
    pub holds: u64,
    pub fails: u64,
    pub undecided: u64,
    pub first_failure: Option<u64>,
}

impl SweepTally {
    fn record(&mut self, key: u64, v: Verdict) {
        self.checked += 1;
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Fails => {
                self.fails += 1;
                self.first_failure.get_or_insert(key);
            }
            Verdict::Undecided => self.undecided += 1,
        }
    }

    pub fn clean(&self) -> bool {
        self.fails == 0 && self.undecided == 0 && self.checked > 0
    }
}

/// Table sweeps of the classical bounds at every prime or index the table covers.
pub mod sweep {
    use super::*;

    /// `dusart_pi_lower(p) <= pi(p)` at primes `p >= 599`, for indices `<= max_index`.
    pub fn dusart_lower(table: &PrimeTable, max_index: u64) -> Result<SweepTally> {
        let mut t = SweepTally::default();
        let max_index = max_index.min(table.count());
        for n in 1..=max_index {
            let p = table.prime(n)?;
            if p < 599 {
                continue;
            }
            let v = certify_less_eq(dusart_pi_lower(p as f64)?, Interval::from_u64(n));
            t.record(n, v);
        }
        Ok(t)
    }

    /// `pi(p) <= dusart_pi_upper(p)` at every prime, for indices `<= max_index`.
    pub fn dusart_upper(table: &PrimeTable, max_index: u64) -> Result<SweepTally> {
        let mut t = SweepTally::default();
        for n in 1..=max_index.min(table.count()) {
            let p = table.prime(n)?;
            t.record(n, certify_less_eq(Interval::from_u64(n), dusart_pi_upper(p as f64)?));
        }
        Ok(t)
    }

    /// `n ln n <= p_n <= n(ln n + ln ln n)` for `6 <= n <= max_index`.
    pub fn rosser(table: &PrimeTable, max_index: u64) -> Result<SweepTally> {
        let mut t = SweepTally::default();
        for n in 6..=max_index.min(table.count()) {
            let p = Interval::from_u64(table.prime(n)?);
            let (lo, hi) = rosser_pn_bounds(n)?;
            let v = match (certify_less_eq(lo, p), certify_less_eq(p, hi)) {
                (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
                (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
                _ => Verdict::Undecided,
            };
            t.record(n, v);
        }
        Ok(t)
    }

    /// `n ln n < p_n` for `1 <= n <= max_index`.
    pub fn pn_floor_strict(table: &PrimeTable, max_index: u64) -> Result<SweepTally> {
        let mut t = SweepTally::default();
        for n in 1..=max_index.min(table.count()) {
            let p = Interval::from_u64(table.prime(n)?);
            t.record(n, certify_less(pn_floor(n)?, p));
        }
        Ok(t)
    }

    /// `ln p_{n+1} < logpn1_upper(n)` for `53 <= n <= max_index`.
    pub fn logpn1(table: &PrimeTable, max_index: u64) -> Result<SweepTally> {
        let mut t = SweepTally::default();
        let top = max_index.min(table.count().saturating_sub(1));
        for n in 53..=top {
            let lp = Interval::from_u64(table.prime(n + 1)?).ln()?;
            t.record(n, certify_less(lp, logpn1_upper(n)?));
        }
        Ok(t)
    }

    /// `theta_lower_robin(n) < theta(p_n)` for `3 <= n <= max_index`.
    pub fn theta_robin(table: &PrimeTable, max_index: u64) -> Result<SweepTally> {
        let mut t = SweepTally::default();
        for n in 3..=max_index.min(table.count()) {
            t.record(n, certify_less(theta_lower_robin(n)?, table.theta_of(n)?));
        }
        Ok(t)
    }

    /// `theta_band(p)` contains `theta(p)` at every prime.
    pub fn theta_band_contains(table: &PrimeTable, max_index: u64) -> Result<SweepTally> {
        let mut t = SweepTally::default();
        for n in 1..=max_index.min(table.count()) {
            let p = table.prime(n)?;
            let th = table.theta_of(n)?;
            let (lo, hi) = theta_band(p as f64)?;
            let v = match (certify_less(lo, th), certify_less(th, hi)) {
                (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
                (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
                _ => Verdict::Undecided,
            };
            t.record(n, v);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn li_reference_points() {
        // values frozen from a 40-digit evaluation
        assert!(li(2.0).unwrap().contains(1.045_163_780_117_493));
        assert!(li(std::f64::consts::E).unwrap().contains(1.895_117_816_355_936_8));
        let big = li(358_801.0).unwrap();
        assert!(big.contains(30_715.420_628_345_977));
        assert!(big.width() < 1e-6);
        assert!(li(1.0).is_err());
        assert!(li(0.5).is_err());
    }

    #[test]
    fn constant_c_matches() {
        let c = constant_c();
        assert!(c.contains(-47.067_475_581_529_24));
        assert!(c.width() < 1e-2);
        assert!((c.mid() - (-47.06746)).abs() < 5e-3);
    }

    #[test]
    fn dusart_at_599_and_2() {
        let lo = dusart_pi_lower(599.0).unwrap();
        assert!((lo.mid() - 108.31).abs() < 0.01);
        let hi = dusart_pi_upper(599.0).unwrap();
        assert!((hi.mid() - 112.35).abs() < 0.01);
        let two = dusart_pi_upper(2.0).unwrap();
        assert!((two.mid() - 8.197_876).abs() < 1e-5);
        assert!(dusart_pi_lower(1.0).is_err());
    }

    #[test]
    fn rosser_small() {
        let (lo, hi) = rosser_pn_bounds(6).unwrap();
        assert!((lo.mid() - 10.750_557).abs() < 1e-5 && (hi.mid() - 14.249_745).abs() < 1e-5);
        assert!(lo.hi() < 13.0 && 13.0 < hi.lo());
        let (_, hi10) = rosser_pn_bounds(10).unwrap();
        assert!((hi10.mid() - 31.366_175).abs() < 1e-5 && hi10.lo() > 29.0);
        assert!(rosser_pn_bounds(5).is_err());
        assert!(pn_floor(1).unwrap().contains(0.0));
        assert!(pn_floor(0).is_err());
    }

    #[test]
    fn logpn1_values() {
        // ln 53 + ln ln 53 + (ln ln 53 - 0.4)/ln 53 = 5.59567...; ln p_54 = ln 251 = 5.5255
        let v = logpn1_upper(53).unwrap();
        assert!((v.mid() - 5.595_67).abs() < 1e-4, "{v:?}");
        assert_eq!(
            certify_less(Interval::point(251.0).ln().unwrap(), v),
            Verdict::Holds
        );
        assert!(logpn1_upper(10_000).unwrap().lo() > 0.0);
        assert!(logpn1_upper(1).is_err());
        let mut prev = logpn1_upper(53).unwrap();
        for n in (60..100_000).step_by(997) {
            let cur = logpn1_upper(n).unwrap();
            assert_eq!(certify_less(prev, cur), Verdict::Holds);
            prev = cur;
        }
    }

    #[test]
    fn robin_theta_at_three() {
        let v = theta_lower_robin(3).unwrap();
        assert!((v.mid() - (-5.023_686)).abs() < 1e-5, "{v:?}");
        assert!(theta_lower_robin(2).is_err());
    }

    #[test]
    fn prlb_ratio_points() {
        let x = Interval::point(599.0).ln().unwrap();
        let r = prlb_ratio(x).unwrap();
        assert!((r.mid() - 1.739_913_256).abs() < 1e-8);
        let facts = prlb_facts(x).unwrap();
        assert_eq!(facts.ratio_below_limit, Verdict::Holds);
        assert_eq!(facts.log_above_185, Verdict::Holds);
        assert_eq!(facts.ratio_below_log, Verdict::Holds);
        // 19.1632 / 9
        let r2 = prlb_ratio(Interval::point(2.0)).unwrap();
        assert!(r2.contains(19.1632 / 9.0));
        assert!(prlb_ratio(Interval::point(1.0)).is_err());
    }

    #[test]
    fn minorant_sides() {
        assert_eq!(minorant_exceeds_square(100, gap_coefficient()).unwrap(), Verdict::Fails);
        assert_eq!(
            minorant_exceeds_square(100_000, gap_coefficient()).unwrap(),
            Verdict::Holds
        );
        assert_eq!(minorant_exceeds_square(21_151, gap_coefficient()).unwrap(), Verdict::Fails);
        assert_eq!(minorant_exceeds_square(21_152, gap_coefficient()).unwrap(), Verdict::Holds);
        assert!(refined_gap_minorant(5).is_err());
    }

    #[test]
    fn theta_band_at_e() {
        let (lo, hi) = theta_band(std::f64::consts::E).unwrap();
        let e = std::f64::consts::E;
        let d = THETA_BAND_D as f64;
        assert!((lo.mid() - (e - d * e)).abs() < 1e-6 * d);
        assert!((hi.mid() - (e + d * e)).abs() < 1e-6 * d);
        assert!(theta_band(1.0).is_err());
    }
}
