//! Outward-rounded interval arithmetic over `f64`.
//!
//! Rounding direction is emulated without touching the FPU control word:
//! the four basic operations and `sqrt` recover the exact rounding error
//! with `TwoSum` or a fused multiply-add, then step the result one ulp
//! outward only when the rounded value landed on the wrong side. Library
//! transcendentals (`ln`, `exp`, `powf`) carry no such guarantee, so their
//! endpoints are widened by [`TRANSCENDENTAL_ULPS`] in each direction.
//!
//! Every operation satisfies containment: for any points of the operands,
//! the exact real result of the operation lies inside the returned interval.
//! Endpoints may saturate to infinities on overflow, which preserves
//! containment.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Per-endpoint widening applied to every libm transcendental.
pub const TRANSCENDENTAL_ULPS: u32 = 4;

// Below this magnitude the FMA/TwoSum residues may be inexact (gradual underflow).
const TINY: f64 = 1.0e-290;

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Three-valued outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        }
    }

    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holds" => Ok(Verdict::Holds),
            "fails" => Ok(Verdict::Fails),
            "undecided" => Ok(Verdict::Undecided),
            other => Err(Error::MalformedReport(format!("unknown verdict `{other}`"))),
        }
    }
}

/// `a < b` for every point of both operands.
pub fn certify_less(a: Interval, b: Interval) -> Verdict {
    if a.hi < b.lo {
        Verdict::Holds
    } else if a.lo >= b.hi {
        Verdict::Fails
    } else {
        Verdict::Undecided
    }
}

/// `a <= b` for every point of both operands.
pub fn certify_less_eq(a: Interval, b: Interval) -> Verdict {
    if a.hi <= b.lo {
        Verdict::Holds
    } else if a.lo > b.hi {
        Verdict::Fails
    } else {
        Verdict::Undecided
    }
}

fn widen_down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

fn widen_up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn add_round(a: f64, b: f64) -> (f64, f64) {
    let (s, err) = two_sum(a, b);
    if !s.is_finite() {
        return if s > 0.0 {
            (f64::MAX, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::MIN)
        };
    }
    if s.abs() < TINY && (a != 0.0 && b != 0.0) {
        return (s.next_down(), s.next_up());
    }
    if err > 0.0 {
        (s, s.next_up())
    } else if err < 0.0 {
        (s.next_down(), s)
    } else {
        (s, s)
    }
}

fn mul_round(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    let p = a * b;
    if !p.is_finite() {
        return if p > 0.0 {
            (f64::MAX, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::MIN)
        };
    }
    if p.abs() < TINY {
        return (p.next_down(), p.next_up());
    }
    let err = a.mul_add(b, -p);
    if err > 0.0 {
        (p, p.next_up())
    } else if err < 0.0 {
        (p.next_down(), p)
    } else {
        (p, p)
    }
}

fn div_round(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, 0.0);
    }
    let q = a / b;
    if !q.is_finite() {
        return if q > 0.0 {
            (f64::MAX, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::MIN)
        };
    }
    if q.abs() < TINY || b.abs() < TINY {
        return (q.next_down(), q.next_up());
    }
    // a - q*b, exact
    let r = (-q).mul_add(b, a);
    let sign = r * b.signum();
    if sign > 0.0 {
        (q, q.next_up())
    } else if sign < 0.0 {
        (q.next_down(), q)
    } else {
        (q, q)
    }
}

fn sqrt_round(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    let s = x.sqrt();
    if x < TINY {
        return (s.next_down().max(0.0), s.next_up());
    }
    let r = (-s).mul_add(s, x);
    if r > 0.0 {
        (s, s.next_up())
    } else if r < 0.0 {
        (s.next_down(), s)
    } else {
        (s, s)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(domain("Interval::new", format!("non-finite endpoint [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(domain("Interval::new", format!("inverted endpoints [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Callers guarantee `lo <= hi`; used for endpoints read back from trusted storage.
    pub(crate) const fn from_bounds_unchecked(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn from_u64(n: u64) -> Self {
        let f = n as f64;
        let back = f as u128;
        let n = n as u128;
        if back == n {
            Self::point(f)
        } else if back > n {
            Self { lo: f.next_down(), hi: f }
        } else {
            Self { lo: f, hi: f.next_up() }
        }
    }

    pub fn from_i128(n: i128) -> Self {
        let f = n as f64;
        let back = f as i128;
        if back == n {
            Self::point(f)
        } else if back > n {
            Self { lo: f.next_down(), hi: f }
        } else {
            Self { lo: f, hi: f.next_up() }
        }
    }

    /// Enclosure of `num / den`.
    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        Self::from_i128(num).checked_div(Self::from_i128(den))
    }

    /// Enclosure of Euler's number.
    pub fn e() -> Self {
        let x = std::f64::consts::E;
        Self { lo: x.next_down(), hi: x.next_up() }
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        self.lo * 0.5 + self.hi * 0.5
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn widen_ulps(self, ulps: u32) -> Interval {
        Interval {
            lo: widen_down(self.lo, ulps),
            hi: widen_up(self.hi, ulps),
        }
    }

    /// Extends the upper endpoint by a nonnegative amount, rounding up.
    pub fn extend_up(self, amount: f64) -> Interval {
        debug_assert!(amount >= 0.0);
        Interval {
            lo: self.lo,
            hi: add_round(self.hi, amount).1,
        }
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero {
                lo: rhs.lo,
                hi: rhs.hi,
            });
        }
        let c = [
            div_round(self.lo, rhs.lo),
            div_round(self.lo, rhs.hi),
            div_round(self.hi, rhs.lo),
            div_round(self.hi, rhs.hi),
        ];
        Ok(Self::from_corners(&c))
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::point(1.0).checked_div(self)
    }

    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }

    pub fn sqr(self) -> Interval {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let hi = mul_round(large, large).1;
        let lo = if self.contains_zero() {
            0.0
        } else {
            mul_round(small, small).0
        };
        Interval { lo, hi }
    }

    pub fn powi(self, k: u32) -> Interval {
        match k {
            0 => Interval::point(1.0),
            1 => self,
            _ if k.is_multiple_of(2) => self.powi(k / 2).sqr(),
            _ => self.powi(k - 1) * self,
        }
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(domain("sqrt", format!("negative argument [{}, {}]", self.lo, self.hi)));
        }
        Ok(Interval {
            lo: sqrt_round(self.lo).0,
            hi: sqrt_round(self.hi).1,
        })
    }

    pub fn ln(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(domain("ln", format!("nonpositive argument [{}, {}]", self.lo, self.hi)));
        }
        Ok(Interval {
            lo: widen_down(self.lo.ln(), TRANSCENDENTAL_ULPS),
            hi: widen_up(self.hi.ln(), TRANSCENDENTAL_ULPS),
        })
    }

    pub fn exp(self) -> Interval {
        Interval {
            lo: widen_down(self.lo.exp(), TRANSCENDENTAL_ULPS).max(0.0),
            hi: widen_up(self.hi.exp(), TRANSCENDENTAL_ULPS),
        }
    }

    pub fn exp_m1(self) -> Interval {
        Interval {
            lo: widen_down(self.lo.exp_m1(), TRANSCENDENTAL_ULPS).max(-1.0),
            hi: widen_up(self.hi.exp_m1(), TRANSCENDENTAL_ULPS),
        }
    }

    pub fn ln_1p(self) -> Result<Interval> {
        if self.lo <= -1.0 {
            return Err(domain("ln_1p", format!("argument {:?} not above -1", self)));
        }
        Ok(Interval {
            lo: widen_down(self.lo.ln_1p(), TRANSCENDENTAL_ULPS),
            hi: widen_up(self.hi.ln_1p(), TRANSCENDENTAL_ULPS),
        })
    }

    /// Intersection with `[0, inf)`, for quantities known to be nonnegative.
    pub fn clamp_nonneg(self) -> Interval {
        Interval {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    /// `self^exponent` for a positive base, or a nonnegative base with a
    /// positive (or exactly zero) exponent.
    pub fn pow(self, exponent: Interval) -> Result<Interval> {
        if exponent == Interval::point(0.0) && self.lo >= 0.0 {
            return Ok(Interval::point(1.0));
        }
        if self.lo < 0.0 || (self.lo == 0.0 && exponent.lo <= 0.0) {
            return Err(domain(
                "pow",
                format!(
                    "base [{}, {}] with exponent [{}, {}]",
                    self.lo, self.hi, exponent.lo, exponent.hi
                ),
            ));
        }
        // x^y is monotone in each argument separately on x > 0, so the
        // extremes sit at the corners.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for x in [self.lo, self.hi] {
            for y in [exponent.lo, exponent.hi] {
                let v = if x == 0.0 { 0.0 } else { x.powf(y) };
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let lo = if lo == 0.0 {
            0.0
        } else {
            widen_down(lo, TRANSCENDENTAL_ULPS).max(0.0)
        };
        let hi = if hi == 0.0 {
            0.0
        } else {
            widen_up(hi, TRANSCENDENTAL_ULPS)
        };
        Ok(Interval { lo, hi })
    }

    /// Principal `n`-th root of a nonnegative interval.
    pub fn root(self, n: u32) -> Result<Interval> {
        match n {
            0 => Err(domain("root", "zeroth root")),
            1 => Ok(self),
            2 => self.sqrt(),
            _ => self.pow(Interval::point(1.0).checked_div(Interval::from_u64(n as u64))?),
        }
    }

    fn from_corners(c: &[(f64, f64)]) -> Interval {
        let lo = c.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_round(self.lo, rhs.lo).0,
            hi: add_round(self.hi, rhs.hi).1,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let c = [
            mul_round(self.lo, rhs.lo),
            mul_round(self.lo, rhs.hi),
            mul_round(self.hi, rhs.lo),
            mul_round(self.hi, rhs.hi),
        ];
        Interval::from_corners(&c)
    }
}

impl From<u64> for Interval {
    fn from(n: u64) -> Self {
        Interval::from_u64(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn add_exact_stays_point() {
        let s = iv(1.0, 1.0) + iv(2.0, 2.0);
        assert_eq!(s, Interval::point(3.0));
    }

    #[test]
    fn add_inexact_brackets() {
        let s = Interval::point(0.1) + Interval::point(0.2);
        assert!(s.lo() < s.hi());
        assert_eq!(s.hi(), s.lo().next_up());
    }

    #[test]
    fn mul_sign_cases() {
        let p = iv(-1.0, 2.0) * iv(3.0, 3.0);
        assert!(p.contains_interval(iv(-3.0, 6.0)));
        let q = iv(-2.0, -1.0) * iv(-3.0, 4.0);
        assert!(q.contains_interval(iv(-8.0, 6.0)));
    }

    #[test]
    fn div_by_zero_interval() {
        assert!(matches!(
            iv(1.0, 1.0).checked_div(iv(0.0, 1.0)),
            Err(Error::DivisionByZero { .. })
        ));
    }

    #[test]
    fn third_is_bracketed() {
        let t = Interval::ratio(1, 3).unwrap();
        assert_eq!(t.hi(), t.lo().next_up());
    }

    #[test]
    fn ln_of_e_contains_one() {
        assert!(Interval::e().ln().unwrap().contains(1.0));
    }

    #[test]
    fn exp_zero_contains_one() {
        assert!(Interval::point(0.0).exp().contains(1.0));
    }

    #[test]
    fn pow_29_tenth() {
        let tenth = Interval::ratio(1, 10).unwrap();
        let r = Interval::point(29.0).pow(tenth).unwrap();
        // 29^(1/10) to 30 digits
        assert!(r.contains(1.400_360_331_291_396));
        assert!(r.width() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(iv(0.0, 1.0).ln().is_err());
        assert!(iv(-1.0, 1.0).sqrt().is_err());
        assert!(iv(-1.0, 1.0).pow(Interval::point(0.5)).is_err());
        assert!(iv(0.0, 1.0).pow(Interval::point(-0.5)).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn zero_power_conventions() {
        assert_eq!(iv(0.0, 0.0).pow(Interval::point(0.0)).unwrap(), Interval::point(1.0));
        assert_eq!(iv(0.0, 0.0).root(5).unwrap().hi(), 0.0);
    }

    #[test]
    fn sqr_straddling_zero() {
        let s = iv(-1.0, 2.0).sqr();
        assert_eq!(s.lo(), 0.0);
        assert!(s.contains(4.0));
    }

    #[test]
    fn certify_cases() {
        assert_eq!(certify_less(iv(1.0, 2.0), iv(3.0, 4.0)), Verdict::Holds);
        assert_eq!(certify_less(iv(3.0, 4.0), iv(1.0, 2.0)), Verdict::Fails);
        assert_eq!(certify_less(iv(1.0, 3.0), iv(2.0, 4.0)), Verdict::Undecided);
        assert_eq!(certify_less(iv(1.0, 1.0), iv(1.0, 1.0)), Verdict::Fails);
        assert_eq!(certify_less_eq(iv(1.0, 1.0), iv(1.0, 1.0)), Verdict::Holds);
    }

    #[test]
    fn large_u64_is_bracketed() {
        let n = (1u64 << 60) + 1;
        let i = Interval::from_u64(n);
        assert!(i.lo() < i.hi());
        assert!((i.lo() as u128) <= n as u128 && n as u128 <= i.hi() as u128);
    }
}
