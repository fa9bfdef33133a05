//! Big-integer fixed-point enclosures of natural logarithms.
//!
//! A value `v` is represented by integers `lo <= v * 2^bits <= hi`. Used
//! where `f64` cannot resolve a comparison (the validity boundary of the
//! theta band sits 1.5e-16 relative away from an integer) and as an
//! oracle independent of libm.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedBounds {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl FixedBounds {
    pub fn exact(v: BigInt, bits: u32) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn add(&self, other: &FixedBounds) -> FixedBounds {
        assert_eq!(self.bits, other.bits);
        FixedBounds {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            bits: self.bits,
        }
    }

    /// Multiplies by an exact integer of either sign.
    pub fn mul_int(&self, k: &BigInt) -> FixedBounds {
        let a = &self.lo * k;
        let b = &self.hi * k;
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        FixedBounds {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// Multiplies by `2^shift` (either sign), rounding outward.
    pub fn shift(&self, shift: i32) -> FixedBounds {
        if shift >= 0 {
            FixedBounds {
                lo: &self.lo << shift as u32,
                hi: &self.hi << shift as u32,
                bits: self.bits,
            }
        } else {
            let s = (-shift) as u32;
            FixedBounds {
                lo: floor_shr(&self.lo, s),
                hi: -floor_shr(&(-&self.hi), s),
                bits: self.bits,
            }
        }
    }

    /// Strictly below `other` for every enclosed pair.
    pub fn certainly_less(&self, other: &FixedBounds) -> bool {
        assert_eq!(self.bits, other.bits);
        self.hi < other.lo
    }

    pub fn to_f64_mid(&self) -> f64 {
        let scale = (self.bits as f64).exp2();
        let lo = bigint_to_f64(&self.lo) / scale;
        let hi = bigint_to_f64(&self.hi) / scale;
        0.5 * (lo + hi)
    }
}

fn floor_shr(v: &BigInt, s: u32) -> BigInt {
    // BigInt >> rounds toward negative infinity for negative values.
    v >> s
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Bounds on `2 * atanh(num/den) * 2^bits` for `0 <= num/den <= 1/2`.
fn two_atanh(num: &BigInt, den: &BigInt, bits: u32) -> FixedBounds {
    debug_assert!(!num.is_negative() && num * 2 <= *den);
    if num.is_zero() {
        return FixedBounds::exact(BigInt::zero(), bits);
    }
    let num_sq = num * num;
    let den_sq = den * den;
    let mut pn = num.clone();
    let mut pd = den.clone();
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    loop {
        let odd = BigInt::from(2 * terms + 1);
        let t = (&pn << bits) / (&pd * &odd);
        if t.is_zero() {
            break;
        }
        sum += t;
        terms += 1;
        pn *= &num_sq;
        pd *= &den_sq;
    }
    // Each floor loses < 1; the tail after the first vanishing term is
    // below 1 / (1 - z^2) <= 4/3.
    let hi = &sum + BigInt::from(terms + 2);
    FixedBounds {
        lo: sum * 2,
        hi: hi * 2,
        bits,
    }
}

pub fn ln2(bits: u32) -> FixedBounds {
    two_atanh(&BigInt::one(), &BigInt::from(3), bits)
}

/// Bounds on `ln(n) * 2^bits` for `n >= 1`.
pub fn ln_u64(n: u64, bits: u32) -> FixedBounds {
    ln_u64_with(n, &ln2(bits))
}

fn ln_u64_with(n: u64, ln2: &FixedBounds) -> FixedBounds {
    assert!(n >= 1, "ln of zero");
    let k = 63 - n.leading_zeros();
    let pow = BigInt::from(1u64) << k;
    let n = BigInt::from(n);
    // n / 2^k in [1, 2); z = (n - 2^k) / (n + 2^k) in [0, 1/3)
    let mantissa = two_atanh(&(&n - &pow), &(&n + &pow), ln2.bits);
    ln2.mul_int(&BigInt::from(k)).add(&mantissa)
}

/// Bounds on `ln(x) * 2^bits` for finite `x > 0`.
pub fn ln_f64(x: f64, bits: u32) -> FixedBounds {
    assert!(x > 0.0 && x.is_finite(), "ln_f64 domain: {x}");
    let (mant, exp) = decompose(x);
    let l2 = ln2(bits);
    ln_u64_with(mant, &l2).add(&l2.mul_int(&BigInt::from(exp)))
}

/// `x = mant * 2^exp` exactly, with `mant` odd or zero.
pub fn decompose(x: f64) -> (u64, i32) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut exp) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    if mant == 0 {
        return (0, 0);
    }
    let tz = mant.trailing_zeros();
    mant >>= tz;
    exp += tz as i32;
    (mant, exp)
}

/// Exact `x * 2^bits` as a big integer when that product is integral.
pub fn scaled_f64(x: f64, bits: u32) -> Option<BigInt> {
    assert!(x.is_finite());
    let (mant, exp) = decompose(x.abs());
    let sign = if x < 0.0 { Sign::Minus } else { Sign::Plus };
    let total = exp + bits as i32;
    if total < 0 {
        return None;
    }
    let v = BigInt::from(mant) << total as u32;
    Some(if sign == Sign::Minus { -v } else { v })
}

/// Bounds on `n^(1/k) * 2^bits` from the integer `k`-th root.
pub fn root_u64(n: u64, k: u32, bits: u32) -> FixedBounds {
    let scaled = BigInt::from(n) << (bits * k);
    let lo = scaled.nth_root(k);
    let exact = lo.pow(k) == scaled;
    let hi = if exact { lo.clone() } else { &lo + 1 };
    FixedBounds { lo, hi, bits }
}
