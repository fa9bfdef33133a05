//! Refinement of the arithmetic–geometric mean inequality,
//!
//! ```text
//! A_n - G_n >= (1/n) sum_{k=2}^{n} A_{n-1}^{(n-k)/n} (x_n^{1/n} - A_{n-1}^{1/n})^k >= 0,
//! ```
//!
//! for sorted nonnegative `x_1 <= ... <= x_n`, and its specialization to the
//! primes, where `A_{n-1}` is replaced by the floor `p_{floor((n-1)/2)}`.

use std::io::Write;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::prime_core::PrimeTable;
use crate::rigor::{certify_less, certify_less_eq, Interval, Verdict};

/// Means and refinement sum of one sorted input vector.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AgmChain {
    pub n: usize,
    pub arithmetic_mean: Interval,
    pub geometric_mean: Interval,
    pub refinement_sum: Interval,
}

impl AgmChain {
    pub fn gap(&self) -> Interval {
        self.arithmetic_mean - self.geometric_mean
    }

    /// `S <= A - G`; must never be `Fails`.
    pub fn gap_dominates_sum(&self) -> Verdict {
        certify_less_eq(self.refinement_sum, self.gap())
    }

    /// `0 <= S`; must never be `Fails`.
    pub fn sum_nonnegative(&self) -> Verdict {
        certify_less_eq(Interval::point(0.0), self.refinement_sum)
    }
}

fn interval_sum(xs: &[f64]) -> Interval {
    xs.iter()
        .fold(Interval::point(0.0), |acc, &x| acc + Interval::point(x))
}

fn mean(xs: &[f64]) -> Interval {
    interval_sum(xs)
        .checked_div(Interval::from_u64(xs.len() as u64))
        .expect("nonempty")
}

fn geometric_mean(xs: &[f64]) -> Result<Interval> {
    if xs.contains(&0.0) {
        return Ok(Interval::point(0.0));
    }
    match xs.len() {
        1 => Ok(Interval::point(xs[0])),
        2 => (Interval::point(xs[0]) * Interval::point(xs[1])).sqrt(),
        n => {
            let logs = xs.iter().try_fold(Interval::point(0.0), |acc, &x| {
                Ok::<_, Error>(acc + Interval::point(x).ln()?)
            })?;
            Ok(logs.checked_div(Interval::from_u64(n as u64))?.exp())
        }
    }
}

/// `(1/n) sum_{k=2}^{n} base^{(n-k)/n} diff^k`, evaluated term by term.
fn refinement_terms(base: Interval, diff: Interval, n: u32) -> Result<Interval> {
    let nn = Interval::from_u64(n as u64);
    let mut sum = Interval::point(0.0);
    for k in 2..=n {
        let e = Interval::ratio((n - k) as i128, n as i128)?;
        let w = if n == k {
            Interval::point(1.0)
        } else {
            base.pow(e)?
        };
        sum = sum + w * diff.powi(k);
    }
    sum.checked_div(nn)
}

/// Means and refinement sum for sorted nonnegative `xs`.
///
/// `0^0` is taken as 1, which only matters when every `x_i` but the last is zero.
pub fn rooin_chain(xs: &[f64]) -> Result<AgmChain> {
    if xs.is_empty() {
        return Err(domain("rooin_chain", "empty input"));
    }
    for (i, &x) in xs.iter().enumerate() {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::NegativeInput { position: i });
        }
        if i > 0 && xs[i - 1] > x {
            return Err(Error::UnsortedInput { position: i });
        }
    }
    let n = xs.len();
    let a = mean(xs);
    let g = geometric_mean(xs)?;
    if n == 1 {
        return Ok(AgmChain {
            n,
            arithmetic_mean: a,
            geometric_mean: g,
            refinement_sum: Interval::point(0.0),
        });
    }
    let prev = mean(&xs[..n - 1]).clamp_nonneg();
    let last = Interval::point(xs[n - 1]);
    // x_n >= A_{n-1}, so the difference of roots is nonnegative
    let diff = (last.root(n as u32)? - prev.root(n as u32)?).clamp_nonneg();
    let s = refinement_terms(prev, diff, n as u32)?;
    Ok(AgmChain {
        n,
        arithmetic_mean: a,
        geometric_mean: g,
        refinement_sum: s.clamp_nonneg(),
    })
}

/// Truncation threshold for the geometric tail of the Omega sum.
const OMEGA_REL_CUTOFF: f64 = 1e-30;

/// `Omega(n)` and its closed-form floor.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OmegaValue {
    pub n: u64,
    pub omega: Interval,
    /// `(p_n / 2n)(2^{1/n} - 1)^n`; underflows to `[0, tiny]` beyond n ~ 130.
    pub omega_floor: Interval,
    /// Natural log of the floor, which never underflows.
    pub omega_floor_ln: Interval,
}

impl OmegaValue {
    /// `omega_floor <= omega`, decided in log space.
    pub fn floor_dominated(&self) -> Verdict {
        if self.omega.lo() <= 0.0 {
            return Verdict::Undecided;
        }
        let ln_omega = self.omega.ln().expect("positive");
        certify_less_eq(self.omega_floor_ln, ln_omega)
    }
}

fn omega_base(n: u64, pn: u64) -> Interval {
    // p_n / 2 - n / 14 = (7 p_n - n) / 14
    Interval::ratio(7 * pn as i128 - n as i128, 14).expect("nonzero")
}

fn omega_domain(n: u64, table: &PrimeTable) -> Result<()> {
    if n < 10 {
        return Err(domain("omega", format!("requires n >= 10, got {n}")));
    }
    table.prime(n).map(|_| ())
}

/// `(1/n) sum_{k=2}^{n} weight^{(n-k)/n} D^k` with `D = p_n^{1/n} - (p_n/2 - n/14)^{1/n}`.
///
/// Summed upward from `k = 2` with a running ratio `D / weight^{1/n}`; the
/// tail beyond the truncation point is bounded geometrically.
fn omega_sum(n: u64, pn: u64, weight: Interval) -> Result<Interval> {
    let nn = n as u32;
    let d = (Interval::from_u64(pn).root(nn)? - omega_base(n, pn).root(nn)?).clamp_nonneg();
    let ratio = d.checked_div(weight.root(nn)?)?;
    let first = weight.pow(Interval::ratio(n as i128 - 2, n as i128)?)? * d.sqr();
    let mut term = first;
    let mut sum = first;
    for _k in 3..=n {
        term = term * ratio;
        sum = sum + term;
        let r = ratio.hi();
        if r < 1.0 && term.hi() <= OMEGA_REL_CUTOFF * sum.lo() {
            // remaining terms k' > k sum to at most term * r / (1 - r)
            let tail = Interval::point(term.hi())
                * Interval::point(r)
                    .checked_div(Interval::point(1.0) - Interval::point(r))?;
            sum = sum.extend_up(tail.hi());
            break;
        }
    }
    sum.checked_div(Interval::from_u64(n))
}

/// `ln((p_n / 2n)(2^{1/n} - 1)^n)`, via `expm1` so it stays accurate for large n.
fn omega_floor_ln(n: u64, pn: u64) -> Result<Interval> {
    let nn = Interval::from_u64(n);
    let step = Interval::point(2.0)
        .ln()?
        .checked_div(nn)?
        .exp_m1();
    Ok(Interval::ratio(pn as i128, 2 * n as i128)?.ln()? + nn * step.ln()?)
}

pub fn omega(n: u64, table: &PrimeTable) -> Result<OmegaValue> {
    omega_domain(n, table)?;
    let pn = table.prime(n)?;
    let floor_idx = (n - 1) / 2;
    let weight = Interval::from_u64(table.prime(floor_idx)?);
    let omega = omega_sum(n, pn, weight)?;
    let floor_ln = omega_floor_ln(n, pn)?;
    Ok(OmegaValue {
        n,
        omega,
        omega_floor: floor_ln.exp(),
        omega_floor_ln: floor_ln,
    })
}

/// Diagnostic variant using the exact prefix mean `A_{n-1}` instead of its floor.
pub fn omega_exact_mean(n: u64, table: &PrimeTable) -> Result<Interval> {
    omega_domain(n, table)?;
    let pn = table.prime(n)?;
    let a = Interval::ratio(table.prefix_sum(n - 1)? as i128, n as i128 - 1)?;
    omega_sum(n, pn, a)
}

/// The three log-scale upper bounds for `theta(p_n)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefinedBounds {
    pub n: u64,
    /// `n ln(p_n/2 - n/14)`
    pub agm_refined: Interval,
    /// `n ln(p_n/2 - n/14 - Omega(n))`
    pub omega_refined: Interval,
    /// `n ln((p_n/2)(1 - (2^{1/n}-1)^n / n) - n/14)`
    pub closed_form: Interval,
    pub omega: OmegaValue,
    /// `omega_refined <= closed_form`
    pub omega_below_closed: Verdict,
    /// `closed_form <= agm_refined`
    pub closed_below_agm: Verdict,
}

impl RefinedBounds {
    pub fn ordered(&self) -> bool {
        self.omega_below_closed == Verdict::Holds && self.closed_below_agm == Verdict::Holds
    }
}

fn positive_log(x: Interval, what: &'static str) -> Result<Interval> {
    if x.lo() <= 0.0 {
        return Err(domain(what, format!("nonpositive log argument {x:?}")));
    }
    x.ln()
}

pub fn refined_upper_bounds(n: u64, table: &PrimeTable) -> Result<RefinedBounds> {
    let om = omega(n, table)?;
    let pn = table.prime(n)?;
    let nn = Interval::from_u64(n);
    let base = omega_base(n, pn);
    let agm_refined = nn * positive_log(base, "refined_upper_bounds")?;
    let omega_refined = nn * positive_log(base - om.omega, "refined_upper_bounds")?;
    let closed_form = nn * positive_log(base - om.omega_floor, "refined_upper_bounds")?;
    // closed <= agm  iff  floor < base; omega-refined <= closed  iff  floor <= Omega
    let closed_below_agm = certify_less(om.omega_floor_ln, base.ln()?);
    let omega_below_closed = om.floor_dominated();
    Ok(RefinedBounds {
        n,
        agm_refined,
        omega_refined,
        closed_form,
        omega: om,
        omega_below_closed,
        closed_below_agm,
    })
}

/// One row of the bound table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AgmRow {
    pub n: u64,
    pub theta: Interval,
    pub bounds: RefinedBounds,
}

pub fn agm_table(table: &PrimeTable, from: u64, to: u64, stride: u64) -> Result<Vec<AgmRow>> {
    if stride == 0 || from > to {
        return Err(Error::InvalidRange {
            from,
            to,
            detail: "need from <= to and a positive stride".into(),
        });
    }
    (from..=to)
        .step_by(stride as usize)
        .map(|n| {
            Ok(AgmRow {
                n,
                theta: table.theta_of(n)?,
                bounds: refined_upper_bounds(n, table)?,
            })
        })
        .collect()
}

pub const AGM_CSV_HEADER: [&str; 15] = [
    "n",
    "theta_lo",
    "theta_hi",
    "agm_refined_lo",
    "agm_refined_hi",
    "omega_refined_lo",
    "omega_refined_hi",
    "closed_form_lo",
    "closed_form_hi",
    "omega_lo",
    "omega_hi",
    "omega_floor_lo",
    "omega_floor_hi",
    "omega_floor_ln_lo",
    "omega_floor_ln_hi",
];

pub fn write_agm_csv<W: Write>(rows: &[AgmRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGM_CSV_HEADER)?;
    for r in rows {
        let b = &r.bounds;
        let mut rec = vec![r.n.to_string()];
        for iv in [
            r.theta,
            b.agm_refined,
            b.omega_refined,
            b.closed_form,
            b.omega.omega,
            b.omega.omega_floor,
            b.omega.omega_floor_ln,
        ] {
            rec.push(format!("{:e}", iv.lo()));
            rec.push(format!("{:e}", iv.hi()));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
