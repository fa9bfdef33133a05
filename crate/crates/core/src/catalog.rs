//! Registry of named inequalities, with range verification and crossover
//! search.
//!
//! Sum inequalities are decided in exact integers. Product inequalities use
//! the exact primorial up to the table's product cap and certified theta
//! intervals above it, falling back to the exact product for any index the
//! intervals cannot decide, so they never report `Undecided` either.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agm::refined_upper_bounds;
use crate::analytic::{constant_c, gap_coefficient};
use crate::error::{domain, Error, Result};
use crate::prime_core::PrimeTable;
use crate::rigor::{certify_less, certify_less_eq, Interval, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    /// Decided exactly at every index; never `Undecided`.
    ExactInteger,
    /// Decided by certified interval comparison; may be `Undecided`.
    IntervalReal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    Mandl,
    MandlRefined,
    IntegralGap,
    HalfGap,
    EuclidLower,
    BonseSq,
    BonseCube,
    Sandor,
    Panaitopol,
    HassaniLower,
    AgmUpper,
    AgmUpperRefined,
    RobinAverage,
    RooinOmegaUpper,
    RooinClosedUpper,
}

pub const ALL_IDS: [InequalityId; 15] = [
    InequalityId::Mandl,
    InequalityId::MandlRefined,
    InequalityId::IntegralGap,
    InequalityId::HalfGap,
    InequalityId::EuclidLower,
    InequalityId::BonseSq,
    InequalityId::BonseCube,
    InequalityId::Sandor,
    InequalityId::Panaitopol,
    InequalityId::HassaniLower,
    InequalityId::AgmUpper,
    InequalityId::AgmUpperRefined,
    InequalityId::RobinAverage,
    InequalityId::RooinOmegaUpper,
    InequalityId::RooinClosedUpper,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityDef {
    pub id: InequalityId,
    pub description: &'static str,
    /// Smallest index at which the predicate is defined.
    pub domain_min: u64,
    /// Index from which the inequality is claimed to hold for all n.
    pub claimed_from: Option<u64>,
    pub kind: Kind,
    pub cites: &'static str,
}

impl InequalityId {
    pub fn as_str(self) -> &'static str {
        use InequalityId::*;
        match self {
            Mandl => "mandl",
            MandlRefined => "mandl_refined",
            IntegralGap => "integral_gap",
            HalfGap => "half_gap",
            EuclidLower => "euclid_lower",
            BonseSq => "bonse_sq",
            BonseCube => "bonse_cube",
            Sandor => "sandor",
            Panaitopol => "panaitopol",
            HassaniLower => "hassani_lower",
            AgmUpper => "agm_upper",
            AgmUpperRefined => "agm_upper_refined",
            RobinAverage => "robin_average",
            RooinOmegaUpper => "rooin_omega_upper",
            RooinClosedUpper => "rooin_closed_upper",
        }
    }

    pub fn def(self) -> InequalityDef {
        use InequalityId::*;
        use Kind::*;
        let (description, domain_min, claimed_from, kind, cites) = match self {
            Mandl => (
                "sum_{i<=n} p_i < (n/2) p_n",
                1,
                9,
                ExactInteger,
                "Mandl; Rosser and Schoenfeld",
            ),
            MandlRefined => (
                "sum_{i<=n} p_i < (n/2) p_n - n^2/14",
                1,
                10,
                ExactInteger,
                "refinement of Mandl",
            ),
            IntegralGap => (
                "n p_n - sum p_i >= c + (p_n^2 / 2 ln p_n)(1 + 3 / (2 ln p_n))",
                1,
                109,
                IntervalReal,
                "integral of pi(x) with Dusart's lower bound",
            ),
            HalfGap => (
                "(n/2) p_n - sum p_i >= c + 0.1119 p_n^2 / ln^2 p_n",
                1,
                109,
                IntervalReal,
                "integral of pi(x) with Dusart's bounds",
            ),
            EuclidLower => (
                "p_1 ... p_n > p_{n+1}",
                2,
                2,
                ExactInteger,
                "Euclid",
            ),
            BonseSq => (
                "p_1 ... p_n > p_{n+1}^2",
                1,
                4,
                ExactInteger,
                "Bonse",
            ),
            BonseCube => (
                "p_1 ... p_n > p_{n+1}^3",
                1,
                5,
                ExactInteger,
                "Bonse",
            ),
            Sandor => (
                "p_1 ... p_n > p_{n+5}^2 + p_{floor(n/2)}^2",
                2,
                24,
                ExactInteger,
                "Sandor",
            ),
            Panaitopol => (
                "p_1 ... p_n > p_{n+1}^{n - pi(n)}",
                2,
                2,
                ExactInteger,
                "Panaitopol",
            ),
            HassaniLower => (
                "theta(p_n) > (1 - 1/ln n)(n - pi(n)) ln p_{n+1}",
                2,
                101,
                IntervalReal,
                "Hassani",
            ),
            AgmUpper => (
                "p_1 ... p_n < (p_n / 2)^n",
                1,
                5,
                ExactInteger,
                "AM-GM with Mandl",
            ),
            AgmUpperRefined => (
                "p_1 ... p_n < (p_n/2 - n/14)^n",
                1,
                5,
                ExactInteger,
                "AM-GM with refined Mandl",
            ),
            RobinAverage => (
                "n p_{floor(n/2)} <= sum_{i<=n} p_i",
                2,
                2,
                ExactInteger,
                "Robin",
            ),
            RooinOmegaUpper => (
                "theta(p_n) < n ln(p_n/2 - n/14 - Omega(n))",
                10,
                10,
                IntervalReal,
                "Rooin's AM-GM refinement with Robin",
            ),
            RooinClosedUpper => (
                "theta(p_n) < n ln((p_n/2)(1 - (2^{1/n} - 1)^n / n) - n/14)",
                10,
                10,
                IntervalReal,
                "Rooin's AM-GM refinement with Robin",
            ),
        };
        InequalityDef {
            id: self,
            description,
            domain_min,
            claimed_from: Some(claimed_from),
            kind,
            cites,
        }
    }

    /// Largest prime index the predicate reads at `n`.
    pub fn reach(self, n: u64) -> u64 {
        use InequalityId::*;
        match self {
            Sandor => n + 5,
            EuclidLower | BonseSq | BonseCube | Panaitopol | HassaniLower => n + 1,
            _ => n,
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_IDS
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownId {
                id: s.to_string(),
                valid: valid_ids(),
            })
    }
}

pub fn registry() -> Vec<InequalityDef> {
    ALL_IDS.iter().map(|id| id.def()).collect()
}

/// Comma-separated list of every registered id.
pub fn valid_ids() -> String {
    ALL_IDS
        .iter()
        .map(|id| id.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn check_index(id: InequalityId, n: u64, table: &PrimeTable) -> Result<()> {
    let def = id.def();
    if n < def.domain_min {
        return Err(domain(
            "evaluate",
            format!("{id} requires n >= {}, got {n}", def.domain_min),
        ));
    }
    let needed = id.reach(n);
    if needed > table.count() {
        return Err(Error::TableTooSmall {
            id: id.as_str(),
            index: n,
            needed,
            count: table.count(),
        });
    }
    Ok(())
}

pub fn evaluate(id: InequalityId, n: u64, table: &PrimeTable) -> Result<Verdict> {
    check_index(id, n, table)?;
    evaluate_unchecked(id, n, table)
}

/// `mult^mult_exp * p_1...p_n` against `base^exp`.
struct ProductCmp {
    mult: u64,
    mult_exp: u64,
    base: u128,
    exp: u64,
    /// The product side is claimed to be the larger one.
    product_above: bool,
}

impl ProductCmp {
    fn lower(base: u128, exp: u64) -> Self {
        Self {
            mult: 1,
            mult_exp: 0,
            base,
            exp,
            product_above: true,
        }
    }

    fn exact(&self, n: u64, table: &PrimeTable) -> Result<Verdict> {
        let mut left = table.primorial_uncapped(n)?;
        if self.mult_exp > 0 {
            left *= BigUint::from(self.mult).pow(exp_u32(self.mult_exp)?);
        }
        let right = BigUint::from(self.base).pow(exp_u32(self.exp)?);
        Ok(Verdict::from_bool(if self.product_above {
            left > right
        } else {
            left < right
        }))
    }

    fn interval(&self, n: u64, table: &PrimeTable) -> Result<Verdict> {
        let mut left = table.theta_of(n)?;
        if self.mult_exp > 0 {
            left = left + Interval::from_u64(self.mult_exp) * Interval::from_u64(self.mult).ln()?;
        }
        let right = Interval::from_u64(self.exp) * Interval::from_i128(self.base as i128).ln()?;
        Ok(if self.product_above {
            certify_less(right, left)
        } else {
            certify_less(left, right)
        })
    }

    fn decide(&self, n: u64, table: &PrimeTable) -> Result<Verdict> {
        if n <= table.product_cap() {
            return self.exact(n, table);
        }
        match self.interval(n, table)? {
            Verdict::Undecided => self.exact(n, table),
            v => Ok(v),
        }
    }
}

fn exp_u32(e: u64) -> Result<u32> {
    u32::try_from(e).map_err(|_| domain("evaluate", format!("exponent {e} too large")))
}

fn ln_u64(x: u64) -> Result<Interval> {
    Interval::from_u64(x).ln()
}

/// Evaluates without the domain and table-size checks.
fn evaluate_unchecked(id: InequalityId, n: u64, table: &PrimeTable) -> Result<Verdict> {
    use InequalityId::*;
    let p = table.prime(n)?;
    let sum = table.prefix_sum(n)?;
    let nn = n as u128;
    let v = match id {
        Mandl => Verdict::from_bool(2 * sum < nn * p as u128),
        MandlRefined => {
            let lhs = 28 * sum as i128;
            let rhs = 14 * (nn * p as u128) as i128 - 2 * (nn * nn) as i128;
            Verdict::from_bool(lhs < rhs)
        }
        RobinAverage => {
            let half = table.prime(n / 2)? as u128;
            Verdict::from_bool(nn * half <= sum)
        }
        IntegralGap => {
            let lhs = Interval::from_i128(table.mandl_gap(n)?);
            let l = ln_u64(p)?;
            let two_l = l.scale(2.0);
            let pp = Interval::from_u64(p).sqr();
            let factor = Interval::point(1.0) + Interval::point(3.0).checked_div(two_l)?;
            let rhs = constant_c() + pp.checked_div(two_l)? * factor;
            certify_less_eq(rhs, lhs)
        }
        HalfGap => {
            let gap = (nn * p as u128) as i128 - 2 * sum as i128;
            let lhs = Interval::ratio(gap, 2)?;
            let l = ln_u64(p)?;
            let pp = Interval::from_u64(p).sqr();
            let rhs = constant_c() + gap_coefficient() * pp.checked_div(l.sqr())?;
            certify_less_eq(rhs, lhs)
        }
        EuclidLower => ProductCmp::lower(table.prime(n + 1)? as u128, 1).decide(n, table)?,
        BonseSq => ProductCmp::lower(table.prime(n + 1)? as u128, 2).decide(n, table)?,
        BonseCube => ProductCmp::lower(table.prime(n + 1)? as u128, 3).decide(n, table)?,
        Sandor => {
            let a = table.prime(n + 5)? as u128;
            let b = table.prime(n / 2)? as u128;
            ProductCmp::lower(a * a + b * b, 1).decide(n, table)?
        }
        Panaitopol => {
            let e = n - table.pi_of(n)?;
            ProductCmp::lower(table.prime(n + 1)? as u128, e).decide(n, table)?
        }
        AgmUpper => ProductCmp {
            mult: 2,
            mult_exp: n,
            base: p as u128,
            exp: n,
            product_above: false,
        }
        .decide(n, table)?,
        AgmUpperRefined => {
            // (p_n/2 - n/14)^n = ((7 p_n - n) / 14)^n
            let base = 7 * p as u128 - nn;
            ProductCmp {
                mult: 14,
                mult_exp: n,
                base,
                exp: n,
                product_above: false,
            }
            .decide(n, table)?
        }
        HassaniLower => {
            let e = Interval::from_u64(n - table.pi_of(n)?);
            let shrink = Interval::point(1.0) - ln_u64(n)?.recip()?;
            let rhs = shrink * e * ln_u64(table.prime(n + 1)?)?;
            certify_less(rhs, table.theta_of(n)?)
        }
        RooinOmegaUpper => {
            let b = refined_upper_bounds(n, table)?;
            certify_less(table.theta_of(n)?, b.omega_refined)
        }
        RooinClosedUpper => {
            let b = refined_upper_bounds(n, table)?;
            certify_less(table.theta_of(n)?, b.closed_form)
        }
    };
    Ok(v)
}

/// A maximal block of consecutive indices sharing one verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub start: u64,
    pub end: u64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: InequalityId,
    pub from: u64,
    pub to: u64,
    pub runs: Vec<Run>,
    pub first_failure: Option<u64>,
    pub undecided: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.from == other.from
            && self.to == other.to
            && self.runs == other.runs
            && self.first_failure == other.first_failure
            && self.undecided == other.undecided
    }
}

impl VerificationReport {
    /// Rebuilds a report from its runs, which must tile a single range.
    pub fn from_runs(id: InequalityId, runs: Vec<Run>, elapsed: Duration) -> Result<Self> {
        let (first, last) = match (runs.first(), runs.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return Err(Error::MalformedReport(format!("{id}: no rows"))),
        };
        for (i, r) in runs.iter().enumerate() {
            if r.start > r.end {
                return Err(Error::MalformedReport(format!(
                    "{id}: run {}..{} is reversed",
                    r.start, r.end
                )));
            }
            if i > 0 && runs[i - 1].end + 1 != r.start {
                return Err(Error::MalformedReport(format!(
                    "{id}: gap or overlap before {}",
                    r.start
                )));
            }
        }
        let first_failure = runs
            .iter()
            .find(|r| r.verdict == Verdict::Fails)
            .map(|r| r.start);
        let undecided = runs
            .iter()
            .filter(|r| r.verdict == Verdict::Undecided)
            .flat_map(|r| r.start..=r.end)
            .collect();
        Ok(Self {
            id,
            from: first.start,
            to: last.end,
            runs,
            first_failure,
            undecided,
            elapsed,
        })
    }

    pub fn holds_all(&self) -> bool {
        self.runs.iter().all(|r| r.verdict == Verdict::Holds)
    }

    pub fn count(&self, verdict: Verdict) -> u64 {
        self.runs
            .iter()
            .filter(|r| r.verdict == verdict)
            .map(|r| r.end - r.start + 1)
            .sum()
    }

    /// `Fails` if any index fails, else `Undecided` if any is undecided, else `Holds`.
    pub fn overall(&self) -> Verdict {
        if self.first_failure.is_some() {
            Verdict::Fails
        } else if !self.undecided.is_empty() {
            Verdict::Undecided
        } else {
            Verdict::Holds
        }
    }
}

const CHUNK: u64 = 2048;

fn compress(start: u64, verdicts: impl IntoIterator<Item = Verdict>) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for (n, v) in (start..).zip(verdicts) {
        match runs.last_mut() {
            Some(r) if r.verdict == v => r.end = n,
            _ => runs.push(Run {
                start: n,
                end: n,
                verdict: v,
            }),
        }
    }
    runs
}

/// Evaluates every index in `[a, b]` on a pool of `jobs` workers.
///
/// The report does not depend on `jobs`.
pub fn verify_range(
    id: InequalityId,
    a: u64,
    b: u64,
    table: &PrimeTable,
    jobs: usize,
) -> Result<VerificationReport> {
    let started = Instant::now();
    if a > b {
        return Err(Error::InvalidRange {
            from: a,
            to: b,
            detail: "start exceeds end".into(),
        });
    }
    check_index(id, a, table)?;
    check_index(id, b, table)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    let starts: Vec<u64> = (a..=b).step_by(CHUNK as usize).collect();
    let chunks = pool.install(|| {
        starts
            .par_iter()
            .map(|&s| {
                let e = (s + CHUNK - 1).min(b);
                (s..=e)
                    .map(|n| evaluate_unchecked(id, n, table))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let runs = compress(a, chunks.into_iter().flatten());
    VerificationReport::from_runs(id, runs, started.elapsed())
}

/// Outcome of a crossover search over `[domain_min, limit]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossover {
    pub id: InequalityId,
    pub limit: u64,
    /// One past the last index that is not certified to hold, or
    /// `domain_min` if every index holds; `limit + 1` if the last index fails.
    pub stable_from: u64,
    pub last_failure: Option<u64>,
    pub last_undecided: Option<u64>,
    pub undecided_count: u64,
}

pub fn crossover(
    id: InequalityId,
    limit: u64,
    table: &PrimeTable,
    jobs: usize,
) -> Result<Crossover> {
    let min = id.def().domain_min;
    let report = verify_range(id, min, limit, table, jobs)?;
    let last_of = |v: Verdict| report.runs.iter().rev().find(|r| r.verdict == v).map(|r| r.end);
    let last_failure = last_of(Verdict::Fails);
    let last_undecided = last_of(Verdict::Undecided);
    let stable_from = last_failure.max(last_undecided).map_or(min, |k| k + 1);
    Ok(Crossover {
        id,
        limit,
        stable_from,
        last_failure,
        last_undecided,
        undecided_count: report.undecided.len() as u64,
    })
}

/// One serialized run: `id, start, end, verdict`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: InequalityId,
    pub start: u64,
    pub end: u64,
    pub verdict: Verdict,
}

fn rows(reports: &[VerificationReport]) -> impl Iterator<Item = ReportRow> + '_ {
    reports.iter().flat_map(|rep| {
        rep.runs.iter().map(move |r| ReportRow {
            id: rep.id,
            start: r.start,
            end: r.end,
            verdict: r.verdict,
        })
    })
}

pub fn write_reports_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows(reports) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_reports_jsonl<W: Write>(reports: &[VerificationReport], mut out: W) -> Result<()> {
    for row in rows(reports) {
        serde_json::to_writer(&mut out, &row)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Groups rows back into reports; a new report starts whenever the id
/// changes or the ranges stop being contiguous.
fn group(rows: Vec<ReportRow>) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let mut current: Vec<Run> = Vec::new();
    let mut current_id = None;
    for row in rows {
        let contiguous = current.last().is_some_and(|r| r.end + 1 == row.start);
        if current_id != Some(row.id) || !contiguous {
            if let Some(id) = current_id {
                out.push(VerificationReport::from_runs(id, std::mem::take(&mut current), Duration::ZERO)?);
            }
            current_id = Some(row.id);
        }
        current.push(Run {
            start: row.start,
            end: row.end,
            verdict: row.verdict,
        });
    }
    if let Some(id) = current_id {
        out.push(VerificationReport::from_runs(id, current, Duration::ZERO)?);
    }
    Ok(out)
}

pub fn read_reports_csv<R: Read>(input: R) -> Result<Vec<VerificationReport>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<ReportRow>, _>>()?;
    group(rows)
}

pub fn read_reports_jsonl<R: Read>(input: R) -> Result<Vec<VerificationReport>> {
    let rows = serde_json::Deserializer::from_reader(input)
        .into_iter::<ReportRow>()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    group(rows)
}
