//! `primebounds`: build prime tables and verify the inequality catalog from
//! the command line.
//!
//! Exit status: 0 when everything checked holds, 1 on any certified
//! failure, 2 on undecided results without failures, 64 on usage errors
//! and 70 on any other error.

mod table;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use primebounds::agm::{agm_table, write_agm_csv};
use primebounds::analytic::{
    gap_coefficient, gap_coefficient_prose, minorant_crossover, Constants, MinorantCrossover,
};
use primebounds::catalog::{
    crossover, verify_range, write_reports_csv, write_reports_jsonl, Crossover, InequalityId,
    VerificationReport,
};
use primebounds::limit::{convergence_table, write_convergence_csv};
use primebounds::{Error, Interval, Verdict};

const EXIT_FAIL: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "primebounds", version, about = "Certified checks of explicit prime inequalities")]
struct Cli {
    /// Prime table cache file; built and written if missing.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Number of primes in the table (grown automatically if a command needs more).
    #[arg(long, global = true, default_value_t = 1_000_000)]
    count: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for range sweeps (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    /// Largest index at which exact primorials are used.
    #[arg(long, global = true)]
    product_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check inequalities at every index of a range.
    Verify {
        #[arg(long = "ineq", required = true)]
        ineq: Vec<InequalityId>,
        /// First index (default: the inequality's smallest valid index).
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: u64,
    },
    /// Find the index from which an inequality holds up to a limit.
    Crossover {
        #[arg(long = "ineq", required = true)]
        ineq: Vec<InequalityId>,
        #[arg(long)]
        limit: u64,
    },
    /// Print a constant and, for `c`, the crossovers of both gap coefficients.
    Constant {
        #[arg(value_enum, default_value_t = ConstantName::C)]
        name: ConstantName,
        /// Search limit for the coefficient crossovers.
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
    /// Convergence of the primorial root to e.
    Limit {
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 1)]
        stride: u64,
    },
    /// The three refined upper bounds for theta(p_n).
    Agm {
        #[arg(long, default_value_t = 10)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 1)]
        stride: u64,
    },
    /// Build a prime table and write it to the cache.
    Sieve,
    /// List the registered inequalities.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstantName {
    C,
    D,
    Gamma,
}

fn jobs(cli: &Cli) -> usize {
    cli.jobs.map(|j| j as usize).unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    })
}

fn verdict_exit(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails => EXIT_FAIL,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

/// Worst of the verdicts: any failure, then any undecided, else holds.
fn combine(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    vs.into_iter().fold(Verdict::Holds, |acc, v| match (acc, v) {
        (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
        (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
        _ => Verdict::Holds,
    })
}

fn interval_text(iv: Interval) -> String {
    format!("lo={:.17e} hi={:.17e} mid={:.12}", iv.lo(), iv.hi(), iv.mid())
}

fn write_jsonl<T: serde::Serialize>(out: &mut impl Write, items: &[T]) -> Result<(), Error> {
    for item in items {
        serde_json::to_writer(&mut *out, item)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn cmd_verify(
    cli: &Cli,
    ids: &[InequalityId],
    from: Option<u64>,
    to: u64,
    out: &mut impl Write,
) -> Result<u8, Error> {
    let needed = ids.iter().map(|id| id.reach(to)).max().unwrap_or(to);
    let table = table::obtain(cli, needed)?;
    let reports = ids
        .iter()
        .map(|&id| {
            let a = from.unwrap_or(id.def().domain_min);
            verify_range(id, a, to, &table, jobs(cli))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match cli.format {
        Format::Text => {
            for r in &reports {
                write_report_text(out, r)?;
            }
        }
        Format::Csv => write_reports_csv(&reports, &mut *out)?,
        Format::Jsonl => write_reports_jsonl(&reports, &mut *out)?,
    }
    Ok(verdict_exit(combine(reports.iter().map(|r| r.overall()))))
}

fn write_report_text(out: &mut impl Write, r: &VerificationReport) -> io::Result<()> {
    writeln!(
        out,
        "{} {}..{}: {} ({} holds, {} fails, {} undecided) in {:.3}s",
        r.id,
        r.from,
        r.to,
        r.overall(),
        r.count(Verdict::Holds),
        r.count(Verdict::Fails),
        r.count(Verdict::Undecided),
        r.elapsed.as_secs_f64()
    )?;
    match r.first_failure {
        Some(n) => writeln!(out, "  first_failure: {n}")?,
        None => writeln!(out, "  first_failure: none")?,
    }
    if !r.undecided.is_empty() {
        let shown: Vec<String> = r.undecided.iter().take(20).map(u64::to_string).collect();
        writeln!(out, "  undecided: {}", shown.join(" "))?;
    }
    Ok(())
}

fn cmd_crossover(
    cli: &Cli,
    ids: &[InequalityId],
    limit: u64,
    out: &mut impl Write,
) -> Result<u8, Error> {
    let needed = ids.iter().map(|id| id.reach(limit)).max().unwrap_or(limit);
    let table = table::obtain(cli, needed)?;
    let results = ids
        .iter()
        .map(|&id| crossover(id, limit, &table, jobs(cli)))
        .collect::<Result<Vec<_>, _>>()?;
    match cli.format {
        Format::Text => {
            for c in &results {
                writeln!(
                    out,
                    "{}: stable_from {} (searched {}..{}), last_failure {}, undecided {}",
                    c.id,
                    c.stable_from,
                    c.id.def().domain_min,
                    c.limit,
                    opt(c.last_failure),
                    c.undecided_count
                )?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "id",
                "limit",
                "stable_from",
                "last_failure",
                "last_undecided",
                "undecided_count",
            ])?;
            for c in &results {
                w.write_record([
                    c.id.to_string(),
                    c.limit.to_string(),
                    c.stable_from.to_string(),
                    csv_opt(c.last_failure),
                    csv_opt(c.last_undecided),
                    c.undecided_count.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Jsonl => write_jsonl(out, &results)?,
    }
    let undecided = results.iter().any(|c: &Crossover| c.undecided_count > 0);
    Ok(if undecided { EXIT_UNDECIDED } else { 0 })
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "none".to_string(), |n| n.to_string())
}

fn csv_opt(v: Option<u64>) -> String {
    v.map(|n| n.to_string()).unwrap_or_default()
}

fn crossover_text(label: &str, m: &MinorantCrossover) -> String {
    match (m.first_holds, m.stable_from) {
        (_, Some(s)) => format!(
            "coefficient {label}: minorant exceeds n^2/14 from n = {s} (first {}, searched to {}, undecided {})",
            opt(m.first_holds),
            m.limit,
            m.undecided
        ),
        (first, None) => format!(
            "coefficient {label}: no stable crossover up to {} (first {}, undecided {})",
            m.limit,
            opt(first),
            m.undecided
        ),
    }
}

fn cmd_constant(
    cli: &Cli,
    name: ConstantName,
    limit: u64,
    out: &mut impl Write,
) -> Result<u8, Error> {
    let k = Constants::compute();
    let value = match name {
        ConstantName::C => k.c,
        ConstantName::D => Interval::from_u64(k.d),
        ConstantName::Gamma => k.euler_gamma,
    };
    let label = match name {
        ConstantName::C => "c",
        ConstantName::D => "d",
        ConstantName::Gamma => "gamma",
    };
    let crossings = if name == ConstantName::C {
        Some((
            minorant_crossover(gap_coefficient(), limit)?,
            minorant_crossover(gap_coefficient_prose(), limit)?,
        ))
    } else {
        None
    };
    match cli.format {
        Format::Text => {
            writeln!(out, "{label} {}", interval_text(value))?;
            if let Some((main, prose)) = &crossings {
                writeln!(out, "{}", crossover_text("0.1119", main))?;
                writeln!(out, "{}", crossover_text("0.0119", prose))?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["name", "lo", "hi"])?;
            w.write_record([label.to_string(), format!("{:e}", value.lo()), format!("{:e}", value.hi())])?;
            if let Some((main, prose)) = &crossings {
                for (tag, m) in [("crossover_0.1119", main), ("crossover_0.0119", prose)] {
                    let s = csv_opt(m.stable_from);
                    w.write_record([tag.to_string(), s.clone(), s])?;
                }
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut obj = serde_json::json!({ "name": label, "value": value });
            if let Some((main, prose)) = &crossings {
                obj["crossover_0.1119"] = serde_json::to_value(main)?;
                obj["crossover_0.0119"] = serde_json::to_value(prose)?;
            }
            serde_json::to_writer(&mut *out, &obj)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(0)
}

fn cmd_limit(cli: &Cli, max: u64, stride: u64, out: &mut impl Write) -> Result<u8, Error> {
    let table = table::obtain(cli, max)?;
    let points = convergence_table(max, stride, &table)?;
    match cli.format {
        Format::Text => {
            for p in &points {
                writeln!(
                    out,
                    "n={} p_n={} root {} e-root={:.3e}",
                    p.n,
                    p.p_n,
                    interval_text(p.primorial_root),
                    std::f64::consts::E - p.primorial_root.mid()
                )?;
            }
        }
        Format::Csv => write_convergence_csv(&points, &mut *out)?,
        Format::Jsonl => write_jsonl(out, &points)?,
    }
    Ok(0)
}

fn cmd_agm(cli: &Cli, from: u64, to: u64, stride: u64, out: &mut impl Write) -> Result<u8, Error> {
    let table = table::obtain(cli, to)?;
    let rows = agm_table(&table, from, to, stride)?;
    match cli.format {
        Format::Text => {
            for r in &rows {
                let b = &r.bounds;
                writeln!(out, "n={}", r.n)?;
                writeln!(out, "  theta          {}", interval_text(r.theta))?;
                writeln!(out, "  agm_refined    {}", interval_text(b.agm_refined))?;
                writeln!(out, "  closed_form    {}", interval_text(b.closed_form))?;
                writeln!(out, "  omega_refined  {}", interval_text(b.omega_refined))?;
                writeln!(out, "  omega          {}", interval_text(b.omega.omega))?;
                writeln!(out, "  ordered        {}", b.ordered())?;
            }
        }
        Format::Csv => write_agm_csv(&rows, &mut *out)?,
        Format::Jsonl => write_jsonl(out, &rows)?,
    }
    let ordered = rows.iter().all(|r| r.bounds.ordered());
    Ok(if ordered { 0 } else { EXIT_UNDECIDED })
}

fn cmd_sieve(cli: &Cli, out: &mut impl Write) -> Result<u8, Error> {
    let (table, path) = table::build_and_store(cli)?;
    writeln!(
        out,
        "{} primes, largest {}, written to {}",
        table.count(),
        table.largest(),
        path.display()
    )?;
    Ok(0)
}

fn cmd_list(cli: &Cli, out: &mut impl Write) -> Result<u8, Error> {
    let defs = primebounds::catalog::registry();
    match cli.format {
        Format::Jsonl => write_jsonl(out, &defs)?,
        _ => {
            for d in defs {
                writeln!(
                    out,
                    "{:<20} n >= {:<4} claimed from {:<4} {:?}  {}",
                    d.id.as_str(),
                    d.domain_min,
                    opt(d.claimed_from),
                    d.kind,
                    d.description
                )?;
            }
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Verify { ineq, from, to } => cmd_verify(cli, ineq, *from, *to, &mut out)?,
        Command::Crossover { ineq, limit } => cmd_crossover(cli, ineq, *limit, &mut out)?,
        Command::Constant { name, limit } => cmd_constant(cli, *name, *limit, &mut out)?,
        Command::Limit { max, stride } => cmd_limit(cli, *max, *stride, &mut out)?,
        Command::Agm { from, to, stride } => cmd_agm(cli, *from, *to, *stride, &mut out)?,
        Command::Sieve => cmd_sieve(cli, &mut out)?,
        Command::List => cmd_list(cli, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownId { .. } | Error::InvalidRange { .. } | Error::Domain { .. }
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_SOFTWARE
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_follows_worst_verdict() {
        use Verdict::*;
        assert_eq!(verdict_exit(combine([Holds, Holds])), 0);
        assert_eq!(verdict_exit(combine([Holds, Undecided])), EXIT_UNDECIDED);
        assert_eq!(verdict_exit(combine([Undecided, Fails, Holds])), EXIT_FAIL);
        assert_eq!(verdict_exit(combine([])), 0);
    }

    #[test]
    fn command_line_definition_is_valid() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
