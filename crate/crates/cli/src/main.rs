use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divtop::asymptotics::{self, ConvergenceRow, Which};
use divtop::betti::{betti_delta, betti_delta_shifted_count, betti_delta_tilde};
use divtop::complex::{
    build_delta_complex, build_divisor_multicomplex, homology_betti, multicomplex_betti,
    MulticomplexModel, DEFAULT_FACE_CAP,
};
use divtop::number::{SieveConfig, DEFAULT_SEGMENT_LEN};
use divtop::verify::{self, Suite, VerifyConfig};
use divtop::{BettiVector, Error, Tables};
use serde_json::json;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "divtop",
    version,
    about = "Divisor complexes of the integers: Betti numbers, identities, asymptotics"
)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Sieve limit N; defaults to what the command needs
    #[arg(long, global = true, env = "DIVTOP_LIMIT")]
    limit: Option<u64>,

    /// Build weight counters only up to this bound (at most N)
    #[arg(long, global = true)]
    counter_limit: Option<u64>,

    /// Largest explicit complex the homology oracle will build
    #[arg(long, global = true, env = "DIVTOP_FACE_CAP", default_value_t = DEFAULT_FACE_CAP)]
    face_cap: u64,

    /// Worker threads; 1 forces the sequential path
    #[arg(long, global = true, env = "DIVTOP_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Segment length of the segmented sieve
    #[arg(long, global = true, default_value_t = DEFAULT_SEGMENT_LEN)]
    segment_len: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced Betti numbers of Δ_n or Δ̃_n
    Betti(BettiArgs),
    /// Run identity sweeps over 1..=max-n
    Verify(VerifyArgs),
    /// Emit a number-theoretic series
    Series(SeriesArgs),
    /// Convergence reports against leading asymptotic terms
    Asymptotics(AsymptoticsArgs),
}

#[derive(Args, Debug)]
struct BettiArgs {
    #[arg(long, required_unless_present = "multicomplex_file")]
    n: Option<u64>,

    #[arg(long, value_enum, default_value_t = ComplexKind::Delta)]
    complex: ComplexKind,

    /// Defaults to formula for delta and wedge for delta-tilde
    #[arg(long, value_enum)]
    method: Option<BettiMethod>,

    /// Multicomplex file, one monomial per line as `i^e` factors, `1` for the unit
    #[arg(long, conflicts_with_all = ["n", "method"])]
    multicomplex_file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ComplexKind {
    Delta,
    DeltaTilde,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BettiMethod {
    Formula,
    Count,
    Oracle,
    Wedge,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,

    #[arg(long)]
    max_n: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Homology,
    Shifted,
    Euler,
    Inversion,
    Shadow,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Homology => Suite::Homology,
            SuiteArg::Shifted => Suite::Shifted,
            SuiteArg::Euler => Suite::Euler,
            SuiteArg::Inversion => Suite::Inversion,
            SuiteArg::Shadow => Suite::Shadow,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    quantity: Quantity,

    /// Weight for sigma-odd-k
    #[arg(long, required_if_eq("quantity", "sigma-odd-k"))]
    k: Option<i64>,

    /// Inclusive range `a..b`
    #[arg(long, value_parser = parse_range)]
    range: (u64, u64),

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    stride: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Mertens,
    Liouville,
    Sigma,
    SigmaOddK,
}

#[derive(Args, Debug)]
struct AsymptoticsArgs {
    #[arg(long, value_enum)]
    report: Report,

    /// Comma-separated sample points
    #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 10_000, 100_000, 1_000_000])]
    ns: Vec<u64>,

    /// Degree for fixed-k
    #[arg(long, default_value_t = 0)]
    k: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Report {
    TotalBettiDelta,
    ParityDelta,
    ParityDeltaTilde,
    FixedK,
    TotalBettiDeltaTilde,
    Growth,
    SqfreeDensity,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad end: {e}"))?;
    Ok((a, b))
}

/// A failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Parse { .. } | Error::NotClosed { .. } => EXIT_USAGE,
            _ => EXIT_RESOURCE,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("divtop: {e}");
            return ExitCode::from(EXIT_RESOURCE);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("divtop: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Fail> {
    let g = &cli.global;
    if g.face_cap == 0 {
        return Err(Fail::usage("--face-cap must be at least 1"));
    }
    let mut out: Box<dyn Write> = match &g.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let code = match &cli.command {
        Command::Betti(a) => cmd_betti(g, a, &mut out)?,
        Command::Verify(a) => cmd_verify(g, a, &mut out)?,
        Command::Series(a) => cmd_series(g, a, &mut out)?,
        Command::Asymptotics(a) => cmd_asymptotics(g, a, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

/// Sieve and counters sized for `needed` (and `counters_needed`), honoring
/// any user-supplied limits.
fn tables(g: &Global, needed: u64, counters_needed: u64) -> Result<Tables, Fail> {
    let limit = match g.limit {
        Some(l) if l < needed => {
            return Err(Error::Range {
                n: needed,
                limit: l,
            }
            .into())
        }
        Some(l) => l,
        None => needed.max(1),
    };
    let counter_limit = match g.counter_limit {
        Some(c) if c > limit => {
            return Err(Fail::usage(format!(
                "--counter-limit {c} exceeds the limit {limit}"
            )))
        }
        Some(c) if c < counters_needed => {
            return Err(Error::Range {
                n: counters_needed,
                limit: c,
            }
            .into())
        }
        Some(c) => c,
        None => counters_needed.clamp(1, limit),
    };
    let config = SieveConfig {
        segment_len: g.segment_len,
        ..SieveConfig::default()
    };
    Ok(Tables::build_with(limit, counter_limit, &config)?)
}

fn cmd_betti(g: &Global, a: &BettiArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    if let Some(path) = &a.multicomplex_file {
        let text = std::fs::read_to_string(path)?;
        let m = MulticomplexModel::parse(&text)?;
        let b = multicomplex_betti(&m, g.face_cap)?;
        write_betti(g.format, &b, "multicomplex", &[], out)?;
        return Ok(0);
    }
    let n = a.n.expect("clap enforces --n");
    let method = a.method.unwrap_or(match a.complex {
        ComplexKind::Delta => BettiMethod::Formula,
        ComplexKind::DeltaTilde => BettiMethod::Wedge,
    });
    let complex = match a.complex {
        ComplexKind::Delta => "delta",
        ComplexKind::DeltaTilde => "delta-tilde",
    };
    let mut torsion = Vec::new();
    let b: BettiVector = match (a.complex, method) {
        (ComplexKind::Delta, BettiMethod::Formula) => betti_delta(n, &tables(g, n, n)?.counters)?,
        (ComplexKind::Delta, BettiMethod::Count) => {
            betti_delta_shifted_count(n, &tables(g, n, 1)?.sieve)?
        }
        (ComplexKind::Delta, BettiMethod::Oracle) => {
            let t = tables(g, n, 1)?;
            let h = homology_betti(&build_delta_complex(n, &t.sieve, g.face_cap)?);
            torsion = h.torsion;
            h.betti
        }
        (ComplexKind::DeltaTilde, BettiMethod::Wedge) => betti_delta_tilde(n, &tables(g, n, n)?)?,
        (ComplexKind::DeltaTilde, BettiMethod::Oracle) => {
            let t = tables(g, n, 1)?;
            let mut b = multicomplex_betti(&build_divisor_multicomplex(n, &t.sieve)?, g.face_cap)?;
            b.n = n;
            b
        }
        (c, m) => {
            return Err(Fail::usage(format!(
                "method {} does not apply to {complex} (use {})",
                m.to_possible_value().unwrap().get_name(),
                match c {
                    ComplexKind::Delta => "formula, count or oracle",
                    ComplexKind::DeltaTilde => "wedge or oracle",
                }
            )))
        }
    };
    write_betti(g.format, &b, complex, &torsion, out)?;
    Ok(0)
}

fn write_betti(
    format: Format,
    b: &BettiVector,
    complex: &str,
    torsion: &[(i64, Vec<String>)],
    out: &mut dyn Write,
) -> io::Result<()> {
    let chi = b.reduced_euler();
    match format {
        Format::Table => {
            writeln!(out, "{complex} n={} method={}", b.n, method_name(b))?;
            writeln!(out, "{:>4}  beta", "k")?;
            for (k, v) in b.iter() {
                writeln!(out, "{k:>4}  {v}")?;
            }
            for (k, t) in torsion {
                writeln!(out, "torsion k={k}: {}", t.join(" "))?;
            }
            writeln!(out, "reduced euler characteristic: {chi}")?;
        }
        Format::Csv => {
            writeln!(out, "k,beta")?;
            for (k, v) in b.iter() {
                writeln!(out, "{k},{v}")?;
            }
        }
        Format::Json => {
            let betti: Vec<_> = b.iter().map(|(k, v)| json!({"k": k, "beta": v})).collect();
            let torsion: Vec<_> = torsion
                .iter()
                .map(|(k, t)| json!({"k": k, "factors": t}))
                .collect();
            let doc = json!({
                "complex": complex,
                "n": b.n,
                "method": b.method,
                "betti": betti,
                "torsion": torsion,
                "reduced_euler": chi,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).map_err(io::Error::other)?
            )?;
        }
    }
    Ok(())
}

fn method_name(b: &BettiVector) -> String {
    serde_json::to_value(b.method)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn cmd_verify(g: &Global, a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    let t = tables(g, a.max_n, a.max_n)?;
    let config = VerifyConfig {
        max_n: a.max_n,
        face_cap: g.face_cap,
    };
    let report = verify::run_with(a.suite.into(), &config, &t)?;
    match g.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).map_err(Error::from)?
        )?,
        _ => out.write_all(report.render().as_bytes())?,
    }
    Ok(if report.passed() { 0 } else { EXIT_VERIFY })
}

fn cmd_series(g: &Global, a: &SeriesArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    let (lo, hi) = a.range;
    let name = match a.quantity {
        Quantity::Mertens => "mertens".to_string(),
        Quantity::Liouville => "liouville".to_string(),
        Quantity::Sigma => "sigma".to_string(),
        Quantity::SigmaOddK => format!("sigma_odd_{}", a.k.expect("clap enforces --k")),
    };
    let points: Vec<u64> = if lo > hi {
        Vec::new()
    } else {
        (lo..=hi)
            .step_by(a.stride.try_into().unwrap_or(usize::MAX))
            .collect()
    };
    let values: Vec<(u64, i64)> = if points.is_empty() {
        Vec::new()
    } else {
        let counters_needed = match a.quantity {
            Quantity::Sigma | Quantity::SigmaOddK => hi,
            _ => 1,
        };
        let t = tables(g, hi, counters_needed)?;
        points
            .iter()
            .map(|&n| {
                let v = match (a.quantity, n) {
                    (Quantity::Mertens | Quantity::Liouville, 0) => 0,
                    (Quantity::Mertens, _) => t.summatory.mertens(n)?,
                    (Quantity::Liouville, _) => t.summatory.liouville(n)?,
                    (Quantity::Sigma, _) => t.counters.sigma(n) as i64,
                    (Quantity::SigmaOddK, _) => t.counters.sigma_k_odd(a.k.unwrap(), n) as i64,
                };
                Ok((n, v))
            })
            .collect::<divtop::Result<_>>()?
    };
    match g.format {
        Format::Csv | Format::Table => {
            writeln!(out, "n,{name}")?;
            for (n, v) in &values {
                writeln!(out, "{n},{v}")?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = values
                .iter()
                .map(|(n, v)| json!({"n": n, "value": v}))
                .collect();
            let doc = json!({"quantity": name, "rows": rows});
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).map_err(Error::from)?
            )?;
        }
    }
    Ok(0)
}

/// Tables are capped here for the growth report; larger samples stream.
const GROWTH_TABLE_CAP: u64 = 10_000_000;

fn cmd_asymptotics(g: &Global, a: &AsymptoticsArgs, out: &mut dyn Write) -> Result<u8, Fail> {
    let top = a.ns.iter().copied().max().unwrap_or(1).max(1);
    let rows: Vec<ConvergenceRow> = match a.report {
        Report::TotalBettiDelta => {
            asymptotics::report_total_betti_delta(&a.ns, &tables(g, top, top)?)?
        }
        Report::ParityDelta => {
            asymptotics::report_parity_betti(&a.ns, Which::Delta, &tables(g, top, top)?)?
        }
        Report::ParityDeltaTilde => {
            asymptotics::report_parity_betti(&a.ns, Which::DeltaTilde, &tables(g, top, top)?)?
        }
        Report::FixedK => asymptotics::report_fixed_k_betti(a.k, &a.ns, &tables(g, top, top)?)?,
        Report::TotalBettiDeltaTilde => {
            asymptotics::report_total_betti_delta_tilde(&a.ns, &tables(g, top, top)?)?
        }
        Report::Growth => {
            let t = tables(g, top.min(GROWTH_TABLE_CAP), 1)?;
            asymptotics::report_growth_traces(&a.ns, &t, g.segment_len)?
        }
        Report::SqfreeDensity => asymptotics::report_sqfree_density(&a.ns, &tables(g, top, 1)?)?,
    };
    match g.format {
        Format::Csv => asymptotics::write_csv(&rows, &mut *out)?,
        Format::Json => asymptotics::write_json(&rows, &mut *out)?,
        Format::Table => {
            writeln!(
                out,
                "{:<26} {:>10} {:>12} {:>16} {:>12} {:>14}",
                "quantity", "n", "measured", "predicted", "ratio", "residual"
            )?;
            for r in &rows {
                let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.6}"));
                writeln!(
                    out,
                    "{:<26} {:>10} {:>12} {:>16.4} {:>12} {:>14.4}",
                    r.quantity, r.n, r.measured, r.predicted, ratio, r.residual
                )?;
            }
        }
    }
    Ok(0)
}
