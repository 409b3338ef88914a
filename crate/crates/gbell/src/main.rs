//! Thin command-line front end over the library.
//!
//! Subcommands: `ratio` (single scenario, JSON), `table` (reference-table
//! CSV), `limit` (closed forms, JSON), `surface` (biased-limit CSV), and
//! `verify` (self-check suite). Exit codes: 0 success, 1 usage error or
//! failed verification, 2 infeasible exhaustive request. Worker threads
//! follow the standard `RAYON_NUM_THREADS` environment variable.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use gbell::asymptotics::{self, Formula};
use gbell::lhv::search::DEFAULT_RESTARTS;
use gbell::tables::{self, TableId};
use gbell::{grid, verify, violation_ratio, Error, Method, Scenario};
use std::io::{self, Write};
use std::process::exit;

/// Stdout writes go through here so `gbell surface | head` terminates
/// quietly instead of panicking when the reader closes the pipe.
fn emit(result: io::Result<()>) {
    if let Err(e) = result {
        if e.kind() == io::ErrorKind::BrokenPipe {
            exit(0);
        }
        eprintln!("error: stdout write failed: {e}");
        exit(1);
    }
}

#[derive(Parser)]
#[command(name = "gbell", version, about = "Violation ratios of geometrical Bell inequalities for qudit GHZ states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one scenario's violation ratio, printed as full-precision JSON
    Ratio(RatioArgs),
    /// Reproduce a reference table as CSV (3-decimal cells)
    Table(TableArgs),
    /// Evaluate a closed-form L -> infinity expression, printed as JSON
    Limit(LimitArgs),
    /// Export the biased-limit log-ratio surface as CSV
    Surface(SurfaceArgs),
    /// Run the oracle/strategy/optimizer self-check suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RatioArgs {
    /// Local dimension d >= 2
    #[arg(long)]
    d: u32,
    /// Bases per observer L >= 1
    #[arg(long)]
    l: u32,
    /// Observers N >= 2
    #[arg(long)]
    n: u32,
    /// Outcome strategy: real|complex|vector|dichotomic
    #[arg(long)]
    strategy: String,
    /// GHZ family: unbiased|biased
    #[arg(long)]
    state: String,
    /// Optimizer: auto|exhaustive|ascent|packed
    #[arg(long, default_value = "auto")]
    optimizer: String,
    /// Ascent restarts
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: u32,
    /// Seed for the randomized restarts
    #[arg(long, default_value_t = 1234)]
    seed: u64,
    /// Even-N grid offset: half_grid_step|literal_paper|none
    #[arg(long, default_value = "half_grid_step")]
    offset_convention: String,
    /// Also print the quantum correlation tensor as text (debugging)
    #[arg(long)]
    dump_tensor: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Table id: 1|2|2a|3|4|6
    #[arg(long)]
    table: String,
    /// Ascent restarts for cells too large to enumerate
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: u32,
    /// Seed for the randomized restarts
    #[arg(long, default_value_t = 1234)]
    seed: u64,
}

#[derive(Args)]
struct LimitArgs {
    /// Closed form: real|complex|biased|norm
    #[arg(long)]
    formula: String,
    /// Local dimension d
    #[arg(long)]
    d: u32,
    /// Observers N
    #[arg(long)]
    n: u32,
    /// Also compute the finite-L value and the relative gap
    #[arg(long)]
    compare_l: Option<u32>,
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(long, default_value_t = 2)]
    n_min: u32,
    #[arg(long, default_value_t = 15)]
    n_max: u32,
    #[arg(long, default_value_t = 3)]
    d_min: u32,
    #[arg(long, default_value_t = 20)]
    d_max: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to d <= 3, N <= 3 with fewer samples
    #[arg(long)]
    quick: bool,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            exit(1);
        }
    };
    match run(cli) {
        Ok(code) => exit(code),
        Err(e @ Error::ExhaustiveInfeasible { .. }) => {
            eprintln!("error: {e}");
            exit(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(1);
        }
    }
}

fn run(cli: Cli) -> gbell::Result<i32> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Ratio(a) => {
            let scenario = Scenario::new(a.n, a.d, a.l, a.state.parse()?, a.strategy.parse()?)?
                .with_offset(a.offset_convention.parse()?);
            let method = parse_method(&a.optimizer)?;
            let report = violation_ratio(&scenario, method, a.restarts, a.seed)?;
            if a.dump_tensor {
                emit(grid::quantum_tensor(&scenario)?.dump_text(&mut out));
            }
            emit(writeln!(out, "{}", report.to_json()));
        }
        Command::Table(a) => {
            let id: TableId = a.table.parse()?;
            let table = tables::compute(id, a.restarts, a.seed)?;
            emit(write!(out, "{}", table.to_csv()));
        }
        Command::Limit(a) => {
            let json = limit_json(&a)?;
            emit(writeln!(out, "{json}"));
        }
        Command::Surface(a) => {
            let rows = asymptotics::biased_surface((a.n_min, a.n_max), (a.d_min, a.d_max))?;
            emit(writeln!(out, "n,d,log_ratio"));
            for (n, d, log_ratio) in rows {
                emit(writeln!(out, "{n},{d},{log_ratio}"));
            }
        }
        Command::Verify(a) => {
            let report = verify::run(a.quick, 1234);
            emit(report.write_text(&mut out));
            return Ok(if report.all_passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn parse_method(s: &str) -> gbell::Result<Method> {
    match s {
        "auto" => Ok(Method::Auto),
        "exhaustive" => Ok(Method::Exhaustive),
        "ascent" => Ok(Method::AlternatingAscent),
        "packed" => Ok(Method::Packed),
        _ => Err(Error::OutOfRange(format!(
            "unknown optimizer '{s}' (expected auto|exhaustive|ascent|packed)"
        ))),
    }
}

/// The `limit` payload: the closed-form value, plus the finite-L value and
/// relative gap when --compare-l is given. The quantum-norm formula is not
/// a ratio, so it is handled apart from the three ratio limits.
fn limit_json(a: &LimitArgs) -> gbell::Result<String> {
    let mut value = if a.formula == "norm" {
        let norm = asymptotics::continuous_quantum_norm(a.d, a.n)?;
        serde_json::json!({ "formula": "norm", "n": a.n, "d": a.d, "value": norm })
    } else {
        let result = asymptotics::limit_ratio(a.formula.parse()?, a.d, a.n)?;
        serde_json::to_value(&result).expect("limit serialization cannot fail")
    };
    if let Some(l) = a.compare_l {
        let (finite, limit) = finite_l_value(a, l)?;
        value["compare_l"] = serde_json::json!({
            "l": l,
            "value": finite,
            "relative_gap": (finite - limit) / limit,
        });
    }
    Ok(serde_json::to_string_pretty(&value).expect("limit serialization cannot fail"))
}

/// Finite-L counterpart of a limit formula: the violation ratio of the
/// matching scenario, or the Riemann sum of the squared-correlation
/// integral for the norm formula.
fn finite_l_value(a: &LimitArgs, l: u32) -> gbell::Result<(f64, f64)> {
    use gbell::{StateKind, Strategy};
    let (state, strategy, limit) = match a.formula.as_str() {
        "real" => (
            StateKind::Unbiased,
            Strategy::RealScalar,
            asymptotics::limit_ratio(Formula::RealUnbiased, a.d, a.n)?.ratio,
        ),
        "complex" => (
            StateKind::Unbiased,
            Strategy::ComplexRoot,
            asymptotics::limit_ratio(Formula::ComplexUnbiased, a.d, a.n)?.ratio,
        ),
        "biased" => (
            StateKind::Biased,
            Strategy::DichotomicModD,
            asymptotics::limit_ratio(Formula::BiasedModD, a.d, a.n)?.ratio,
        ),
        "norm" => {
            let scenario = Scenario::new(a.n, a.d, l, StateKind::Unbiased, Strategy::RealScalar)?;
            let cell = (std::f64::consts::TAU / (a.d * l) as f64).powi(a.n as i32);
            let finite = grid::quantum_norm(&scenario)? * cell;
            return Ok((finite, asymptotics::continuous_quantum_norm(a.d, a.n)?));
        }
        other => {
            return Err(Error::OutOfRange(format!(
                "unknown formula '{other}' (expected real|complex|biased|norm)"
            )))
        }
    };
    let scenario = Scenario::new(a.n, a.d, l, state, strategy)?;
    let report = violation_ratio(&scenario, Method::Auto, DEFAULT_RESTARTS, 1234)?;
    Ok((report.ratio, limit))
}
