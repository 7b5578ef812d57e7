//! `greedy-bases-lab`: evaluate catalog norms, tabulate greedy-type constants
//! and run the verification suites.
//!
//! Exit codes: 0 success, 1 a check or property failed, 2 configuration
//! error or infeasible enumeration.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use greedy_lab::catalog::{load_norm, Catalog};
use greedy_lab::parameters::{
    conservative_constant, kappa, lebesgue_parameter, omega_parameter, quasi_greedy_parameters, sc_parameter,
    DualConfig, ParameterReport, SearchConfig,
};
use greedy_lab::properties::{check_unit_symmetry, SampleConfig, SymmetryVariant};
use greedy_lab::suite::{self, Suite};
use greedy_lab::{IndexSequence, LabError, NormSpec, PairClass, PairContext, SparseVector};

const CSV_VERSION: &str = "# greedy-bases-lab v1";

#[derive(Parser)]
#[command(name = "greedy-bases-lab", version, about = "Greedy-type constants of sequence-space norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in norms.
    List,
    /// Evaluate a norm at a vector.
    Eval(EvalArgs),
    /// Tabulate a parameter over a range of orders as CSV.
    Table(TableArgs),
    /// Check a unit symmetry inequality on the seeded sample library.
    Check(CheckArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct NormArgs {
    /// Catalog id or path to a JSON norm definition.
    #[arg(long)]
    norm: String,
    /// Override the reference sequence n: naturals, evens, odds or a JSON spec.
    #[arg(long)]
    n: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    norm: NormArgs,
    /// Vector literal `idx:coef,...`; `nK` is the K-th element of n.
    #[arg(long, allow_hyphen_values = true)]
    vector: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Param {
    Sc,
    Omega,
    Lebesgue,
    G,
    Gc,
    Gtilde,
    Conservative,
    Democratic,
    Kappa,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    norm: NormArgs,
    #[arg(long, value_enum)]
    param: Param,
    /// Orders `a..b` (inclusive) or a single order.
    #[arg(long, default_value = "1..3")]
    m: String,
    /// Enumeration window `[1, window]`; the default depends on the parameter.
    #[arg(long)]
    window: Option<usize>,
    /// Maximum library set size (conservative, democratic and the vector searches).
    #[arg(long)]
    cap: Option<usize>,
    /// Pair class for `conservative`: T_n, S_n, T_n_s, T_omega_n or Lambda.
    #[arg(long)]
    class: Option<String>,
    /// Ignore signs in set-pair enumerations.
    #[arg(long)]
    no_signs: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    norm: NormArgs,
    #[arg(long, value_enum)]
    variant: Variant,
    #[arg(long, default_value_t = 10)]
    window: usize,
    /// Number of random vectors added to the exhaustive part of the library.
    #[arg(long, default_value_t = 300)]
    random: usize,
    #[arg(long, default_value_t = greedy_lab::oracle::SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Pslc,
    Slc,
    Rslc,
    AlmostGreedy,
}

#[derive(Args)]
struct VerifyArgs {
    /// `paper` (worked examples plus oracles) or `oracles`.
    #[arg(long, default_value = "paper")]
    suite: String,
}

/// Failures carrying their exit code.
enum Failure {
    Check(String),
    Config(String),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Rounds to 12 significant digits and prints the shortest form.
fn fmt12(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn load(args: &NormArgs) -> Result<NormSpec, Failure> {
    let mut spec = if args.norm.ends_with(".json") || Path::new(&args.norm).is_file() {
        load_norm(Path::new(&args.norm))?
    } else {
        Catalog::builtin().get(&args.norm)?.clone()
    };
    if let Some(n) = &args.n {
        spec.n = IndexSequence::parse(n)?;
        spec.validate()?;
    }
    Ok(spec)
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Config(format!("bad order range `{text}` (expected a..b or a)"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let a = text.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn cmd_list() -> Outcome {
    for spec in Catalog::builtin().iter() {
        println!("{:<22} {:<26} {}", spec.id, spec.family_name(), spec.description);
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Outcome {
    let spec = load(&args.norm)?;
    let x = SparseVector::parse_literal(&args.vector, Some(&spec.n))?;
    let value = spec.eval(&x)?;
    match args.format {
        Format::Text => {
            println!("{}", fmt12(value.value));
            println!("witness: {}", value.witness);
        }
        Format::Json => {
            let json = serde_json::to_string_pretty(&value).map_err(|e| Failure::Config(e.to_string()))?;
            println!("{json}");
        }
    }
    Ok(())
}

fn table_rows(args: &TableArgs, spec: &NormSpec) -> Result<Vec<ParameterReport>, Failure> {
    let n = &spec.n;
    let (lo, hi) = parse_range(&args.m)?;
    let search = SearchConfig {
        window: args.window.unwrap_or(7),
        cap: args.cap.unwrap_or(2),
        ..SearchConfig::default()
    };
    let mut rows = Vec::new();
    match args.param {
        Param::Conservative | Param::Democratic => {
            let default = if args.param == Param::Democratic { "S_n" } else { "T_n" };
            let class = PairClass::parse(args.class.as_deref().unwrap_or(default))?;
            let ctx = PairContext::new(n);
            if !ctx.available_classes().contains(&class) {
                return Err(Failure::Config(format!("class {} needs data the CLI does not supply", class.name())));
            }
            let window = args.window.unwrap_or(12);
            rows.push(conservative_constant(spec, ctx, window, args.cap.unwrap_or(3), class, !args.no_signs)?);
        }
        Param::Kappa => rows.push(kappa(spec, args.window.unwrap_or(16), &DualConfig::default())?),
        _ => {
            for m in lo..=hi {
                let row = match args.param {
                    Param::Sc => {
                        let last = n.nth(hi).ok_or(LabError::MissingElement(hi))?;
                        sc_parameter(spec, n, m, args.window.unwrap_or(last + 2 * hi))?
                    }
                    Param::Omega => omega_parameter(spec, n, m, &search)?.omega,
                    Param::Lebesgue => lebesgue_parameter(spec, n, m, &search)?,
                    Param::G => quasi_greedy_parameters(spec, n, m, &search)?.g,
                    Param::Gc => quasi_greedy_parameters(spec, n, m, &search)?.gc,
                    Param::Gtilde => quasi_greedy_parameters(spec, n, m, &search)?.gtilde,
                    _ => unreachable!("single-row parameters handled above"),
                };
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn cmd_table(args: &TableArgs) -> Outcome {
    let spec = load(&args.norm)?;
    let rows = table_rows(args, &spec)?;
    let io = |e: std::io::Error| Failure::Config(e.to_string());
    let mut out = std::io::stdout().lock();
    writeln!(out, "{CSV_VERSION}").map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Failure::Config(e.to_string());
    w.write_record(["parameter", "norm", "n", "m", "value", "kind", "witness"]).map_err(csv_err)?;
    for r in rows {
        let m = r.m.map(|m| m.to_string()).unwrap_or_default();
        let witness = r.witness.as_ref().map(|w| w.digest()).unwrap_or_default();
        w.write_record([&r.parameter, &r.norm_id, &r.n_id, &m, &fmt12(r.value), r.kind.name(), &witness])
            .map_err(csv_err)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

fn cmd_check(args: &CheckArgs) -> Outcome {
    let spec = load(&args.norm)?;
    let variant = match args.variant {
        Variant::Pslc => SymmetryVariant::Pslc,
        Variant::Slc => SymmetryVariant::Slc,
        Variant::Rslc => SymmetryVariant::Rslc,
        Variant::AlmostGreedy => SymmetryVariant::AlmostGreedy,
    };
    let cfg = SampleConfig { window: args.window, random_count: args.random, seed: args.seed, ..SampleConfig::default() };
    let r = check_unit_symmetry(&spec, &spec.n, variant, &cfg)?;
    match r.counterexample {
        None => {
            println!("PASS {} on {}: {} instances", variant.name(), spec.id, r.instances);
            Ok(())
        }
        Some(v) => {
            println!("FAIL {} on {}", variant.name(), spec.id);
            println!("x = {}", v.x);
            println!("‖{}‖ = {} > ‖{}‖ = {}", v.lhs, fmt12(v.lhs_value), v.rhs, fmt12(v.rhs_value));
            Err(Failure::Check(format!("{} violated", variant.name())))
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let results = suite::run(Suite::parse(&args.suite)?)?;
    let passed = results.iter().filter(|r| r.pass).count();
    for r in &results {
        println!("{} {} ({}): {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.anchor, r.detail);
    }
    println!("{passed}/{} checks passed", results.len());
    if passed == results.len() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} checks failed", results.len() - passed)))
    }
}

fn configure_threads() -> Outcome {
    let Ok(text) = std::env::var("GBL_THREADS") else { return Ok(()) };
    let threads: usize = text
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Config(format!("GBL_THREADS must be a positive integer, got `{text}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::List => cmd_list(),
        Command::Eval(a) => cmd_eval(a),
        Command::Table(a) => cmd_table(a),
        Command::Check(a) => cmd_check(a),
        Command::Verify(a) => cmd_verify(a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
