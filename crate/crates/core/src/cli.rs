//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::arith::{add, multiply_integers};
use crate::bench::{self, Algorithm, BenchConfig, Profile};
use crate::error::{Error, Result};
use crate::fraction::{dec2binary, DEFAULT_SENSITIVITY};
use crate::index_repr::{deconstruct, format_number, parse_number_auto, IndexList, Radix};
use crate::parallel::{parallel_multiply_with, Aggregation, ParallelParams, WorkerMultiplier};

/// Caps the `pmul` worker pool.
pub const THREADS_ENV: &str = "INDEXRADIX_THREADS";

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MAX_CPU: i32 = 3;
pub const EXIT_BENCH_INCORRECT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "indexradix", version, about = "Arithmetic on sparse radix-2 index lists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputFormat {
    /// Print results as 0x-prefixed hex instead of decimal.
    #[arg(long)]
    hex: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the index list of a number.
    Deconstruct {
        /// Decimal, 0x-hex, or @file.
        number: String,
    },
    /// Print the integer an index list represents.
    Reconstruct {
        /// JSON (`[5,2,1]`) or comma-separated (`5,2,1`) list, or @file.
        #[arg(allow_hyphen_values = true)]
        indices: String,
        #[command(flatten)]
        format: OutputFormat,
    },
    /// Add two numbers by concatenating and normalizing their index lists.
    Add {
        a: String,
        b: String,
        #[command(flatten)]
        format: OutputFormat,
    },
    /// Multiply two numbers by pairwise index sums.
    Mul {
        a: String,
        b: String,
        #[command(flatten)]
        format: OutputFormat,
    },
    /// Partitioned parallel multiplication.
    Pmul(PmulArgs),
    /// Print the negative-index list of a decimal fraction in [0, 1).
    Frac {
        fraction: String,
        /// Maximum number of indices emitted.
        #[arg(long, default_value_t = DEFAULT_SENSITIVITY)]
        sensitivity: usize,
    },
    /// Time the multipliers across operand sizes and write a CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct PmulArgs {
    a: String,
    b: String,
    /// Requested partition count for the first operand.
    #[arg(long)]
    parts_a: usize,
    /// Requested partition count for the second operand.
    #[arg(long)]
    parts_b: usize,
    /// Refuse to run when more tasks than this would be needed.
    #[arg(long)]
    max_cpu: usize,
    /// Worker threads (default: available parallelism, capped by INDEXRADIX_THREADS).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = MultiplierArg::PolyIndex)]
    multiplier: MultiplierArg,
    #[arg(long, value_enum, default_value_t = AggregationArg::Scalar)]
    aggregation: AggregationArg,
    /// Write a JSON task trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MultiplierArg {
    PolyIndex,
    Karatsuba,
    Ntt,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggregationArg {
    Scalar,
    Index,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// TOML config; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    /// Comma-separated operand bit sizes.
    #[arg(long, value_delimiter = ',')]
    bits: Option<Vec<u64>>,
    /// Comma-separated algorithms: poly_index, karatsuba, ntt, schoolbook.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    include_conversion: bool,
    /// CSV output path.
    #[arg(long, default_value = "bench.csv")]
    out: PathBuf,
    /// Also write the crossover report as JSON.
    #[arg(long)]
    report_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProfileArg {
    Ci,
    Long,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::InvalidIndexList(_)
        | Error::FractionOutOfRange(_)
        | Error::ZeroSensitivity
        | Error::BenchConfig(_) => EXIT_USAGE,
        Error::MaxCpuExceeded { .. } => EXIT_MAX_CPU,
        Error::Correctness { .. } => EXIT_BENCH_INCORRECT,
        _ => 1,
    }
}

/// Reads `@path` arguments from disk; anything else is returned as is.
fn argument_text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?.trim().to_owned()),
        None => Ok(arg.to_owned()),
    }
}

fn number(arg: &str) -> Result<BigUint> {
    parse_number_auto(&argument_text(arg)?)
}

fn render(n: &BigUint, format: &OutputFormat) -> String {
    format_number(n, if format.hex { Radix::Hex } else { Radix::Decimal })
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Deconstruct { number: n } => Ok(deconstruct(&number(&n)?).to_string()),
        Command::Reconstruct { indices, format } => {
            let list: IndexList = argument_text(&indices)?.parse()?;
            Ok(render(&list.to_biguint(), &format))
        }
        Command::Add { a, b, format } => {
            let sum = add(&deconstruct(&number(&a)?), &deconstruct(&number(&b)?))?;
            Ok(render(&sum.to_biguint(), &format))
        }
        Command::Mul { a, b, format } => Ok(render(&multiply_integers(&number(&a)?, &number(&b)?)?, &format)),
        Command::Pmul(args) => pmul(args),
        Command::Frac { fraction, sensitivity } => {
            let list = dec2binary(&argument_text(&fraction)?, sensitivity)?;
            Ok(serde_json::to_string(&list).expect("fraction list serializes"))
        }
        Command::Bench(args) => run_bench(args),
    }
}

fn pmul(args: PmulArgs) -> Result<String> {
    let a = number(&args.a)?;
    let b = number(&args.b)?;
    let nonzero = |n: usize, what: &str| {
        NonZeroUsize::new(n).ok_or_else(|| Error::BenchConfig(format!("{what} must be at least 1")))
    };
    let mut params = ParallelParams {
        estimated_partitions_a: nonzero(args.parts_a, "--parts-a")?,
        estimated_partitions_b: nonzero(args.parts_b, "--parts-b")?,
        max_cpu: args.max_cpu,
        workers: args.workers.map(|w| nonzero(w, "--workers")).transpose()?,
        multiplier: match args.multiplier {
            MultiplierArg::PolyIndex => WorkerMultiplier::PolyIndex,
            MultiplierArg::Karatsuba => WorkerMultiplier::Karatsuba,
            MultiplierArg::Ntt => WorkerMultiplier::Ntt,
        },
        aggregation: match args.aggregation {
            AggregationArg::Scalar => Aggregation::Scalar,
            AggregationArg::Index => Aggregation::IndexDomain,
        },
    };
    if let Some(cap) = thread_cap() {
        let requested = params.workers.map_or_else(
            || std::thread::available_parallelism().map_or(1, NonZeroUsize::get),
            NonZeroUsize::get,
        );
        params.workers = NonZeroUsize::new(requested.min(cap));
    }
    let outcome = parallel_multiply_with(&a, &b, &params)?;
    if let Some(path) = &args.trace {
        let json = serde_json::to_string_pretty(&outcome.trace()).expect("trace serializes");
        std::fs::write(path, json + "\n")?;
    }
    Ok(render(&outcome.product, &args.format))
}

fn run_bench(args: BenchArgs) -> Result<String> {
    let mut cfg = match &args.config {
        Some(path) => BenchConfig::from_toml(&std::fs::read_to_string(path)?)?,
        None => BenchConfig::default(),
    };
    if let Some(profile) = args.profile {
        cfg.bit_sizes = match profile {
            ProfileArg::Ci => Profile::Ci,
            ProfileArg::Long => Profile::Long,
        }
        .bit_sizes();
    }
    if let Some(bits) = args.bits {
        cfg.bit_sizes = bits;
    }
    if let Some(names) = args.algorithms {
        cfg.algorithms = names.iter().map(|n| n.parse::<Algorithm>()).collect::<Result<_>>()?;
    }
    if let Some(reps) = args.reps {
        cfg.repetitions = reps;
    }
    if let Some(seed) = args.seed {
        cfg.rng_seed = seed;
    }
    cfg.include_conversion |= args.include_conversion;
    let out = cfg.output.clone().unwrap_or(args.out);

    let records = bench::run_bench(&cfg)?;
    bench::write_csv_file(&records, &out)?;
    let mut text = format!("wrote {} records to {}\n", records.len(), out.display());
    match bench::crossover_report(&records) {
        Ok(report) => {
            if let Some(path) = &args.report_json {
                std::fs::write(path, report.to_json() + "\n")?;
            }
            text.push_str(&report.to_text());
        }
        Err(err) => text.push_str(&format!("no crossover report: {err}\n")),
    }
    Ok(text.trim_end().to_owned())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Errors go to `stderr` only.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return if err.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = writeln!(stdout, "{text}");
            0
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code(&err)
        }
    }
}
