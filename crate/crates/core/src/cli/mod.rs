//! The `orthoconv` command line: single conversions from JSON documents and a
//! scaling benchmark.

pub mod bench;
pub mod convert;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use bench::{run_bench, write_csv, BenchConfig, BenchOp, BenchRecord};
pub use convert::{
    parse_request, run_convert, CliError, ConversionRequest, ConversionResult, Direction,
    FamilySpec,
};

/// Exit status for invalid requests.
pub const EXIT_INVALID: u8 = 2;
/// Exit status for I/O failures.
pub const EXIT_IO: u8 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "orthoconv",
    version,
    about = "Convert between orthogonal polynomial bases and the monomial basis mod p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    #[command(flatten)]
    pub convert: ConvertArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time a conversion over sizes 2^min-log-n ..= 2^max-log-n and print CSV.
    Bench(BenchArgs),
}

/// Flags override the corresponding fields of the input document.
#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// expand, decomp, texpand or moments.
    #[arg(long)]
    pub direction: Option<Direction>,

    /// Preset name: chebyshev-t, chebyshev-u, legendre, hermite, laguerre.
    #[arg(long, conflicts_with = "family_file")]
    pub family: Option<String>,

    /// JSON file with decimal-string arrays {"a": [...], "b": [...], "c": [...]}.
    #[arg(long)]
    pub family_file: Option<PathBuf>,

    /// Prime modulus with two-adicity at least 20.
    #[arg(long)]
    pub modulus: Option<String>,

    /// Conversion size; defaults to the number of input coefficients.
    #[arg(long)]
    pub n: Option<usize>,

    /// Request document, or a bare JSON array of coefficients. `-` or absent
    /// reads stdin.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Result destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// expand, decomp or texpand.
    #[arg(long)]
    pub op: BenchOp,

    #[arg(long)]
    pub min_log_n: u32,

    #[arg(long)]
    pub max_log_n: u32,

    #[arg(long, default_value_t = 5)]
    pub reps: usize,

    /// Seed for inputs and the random family; drawn from the OS when absent.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Preset name; a random family when absent.
    #[arg(long)]
    pub family: Option<String>,

    #[arg(long)]
    pub modulus: Option<String>,

    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

enum Failure {
    Invalid(CliError),
    Io(CliError),
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Invalid(e)
    }
}

fn io_error(what: &str, e: io::Error) -> Failure {
    Failure::Io(CliError::new(what, e.to_string()))
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).map_err(|e| io_error("input", e)),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| io_error("input", e))?;
            Ok(s)
        }
    }
}

/// Writes the whole payload at once, so failures leave no partial result.
fn write_output(path: Option<&PathBuf>, payload: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, payload).map_err(|e| io_error("output", e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(payload.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| io_error("output", e))
        }
    }
}

fn convert(args: &ConvertArgs) -> Result<(), Failure> {
    let mut request = parse_request(&read_input(args.input.as_ref())?)?;
    if let Some(d) = args.direction {
        request.direction = Some(d);
    }
    if let Some(name) = &args.family {
        request.family = Some(FamilySpec::Preset(name.clone()));
    }
    if let Some(path) = &args.family_file {
        let text = fs::read_to_string(path).map_err(|e| io_error("family-file", e))?;
        let spec: FamilySpec = serde_json::from_str(&text).map_err(|e| {
            CliError::new(
                "family-file",
                format!("expected {{\"a\": [...], \"b\": [...], \"c\": [...]}}: {e}"),
            )
        })?;
        request.family = Some(spec);
    }
    if let Some(m) = &args.modulus {
        request.modulus = Some(m.clone());
    }
    if let Some(n) = args.n {
        request.n = Some(n);
    }
    let result = run_convert(&request)?;
    let mut payload = serde_json::to_string_pretty(&result).expect("result documents serialize");
    payload.push('\n');
    write_output(args.output.as_ref(), &payload)
}

fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let field = convert::parse_modulus(args.modulus.as_deref())?;
    let family = args
        .family
        .as_ref()
        .map(|name| convert::parse_family(&field, &FamilySpec::Preset(name.clone())))
        .transpose()?;
    let seed = args.seed.unwrap_or_else(rand::random);
    let cfg = BenchConfig {
        op: args.op,
        min_log_n: args.min_log_n,
        max_log_n: args.max_log_n,
        reps: args.reps,
        seed,
        field,
        family,
    };
    let records = run_bench(&cfg)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, seed, &records).expect("writing to memory");
    write_output(
        args.output.as_ref(),
        &String::from_utf8(buf).expect("CSV is ASCII"),
    )
}

/// Parses `args` and runs the selected command. Errors go to stderr as
/// `{"error": {"field": ..., "message": ...}}`.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Some(Command::Bench(args)) => bench(args),
        None => convert(&cli.convert),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(e)) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_IO)
        }
    }
}
