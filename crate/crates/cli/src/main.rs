use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod output;
mod range;
mod spec;

use error::CliError;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "cdna", version, about = "Coverage depth and decoding of composite DNA alphabets")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expected reads to recover a whole sequence.
    Coverage(CoverageArgs),
    /// Expected reads until r indices are recovered.
    Partial(PartialArgs),
    /// Expected reads to recover one of k sequences.
    Ra(RaArgs),
    /// Monte Carlo estimate of any of the above.
    Sim(SimArgs),
    /// Exact success probabilities of a code.
    CodeEval(CodeEvalArgs),
    /// Construct a code from a known family.
    Design(DesignArgs),
}

#[derive(Args, Debug)]
pub struct CoverageArgs {
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    pub ell: Option<u64>,
    /// start:end:step with step k, +k or *k.
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long)]
    pub omega: u32,
    /// Add lower and upper bounds.
    #[arg(long)]
    pub bounds: bool,
    /// Add the exact closed form (ω = 2, ℓ ≤ 64).
    #[arg(long)]
    pub closed: bool,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct PartialArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub omega: u32,
    #[arg(long)]
    pub r: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct RaArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub omega: u32,
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Recovery,
    Partial,
    Ra,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Recovery)]
    pub mode: ModeArg,
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub omega: u32,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = cdna_core::sim::DEFAULT_MAX_TRANSMISSIONS)]
    pub max_transmissions: u64,
    /// Exit with status 4 when any trial hits the cap.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct CodeEvalArgs {
    /// Inline code specification or a file containing one.
    #[arg(long)]
    pub code: String,
    #[arg(long)]
    pub n: u32,
    /// `mld` or `table:<file.json>`.
    #[arg(long, default_value = "mld")]
    pub decoder: String,
    /// Evaluate in rational arithmetic.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Distinct,
    Qplus1,
    Omega,
    Binary4,
}

#[derive(Args, Debug)]
pub struct DesignArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Disjoint parts such as `1+2|3+4` (distinct family).
    #[arg(long)]
    pub parts: Option<String>,
    /// Compare with an exhaustive grid search of this step (binary4 family).
    #[arg(long)]
    pub verify_grid: Option<f64>,
}

fn run(cli: Cli) -> Result<(String, Option<CliError>), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let (records, deferred) = match &cli.command {
        Command::Coverage(a) => (commands::coverage(a)?, None),
        Command::Partial(a) => (commands::partial(a)?, None),
        Command::Ra(a) => (commands::ra(a)?, None),
        Command::Sim(a) => commands::sim(a)?,
        Command::CodeEval(a) => (commands::code_eval(a)?, None),
        Command::Design(a) => (commands::design(a)?, None),
    };
    Ok((output::render(&records, cli.format)?, deferred))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, deferred)) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                eprintln!("cdna: {e}");
                return ExitCode::from(1);
            }
            match deferred {
                Some(e) => {
                    eprintln!("cdna: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("cdna: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
