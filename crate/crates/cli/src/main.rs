//! `semicat`: batch front end. Every subcommand prints one report (JSON by
//! default) and exits 0 on success, 1 when an input fails validation or a
//! check does not hold, and 2 on internal errors such as exceeded size limits.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, Inputs, Limits, Method, Outcome};
use report::{Report, Status, Timing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "semicat", version, about = "Finite semigroup toolkit: Rees matrix semigroups, bipartite graphs, strong semilattices, orbit profiles")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Largest semigroup order the brute-force search accepts.
    #[arg(long, default_value_t = 64, global = true)]
    max_order: usize,
    /// Largest number of candidate quadruples the structured Rees search accepts.
    #[arg(long, default_value_t = semicat::reesiso::DEFAULT_CANDIDATE_LIMIT, global = true)]
    candidate_limit: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a structure file.
    Check { file: PathBuf },
    /// List all automorphisms as element (or vertex) maps.
    Aut {
        file: PathBuf,
        /// Defaults to structured for Rees, group and graph files, brute otherwise.
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Decide isomorphism and give a witness.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Orbit counts of the automorphism group on n-tuples.
    Orbits {
        file: PathBuf,
        /// Largest tuple length.
        #[arg(short = 'n', long = "n", default_value_t = 3)]
        n: usize,
        /// Subset files; only automorphisms fixing each subset setwise are used.
        #[arg(long)]
        fix: Vec<PathBuf>,
    },
    /// Connected components (block form and isomorphism classes for Rees files).
    Decompose { file: PathBuf },
    /// Spanning-forest normalization of a Rees matrix semigroup.
    Normalize { file: PathBuf },
    /// Recognise the finite homogeneous bipartite graph families.
    ClassifyGraph { file: PathBuf },
    /// Brandt, pure and orthodox predicates of a Rees matrix semigroup.
    Predicates { file: PathBuf },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
}

fn dispatch(command: &Command, inputs: &mut Inputs, limits: Limits) -> Result<Outcome, CliError> {
    match command {
        Command::Check { file } => commands::check(inputs, file),
        Command::Aut { file, method } => commands::aut(inputs, file, *method, limits),
        Command::Iso { a, b, method } => commands::iso(inputs, a, b, *method, limits),
        Command::Orbits { file, n, fix } => commands::orbits(inputs, file, *n, fix, limits),
        Command::Decompose { file } => commands::decompose(inputs, file, limits),
        Command::Normalize { file } => commands::normalize(inputs, file),
        Command::ClassifyGraph { file } => commands::classify_graph(inputs, file),
        Command::Predicates { file } => commands::predicates(inputs, file),
        Command::Verify { suite } => commands::verify(suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let limits = Limits { max_order: cli.max_order, candidate_limit: cli.candidate_limit };
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let result = dispatch(&cli.command, &mut inputs, limits);
    let timing = cli.timing.then(|| Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
    let (report, code) = match result {
        Ok(outcome) => {
            let status = if outcome.failed { Status::Failed } else { Status::Ok };
            let report = Report { command: echo, inputs: inputs.digests, status, results: outcome.results, warnings: outcome.warnings, error: None, timing };
            (report, u8::from(outcome.failed))
        }
        Err(e) => {
            eprintln!("semicat: {e}");
            let report = Report {
                command: echo,
                inputs: inputs.digests,
                status: Status::Error,
                results: serde_json::Value::Null,
                warnings: Vec::new(),
                error: Some(e.to_string()),
                timing,
            };
            (report, e.exit_code() as u8)
        }
    };
    print!("{}", match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    });
    ExitCode::from(code)
}
