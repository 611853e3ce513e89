//! `carlitz`: Carlitz rank, complete mappings and value sets over GF(q).
//!
//! Exit codes: 0 when every checked assertion holds, 2 when a violation is
//! found (the report carries the counterexample), 3 when a search cap is
//! exceeded, 64 for usage or input errors, 74 for I/O failures.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use carlitz_core::carlitz::RankConfig;
use carlitz_core::{Error, Field};
use clap::{Args, Parser, Subcommand};

use commands::MapInput;
use output::{Format, Report};

const EXIT_VIOLATION: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "carlitz",
    version,
    about = "Carlitz rank and complete mappings over small finite fields"
)]
struct Cli {
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format (default: json; table for repro-paper).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Shorthand for `--format csv`.
    #[arg(long, global = true, conflicts_with = "format")]
    csv: bool,

    /// Node budget for rank searches.
    #[arg(long, global = true, default_value_t = RankConfig::default().node_budget)]
    node_budget: u64,

    /// Nodes stored by the forward half of rank searches.
    #[arg(long, global = true, default_value_t = RankConfig::default().forward_budget)]
    forward_budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FieldArg {
    /// Field spec: `p`, `q`, `p^r` or `p^r:c0,...,cr` (ascending modulus).
    #[arg(long)]
    field: String,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Ascending coefficient indices, e.g. `1,6,3,6,1`.
    #[arg(long, group = "map")]
    poly: Option<String>,

    /// JSON array of q value indices.
    #[arg(long, group = "map")]
    table: Option<String>,

    /// `n; a_0,...,a_{n+1}` or normalized `n; c_0,...,c_{n-1}`.
    #[arg(long, group = "map")]
    rep: Option<String>,
}

impl MapArgs {
    fn input(&self) -> MapInput<'_> {
        MapInput {
            poly: self.poly.as_deref(),
            table: self.table.as_deref(),
            rep: self.rep.as_deref(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Permutation and completeness checks, linearity, value sets and rank of one map.
    Analyze {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        map: MapArgs,
        /// Largest rank searched (default q).
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Carlitz rank of a permutation (q <= 16).
    Rank {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Exhaustive check that complete mappings of rank below q/2 have large linearity.
    VerifyThm1 {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Discriminant census, odd q.
    CensusDisc {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Trace census, even q.
    CensusTrace {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Value-set formulas for one or two inversions against brute force.
    VerifyProp {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        n: u8,
    },
    /// Value-set envelope for a normalized representation or a nearby table.
    Bounds {
        #[command(flatten)]
        field: FieldArg,
        /// Normalized representation `n; c_0,...,c_{n-1}`.
        #[arg(long)]
        rep: String,
        /// Optional table F to test against the representation's convergent.
        #[arg(long)]
        table: Option<String>,
    },
    /// Complete mappings with n inversions and linearity below a cap.
    SearchComplete {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample this many random representations instead of enumerating.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// The maps a·x^p: brute force against the closed criterion.
    Mann {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Runs the acceptance criteria and prints a pass/fail matrix.
    ReproPaper {
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run only these criteria (1-10).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::CapExceeded(_)) => EXIT_CAP,
            CliError::Usage(_) | CliError::Core(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn parse_field(arg: &FieldArg) -> Result<Field, CliError> {
    Ok(arg.field.parse::<Field>()?)
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let config = RankConfig {
        node_budget: cli.node_budget,
        forward_budget: cli.forward_budget,
    };
    match &cli.command {
        Command::Analyze { field, map, max_n } => {
            commands::analyze(&parse_field(field)?, map.input(), *max_n, config)
        }
        Command::Rank { field, map, max_n } => {
            commands::rank(&parse_field(field)?, map.input(), *max_n, config)
        }
        Command::VerifyThm1 { field } => commands::verify_thm1(&parse_field(field)?),
        Command::CensusDisc { field } => commands::census_disc(&parse_field(field)?),
        Command::CensusTrace { field } => commands::census_trace(&parse_field(field)?),
        Command::VerifyProp { field, n } => {
            commands::verify_prop_cmd(&parse_field(field)?, usize::from(*n))
        }
        Command::Bounds { field, rep, table } => {
            commands::bounds(&parse_field(field)?, rep, table.as_deref())
        }
        Command::SearchComplete {
            field,
            n,
            cap,
            seed,
            sample,
        } => commands::search(&parse_field(field)?, *n, *cap, *seed, *sample, config),
        Command::Mann { field } => commands::mann(&parse_field(field)?),
        Command::ReproPaper { out, only } => {
            if let Some(bad) = only.iter().find(|&&id| !(1..=10).contains(&id)) {
                return Err(CliError::Usage(format!("no criterion {bad}")));
            }
            let report = commands::repro_paper(only)?;
            if let Some(path) = out {
                let mut file = BufWriter::new(File::create(path)?);
                report.write(Format::Json, &mut file)?;
                file.flush()?;
            }
            Ok(report)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let report = dispatch(cli)?;
    let format = match (cli.csv, cli.format) {
        (true, _) => Format::Csv,
        (false, Some(f)) => f,
        (false, None) if matches!(cli.command, Command::ReproPaper { .. }) => Format::Table,
        (false, None) => Format::Json,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    report.write(format, &mut out)?;
    out.flush()?;
    Ok(report.ok)
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
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATION),
        Err(e) => {
            eprintln!("carlitz: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
