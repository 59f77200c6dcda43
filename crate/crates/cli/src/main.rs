//! `fahp`: validate sessions, derive weights, rank alternatives, sweep
//! criterion weights and run the HTTP service.

mod commands;

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fahp_core::model::Aggregation;

#[derive(Debug, Parser)]
#[command(name = "fahp", version, about = "Fuzzy AHP decision analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a session document and report every violation
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the priorities of one comparison node
    Weights {
        #[command(flatten)]
        source: Source,
        /// `criteria` or a criterion id
        #[arg(long)]
        node: String,
        /// Derive weights from the judgments even if precomputed values exist
        #[arg(long)]
        recompute: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rank the alternatives
    Rank {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_aggregation)]
        aggregation: Option<Aggregation>,
        /// Only report these alternative ids (comma separated)
        #[arg(long, value_delimiter = ',')]
        alternatives: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sweep one criterion's weight and re-rank at every grid value
    Sensitivity {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        criterion: String,
        /// Comma-separated weights in [0, 1]
        #[arg(long, value_parser = parse_grid)]
        grid: Grid,
        #[arg(long, value_parser = parse_aggregation)]
        aggregation: Option<Aggregation>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the HTTP session service
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        #[arg(long, default_value = "sessions")]
        store: PathBuf,
        /// Directory of static web UI assets served at `/`
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// Session document (JSON)
    file: Option<PathBuf>,
    /// Use the built-in healthcare IoT study instead of a file
    #[arg(long, conflicts_with = "file")]
    demo_paper: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    fahp_core::sensitivity::parse_grid(s).map(Grid)
}

fn parse_aggregation(s: &str) -> Result<Aggregation, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(output.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(output.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
