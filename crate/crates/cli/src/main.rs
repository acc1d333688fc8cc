use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{Outcome, RunError};

#[derive(Parser)]
#[command(name = "liftgap", version)]
#[command(about = "Exact integrality-gap certificates for partial vertex cover relaxations")]
struct Cli {
    /// Worker threads for the verifiers (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also write the output to this file
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; csv is only available for gap-table
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Sherali-Adams linear rows
    Sa,
    /// Sherali-Adams rows plus the level-1 moment matrix PSD test
    Sap,
    /// PSD test of every conditional moment matrix X^{Y,N}
    Xyn,
}

#[derive(Subcommand)]
enum Command {
    /// Check the product moment vector on the clique K_n
    Verify {
        #[arg(long, value_enum)]
        level: Level,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        t: u64,
        /// Vertex probability as "a/b" or a decimal; default t / binom(n - 2r, 2)
        #[arg(long)]
        p: Option<String>,
        /// Check a seeded random sample of this many pairs (xyn only)
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// LP, vector relaxation, level-1 lifted LP and integral optimum on the star
    Star {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u64,
    },
    /// Level-1 Lasserre test of the product moment vector on K_n
    Lasserre {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
    },
    /// Sherali-Adams objective and gap bound over a grid of (n, r, t)
    GapTable {
        /// Comma-separated n:r:t triples, e.g. "8:1:1,10:1:1"
        #[arg(long)]
        grid: String,
    },
    /// Integral optimum and LP value on a graph file
    GraphOpt {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        t: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Expected) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, RunError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| RunError::Usage(e.to_string()))?;
    }
    if cli.format == Format::Csv && !matches!(cli.command, Command::GapTable { .. }) {
        return Err(RunError::Usage(
            "--format csv is only supported by gap-table".into(),
        ));
    }
    let (text, outcome) = match cli.command {
        Command::Verify {
            level,
            n,
            r,
            t,
            p,
            sample,
            seed,
        } => commands::verify(level, n, r, t, p.as_deref(), sample, seed)?,
        Command::Star { n, t } => commands::star(n, t)?,
        Command::Lasserre { n, r, t } => commands::lasserre(n, r, t)?,
        Command::GapTable { grid } => commands::gap_table(&grid, cli.format)?,
        Command::GraphOpt { graph, t } => {
            let source = fs::read_to_string(&graph)
                .map_err(|e| RunError::Io(format!("{}: {e}", graph.display())))?;
            commands::graph_opt(&source, t)?
        }
    };
    print!("{text}");
    if let Some(path) = cli.out {
        fs::write(&path, &text).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(outcome)
}
