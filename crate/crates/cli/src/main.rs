//! `rvl`: reproduce game values, certify ratio bounds and evaluate mechanisms.

mod commands;
mod report;
mod sampling;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Certificate, EvalArgs, Family};
use report::Format;

#[derive(Parser, Debug)]
#[command(
    name = "rvl",
    version,
    about = "Exact analysis of truthful randomized voting mechanisms"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "md", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve both three-candidate games for each n and compare with the reference values.
    Tables {
        /// A voter count or a range such as 2..5.
        #[arg(long, default_value = "2..5")]
        n: String,
    },
    /// Run one exact certificate.
    Certify {
        /// 3: power-law bound, 4: unilateral mixture, 5: majority cases,
        /// 6: catalogue games, 9: quadratic-lottery mixture, golden: bracket.
        #[arg(long, value_enum)]
        theorem: Certificate,
    },
    /// Solve a game of mechanisms against type profiles.
    SolveGame {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        n: u64,
        /// JSON array of type profiles to use as columns.
        #[arg(long)]
        catalogue: Option<String>,
        /// Write the game matrix as CSV.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Evaluate a mechanism on a profile or fixture.
    Eval {
        /// Mechanism JSON file, or inline JSON.
        #[arg(long)]
        mechanism: String,
        /// Named fixture, e.g. condorcet?k=1000 (see `rvl fixture`).
        #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
        fixture: Option<String>,
        /// Profile JSON file, or inline JSON.
        #[arg(long)]
        profile: Option<String>,
        /// Audit every voter against all misreports on the 1/K grid.
        #[arg(long, value_name = "K")]
        audit: Option<u64>,
        /// Seed of the sampling demo; no sampling without it.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of draws of the sampling demo.
        #[arg(long, default_value_t = 20_000)]
        draws: usize,
    },
    /// Slide a grid profile to a quasi-combinatorial one without raising the ratio.
    Pessimize {
        #[arg(long)]
        mechanism: String,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        k: u64,
        /// Write the resulting profile as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a named fixture as JSON, or list the names.
    Fixture { name: Option<String> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tables { n } => commands::parse_range(n).and_then(|ns| commands::tables(&ns)),
        Command::Certify { theorem } => {
            let name = clap::ValueEnum::to_possible_value(theorem)
                .expect("named variant")
                .get_name()
                .to_string();
            commands::certify(*theorem, &name)
        }
        Command::SolveGame {
            family,
            m,
            n,
            catalogue,
            matrix,
        } => commands::solve_game(*family, *m, *n, catalogue.as_deref(), matrix.as_deref()),
        Command::Eval {
            mechanism,
            fixture,
            profile,
            audit,
            seed,
            draws,
        } => commands::eval(&EvalArgs {
            mechanism,
            fixture: fixture.as_deref(),
            profile: profile.as_deref(),
            audit: *audit,
            seed: *seed,
            draws: *draws,
        }),
        Command::Pessimize {
            mechanism,
            profile,
            k,
            out,
        } => commands::pessimize(mechanism, profile, *k, out.as_deref()),
        Command::Fixture { name } => {
            return match commands::show_fixture(name.as_deref()) {
                Ok(s) => {
                    print!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let rvl_core::Error::ResourceLimit { .. } = e {
                eprintln!("hint: raise the cap with RVL_MAX_COLUMNS");
            }
            ExitCode::from(2)
        }
    }
}
