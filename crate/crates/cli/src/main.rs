//! `mmk`: classify theory instances, compare functor images, and simulate or
//! test the concept-composition model.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::{to_json, Format};

const VERIFY_HELP: &str = "\
Absolute tolerances (analytic vs empirical):
  n_union     0.5    mean |A ∪ B|
  s_shared    0.1    mean neurons of F(d) inside A ∪ B
  p_either    0.005  mean |A ∪ B| / N
  p_in_union  0.01   activation frequency inside A ∪ B
  p_outside   0.003  activation frequency outside A ∪ B
Exit status is 0 when every deviation is within its tolerance, 1 otherwise.";

#[derive(Debug, Parser)]
#[command(name = "mmk", version, about = "Finite mind-matter theory instances and the concept-composition model")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "table")]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a .mmk file and report diagnostics.
    Parse {
        file: PathBuf,
        /// Also run semantic checks.
        #[arg(long)]
        check: bool,
        /// Print the canonical form of the document instead of a report.
        #[arg(long, conflicts_with = "check")]
        canonical: bool,
    },
    /// Re-derive the family tags of every theory in a .mmk file.
    Classify { file: PathBuf },
    /// Classify a pair of maps F, G by their round-trip images.
    Equiv {
        file: PathBuf,
        /// Map names: first F (mental to material), then G (material to mental).
        #[arg(long = "map", num_args = 1, required = true)]
        maps: Vec<String>,
        /// Check the maps against this theory's sets and its permitted classes.
        #[arg(long)]
        theory: Option<String>,
    },
    /// Monte Carlo run of the composition model.
    Simulate(SimArgs),
    /// Compare closed-form statistics with a Monte Carlo run.
    #[command(after_help = VERIFY_HELP)]
    Verify(SimArgs),
    /// Test activation data for compositional structure.
    Detect {
        /// CSV with header `concept,neurons`; neurons are `;`-separated indices.
        #[arg(long)]
        data: PathBuf,
        /// CSV with header `component_a,component_b,composed`.
        #[arg(long)]
        triples: PathBuf,
        /// Number of recorded neurons.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        significance: f64,
    },
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Neuron count N.
    #[arg(long)]
    n: usize,
    /// Active neurons per concept.
    #[arg(long)]
    alpha: usize,
    /// Neurons drawn from each component.
    #[arg(long)]
    beta: usize,
    #[arg(long)]
    trials: u64,
    /// Required: every run is reproducible from (seed, workers).
    #[arg(long)]
    seed: u64,
    /// Parallel streams; part of the determinism contract.
    #[arg(long, env = "MMK_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
}

/// A failure that ends the run without a report.
#[derive(Debug)]
pub enum Failure {
    /// Bad input files or arguments; exit status 2.
    Usage(String),
    /// Well-formed input the domain rejects; exit status 1.
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json { Format::Json } else { cli.format };
    let started = Instant::now();
    let result = match cli.command {
        Command::Parse {
            file,
            check,
            canonical,
        } => {
            if canonical {
                return match commands::canonical(&file) {
                    Ok(text) => {
                        print!("{text}");
                        ExitCode::SUCCESS
                    }
                    Err(f) => fail(f),
                };
            }
            commands::parse(&file, check)
        }
        Command::Classify { file } => commands::classify(&file),
        Command::Equiv { file, maps, theory } => commands::equiv(&file, &maps, theory.as_deref()),
        Command::Simulate(a) => commands::simulate(a.n, a.alpha, a.beta, a.trials, a.seed, a.workers as usize),
        Command::Verify(a) => commands::verify(a.n, a.alpha, a.beta, a.trials, a.seed, a.workers as usize),
        Command::Detect {
            data,
            triples,
            n,
            significance,
        } => commands::detect(&data, &triples, n, significance),
    };
    let mut out = match result {
        Ok(out) => out,
        Err(f) => return fail(f),
    };
    out.report.timing_ms = (started.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    let text = match format {
        Format::Json => to_json(&out.report),
        Format::Table => out.table.clone(),
        Format::Csv => match out.csv.take() {
            Some(csv) => csv,
            None => {
                return fail(Failure::Usage(format!(
                    "csv output is not available for '{}'",
                    out.report.command
                )))
            }
        },
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(out.exit)
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("mmk: error: {}", f.message());
    ExitCode::from(f.code())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mmk_core::stats::TOLERANCES;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn help_lists_the_verify_tolerances() {
        for (name, tol) in TOLERANCES {
            let line = VERIFY_HELP
                .lines()
                .find(|l| l.split_whitespace().next() == Some(name))
                .unwrap_or_else(|| panic!("{name} missing from help"));
            let shown: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
            assert_eq!(shown, tol);
        }
    }
}
