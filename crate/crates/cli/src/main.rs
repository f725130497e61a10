use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qchar::output::json_text;
use qchar::run::{project_scenario, run_scenario};
use qchar::scenario::{Format, Scenario};
use qchar::{example, verify, with_threads, CliError};

#[derive(Parser)]
#[command(name = "qchar", version, about = "Quantum characteristics: exact symbol dynamics and semiclassical propagation")]
struct Cli {
    /// Output directory (overrides the scenario's outputs.path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Result file format (overrides the scenario's outputs.format).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for batch work.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file.
    Run { file: PathBuf },
    /// Run the acceptance suite.
    VerifyAll,
    /// Project the scenario's Hamiltonian and observables onto its constraints.
    Project { file: PathBuf },
    /// Star-product coefficients for the cubic generating-function map.
    #[command(name = "example-s2")]
    ExampleS2 {
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: f64,
        #[arg(long = "P", allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        hbar: f64,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.clone();
    let format = cli.format;
    match cli.command {
        Command::Run { file } => {
            let prepared = Scenario::load(&file)?.prepare()?;
            let outcome = with_threads(cli.threads, || run_scenario(&prepared, out.as_deref(), format))??;
            let files = outcome.into_result()?;
            for f in files {
                println!("{}", f.display());
            }
        }
        Command::Project { file } => {
            let prepared = Scenario::load(&file)?.prepare()?;
            let outcome = with_threads(cli.threads, || project_scenario(&prepared, out.as_deref(), format))??;
            for f in outcome.into_result()? {
                println!("{}", f.display());
            }
        }
        Command::VerifyAll => {
            let dir = out.unwrap_or_else(|| PathBuf::from("qchar-out"));
            let (list, _) = with_threads(cli.threads, || verify::verify_all(&dir, format.unwrap_or_default()))??;
            for c in &list {
                println!("[{}] {:>2} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
            }
            let failed: Vec<String> = list.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
            if !failed.is_empty() {
                return Err(CliError::Verification(format!("criteria failed: {}", failed.join(", "))));
            }
        }
        Command::ExampleS2 { q, p, hbar } => {
            let dir = out.unwrap_or_else(|| PathBuf::from("qchar-out"));
            let (report, _) = example::example_s2(q, p, hbar, &dir, format.unwrap_or(Format::Json))?;
            print!("{}", json_text(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                eprintln!("{}", CliError::Parse(e.to_string().trim_end().to_string()).diagnostic());
                return ExitCode::from(2);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
