use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stplan_core::imo::{Formulation, Journal, DEFAULT_SAMPLE_SIZE};
use stplan_service::commands::{self, Objective, SolveRequest};
use stplan_service::error::from_json;
use stplan_service::{api, export, load_instance, Result, ServiceError};

/// Space-time facility planning workbench.
#[derive(Parser)]
#[command(name = "stplan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize a strategy and print its activations and value.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Objective::Overall)]
        objective: Objective,
        /// Use expected evaluations from the uncertainty block.
        #[arg(long)]
        expected: bool,
        /// Solve the continuous budget-allocation model.
        #[arg(long)]
        continuous: bool,
        /// Write every dashboard table of the result to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the full result as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Print every dashboard table of a strategy as CSV.
    Dashboard {
        file: PathBuf,
        /// JSON list of {facility, location, period} activations, 0-based.
        #[arg(long)]
        strategy: PathBuf,
        /// One CSV per table in this directory instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        expected: bool,
    },
    /// Interactive rule-based search: serve the API, or replay a journal.
    Imo {
        file: PathBuf,
        #[arg(long, default_value = "location")]
        formulation: Formulation,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
        sample_size: usize,
        /// Serve the HTTP API on STPLAN_PORT (default 8080).
        #[arg(long)]
        serve: bool,
        /// Replay this session journal and print the resulting state.
        #[arg(long, conflicts_with = "serve")]
        journal: Option<PathBuf>,
        /// Where the server keeps session journals.
        #[arg(long, requires = "serve")]
        journal_dir: Option<PathBuf>,
    },
    /// Cross-check the exact solver against exhaustive enumeration.
    Oracle { file: PathBuf },
    /// Validate an instance file and print its canonical form.
    Check { file: PathBuf },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| ServiceError::io(path.display().to_string(), e))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            file,
            objective,
            expected,
            continuous,
            out,
            json,
        } => {
            let wb = load_instance(&file)?;
            let req = SolveRequest {
                objective,
                expected,
                continuous,
            };
            let result = commands::solve_request(&wb, &req)?;
            for w in &result.warnings {
                log::warn!("{w}");
            }
            if json {
                print_json(&result);
            } else {
                print!("{}", commands::render_solve(&result));
            }
            if let Some(path) = out {
                let Some(strategy) = &result.strategy else {
                    return Err(ServiceError::Usage(
                        "--out needs a 0-1 strategy; not available with --continuous".into(),
                    ));
                };
                let (tables, _) = commands::dashboard(&wb, strategy, expected)?;
                let f = std::fs::File::create(&path).map_err(|e| ServiceError::io(path.display().to_string(), e))?;
                let instance = commands::working_instance(&wb, expected)?;
                export::write_report(std::io::BufWriter::new(f), &instance, wb.stakeholders.as_ref(), &tables)?;
            }
        }
        Command::Dashboard {
            file,
            strategy,
            out_dir,
            expected,
        } => {
            let wb = load_instance(&file)?;
            let s = commands::read_strategy(&read(&strategy)?)?;
            let (tables, warnings) = commands::dashboard(&wb, &s, expected)?;
            for w in &warnings {
                log::warn!("{w}");
            }
            let instance = commands::working_instance(&wb, expected)?;
            match out_dir {
                Some(dir) => {
                    for p in export::write_report_dir(&dir, &instance, wb.stakeholders.as_ref(), &tables)? {
                        println!("{}", p.display());
                    }
                }
                None => {
                    let stdout = std::io::stdout();
                    export::write_report(stdout.lock(), &instance, wb.stakeholders.as_ref(), &tables)?;
                }
            }
        }
        Command::Imo {
            file,
            formulation,
            sample_size,
            serve,
            journal,
            journal_dir,
        } => {
            let wb = load_instance(&file)?;
            if serve {
                if wb.thresholds.is_none() {
                    return Err(ServiceError::Usage("the instance has no thresholds block".into()));
                }
                let port = match std::env::var("STPLAN_PORT") {
                    Ok(p) => p
                        .parse()
                        .map_err(|_| ServiceError::Usage(format!("STPLAN_PORT {p:?} is not a port number")))?,
                    Err(_) => 8080,
                };
                if let Some(dir) = &journal_dir {
                    std::fs::create_dir_all(dir).map_err(|e| ServiceError::io(dir.display().to_string(), e))?;
                }
                let router = api::router(wb, formulation, journal_dir);
                let rt = tokio::runtime::Runtime::new().map_err(|e| ServiceError::io("tokio runtime", e))?;
                rt.block_on(api::serve(router, port))
                    .map_err(|e| ServiceError::io(format!("port {port}"), e))?;
            } else if let Some(path) = journal {
                let journal: Journal = from_json(&read(&path)?)?;
                let session = commands::replay_session(&wb, &journal)?;
                print_json(&session.view());
            } else {
                let session = commands::start_session(&wb, formulation, sample_size)?;
                print_json(&session.view());
            }
        }
        Command::Oracle { file } => {
            let wb = load_instance(&file)?;
            for c in commands::oracle(&wb)? {
                println!(
                    "{:<8} branch-and-bound {:<22} brute-force {:<22} same strategy: {}",
                    c.name, c.branch_and_bound, c.brute_force, c.strategies_match
                );
            }
        }
        Command::Check { file } => {
            let wb = load_instance(&file)?;
            for w in &wb.warnings {
                log::warn!("{w}");
            }
            print!("{}", wb.to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = ServiceError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", serde_json::to_string(&err.body()).expect("error serializes"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.body()).expect("error serializes"));
            ExitCode::FAILURE
        }
    }
}
