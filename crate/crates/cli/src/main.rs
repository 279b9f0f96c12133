//! Batch front door for the quasispin pairing workbench.
//!
//! Reads a level-scheme config, runs one of the verify / solve / spectrum /
//! oracle / compare workflows, and emits human or machine reports.
//! Exit codes: 0 success, 1 verification failure, 2 solver non-convergence,
//! 3 invalid config.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gaudin_pair_cli::config::{parse_config, parse_pairs, Command, OutputFormat};
use gaudin_pair_cli::workflows::{self, EXIT_INVALID_CONFIG, EXIT_NO_CONVERGENCE};

#[derive(Parser)]
#[command(
    name = "gaudin-pair",
    about = "Quasispin pairing Hamiltonians, their invariants, and Bethe-ansatz spectra"
)]
struct Cli {
    /// Level-scheme configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Workflow to run (overrides the config's `command` key).
    #[arg(long, value_enum)]
    command: Option<Command>,

    /// Pair sector or inclusive range, e.g. `2` or `0..4`.
    #[arg(long)]
    pairs: Option<String>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// RNG seed for the multi-start solver (overrides the config).
    #[arg(long)]
    seed: Option<u64>,

    /// Newton residual tolerance.
    #[arg(long)]
    tol_newton: Option<f64>,

    /// Root separation / dedup tolerance.
    #[arg(long)]
    tol_sep: Option<f64>,

    /// Diagnostics fixture: shift every solved root by this amount before
    /// record assembly (exercises the residual gates in `compare`).
    #[arg(long)]
    perturb: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    if let Ok(threads) = std::env::var("GAUDIN_PAIR_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => log::warn!("ignoring invalid GAUDIN_PAIR_THREADS={threads:?}"),
        }
    }

    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(EXIT_INVALID_CONFIG as u8);
        }
    };
    let mut run_config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_INVALID_CONFIG as u8);
        }
    };

    // flags override config
    if let Some(pairs) = &cli.pairs {
        match parse_pairs(pairs) {
            Ok(p) => run_config.pairs = Some(p),
            Err(e) => {
                eprintln!("config error: {e}");
                return ExitCode::from(EXIT_INVALID_CONFIG as u8);
            }
        }
    }
    if let Some(seed) = cli.seed {
        run_config.params.seed = seed;
    }
    if let Some(tol) = cli.tol_newton {
        run_config.params.newton_tol = tol;
    }
    if let Some(tol) = cli.tol_sep {
        run_config.params.separation_tol = tol;
    }
    if let Some(p) = cli.perturb {
        run_config.perturb = p;
    }
    if cli.out.is_some() {
        run_config.out = cli.out.clone();
    }
    if let Some(f) = cli.format {
        run_config.format = Some(f);
    }
    let Some(command) = cli.command.or(run_config.command) else {
        eprintln!("config error: no command given (flag --command or config key `command`)");
        return ExitCode::from(EXIT_INVALID_CONFIG as u8);
    };

    let outcome = match workflows::run(&run_config, command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                gaudin_pair::Error::InvalidScheme(_) | gaudin_pair::Error::SectorOutOfRange { .. } => {
                    EXIT_INVALID_CONFIG
                }
                _ => EXIT_NO_CONVERGENCE,
            };
            return ExitCode::from(code as u8);
        }
    };

    match &run_config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.report) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_NO_CONVERGENCE as u8);
            }
        }
        None => print!("{}", outcome.report),
    }
    // human summaries go to stderr so CSV payloads stay byte-clean
    for line in &outcome.summary {
        eprintln!("{line}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
