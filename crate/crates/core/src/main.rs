use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use altns::config::{load_config, parse_variant, RunConfig, StudyMode};
use altns::diagnostics::convergence::{mms_study, richardson_study, StudySetup};
use altns::mms::MmsWave;
use altns::presets::initial_condition;
use altns::verify::{run_suite, SuiteSize, VARIANTS};
use altns::{Error, LambdaVariant};

/// Entropy-dissipative finite-volume solver for the mass-diffusive
/// compressible Navier-Stokes system.
///
/// The thread count is read from ALTNS_THREADS (default: all cores).
/// Exit status: 0 ok, 1 physics abort or failed check, 2 configuration error.
#[derive(Debug, Parser)]
#[command(name = "altns", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a configuration to its end time.
    Run { config: PathBuf },
    /// Grid-convergence study from the [convergence] section of a configuration.
    Converge {
        config: PathBuf,
        /// "r_star", "r_sharp" or "both"; defaults to the solver variant.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Run the property suite and the reference runs.
    Verify {
        /// Smaller samples and grids.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

fn init_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("ALTNS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("ALTNS_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn converge(cfg: &RunConfig, variant: Option<&str>) -> Result<(), Error> {
    let conv = cfg
        .convergence
        .as_ref()
        .ok_or_else(|| Error::Config("configuration has no [convergence] section".into()))?;
    let variants: Vec<LambdaVariant> = match variant {
        None => vec![cfg.solver.variant],
        Some("both") => VARIANTS.to_vec(),
        Some(s) => vec![parse_variant(s).ok_or_else(|| Error::Config(format!("unknown variant {s:?}")))?],
    };
    for v in variants {
        let setup = StudySetup {
            gas: cfg.gas,
            variant: v,
            grids: conv.grids.clone(),
            length: cfg.grid.extent()[0],
            t_end: conv.t_end,
            cfl: cfg.solver.cfl,
        };
        let table = match conv.mode {
            StudyMode::Mms => mms_study(&StudySetup { length: 1.0, ..setup }, &MmsWave::new(cfg.gas))?,
            StudyMode::Richardson => {
                richardson_study(&setup, &|g: &altns::Grid| initial_condition(&cfg.initial, g, &cfg.gas))?
            }
        };
        print!("{table}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|_| match &cli.command {
        Command::Run { config } => {
            let cfg = load_config(config)?;
            let summary = altns::run::run(&cfg)?;
            println!("{summary}");
            print!("{}", summary.norms);
            Ok(true)
        }
        Command::Converge { config, variant } => {
            let cfg = load_config(config)?;
            converge(&cfg, variant.as_deref())?;
            Ok(true)
        }
        Command::Verify { quick, seed } => {
            let size = if *quick { SuiteSize::QUICK } else { SuiteSize::FULL };
            let all = run_suite(size, *seed, &mut |o| println!("{o}"))?;
            let failed = all.iter().filter(|o| !o.passed).count();
            println!("{} checks, {failed} failed", all.len());
            Ok(failed == 0)
        }
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
