//! `qcausal`: runs scenario files, the acceptance suite, and the fixture
//! regenerator.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::LevelFilter;
use qcausal_core::acceptance::{self, CHECK_SEED};
use qcausal_core::fixtures;
use qcausal_core::scenario::{self, load_scenario, run_scenario, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "qcausal", version, about = "Quantum measurement, lattice cones and causal order")]
struct Cli {
    /// Output directory (or file, for regen-fixtures).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the scenario or acceptance seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the commutation threshold of lattice scenarios.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Log progress to stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario file and print its report as JSON.
    Run { file: PathBuf },
    /// Run the twelve acceptance criteria.
    Check,
    /// Recompute the golden fixture (written as UNVERIFIED).
    RegenFixtures,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(scenario::ERROR_EXIT as u8);
        }
    }

    let result = match &cli.command {
        Command::Run { file } => run(&cli, file),
        Command::Check => check(&cli),
        Command::RegenFixtures => regen(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(scenario::ERROR_EXIT as u8)
        }
    }
}

type CliResult = Result<u8, Box<dyn std::error::Error>>;

fn run(cli: &Cli, file: &Path) -> CliResult {
    let s = load_scenario(file)?;
    let options = RunOptions {
        out_dir: cli.out.clone(),
        seed: cli.seed,
        eps: cli.eps,
    };
    let report = run_scenario(&s, &options)?;
    println!("{}", report.to_json_string());
    for (name, ok) in &report.verdicts {
        if !ok {
            log::warn!("verdict {name} failed");
        }
    }
    Ok(report.exit_code() as u8)
}

fn check(cli: &Cli) -> CliResult {
    let seed = cli.seed.unwrap_or(CHECK_SEED);
    let (dir, scratch) = match &cli.out {
        Some(d) => (d.clone(), false),
        None => (std::env::temp_dir().join(format!("qcausal-check-{}", std::process::id())), true),
    };
    std::fs::create_dir_all(&dir)?;
    let report = acceptance::run_all(&dir, seed);
    for c in &report.criteria {
        println!("{}", c.line());
    }
    if scratch {
        std::fs::remove_dir_all(&dir).ok();
    } else {
        let mut text = serde_json::to_string_pretty(&report.to_json())?;
        text.push('\n');
        std::fs::write(dir.join("acceptance.json"), text)?;
    }
    let failed = report.failed();
    if failed.is_empty() {
        println!("all {} criteria passed", report.criteria.len());
        Ok(0)
    } else {
        println!("failed criteria: {failed:?}");
        Ok(2)
    }
}

fn regen(cli: &Cli) -> CliResult {
    let path = cli.out.clone().unwrap_or_else(|| PathBuf::from("golden.json"));
    let golden = fixtures::regenerate().map_err(|e| e.to_string())?;
    fixtures::write(&golden, &path)?;
    eprintln!(
        "wrote {} ({}); confirm with: python3 crates/core/fixtures/mode_sum_oracle.py --verify {}",
        path.display(),
        golden.status,
        path.display()
    );
    Ok(0)
}
