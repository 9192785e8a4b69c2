use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use lifshitz_cli::commands::{run, Command, Options, Report};
use lifshitz_cli::scenario::Scenario;
use lifshitz_cli::selftest::run_selftest;
use lifshitz_cli::with_threads;
use lifshitz_core::UnitSystem;

/// Exit status for a run that stopped part way and wrote a partial CSV.
const EXIT_INCOMPLETE: u8 = 2;
const EXIT_SELFTEST_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "lifshitz", version, about = "Casimir free energies between planar half-spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// CSV destination (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON sidecar with full per-point diagnostics
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Relative tolerance, overrides [output] tol_rel
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Unit system for the CSV: si or natural
    #[arg(long, global = true, value_parser = parse_units)]
    units: Option<UnitSystem>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario file
    scenario: PathBuf,
}

#[derive(Args)]
struct EnergyArgs {
    scenario: PathBuf,
    /// Append −∂F/∂d columns (d sweeps only)
    #[arg(long)]
    pressure: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Free energy at one point or along a sweep
    FreeEnergy(EnergyArgs),
    /// Free energy along the [sweep] grid
    Sweep(EnergyArgs),
    /// Off-axis Matsubara correction
    ExtraTerm(ScenarioArg),
    /// Ideal plates with an optionally screened gap
    PlasmaGap(ScenarioArg),
    /// Excited-atom resonance energy
    Resonance(ScenarioArg),
    /// Screened expansion at femtometre scales, in MeV
    NuclearDemo {
        scenario: PathBuf,
        #[arg(long)]
        demo_acknowledge: bool,
    },
    /// Run the acceptance checks
    Selftest,
}

fn parse_units(s: &str) -> std::result::Result<UnitSystem, String> {
    s.parse().map_err(|e: lifshitz_core::Error| e.to_string())
}

fn load(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scenario::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(cli: &Cli, scenario: &Scenario, report: &Report) -> Result<()> {
    let csv = report.csv();
    match &cli.out {
        Some(p) => fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    if let Some(p) = &cli.json {
        let text = serde_json::to_string_pretty(&report.json(scenario))?;
        fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<ExitCode> {
    if let Cmd::Selftest = cli.command {
        let outcomes = with_threads(cli.threads, run_selftest)?;
        let mut ok = true;
        for o in &outcomes {
            println!("{o}");
            ok &= o.passed;
        }
        return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_SELFTEST_FAILED) });
    }
    let mut opts = Options {
        tol: cli.tol,
        units: cli.units,
        ..Options::default()
    };
    let (command, path) = match &cli.command {
        Cmd::FreeEnergy(a) => {
            opts.pressure = a.pressure;
            (Command::FreeEnergy, &a.scenario)
        }
        Cmd::Sweep(a) => {
            opts.pressure = a.pressure;
            (Command::Sweep, &a.scenario)
        }
        Cmd::ExtraTerm(a) => (Command::ExtraTerm, &a.scenario),
        Cmd::PlasmaGap(a) => (Command::PlasmaGap, &a.scenario),
        Cmd::Resonance(a) => (Command::Resonance, &a.scenario),
        Cmd::NuclearDemo {
            scenario,
            demo_acknowledge,
        } => {
            opts.demo_acknowledge = *demo_acknowledge;
            (Command::NuclearDemo, scenario)
        }
        Cmd::Selftest => unreachable!(),
    };
    let scenario = load(path)?;
    let report = with_threads(cli.threads, || run(command, &scenario, &opts))??;
    if command == Command::NuclearDemo {
        eprintln!("note: {}", lifshitz_core::plasma_gap::DEMO_DISCLAIMER);
    }
    emit(cli, &scenario, &report)?;
    match &report.table.incomplete {
        None => Ok(ExitCode::SUCCESS),
        Some(reason) => {
            eprintln!("error: run incomplete: {reason}");
            Ok(ExitCode::from(EXIT_INCOMPLETE))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
