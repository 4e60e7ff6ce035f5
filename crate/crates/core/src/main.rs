use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use helstrom::discrimination::DetectorDocument;
use helstrom::nosignal::BlackBoxResponse;
use helstrom::scenario::ScenarioDocument;
use helstrom::{
    blackbox_report, build_scenario, empirical_gap, helstrom_bound, nosignal_error_bound,
    run_protocol, scan, verify_ensemble_equality, write_records, BlochVector, Mat2, Preparation,
    Result, Scenario, SimConfig, SteeringSetup,
};

#[derive(Parser)]
#[command(
    name = "helstrom",
    version,
    about = "Qubit discrimination bounds from the no-signalling condition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Helstrom bound for two equiprobable states
    Bound {
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        r0: BlochVector,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        r1: BlochVector,
        #[arg(long)]
        json: bool,
    },
    /// Build the equal-average ensemble pair
    Scenario {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long)]
        json: bool,
    },
    /// Purification and Alice's steering measurements
    Steer {
        #[command(flatten)]
        source: ScenarioSource,
    },
    /// Grid sweep over binary POVMs
    Scan {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Bound chain for a black-box detector
    Blackbox {
        #[command(flatten)]
        source: ScenarioSource,
        /// JSON response table
        #[arg(long)]
        responses: PathBuf,
    },
    /// Monte-Carlo run of the protocol
    Simulate {
        #[command(flatten)]
        source: ScenarioSource,
        /// Detector JSON; defaults to the Helstrom detector
        #[arg(long)]
        detector: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write per-round records here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["r0", "scenario"])))]
struct ScenarioSource {
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, requires = "r1")]
    r0: Option<BlochVector>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, requires = "r0")]
    r1: Option<BlochVector>,
    /// Scenario JSON document
    #[arg(long, conflicts_with_all = ["r0", "r1"])]
    scenario: Option<PathBuf>,
}

impl ScenarioSource {
    fn resolve(&self) -> Result<Scenario> {
        match (&self.scenario, self.r0, self.r1) {
            (Some(path), _, _) => read_json::<ScenarioDocument>(path)?.resolve(),
            (None, Some(r0), Some(r1)) => build_scenario(r0, r1),
            _ => unreachable!("clap enforces a scenario source"),
        }
    }
}

fn parse_vector(s: &str) -> std::result::Result<BlochVector, String> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    match parts.as_slice() {
        [x, y, z] => Ok(BlochVector::new(*x, *y, *z)),
        _ => Err(format!("expected x,y,z but got {} components", parts.len())),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(File::open(path)?)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Row-major `[[re, im], …]`.
fn matrix_json(m: &Mat2) -> serde_json::Value {
    json!(m
        .0
        .iter()
        .flatten()
        .map(|z| [z.re, z.im])
        .collect::<Vec<_>>())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bound { r0, r1, json } => {
            let bound = helstrom_bound(r0, r1)?;
            if json {
                print_json(&json!({ "r0": r0, "r1": r1, "helstrom_bound": bound }))?;
            } else {
                println!("{bound}");
            }
        }
        Command::Scenario { source, json } => {
            let s = source.resolve()?;
            if json {
                print_json(&s)?;
            } else {
                println!("p         = {}", s.p);
                println!("delta_hat = {}", s.delta_hat);
                println!("r_B       = {}", s.r_b);
                println!("residual  = {:e}", verify_ensemble_equality(&s)?);
                println!("floor     = {}", nosignal_error_bound(&s));
            }
        }
        Command::Steer { source } => {
            let s = source.resolve()?;
            let setup = SteeringSetup::for_scenario(&s)?;
            let measurements = Preparation::BOTH
                .iter()
                .map(|&j| {
                    let m = setup.measurement(j);
                    let check = m.check(&setup.state)?;
                    Ok(json!({
                        "choice": j.index(),
                        "elements": m.entries.iter().map(|e| matrix_json(&e.element)).collect::<Vec<_>>(),
                        "weights": m.entries.iter().map(|e| e.target_weight).collect::<Vec<_>>(),
                        "targets": m.entries.iter().map(|e| matrix_json(e.target_state.matrix())).collect::<Vec<_>>(),
                        "max_probability_error": check.probability,
                        "max_state_error": check.conditional_state,
                        "completeness_error": check.completeness,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            print_json(&json!({
                "scenario": s,
                "state": setup.state.amplitudes.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "measurements": measurements,
            }))?;
        }
        Command::Scan { source, grid } => {
            print_json(&scan::scan(&source.resolve()?, grid)?)?;
        }
        Command::Blackbox { source, responses } => {
            let s = source.resolve()?;
            let table: BlackBoxResponse = read_json(&responses)?;
            print_json(&blackbox_report(&table, &s)?)?;
        }
        Command::Simulate {
            source,
            detector,
            rounds,
            seed,
            threads,
            csv,
        } => {
            let scenario = source.resolve()?;
            let doc = match detector {
                Some(path) => read_json(&path)?,
                None => DetectorDocument::Helstrom,
            };
            let config = SimConfig {
                scenario,
                detector: doc.resolve(&scenario)?,
                rounds,
                seed,
                threads,
            };
            let report = run_protocol(&config)?;
            if let Some(path) = csv {
                write_records(&report, BufWriter::new(File::create(path)?))?;
            }
            eprintln!("empirical gap: {:+.6}", empirical_gap(&report));
            print_json(&report)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
