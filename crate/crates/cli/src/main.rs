use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use patchlink::circuit::inject_noise;
use patchlink::harness::{
    analyze, graph_distance, plot_svg, read_csv, run_point, scan, write_csv, DistanceReport, ExperimentConfig,
    HarnessError, OneOrMany, LAMBDA_P,
};
use patchlink::layout::{build_memory_experiment, CodeKind, Cut, Gadget, InterfaceConfig};
use patchlink::pauli::Basis;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DECOMPOSE: u8 = 3;

#[derive(Parser)]
#[command(name = "patchlink", version, about = "Surface-code interface memory experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the circuit of a memory experiment (noisy when --p is given).
    Generate {
        #[command(flatten)]
        exp: ExpArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one point and print its record as JSON.
    Sample {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Run every (d, p) point of a grid and write CSV.
    Scan {
        #[command(flatten)]
        exp: ExpArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pseudothresholds, suppression factors and slopes of a scan, as JSON.
    Analyze {
        csv: PathBuf,
        #[arg(long, default_value_t = LAMBDA_P)]
        lambda_p: f64,
    },
    /// Circuit distance of a configuration as seen by the decoder.
    Distance {
        #[command(flatten)]
        exp: ExpArgs,
        /// Print a JSON report instead of the bare integer.
        #[arg(long)]
        json: bool,
    },
    /// Threshold plot of a scan as SVG.
    Plot {
        csv: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Experiment settings: a config file, flags, or both (flags win).
#[derive(Args, Clone, Debug, Default)]
struct ExpArgs {
    /// TOML or JSON experiment file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long)]
    code: Option<CodeKind>,
    #[arg(long)]
    gadget: Option<Gadget>,
    #[arg(long)]
    basis: Option<Basis>,
    #[arg(long)]
    cut: Option<Cut>,
    /// Code distance; repeat or comma-separate for scans.
    #[arg(short, long, value_delimiter = ',')]
    d: Vec<usize>,
    /// Physical error rate; repeat or comma-separate for scans.
    #[arg(short, long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    max_shots: Option<u64>,
    #[arg(long)]
    max_errors: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Skip idle noise in ticks holding resets or measurements.
    #[arg(long)]
    no_reset_measure_idle: bool,
    /// Full-scale run: 3e6 shot cap and, for scans without -d, d up to 11.
    #[arg(long)]
    full: bool,
}

impl ExpArgs {
    fn resolve(&self, default_ds: &[usize]) -> Result<ExperimentConfig> {
        let base = match &self.config {
            Some(path) => Some(ExperimentConfig::from_path(path)?),
            None => None,
        };
        let need = |what: &str| anyhow::anyhow!(Usage(format!("missing --{what} (or a --config file)")));
        let mut c = match base {
            Some(c) => c,
            None => ExperimentConfig {
                code: self.code.ok_or_else(|| need("code"))?,
                gadget: self.gadget.ok_or_else(|| need("gadget"))?,
                basis: self.basis.ok_or_else(|| need("basis"))?,
                cut: None,
                d: OneOrMany::Many(default_ds.to_vec()),
                p: None,
                gamma: 1.0,
                idle_in_reset_measure_ticks: true,
                rounds: None,
                max_shots: 1_000_000,
                max_errors: 3_000,
                seed: 0,
            },
        };
        if self.full {
            c.max_shots = 3_000_000;
        }
        if let Some(v) = self.code {
            c.code = v;
        }
        if let Some(v) = self.gadget {
            c.gadget = v;
        }
        if let Some(v) = self.basis {
            c.basis = v;
        }
        if self.cut.is_some() {
            c.cut = self.cut;
        }
        if !self.d.is_empty() {
            c.d = OneOrMany::Many(self.d.clone());
        }
        if !self.p.is_empty() {
            c.p = Some(OneOrMany::Many(self.p.clone()));
        }
        if let Some(v) = self.gamma {
            c.gamma = v;
        }
        if self.rounds.is_some() {
            c.rounds = self.rounds;
        }
        if let Some(v) = self.max_shots {
            c.max_shots = v;
        }
        if let Some(v) = self.max_errors {
            c.max_errors = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if self.no_reset_measure_idle {
            c.idle_in_reset_measure_ticks = false;
        }
        Ok(c)
    }

    fn single(&self) -> Result<(ExperimentConfig, InterfaceConfig)> {
        let c = self.resolve(&[])?;
        let ds = c.d.to_vec();
        let [d] = ds[..] else {
            bail!(Usage(format!("exactly one distance expected, got {}", ds.len())));
        };
        let mut cfg = InterfaceConfig::new(c.code, c.gadget, d, c.basis);
        if let Some(cut) = c.cut {
            cfg = cfg.with_cut(cut);
        }
        cfg.check().map_err(HarnessError::from)?;
        Ok((c, cfg))
    }
}

/// Bad invocation detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn sink(output: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match output {
        Some(path) => Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { exp, output } => {
            let (c, cfg) = exp.single()?;
            let m = build_memory_experiment(&cfg, c.rounds.unwrap_or(cfg.d)).map_err(HarnessError::from)?;
            let circuit = match c.p.as_ref().map(|p| p.to_vec()) {
                None => m.circuit,
                Some(ps) => {
                    let [p] = ps[..] else {
                        bail!(Usage("generate takes at most one --p".into()));
                    };
                    let noise = patchlink::circuit::NoiseParams {
                        p,
                        gamma: c.gamma,
                        idle_in_reset_measure_ticks: c.idle_in_reset_measure_ticks,
                    };
                    inject_noise(&m.circuit, &noise).map_err(HarnessError::from)?
                }
            };
            sink(output.as_deref())?.write_all(circuit.to_text().as_bytes())?;
        }
        Command::Sample { exp } => {
            let (c, _) = exp.single()?;
            let points = c.points()?;
            let [point] = points[..] else {
                bail!(Usage(format!("sample runs one point; the grid has {}", points.len())));
            };
            let rec = run_point(&point)?;
            println!("{}", serde_json::to_string_pretty(&rec)?);
        }
        Command::Scan { exp, output } => {
            let ds: &[usize] = if exp.full { &[3, 5, 7, 9, 11] } else { &[3, 5, 7] };
            let c = exp.resolve(ds)?;
            let recs = scan(&c.points()?)?;
            write_csv(sink(output.as_deref())?, &recs)?;
        }
        Command::Analyze { csv, lambda_p } => {
            let f = File::open(&csv).with_context(|| format!("opening {}", csv.display()))?;
            let a = analyze(&read_csv(f)?, lambda_p);
            println!("{}", serde_json::to_string_pretty(&a)?);
        }
        Command::Distance { exp, json } => {
            let (_, cfg) = exp.single()?;
            let distance = graph_distance(&cfg)?;
            if json {
                let r = DistanceReport {
                    config: cfg.to_string(),
                    basis: cfg.basis,
                    orientation: cfg.orientation(),
                    distance,
                };
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                println!("{distance}");
            }
        }
        Command::Plot { csv, output } => {
            let f = File::open(&csv).with_context(|| format!("opening {}", csv.display()))?;
            let svg = plot_svg(&read_csv(f)?);
            sink(output.as_deref())?.write_all(svg.as_bytes())?;
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<HarnessError>() {
        Some(HarnessError::Decompose { .. }) => EXIT_DECOMPOSE,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
