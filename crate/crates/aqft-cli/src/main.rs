use std::path::PathBuf;
use std::process::ExitCode;

use aqft::cli::{run, Command, RunConfig, RunError};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    GeometryCheck,
    CatalogBuild,
    Axioms,
    Extend,
    Characterize,
    IqftRoundtrip,
    KgGreen,
    KgIdeal,
    KgSupport,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Command {
        match s {
            Sub::GeometryCheck => Command::GeometryCheck,
            Sub::CatalogBuild => Command::CatalogBuild,
            Sub::Axioms => Command::Axioms,
            Sub::Extend => Command::Extend,
            Sub::Characterize => Command::Characterize,
            Sub::IqftRoundtrip => Command::IqftRoundtrip,
            Sub::KgGreen => Command::KgGreen,
            Sub::KgIdeal => Command::KgIdeal,
            Sub::KgSupport => Command::KgSupport,
        }
    }
}

/// Runs one verification suite and writes `<out>/<command>.json`.
#[derive(Debug, Parser)]
#[command(name = "aqft", version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    /// JSON run config; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Quadrature step in physical units; rounded to a whole number of cells across the strip.
    #[arg(long)]
    grid_h: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_len: Option<usize>,
    /// Print the effective config and exit.
    #[arg(long)]
    print_config: bool,
}

fn config(args: &Args) -> Result<RunConfig, RunError> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_json(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    if let Some(h) = args.grid_h {
        if !(h > 0.0) {
            return Err(RunError::InvalidConfig(format!("grid-h must be positive, got {h}")));
        }
        cfg.tolerances.grid_n = (cfg.width() / h).round().max(1.0) as usize;
    }
    if let Some(s) = args.seed {
        cfg.experiments.seed = s;
    }
    if let Some(l) = args.max_len {
        cfg.truncation.max_len = l;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", e.to_json());
            return ExitCode::from(2);
        }
    };
    if args.print_config {
        println!("{}", cfg.to_json());
        return ExitCode::SUCCESS;
    }
    let cmd = Command::from(args.command);
    match run(cmd, &cfg) {
        Ok(out) => {
            for c in &out.report.checks {
                let mark = if c.passed() { "pass" } else { "FAIL" };
                println!("{mark}  {}", c.name);
            }
            println!("report: {}", cfg.out.join(format!("{cmd}.json")).display());
            match out.report.first_failure_json() {
                None => ExitCode::SUCCESS,
                Some(f) => {
                    eprintln!("{f}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
