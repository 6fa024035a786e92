// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opgrowth::config::{Command, RunConfig};
use opgrowth::pipeline;

#[derive(Parser)]
#[command(name = "opgrowth", version, about = "Operator growth under dephasing Lindbladians")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bi-Lanczos on the dissipative tilted-field Ising chain.
    IsingLanczos(Flags),
    /// Large-q SYK moments, Hankel coefficients and N_p scaling.
    Syk(Flags),
    /// Hopping toy model: exact moments and coefficients.
    Toy(Flags),
    /// Moment ratios for all three families.
    Ratio(Flags),
    /// Spectral function of the resummed SYK correlator.
    Spectral(Flags),
}

#[derive(Args)]
struct Flags {
    /// Config file with section.key=value lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Single dissipation strength.
    #[arg(long, conflicts_with = "eta_list")]
    eta: Option<String>,
    /// Comma-separated dissipation strengths.
    #[arg(long)]
    eta_list: Option<String>,
    /// SYK q (comma-separated for a grid).
    #[arg(long)]
    q: Option<String>,
    #[arg(long = "J")]
    j: Option<String>,
    /// Lanczos depth, or `auto`.
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    /// Exact rational arithmetic where the model allows it.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    precision_bits: Option<String>,
    #[arg(long)]
    omega_min: Option<String>,
    #[arg(long)]
    omega_max: Option<String>,
    #[arg(long)]
    omega_points: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn build(command: Command, f: &Flags) -> opgrowth::Result<RunConfig> {
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &f.config {
        cfg.apply_text(&std::fs::read_to_string(path)?)?;
    }
    let overrides = [
        ("model.eta", f.eta.as_ref().or(f.eta_list.as_ref())),
        ("model.q", f.q.as_ref()),
        ("model.J", f.j.as_ref()),
        ("run.n_max", f.n_max.as_ref()),
        ("run.epsilon", f.epsilon.as_ref()),
        ("run.precision_bits", f.precision_bits.as_ref()),
        ("omega.min", f.omega_min.as_ref()),
        ("omega.max", f.omega_max.as_ref()),
        ("omega.points", f.omega_points.as_ref()),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if f.exact {
        cfg.exact = true;
    }
    if let Some(dir) = &f.out_dir {
        cfg.out_dir = dir.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match &cli.command {
        Cmd::IsingLanczos(f) => (Command::IsingLanczos, f),
        Cmd::Syk(f) => (Command::Syk, f),
        Cmd::Toy(f) => (Command::Toy, f),
        Cmd::Ratio(f) => (Command::Ratio, f),
        Cmd::Spectral(f) => (Command::Spectral, f),
    };
    let result = build(command, flags).and_then(|cfg| pipeline::run(&cfg));
    match result {
        Ok(report) => {
            for f in &report.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
