//! `boxgas`: reproduce the free-expansion thermodynamics of a single
//! particle in a 1D square trap as deterministic CSV tables and optional
//! gnuplot scripts.

mod config;
mod plot;
mod runs;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{ArgAction, Args, Parser, Subcommand};

use config::{Overrides, RunConfig, Subcmd};

#[derive(Parser)]
#[command(
    name = "boxgas",
    version,
    about = "Quantum free expansion in a 1D square trap: entropy sweeps, \
             occupation distributions, dephasing dynamics, entropy-energy curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy change of free vs isothermal expansion over L/lambda_T (fig1b.csv)
    EntropySweep(CommonArgs),
    /// Occupation distributions vs the thermal reference (fig2_T{T}.csv)
    Distribution(CommonArgs),
    /// Density-profile dynamics and steady profiles (fig3.csv, fig3_steady_T{T}.csv)
    Dynamics(CommonArgs),
    /// Entropy-energy curves over temperature (fig4.csv)
    SeCurve(CommonArgs),
    /// Reproduce figure outputs by tag: 1b, 2, 3, 4, or all
    Fig {
        /// Which figure to reproduce
        tag: String,
        #[command(flatten)]
        args: CommonArgs,
    },
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Trap size after expansion
    #[arg(long = "L")]
    length: Option<f64>,
    /// Particle mass
    #[arg(long = "M")]
    mass: Option<f64>,
    /// Temperature (natural units unless hbar/k_B are rescaled in code)
    #[arg(long = "T")]
    temperature: Option<f64>,
    /// Basis truncation; omit for the automatic tail rule
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Uniform dephasing rate in units of alpha/hbar
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated L/lambda_T grid (entropy-sweep)
    #[arg(long)]
    ratios: Option<String>,
    /// Comma-separated temperature list (distribution, dynamics, se-curve)
    #[arg(long)]
    temps: Option<String>,
    /// Position samples across the trap
    #[arg(long)]
    nx: Option<usize>,
    /// Time samples per window
    #[arg(long)]
    nt: Option<usize>,
    /// Output directory (default: $BOXGAS_OUT, else the current directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit a gnuplot script next to each CSV
    #[arg(long, action = ArgAction::SetTrue)]
    emit_plots: bool,
    /// Worker threads for the sweeps (default: available cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Flat key = value config file (flags override it)
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self) -> Result<Overrides> {
        let parse_list = |s: &String| -> Result<Vec<f64>> {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|e| anyhow::anyhow!("bad number '{p}': {e}"))
                })
                .collect()
        };
        Ok(Overrides {
            length: self.length,
            mass: self.mass,
            temperature: self.temperature,
            n_max: self.n_max.map(Some),
            gamma: self.gamma,
            ratios: self.ratios.as_ref().map(parse_list).transpose()?,
            temps: self.temps.as_ref().map(parse_list).transpose()?,
            nx: self.nx,
            nt: self.nt,
            emit_plots: if self.emit_plots { Some(true) } else { None },
            workers: self.workers,
            out: self.out.clone(),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main(cli: Cli) -> Result<()> {
    let (subcommands, args): (Vec<Subcmd>, CommonArgs) = match cli.command {
        Command::EntropySweep(a) => (vec![Subcmd::EntropySweep], a),
        Command::Distribution(a) => (vec![Subcmd::Distribution], a),
        Command::Dynamics(a) => (vec![Subcmd::Dynamics], a),
        Command::SeCurve(a) => (vec![Subcmd::SeCurve], a),
        Command::Fig { tag, args } => (fig_subcommands(&tag)?, args),
    };
    let mut first = true;
    for sub in subcommands {
        let cfg = RunConfig::resolve(sub, args.overrides()?, args.config.as_deref())?;
        if first {
            // bounded data-parallelism for the sweeps; falls back to the
            // already-installed pool on repeat calls
            let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build_global();
            first = false;
        }
        let summary = runs::run(&cfg)?;
        for f in summary.files {
            println!("wrote {}", f.display());
        }
    }
    Ok(())
}

fn fig_subcommands(tag: &str) -> Result<Vec<Subcmd>> {
    Ok(match tag {
        "1b" | "fig1b" => vec![Subcmd::EntropySweep],
        "2" | "fig2" => vec![Subcmd::Distribution],
        "3" | "fig3" => vec![Subcmd::Dynamics],
        "4" | "fig4" => vec![Subcmd::SeCurve],
        "all" => vec![
            Subcmd::EntropySweep,
            Subcmd::Distribution,
            Subcmd::Dynamics,
            Subcmd::SeCurve,
        ],
        other => bail!("unknown figure tag '{other}' (expected 1b, 2, 3, 4, or all)"),
    })
}
