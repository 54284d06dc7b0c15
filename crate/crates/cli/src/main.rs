use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use spp_core::config::{defaults, parse_config};
use spp_core::figures::{self, FigureError, FigureId, FigureOptions};
use spp_core::sweep::{run_sweep, warnings_path, SweepError, SweepOptions};
use spp_core::{calibrate_prefactor, SolverOptions};

/// Quantum-well / metal-film surface plasmon simulator.
#[derive(Parser, Debug)]
#[command(name = "spp", version)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Relative tolerance of the root finders.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the CSV behind a figure panel (e.g. 5b), or `all`.
    Fig {
        #[arg(long)]
        id: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write an SVG plot.
        #[arg(long)]
        plot: bool,
        /// Panels 7a/7b: write the dispersion residual instead of the solved
        /// mode damping.
        #[arg(long)]
        residual: bool,
    },
    /// Run the sweep described by a configuration file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides `outputs.path`. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for the density-dipole prefactor that puts the SPP resonance at
    /// the given detuning and angle.
    Calibrate {
        /// Probe detuning, meV.
        #[arg(long, default_value_t = -1.73, allow_hyphen_values = true)]
        target_detuning: f64,
        /// Incidence angle, degrees.
        #[arg(long, default_value_t = 77.0, allow_hyphen_values = true)]
        target_angle: f64,
        /// Pump Rabi frequency, meV.
        #[arg(long, default_value_t = 2.0)]
        pump: f64,
    },
}

/// Exit status classes.
enum Failure {
    Input(anyhow::Error),
    Numerical(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Numerical(e) | Failure::Io(e) => e,
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Io { .. } => Failure::Io(e.into()),
            SweepError::ThreadPool(_) => Failure::Numerical(e.into()),
        }
    }
}

impl From<FigureError> for Failure {
    fn from(e: FigureError) -> Self {
        match e {
            FigureError::UnknownFigureId(_) => Failure::Input(e.into()),
            FigureError::Sweep(s) => s.into(),
        }
    }
}

fn solver_options(tol: Option<f64>) -> Result<SolverOptions, Failure> {
    match tol {
        None => Ok(SolverOptions::default()),
        Some(t) if t > 0.0 && t.is_finite() => Ok(SolverOptions::with_tol(t)),
        Some(t) => Err(Failure::Input(anyhow!("--tol must be a positive number, got {t}"))),
    }
}

fn report_warnings(n: usize, path: Option<&std::path::Path>) {
    if n == 0 {
        return;
    }
    match path {
        Some(p) => eprintln!("warning: {n} cells could not be evaluated; see {}", p.display()),
        None => eprintln!("warning: {n} cells could not be evaluated"),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.threads == Some(0) {
        return Err(Failure::Input(anyhow!("--threads must be at least 1")));
    }
    let sweep_opts = SweepOptions {
        threads: cli.threads,
        solver: solver_options(cli.tol)?,
    };
    match cli.command {
        Command::Fig {
            id,
            out,
            plot,
            residual,
        } => {
            let ids: Vec<FigureId> = if id == "all" {
                FigureId::ALL.to_vec()
            } else {
                vec![id.parse()?]
            };
            let opts = FigureOptions {
                plot,
                residual,
                sweep: sweep_opts,
            };
            for id in ids {
                let fig = figures::reproduce_figure(id, &out, &opts)?;
                println!("{}", fig.csv.display());
                if let Some(svg) = &fig.svg {
                    println!("{}", svg.display());
                }
                report_warnings(fig.table.warnings.len(), Some(&warnings_path(&fig.csv)));
            }
        }
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("cannot read {}", config.display()))
                .map_err(Failure::Io)?;
            let cfg = parse_config(&text)
                .with_context(|| format!("in {}", config.display()))
                .map_err(Failure::Input)?;
            let table = run_sweep(&cfg, &sweep_opts)?;
            match out.or_else(|| cfg.out_path.clone()) {
                Some(path) => {
                    table.save(&path)?;
                    if cfg.plot {
                        let svg = path.with_extension("svg");
                        let title = path
                            .file_stem()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_default();
                        fs::write(&svg, figures::render(&cfg, &table, &title))
                            .with_context(|| format!("cannot write {}", svg.display()))
                            .map_err(Failure::Io)?;
                    }
                    report_warnings(table.warnings.len(), Some(&warnings_path(&path)));
                }
                None => {
                    let stdout = io::stdout();
                    let mut lock = stdout.lock();
                    table
                        .write_csv(&mut lock)
                        .and_then(|_| lock.flush())
                        .context("cannot write to stdout")
                        .map_err(Failure::Io)?;
                    for w in &table.warnings {
                        eprintln!("warning: {w}");
                    }
                }
            }
        }
        Command::Calibrate {
            target_detuning,
            target_angle,
            pump,
        } => {
            if !(-90.0..=90.0).contains(&target_angle) {
                return Err(Failure::Input(anyhow!(
                    "--target-angle must lie in [-90, 90] degrees"
                )));
            }
            let d = defaults();
            let qw = d.qw.with_omega_b(pump);
            qw.validate()
                .map_err(|(k, m)| Failure::Input(anyhow!("invalid {k}: {m}")))?;
            let alpha = calibrate_prefactor(
                &qw,
                &d.stack,
                target_detuning,
                target_angle,
                &sweep_opts.solver,
            )
            .map_err(|e| Failure::Numerical(e.into()))?;
            println!("alpha = {alpha:?}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
