use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinqpt::check::self_check;
use spinqpt::model::analytic_spectrum;
use spinqpt::sweep::{emit, emit_preset, render_csv, run_sweep, run_sweep_with_threads, Preset, SweepConfig};
use spinqpt::{Error, ModelParams};

#[derive(Parser)]
#[command(name = "spinqpt", version, about = "Central spin / XXZ bath sweeps and spectra")]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one sweep described by a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG next to the CSV.
        #[arg(long)]
        plot: bool,
    },
    /// Run every curve of a named figure preset.
    Preset {
        name: String,
        /// Output directory.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[arg(long)]
        plot: bool,
    },
    /// Print the full sorted spectrum.
    Spectrum {
        #[arg(long, allow_negative_numbers = true)]
        omega0: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long = "A", allow_negative_numbers = true)]
        coupling: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long = "N")]
        n_spins: u32,
    },
    /// Built-in self-test.
    Check,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 1,
        Error::Io { .. } => 2,
        Error::Domain(_) | Error::Inadmissible(_) | Error::Resource { .. } => 3,
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("spinqpt: {err}");
    ExitCode::from(exit_code(&err))
}

fn run(cli: Cli) -> Result<(), Error> {
    if cli.threads == Some(0) {
        return Err(Error::Config("--threads must be >= 1".into()));
    }
    match cli.command {
        Command::Sweep { config, out, plot } => {
            let mut config = SweepConfig::from_file(&config)?;
            if out.is_some() {
                config.output = out;
            }
            config.plot |= plot;
            let result = match cli.threads {
                Some(t) => run_sweep_with_threads(&config, t)?,
                None => run_sweep(&config)?,
            };
            match &config.output {
                Some(path) => {
                    for written in emit(&result, path, config.plot)? {
                        eprintln!("wrote {}", written.display());
                    }
                }
                None if config.plot => {
                    return Err(Error::Config("--plot needs an output path".into()));
                }
                None => print!("{}", render_csv(&result)?),
            }
        }
        Command::Preset { name, out, plot } => {
            let preset: Preset = name.parse()?;
            for written in emit_preset(preset, &out, plot, cli.threads)? {
                eprintln!("wrote {}", written.display());
            }
        }
        Command::Spectrum {
            omega0,
            omega,
            coupling,
            delta,
            n_spins,
        } => {
            let params = ModelParams::new(omega0, omega, coupling, delta, n_spins)?;
            let mut spectrum = analytic_spectrum(&params);
            spectrum.sort_by(f64::total_cmp);
            for e in spectrum {
                println!("{e}");
            }
        }
        Command::Check => {
            let mut ok = true;
            for outcome in self_check() {
                let status = if outcome.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status} {}: {} cases, worst {:.3e} (tolerance {:.0e})",
                    outcome.name, outcome.cases, outcome.worst, outcome.tolerance
                );
                ok &= outcome.passed();
            }
            if !ok {
                return Err(Error::Config("self-check failed".into()));
            }
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
        Err(e) => fail(e),
    }
}
