//! `tlsphot`: runs the named experiments and writes CSV tables, plot
//! scripts, a convergence report and a manifest.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on a usage, config or
//! parameter error, 3 when a headline value changes by more than the
//! tolerance between the default and the doubled grid.

mod config;
mod experiments;
mod output;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Config, Severity};
use experiments::{Experiment, Outcome};

#[derive(Parser)]
#[command(name = "tlsphot", version, about = "Few-photon scattering and photon-sorting experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Run {
        experiment: Experiment,
        /// TOML config; every key is optional.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (run.out).
        #[arg(long)]
        out: Option<String>,
        /// Directional coupling (tls.beta); replaces the beta list of a sweep.
        #[arg(long)]
        beta: Option<f64>,
        /// Pulse width of the demo experiments (tls.sigma).
        #[arg(long)]
        sigma: Option<f64>,
        /// Fixed grid point count (grid.points).
        #[arg(long = "grid-n")]
        grid_n: Option<usize>,
        /// Fixed grid half window (grid.half_window).
        #[arg(long = "grid-max")]
        grid_max: Option<f64>,
    },
    /// Check a config file without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

/// Reads and parses `path`, printing diagnostics. `Err` carries the exit code.
fn load(path: &Path) -> Result<(Config, bool), ExitCode> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    let (config, mut diagnostics) = config::parse(&text)
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    diagnostics.extend(config.check());
    for d in &diagnostics {
        eprintln!("{}: {d}", path.display());
    }
    let ok = diagnostics.iter().all(|d| d.severity == Severity::Warning);
    Ok((config, ok))
}

fn validate(path: &Path) -> ExitCode {
    match load(path) {
        Ok((_, true)) => ExitCode::SUCCESS,
        Ok((_, false)) => ExitCode::from(EXIT_USAGE),
        Err(code) => code,
    }
}

struct Overrides {
    out: Option<String>,
    beta: Option<f64>,
    sigma: Option<f64>,
    grid_n: Option<usize>,
    grid_max: Option<f64>,
}

fn apply(config: &mut Config, exp: Experiment, o: Overrides) -> Result<(), String> {
    if let Some(out) = o.out {
        config.run.out = out;
    }
    if let Some(beta) = o.beta {
        config.tls.beta = beta;
        match exp {
            Experiment::Fig1b => config.fig1b.betas = vec![beta],
            Experiment::LossCurves => config.loss_curves.betas = vec![beta],
            Experiment::Fig3 => config.fig3.betas = vec![beta],
            _ => {}
        }
    }
    if let Some(sigma) = o.sigma {
        if !exp.is_demo() {
            return Err(format!("--sigma applies to the demo experiments, not {}", exp.name()));
        }
        config.tls.sigma = Some(sigma);
    }
    if o.grid_n.is_some() {
        config.grid.points = o.grid_n;
    }
    if o.grid_max.is_some() {
        config.grid.half_window = o.grid_max;
    }
    Ok(())
}

fn manifest(exp: Experiment, config: &Config, outcome: &Outcome, files: &[String]) -> String {
    let mut m = String::new();
    let list: Vec<String> = files.iter().map(|f| format!("{f:?}")).collect();
    let grids: Vec<String> = outcome.grids.iter().map(|g| format!("{g:?}")).collect();
    let notes: Vec<String> = outcome.notes.iter().map(|n| format!("{n:?}")).collect();
    let spec = exp.grid_spec(config);
    writeln!(m, "# Reproduce with: tlsphot run {} --config <this file>", exp.name()).unwrap();
    writeln!(m, "[manifest]").unwrap();
    writeln!(m, "tool = \"tlsphot\"").unwrap();
    writeln!(m, "version = {:?}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(m, "experiment = {:?}", exp.name()).unwrap();
    writeln!(m, "files = [{}]", list.join(", ")).unwrap();
    writeln!(m, "grids = [{}]", grids.join(", ")).unwrap();
    writeln!(m, "min_points = {}", spec.min_points).unwrap();
    writeln!(m, "max_step_over_width = {:?}", tlsphot::spectral::MAX_STEP_FRACTION).unwrap();
    writeln!(m, "sigma_tolerance = {:?}", tlsphot::tls::SIGMA_TOL).unwrap();
    writeln!(m, "convergence_tolerance = {:?}", config.convergence.tolerance).unwrap();
    writeln!(m, "notes = [{}]", notes.join(", ")).unwrap();
    m.push('\n');
    m.push_str(&config.to_toml());
    m
}

fn run(exp: Experiment, config_path: Option<PathBuf>, overrides: Overrides) -> ExitCode {
    let mut config = match &config_path {
        Some(path) => match load(path) {
            Ok((c, true)) => c,
            Ok((_, false)) => return fail(EXIT_USAGE, "invalid config"),
            Err(code) => return code,
        },
        None => Config::default(),
    };
    if let Err(e) = apply(&mut config, exp, overrides) {
        return fail(EXIT_USAGE, e);
    }
    let diagnostics = config.check();
    for d in &diagnostics {
        eprintln!("{d}");
    }
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return fail(EXIT_USAGE, "invalid parameters");
    }

    let out = PathBuf::from(&config.run.out);
    if let Err(e) = fs::create_dir_all(&out) {
        return fail(EXIT_IO, format!("cannot create {}: {e}", out.display()));
    }
    let outcome = match experiments::run(exp, &config) {
        Ok(o) => o,
        Err(e) => return fail(EXIT_USAGE, format!("{} failed: {e}", exp.name())),
    };

    let tolerance = config.convergence.tolerance;
    let mut files = Vec::new();
    let mut pending: Vec<(String, String)> = Vec::new();
    for t in &outcome.tables {
        pending.push((t.file_name(), t.to_csv()));
        if let Some(plot) = &t.plot {
            pending.push((format!("{}.plot.py", t.name), output::plot_script(t, plot)));
        }
    }
    pending.push((
        format!("{}.convergence.csv", exp.name()),
        output::convergence_csv(&outcome.headlines, tolerance),
    ));
    files.extend(pending.iter().map(|(name, _)| name.clone()));
    let manifest_name = format!("{}.manifest.toml", exp.name());
    files.push(manifest_name.clone());
    pending.push((manifest_name, manifest(exp, &config, &outcome, &files)));
    for (name, contents) in &pending {
        match output::write(&out, name, contents) {
            Ok(path) => println!("wrote {}", path.display()),
            Err(e) => return fail(EXIT_IO, format!("cannot write {}: {e}", out.join(name).display())),
        }
    }

    let failed: Vec<_> = outcome
        .headlines
        .iter()
        .filter(|h| !output::converged(h, tolerance))
        .collect();
    if !failed.is_empty() {
        for h in &failed {
            eprintln!(
                "not converged: {} changes from {:?} to {:?} on the doubled grid",
                h.name, h.coarse, h.fine
            );
        }
        return fail(
            EXIT_CONVERGENCE,
            format!("{} of {} headline values exceed tolerance {tolerance:e}", failed.len(), outcome.headlines.len()),
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate { config } => validate(&config),
        Command::Run {
            experiment,
            config,
            out,
            beta,
            sigma,
            grid_n,
            grid_max,
        } => run(
            experiment,
            config,
            Overrides {
                out,
                beta,
                sigma,
                grid_n,
                grid_max,
            },
        ),
    }
}
