//! `bvlift`: run convergence experiments on BV families and write CSV/SVG tables.
//!
//! Exit status: 0 when everything passed, 1 when a reproduction check failed,
//! 2 for configuration, I/O or evaluation errors.

mod config;
mod expr;
mod output;
mod reproduce;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::parse_config;
use crate::output::{to_csv, to_svg, Table};
use crate::reproduce::{reproduce, Overrides, IDS};
use crate::run::CliError;

#[derive(Parser)]
#[command(name = "bvlift", version, about = "Strict and area-strict convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a canned experiment and check its expected behaviour.
    Reproduce {
        /// One of: oscillation, jump-smoothing, shifted-jump, cantor, radial.
        id: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run the experiment described by a configuration file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Absolute tolerance of adaptive quadrature.
    #[arg(long)]
    quad_tol: Option<f64>,
    /// Depth of the Cantor construction.
    #[arg(long)]
    cantor_depth: Option<u32>,
    /// Largest family index.
    #[arg(long)]
    jmax: Option<u64>,
    /// Seed of the random test-function dictionary.
    #[arg(long)]
    seed: Option<u64>,
    /// Exponent of the L^p distance column.
    #[arg(long)]
    p: Option<f64>,
    /// Level of the tail-mass column.
    #[arg(long)]
    k: Option<f64>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            jmax: self.jmax,
            tolerance: self.quad_tol,
            cantor_depth: self.cantor_depth,
            seed: self.seed,
            p: self.p,
            k: self.k,
        }
    }

    /// Same range checks as the configuration file.
    fn validate(&self) -> Result<(), CliError> {
        let mut text = String::new();
        if let Some(j) = self.jmax {
            text += &format!("jmax = {j}\n");
        }
        text += "[columns]\n";
        if let Some(p) = self.p {
            text += &format!("p = {p}\n");
        }
        if let Some(k) = self.k {
            text += &format!("k = {k}\n");
        }
        text += "[quadrature]\n";
        if let Some(t) = self.quad_tol {
            text += &format!("tolerance = {t:e}\n");
        }
        if let Some(d) = self.cantor_depth {
            text += &format!("cantor_depth = {d}\n");
        }
        parse_config(&text).map(|_| ()).map_err(|errors| {
            CliError::Config(
                errors
                    .into_iter()
                    .map(|e| match e {
                        config::ConfigError::Parse { message, .. } => {
                            config::ConfigError::Parse { line: 0, message }
                        }
                        other => other,
                    })
                    .collect(),
            )
        })
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write_table(dir: &Path, stem: &str, title: &str, t: &Table) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    write(&dir.join(format!("{stem}.csv")), &to_csv(t))?;
    write(&dir.join(format!("{stem}.svg")), &to_svg(title, t))?;
    println!("wrote {}", dir.join(format!("{stem}.csv")).display());
    Ok(())
}

fn cmd_reproduce(id: &str, flags: &Flags) -> Result<bool, CliError> {
    if !IDS.contains(&id) {
        return Err(CliError::Config(vec![config::ConfigError::UnknownName {
            line: 0,
            name: format!("{id} (expected one of {})", IDS.join(", ")),
        }]));
    }
    flags.validate()?;
    let r = reproduce(id, &flags.overrides())?;
    let dir = flags.out.clone().unwrap_or_else(|| PathBuf::from("."));
    for (stem, title, t) in &r.tables {
        write_table(&dir, stem, title, t)?;
    }
    for n in &r.notes {
        println!("{n}");
    }
    for c in &r.checks {
        println!("{} {}: {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if !r.failures.is_empty() {
        return Err(CliError::Incomplete(r.failures));
    }
    Ok(r.checks.iter().all(|c| c.ok))
}

fn cmd_run(path: &Path, flags: &Flags) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let mut cfg = parse_config(&text).map_err(CliError::Config)?;
    flags.validate()?;
    flags.overrides().apply(&mut cfg);
    if let Some(out) = &flags.out {
        cfg.out_dir = out.clone();
    }
    for spec in &cfg.integrands {
        match spec {
            config::IntegrandSpec::Registry(name) => println!("integrand {name}"),
            config::IntegrandSpec::Expression { expr, .. } => {
                println!("integrand {} = {}", spec.name(), expr.source())
            }
        }
    }
    let out = run::run(&cfg)?;
    for (stem, t) in &out.tables {
        write_table(&cfg.out_dir, stem, stem, t)?;
    }
    if !out.failures.is_empty() {
        return Err(CliError::Incomplete(out.failures));
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Reproduce { id, flags } => cmd_reproduce(id, flags),
        Command::Run { config, flags } => cmd_run(config, flags),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
