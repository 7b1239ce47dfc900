use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use divspline_cli::{run, CaseConfig, Command, ConfigError, RawConfig, VERSION};

/// Skeleton-stabilized divergence-conforming B-spline flow solver.
///
/// Flags override values read from `--config`; DIVSPLINE_OUT overrides `--out`.
#[derive(Debug, Parser)]
#[command(name = "divspline", version = VERSION)]
struct Cli {
    /// TOML file with flat keys (command, kPrime, mesh, re, delta, gamma, cNit, dt, tEnd, rhoInf, out, threads, seed)
    #[arg(long)]
    config: Option<PathBuf>,
    /// convergence | robustness | pressure-robustness | cavity | taylor-green-2d
    #[arg(long)]
    command: Option<String>,
    #[arg(long)]
    kprime: Option<usize>,
    /// Elements per direction; a list for convergence studies
    #[arg(long, value_delimiter = ',')]
    mesh: Option<Vec<usize>>,
    /// Reynolds number; a list for robustness sweeps and cavity runs
    #[arg(long, value_delimiter = ',')]
    re: Option<Vec<f64>>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    cnit: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long)]
    rho_inf: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores. Output is reproducible with 1.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Cli {
    fn into_config(self) -> Result<CaseConfig, ConfigError> {
        let file = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let command = self.command.as_deref().map(str::parse::<Command>).transpose()?;
        let flags = RawConfig {
            command,
            k_prime: self.kprime,
            mesh: self.mesh,
            re: self.re,
            delta: self.delta,
            gamma: self.gamma,
            c_nit: self.cnit,
            dt: self.dt,
            t_end: self.tend,
            rho_inf: self.rho_inf,
            out: std::env::var_os("DIVSPLINE_OUT").map(PathBuf::from).or(self.out),
            threads: self.threads,
            seed: self.seed,
        };
        CaseConfig::resolve(file.overridden_by(flags))
    }
}

fn main() -> ExitCode {
    let cfg = match Cli::parse().into_config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("divspline: stage `config` failed: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(summary) => {
            println!("{} finished in {:.2} s", cfg.command, summary.wall_time);
            for f in &summary.files {
                println!("  wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("divspline: {e}");
            ExitCode::FAILURE
        }
    }
}
