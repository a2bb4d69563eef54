use clap::{Args, Parser, Subcommand};
use fracvec_cli::{emit, failures, run_experiment, CliError, Experiment, ExperimentConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Runs fractional vector calculus experiments and writes result tables.
#[derive(Parser)]
#[command(name = "fracvec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Shared {
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated fractional orders
    #[arg(long)]
    alpha: Option<String>,
    /// Comma-separated node counts per axis
    #[arg(long)]
    grid: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Row pass threshold
    #[arg(long)]
    tolerance: Option<f64>,
    /// Any other config key, as key=value (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Experiment named by --experiment or the config file
    Run {
        #[arg(long)]
        experiment: Option<String>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Fundamental theorem residuals for the Caputo derivative
    Ftfc(Shared),
    /// Integral semigroup and Caputo composition gaps
    Semigroup(Shared),
    /// Curl-grad, div-curl and double-curl residuals
    Identities(Shared),
    /// Fractional Green theorem on a rectangle
    Green(Shared),
    /// Fractional Stokes theorem on a coordinate plane
    Stokes(Shared),
    /// Fractional divergence theorem on a box
    Gauss(Shared),
    /// Elementary-region integrals and indicator embedding
    Region(Shared),
    /// Fractional Maxwell system with calibrated RK4 steps
    Maxwell(Shared),
    /// One-dimensional fractional wave against the Wright kernel
    Wave1d(Shared),
    /// Caputo derivative from the kernel convolution
    Convolution(Shared),
    /// Fitted order of another experiment over the grids
    Convergence(Shared),
}

fn build(experiment: Option<Experiment>, named: Option<String>, shared: &Shared) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &shared.config {
        Some(path) => {
            let mut text = std::fs::read_to_string(path)?;
            if let Some(e) = experiment {
                // the subcommand fixes the experiment, whatever the file says
                text.push_str(&format!("\nexperiment = {e}\n"));
            }
            ExperimentConfig::parse(&text)?
        }
        None => match (experiment, &named) {
            (Some(e), _) => ExperimentConfig::new(e),
            (None, Some(n)) => ExperimentConfig::new(n.parse()?),
            (None, None) => return Err(CliError::Config { line: 0, msg: "run needs --config or --experiment".into() }),
        },
    };
    if let Some(n) = &named {
        cfg.experiment = n.parse()?;
    }
    let flags = [("alpha", &shared.alpha), ("grid", &shared.grid), ("format", &shared.format)];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    if let Some(t) = shared.tolerance {
        cfg.tolerance = t;
    }
    if let Some(o) = &shared.out {
        cfg.out = Some(o.clone());
    }
    for kv in &shared.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Value { key: "--set".into(), value: kv.clone() })?;
        cfg.set(k.trim(), v)?;
    }
    Ok(cfg)
}

fn execute(cfg: &ExperimentConfig) -> Result<Vec<String>, CliError> {
    let table = run_experiment(cfg)?;
    match &cfg.out {
        Some(path) => emit(&table, cfg.format, path)?,
        None => table.write(std::io::stdout().lock(), cfg.format)?,
    }
    Ok(failures(&table))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (experiment, named, shared) = match cli.command {
        Command::Run { experiment, shared } => (None, experiment, shared),
        Command::Ftfc(s) => (Some(Experiment::Ftfc), None, s),
        Command::Semigroup(s) => (Some(Experiment::Semigroup), None, s),
        Command::Identities(s) => (Some(Experiment::Identities), None, s),
        Command::Green(s) => (Some(Experiment::Green), None, s),
        Command::Stokes(s) => (Some(Experiment::Stokes), None, s),
        Command::Gauss(s) => (Some(Experiment::Gauss), None, s),
        Command::Region(s) => (Some(Experiment::Region), None, s),
        Command::Maxwell(s) => (Some(Experiment::Maxwell), None, s),
        Command::Wave1d(s) => (Some(Experiment::Wave1d), None, s),
        Command::Convolution(s) => (Some(Experiment::Convolution), None, s),
        Command::Convergence(s) => (Some(Experiment::Convergence), None, s),
    };
    let result = build(experiment, named, &shared).and_then(|cfg| execute(&cfg));
    match result {
        Ok(failed) if failed.is_empty() => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("{} row(s) outside tolerance:", failed.len());
            for f in failed {
                eprintln!("  FAIL {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
