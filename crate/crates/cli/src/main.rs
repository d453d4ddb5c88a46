use clap::{Parser, Subcommand};
use gmml_cli::commands::{self, FigureOptions};
use gmml_cli::validate::{self, TOLERANCE_ENV};
use gmml_cli::{CliError, CliResult, GridSpec, Model, ModelConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Matrix Mittag-Leffler and GMML distributions: evaluation, simulation and figure data.
#[derive(Parser)]
#[command(name = "gmml", version)]
struct Cli {
    /// Model configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file, or output directory for `figure`; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Grid `min:max:count[:lin|log]` or a list `a,b,c`; repeat once per coordinate.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Vec<String>,
    /// Worker threads (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate E_{α,β}(z).
    Ml {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Points z; `--grid` works as well.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Density on a grid.
    Density,
    /// Distribution function on a grid (univariate models).
    Cdf,
    /// Laplace transform on a grid.
    Laplace,
    /// Simulate draws.
    Sample {
        #[arg(long)]
        n: usize,
    },
    /// Closed-form moments next to Monte Carlo estimates.
    Moments {
        /// Exponents, comma-separated per coordinate; repeatable.
        #[arg(long, required = true)]
        theta: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
    /// Project onto a direction w.
    Project {
        #[arg(long)]
        w: String,
    },
    /// Density grid, samples and summary for one of the worked figures.
    Figure {
        name: String,
        /// Draws in the samples file (default: the figure's size).
        #[arg(long)]
        n: Option<usize>,
        /// Draws behind the Monte Carlo correlation.
        #[arg(long, default_value_t = 100_000)]
        mc_n: usize,
    },
    /// Run the invariant suite.
    Validate {
        /// Restrict to one module.
        #[arg(long)]
        module: Option<String>,
    },
}

fn model(path: &Option<PathBuf>) -> CliResult<Model> {
    match path {
        Some(p) => ModelConfig::load(p)?.resolve(),
        None => Err(CliError::Usage("--config is required".into())),
    }
}

fn grids(specs: &[String]) -> CliResult<Vec<GridSpec>> {
    specs.iter().map(|s| s.parse()).collect()
}

fn numbers(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: '{v}'"))))
        .collect()
}

fn run(cli: Cli) -> CliResult<()> {
    let out = cli.out.as_deref();
    let emit = |text: String| gmml_cli::output::emit(out, &text);
    match cli.command {
        Command::Ml { alpha, beta, z } => {
            let z = match (z, cli.grid.first()) {
                (Some(z), _) => z.parse()?,
                (None, Some(g)) => g.parse()?,
                (None, None) => return Err(CliError::Usage("give --z or --grid".into())),
            };
            emit(commands::cmd_ml(alpha, beta, &z)?)
        }
        Command::Density => emit(commands::cmd_density(&model(&cli.config)?, &grids(&cli.grid)?)?),
        Command::Cdf => emit(commands::cmd_cdf(&model(&cli.config)?, &grids(&cli.grid)?)?),
        Command::Laplace => emit(commands::cmd_laplace(&model(&cli.config)?, &grids(&cli.grid)?)?),
        Command::Sample { n } => emit(commands::cmd_sample(&model(&cli.config)?, n, cli.seed)?),
        Command::Moments { theta, n } => {
            let thetas = theta.iter().map(|t| numbers(t)).collect::<CliResult<Vec<_>>>()?;
            emit(commands::cmd_moments(&model(&cli.config)?, &thetas, n, cli.seed)?)
        }
        Command::Project { w } => emit(commands::cmd_project(&model(&cli.config)?, &numbers(&w)?)?),
        Command::Figure { name, n, mc_n } => {
            let opts = FigureOptions { seed: cli.seed, n, mc_n, grid: grids(&cli.grid)? };
            let dir = out.unwrap_or(Path::new("."));
            let summary = commands::cmd_figure(&name, dir, &opts)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            Ok(())
        }
        Command::Validate { module } => {
            let env = std::env::var(TOLERANCE_ENV).ok();
            let (report, ok) = validate::cmd_validate(module.as_deref(), env.as_deref())?;
            emit(report)?;
            if ok {
                Ok(())
            } else {
                Err(validate::failure())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {t} threads: {e}"))),
        },
        None => run(cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gmml: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
