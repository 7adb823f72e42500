//! `qgraph`: isotropy verdicts, spectral lower bounds, and explicit colorings
//! for quadratic graphs, with JSON/CSV reports.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qgraph_core::Error),
}

impl CliError {
    /// 1: a checked assertion failed; 2: bad input; 3: a computational budget ran out.
    fn exit_code(&self) -> u8 {
        use qgraph_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                E::BoundViolation(_) | E::Verification(_) => 1,
                E::SearchExhausted(_)
                | E::QuadratureBudget { .. }
                | E::PrecisionExhausted(_)
                | E::FactorizationLimit(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qgraph", version, about = "Borel chromatic bounds for quadratic graphs over R and Q_p")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every sampler (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (overrides the config).
    #[arg(long, global = true, env = "QGRAPH_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the effective configuration as TOML.
    Config,
    /// Isotropy verdict and what it implies for the chromatic number.
    Classify {
        /// e.g. "place=Qp:3; diag=1,1" or "place=R; gram=[[1,1/2],[1/2,1]]"
        form: String,
    },
    /// Hoffman-type lower bound for the chopped hyperbola graph.
    Bound {
        /// R or Qp:<p>
        #[arg(long)]
        place: String,
        /// Chop parameter; repeat or comma-separate for a table.
        #[arg(long = "t", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// The Fourier transform of the chopped hyperbola measure at one frequency.
    Fourier {
        #[arg(long)]
        place: String,
        #[arg(long = "t")]
        t: f64,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "random")]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "random")]
        y: Option<String>,
        /// p-adic only: compare the exact value with the brute-force oracle.
        #[arg(long)]
        check: bool,
        /// p-adic only: draw (x, y) from the seed instead.
        #[arg(long)]
        random: bool,
    },
    /// Explicit finite colorings.
    #[command(subcommand)]
    Color(ColorCommand),
    /// Regular simplex clique certificate.
    Clique {
        #[arg(long)]
        n: usize,
    },
    /// The regular graph of 2x2 matrices.
    #[command(subcommand)]
    Regular(RegularCommand),
    /// Color counts of the digit coloring of x²+y² over Q_p for p ≡ 3 mod 4.
    Table {
        #[arg(long, default_value_t = 50)]
        max_p: u64,
        /// Annulus validation samples per prime (defaults to the config value).
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct DiffArgs {
    /// Color the graph of the sphere Q = 1 of this form.
    #[arg(long, conflicts_with = "hyperbola")]
    form: Option<String>,
    /// Color the chopped hyperbola graph instead (needs --place and --t).
    #[arg(long, requires_all = ["place", "t"])]
    hyperbola: bool,
    #[arg(long)]
    place: Option<String>,
    #[arg(long = "t")]
    t: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum ColorCommand {
    /// Build the coloring and report its parameters.
    Build(DiffArgs),
    /// Check propriety on sampled edges.
    Verify {
        #[command(flatten)]
        diff: DiffArgs,
        #[arg(long)]
        samples: Option<usize>,
        /// Negative control: shrink the modulus; the run passes if violations are found.
        #[arg(long)]
        undersized: bool,
    },
}

#[derive(Subcommand, Debug)]
enum RegularCommand {
    /// Check det(a1 + a2) = 4 - 4(x2-x1)(y2-y1) and the adjacency rule on random quadruples.
    Check {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Include this many individual records in the report.
        #[arg(long, default_value_t = 5)]
        show: usize,
    },
    /// C_n = sum over k of k! * binom(n, k)^2.
    Cn {
        #[arg(long)]
        n: u32,
    },
}

fn run(cli: Cli) -> Result<output::Outcome, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    cfg.validate()?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Config => {
            return Ok(output::Outcome { text: cfg.to_toml(), ok: true, failure: None });
        }
        Command::Classify { form } => commands::classify(&cfg, &form),
        Command::Bound { place, t } => commands::bound(&cfg, &place, &t),
        Command::Fourier { place, t, x, y, check, random } => {
            commands::fourier(&cfg, &place, t, x.as_deref(), y.as_deref(), check, random)
        }
        Command::Color(ColorCommand::Build(d)) => commands::color_build(&cfg, &d),
        Command::Color(ColorCommand::Verify { diff, samples, undersized }) => {
            commands::color_verify(&cfg, &diff, samples.unwrap_or(cfg.samples), undersized)
        }
        Command::Clique { n } => commands::clique(n),
        Command::Regular(RegularCommand::Check { samples, show }) => commands::regular_check(&cfg, samples, show),
        Command::Regular(RegularCommand::Cn { n }) => commands::regular_cn(n),
        Command::Table { max_p, samples } => commands::table(&cfg, max_p, samples.unwrap_or(cfg.annulus_samples)),
    }
    .and_then(|o| o.render(cfg.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                if let Some(why) = &out.failure {
                    eprintln!("check failed: {why}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
