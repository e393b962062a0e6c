use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use impactbandit_cli::commands::{self, DemoOptions, InstanceKind};
use impactbandit_cli::config::{parse_step, read_experiment};
use impactbandit_cli::{CliError, Result};

/// Simulate bandits whose rewards depend on the history of deployed strategies.
#[derive(Debug, Parser)]
#[command(name = "impactbandit", version, about)]
struct Cli {
    /// Experiment file; without a subcommand this runs it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads for replicated runs [default: available parallelism].
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Output directory (overrides the config's `output`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Master seed (overrides the config's `master_seed`).
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every policy of an experiment file and write regret curves.
    Run,
    /// List the meta arms of a simplex grid.
    Enumerate {
        #[arg(long, short = 'k')]
        arms: usize,
        /// Grid step, `1/n` or its decimal value.
        #[arg(long, short = 'e')]
        epsilon: String,
        /// Print only the count.
        #[arg(long)]
        count_only: bool,
    },
    /// Generate a reward model file.
    GenInstance {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, short = 'k', default_value_t = 2)]
        arms: usize,
        /// Bump height (`bump`) or instance parameter (`example1`).
        #[arg(long, short = 'e')]
        epsilon: Option<f64>,
    },
    /// Mean-following learners versus UCB learners on the piecewise-linear
    /// two-arm instance.
    NegativeDemo {
        #[arg(long, short = 't', default_value_t = 50_000)]
        horizon: u64,
        #[arg(long, default_value_t = 0.2)]
        epsilon_inst: f64,
        #[arg(long, short = 'r', default_value_t = 20)]
        runs: usize,
        /// Posterior draws used to estimate Thompson sampling's strategy.
        #[arg(long, default_value_t = 10_000)]
        prob_samples: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Bump,
    Example1,
    Gaussian,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::config("--jobs must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    pool.install(|| execute(cli))
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command.unwrap_or(Command::Run) {
        Command::Run => {
            let path = cli.config.ok_or_else(|| CliError::config("`run` needs --config PATH"))?;
            let mut config = read_experiment(&path)?;
            if let Some(seed) = cli.seed {
                config.master_seed = seed;
            }
            let out = cli.out.unwrap_or_else(|| config.output.clone());
            let result = commands::run_experiment(&config, &out)?;
            print!("{}", result.summary);
            for f in &result.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Enumerate { arms, epsilon, count_only } => {
            let levels = parse_step(&epsilon).ok_or_else(|| {
                CliError::Core(impactbandit::Error::InvalidDiscretization(epsilon.parse().unwrap_or(f64::NAN)))
            })?;
            print!("{}", commands::enumerate(arms, levels, count_only)?);
        }
        Command::GenInstance { kind, arms, epsilon } => {
            let kind = match kind {
                Kind::Bump => InstanceKind::Bump {
                    arms,
                    height: epsilon.ok_or_else(|| CliError::config("bump needs --epsilon (bump height)"))?,
                },
                Kind::Example1 => InstanceKind::Example1 { epsilon: epsilon.unwrap_or(0.2) },
                Kind::Gaussian => InstanceKind::Gaussian { arms },
            };
            let text = commands::gen_instance(kind, cli.seed.unwrap_or(0))?;
            match cli.out {
                Some(path) => std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?,
                None => print!("{text}"),
            }
        }
        Command::NegativeDemo { horizon, epsilon_inst, runs, prob_samples } => {
            if runs == 0 {
                return Err(CliError::config("--runs must be at least 1"));
            }
            let opts = DemoOptions { horizon, epsilon_inst, seed: cli.seed.unwrap_or(0), runs, prob_samples };
            let out = commands::negative_demo(&opts)?;
            print!("{}", out.summary);
            if let Some(dir) = cli.out {
                for f in commands::write_demo(&out, &dir)? {
                    println!("wrote {}", f.display());
                }
            }
        }
    }
    Ok(())
}
