use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use exitchoice_cli::commands::{self, DesignArgs, EstimateArgs, PredictArgs, SensitivityArgs, SimulateArgs};

#[derive(Parser)]
#[command(name = "exitchoice", version, about = "Exit-choice logit models: estimation, design, simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a logit model to long-format choice data.
    Estimate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Model preset when the config has no [model] section: base or first-choice.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Search the factorial of exit levels for a D-efficient design.
    Design {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Draw synthetic choices from known coefficients.
    Simulate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        scenarios: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Replicates per scenario.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        first_choice_share: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Choice probabilities for scenarios.
    Predict {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        scenarios: PathBuf,
        #[arg(long)]
        scenario_id: Option<String>,
        /// Evaluate with the first-choice interactions switched on.
        #[arg(long)]
        first_choice: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-exit probability curves.
    Sensitivity {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate { data, config, model, out, tol, max_iter } => {
            commands::cmd_estimate(&EstimateArgs { data, config, model, out, tol, max_iter })
        }
        Command::Design { config, out, size, seed } => commands::cmd_design(&DesignArgs { config, out, size, seed }),
        Command::Simulate { params, scenarios, config, n, seed, first_choice_share, out } => {
            commands::cmd_simulate(&SimulateArgs { params, scenarios, config, n, seed, first_choice_share, out })
        }
        Command::Predict { params, scenarios, scenario_id, first_choice, out } => {
            commands::cmd_predict(&PredictArgs { params, scenarios, scenario_id, first_choice, out })
        }
        Command::Sensitivity { params, config, out } => {
            commands::cmd_sensitivity(&SensitivityArgs { params, config, out })
        }
    };
    match result {
        Ok(outcome) => {
            commands::print_summary(&outcome);
            ExitCode::from(outcome.status as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
