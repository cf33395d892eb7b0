//! Command-line front end: computes cavity Casimir-Polder potentials,
//! detector excitation probabilities, condensate-averaged populations, and
//! truncation-fidelity maps from a JSON run configuration, and emits
//! deterministic CSV/JSON files.

mod commands;
mod config;
mod failure;
mod output;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{Ctx, Panel};
use failure::Failure;
use output::Format;

#[derive(Parser)]
#[command(
    name = "udw-cavity",
    about = "Casimir-Polder potentials and detector excitations in a 1D Dirichlet cavity",
    after_help = "Exit codes: 0 success+converged, 1 failed check, 2 config error, \
                  3 domain error, 4 convergence failure (values still emitted)."
)]
struct Cli {
    /// JSON run configuration; reads standard input when omitted or "-"
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for emitted files
    #[arg(long, global = true, default_value = ".")]
    output: PathBuf,

    /// csv writes <command>.csv plus a JSON sidecar; json writes one JSON file
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Casimir-Polder potential over the config grid
    Potential {
        /// Also emit the first- and second-order columns
        #[arg(long)]
        split: bool,
    },
    /// Excitation probability (time-averaged unless --sigma is given)
    Excite {
        /// Interaction window length; emits the fixed-window probability
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Casimir-Polder force (wall points are dropped with a warning)
    Force,
    /// Universal profile shared by potential and excitation probability
    Universal,
    /// Check the proportionality  E_CP ~ Omega (alpha - 1) / 2 * p_av
    Proportionality {
        /// Maximum tolerated relative deviation of the gridwise ratio
        #[arg(long, default_value_t = 0.2)]
        tolerance: f64,
    },
    /// Truncation-fidelity map over partial-sum length N and gap index K
    FidelityMap {
        #[arg(long, value_enum)]
        panel: Panel,
        /// Largest number of contributing (odd) terms
        #[arg(long, default_value_t = 25)]
        n_max: usize,
        /// Largest gap index K (detector gap = frequency of mode 2K+1)
        #[arg(long, default_value_t = 25)]
        k_max: usize,
        /// Report |a_N| / |S_N| instead of the signed ratio
        #[arg(long)]
        abs_fidelity: bool,
    },
    /// Condensate-averaged excited population per Thomas-Fermi radius
    Bec {
        /// Thomas-Fermi radius; repeatable, defaults to the config value
        #[arg(long = "r-tf")]
        r_tf: Vec<f64>,
    },
    /// Brute-force fixed-length sums of every observable (golden values)
    Oracle {
        /// Number of series terms, no early stopping
        #[arg(long)]
        terms: usize,
        /// Also emit the fixed-window excitation probability
        #[arg(long)]
        sigma: Option<f64>,
    },
}

fn read_config(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(std::fs::read_to_string(p).map_err(|e| {
            Failure::new(
                failure::EXIT_CONFIG,
                format!("config error: cannot read {}: {e}", p.display()),
            )
        })?),
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::new(failure::EXIT_CONFIG, format!("config error: {e}")))?;
            Ok(text)
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let text = read_config(&cli.config)?;
    let run_config = config::parse(&text)?;
    let ctx = Ctx {
        cfg: run_config.physics()?,
        policy: run_config.policy()?,
        run: &run_config,
        outdir: &cli.output,
        format: cli.format,
    };
    match &cli.command {
        Command::Potential { split } => commands::potential(&ctx, *split),
        Command::Excite { sigma } => commands::excite(&ctx, *sigma),
        Command::Force => commands::force(&ctx),
        Command::Universal => commands::universal(&ctx),
        Command::Proportionality { tolerance } => commands::proportionality(&ctx, *tolerance),
        Command::FidelityMap {
            panel,
            n_max,
            k_max,
            abs_fidelity,
        } => commands::fidelity_map_cmd(&ctx, *panel, *n_max, *k_max, *abs_fidelity),
        Command::Bec { r_tf } => commands::bec(&ctx, r_tf),
        Command::Oracle { terms, sigma } => commands::oracle(&ctx, *terms, *sigma),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", f.message);
            f.code
        }
    };
    std::process::exit(code);
}
