//! `holonomy-lab`: structure-equation checks, curvature tables, evolution
//! flows and holonomy certificates from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for usage or input errors.

mod commands;
mod report;

use clap::{ArgGroup, Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "holonomy-lab", version, about = "Hypo structures, evolution flows and holonomy certificates")]
struct Cli {
    /// Also write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = holonomy_core::verify::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Parameter bindings, e.g. `--set r=1` or `--set a=0 b=0 a1=2`.
    #[arg(long = "set", value_name = "K=V", num_args = 1.., action = clap::ArgAction::Append)]
    pub set: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check d² = 0 on a structure file.
    Jacobi { file: PathBuf },
    /// Check the SU(2) algebra and the hypo (and hypo-contact) equations.
    HypoCheck { file: PathBuf },
    /// Ricci tensor for the orthonormal metric of a file or a family.
    #[command(group(ArgGroup::new("source").required(true).args(["file", "family"])))]
    Ricci {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Browse the catalog of hypo-contact families.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Integrate the hypo evolution of a family and print the trajectory.
    Evolve {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Certify SU(3) holonomy of the evolved metric.
    Holonomy {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Sample times, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1")]
        times: Vec<f64>,
        /// Residual tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Certify G2 holonomy of a Hitchin-flow solution.
    G2 {
        /// `K` or `Ktilde`.
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1")]
        times: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the full acceptance suite.
    VerifyPaper,
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// List the families and their parameters.
    List,
    /// Print a family in the structure-file format.
    Dump {
        id: String,
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HOLONOMY_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("HOLONOMY_LAB_THREADS must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err("HOLONOMY_LAB_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let start = std::time::Instant::now();
    let result = match cli.command {
        Command::Jacobi { file } => commands::jacobi(&file),
        Command::HypoCheck { file } => commands::hypo_check(&file),
        Command::Ricci { file, family, params } => commands::ricci(file.as_deref(), family.as_deref(), &params),
        Command::Catalog { action: CatalogAction::List } => commands::catalog_list(),
        Command::Catalog { action: CatalogAction::Dump { id, params } } => commands::catalog_dump(&id, &params),
        Command::Evolve { family, params, t_end, tol } => commands::evolve(&family, &params, t_end, tol),
        Command::Holonomy { family, params, times, tol } => commands::holonomy(&family, &params, &times, tol),
        Command::G2 { kind, params, times, tol } => commands::g2(&kind, &params, &times, tol),
        Command::VerifyPaper => commands::verify_paper(cli.seed),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    report.timings.entry("total".into()).or_insert(start.elapsed().as_secs_f64());
    print!("{}", report.to_text());
    if let Some(path) = &cli.json {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, json + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
