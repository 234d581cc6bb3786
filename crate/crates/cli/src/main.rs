use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rotwave_cli::config::{parse_config, parse_pairs};
use rotwave_cli::{figure_recipes, recipe, run_to_dir, write_error, RunError};

#[derive(Parser)]
#[command(
    name = "rotwave",
    version,
    about = "Rotor wave packets, revivals and clones"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set eta=0.5 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory
    #[arg(long, env = "ROTWAVE_OUT_DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Density on a (theta, phi) grid
    Density(RunArgs),
    /// Densities at a list of times
    Evolve(RunArgs),
    /// Density along one angle over time
    Carpet(RunArgs),
    /// |<psi(0)|psi(t)>|^2 over time
    Autocorr(RunArgs),
    /// Gauss-sum coefficients at a rational time
    Decompose(RunArgs),
    /// Clone/mutant classification of the fractional waves
    Clones(RunArgs),
    /// Symmetric-top densities on the (alpha, gamma) torus
    TopEvolve(RunArgs),
    /// Partial-wave probabilities of the circular and boson packets
    CompareBoson(RunArgs),
    /// Moments, uncertainty and time constants
    Report(RunArgs),
    /// Run a config file with its own task key
    Run(RunArgs),
    /// Run a figure recipe, or list them
    Recipe {
        /// Recipe name (fig1 ... fig11)
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long, env = "ROTWAVE_OUT_DIR")]
        out: Option<PathBuf>,
    },
}

fn fail(dir: Option<&PathBuf>, err: RunError) -> ExitCode {
    eprintln!("rotwave: {err}");
    if let Some(d) = dir {
        write_error(d, &err);
    }
    ExitCode::from(err.exit_code() as u8)
}

fn run_task(task: Option<&str>, args: RunArgs) -> ExitCode {
    let text = match &args.config {
        Some(p) => match fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                let err =
                    RunError::Validation(vec![format!("config: cannot read {}: {e}", p.display())]);
                return fail(args.out.as_ref(), err);
            }
        },
        None => String::new(),
    };
    let mut overrides = Vec::new();
    let mut errors = Vec::new();
    if let Some(t) = task {
        overrides.push(("task".to_string(), t.to_string()));
    }
    for s in &args.set {
        match parse_pairs(s) {
            Ok(p) if p.len() == 1 => overrides.extend(p),
            _ => errors.push(format!("--set: expected KEY=VALUE, got '{s}'")),
        }
    }
    let cfg = match parse_config(&text, &overrides) {
        Ok(c) if errors.is_empty() => c,
        Ok(_) => return fail(args.out.as_ref(), RunError::Validation(errors)),
        Err(e) => {
            errors.extend(e.0);
            return fail(args.out.as_ref(), RunError::Validation(errors));
        }
    };
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    match run_to_dir(&cfg, &dir) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(Some(&dir), e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Density(a) => run_task(Some("density"), a),
        Command::Evolve(a) => run_task(Some("evolve"), a),
        Command::Carpet(a) => run_task(Some("carpet"), a),
        Command::Autocorr(a) => run_task(Some("autocorr"), a),
        Command::Decompose(a) => run_task(Some("decompose"), a),
        Command::Clones(a) => run_task(Some("clones"), a),
        Command::TopEvolve(a) => run_task(Some("top-evolve"), a),
        Command::CompareBoson(a) => run_task(Some("compare-boson"), a),
        Command::Report(a) => run_task(Some("report"), a),
        Command::Run(a) => run_task(None, a),
        Command::Recipe { name, list, out } => {
            if list || name.is_none() {
                for r in figure_recipes() {
                    println!("{}\t{}", r.name, r.description);
                }
                return ExitCode::SUCCESS;
            }
            let name = name.unwrap_or_default();
            let base = out.unwrap_or_else(|| PathBuf::from("out")).join(&name);
            let Some(r) = recipe(&name) else {
                return fail(
                    None,
                    RunError::Validation(vec![format!("recipe: unknown recipe '{name}'")]),
                );
            };
            for (sub, cfg) in &r.runs {
                let dir = base.join(sub);
                match run_to_dir(cfg, &dir) {
                    Ok(files) => files.iter().for_each(|f| println!("{}", f.display())),
                    Err(e) => return fail(Some(&dir), e),
                }
            }
            ExitCode::SUCCESS
        }
    }
}
