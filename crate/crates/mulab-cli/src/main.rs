use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use mulab_cli::config::Guards;
use mulab_cli::runners::{self, RunOutput};
use mulab_cli::{catalog, formats};

/// Workbench for minimal-model choice functions over finite set families:
/// build the reference chain instances, check algebraic and logical
/// conditions, saturate sequent systems, and brute-force implication rows.
#[derive(Parser)]
#[command(name = "mulab", version, about)]
struct Cli {
    /// Worker threads for search sweeps (env MULAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the chain instance for a given kappa and emit it as JSON.
    Construct {
        #[arg(long)]
        kappa: u32,
    },
    /// Re-check the five claims about the chain instance.
    Verify {
        #[arg(long)]
        kappa: u32,
    },
    /// Emit the three-element transitive-chain separation instance.
    FactInstance {
        #[arg(long, default_value_t = 1)]
        alpha: u32,
    },
    /// Evaluate the minimal-element function of a structure.
    Mu {
        #[arg(long)]
        structure: PathBuf,
        /// Comma-separated element labels.
        #[arg(long)]
        set: Option<String>,
        /// Tabulate over every member of this family instead.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Check conditions of a choice function.
    Check {
        /// Family file with a bundled choice table.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Structure file; the choice is mu induced on the family.
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        /// Condition name, e.g. mu-CUM or mu-cum(2).
        #[arg(long)]
        condition: Option<String>,
        /// Parameter for mu-cum / mu-cumt when not given inline.
        #[arg(long)]
        alpha: Option<u32>,
        /// Run the whole condition battery.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 2)]
        alpha_max: u32,
    },
    /// Closure predicates and the intersection closure of a family.
    Closure {
        #[arg(long)]
        family: PathBuf,
    },
    #[command(subcommand)]
    Logic(LogicCmd),
    #[command(subcommand)]
    Plausi(PlausiCmd),
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Subcommand)]
enum LogicCmd {
    /// Check a logical rule of the consequence relation induced by a
    /// structure over the model literals of an n-variable language.
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long)]
        rule: String,
    },
}

#[derive(Subcommand)]
enum PlausiCmd {
    /// Saturate an axiom file; optionally answer one derivability query.
    Close {
        #[arg(long)]
        axioms: PathBuf,
        /// Query sequent, e.g. "a |~ e".
        #[arg(long)]
        query: Option<String>,
        /// Comma-separated atom list pinning the language order.
        #[arg(long)]
        atoms: Option<String>,
    },
    /// Saturate axioms and check the closure against a model structure.
    ModelCheck {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        axioms: PathBuf,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Exhaustively test a catalog implication row at a ground size.
    Implication {
        /// Row id, or "all" for the whole catalog.
        #[arg(long)]
        row: String,
        #[arg(long, default_value_t = 3)]
        size: u32,
        /// Catalog file overriding the embedded one.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Suppress wall-time fields for byte-reproducible reports.
        #[arg(long)]
        no_timing: bool,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: &Cli, guards: &Guards) -> Result<RunOutput> {
    let threads = cli.threads.unwrap_or(guards.threads);
    match &cli.command {
        Command::Construct { kappa } => runners::construct(*kappa, guards),
        Command::Verify { kappa } => runners::verify(*kappa, guards),
        Command::FactInstance { alpha } => runners::fact_instance(*alpha),
        Command::Mu { structure, set, family } => {
            let sfile: formats::StructureFile = read_json(structure)?;
            let ffile: Option<formats::FamilyFile> =
                family.as_ref().map(|p| read_json(p)).transpose()?;
            runners::mu(&sfile, set.as_deref(), ffile.as_ref())
        }
        Command::Check { input, structure, family, condition, alpha, all, alpha_max } => {
            let ifile: Option<formats::FamilyFile> =
                input.as_ref().map(|p| read_json(p)).transpose()?;
            let sfile: Option<formats::StructureFile> =
                structure.as_ref().map(|p| read_json(p)).transpose()?;
            let ffile: Option<formats::FamilyFile> =
                family.as_ref().map(|p| read_json(p)).transpose()?;
            let choice = runners::load_choice(ifile.as_ref(), sfile.as_ref(), ffile.as_ref())?;
            runners::check(&choice, condition.as_deref(), *alpha, *all, *alpha_max, guards)
        }
        Command::Closure { family } => {
            let ffile: formats::FamilyFile = read_json(family)?;
            runners::closure(&ffile)
        }
        Command::Logic(LogicCmd::Check { structure, vars, rule }) => {
            let sfile: formats::StructureFile = read_json(structure)?;
            runners::logic_check(&sfile, *vars, rule)
        }
        Command::Plausi(PlausiCmd::Close { axioms, query, atoms }) => {
            let text = read_text(axioms)?;
            let atom_list: Option<Vec<String>> = atoms
                .as_ref()
                .map(|a| a.split(',').map(|s| s.trim().to_string()).collect());
            runners::plausi_close(&text, atom_list.as_deref(), query.as_deref())
        }
        Command::Plausi(PlausiCmd::ModelCheck { structure, axioms }) => {
            let sfile: formats::PlStructureFile = read_json(structure)?;
            let text = read_text(axioms)?;
            runners::plausi_model_check(&sfile, &text)
        }
        Command::Search(SearchCmd::Implication { row, size, catalog: catalog_path, no_timing }) => {
            let rows = match catalog_path {
                Some(p) => catalog::parse_catalog(&read_text(p)?)?,
                None => catalog::default_catalog(),
            };
            runners::search_implication(&rows, row, *size, threads, guards, !no_timing)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let guards = Guards::from_env();
    match run(&cli, &guards) {
        Ok(output) => {
            let rendered = serde_json::to_string_pretty(&output.json)
                .expect("reports serialize");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered + "\n") {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{rendered}"),
            }
            let _ = write!(std::io::stderr(), "{}", output.summary);
            ExitCode::from(output.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
