//! Command-line front end. Batch verbs over equation files and registries,
//! plus an interactive session.

use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::bisim::{canonicalize, refine_partition};
use crate::equations::Equations;
use crate::error::Result;
use crate::gen::random_system;
use crate::hyperset::{decorate, solve_equations, HyperSet};
use crate::modal::{char_formula_with_budget, parse_formula, satisfies, DEFAULT_BUDGET};
use crate::repl;
use crate::system::{System, SystemRepr};
use crate::vr::{classification_report, RegistryRepr};

#[derive(Parser)]
#[command(
    name = "hypersets",
    about = "Hypersets as pointed graphs, modal satisfaction, and virtual-reality event classification",
    version
)]
pub struct Cli {
    /// Emit machine-readable JSON instead of prose
    #[arg(long, global = true)]
    pub json: bool,

    /// Also print the canonical picture where applicable
    #[arg(long, global = true)]
    pub show_canonical: bool,

    /// Formula-node budget for characteristic formulas
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve every equation in FILE and print the denoted sets
    Solve { file: String },
    /// Decide whether two pictured sets are equal
    CheckEq { a: String, b: String },
    /// Decide wellfoundedness of a pictured set
    Wf { target: String },
    /// Print the bisimulation-minimal canonical form of a picture
    Minimize { target: String },
    /// Print the rank-RANK unfolding of a pictured set
    Unfold { target: String, rank: usize },
    /// Check whether a pictured set satisfies a modal formula
    Sat { target: String, formula: String },
    /// Print the rank-RANK characteristic formula of a pictured set
    Char { target: String, rank: usize },
    /// Decide finite-rank modal equivalence of two pictured sets
    ModalEq { a: String, b: String, rank: usize },
    /// Classify a JSON event registry as StrongVR or WeakVR
    Classify { registry: String },
    /// Export a picture in DOT format
    ExportDot { target: String },
    /// Time partition refinement on a seeded random system
    Bench {
        #[arg(long, default_value_t = 1000)]
        nodes: usize,
        /// Edges per node
        #[arg(long, default_value_t = 3.0)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Interactive session
    Repl,
}

/// `FILE` or `FILE:VAR`. A trailing `:VAR` is only split off when `FILE`
/// itself does not name an existing file.
fn split_target(target: &str) -> (&str, Option<&str>) {
    if Path::new(target).exists() {
        return (target, None);
    }
    match target.rsplit_once(':') {
        Some((path, var)) if !var.is_empty() => (path, Some(var)),
        _ => (target, None),
    }
}

fn load_system(target: &str) -> Result<System> {
    let (path, var) = split_target(target);
    let text = std::fs::read_to_string(path)?;
    let eqs = Equations::parse(&text)?;
    match var {
        Some(name) => eqs.system_for(name),
        None => eqs.system(),
    }
}

fn load_set(target: &str) -> Result<HyperSet> {
    Ok(decorate(&load_system(target)?))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { file } => {
            let text = std::fs::read_to_string(&file)?;
            let solved = solve_equations(&text)?;
            if cli.json {
                let bindings: Vec<_> = solved
                    .iter()
                    .map(|(name, set)| {
                        json!({
                            "name": name,
                            "value": set.to_string(),
                            "wellfounded": set.is_wellfounded(),
                            "canonical": SystemRepr::from(set.picture()),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&bindings)?);
            } else {
                for (name, set) in &solved {
                    println!("{name} = {set}");
                    if cli.show_canonical {
                        print!("{}", indent(&set.picture().render()));
                    }
                }
            }
        }
        Command::CheckEq { a, b } => {
            let equal = load_set(&a)? == load_set(&b)?;
            if cli.json {
                println!("{}", json!({ "equal": equal }));
            } else {
                println!("{}", if equal { "equal" } else { "not equal" });
            }
        }
        Command::Wf { target } => {
            let wf = load_set(&target)?.is_wellfounded();
            if cli.json {
                println!("{}", json!({ "wellfounded": wf }));
            } else {
                println!("{wf}");
            }
        }
        Command::Minimize { target } => {
            let canonical = canonicalize(&load_system(&target)?);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&SystemRepr::from(&canonical))?
                );
            } else {
                print!("{}", canonical.render());
            }
        }
        Command::Unfold { target, rank } => {
            let unfolded = load_set(&target)?.unfold(rank);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "value": unfolded.to_string(),
                        "canonical": SystemRepr::from(unfolded.picture()),
                    })
                );
            } else {
                println!("{unfolded}");
                if cli.show_canonical {
                    print!("{}", indent(&unfolded.picture().render()));
                }
            }
        }
        Command::Sat { target, formula } => {
            let set = load_set(&target)?;
            let f = parse_formula(&formula)?;
            let sat = satisfies(&set, &f);
            if cli.json {
                println!("{}", json!({ "satisfies": sat }));
            } else {
                println!("{sat}");
            }
        }
        Command::Char { target, rank } => {
            let set = load_set(&target)?;
            let phi = char_formula_with_budget(&set, rank, cli.budget)?;
            if cli.json {
                println!("{}", json!({ "formula": phi.to_string() }));
            } else {
                println!("{phi}");
            }
        }
        Command::ModalEq { a, b, rank } => {
            let sa = load_set(&a)?;
            let sb = load_set(&b)?;
            let eq = crate::modal::modally_equivalent_with_budget(&sa, &sb, rank, cli.budget)?;
            if cli.json {
                println!("{}", json!({ "equivalent": eq }));
            } else {
                println!("{eq}");
            }
        }
        Command::Classify { registry } => {
            let text = std::fs::read_to_string(&registry)?;
            let repr: RegistryRepr = serde_json::from_str(&text)?;
            let reg = repr.to_registry()?;
            let report = classification_report(&reg)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render_text());
            }
        }
        Command::ExportDot { target } => {
            let system = load_system(&target)?;
            if cli.show_canonical {
                print!("{}", canonicalize(&system).export_dot());
            } else {
                print!("{}", system.export_dot());
            }
        }
        Command::Bench {
            nodes,
            density,
            seed,
        } => {
            let edge_target = (nodes as f64 * density) as usize;
            let system = random_system(seed, nodes, edge_target, false);
            let start = Instant::now();
            let partition = refine_partition(&system);
            let millis = start.elapsed().as_millis();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "nodes": system.len(),
                        "edges": system.edge_count(),
                        "refine_ms": millis as u64,
                        "quotient_size": partition.block_count(),
                    })
                );
            } else {
                println!("{:>10} {:>10} {:>10} {:>13}", "nodes", "edges", "refine_ms", "quotient_size");
                println!(
                    "{:>10} {:>10} {:>10} {:>13}",
                    system.len(),
                    system.edge_count(),
                    millis,
                    partition.block_count()
                );
            }
        }
        Command::Repl => repl::run(&mut std::io::stdin().lock(), &mut std::io::stdout())?,
    }
    Ok(())
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|l| format!("  {l}\n"))
        .collect()
}

/// Entry point used by the binary: parse args, run, map errors to exit 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::parse_from(args);
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}
