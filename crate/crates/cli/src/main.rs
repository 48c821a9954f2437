use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use maxpair_cli::commands::{self, CommandOutput};
use maxpair_cli::repro;
use maxpair_cli::resolve::resolve_group;
use maxpair_core::group::set_element_cap;

/// Finite p-groups, d-maximality and maximal (p,q)-pairs.
#[derive(Parser)]
#[command(name = "maxpair", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest group order the engine will enumerate.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries.
    Catalog,
    /// Order, d, exponent, class and series of a group.
    Info {
        group: String,
        #[arg(long)]
        p: Option<u64>,
        /// Also print the lower central and derived series.
        #[arg(long)]
        series: bool,
    },
    /// Decide whether a group is d-maximal.
    Dmax {
        group: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Check the maximal (p,q)-pair conditions.
    Pair {
        group: String,
        /// Catalog automorphism name or a literal like "b->b^2, c->c^2".
        #[arg(long)]
        aut: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: Option<u64>,
        /// Also run the structural assertions.
        #[arg(long)]
        structural: bool,
    },
    /// Find automorphisms of a given order acting as a scalar on the Frattini quotient.
    SearchAut {
        group: String,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        scalar: u64,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Build P x| C_{q^t} where q is the order of the automorphism.
    Semidirect {
        group: String,
        #[arg(long)]
        aut: String,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long)]
        p: Option<u64>,
        /// Write the built group as a JSON document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subgroup counts by order.
    Subgroups {
        group: String,
        #[arg(long)]
        p: Option<u64>,
        /// Dump every subgroup with generators and membership bits.
        #[arg(long)]
        full: bool,
    },
    /// Test two groups for isomorphism.
    Iso { left: String, right: String },
    /// Run the reproduction suite.
    Reproduce {
        /// Criterion ids or tags to run (repeatable).
        #[arg(long)]
        filter: Vec<String>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<CommandOutput> {
    Ok(match cli.command {
        Command::Catalog => commands::catalog(),
        Command::Info { group, p, series } => commands::info(&resolve_group(&group, p)?, series)?,
        Command::Dmax { group, p } => commands::dmax(&resolve_group(&group, p)?),
        Command::Pair {
            group,
            aut,
            q,
            p,
            structural,
        } => commands::pair(&resolve_group(&group, p)?, &aut, q, structural)?,
        Command::SearchAut {
            group,
            order,
            scalar,
            limit,
            p,
        } => commands::search_aut(&resolve_group(&group, p)?, order, scalar, limit)?,
        Command::Semidirect { group, aut, t, p, out } => {
            commands::semidirect(&resolve_group(&group, p)?, &aut, t, out.as_deref())?
        }
        Command::Subgroups { group, p, full } => commands::subgroups(&resolve_group(&group, p)?, full),
        Command::Iso { left, right } => commands::iso(&resolve_group(&left, None)?, &resolve_group(&right, None)?)?,
        Command::Reproduce { filter, out } => {
            let report = repro::reproduce(&filter);
            let json = report.to_json();
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&json)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            CommandOutput {
                text: report.summary_table(),
                success: report.overall_pass,
                json,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.cap {
        set_element_cap(cap);
    }
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json value"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.success { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
