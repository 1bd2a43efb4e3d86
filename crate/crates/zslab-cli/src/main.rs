//! `zslab`: batch front end for the zero-sum search and verification engine.
//!
//! Exit codes: 0 = verdict holds / computation succeeded, 1 = a checked
//! property fails (counterexamples emitted), 2 = usage or parse error,
//! 3 = a search cap was exceeded (partial progress emitted).

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zslab_core::group::GroupSpec;
use zslab_core::report::CheckReport;
use zslab_core::search::{
    davenport, enumerate, eta, Constraint, EnumSpec, Mode, SearchOptions,
};
use zslab_core::sequence::Sequence;
use zslab_core::structure::{
    check_corollary, check_lemma_2_3_equivalence, check_property_b, check_property_c,
    classify_maximal,
};
use zslab_core::verification::{
    check_egz, check_exchange_lemmas, check_hamidoune, check_lemma_2_5,
    check_perturbation_lemmas, PerturbationLemma,
};
use zslab_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fast,
    Audit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstraintArg {
    Minimal,
    ZeroSumFree,
    NoShortZeroSum,
    NoLongZeroSum,
    All,
}

#[derive(Parser, Debug)]
#[command(
    name = "zslab",
    version,
    about = "Exhaustive search and verification for zero-sum sequences over rank-2 abelian groups"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "ZSLAB_THREADS")]
    threads: Option<usize>,

    /// Abort searches after this many DFS nodes.
    #[arg(long, global = true, env = "ZSLAB_NODE_CAP")]
    node_cap: Option<u64>,

    /// Audit mode disables all unproven pruning heuristics.
    #[arg(long, global = true, env = "ZSLAB_MODE", value_enum, default_value_t = ModeArg::Fast)]
    mode: ModeArg,

    #[arg(long, global = true, env = "ZSLAB_OUTPUT", value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,

    /// Seed for randomized modes; exhaustive commands ignore it.
    #[arg(long, global = true, env = "ZSLAB_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Longest length of a minimal zero-sum sequence, by exhaustive search.
    Davenport { group: String },
    /// Smallest L so that every sequence of length L has a zero-sum
    /// subsequence no longer than the group exponent.
    Eta { group: String },
    /// Enumerate constrained sequences of a fixed length.
    Enumerate {
        group: String,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = ConstraintArg::Minimal)]
        constraint: ConstraintArg,
        /// Length bound for the no-short/no-long zero-sum constraints.
        #[arg(long)]
        bound: Option<u32>,
        /// Collapse the output to one representative per automorphism orbit.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        up_to_aut: bool,
        /// Keep only sequences whose terms all have this order.
        #[arg(long)]
        order_filter: Option<u32>,
    },
    /// Match a maximal-length minimal zero-sum sequence against the two
    /// structural normal forms.
    Classify { group: String, sequence: String },
    /// Run one of the lemma/theorem checks.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Extremal minimal zero-sum sequences over C_n^2 have a term of
    /// multiplicity n-1.
    PropertyB {
        #[arg(long)]
        n: u32,
    },
    /// Sequences of length 3n-3 over C_n^2 without short zero-sums are
    /// powers of one sequence.
    PropertyC {
        #[arg(long)]
        n: u32,
    },
    /// The four equivalent structural statements over C_n^2.
    #[command(name = "lemma-2-3")]
    Lemma2_3 {
        #[arg(long)]
        n: u32,
    },
    /// Decomposition properties of extremal sequences under
    /// multiplication by m.
    #[command(name = "lemma-2-5")]
    Lemma2_5 {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Two-way match between extremal sequences and the normal forms.
    Corollary { group: String },
    /// The Erdős–Ginzburg–Ziv theorem and its extremal case.
    Egz {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        part: u8,
    },
    /// Lower bound on full-order partial-sum sets.
    Hamidoune {
        group: String,
        /// Maximum sequence length (default |G|+4).
        #[arg(long)]
        size_cap: Option<usize>,
    },
    /// The support/partial-sum exchange lemmas.
    Exchange {
        group: String,
        #[arg(long, default_value_t = 6)]
        len_cap: usize,
    },
    /// The Υ-perturbation lemmas over C_m^2.
    Perturbation {
        #[arg(long)]
        m: u32,
        /// Which lemma: 3.1, 3.2 or 3.3.
        #[arg(long)]
        which: String,
    },
    /// Normalized decompositions exist for all extremal sequences.
    #[command(name = "prop-4-2")]
    Prop4_2 {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::CapExceeded(_) => 3,
        _ => 2,
    }
}

fn emit_report(report: &CheckReport, output: OutputArg) -> u8 {
    match output {
        OutputArg::Json => println!("{}", report.to_json()),
        OutputArg::Csv => {
            println!("check,verdict,cases_examined,counterexamples,flagged,elapsed_ms");
            println!(
                "{},{},{},{},{},{}",
                report.check,
                if report.holds() { "holds" } else { "fails" },
                report.cases_examined,
                report.counterexamples.len(),
                report.flagged.len(),
                report.elapsed_ms
            );
        }
        OutputArg::Text => {
            println!(
                "{}: {} ({} cases, {} ms)",
                report.check,
                if report.holds() { "holds" } else { "FAILS" },
                report.cases_examined,
                report.elapsed_ms
            );
            for (k, v) in &report.params {
                println!("  {k} = {v}");
            }
            for c in &report.counterexamples {
                println!("  counterexample: {c}");
            }
            for f in &report.flagged {
                println!("  flagged: {f}");
            }
        }
    }
    u8::from(!report.holds())
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let opts = SearchOptions {
        mode: match cli.mode {
            ModeArg::Fast => Mode::Fast,
            ModeArg::Audit => Mode::Audit,
        },
        node_cap: cli.node_cap,
    };
    let output = cli.output;
    match &cli.command {
        Command::Davenport { group } => {
            let g = GroupSpec::parse(group)?;
            let r = davenport(g, opts)?;
            match output {
                OutputArg::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "closed_form": r.closed_form,
                        "group": g.to_string(),
                        "value": r.value,
                        "witnesses": r.witnesses.iter().map(|w| w.representative.to_string()).collect::<Vec<_>>(),
                    }))
                    .unwrap()
                ),
                OutputArg::Csv => {
                    println!("group,value,closed_form,witness_orbits");
                    println!("{g},{},{},{}", r.value, r.closed_form, r.witnesses.len());
                }
                OutputArg::Text => {
                    println!("davenport({g}) = {} (closed form {})", r.value, r.closed_form);
                    for w in &r.witnesses {
                        println!("  witness: {}", w.representative);
                    }
                }
            }
            Ok(0)
        }
        Command::Eta { group } => {
            let g = GroupSpec::parse(group)?;
            let r = eta(g, opts)?;
            match output {
                OutputArg::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "closed_form": r.closed_form,
                        "extremal_witnesses": r.extremal_witnesses.iter().map(|w| w.representative.to_string()).collect::<Vec<_>>(),
                        "group": g.to_string(),
                        "value": r.value,
                    }))
                    .unwrap()
                ),
                OutputArg::Csv => {
                    println!("group,value,closed_form,extremal_orbits");
                    println!(
                        "{g},{},{},{}",
                        r.value,
                        r.closed_form,
                        r.extremal_witnesses.len()
                    );
                }
                OutputArg::Text => {
                    println!("eta({g}) = {} (closed form {})", r.value, r.closed_form);
                    for w in &r.extremal_witnesses {
                        println!("  extremal: {}", w.representative);
                    }
                }
            }
            Ok(0)
        }
        Command::Enumerate {
            group,
            length,
            constraint,
            bound,
            up_to_aut,
            order_filter,
        } => {
            let g = GroupSpec::parse(group)?;
            let constraint = match constraint {
                ConstraintArg::Minimal => Constraint::MinimalZeroSum,
                ConstraintArg::ZeroSumFree => Constraint::ZeroSumFree,
                ConstraintArg::All => Constraint::All,
                ConstraintArg::NoShortZeroSum | ConstraintArg::NoLongZeroSum => {
                    let b = bound.ok_or_else(|| {
                        Error::Precondition(
                            "--bound is required for the no-short/no-long constraints".into(),
                        )
                    })?;
                    if *constraint == ConstraintArg::NoShortZeroSum {
                        Constraint::NoShortZeroSum(b)
                    } else {
                        Constraint::NoLongZeroSum(b)
                    }
                }
            };
            let orbits = enumerate(
                &EnumSpec {
                    group: g,
                    length: *length,
                    constraint,
                    up_to_aut: *up_to_aut,
                    order_filter: *order_filter,
                },
                opts,
            )?;
            match output {
                OutputArg::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "group": g.to_string(),
                        "length": length,
                        "orbits": orbits
                            .iter()
                            .map(|o| json!({
                                "orbit_size": o.orbit_size,
                                "representative": o.representative.to_string(),
                            }))
                            .collect::<Vec<_>>(),
                    }))
                    .unwrap()
                ),
                OutputArg::Csv => {
                    println!("representative,orbit_size");
                    for o in &orbits {
                        println!("\"{}\",{}", o.representative, o.orbit_size);
                    }
                }
                OutputArg::Text => {
                    println!("{} orbit(s)", orbits.len());
                    for o in &orbits {
                        println!("  {} (orbit size {})", o.representative, o.orbit_size);
                    }
                }
            }
            Ok(0)
        }
        Command::Classify { group, sequence } => {
            let g = GroupSpec::parse(group)?;
            let s = Sequence::parse(g, sequence)?;
            let c = classify_maximal(&s)?;
            match output {
                OutputArg::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "flagged": c.flagged.iter().map(|m| format!("{m:?}")).collect::<Vec<_>>(),
                        "group": g.to_string(),
                        "matches": c.matches.iter().map(|m| format!("{m:?}")).collect::<Vec<_>>(),
                        "sequence": s.to_string(),
                    }))
                    .unwrap()
                ),
                OutputArg::Csv => {
                    println!("sequence,matches,flagged");
                    println!("\"{s}\",{},{}", c.matches.len(), c.flagged.len());
                }
                OutputArg::Text => {
                    println!("{s}: {} match(es)", c.matches.len());
                    for m in &c.matches {
                        println!("  {m:?}");
                    }
                    for m in &c.flagged {
                        println!("  flagged: {m:?}");
                    }
                }
            }
            Ok(0)
        }
        Command::Check(cmd) => {
            let report = match cmd {
                CheckCommand::PropertyB { n } => check_property_b(*n, opts)?,
                CheckCommand::PropertyC { n } => check_property_c(*n, opts)?,
                CheckCommand::Lemma2_3 { n } => check_lemma_2_3_equivalence(*n, opts)?,
                CheckCommand::Lemma2_5 { m, n } => check_lemma_2_5(*m, *n, opts)?,
                CheckCommand::Corollary { group } => {
                    check_corollary(GroupSpec::parse(group)?, opts)?
                }
                CheckCommand::Egz { n, part } => check_egz(*n, *part)?,
                CheckCommand::Hamidoune { group, size_cap } => {
                    let g = GroupSpec::parse(group)?;
                    let cap = size_cap.unwrap_or(g.order() as usize + 4);
                    check_hamidoune(g, cap)?
                }
                CheckCommand::Exchange { group, len_cap } => {
                    check_exchange_lemmas(GroupSpec::parse(group)?, *len_cap)?
                }
                CheckCommand::Perturbation { m, which } => {
                    check_perturbation_lemmas(*m, PerturbationLemma::parse(which)?)?
                }
                CheckCommand::Prop4_2 { m, n } => {
                    zslab_core::decomposition::check_proposition_4_2(*m, *n, opts)?
                }
            };
            Ok(emit_report(&report, output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // ignore failure if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let _ = cli.seed; // reserved for randomized modes
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
