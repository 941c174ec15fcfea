//! `kthit`: command-line front end for the clique-hitting toolkit.
//!
//! Exit codes: 0 decided-YES/success, 1 decided-NO, 2 usage error,
//! 3 precondition or cap violation.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use kthit_core::corpus;
use kthit_core::decomposition::{bed_at_most, bed_value, compute_bed_root, non_kt_vertices};
use kthit_core::ekt::{conflict_positive, solve_ekt, ExtendedInstance, SolveBudget};
use kthit_core::error::CoreError;
use kthit_core::graph::{CliqueFamily, Graph, VertexSet};
use kthit_core::io::{parse_cnf, parse_graph, InstanceDocument};
use kthit_core::kernel::{kernelize, KernelCaps, KernelOutcome, ModulatorInstance};
use kthit_core::oracle::{self, OracleReport};
use kthit_core::reductions::{self, reduce_cnf_td, reduce_cnf_ved};
use kthit_core::selftest;
use kthit_core::blocking::verify_mmbs_bounds;

#[derive(Parser)]
#[command(
    name = "kthit",
    version,
    about = "clique hitting: decomposition, solving, kernelization, reductions"
)]
struct Cli {
    /// Seed driving every randomized corpus.
    #[arg(long, global = true, default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
    /// Emit machine-readable JSON where a table would be printed.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress progress chatter on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the elimination parameter is at most a bound, and
    /// report the exact value with a replayable trace.
    Bed(BedArgs),
    /// Compute a parameter-dropping root and its pending components.
    Root(BedArgs),
    /// Solve the annotated hitting problem under promised bounds.
    Solve(SolveArgs),
    /// Decide whether avoiding one vertex set forces an overpay in another.
    Conflict(ConflictArgs),
    /// Run the kernelization pipeline on a modulator instance.
    Kernelize(KernelizeArgs),
    /// Generate a hitting instance from a CNF formula.
    Reduce(ReduceArgs),
    /// Check the blocking-set bounds on a graph or an exhaustive corpus.
    VerifyBounds(VerifyBoundsArgs),
    /// Brute-force reference computations.
    Oracle(OracleArgs),
    /// Run the full acceptance suite and print a pass/fail table.
    Selftest,
}

#[derive(Args)]
struct BedArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    lambda: usize,
    graph: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    lambda: usize,
    #[arg(long, default_value_t = 0)]
    kappa: usize,
    graph: PathBuf,
    /// JSON array of vertex-id arrays, e.g. [[0,1],[4]].
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args)]
struct ConflictArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    lambda: usize,
    /// Comma-separated vertex ids of the avoided side.
    #[arg(long)]
    s1: String,
    /// Comma-separated vertex ids of the observed side.
    #[arg(long)]
    s2: String,
    graph: PathBuf,
}

#[derive(Args)]
struct KernelizeArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    lambda: usize,
    #[arg(long)]
    k: usize,
    /// Comma-separated modulator vertex ids (may be empty).
    #[arg(long, default_value = "")]
    modulator: String,
    #[arg(long, default_value_t = 16)]
    chunk_cap: usize,
    graph: PathBuf,
    /// Write `<out>.graph` and `<out>.json` instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionVariant {
    Ved,
    Td,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    variant: ReductionVariant,
    /// Pattern graph file.
    #[arg(long)]
    h: PathBuf,
    cnf: PathBuf,
    /// Also print a DOT rendering.
    #[arg(long)]
    dot: bool,
    /// Write `<out>.graph` and `<out>.json` instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyBoundsArgs {
    #[arg(long)]
    t: usize,
    /// Check every connected graph with up to this many vertices (one
    /// representative per isomorphism class).
    #[arg(long, conflicts_with = "graph")]
    exhaustive: Option<usize>,
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    op: OracleOp,
}

#[derive(Subcommand)]
enum OracleOp {
    /// Exact optimum of an annotated instance, with witness.
    OptEkt {
        #[arg(long)]
        t: usize,
        graph: PathBuf,
        #[arg(long)]
        family: Option<String>,
    },
    /// Definitional elimination parameter over all roots.
    Bed {
        #[arg(long)]
        t: usize,
        graph: PathBuf,
    },
    /// Definitional single-vertex elimination parameter for a pattern.
    Ved {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        induced: bool,
        graph: PathBuf,
    },
    /// Is the given family a blocking set of the instance?
    Blocking {
        #[arg(long)]
        t: usize,
        graph: PathBuf,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        b: String,
    },
    /// All inclusion-minimal blocking sets up to a size cap.
    MinimalBlocking {
        #[arg(long)]
        t: usize,
        graph: PathBuf,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
    /// Maximum minimal blocking set over clean instances.
    Mmbs {
        #[arg(long)]
        t: usize,
        graph: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err.downcast_ref::<CoreError>() {
                Some(CoreError::Parse { .. }) => 2,
                Some(_) => 3,
                None => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn read_graph(path: &PathBuf) -> anyhow::Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_graph(&text)?)
}

fn parse_ids(text: &str) -> anyhow::Result<VertexSet> {
    if text.trim().is_empty() {
        return Ok(VertexSet::new());
    }
    let ids: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()?;
    Ok(VertexSet::from_vec(ids))
}

fn parse_family(text: Option<&String>, g: &Graph, t: usize) -> anyhow::Result<CliqueFamily> {
    let Some(text) = text else {
        return Ok(CliqueFamily::empty());
    };
    let raw: Vec<Vec<usize>> = serde_json::from_str(text)?;
    let sets = raw.into_iter().map(VertexSet::from_vec).collect();
    Ok(CliqueFamily::validated(sets, g, t)?)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Bed(args) => {
            let g = read_graph(&args.graph)?;
            let at_most = bed_at_most(&g, args.t, args.lambda);
            let result = bed_value(&g, args.t, g.n().max(args.lambda))?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "t": args.t,
                    "lambda": args.lambda,
                    "at_most_lambda": at_most,
                    "value": result.value,
                    "trace": result.trace,
                }))?
            );
            Ok(ExitCode::from(if at_most { 0 } else { 1 }))
        }
        Command::Root(args) => {
            let g = read_graph(&args.graph)?;
            let free = non_kt_vertices(&g, args.t);
            let rest = g.vertex_set().difference(&free);
            let (sub, map) = g.induced(&rest);
            if sub.n() == 0 {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "free": free, "roots": [], "pending": {},
                    }))?
                );
                return Ok(ExitCode::SUCCESS);
            }
            let dec = compute_bed_root(&sub, args.t, args.lambda)?;
            let roots: Vec<VertexSet> = dec.roots.iter().map(|r| map.set_to_old(r)).collect();
            let pending: serde_json::Map<String, serde_json::Value> = dec
                .pending
                .iter()
                .map(|(&v, c)| {
                    (
                        map.to_old(v).to_string(),
                        serde_json::to_value(map.set_to_old(c)).unwrap(),
                    )
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "free": free,
                    "roots": roots,
                    "pending": pending,
                }))?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => {
            let g = read_graph(&args.graph)?;
            let family = parse_family(args.family.as_ref(), &g, args.t)?;
            let inst = ExtendedInstance::new(g, family, args.t)?;
            let s = solve_ekt(&inst, SolveBudget::new(args.lambda, args.kappa));
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "solution": s,
                    "size": s.len(),
                }))?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Conflict(args) => {
            let g = read_graph(&args.graph)?;
            let s1 = parse_ids(&args.s1)?;
            let s2 = parse_ids(&args.s2)?;
            let positive = conflict_positive(&g, &s1, &s2, args.t, args.lambda)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({ "conflict_positive": positive }))?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernelize(args) => {
            let g = read_graph(&args.graph)?;
            let x = parse_ids(&args.modulator)?;
            let inst = ModulatorInstance::new(g, x, args.k, args.t, args.lambda)?;
            let caps = KernelCaps {
                chunk_cap: args.chunk_cap,
            };
            let (outcome, trace) = kernelize(&inst, &caps)?;
            let (mut doc, decision) = match &outcome {
                KernelOutcome::Decided(answer) => {
                    let mut doc = InstanceDocument::new(
                        &inst.graph,
                        &inst.modulator,
                        inst.budget,
                        inst.t,
                        inst.lambda,
                    );
                    doc.metadata.insert("decision".into(), json!(answer));
                    (doc, Some(*answer))
                }
                KernelOutcome::Reduced(out) => (
                    InstanceDocument::new(&out.graph, &out.modulator, out.budget, out.t, out.lambda),
                    None,
                ),
            };
            doc.metadata
                .insert("trace".into(), serde_json::to_value(&trace)?);
            doc.metadata
                .insert("guarantee".into(), serde_json::to_value(&trace.guarantee)?);
            emit_instance(&doc, args.out.as_ref(), cli.quiet)?;
            Ok(match decision {
                Some(true) => ExitCode::SUCCESS,
                Some(false) => ExitCode::from(1),
                None => ExitCode::SUCCESS,
            })
        }
        Command::Reduce(args) => {
            let h = read_graph(&args.h)?;
            let cnf_text = std::fs::read_to_string(&args.cnf)?;
            let phi = parse_cnf(&cnf_text)?;
            let out = match args.variant {
                ReductionVariant::Ved => reduce_cnf_ved(&phi, &h)?,
                ReductionVariant::Td => reduce_cnf_td(&phi, &h)?,
            };
            let mut doc = InstanceDocument::new(&out.graph, &out.modulator, out.budget, 0, 0);
            doc.metadata.insert("budget".into(), json!(out.budget));
            doc.metadata
                .insert("role_tags".into(), serde_json::to_value(&out.role_tags)?);
            doc.metadata.insert(
                "disjoint_copies".into(),
                serde_json::to_value(&out.disjoint_copies)?,
            );
            doc.metadata.insert(
                "transversal_copies".into(),
                serde_json::to_value(&out.transversal_copies)?,
            );
            emit_instance(&doc, args.out.as_ref(), cli.quiet)?;
            if args.dot {
                println!("{}", reductions::to_dot(&out));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyBounds(args) => {
            let graphs: Vec<(String, Graph)> = if let Some(n) = args.exhaustive {
                corpus::connected_graphs_up_to_iso(n.min(7))
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| (format!("g{i}"), g))
                    .collect()
            } else if let Some(path) = &args.graph {
                vec![(path.display().to_string(), read_graph(path)?)]
            } else {
                anyhow::bail!("pass --exhaustive <n> or a graph file");
            };
            println!("graph,bed,td,mmbs,beta,td_bound,pass");
            let mut all_pass = true;
            for (name, g) in graphs {
                let r = verify_mmbs_bounds(&g, args.t)?;
                all_pass &= r.pass;
                let beta_str = match &r.beta_of_bed {
                    Some(b) => b.to_string(),
                    None => format!("tower({})", r.bed),
                };
                println!(
                    "{name},{},{},{},{beta_str},{},{}",
                    r.bed, r.treedepth, r.mmbs, r.td_bound, r.pass
                );
            }
            Ok(ExitCode::from(if all_pass { 0 } else { 1 }))
        }
        Command::Oracle(args) => run_oracle(args),
        Command::Selftest => {
            let reports = selftest::run_all(cli.seed);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                if !cli.quiet {
                    eprintln!("{}", selftest::context_line());
                }
                for r in &reports {
                    println!("{}", r.line());
                }
            }
            let all_pass = reports.iter().all(|r| r.pass);
            Ok(ExitCode::from(if all_pass { 0 } else { 1 }))
        }
    }
}

fn emit_instance(
    doc: &InstanceDocument,
    out: Option<&PathBuf>,
    quiet: bool,
) -> anyhow::Result<()> {
    match out {
        Some(prefix) => {
            let graph_path = prefix.with_extension("graph");
            let json_path = prefix.with_extension("json");
            std::fs::write(&graph_path, &doc.graph)?;
            std::fs::write(&json_path, doc.to_json())?;
            if !quiet {
                eprintln!("wrote {} and {}", graph_path.display(), json_path.display());
            }
        }
        None => println!("{}", doc.to_json()),
    }
    Ok(())
}

fn run_oracle(args: OracleArgs) -> anyhow::Result<ExitCode> {
    let t0 = Instant::now();
    let report = match args.op {
        OracleOp::OptEkt { t, graph, family } => {
            let g = read_graph(&graph)?;
            let fam = parse_family(family.as_ref(), &g, t)?;
            let (opt, witness) = oracle::brute_opt_ekt(&g, &fam, t)?;
            OracleReport::new(json!(opt), Some(serde_json::to_value(witness)?), t0.elapsed())
        }
        OracleOp::Bed { t, graph } => {
            let g = read_graph(&graph)?;
            let value = oracle::brute_bed_plus(&g, t)?;
            OracleReport::new(json!(value), None, t0.elapsed())
        }
        OracleOp::Ved { h, induced, graph } => {
            let pattern = read_graph(&h)?;
            let g = read_graph(&graph)?;
            let value = oracle::brute_ved_plus(&g, &pattern, induced)?;
            OracleReport::new(json!(value), None, t0.elapsed())
        }
        OracleOp::Blocking { t, graph, family, b } => {
            let g = read_graph(&graph)?;
            let fam = parse_family(family.as_ref(), &g, t)?;
            let block = parse_family(Some(&b), &g, t)?;
            let is_blocking = oracle::is_blocking_set(&g, &fam, &block, t)?;
            OracleReport::new(json!(is_blocking), None, t0.elapsed())
        }
        OracleOp::MinimalBlocking {
            t,
            graph,
            family,
            cap,
        } => {
            let g = read_graph(&graph)?;
            let fam = parse_family(family.as_ref(), &g, t)?;
            let all = oracle::minimal_blocking_sets(&g, &fam, t, cap)?;
            OracleReport::new(
                json!(all.len()),
                Some(serde_json::to_value(all)?),
                t0.elapsed(),
            )
        }
        OracleOp::Mmbs { t, graph } => {
            let g = read_graph(&graph)?;
            let r = oracle::mmbs_graph(&g, t)?;
            OracleReport::new(
                json!({ "value": r.value, "exact": r.exact }),
                r.witness
                    .map(|(f, b)| json!({ "clean_family": f, "blocking_set": b })),
                t0.elapsed(),
            )
        }
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}
