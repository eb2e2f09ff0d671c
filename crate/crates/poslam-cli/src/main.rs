//! Command-line entry points for reduction, translation, classification,
//! property suites and the chain-overhead counters.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use poslam_core::harness::{
    bench_omega, check_diamond, reduction_graph, run_strategy, run_suite, termination_status,
    Calculus, OmegaVariant, Strategy, SuiteOpts, Trace,
};
use poslam_core::positive::{infer_type_positive, TypeError};
use poslam_core::syntax::{parse_term, print_canonical, NameGen, Term};
use poslam_core::translate::translate;
use poslam_core::vsc::{classify_usefulness, UsefulnessVerdict};

#[derive(Parser)]
#[command(
    name = "poslam",
    version,
    about = "A laboratory for the value substitution calculus and the positive lambda-calculus"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a term and print the trace.
    Reduce {
        /// The term, in surface syntax (\x. t, t u, t[x <- u]).
        term: String,
        /// vsc | vsc-core | opos | oxpos
        #[arg(long, default_value = "vsc")]
        calculus: String,
        /// lo | random:SEED
        #[arg(long, default_value = "lo")]
        strategy: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        /// Remove variables from values (suppresses e-var and gc-var).
        #[arg(long)]
        no_var_values: bool,
        /// text | json
        #[arg(long, default_value = "text")]
        trace: String,
    },
    /// Translate a VSC term into the explicit positive calculus.
    Translate { term: String },
    /// List the redexes of a term with usefulness verdicts.
    Classify {
        term: String,
        /// vsc | vsc-core | opos | oxpos
        #[arg(long, default_value = "vsc")]
        calculus: String,
    },
    /// Infer the principal simple type of a positive term.
    Typeof { term: String },
    /// Explore the reduction graph of a term.
    Graph {
        term: String,
        #[arg(long, default_value = "vsc")]
        calculus: String,
        /// Node cap; exceeding it truncates the graph.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        /// Emit the graph in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Run a property suite over enumerated and random corpora.
    Check {
        /// Suite name, or "all".
        #[arg(long)]
        suite: String,
        /// Corpus size bound (suite-specific default).
        #[arg(long)]
        size: Option<usize>,
        /// Random seed (default: POSLAM_SEED or 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Random corpus size (suite-specific default).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Count exponential steps of the looping combinator up to the n-th
    /// multiplicative step.
    BenchOmega {
        #[arg(long)]
        m_steps: usize,
        /// vars-as-values | no-var-values | oxpos
        #[arg(long, default_value = "vars-as-values")]
        variant: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_input(src: &str) -> Result<Term, String> {
    parse_term(src).map_err(|e| e.to_string())
}

fn parse_calculus(name: &str, no_var_values: bool) -> Result<Calculus, String> {
    let c: Calculus = name.parse()?;
    Ok(match c {
        Calculus::Vsc { .. } if no_var_values => Calculus::Vsc {
            vars_are_values: false,
        },
        other => other,
    })
}

fn env_seed() -> u64 {
    std::env::var("POSLAM_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Reduce {
            term,
            calculus,
            strategy,
            fuel,
            no_var_values,
            trace,
        } => {
            let t = parse_input(&term)?;
            let calculus = parse_calculus(&calculus, no_var_values)?;
            let mut strategy: Strategy = strategy.parse()?;
            if let Strategy::Random(0) = strategy {
                strategy = Strategy::Random(env_seed());
            }
            if !calculus.admits(&t) {
                return Err(format!("term is outside the {calculus} grammar"));
            }
            let tr = run_strategy(&t, calculus, &strategy, fuel).map_err(|e| e.to_string())?;
            match trace.as_str() {
                "text" => print_trace_text(&tr),
                "json" => print_trace_json(&tr),
                other => return Err(format!("unknown trace format '{other}' (text, json)")),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Translate { term } => {
            let t = parse_input(&term)?;
            let image = translate(&t, &mut NameGen::new());
            println!("{}", print_canonical(&image));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify { term, calculus } => {
            let t = parse_input(&term)?;
            let calculus = parse_calculus(&calculus, false)?;
            if !calculus.admits(&t) {
                return Err(format!("term is outside the {calculus} grammar"));
            }
            let redexes = calculus.enumerate(&t).map_err(|e| e.to_string())?;
            if redexes.is_empty() {
                println!("normal form");
            }
            for (i, r) in redexes.iter().enumerate() {
                let verdict = match classify_usefulness(&t, r) {
                    UsefulnessVerdict::Useful => " useful",
                    UsefulnessVerdict::NonUseful => " non-useful",
                    UsefulnessVerdict::Unclassified => "",
                };
                let reduct = calculus.apply(&t, r).map_err(|e| e.to_string())?;
                println!(
                    "{i}: [{}{verdict}] at {} -> {}",
                    r.label,
                    r.anchor,
                    print_canonical(&reduct)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Typeof { term } => {
            let t = parse_input(&term)?;
            match infer_type_positive(&t, &BTreeMap::new()) {
                Ok(ty) => {
                    println!("{ty}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(TypeError::Untypable(reason)) => {
                    println!("untypable: {reason}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::Graph {
            term,
            calculus,
            cap,
            dot,
        } => {
            let t = parse_input(&term)?;
            let calculus = parse_calculus(&calculus, false)?;
            if !calculus.admits(&t) {
                return Err(format!("term is outside the {calculus} grammar"));
            }
            let g = reduction_graph(&t, calculus, cap, cap.saturating_mul(10))
                .map_err(|e| e.to_string())?;
            if dot {
                print_dot(&g);
            } else {
                let normals = g.normal_nodes().count();
                let status = termination_status(&g);
                println!(
                    "{} nodes, {} normal, truncated: {}",
                    g.nodes.len(),
                    normals,
                    g.truncated
                );
                println!(
                    "weakly normalizing: {}, diverging: {}",
                    show_status(status.weakly_normalizing),
                    show_status(status.diverging)
                );
                if !g.truncated {
                    let rep = check_diamond(&g);
                    println!(
                        "diamond: {} ({} peaks checked)",
                        rep.diamond_holds(),
                        rep.peaks_checked
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check {
            suite,
            size,
            seed,
            count,
        } => {
            let opts = SuiteOpts {
                size,
                seed: seed.or(Some(env_seed())),
                count,
            };
            let names: Vec<&str> = if suite == "all" {
                poslam_core::harness::SUITE_NAMES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut failed = false;
            for name in names {
                let reports = run_suite(name, &opts)?;
                for r in &reports {
                    println!("{}", r.to_json());
                    eprintln!("{}", r.summary_line());
                    failed |= !r.pass();
                }
            }
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::BenchOmega { m_steps, variant } => {
            if m_steps == 0 {
                return Err("--m-steps must be at least 1".into());
            }
            let variant: OmegaVariant = variant.parse()?;
            let c = bench_omega(m_steps, variant);
            println!(
                "{}",
                json!({
                    "variant": format!("{variant:?}"),
                    "m_steps": c.m_steps,
                    "e_steps": c.e_steps,
                    "total_steps": c.total_steps,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn show_status(s: Option<bool>) -> String {
    match s {
        Some(b) => b.to_string(),
        None => "undecided (truncated)".into(),
    }
}

fn print_trace_text(tr: &Trace) {
    println!("{}", print_canonical(&tr.start));
    for step in &tr.steps {
        println!("-> [{}] {}", step.redex.label, print_canonical(&step.term));
    }
    if tr.fuel_exhausted {
        println!("(fuel exhausted; not a normal form)");
    } else if tr.steps.is_empty() {
        println!("(normal form)");
    } else {
        println!("(normal form reached in {} steps)", tr.len());
    }
    let counters: Vec<String> = tr
        .counters()
        .iter()
        .map(|(l, n)| format!("{l}: {n}"))
        .collect();
    if !counters.is_empty() {
        println!("counters: {}", counters.join(", "));
    }
}

fn print_trace_json(tr: &Trace) {
    println!("{}", json!({ "start": print_canonical(&tr.start) }));
    for (i, step) in tr.steps.iter().enumerate() {
        let verdict = match step.verdict {
            UsefulnessVerdict::Useful => Some("useful"),
            UsefulnessVerdict::NonUseful => Some("non-useful"),
            UsefulnessVerdict::Unclassified => None,
        };
        println!(
            "{}",
            json!({
                "index": i,
                "rule": step.redex.label.as_str(),
                "anchor": step.redex.anchor.to_string(),
                "occurrence": step.redex.occurrence.as_ref().map(|p| p.to_string()),
                "usefulness": verdict,
                "term": print_canonical(&step.term),
            })
        );
    }
    let counters: BTreeMap<String, usize> = tr
        .counters()
        .iter()
        .map(|(l, n)| (l.as_str().to_string(), *n))
        .collect();
    println!(
        "{}",
        json!({ "counters": counters, "fuel_exhausted": tr.fuel_exhausted })
    );
}

fn print_dot(g: &poslam_core::harness::ReductionGraph) {
    println!("digraph reduction {{");
    println!("  rankdir=TB;");
    for (i, node) in g.nodes.iter().enumerate() {
        let label = print_canonical(&node.term)
            .replace('\\', "\\\\")
            .replace('"', "\\\"");
        let shape = if node.normal { "doublecircle" } else { "box" };
        println!("  n{i} [label=\"{label}\", shape={shape}];");
    }
    for (i, node) in g.nodes.iter().enumerate() {
        for (j, label) in &node.succs {
            println!("  n{i} -> n{j} [label=\"{label}\"];");
        }
    }
    println!("}}");
}
