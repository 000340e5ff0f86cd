//! `idrt`: batch driver for the checker, the evaluator, the reduction graph,
//! the declarative derivation checker and the property suites.
//!
//! Exit status: 0 on success, 1 when a typing, equality, derivation or
//! property check fails, 2 on parse and usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use idrt_core::checker::{CheckReport, Checker};
use idrt_core::declarative::{check_derivation, derivation_depth, parse_script, rule_usage, SystemVariant};
use idrt_core::parse::{parse_context, parse_term};
use idrt_core::reduction::reduction_graph;
use idrt_core::tos::{Engine, DEFAULT_FUEL};
use idrt_core::{Context, Term};
use idrt_oracle::{run_selected, Corpus, EnumConfig, Property};

#[derive(Parser, Debug)]
#[command(name = "idrt", version, about = "LF with intensional dependent record types")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print the evaluator's derivation tree for every judgement.
    #[arg(long, global = true)]
    trace: bool,
    /// Emit structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Evaluation fuel (for `graph`, the node budget).
    #[arg(long, global = true, env = "IDRT_FUEL")]
    fuel: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every directive of a source file.
    Check { file: PathBuf },
    /// Normal form of an expression, or of every directive of a file.
    Normalize {
        /// A `.idrt` file or a term.
        input: String,
        /// Context for an expression, e.g. "T:Type, c:El(T)".
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Weak-head normal form of an expression.
    Whnf {
        expr: String,
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Check the equalities (and everything else) of a source file.
    Eq { file: PathBuf },
    /// Check a declarative derivation script.
    Derive {
        script: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Full)]
        variant: Variant,
    },
    /// Run the property suites over the bounded enumeration.
    Props {
        /// Properties to run (see `--list`).
        properties: Vec<String>,
        /// Run every property.
        #[arg(long)]
        all: bool,
        /// List the property names and exit.
        #[arg(long)]
        list: bool,
        /// Maximum term size.
        #[arg(long)]
        size: Option<usize>,
        /// Seed of the randomized supplement.
        #[arg(long)]
        seed: Option<u64>,
        /// Counterexamples shown per property in text mode.
        #[arg(long, default_value_t = 3)]
        shown: usize,
    },
    /// Untyped reduction graph of an expression.
    Graph { expr: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Variant {
    Full,
    Minus,
}

/// Outcome of `idrt derive --json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeriveOutcome {
    pub valid: bool,
    pub conclusion: String,
    pub depth: usize,
    pub rules: Vec<(String, u64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Outcome of `normalize` or `whnf` on an expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExprOutcome {
    pub context: Context,
    pub term: Term,
    pub report: CheckReport,
}

enum Failure {
    Usage(String),
    Rejected,
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Check { file } | Command::Eq { file } => check_file(g, file),
        Command::Normalize { input, context } => {
            let p = Path::new(input);
            if p.extension().is_some_and(|e| e == "idrt") && p.is_file() {
                check_file(g, p)
            } else {
                expr(g, input, context, false)
            }
        }
        Command::Whnf { expr: e, context } => expr(g, e, context, true),
        Command::Derive { script, variant } => derive(g, script, *variant),
        Command::Props { properties, all, list, size, seed, shown } => {
            if *list {
                for p in Property::ALL {
                    println!("{p}");
                }
                return Ok(());
            }
            props(g, properties, *all, *size, *seed, *shown)
        }
        Command::Graph { expr: e } => graph(g, e),
    }
}

fn checker(g: &Global) -> Checker {
    let engine = Engine::with_fuel(g.fuel.unwrap_or(DEFAULT_FUEL));
    Checker::with_engine(if g.trace { engine.traced() } else { engine })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Rejected)
    }
}

fn check_file(g: &Global, path: &Path) -> Outcome {
    let text = read(path)?;
    let report = checker(g)
        .check_source(&text)
        .map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))?;
    if g.json {
        json(&report);
    } else {
        for o in &report.outcomes {
            println!("{}:{}: {}", o.line, o.col, o.directive);
            println!("  {}", o.report);
            for t in &o.report.traces {
                print!("{}", indent(&t.to_text()));
            }
        }
    }
    for o in report.outcomes.iter().filter(|o| !o.report.accepted()) {
        eprintln!("{}:{}:{}: {}", path.display(), o.line, o.col, o.report);
    }
    verdict(report.accepted())
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}\n")).collect()
}

fn expr(g: &Global, text: &str, context: &str, whnf_only: bool) -> Outcome {
    let ctx = parse_context(context).map_err(|e| Failure::Usage(format!("context: {e}")))?;
    let term = parse_term(text).map_err(|e| Failure::Usage(format!("term: {e}")))?;
    let report = checker(g).infer(&ctx, &term);
    let accepted = report.accepted();
    if g.json {
        json(&ExprOutcome { context: ctx, term, report });
    } else if accepted {
        let shown = if whnf_only { report.whnf.as_ref() } else { report.nf.as_ref() };
        println!("{}", shown.expect("accepted reports carry forms"));
        println!("  : {}", report.inferred_kind_nf.as_ref().expect("accepted reports carry a kind"));
        for t in &report.traces {
            print!("{}", indent(&t.to_text()));
        }
    } else {
        eprintln!("{report}");
    }
    verdict(accepted)
}

fn derive(g: &Global, path: &Path, variant: Variant) -> Outcome {
    let text = read(path)?;
    let d = parse_script(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))?;
    let variant = match variant {
        Variant::Full => SystemVariant::FullIDRT,
        Variant::Minus => SystemVariant::IDRTMinus,
    };
    let result = check_derivation(&d, variant);
    let out = DeriveOutcome {
        valid: result.is_ok(),
        conclusion: d.conclusion.to_string(),
        depth: derivation_depth(&d),
        rules: rule_usage(&d).0.iter().map(|(r, n)| (r.name().to_string(), *n)).collect(),
        error: result.as_ref().err().map(ToString::to_string),
    };
    if g.json {
        json(&out);
    } else if let Some(e) = &out.error {
        eprintln!("invalid derivation: {e}");
    } else {
        println!("valid: {}", out.conclusion);
        println!("  depth {}", out.depth);
        for (r, n) in &out.rules {
            println!("  {r:<16} {n}");
        }
    }
    verdict(out.valid)
}

fn props(g: &Global, names: &[String], all: bool, size: Option<usize>, seed: Option<u64>, shown: usize) -> Outcome {
    let mut selected = Vec::new();
    for n in names {
        selected.push(Property::from_name(n).ok_or_else(|| Failure::Usage(format!("unknown property `{n}`")))?);
    }
    if !all && selected.is_empty() {
        return Err(Failure::Usage("name properties to run or pass --all".into()));
    }
    if all {
        selected.clear();
    }
    let mut cfg = EnumConfig::default();
    if let Some(s) = size {
        cfg.max_term_size = s;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate().map_err(Failure::Usage)?;
    let corpus = Corpus::build(&cfg);
    let mut report = run_selected(&corpus, &selected);
    if !all {
        // Coverage is only meaningful when everything ran.
        report.coverage.declarative.clear();
        report.coverage.evaluator.clear();
    }
    if g.json {
        json(&report);
    } else if all {
        print!("{}", report.to_text(shown));
    } else {
        print!("corpus: {} items, {} accepted\n", report.corpus_items, report.accepted_items);
        for r in &report.reports {
            print!("{}", r.to_text(shown));
        }
    }
    verdict(if all { report.passed() } else { report.reports.iter().all(|r| r.passed()) })
}

fn graph(g: &Global, text: &str) -> Outcome {
    let term = parse_term(text).map_err(|e| Failure::Usage(format!("term: {e}")))?;
    let fuel = g.fuel.map_or(4096, |f| f as usize);
    let graph = reduction_graph(&term, fuel);
    if g.json {
        json(&graph.to_serializable());
    } else {
        print!("{}", graph.to_dump());
    }
    Ok(())
}
