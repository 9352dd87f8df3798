use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use atlkf::oracle::{strategy_cap, Oracle};
use atlkf::{load_model, parse_formula, CheckResult, Checker, Formula, Model, PoAlgorithm, PoOptions, Semantics};
use clap::{Parser, Subcommand};

const HOLDS: u8 = 0;
const FAILS: u8 = 1;
const ERROR: u8 = 2;
const MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "atlkf",
    version,
    about = "Model checker for strategies under partial observability with fairness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check formulas against a model.
    Check(CheckArgs),
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Model file in AMF format.
    #[arg(long)]
    model: PathBuf,
    /// Formula to check; may be repeated.
    #[arg(long)]
    spec: Vec<String>,
    /// File with one formula per line (`#` starts a comment).
    #[arg(long)]
    spec_file: Option<PathBuf>,
    #[arg(long, default_value = "po", value_parser = parse_semantics)]
    semantics: Semantics,
    #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
    algorithm: PoAlgorithm,
    /// Also evaluate with the brute-force oracle and compare.
    #[arg(long)]
    oracle: bool,
    /// Print a winning uniform strategy for top-level `<<Γ>>` formulas.
    #[arg(long)]
    witness: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    verbose: bool,
    /// Only list reachable states among the satisfying states.
    #[arg(long)]
    reachable_only: bool,
    /// Evaluate strategies on N worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_semantics(s: &str) -> Result<Semantics, String> {
    s.parse()
}

fn parse_algorithm(s: &str) -> Result<PoAlgorithm, String> {
    s.parse()
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn formulas(args: &CheckArgs) -> Result<Vec<(String, Formula)>, String> {
    let mut texts: Vec<String> = args.spec.clone();
    if let Some(path) = &args.spec_file {
        for line in read(path)?.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                texts.push(line.to_string());
            }
        }
    }
    if texts.is_empty() {
        return Err("no formula given (use --spec or --spec-file)".into());
    }
    texts
        .into_iter()
        .map(|t| {
            parse_formula(&t)
                .map(|f| (t.clone(), f))
                .map_err(|e| format!("`{t}`: {e}"))
        })
        .collect()
}

enum OracleOutcome {
    Match,
    Mismatch(Vec<String>, Vec<String>),
    Skipped(String),
}

fn run_oracle(model: &Model, semantics: Semantics, formula: &Formula, result: &CheckResult) -> OracleOutcome {
    match Oracle::new(model, semantics, strategy_cap()).eval(formula) {
        Ok(sat) if sat == result.sat => OracleOutcome::Match,
        Ok(sat) => {
            let names = |s: &atlkf::StateSet| s.iter().map(|i| model.state_name(i)).collect();
            OracleOutcome::Mismatch(names(&result.sat), names(&sat))
        }
        Err(e) => OracleOutcome::Skipped(e.to_string()),
    }
}

fn print_human(result: &CheckResult, oracle: Option<&OracleOutcome>, verbose: bool) {
    println!("formula: {}", result.formula);
    println!("semantics: {} ({})", result.semantics, result.algorithm);
    println!(
        "holds in all initial states: {}",
        if result.holds_in_all_init { "yes" } else { "no" }
    );
    println!(
        "satisfying states ({}): {}",
        result.sat_states.len(),
        result.sat_states.join(" ")
    );
    for w in result.witness.iter().flatten() {
        println!("witness from {}:", w.init_state);
        for line in &w.strategy {
            println!("  {line}");
        }
    }
    if verbose {
        let d = &result.diagnostics;
        println!(
            "strategies enumerated: {}, branches pruned: {}, fixpoint iterations: {}",
            d.strategies_enumerated, d.branches_pruned, d.fixpoint_iterations
        );
    }
    match oracle {
        Some(OracleOutcome::Match) => println!("oracle: MATCH"),
        Some(OracleOutcome::Mismatch(engine, reference)) => {
            println!("oracle: MISMATCH");
            println!("  engine: {}", engine.join(" "));
            println!("  oracle: {}", reference.join(" "));
        }
        Some(OracleOutcome::Skipped(why)) => println!("oracle: skipped ({why})"),
        None => {}
    }
}

fn json(result: &CheckResult, oracle: Option<&OracleOutcome>) -> String {
    let mut value = serde_json::to_value(result).expect("results serialize");
    if let Some(outcome) = oracle {
        let tag = match outcome {
            OracleOutcome::Match => "match",
            OracleOutcome::Mismatch(..) => "mismatch",
            OracleOutcome::Skipped(_) => "skipped",
        };
        value["oracle"] = serde_json::Value::from(tag);
    }
    serde_json::to_string(&value).expect("values serialize")
}

fn check(args: &CheckArgs) -> Result<u8, String> {
    let start = Instant::now();
    let text = read(&args.model)?;
    let model = load_model(&text).map_err(|e| format!("{}:{e}", args.model.display()))?;
    for w in model.warnings() {
        eprintln!("warning: {w}");
    }
    let formulas = formulas(args)?;
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let options = PoOptions {
        algorithm: args.algorithm,
        parallel: args.threads.is_some_and(|n| n > 1),
        witness: args.witness,
    };
    let reachable = model.reachable();
    let mut checker = Checker::new(&model, args.semantics, options);
    let mut code = HOLDS;
    for (text, formula) in &formulas {
        let mut result = checker.check(formula).map_err(|e| format!("`{text}`: {e}"))?;
        if args.reachable_only {
            result.sat_states = result
                .sat
                .iter()
                .filter(|&s| reachable.contains(s))
                .map(|s| model.state_name(s))
                .collect();
        }
        let oracle = args
            .oracle
            .then(|| run_oracle(&model, args.semantics, formula, &result));
        if args.json {
            println!("{}", json(&result, oracle.as_ref()));
        } else {
            print_human(&result, oracle.as_ref(), args.verbose);
        }
        if let Some(OracleOutcome::Mismatch(..)) = oracle {
            code = MISMATCH;
        } else if !result.holds_in_all_init && code == HOLDS {
            code = FAILS;
        }
    }
    if args.verbose {
        eprintln!(
            "{} agents, {} states, {} reachable; {:.3}s",
            model.agents().len(),
            model.n_states(),
            reachable.count(),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR } else { HOLDS });
        }
    };
    let outcome = match &cli.command {
        Command::Check(args) => check(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(ERROR)
        }
    }
}
