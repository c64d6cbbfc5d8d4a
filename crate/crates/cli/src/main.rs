use clap::{Args, Parser, Subcommand};
use rbhier::hierarchy::HierarchyElement;
use rbhier::opring::{normalize, EngineError, NormalizeOptions, OperatorExpr};
use rbhier::syntax::json::{expr_from_json, function_to_dto, normal_form_to_json};
use rbhier::syntax::render::{expr_latex, expr_text, function_latex, function_text};
use rbhier::syntax::{parse_function, parse_operator};
use rbhier::verify::{
    apply, check_bialgebra_axioms, check_hierarchy_axioms, check_normalization, check_polynomial_embedding,
    check_rules, parse_strategy, probe_confluence, CheckResult, Report, TrialConfig,
};
use std::io::{Read, Write};
use std::process::ExitCode;

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

const EXIT_VERIFY: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "rbhier", version, about = "Normalize and apply integral operators with linear substitutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an operator expression to normal form.
    Normalize {
        /// Operator text, a JSON expression, or `-` for stdin.
        expr: String,
        #[command(flatten)]
        out: Output,
        /// Maximum rewrite steps.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// priority, leftmost, rightmost or random:<seed>.
        #[arg(long, default_value = "priority")]
        strategy: String,
    },
    /// Apply an operator expression to a function.
    Apply {
        expr: String,
        /// The function, e.g. `x1^2*exp(x2)`.
        #[arg(long)]
        to: String,
        #[command(flatten)]
        out: Output,
    },
    /// Run the axiom and rule suites.
    Verify {
        #[arg(long, conflicts_with_all = ["axioms", "all"])]
        rules: bool,
        #[arg(long, conflicts_with = "all")]
        axioms: bool,
        /// Axioms, rules and the normalization corpus (the default).
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        trial: TrialArgs,
        #[arg(long)]
        json: bool,
    },
    /// Normalize random words under several strategies and compare.
    Probe {
        #[command(flatten)]
        trial: TrialArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long, conflicts_with = "json")]
    latex: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TrialArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 4)]
    max_vars: usize,
    #[arg(long, default_value_t = 3)]
    max_deg: u32,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
}

impl TrialArgs {
    fn config(&self) -> TrialConfig {
        TrialConfig {
            seed: self.seed,
            trials: self.trials,
            max_vars: self.max_vars.max(1),
            max_degree: self.max_deg,
            budget: self.budget,
            ..TrialConfig::default()
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn read_arg(text: &str) -> Result<String, Failure> {
    if text != "-" {
        return Ok(text.to_string());
    }
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("reading stdin: {e}")))?;
    Ok(s)
}

fn read_expr(text: &str) -> Result<OperatorExpr, Failure> {
    let src = read_arg(text)?;
    if src.trim_start().starts_with('{') {
        expr_from_json(&src).map_err(|e| usage(e.to_string()))
    } else {
        parse_operator(&src).map_err(|e| usage(e.to_string()))
    }
}

fn read_function(text: &str) -> Result<HierarchyElement, Failure> {
    parse_function(&read_arg(text)?).map_err(|e| usage(e.to_string()))
}

fn run_normalize(expr: &str, out: &Output, budget: usize, strategy: &str) -> Result<(), Failure> {
    let e = read_expr(expr)?;
    let strategy = parse_strategy(strategy, 0).ok_or_else(|| usage(format!("unknown strategy {strategy:?}")))?;
    let opts = NormalizeOptions { max_steps: budget, strategy, check_measure: true };
    let nf = normalize(&e, &opts).map_err(|err| {
        let message = match &err {
            EngineError::BudgetExhausted { partial, .. } => format!("{err}; partial result: {}", expr_text(partial)),
            _ => err.to_string(),
        };
        Failure { code: EXIT_VERIFY, message }
    })?;
    if out.json {
        emit(&normal_form_to_json(&nf));
    } else if out.latex {
        emit(&expr_latex(&nf.expr));
    } else {
        emit(&expr_text(&nf.expr));
    }
    Ok(())
}

fn run_apply(expr: &str, to: &str, out: &Output) -> Result<(), Failure> {
    let e = read_expr(expr)?;
    let f = read_function(to)?;
    let g = apply(&e, &f);
    if out.json {
        emit(&serde_json::to_string_pretty(&function_to_dto(&g)).expect("dto serializes"));
    } else if out.latex {
        emit(&function_latex(&g));
    } else {
        emit(&function_text(&g));
    }
    Ok(())
}

fn print_results(results: &[CheckResult]) {
    for r in results {
        let status = if r.ok() { "ok" } else { "FAIL" };
        emit(&format!("{:<10} {:<32} {:>5}/{:<5} {status}", r.suite, r.name, r.pass, r.trials));
        for f in &r.failures {
            emit(&format!("    trial {}: {} on {}: {}", f.trial, f.instance, f.function, f.detail));
        }
    }
}

fn run_verify(rules: bool, axioms: bool, trial: &TrialArgs, json: bool) -> Result<(), Failure> {
    let cfg = trial.config();
    let (do_axioms, do_rules, do_corpus) = match (rules, axioms) {
        (true, _) => (false, true, false),
        (_, true) => (true, false, false),
        _ => (true, true, true),
    };
    let mut results = Vec::new();
    if do_axioms {
        results.extend(check_bialgebra_axioms());
        results.push(check_polynomial_embedding(6));
        results.extend(check_hierarchy_axioms(&cfg));
    }
    if do_rules {
        results.extend(check_rules(&cfg));
    }
    if do_corpus {
        results.extend(check_normalization(&cfg).results());
    }
    let report = Report::new(cfg, results);
    if json {
        emit(&report.to_json());
    } else {
        print_results(&report.results);
        emit(&format!("pass {} fail {}", report.summary.pass, report.summary.fail));
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY, message: format!("{} failing cases", report.summary.fail) })
    }
}

fn run_probe(trial: &TrialArgs, json: bool) -> Result<(), Failure> {
    let report = probe_confluence(&trial.config());
    if json {
        emit(&report.to_json());
    } else {
        emit(&format!(
            "agreement {}/{} ({:.1}%)",
            report.summary.pass,
            report.results.len(),
            100.0 * report.summary.agree_rate
        ));
        for w in &report.disagreements {
            emit(&format!("    disagree: {w}"));
        }
    }
    if report.all_agree() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_DISAGREE, message: format!("{} words disagree", report.summary.fail) })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Normalize { expr, out, budget, strategy } => run_normalize(expr, out, *budget, strategy),
        Command::Apply { expr, to, out } => run_apply(expr, to, out),
        Command::Verify { rules, axioms, all: _, trial, json } => run_verify(*rules, *axioms, trial, *json),
        Command::Probe { trial, json } => run_probe(trial, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rbhier: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
