use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use famalg_core::laws::{builtin_laws, find_law, SearchConfig, SearchMode};
use famalg_core::report::{check_statement_text, run_check, run_text, Report, Section};
use famalg_core::script::{CheckStmt, DEFAULT_MAXFAM, DEFAULT_SEED, DEFAULT_TRIALS, DEFAULT_UNIVERSE};

#[derive(Parser)]
#[command(name = "famalg", version, about = "Algebra of set families: scripts, law checks and group models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script file.
    Run {
        script: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a violation of a registered law.
    Check {
        law: String,
        #[arg(long, conflicts_with = "random")]
        exhaustive: bool,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = DEFAULT_UNIVERSE)]
        universe: usize,
        #[arg(long, default_value_t = DEFAULT_MAXFAM)]
        maxfam: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run a named check on a finite cyclic-product group.
    Model {
        /// vitali-partition, transversal-count, coset-union, trivial-pair,
        /// invariance or measure-lemma.
        check: String,
        /// Group such as Z6 or Z2xZ2. Defaults to Z6, or to Z<n> for n weights.
        #[arg(long)]
        group: Option<String>,
        /// Subgroup generators, e.g. `3` or `(0,1),(1,0)`.
        #[arg(long)]
        subgroup: Option<String>,
        /// Element weights, e.g. `0,1/2,1,2`.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// List the law registry.
    Laws {
        #[arg(long)]
        json: bool,
    },
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("famalg: {message}");
    ExitCode::from(2)
}

fn run_script_text(text: &str, json: bool) -> ExitCode {
    match run_text(text, &SearchConfig::default()) {
        Ok(report) => emit(&report, json),
        Err(e) => usage_error(e),
    }
}

fn model_script(check: &str, group: Option<&str>, subgroup: Option<&str>, weights: Option<&str>) -> String {
    let group = match (group, weights) {
        (Some(g), _) => g.to_string(),
        (None, Some(w)) => format!("Z{}", w.split(',').filter(|s| !s.trim().is_empty()).count()),
        (None, None) => "Z6".to_string(),
    };
    let mut text = format!("group {group}\n");
    if let Some(gens) = subgroup {
        text.push_str(&format!("subgroup Q = <{gens}>\n"));
    }
    if let Some(w) = weights {
        text.push_str(&format!("weights {w}\n"));
    }
    text.push_str(&format!("model {check}\n"));
    text
}

fn laws(json: bool) -> ExitCode {
    if json {
        let rows: Vec<serde_json::Value> = builtin_laws()
            .iter()
            .map(|l| {
                serde_json::json!({
                    "id": l.id,
                    "kind": l.kind,
                    "roles": l.roles,
                    "statement": l.statement,
                    "description": l.description,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows).expect("values serialize"));
    } else {
        for l in builtin_laws() {
            let roles: Vec<String> = l
                .roles
                .iter()
                .map(|r| serde_json::to_value(r).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
                .collect();
            let kind = serde_json::to_value(l.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            println!("{:<4} {:<9} [{}]  {}", l.id, kind, roles.join(", "), l.statement);
            println!("     {}", l.description);
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run { script, json } => match std::fs::read_to_string(&script) {
            Ok(text) => run_script_text(&text, json),
            Err(e) => usage_error(format!("cannot read {}: {e}", script.display())),
        },
        Command::Check { law, exhaustive: _, random, universe, maxfam, trials, seed, json } => {
            let law = match find_law(&law) {
                Ok(l) => l.id.to_string(),
                Err(e) => return usage_error(e),
            };
            let stmt = CheckStmt {
                law,
                mode: if random { SearchMode::Random } else { SearchMode::Exhaustive },
                universe,
                maxfam,
                trials: random.then_some(trials),
                seed: random.then_some(seed),
            };
            let section = match run_check(&stmt, &SearchConfig::default()) {
                Ok(result) => Section::Check { line: 0, statement: check_statement_text(&stmt), result },
                Err(e) => Section::Error { line: 0, message: e.to_string() },
            };
            emit(&Report::single(section), json)
        }
        Command::Model { check, group, subgroup, weights, json } => {
            run_script_text(&model_script(&check, group.as_deref(), subgroup.as_deref(), weights.as_deref()), json)
        }
        Command::Laws { json } => laws(json),
    }
}
