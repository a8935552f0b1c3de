//! WebAssembly bindings for the static page in `www/`. Every entry point
//! returns JSON text: a report on success, `{"error": ...}` otherwise.

use famalg_core::laws::{find_law, SearchConfig, SearchMode};
use famalg_core::report::{check_statement_text, run_check, run_text, Report, Section};
use famalg_core::script::CheckStmt;
use wasm_bindgen::prelude::wasm_bindgen;

/// Upper bound on exhaustive universes from the page; keeps the tab responsive.
const PAGE_MAX_UNIVERSE: usize = 4;

fn error_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

fn report_json(report: &Report) -> String {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    v["text"] = report.to_text().into();
    v["exit_code"] = report.exit_code().into();
    v.to_string()
}

/// Parses and runs a script.
#[wasm_bindgen]
pub fn eval_script(text: &str) -> String {
    match run_text(text, &SearchConfig::sequential()) {
        Ok(report) => report_json(&report),
        Err(e) => error_json(e),
    }
}

/// Exhaustive check of one registered law.
#[wasm_bindgen]
pub fn check_law(law: &str, universe: usize, maxfam: usize) -> String {
    let law = match find_law(law) {
        Ok(l) => l.id.to_string(),
        Err(e) => return error_json(e),
    };
    if universe > PAGE_MAX_UNIVERSE {
        return error_json(format!("the page allows universes of at most {PAGE_MAX_UNIVERSE} elements"));
    }
    let stmt = CheckStmt { law, mode: SearchMode::Exhaustive, universe, maxfam, trials: None, seed: None };
    let section = match run_check(&stmt, &SearchConfig::sequential()) {
        Ok(result) => Section::Check { line: 0, statement: check_statement_text(&stmt), result },
        Err(e) => Section::Error { line: 0, message: e.to_string() },
    };
    report_json(&Report::single(section))
}

/// Runs a named model check on `group` (e.g. `Z6`), optionally restricted
/// to the subgroup generated by `generators` (e.g. `3` or `(0,1)`).
#[wasm_bindgen]
pub fn explore_model(group: &str, generators: &str, check: &str) -> String {
    let mut text = format!("group {group}\n");
    if !generators.trim().is_empty() {
        text.push_str(&format!("subgroup Q = <{generators}>\n"));
    }
    text.push_str(&format!("model {check}\n"));
    eval_script(&text)
}

/// Registered law ids, in registry order.
#[wasm_bindgen]
pub fn law_ids() -> String {
    let ids: Vec<&str> = famalg_core::laws::builtin_laws().iter().map(|l| l.id).collect();
    serde_json::to_string(&ids).expect("strings serialize")
}
