//! Script evaluation and the reports it produces.
//!
//! A report renders either as text for people or as JSON with keys in
//! lexicographic order. The JSON form parses back to an equal report.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    adjoin, ideal_from_family, ideal_star, join, join_ideals, semigroup_closure, star, star_ideal, PrincipalIdeal,
};
use crate::error::Result;
use crate::laws::{
    exhaustive_search_with, explore_star_closure_with, find_law, random_search_with, SearchConfig, SearchMode,
    SearchReport, StarClosureReport, WitnessOperand,
};
use crate::models::{run_model_check, subgroup_generated, GroupModel, ModelReport, Subgroup, WeightedMeasure};
use crate::script::{
    parse_script, print_expr, CheckStmt, Expr, ModelStmt, ParseError, Script, SetItem, Stmt, UniverseDecl,
};
use crate::set::{SetFamily, Subset, Universe};

pub const SCHEMA_VERSION: u32 = 1;

/// The value of an `eval` statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Family(SetFamily),
    Ideal(PrincipalIdeal),
}

impl Value {
    fn into_family(self) -> Result<SetFamily> {
        match self {
            Value::Family(f) => Ok(f),
            Value::Ideal(i) => i.materialize(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvalValue {
    Family { members: Vec<Vec<String>> },
    Ideal { apex: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Section {
    Eval { line: usize, expr: String, value: EvalValue, text: String, warnings: Vec<String> },
    Check { line: usize, statement: String, result: SearchReport },
    Explore { line: usize, result: StarClosureReport },
    Model { line: usize, result: ModelReport },
    Error { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub sections: Vec<Section>,
}

impl Default for Report {
    fn default() -> Self {
        Self { schema_version: SCHEMA_VERSION, sections: Vec::new() }
    }
}

impl Report {
    pub fn single(section: Section) -> Self {
        Self { schema_version: SCHEMA_VERSION, sections: vec![section] }
    }

    /// 0 when every expectation is met, 1 on a violated expectation, 2 when
    /// a statement could not be executed.
    pub fn exit_code(&self) -> i32 {
        let mut code = 0;
        for s in &self.sections {
            match s {
                Section::Error { .. } => return 2,
                Section::Check { result, .. } if !result.expectation_met => code = 1,
                Section::Model { result, .. } if !result.pass => code = 1,
                _ => {}
            }
        }
        code
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            section_text(s, &mut out);
        }
        let verdict = match self.exit_code() {
            0 => "all expectations met",
            1 => "expectation violated",
            _ => "error",
        };
        let _ = writeln!(out, "{verdict}");
        out
    }
}

fn family_text(lists: &[Vec<usize>]) -> String {
    let parts: Vec<String> = lists
        .iter()
        .map(|l| format!("{{{}}}", l.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{{{}}}", parts.join(","))
}

pub fn witness_text(w: &[WitnessOperand]) -> String {
    w.iter()
        .map(|o| match o {
            WitnessOperand::Family(l) | WitnessOperand::Semigroup(l) => family_text(l),
            WitnessOperand::IdealApex(e) => {
                format!("P({{{}}})", e.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn cases(n: u64) -> String {
    if n == 1 {
        "1 case".to_string()
    } else {
        format!("{n} cases")
    }
}

fn at(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!("line {line}: ")
    }
}

fn section_text(s: &Section, out: &mut String) {
    match s {
        Section::Eval { line, expr, text, warnings, .. } => {
            let _ = writeln!(out, "{}eval {expr} = {text}", at(*line));
            for w in warnings {
                let _ = writeln!(out, "  warning: {w}");
            }
        }
        Section::Check { line, statement, result } => {
            let outcome = match &result.witness {
                None => format!("pass ({})", cases(result.cases)),
                Some(w) => format!("witness at case {}: {}", result.cases, witness_text(w)),
            };
            let met = if result.expectation_met { "ok" } else { "VIOLATED" };
            let _ = writeln!(out, "{}{statement}: {outcome} [{met}]", at(*line));
        }
        Section::Explore { line, result } => {
            let _ = writeln!(
                out,
                "{}explore star-closure universe={} maxfam={}: {}",
                at(*line),
                result.universe_size,
                result.max_members,
                cases(result.cases)
            );
            for (class, n) in &result.tally {
                let example = result.examples.get(class).map(|w| witness_text(w)).unwrap_or_default();
                let name =
                    serde_json::to_value(class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                let _ = writeln!(out, "  {name}: {n} (least: {example})");
            }
            let _ = writeln!(
                out,
                "  union-closed operands: {} of {} equal",
                result.union_closed_equal, result.union_closed_cases
            );
        }
        Section::Model { line, result } => {
            let verdict = if result.pass { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{}model {} on {}: {verdict} ({}) {}",
                at(*line),
                result.check.name(),
                result.group,
                cases(result.cases),
                result.detail
            );
        }
        Section::Error { line, message } => {
            let _ = writeln!(out, "{}error: {message}", at(*line));
        }
    }
}

#[derive(Default)]
struct Context {
    universe: Option<Universe>,
    group: Option<GroupModel>,
    sets: HashMap<String, Subset>,
    families: HashMap<String, SetFamily>,
    subgroups: HashMap<String, Subgroup>,
    last_subgroup: Option<Subgroup>,
    weights: Option<WeightedMeasure>,
}

impl Context {
    fn universe(&self) -> &Universe {
        self.universe.as_ref().expect("the parser checks declarations")
    }

    fn set(&self, item: &SetItem) -> Subset {
        match item {
            SetItem::Name(n) => self.sets[n],
            SetItem::Literal(s) => *s,
        }
    }

    fn family(&self, items: &[SetItem]) -> SetFamily {
        SetFamily::new(self.universe().size(), items.iter().map(|i| self.set(i))).expect("same universe")
    }

    fn eval(&self, e: &Expr, warnings: &mut Vec<String>) -> Result<Value> {
        Ok(match e {
            Expr::Name(n) => match self.families.get(n) {
                Some(f) => Value::Family(f.clone()),
                None => Value::Family(SetFamily::new(self.universe().size(), [self.sets[n]])?),
            },
            Expr::Family(items) => Value::Family(self.family(items)),
            Expr::Closure(a) => Value::Family(semigroup_closure(&self.eval(a, warnings)?.into_family()?)?),
            Expr::Ideal(a) => match self.eval(a, warnings)? {
                Value::Family(f) => Value::Ideal(ideal_from_family(&f)?),
                ideal @ Value::Ideal(_) => {
                    warnings.push(format!(
                        "I({}) is redundant: the operand is already an ideal",
                        print_expr(a, self.universe())
                    ));
                    ideal
                }
            },
            Expr::Join(a, b) => match (self.eval(a, warnings)?, self.eval(b, warnings)?) {
                (Value::Ideal(x), Value::Ideal(y)) => Value::Ideal(join_ideals(&x, &y)?),
                (x, y) => Value::Family(join(&x.into_family()?, &y.into_family()?)?),
            },
            Expr::Star(a, b) => match (self.eval(a, warnings)?, self.eval(b, warnings)?) {
                (Value::Family(f), Value::Ideal(i)) => Value::Family(star_ideal(&f, &i)?.materialize()?),
                (Value::Ideal(i), Value::Family(f)) => Value::Family(ideal_star(&i, &f)?.materialize()?),
                (x, Value::Ideal(i)) => Value::Family(star_ideal(&x.into_family()?, &i)?.materialize()?),
                (x, y) => Value::Family(star(&x.into_family()?, &y.into_family()?)?),
            },
            Expr::Complement(a) => Value::Family(self.eval(a, warnings)?.into_family()?.complement_family()?),
            Expr::Adjoin(a, s) => Value::Family(adjoin(&self.eval(a, warnings)?.into_family()?, &self.set(s))?),
        })
    }

    fn declare(&mut self, stmt: &Stmt) -> Result<()> {
        match stmt {
            Stmt::Universe(UniverseDecl::Size(n)) => self.universe = Some(Universe::new(*n, None)?),
            Stmt::Universe(UniverseDecl::Labels(l)) => self.universe = Some(Universe::with_labels(l)?),
            Stmt::Group(moduli) => {
                let g = GroupModel::new(moduli)?;
                self.universe = Some(g.universe());
                self.group = Some(g);
            }
            Stmt::Set { name, value } => {
                self.sets.insert(name.clone(), *value);
            }
            Stmt::Family { name, items } => {
                let f = self.family(items);
                self.families.insert(name.clone(), f);
            }
            Stmt::Subgroup { name, generators } => {
                let g = self.group.as_ref().expect("the parser checks declarations");
                let q = subgroup_generated(g, generators)?;
                self.last_subgroup = Some(q.clone());
                self.subgroups.insert(name.clone(), q);
            }
            Stmt::Weights(w) => self.weights = Some(WeightedMeasure::new(w.clone())?),
            _ => unreachable!("only declarations are passed here"),
        }
        Ok(())
    }
}

fn value_of(v: &Value, u: &Universe) -> (EvalValue, String) {
    let labels = |s: Subset| s.elements().map(|i| u.labels()[i].clone()).collect::<Vec<_>>();
    match v {
        Value::Family(f) => (EvalValue::Family { members: f.members().map(labels).collect() }, u.format_family(f)),
        Value::Ideal(i) => (EvalValue::Ideal { apex: labels(i.apex()) }, format!("P({})", u.format_subset(&i.apex()))),
    }
}

/// Runs one `check` statement.
pub fn run_check(stmt: &CheckStmt, cfg: &SearchConfig) -> Result<SearchReport> {
    let law = find_law(&stmt.law)?;
    match stmt.mode {
        SearchMode::Random => random_search_with(
            law,
            stmt.universe,
            stmt.maxfam,
            stmt.trials.unwrap_or(crate::script::DEFAULT_TRIALS),
            stmt.seed.unwrap_or(crate::script::DEFAULT_SEED),
            cfg,
        ),
        _ => exhaustive_search_with(law, stmt.universe, stmt.maxfam, cfg),
    }
}

/// The canonical statement text of a check, as it appears in reports.
pub fn check_statement_text(stmt: &CheckStmt) -> String {
    let script = Script { statements: vec![crate::script::Statement { line: 1, stmt: Stmt::Check(stmt.clone()) }] };
    crate::script::print_script(&script).trim_end().to_string()
}

fn run_model(ctx: &Context, m: &ModelStmt) -> Result<ModelReport> {
    let g = ctx.group.as_ref().expect("the parser checks declarations");
    let q = match &m.subgroup {
        Some(name) => Some(&ctx.subgroups[name]),
        None => ctx.last_subgroup.as_ref(),
    };
    run_model_check(m.check, g, q, ctx.weights.as_ref())
}

/// Evaluates every statement in order. The first statement that fails stops
/// the run with an error section.
pub fn run_script(script: &Script, cfg: &SearchConfig) -> Report {
    let mut ctx = Context::default();
    let mut report = Report::default();
    for s in &script.statements {
        let line = s.line;
        let section: Result<Option<Section>> = match &s.stmt {
            Stmt::Eval(e) => {
                let mut warnings = Vec::new();
                ctx.eval(e, &mut warnings).map(|v| {
                    let (value, text) = value_of(&v, ctx.universe());
                    Some(Section::Eval { line, expr: print_expr(e, ctx.universe()), value, text, warnings })
                })
            }
            Stmt::Check(c) => run_check(c, cfg)
                .map(|result| Some(Section::Check { line, statement: check_statement_text(c), result })),
            Stmt::Explore { universe, maxfam } => {
                explore_star_closure_with(*universe, *maxfam, cfg).map(|result| Some(Section::Explore { line, result }))
            }
            Stmt::Model(m) => run_model(&ctx, m).map(|result| Some(Section::Model { line, result })),
            decl => ctx.declare(decl).map(|_| None),
        };
        match section {
            Ok(Some(sec)) => report.sections.push(sec),
            Ok(None) => {}
            Err(e) => {
                report.sections.push(Section::Error { line, message: e.to_string() });
                break;
            }
        }
    }
    report
}

/// Parses and runs `text`.
pub fn run_text(text: &str, cfg: &SearchConfig) -> std::result::Result<Report, ParseError> {
    Ok(run_script(&parse_script(text)?, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Report {
        run_text(text, &SearchConfig::default()).unwrap()
    }

    fn eval_texts(r: &Report) -> Vec<String> {
        r.sections
            .iter()
            .filter_map(|s| match s {
                Section::Eval { text, .. } => Some(text.clone()),
                _ => None,
            })
            .collect()
    }

    const FOUR_POINT: &str = "universe a b c d\nset A = {a,b}\nset B = {b,c}\nset D = {c,d}\n";

    #[test]
    fn four_point_evaluations() {
        let r = run(&format!(
            "{FOUR_POINT}eval S({{A}} v {{B,D}})\neval S({{B,D}})\neval S({{A}}) v S({{B,D}})\neval I({{A}})"
        ));
        assert_eq!(
            eval_texts(&r),
            vec!["{{a,b,c},{a,b,c,d}}", "{{b,c},{c,d},{b,c,d}}", "{{a,b,c},{a,b,c,d}}", "P({a,b})"]
        );
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn closure_of_union_closed_family_is_itself() {
        let r = run("universe a b\nfamily F = [{a}, {a,b}]\neval S(F)\neval F");
        let t = eval_texts(&r);
        assert_eq!(t[0], t[1]);
    }

    #[test]
    fn complementary_ideal_star() {
        let r = run("universe 0 1\nset P = {0}\nset X = {0,1}\nfamily S1 = [P, X]\nfamily S2 = [{1}, X]\neval (S1 v S2) * I(P)\neval I(P) * (S1 v S2)");
        assert_eq!(eval_texts(&r), vec!["{{1},{0,1}}", "{{0,1}}"]);
    }

    #[test]
    fn ideal_operations() {
        let r = run("universe 3\nset A = {0}\nset B = {1}\neval I(A) v I(B)\neval S(I(A))\neval I(I(A))\neval ~I(A)\neval I(A) + {2}\neval I(A) * I(B)");
        let t = eval_texts(&r);
        assert_eq!(t[0], "P({0,1})");
        assert_eq!(t[1], "{{},{0}}");
        assert_eq!(t[2], "P({0})");
        assert_eq!(t[3], "{{1,2},{0,1,2}}");
        assert_eq!(t[4], "{{},{0},{2}}");
        assert_eq!(t[5], "{{},{0},{1},{0,1}}");
        let Section::Eval { warnings, .. } = &r.sections[2] else { panic!() };
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn empty_operand_is_a_runtime_error() {
        let r = run("universe 2\neval {} v {{0}}\neval {{0}}");
        assert_eq!(r.sections.len(), 1);
        assert!(matches!(&r.sections[0], Section::Error { line: 2, .. }));
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn check_statements() {
        let r = run("check L2 exhaustive universe=3 maxfam=3\ncheck N1 exhaustive universe=2 maxfam=1");
        let Section::Check { result, statement, .. } = &r.sections[0] else { panic!() };
        assert_eq!(result.cases, 8464);
        assert_eq!(statement, "check L2 exhaustive universe=3 maxfam=3");
        let Section::Check { result, .. } = &r.sections[1] else { panic!() };
        assert_eq!(witness_text(result.witness.as_ref().unwrap()), "{{0}}, {{1}}");
        assert_eq!(r.exit_code(), 0);
        assert_eq!(run("check L2 exhaustive universe=9 maxfam=9").exit_code(), 2);
        assert_eq!(run("check L7 exhaustive universe=2 maxfam=1").exit_code(), 1);
    }

    #[test]
    fn model_statements() {
        let r = run("group Z6\nsubgroup Q = <3>\nmodel vitali-partition");
        let Section::Model { result, .. } = &r.sections[0] else { panic!() };
        assert_eq!((result.pass, result.cases), (true, 8));
        let r = run("group Z6\nmodel trivial-pair");
        let Section::Model { result, .. } = &r.sections[0] else { panic!() };
        assert_eq!(result.detail, "({0,3}, {0,2,4})");
        let r = run("group Z4\nmodel trivial-pair");
        let Section::Model { result, .. } = &r.sections[0] else { panic!() };
        assert_eq!(result.detail, "none");
        let r = run("group Z4\nweights 0 0 1 1\nmodel measure-lemma");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn json_round_trip_and_key_order() {
        let r = run(&format!(
            "{FOUR_POINT}eval S({{A}} v {{B,D}})\neval I({{A}})\ncheck N1 random universe=3 maxfam=2 trials=50 seed=4\nexplore star-closure universe=2 maxfam=1"
        ));
        let json = r.to_json();
        assert_eq!(Report::from_json(&json).unwrap(), r);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, vec!["schema_version", "sections"]);
        assert!(json.find("\"line\"").unwrap() < json.find("\"text\"").unwrap());
        let g = run("group Z6\nmodel invariance");
        assert_eq!(Report::from_json(&g.to_json()).unwrap(), g);
        assert!(r.to_text().contains("all expectations met"));
    }
}
