//! The script language: lexer, parser with name resolution, and a canonical
//! printer.
//!
//! ```text
//! universe a b c d
//! set A = {a,b}
//! family F = [A, {b,c}]
//! eval S(F v {A}) * I(F)
//! check L2 exhaustive universe=3 maxfam=3
//! ```
//!
//! `v` binds tighter than `*`, both associate to the left; `~` (complement
//! of every member) binds looser than the postfix adjoin `F + {set}`.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;

use crate::laws::{find_law, SearchMode};
use crate::models::{GroupModel, ModelCheck};
use crate::set::{Subset, Universe};

pub const DEFAULT_UNIVERSE: usize = 3;
pub const DEFAULT_MAXFAM: usize = 2;
pub const DEFAULT_TRIALS: u64 = 1000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    UnknownIdentifier,
    Type,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at {line}:{column}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-' | '×')
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let chars: Vec<char> = raw.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let column = j + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                j += 1;
                continue;
            }
            if is_ident_start(c) {
                let start = j;
                while j < chars.len() && is_ident_continue(chars[j]) {
                    j += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..j].iter().collect()), line, column });
                continue;
            }
            if c.is_ascii_digit() {
                let start = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[start..j].iter().collect();
                let n = s.parse::<u64>().map_err(|_| ParseError {
                    kind: ParseErrorKind::Lexical,
                    message: format!("integer `{s}` is too large"),
                    line,
                    column,
                })?;
                out.push(Token { tok: Tok::Int(n), line, column });
                continue;
            }
            if "{}[]()<>,=*+~/".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line, column });
                j += 1;
                continue;
            }
            return Err(ParseError {
                kind: ParseErrorKind::Lexical,
                message: format!("unexpected character `{c}`"),
                line,
                column,
            });
        }
        out.push(Token { tok: Tok::Newline, line, column: chars.len() + 1 });
    }
    let (line, column) = out.last().map(|t| (t.line, t.column)).unwrap_or((1, 1));
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniverseDecl {
    Size(usize),
    Labels(Vec<String>),
}

/// A set reference inside a family literal or an adjoin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetItem {
    Name(String),
    Literal(Subset),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Closure(Box<Expr>),
    Ideal(Box<Expr>),
    Join(Box<Expr>, Box<Expr>),
    Star(Box<Expr>, Box<Expr>),
    Complement(Box<Expr>),
    Adjoin(Box<Expr>, SetItem),
    /// A declared family, or a declared set read as the family `{set}`.
    Name(String),
    Family(Vec<SetItem>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckStmt {
    pub law: String,
    pub mode: SearchMode,
    pub universe: usize,
    pub maxfam: usize,
    /// Present exactly for random checks.
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelStmt {
    pub check: ModelCheck,
    pub subgroup: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Universe(UniverseDecl),
    Set { name: String, value: Subset },
    Family { name: String, items: Vec<SetItem> },
    Group(Vec<usize>),
    Subgroup { name: String, generators: Vec<usize> },
    Weights(Vec<Rational64>),
    Eval(Expr),
    Check(CheckStmt),
    Explore { universe: usize, maxfam: usize },
    Model(ModelStmt),
}

/// A statement and the line it started on. Equality ignores the line.
#[derive(Debug, Clone)]
pub struct Statement {
    pub line: usize,
    pub stmt: Stmt,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.stmt == other.stmt
    }
}

impl Eq for Statement {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symbol {
    Set,
    Family,
    Subgroup,
}

#[derive(Default)]
struct Scope {
    universe: Option<Universe>,
    group: Option<GroupModel>,
    names: HashMap<String, Symbol>,
}

const RESERVED: &[&str] =
    &["v", "S", "I", "universe", "set", "family", "group", "subgroup", "weights", "eval", "check", "explore", "model"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    scope: Scope,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError { kind, message: message.into(), line: t.line, column: t.column }
    }

    fn unexpected(t: &Token, wanted: &str) -> ParseError {
        Self::error_at(t, ParseErrorKind::Syntax, format!("expected {wanted}, found {}", t.tok))
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.at_sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<Token> {
        if self.at_sym(c) {
            Ok(self.next())
        } else {
            Err(Self::unexpected(self.peek(), &format!("`{c}`")))
        }
    }

    fn ident(&mut self, wanted: &str) -> PResult<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(Self::unexpected(&t, wanted)),
        }
    }

    fn int(&mut self, wanted: &str) -> PResult<(u64, Token)> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok((n, t)),
            _ => Err(Self::unexpected(&t, wanted)),
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline | Tok::Eof => {
                self.next();
                Ok(())
            }
            _ => Err(Self::unexpected(self.peek(), "end of line")),
        }
    }

    fn universe(&self, t: &Token) -> PResult<&Universe> {
        self.scope
            .universe
            .as_ref()
            .ok_or_else(|| Self::error_at(t, ParseErrorKind::Type, "no universe or group has been declared"))
    }

    fn declare(&mut self, name: &str, t: &Token, symbol: Symbol) -> PResult<()> {
        if RESERVED.contains(&name) {
            return Err(Self::error_at(t, ParseErrorKind::Syntax, format!("`{name}` is reserved")));
        }
        if self.scope.names.insert(name.to_string(), symbol).is_some() {
            return Err(Self::error_at(t, ParseErrorKind::Type, format!("`{name}` is already declared")));
        }
        Ok(())
    }

    fn lookup(&self, name: &str, t: &Token) -> PResult<Symbol> {
        self.scope
            .names
            .get(name)
            .copied()
            .ok_or_else(|| Self::error_at(t, ParseErrorKind::UnknownIdentifier, format!("unknown identifier {name}")))
    }

    /// One element of a set literal: a label, a decimal index, or a group
    /// tuple `(a,b)`.
    fn element(&mut self) -> PResult<usize> {
        let t = self.peek().clone();
        let universe = self.universe(&t)?.clone();
        if self.at_sym('(') {
            let group = self
                .scope
                .group
                .clone()
                .ok_or_else(|| Self::error_at(&t, ParseErrorKind::Type, "tuple elements need a declared group"))?;
            self.next();
            let mut parts = vec![self.int("a component")?.0 as usize];
            while self.eat_sym(',') {
                parts.push(self.int("a component")?.0 as usize);
            }
            self.expect_sym(')')?;
            return group.encode(&parts).map_err(|e| Self::error_at(&t, ParseErrorKind::Type, e.to_string()));
        }
        let label = match self.next().tok {
            Tok::Ident(s) => s,
            Tok::Int(n) => n.to_string(),
            _ => return Err(Self::unexpected(&t, "an element")),
        };
        if let Some(i) = universe.index_of(&label) {
            return Ok(i);
        }
        match label.parse::<usize>() {
            Ok(i) if i < universe.size() => Ok(i),
            _ => Err(Self::error_at(&t, ParseErrorKind::UnknownIdentifier, format!("unknown element {label}"))),
        }
    }

    fn set_literal(&mut self) -> PResult<Subset> {
        let open = self.expect_sym('{')?;
        let size = self.universe(&open)?.size();
        let mut elems = Vec::new();
        if !self.at_sym('}') {
            elems.push(self.element()?);
            while self.eat_sym(',') {
                elems.push(self.element()?);
            }
        }
        self.expect_sym('}')?;
        Ok(Subset::from_indices(size, &elems).expect("elements are resolved in range"))
    }

    fn set_item(&mut self) -> PResult<SetItem> {
        if self.at_sym('{') {
            return Ok(SetItem::Literal(self.set_literal()?));
        }
        let (name, t) = self.ident("a set name or set literal")?;
        match self.lookup(&name, &t)? {
            Symbol::Set => Ok(SetItem::Name(name)),
            other => Err(Self::error_at(
                &t,
                ParseErrorKind::Type,
                format!("{name} is a {}, expected a set", symbol_name(other)),
            )),
        }
    }

    fn family_items(&mut self, close: char) -> PResult<Vec<SetItem>> {
        let mut items = Vec::new();
        if !self.at_sym(close) {
            items.push(self.set_item()?);
            while self.eat_sym(',') {
                items.push(self.set_item()?);
            }
        }
        self.expect_sym(close)?;
        Ok(items)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut left = self.term()?;
        while self.eat_sym('*') {
            left = Expr::Star(Box::new(left), Box::new(self.term()?));
        }
        Ok(left)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut left = self.unary()?;
        while self.peek().tok == Tok::Ident("v".into()) {
            self.next();
            left = Expr::Join(Box::new(left), Box::new(self.unary()?));
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_sym('~') {
            return Ok(Expr::Complement(Box::new(self.unary()?)));
        }
        let mut e = self.primary()?;
        while self.eat_sym('+') {
            e = Expr::Adjoin(Box::new(e), self.set_item()?);
        }
        Ok(e)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Sym('(') => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym(open @ ('{' | '[')) => {
                let close = if *open == '{' { '}' } else { ']' };
                self.universe(&t)?;
                self.next();
                Ok(Expr::Family(self.family_items(close)?))
            }
            Tok::Ident(name) if (name == "S" || name == "I") && self.tokens[self.pos + 1].tok == Tok::Sym('(') => {
                let closure = name == "S";
                self.next();
                self.next();
                let inner = Box::new(self.expr()?);
                self.expect_sym(')')?;
                Ok(if closure { Expr::Closure(inner) } else { Expr::Ideal(inner) })
            }
            Tok::Ident(name) => {
                let name = name.clone();
                self.next();
                match self.lookup(&name, &t)? {
                    Symbol::Set | Symbol::Family => Ok(Expr::Name(name)),
                    Symbol::Subgroup => Err(Self::error_at(
                        &t,
                        ParseErrorKind::Type,
                        format!("{name} is a subgroup, expected a set or family"),
                    )),
                }
            }
            _ => Err(Self::unexpected(&t, "an expression")),
        }
    }

    fn key_values(&mut self, allowed: &[&str]) -> PResult<HashMap<String, (u64, Token)>> {
        let mut out = HashMap::new();
        while let Tok::Ident(key) = &self.peek().tok {
            let key = key.clone();
            let t = self.next();
            if !allowed.contains(&key.as_str()) {
                return Err(Self::error_at(&t, ParseErrorKind::Syntax, format!("unexpected parameter `{key}`")));
            }
            self.expect_sym('=')?;
            let v = self.int("an integer")?;
            if out.insert(key.clone(), v).is_some() {
                return Err(Self::error_at(&t, ParseErrorKind::Syntax, format!("`{key}` given twice")));
            }
        }
        Ok(out)
    }

    fn statement(&mut self) -> PResult<Option<Statement>> {
        while self.peek().tok == Tok::Newline {
            self.next();
        }
        if self.peek().tok == Tok::Eof {
            return Ok(None);
        }
        let (keyword, kt) = self.ident("a statement keyword")?;
        let line = kt.line;
        let stmt = match keyword.as_str() {
            "universe" => self.universe_stmt(&kt)?,
            "group" => self.group_stmt(&kt)?,
            "set" => {
                let (name, t) = self.ident("a set name")?;
                self.expect_sym('=')?;
                let value = self.set_literal()?;
                self.declare(&name, &t, Symbol::Set)?;
                Stmt::Set { name, value }
            }
            "family" => {
                let (name, t) = self.ident("a family name")?;
                self.expect_sym('=')?;
                let open = self.expect_sym('[')?;
                self.universe(&open)?;
                let items = self.family_items(']')?;
                self.declare(&name, &t, Symbol::Family)?;
                Stmt::Family { name, items }
            }
            "subgroup" => {
                let (name, t) = self.ident("a subgroup name")?;
                if self.scope.group.is_none() {
                    return Err(Self::error_at(&kt, ParseErrorKind::Type, "subgroup needs a declared group"));
                }
                self.expect_sym('=')?;
                self.expect_sym('<')?;
                let mut generators = Vec::new();
                if !self.at_sym('>') {
                    generators.push(self.element()?);
                    while self.eat_sym(',') {
                        generators.push(self.element()?);
                    }
                }
                self.expect_sym('>')?;
                self.declare(&name, &t, Symbol::Subgroup)?;
                Stmt::Subgroup { name, generators }
            }
            "weights" => {
                let size = self.universe(&kt)?.size();
                let mut weights = Vec::new();
                while let Tok::Int(_) = self.peek().tok {
                    let (n, t) = self.int("a weight")?;
                    let d = if self.eat_sym('/') { self.int("a denominator")?.0 } else { 1 };
                    if d == 0 || n > i64::MAX as u64 || d > i64::MAX as u64 {
                        return Err(Self::error_at(&t, ParseErrorKind::Type, "invalid rational weight"));
                    }
                    weights.push(Rational64::new(n as i64, d as i64));
                    self.eat_sym(',');
                }
                if weights.len() != size {
                    return Err(Self::error_at(
                        &kt,
                        ParseErrorKind::Type,
                        format!("expected {size} weights, got {}", weights.len()),
                    ));
                }
                Stmt::Weights(weights)
            }
            "eval" => Stmt::Eval(self.expr()?),
            "check" => self.check_stmt()?,
            "explore" => {
                let (what, t) = self.ident("`star-closure`")?;
                if what != "star-closure" {
                    return Err(Self::error_at(&t, ParseErrorKind::Syntax, format!("unknown exploration `{what}`")));
                }
                let kv = self.key_values(&["universe", "maxfam"])?;
                let get = |k: &str, d: usize| kv.get(k).map(|v| v.0 as usize).unwrap_or(d);
                Stmt::Explore { universe: get("universe", DEFAULT_UNIVERSE), maxfam: get("maxfam", DEFAULT_MAXFAM) }
            }
            "model" => {
                if self.scope.group.is_none() {
                    return Err(Self::error_at(&kt, ParseErrorKind::Type, "model needs a declared group"));
                }
                let (name, t) = self.ident("a model check")?;
                let check = name.parse::<ModelCheck>().map_err(|_| {
                    Self::error_at(&t, ParseErrorKind::UnknownIdentifier, format!("unknown model check {name}"))
                })?;
                let mut subgroup = None;
                if self.peek().tok == Tok::Ident("subgroup".into()) {
                    self.next();
                    self.expect_sym('=')?;
                    let (q, qt) = self.ident("a subgroup name")?;
                    if self.lookup(&q, &qt)? != Symbol::Subgroup {
                        return Err(Self::error_at(&qt, ParseErrorKind::Type, format!("{q} is not a subgroup")));
                    }
                    subgroup = Some(q);
                }
                Stmt::Model(ModelStmt { check, subgroup })
            }
            other => return Err(Self::error_at(&kt, ParseErrorKind::Syntax, format!("unknown statement `{other}`"))),
        };
        self.end_of_statement()?;
        Ok(Some(Statement { line, stmt }))
    }

    fn check_active(&self, kt: &Token) -> PResult<()> {
        if self.scope.universe.is_some() {
            return Err(Self::error_at(kt, ParseErrorKind::Type, "a universe or group is already declared"));
        }
        Ok(())
    }

    fn universe_stmt(&mut self, kt: &Token) -> PResult<Stmt> {
        self.check_active(kt)?;
        let mut labels = Vec::new();
        let mut size = None;
        loop {
            match self.peek().tok.clone() {
                Tok::Ident(s) => labels.push(s),
                Tok::Int(n) => {
                    if labels.is_empty() && size.is_none() {
                        size = Some(n);
                    } else {
                        labels.push(n.to_string());
                    }
                }
                Tok::Sym(',') => {}
                _ => break,
            }
            self.next();
        }
        let decl = match (size, labels.is_empty()) {
            (Some(n), true) => UniverseDecl::Size(n as usize),
            (Some(n), false) => {
                labels.insert(0, n.to_string());
                UniverseDecl::Labels(labels)
            }
            (None, false) => UniverseDecl::Labels(labels),
            (None, true) => return Err(Self::unexpected(self.peek(), "element names or a size")),
        };
        let universe = match &decl {
            UniverseDecl::Size(n) => Universe::new(*n, None),
            UniverseDecl::Labels(l) => Universe::with_labels(l),
        }
        .map_err(|e| Self::error_at(kt, ParseErrorKind::Type, e.to_string()))?;
        self.scope.universe = Some(universe);
        Ok(Stmt::Universe(decl))
    }

    fn group_stmt(&mut self, kt: &Token) -> PResult<Stmt> {
        self.check_active(kt)?;
        let (spec, t) = self.ident("a group such as Z6 or Z2xZ2")?;
        let group: GroupModel =
            spec.parse().map_err(|e: crate::Error| Self::error_at(&t, ParseErrorKind::Type, e.to_string()))?;
        self.scope.universe = Some(group.universe());
        let moduli = group.moduli().to_vec();
        self.scope.group = Some(group);
        Ok(Stmt::Group(moduli))
    }

    fn check_stmt(&mut self) -> PResult<Stmt> {
        let t = self.peek().clone();
        let law = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(Self::unexpected(&t, "a law id")),
        };
        self.next();
        let law = find_law(&law)
            .map_err(|_| Self::error_at(&t, ParseErrorKind::UnknownIdentifier, format!("unknown law {law}")))?
            .id
            .to_string();
        let mode = match &self.peek().tok {
            Tok::Ident(m) if m == "exhaustive" => SearchMode::Exhaustive,
            Tok::Ident(m) if m == "random" => SearchMode::Random,
            _ => return Err(Self::unexpected(self.peek(), "`exhaustive` or `random`")),
        };
        self.next();
        let allowed: &[&str] = match mode {
            SearchMode::Random => &["universe", "maxfam", "trials", "seed"],
            _ => &["universe", "maxfam"],
        };
        let kv = self.key_values(allowed)?;
        let get = |k: &str, d: u64| kv.get(k).map(|v| v.0).unwrap_or(d);
        let random = mode == SearchMode::Random;
        Ok(Stmt::Check(CheckStmt {
            law,
            mode,
            universe: get("universe", DEFAULT_UNIVERSE as u64) as usize,
            maxfam: get("maxfam", DEFAULT_MAXFAM as u64) as usize,
            trials: random.then(|| get("trials", DEFAULT_TRIALS)),
            seed: random.then(|| get("seed", DEFAULT_SEED)),
        }))
    }
}

fn symbol_name(s: Symbol) -> &'static str {
    match s {
        Symbol::Set => "set",
        Symbol::Family => "family",
        Symbol::Subgroup => "subgroup",
    }
}

/// Parses a script. UTF-8, LF or CRLF line endings, `#` comments.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut p = Parser { tokens: lex(text)?, pos: 0, scope: Scope::default() };
    let mut statements = Vec::new();
    while let Some(s) = p.statement()? {
        statements.push(s);
    }
    Ok(Script { statements })
}

struct Printer {
    universe: Option<Universe>,
    group: Option<GroupModel>,
}

impl Printer {
    fn element(&self, i: usize) -> String {
        match (&self.group, &self.universe) {
            (Some(g), _) => g.label(i),
            (None, Some(u)) => u.label(i).expect("index in range").to_string(),
            (None, None) => i.to_string(),
        }
    }

    fn set(&self, s: &Subset) -> String {
        let parts: Vec<String> = s.elements().map(|i| self.element(i)).collect();
        format!("{{{}}}", parts.join(","))
    }

    fn item(&self, item: &SetItem) -> String {
        match item {
            SetItem::Name(n) => n.clone(),
            SetItem::Literal(s) => self.set(s),
        }
    }

    fn items(&self, items: &[SetItem]) -> String {
        items.iter().map(|i| self.item(i)).collect::<Vec<_>>().join(", ")
    }

    fn expr(&self, e: &Expr, min: u8) -> String {
        let (level, text) = match e {
            Expr::Star(l, r) => (0, format!("{} * {}", self.expr(l, 0), self.expr(r, 1))),
            Expr::Join(l, r) => (1, format!("{} v {}", self.expr(l, 1), self.expr(r, 2))),
            Expr::Complement(a) => (2, format!("~{}", self.expr(a, 2))),
            Expr::Adjoin(a, s) => (3, format!("{} + {}", self.expr(a, 3), self.item(s))),
            Expr::Closure(a) => (3, format!("S({})", self.expr(a, 0))),
            Expr::Ideal(a) => (3, format!("I({})", self.expr(a, 0))),
            Expr::Name(n) => (3, n.clone()),
            Expr::Family(items) => (3, format!("[{}]", self.items(items))),
        };
        if level < min {
            format!("({text})")
        } else {
            text
        }
    }
}

/// Prints one expression with minimal parentheses. Set literals use the
/// labels of `universe`.
pub fn print_expr(e: &Expr, universe: &Universe) -> String {
    Printer { universe: Some(universe.clone()), group: None }.expr(e, 0)
}

fn rational(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text of a script; `parse_script(&print_script(s)) == s`.
pub fn print_script(script: &Script) -> String {
    let mut p = Printer { universe: None, group: None };
    let mut out = String::new();
    for s in &script.statements {
        let line = match &s.stmt {
            Stmt::Universe(UniverseDecl::Size(n)) => {
                p.universe = Universe::new(*n, None).ok();
                format!("universe {n}")
            }
            Stmt::Universe(UniverseDecl::Labels(l)) => {
                p.universe = Universe::with_labels(l).ok();
                format!("universe {}", l.join(" "))
            }
            Stmt::Group(moduli) => {
                let g = GroupModel::new(moduli).expect("parsed group");
                p.universe = Some(g.universe());
                let text = format!("group {g}");
                p.group = Some(g);
                text
            }
            Stmt::Set { name, value } => format!("set {name} = {}", p.set(value)),
            Stmt::Family { name, items } => format!("family {name} = [{}]", p.items(items)),
            Stmt::Subgroup { name, generators } => {
                let g: Vec<String> = generators.iter().map(|&e| p.element(e)).collect();
                format!("subgroup {name} = <{}>", g.join(", "))
            }
            Stmt::Weights(w) => {
                format!("weights {}", w.iter().map(rational).collect::<Vec<_>>().join(" "))
            }
            Stmt::Eval(e) => format!("eval {}", p.expr(e, 0)),
            Stmt::Check(c) => {
                let mode = match c.mode {
                    SearchMode::Random => "random",
                    _ => "exhaustive",
                };
                let mut text = format!("check {} {mode} universe={} maxfam={}", c.law, c.universe, c.maxfam);
                if let (Some(t), Some(seed)) = (c.trials, c.seed) {
                    text.push_str(&format!(" trials={t} seed={seed}"));
                }
                text
            }
            Stmt::Explore { universe, maxfam } => {
                format!("explore star-closure universe={universe} maxfam={maxfam}")
            }
            Stmt::Model(m) => match &m.subgroup {
                Some(q) => format!("model {} subgroup={q}", m.check.name()),
                None => format!("model {}", m.check.name()),
            },
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_script(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        parse_script(text).unwrap_err()
    }

    #[test]
    fn grammar_examples() {
        let s = parse_script("universe a b c d\nset A = {a,b}\nfamily F = [A, {b,c}]\neval S(F)").unwrap();
        assert_eq!(s.statements.len(), 4);
        assert_eq!(s.statements[3].line, 4);
        assert_eq!(err("eval S(F)").to_string(), "unknown identifier F at 1:8");
        let e = err("universe 2\neval S(F)");
        assert_eq!(e.to_string(), "unknown identifier F at 2:8");
        let e = err("universe a b\neval S(F)\n");
        assert_eq!((e.line, e.column), (2, 8));
    }

    #[test]
    fn precedence_and_associativity() {
        let s = parse_script(
            "universe a b\nfamily F = [{a}]\nfamily G = [{a,b}]\neval S(F v G) * I(G)\neval F * G * F\neval F v G v F",
        )
        .unwrap();
        let Stmt::Eval(Expr::Star(l, r)) = &s.statements[3].stmt else { panic!() };
        assert!(matches!(**l, Expr::Closure(_)));
        assert!(matches!(**r, Expr::Ideal(_)));
        let Stmt::Eval(Expr::Star(l, _)) = &s.statements[4].stmt else { panic!() };
        assert!(matches!(**l, Expr::Star(..)));
        let Stmt::Eval(Expr::Join(l, _)) = &s.statements[5].stmt else { panic!() };
        assert!(matches!(**l, Expr::Join(..)));

        let s = parse_script("universe a b\nfamily F = [{a}]\neval F v F * F").unwrap();
        let Stmt::Eval(Expr::Star(l, _)) = &s.statements[2].stmt else { panic!() };
        assert!(matches!(**l, Expr::Join(..)));
        let s = parse_script("universe a b\nfamily F = [{a}]\neval ~F + {b}").unwrap();
        let Stmt::Eval(Expr::Complement(inner)) = &s.statements[2].stmt else { panic!() };
        assert!(matches!(**inner, Expr::Adjoin(..)));
    }

    #[test]
    fn round_trip_through_printer() {
        let text = "# comment\r\nuniverse a b c d\r\nset A = {b, a}\nset B = {b,c}\nset D = {c,d}\nfamily F = [A]\nfamily G = [B, D, {}]\n\neval S({A} v {B,D})\neval (F * G) * (F v G)\neval F * (G * F)\neval F v (G v F)\neval ~(F v G) + {a} + B\neval (~F) + D\neval S(I(F)) * [A, {d}]\ncheck L2 exhaustive universe=3 maxfam=3\ncheck n1 random\nexplore star-closure\n";
        let s = parse_script(text).unwrap();
        let printed = print_script(&s);
        assert!(printed.contains("set A = {a,b}"));
        assert!(printed.contains("check N1 random universe=3 maxfam=2 trials=1000 seed=0"));
        let again = parse_script(&printed).unwrap();
        assert_eq!(again, s);
        assert_eq!(print_script(&again), printed);
    }

    #[test]
    fn group_scripts() {
        let s = parse_script("group Z2xZ2\nsubgroup Q = <(0,1)>\nset T = {(1,0), 0}\nweights 0, 1/2, 1 2\nmodel vitali-partition subgroup=Q\nmodel trivial-pair").unwrap();
        let printed = print_script(&s);
        assert!(printed.contains("subgroup Q = <(0,1)>"));
        assert!(printed.contains("set T = {(0,0),(1,0)}"));
        assert!(printed.contains("weights 0 1/2 1 2"));
        assert_eq!(parse_script(&printed).unwrap(), s);
        let s = parse_script("group Z6\nsubgroup Q = <3>\nmodel vitali-partition").unwrap();
        assert_eq!(s.statements[1].stmt, Stmt::Subgroup { name: "Q".into(), generators: vec![3] });
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(err("universe a\neval $").kind, ParseErrorKind::Lexical);
        assert_eq!((err("universe a\neval $").line, err("universe a\neval $").column), (2, 6));
        assert_eq!(err("universe a\nset A = {z}").kind, ParseErrorKind::UnknownIdentifier);
        assert_eq!(err("universe a\nset A = {a}\nset A = {}").kind, ParseErrorKind::Type);
        assert_eq!(err("universe a\nuniverse b").kind, ParseErrorKind::Type);
        assert_eq!(err("check L99 exhaustive").kind, ParseErrorKind::UnknownIdentifier);
        assert_eq!(err("check L2 exhaustive trials=3").kind, ParseErrorKind::Syntax);
        assert_eq!(err("model trivial-pair").kind, ParseErrorKind::Type);
        assert_eq!(err("group Z6\nmodel bogus").kind, ParseErrorKind::UnknownIdentifier);
        assert_eq!(err("group Z6\nweights 1 2").kind, ParseErrorKind::Type);
        assert_eq!(err("group Z6\nsubgroup Q = <1>\neval Q").kind, ParseErrorKind::Type);
        assert_eq!(err("universe a\nfamily F = [{a}]\neval F + F").kind, ParseErrorKind::Type);
        assert_eq!(err("universe a\neval (").kind, ParseErrorKind::Syntax);
        assert_eq!(err("universe a\nset v = {a}").kind, ParseErrorKind::Syntax);
        assert_eq!(err("frobnicate").kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn universe_by_size_uses_indices() {
        let s = parse_script("universe 3\nset A = {0,2}\neval [A]").unwrap();
        let Stmt::Set { value, .. } = &s.statements[1].stmt else { panic!() };
        assert_eq!(value.elements().collect::<Vec<_>>(), vec![0, 2]);
    }
}
