//! Script syntax. One statement per line, `#` starts a comment.
//!
//! ```text
//! space NAME dim NAT
//! cone NAME = FORMULA | hull VECTOR* | corpus IDENT ARG*
//! subspace NAME = span VECTOR*
//! map NAME = [a b; c d]
//! check PRED NAME [VECTOR | NAME]
//! compute (N | D | closure) NAME [NAME]
//! quotient NAME by NAME [as NAME]
//! archimedeanize NAME [as NAME]
//! factor NAME through NAME into NAME
//! falsify PROP NAME [VECTOR]
//! ```
//! An optional first line `format-version: 1` pins the syntax version.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linarith::parse::{tokenize, Cursor, Tok};
use crate::linarith::{Formula, Rational};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pred {
    Wedge,
    Cone,
    Generating,
    Archimedean,
    AlmostArchimedean,
    ArchElement,
    AlmostArchElement,
    OrderIdeal,
    OrderConvex,
    UniformlyClosed,
    Riesz,
    OrderUnit,
}

impl Pred {
    const ALL: [(&'static str, Pred); 12] = [
        ("wedge", Pred::Wedge),
        ("cone", Pred::Cone),
        ("generating", Pred::Generating),
        ("archimedean", Pred::Archimedean),
        ("almost-archimedean", Pred::AlmostArchimedean),
        ("arch-element", Pred::ArchElement),
        ("almost-arch-element", Pred::AlmostArchElement),
        ("order-ideal", Pred::OrderIdeal),
        ("order-convex", Pred::OrderConvex),
        ("uniformly-closed", Pred::UniformlyClosed),
        ("riesz", Pred::Riesz),
        ("order-unit", Pred::OrderUnit),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, p)| *p == self).unwrap().0
    }

    fn from_name(s: &str) -> Option<Pred> {
        Self::ALL.iter().find(|(n, _)| *n == s).map(|(_, p)| *p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Infinitesimals,
    DWedge,
    Closure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FalsifyProp {
    Archimedean,
    AlmostArchimedean,
    ArchElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeDef {
    Formula(Formula),
    Hull(Vec<Vec<Rational>>),
    Corpus(String, Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Point(Vec<Rational>),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Space { name: String, dim: usize },
    Cone { name: String, def: ConeDef },
    Subspace { name: String, vectors: Vec<Vec<Rational>> },
    Map { name: String, rows: Vec<Vec<Rational>> },
    Check { pred: Pred, target: String, arg: Option<Arg> },
    Compute { what: Quantity, target: String, arg: Option<String> },
    Quotient { target: String, ideal: String, alias: Option<String> },
    Archimedeanize { target: String, alias: Option<String> },
    Factor { map: String, source: String, target: String },
    Falsify { prop: FalsifyProp, target: String, point: Option<Vec<Rational>> },
}

impl Stmt {
    pub fn keyword(&self) -> &'static str {
        match self {
            Stmt::Space { .. } => "space",
            Stmt::Cone { .. } => "cone",
            Stmt::Subspace { .. } => "subspace",
            Stmt::Map { .. } => "map",
            Stmt::Check { .. } => "check",
            Stmt::Compute { .. } => "compute",
            Stmt::Quotient { .. } => "quotient",
            Stmt::Archimedeanize { .. } => "archimedeanize",
            Stmt::Factor { .. } => "factor",
            Stmt::Falsify { .. } => "falsify",
        }
    }

    /// The name the statement defines or acts on.
    pub fn subject(&self) -> &str {
        match self {
            Stmt::Space { name, .. }
            | Stmt::Cone { name, .. }
            | Stmt::Subspace { name, .. }
            | Stmt::Map { name, .. } => name,
            Stmt::Check { target, .. }
            | Stmt::Compute { target, .. }
            | Stmt::Quotient { target, .. }
            | Stmt::Archimedeanize { target, .. }
            | Stmt::Falsify { target, .. } => target,
            Stmt::Factor { map, .. } => map,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    /// The source line without comments, trimmed.
    pub text: String,
    pub stmt: Stmt,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
}

/// What a name denotes, as far as the parser can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Declared,
    Space,
    Oracle,
    Subspace,
    Map,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Declared => "declared space",
            Kind::Space => "space",
            Kind::Oracle => "oracle cone",
            Kind::Subspace => "subspace",
            Kind::Map => "map",
        })
    }
}

/// Oracle cones addressable from `corpus`.
pub const ORACLE_NAMES: [&str; 2] = ["poly_pos_deg2", "poly_nonneg_deg2"];

struct Names(HashMap<String, Kind>);

impl Names {
    fn define(&mut self, cur: &Cursor, name: &str, kind: Kind) -> Result<()> {
        match self.0.get(name) {
            Some(Kind::Declared) if kind == Kind::Space => {}
            Some(_) => return Err(cur.error(format!("`{name}` is already defined"))),
            None => {}
        }
        self.0.insert(name.to_string(), kind);
        Ok(())
    }

    /// Reads a name that must already denote one of `allowed`.
    fn reference(&self, cur: &mut Cursor, allowed: &[Kind]) -> Result<String> {
        let column = cur.column();
        let name = cur.ident()?;
        let message = match self.0.get(&name) {
            None => format!("`{name}` is not defined"),
            Some(k) if allowed.contains(k) => return Ok(name),
            Some(k) => format!("`{name}` is a {k}"),
        };
        Err(Error::Parse {
            line: 0,
            column,
            message,
        })
    }
}

fn vector(cur: &mut Cursor) -> Result<Vec<Rational>> {
    cur.expect_sym("(")?;
    let mut v = Vec::new();
    if cur.eat_sym(")") {
        return Ok(v);
    }
    loop {
        v.push(cur.rational()?);
        if cur.eat_sym(")") {
            return Ok(v);
        }
        cur.expect_sym(",")?;
    }
}

fn vectors(cur: &mut Cursor) -> Result<Vec<Vec<Rational>>> {
    let mut out = Vec::new();
    while matches!(cur.peek(), Some(Tok::Sym("("))) {
        let v = vector(cur)?;
        if let Some(first) = out.first() {
            let first: &Vec<Rational> = first;
            if first.len() != v.len() {
                return Err(cur.error("vectors have different lengths"));
            }
        }
        out.push(v);
    }
    Ok(out)
}

fn matrix(cur: &mut Cursor) -> Result<Vec<Vec<Rational>>> {
    cur.expect_sym("[")?;
    let mut rows = vec![Vec::new()];
    loop {
        if cur.eat_sym("]") {
            break;
        }
        if cur.eat_sym(";") {
            rows.push(Vec::new());
            continue;
        }
        cur.eat_sym(",");
        rows.last_mut().unwrap().push(cur.rational()?);
    }
    let width = rows[0].len();
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(cur.error("matrix rows must be nonempty and of equal length"));
    }
    Ok(rows)
}

fn optional_alias(cur: &mut Cursor, names: &mut Names) -> Result<Option<String>> {
    if cur.eat_keyword("as") {
        let a = cur.ident()?;
        names.define(cur, &a, Kind::Space)?;
        Ok(Some(a))
    } else {
        Ok(None)
    }
}

fn statement(cur: &mut Cursor, names: &mut Names) -> Result<Stmt> {
    let column = cur.column();
    let kw = cur.ident()?;
    let spaces = [Kind::Space];
    let stmt = match kw.as_str() {
        "space" => {
            let name = cur.ident()?;
            cur.expect_keyword("dim")?;
            let dim = cur.natural()?;
            names.define(cur, &name, Kind::Declared)?;
            Stmt::Space { name, dim }
        }
        "cone" => {
            let name = cur.ident()?;
            cur.expect_sym("=")?;
            let def = if cur.eat_keyword("hull") {
                ConeDef::Hull(vectors(cur)?)
            } else if cur.eat_keyword("corpus") {
                let entry = cur.ident()?;
                let mut args = Vec::new();
                while !cur.at_end() {
                    args.push(cur.rational()?);
                }
                ConeDef::Corpus(entry, args)
            } else {
                ConeDef::Formula(cur.formula()?)
            };
            let kind = match &def {
                ConeDef::Corpus(e, _) if ORACLE_NAMES.contains(&e.as_str()) => Kind::Oracle,
                _ => Kind::Space,
            };
            if kind == Kind::Oracle && names.0.get(&name) == Some(&Kind::Declared) {
                return Err(cur.error(format!("`{name}` was declared as a semilinear space")));
            }
            names.define(cur, &name, kind)?;
            Stmt::Cone { name, def }
        }
        "subspace" => {
            let name = cur.ident()?;
            cur.expect_sym("=")?;
            cur.expect_keyword("span")?;
            let vs = vectors(cur)?;
            if vs.is_empty() {
                return Err(cur.error("expected at least one vector"));
            }
            names.define(cur, &name, Kind::Subspace)?;
            Stmt::Subspace { name, vectors: vs }
        }
        "map" => {
            let name = cur.ident()?;
            cur.expect_sym("=")?;
            let rows = matrix(cur)?;
            names.define(cur, &name, Kind::Map)?;
            Stmt::Map { name, rows }
        }
        "check" => {
            let p = cur.ident()?;
            let pred = Pred::from_name(&p).ok_or_else(|| cur.error(format!("unknown predicate `{p}`")))?;
            let target = names.reference(cur, &spaces)?;
            let arg = match pred {
                Pred::ArchElement | Pred::AlmostArchElement | Pred::OrderUnit => Some(Arg::Point(vector(cur)?)),
                Pred::OrderIdeal | Pred::OrderConvex => {
                    let s = names.reference(cur, &[Kind::Subspace])?;
                    Some(Arg::Name(s))
                }
                Pred::UniformlyClosed if !cur.at_end() => {
                    let s = names.reference(cur, &[Kind::Subspace])?;
                    Some(Arg::Name(s))
                }
                _ => None,
            };
            Stmt::Check { pred, target, arg }
        }
        "compute" => {
            let what = match cur.ident()?.as_str() {
                "N" => Quantity::Infinitesimals,
                "D" => Quantity::DWedge,
                "closure" => Quantity::Closure,
                other => return Err(cur.error(format!("cannot compute `{other}`"))),
            };
            let target = names.reference(cur, &spaces)?;
            let arg = if what == Quantity::Closure && !cur.at_end() {
                let s = names.reference(cur, &[Kind::Subspace])?;
                Some(s)
            } else {
                None
            };
            Stmt::Compute { what, target, arg }
        }
        "quotient" => {
            let target = names.reference(cur, &spaces)?;
            cur.expect_keyword("by")?;
            let ideal = names.reference(cur, &[Kind::Subspace])?;
            let alias = optional_alias(cur, names)?;
            Stmt::Quotient { target, ideal, alias }
        }
        "archimedeanize" => {
            let target = names.reference(cur, &spaces)?;
            let alias = optional_alias(cur, names)?;
            Stmt::Archimedeanize { target, alias }
        }
        "factor" => {
            let map = names.reference(cur, &[Kind::Map])?;
            cur.expect_keyword("through")?;
            let source = names.reference(cur, &spaces)?;
            cur.expect_keyword("into")?;
            let target = names.reference(cur, &spaces)?;
            Stmt::Factor { map, source, target }
        }
        "falsify" => {
            let prop = match cur.ident()?.as_str() {
                "archimedean" => FalsifyProp::Archimedean,
                "almost-archimedean" => FalsifyProp::AlmostArchimedean,
                "arch-element" => FalsifyProp::ArchElement,
                other => return Err(cur.error(format!("cannot falsify `{other}`"))),
            };
            let target = names.reference(cur, &[Kind::Space, Kind::Oracle])?;
            let point = if prop == FalsifyProp::ArchElement { Some(vector(cur)?) } else { None };
            Stmt::Falsify { prop, target, point }
        }
        other => return Err(Error::Parse {
            line: 0,
            column,
            message: format!("unknown statement `{other}`"),
        }),
    };
    cur.expect_end()?;
    Ok(stmt)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses a whole script; names must be defined before use.
pub fn parse(text: &str) -> Result<Script> {
    let mut names = Names(HashMap::new());
    let mut statements = Vec::new();
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        if let Some(v) = body.strip_prefix("format-version:") {
            if !first || v.trim() != FORMAT_VERSION.to_string() {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    message: format!("expected `format-version: {FORMAT_VERSION}` as the first line"),
                });
            }
            first = false;
            continue;
        }
        first = false;
        let toks = tokenize(raw, line)?;
        let mut cur = Cursor::new(&toks, line, raw.len());
        let stmt = statement(&mut cur, &mut names).map_err(|e| match e {
            Error::Parse { line: 0, column, message } => Error::Parse { line, column, message },
            e => e,
        })?;
        statements.push(Statement {
            line,
            text: body.to_string(),
            stmt,
        });
    }
    Ok(Script { statements })
}
