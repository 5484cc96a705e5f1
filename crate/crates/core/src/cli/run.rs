use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::script::{
    parse, Arg, ConeDef, FalsifyProp, Pred, Quantity, Script, Statement, Stmt, FORMAT_VERSION,
};
use crate::archkit::{archimedeanize, factor_through, ArchResult};
use crate::corpus::{self, falsify, OracleCone, Property};
use crate::error::{Error, Result};
use crate::linalg::format_vector;
use crate::linarith::Rational;
use crate::ovskit::{Evidence, LinearMap, OVSpace, OrderUnit, SemilinearSet, Settings, Subspace, Verdict};
use crate::qe::Budget;

/// Everything that influences a run. Two runs with equal options on the
/// same script produce identical reports, except for `millis` when
/// `timing` is on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    /// Candidate pairs tried by `falsify`.
    pub sample_budget: usize,
    pub settings: Settings,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            sample_budget: 10_000,
            settings: Settings::default(),
            timing: false,
        }
    }
}

impl Options {
    pub fn with_budgets(cells: usize, atoms: usize, lattice_dim_max: usize) -> Self {
        let mut o = Options::default();
        o.settings.budget = Budget {
            max_cells: cells,
            max_atoms: atoms,
            ..Budget::default()
        };
        o.settings.lattice_dim_max = lattice_dim_max;
        o
    }
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub line: usize,
    pub kind: String,
    pub name: String,
    pub command: String,
    pub verdict: Option<bool>,
    pub witness: Option<Map<String, Value>>,
    pub object: Option<Value>,
    pub depth: Option<usize>,
    pub millis: Option<u64>,
    pub error: Option<String>,
}

impl Record {
    fn new(st: &Statement) -> Self {
        Record {
            line: st.line,
            kind: st.stmt.keyword().to_string(),
            name: st.stmt.subject().to_string(),
            command: st.text.clone(),
            verdict: None,
            witness: None,
            object: None,
            depth: None,
            millis: None,
            error: None,
        }
    }
}

/// Exit status of a run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;
pub const EXIT_CONTRACT: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::NotAWedge
        | Error::NotACone
        | Error::NotPositiveElement
        | Error::NotASubspace
        | Error::NotAnOrderIdeal
        | Error::LinearlyDependent
        | Error::DimensionMismatch { .. }
        | Error::TargetNotArchimedean
        | Error::MapNotPositive
        | Error::KernelConditionFailed => EXIT_CONTRACT,
        _ => EXIT_ENGINE,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
    pub exit_code: i32,
}

impl Report {
    /// `format-version: 1` followed by one JSON object per record.
    pub fn structured(&self) -> String {
        let mut out = format!("format-version: {FORMAT_VERSION}\n");
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn text(&self) -> String {
        let mut out = format!("format-version: {FORMAT_VERSION}\n");
        for r in &self.records {
            let _ = write!(out, "[{}] {}", r.line, r.command);
            if let Some(v) = r.verdict {
                let _ = write!(out, ": {v}");
            }
            if let Some(d) = r.depth {
                let _ = write!(out, " (depth {d})");
            }
            if let Some(ms) = r.millis {
                let _ = write!(out, " [{ms} ms]");
            }
            out.push('\n');
            if let Some(w) = &r.witness {
                let parts: Vec<String> = w
                    .iter()
                    .map(|(k, v)| format!("{k} = {}", v.as_str().unwrap_or_default()))
                    .collect();
                let _ = writeln!(out, "    witness: {}", parts.join(", "));
            }
            if let Some(o) = &r.object {
                text_object(&mut out, o, 1);
            }
            if let Some(e) = &r.error {
                let _ = writeln!(out, "    error: {e}");
            }
        }
        out
    }
}

fn text_object(out: &mut String, v: &Value, depth: usize) {
    let pad = "    ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text_object(out, x, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar(x));
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(out, "{pad}-");
                        text_object(out, x, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}- {}", scalar(x));
                    }
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", scalar(v));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

enum Binding {
    Declared(usize),
    Space(Box<OVSpace>),
    Oracle(OracleCone),
    Subspace(Subspace),
    Map(LinearMap),
}

struct Env {
    options: Options,
    values: HashMap<String, Binding>,
    arch: HashMap<String, ArchResult>,
}

fn witness(e: &Evidence) -> Map<String, Value> {
    e.entries()
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(format_vector(v))))
        .collect()
}

fn basis_json(s: &Subspace) -> Value {
    Value::Array(s.basis().iter().map(|b| Value::String(format_vector(b))).collect())
}

fn set_json(s: &SemilinearSet) -> Value {
    Value::String(s.formula().to_string())
}

impl Env {
    fn space(&self, name: &str) -> Result<&OVSpace> {
        match self.values.get(name) {
            Some(Binding::Space(s)) => Ok(s),
            _ => Err(Error::InternalInvariantViolation(format!("`{name}` has no cone"))),
        }
    }

    fn subspace(&self, name: &str) -> Result<&Subspace> {
        match self.values.get(name) {
            Some(Binding::Subspace(s)) => Ok(s),
            _ => Err(Error::InternalInvariantViolation(format!("`{name}` is not a subspace"))),
        }
    }

    fn map(&self, name: &str) -> Result<&LinearMap> {
        match self.values.get(name) {
            Some(Binding::Map(m)) => Ok(m),
            _ => Err(Error::InternalInvariantViolation(format!("`{name}` is not a map"))),
        }
    }

    fn new_space(&self, positive: SemilinearSet) -> OVSpace {
        OVSpace::with_settings(positive, self.options.settings.clone())
    }

    fn define_space(&mut self, name: &str, s: OVSpace) {
        self.values.insert(name.to_string(), Binding::Space(Box::new(s)));
    }

    fn archimedeanized(&mut self, name: &str) -> Result<ArchResult> {
        if let Some(r) = self.arch.get(name) {
            return Ok(r.clone());
        }
        let r = archimedeanize(self.space(name)?)?;
        self.arch.insert(name.to_string(), r.clone());
        Ok(r)
    }

    fn cone(&mut self, rec: &mut Record, name: &str, def: &ConeDef) -> Result<()> {
        let declared = match self.values.get(name) {
            Some(Binding::Declared(d)) => Some(*d),
            _ => None,
        };
        let check = |dim: usize| -> Result<()> {
            match declared {
                Some(d) if d != dim => Err(Error::DimensionMismatch {
                    expected: d,
                    found: dim,
                }),
                _ => Ok(()),
            }
        };
        let space = match def {
            ConeDef::Formula(f) => {
                let dim = declared.unwrap_or_else(|| f.free_vars().iter().map(|v| v.0 as usize + 1).max().unwrap_or(0));
                self.new_space(SemilinearSet::new(dim, f.clone())?)
            }
            ConeDef::Hull(gens) => {
                let dim = gens.first().map(Vec::len).or(declared).unwrap_or(0);
                check(dim)?;
                corpus::generated_wedge_with(dim, gens, &self.options.settings)?
            }
            ConeDef::Corpus(entry, args) => {
                let oracle = match entry.as_str() {
                    "poly_pos_deg2" => Some(corpus::poly_pos_cone_deg2()),
                    "poly_nonneg_deg2" => Some(corpus::poly_nonneg_cone_deg2()),
                    _ => None,
                };
                if let Some(o) = oracle {
                    rec.object = Some(json!({ "oracle": o.name(), "dim": o.dim() }));
                    self.values.insert(name.to_string(), Binding::Oracle(o));
                    return Ok(());
                }
                let mut s = corpus::by_name(entry, args)?;
                check(s.dim())?;
                s.set_settings(self.options.settings.clone());
                s
            }
        };
        rec.object = Some(json!({ "dim": space.dim(), "positive": set_json(space.positive()) }));
        self.define_space(name, space);
        Ok(())
    }

    fn check(&mut self, rec: &mut Record, pred: Pred, target: &str, arg: &Option<Arg>) -> Result<()> {
        let s = self.space(target)?.clone();
        let point = || -> Result<Vec<Rational>> {
            match arg {
                Some(Arg::Point(p)) => Ok(p.clone()),
                _ => Err(Error::InternalInvariantViolation("missing point".into())),
            }
        };
        let set = |env: &Env| -> Result<SemilinearSet> {
            match arg {
                Some(Arg::Name(n)) => Ok(env.subspace(n)?.to_set()),
                _ => Ok(SemilinearSet::origin(s.dim())),
            }
        };
        let verdict: Verdict = match pred {
            Pred::Wedge => s.wedge_verdict()?,
            Pred::Cone => s.cone_verdict()?,
            Pred::Generating => s.generating_verdict()?,
            Pred::Archimedean => s.archimedean_verdict()?,
            Pred::AlmostArchimedean => s.almost_archimedean_verdict()?,
            Pred::ArchElement => s.archimedean_element_verdict(&point()?)?,
            Pred::AlmostArchElement => s.almost_archimedean_element_verdict(&point()?)?,
            Pred::OrderIdeal => s.order_ideal_verdict(&set(self)?)?,
            Pred::OrderConvex => s.order_convex_verdict(&set(self)?)?,
            Pred::UniformlyClosed => s.uniformly_closed_verdict(&set(self)?)?,
            Pred::Riesz => s.riesz_verdict()?,
            Pred::OrderUnit => match s.order_unit(&point()?)? {
                OrderUnit::Unit => Verdict::yes(),
                OrderUnit::NotUnit(w) => Verdict::no(w),
                OrderUnit::NotPositive => {
                    rec.object = Some(Value::String("element is not positive".into()));
                    Verdict {
                        holds: false,
                        witness: None,
                    }
                }
            },
        };
        rec.verdict = Some(verdict.holds);
        rec.witness = verdict.witness.as_ref().map(witness);
        // Predicates decided on a space are cached on it.
        self.define_space(target, s);
        Ok(())
    }

    fn compute(&mut self, rec: &mut Record, what: Quantity, target: &str, arg: &Option<String>) -> Result<()> {
        let s = self.space(target)?.clone();
        rec.object = Some(match what {
            Quantity::Infinitesimals => {
                let (set, basis) = s.infinitesimals()?;
                json!({ "set": set_json(&set), "basis": basis_json(&basis) })
            }
            Quantity::DWedge => json!({ "set": set_json(&s.d_wedge()?) }),
            Quantity::Closure => {
                let a = match arg {
                    Some(n) => self.subspace(n)?.to_set(),
                    None => SemilinearSet::origin(s.dim()),
                };
                json!({ "of": set_json(&a), "set": set_json(&s.uniform_closure(&a)?) })
            }
        });
        self.define_space(target, s);
        Ok(())
    }

    fn exec(&mut self, rec: &mut Record, stmt: &Stmt) -> Result<()> {
        match stmt {
            Stmt::Space { name, dim } => {
                self.values.insert(name.clone(), Binding::Declared(*dim));
                rec.object = Some(json!({ "dim": dim }));
            }
            Stmt::Cone { name, def } => self.cone(rec, name, def)?,
            Stmt::Subspace { name, vectors } => {
                let n = vectors[0].len();
                let s = Subspace::from_spanning(n, vectors);
                rec.object = Some(json!({ "dim": s.dim(), "basis": basis_json(&s) }));
                self.values.insert(name.clone(), Binding::Subspace(s));
            }
            Stmt::Map { name, rows } => {
                let m = LinearMap::from_rows(rows.clone(), rows[0].len())?;
                rec.object = Some(Value::String(m.to_string()));
                self.values.insert(name.clone(), Binding::Map(m));
            }
            Stmt::Check { pred, target, arg } => self.check(rec, *pred, target, arg)?,
            Stmt::Compute { what, target, arg } => self.compute(rec, *what, target, arg)?,
            Stmt::Quotient { target, ideal, alias } => {
                let i = self.subspace(ideal)?.clone();
                let (q, pres) = self.space(target)?.quotient(&i)?;
                rec.object = Some(json!({
                    "projection": pres.projection.to_string(),
                    "complement": pres.complement.iter().map(|c| format_vector(c)).collect::<Vec<_>>(),
                    "positive": set_json(q.positive()),
                }));
                if let Some(a) = alias {
                    self.define_space(a, q);
                }
            }
            Stmt::Archimedeanize { target, alias } => {
                let r = self.archimedeanized(target)?;
                let steps: Vec<Value> = r
                    .steps
                    .iter()
                    .map(|st| {
                        json!({
                            "index": st.index,
                            "ideal": basis_json(&st.ideal),
                            "pulled_back_ideal": basis_json(&st.pulled_back_ideal),
                            "projection": st.map.projection.to_string(),
                        })
                    })
                    .collect();
                rec.depth = Some(r.stabilization_depth);
                rec.object = Some(json!({
                    "steps": steps,
                    "composite": r.composite.to_string(),
                    "projected": set_json(r.projected.positive()),
                    "final": set_json(r.final_space.positive()),
                    "final_dim": r.final_space.dim(),
                }));
                if let Some(a) = alias {
                    self.define_space(a, r.final_space.clone());
                }
            }
            Stmt::Factor { map, source, target } => {
                let phi = self.map(map)?.clone();
                let u = self.space(target)?.clone();
                let r = self.archimedeanized(source)?;
                let tilde = factor_through(&r, &phi, &u)?;
                rec.object = Some(json!({
                    "factor": tilde.to_string(),
                    "quotient_map": r.composite.to_string(),
                }));
            }
            Stmt::Falsify { prop, target, point } => {
                let oracle = match self.values.get(target) {
                    Some(Binding::Oracle(o)) => o.clone(),
                    Some(Binding::Space(s)) => OracleCone::from_space(target, s),
                    _ => return Err(Error::InternalInvariantViolation(format!("`{target}` has no cone"))),
                };
                let property = match prop {
                    FalsifyProp::Archimedean => Property::Archimedean,
                    FalsifyProp::AlmostArchimedean => Property::AlmostArchimedean,
                    FalsifyProp::ArchElement => Property::Element(point.clone().unwrap_or_default()),
                };
                match falsify(&oracle, &property, self.options.sample_budget, self.options.seed) {
                    Some(r) => {
                        rec.verdict = Some(false);
                        let mut w = Map::new();
                        w.insert("x".into(), Value::String(format_vector(&r.x)));
                        w.insert("y".into(), Value::String(format_vector(&r.y)));
                        rec.witness = Some(w);
                        let lo = r.checked.iter().min().copied().unwrap_or(0);
                        let hi = r.checked.iter().max().copied().unwrap_or(0);
                        rec.object = Some(json!({ "checked_n": format!("{lo}..={hi}") }));
                    }
                    None => {
                        rec.object = Some(json!({ "result": "no counterexample found" }));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Executes statements in order, stopping at the first error; the report
/// keeps every record produced up to and including the failing one.
pub fn run(script: &Script, options: &Options) -> Report {
    let mut env = Env {
        options: options.clone(),
        values: HashMap::new(),
        arch: HashMap::new(),
    };
    let mut records = Vec::new();
    for st in &script.statements {
        let mut rec = Record::new(st);
        let start = Instant::now();
        let result = env.exec(&mut rec, &st.stmt);
        if options.timing {
            rec.millis = Some(start.elapsed().as_millis() as u64);
        }
        if let Err(e) = result {
            rec.error = Some(e.to_string());
            records.push(rec);
            return Report {
                records,
                exit_code: exit_code(&e),
            };
        }
        records.push(rec);
    }
    Report {
        records,
        exit_code: EXIT_OK,
    }
}

/// Parses and runs; a parse error yields a one-record report.
pub fn run_text(text: &str, options: &Options) -> Report {
    match parse(text) {
        Ok(s) => run(&s, options),
        Err(e) => {
            let line = match &e {
                Error::Parse { line, .. } => *line,
                _ => 0,
            };
            Report {
                records: vec![Record {
                    line,
                    kind: "parse".into(),
                    name: String::new(),
                    command: text.lines().nth(line.saturating_sub(1)).unwrap_or("").trim().to_string(),
                    verdict: None,
                    witness: None,
                    object: None,
                    depth: None,
                    millis: None,
                    error: Some(e.to_string()),
                }],
                exit_code: exit_code(&e),
            }
        }
    }
}
