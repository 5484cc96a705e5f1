//! Conjunctive cells and disjunctive normal form.
//!
//! A [`Cell`] is a conjunction of atoms kept in a canonical shape: atoms
//! sharing a linear form (up to positive scaling and sign) are fused into a
//! single interval constraint on that form, so contradictions such as
//! `x > 1 ∧ x < 0` disappear syntactically and `x ≥ 0 ∧ x ≤ 0` becomes
//! `x = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use super::atom::{Atom, Rel};
use super::expr::{AffineExpr, Assignment, Var};
use super::formula::Formula;
use super::rational::Rational;
use crate::error::{BudgetKind, Error, Result};

/// Default bound on the number of cells of any DNF.
pub const DEFAULT_MAX_CELLS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bound {
    value: Rational,
    strict: bool,
}

/// Admissible values of one linear form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Interval {
    lo: Option<Bound>,
    hi: Option<Bound>,
}

impl Interval {
    fn point(v: Rational) -> Self {
        Interval {
            lo: Some(Bound {
                value: v.clone(),
                strict: false,
            }),
            hi: Some(Bound {
                value: v,
                strict: false,
            }),
        }
    }

    fn raise_lo(&mut self, b: Bound) {
        let replace = match &self.lo {
            None => true,
            Some(cur) => b.value > cur.value || (b.value == cur.value && b.strict && !cur.strict),
        };
        if replace {
            self.lo = Some(b);
        }
    }

    fn lower_hi(&mut self, b: Bound) {
        let replace = match &self.hi {
            None => true,
            Some(cur) => b.value < cur.value || (b.value == cur.value && b.strict && !cur.strict),
        };
        if replace {
            self.hi = Some(b);
        }
    }

    fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => l.value > h.value || (l.value == h.value && (l.strict || h.strict)),
            _ => false,
        }
    }

    fn is_full(&self) -> bool {
        self.lo.is_none() && self.hi.is_none()
    }

    /// Union when it is again an interval.
    fn convex_union(&self, other: &Interval) -> Option<Interval> {
        // Order the two by lower end.
        let lo_key = |i: &Interval| i.lo.clone();
        let (a, b) = match (lo_key(self), lo_key(other)) {
            (None, _) => (self, other),
            (_, None) => (other, self),
            (Some(x), Some(y)) => {
                if x.value < y.value || (x.value == y.value && !x.strict) {
                    (self, other)
                } else {
                    (other, self)
                }
            }
        };
        // a starts first; b must start inside or adjacent to a.
        let touches = match (&a.hi, &b.lo) {
            (None, _) | (_, None) => true,
            (Some(h), Some(l)) => h.value > l.value || (h.value == l.value && !(h.strict && l.strict)),
        };
        if !touches {
            return None;
        }
        let hi = match (&a.hi, &b.hi) {
            (None, _) | (_, None) => None,
            (Some(x), Some(y)) => {
                if x.value > y.value || (x.value == y.value && !x.strict) {
                    Some(x.clone())
                } else {
                    Some(y.clone())
                }
            }
        };
        Some(Interval {
            lo: a.lo.clone(),
            hi,
        })
    }

    fn atoms(&self, key: &AffineExpr) -> Vec<Atom> {
        if let (Some(l), Some(h)) = (&self.lo, &self.hi) {
            if l.value == h.value {
                return vec![Atom::eq(key - &AffineExpr::constant(l.value.clone()))];
            }
        }
        let mut out = Vec::new();
        if let Some(l) = &self.lo {
            let e = key - &AffineExpr::constant(l.value.clone());
            out.push(Atom::new(e, if l.strict { Rel::Gt } else { Rel::Ge }));
        }
        if let Some(h) = &self.hi {
            let e = AffineExpr::constant(h.value.clone()) - key.clone();
            out.push(Atom::new(e, if h.strict { Rel::Gt } else { Rel::Ge }));
        }
        out
    }
}

/// Splits an atom into a canonical linear form (primitive, positive leading
/// coefficient) and the interval it imposes on that form.
fn keyed(atom: &Atom) -> (AffineExpr, Interval) {
    let e = atom.expr();
    let lin = e.linear_part();
    let p = lin.primitive_factor().expect("non-constant atom");
    let negative = lin.leading().map(|(_, c)| c.is_negative()).unwrap_or(false);
    let key = if negative { lin.scale(&-&p) } else { lin.scale(&p) };
    // e = ±key/p + b, and p > 0, so e ▷ 0  ⟺  ±key + b·p ▷ 0.
    let bp = e.constant_term() * &p;
    let strict = atom.rel() == Rel::Gt;
    let mut iv = Interval::default();
    match (atom.rel(), negative) {
        (Rel::Eq, _) => {
            let v = if negative { bp } else { -bp };
            iv = Interval::point(v);
        }
        (_, false) => iv.raise_lo(Bound { value: -bp, strict }),
        (_, true) => iv.lower_hi(Bound { value: bp, strict }),
    }
    (key, iv)
}

/// A conjunction of atoms in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cell {
    atoms: Vec<Atom>,
}

impl Cell {
    pub fn top() -> Self {
        Cell::default()
    }

    /// Canonicalizes a conjunction; `None` when it is syntactically empty.
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Option<Cell> {
        let mut forms: BTreeMap<AffineExpr, Interval> = BTreeMap::new();
        for a in atoms {
            match a.constant_truth() {
                Some(true) => continue,
                Some(false) => return None,
                None => {}
            }
            let (key, iv) = keyed(&a);
            let slot = forms.entry(key).or_default();
            if let Some(l) = iv.lo {
                slot.raise_lo(l);
            }
            if let Some(h) = iv.hi {
                slot.lower_hi(h);
            }
            if slot.is_empty() {
                return None;
            }
        }
        Some(Self::from_forms(&forms))
    }

    fn from_forms(forms: &BTreeMap<AffineExpr, Interval>) -> Cell {
        let mut atoms: Vec<Atom> = forms.iter().flat_map(|(k, iv)| iv.atoms(k)).collect();
        atoms.sort();
        atoms.dedup();
        Cell { atoms }
    }

    fn forms(&self) -> BTreeMap<AffineExpr, Interval> {
        let mut forms: BTreeMap<AffineExpr, Interval> = BTreeMap::new();
        for a in &self.atoms {
            let (key, iv) = keyed(a);
            let slot = forms.entry(key).or_default();
            if let Some(l) = iv.lo {
                slot.raise_lo(l);
            }
            if let Some(h) = iv.hi {
                slot.lower_hi(h);
            }
        }
        forms
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn conjoin(&self, other: &Cell) -> Option<Cell> {
        Cell::new(self.atoms.iter().chain(other.atoms.iter()).cloned())
    }

    pub fn with_atom(&self, atom: Atom) -> Option<Cell> {
        Cell::new(self.atoms.iter().cloned().chain(std::iter::once(atom)))
    }

    /// `self` implies `other` syntactically (other's atoms are a subset).
    pub fn implies_syntactically(&self, other: &Cell) -> bool {
        other.atoms.iter().all(|a| self.atoms.binary_search(a).is_ok())
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.atoms.iter().any(|a| a.mentions(v))
    }

    pub fn eval(&self, point: &Assignment) -> Result<bool> {
        for a in &self.atoms {
            if !a.eval(point)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and(self.atoms.iter().cloned().map(Formula::atom))
    }

    /// Merges two cells whose union is again a single cell.
    fn merge(&self, other: &Cell) -> Option<Cell> {
        let fa = self.forms();
        let fb = other.forms();
        let mut differing = None;
        for key in fa.keys().chain(fb.keys()) {
            let ia = fa.get(key).cloned().unwrap_or_default();
            let ib = fb.get(key).cloned().unwrap_or_default();
            if ia != ib {
                match &differing {
                    None => differing = Some(key.clone()),
                    Some(k) if k == key => {}
                    Some(_) => return None,
                }
            }
        }
        let key = differing?;
        let ia = fa.get(&key).cloned().unwrap_or_default();
        let ib = fb.get(&key).cloned().unwrap_or_default();
        let joined = ia.convex_union(&ib)?;
        let mut forms = fa;
        if joined.is_full() {
            forms.remove(&key);
        } else {
            forms.insert(key, joined);
        }
        Some(Self::from_forms(&forms))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// A disjunction of cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dnf {
    pub cells: Vec<Cell>,
}

impl Dnf {
    pub fn falsum() -> Self {
        Dnf { cells: Vec::new() }
    }

    pub fn verum() -> Self {
        Dnf {
            cells: vec![Cell::top()],
        }
    }

    pub fn is_false(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.cells.iter().any(Cell::is_empty)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::or(self.cells.iter().map(Cell::to_formula))
    }

    /// Sorts cells, removes duplicates and syntactically subsumed cells.
    pub fn tidy(&mut self) {
        self.cells.sort();
        self.cells.dedup();
        if self.cells.iter().any(Cell::is_empty) {
            self.cells = vec![Cell::top()];
            return;
        }
        let mut kept: Vec<Cell> = Vec::with_capacity(self.cells.len());
        // Shorter cells first so that subsuming cells are seen first.
        let mut order: Vec<Cell> = std::mem::take(&mut self.cells);
        order.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for c in order {
            if !kept.iter().any(|k| c.implies_syntactically(k)) {
                kept.push(c);
            }
        }
        kept.sort();
        self.cells = kept;
    }

    /// Repeatedly fuses pairs of cells whose union is a cell, then tidies.
    pub fn merge_cells(&mut self) {
        self.tidy();
        loop {
            let mut merged = None;
            'outer: for i in 0..self.cells.len() {
                for j in (i + 1)..self.cells.len() {
                    if let Some(m) = self.cells[i].merge(&self.cells[j]) {
                        merged = Some((i, j, m));
                        break 'outer;
                    }
                }
            }
            match merged {
                None => break,
                Some((i, j, m)) => {
                    self.cells.remove(j);
                    self.cells[i] = m;
                    self.tidy();
                }
            }
        }
    }
}

fn check_cells(n: usize, max_cells: usize) -> Result<()> {
    if n > max_cells {
        Err(Error::BudgetExceeded {
            kind: BudgetKind::Cells,
            limit: max_cells,
        })
    } else {
        Ok(())
    }
}

/// Syntactic DNF (no semantic pruning) of any formula.
pub fn dnf_cells(f: &Formula, max_cells: usize) -> Result<Dnf> {
    fn go(f: &Formula, max_cells: usize) -> Result<Dnf> {
        Ok(match f {
            Formula::True => Dnf::verum(),
            Formula::False => Dnf::falsum(),
            Formula::Atom(a) => Dnf {
                cells: Cell::new([a.clone()]).into_iter().collect(),
            },
            Formula::Or(parts) => {
                let mut cells = Vec::new();
                for p in parts {
                    cells.extend(go(p, max_cells)?.cells);
                    check_cells(cells.len(), max_cells)?;
                }
                let mut d = Dnf { cells };
                d.tidy();
                d
            }
            Formula::And(parts) => {
                let mut acc = Dnf::verum();
                for p in parts {
                    let d = go(p, max_cells)?;
                    let mut next = Vec::new();
                    for a in &acc.cells {
                        for b in &d.cells {
                            if let Some(c) = a.conjoin(b) {
                                next.push(c);
                            }
                        }
                        check_cells(next.len(), max_cells)?;
                    }
                    acc = Dnf { cells: next };
                    acc.tidy();
                    if acc.is_false() {
                        break;
                    }
                }
                acc
            }
            Formula::Not(inner) => go(&inner.negate(), max_cells)?,
        })
    }
    go(f, max_cells)
}

/// Logically equivalent disjunction of conjunctions of atoms, in canonical
/// (sorted) order.
pub fn to_dnf(f: &Formula, max_cells: usize) -> Result<Formula> {
    Ok(dnf_cells(f, max_cells)?.to_formula())
}

impl Formula {
    /// Canonical DNF rendering used for reports: cells tidied and merged.
    pub fn canonical(&self, max_cells: usize) -> Result<Formula> {
        let mut d = dnf_cells(self, max_cells)?;
        d.merge_cells();
        Ok(d.to_formula())
    }
}
