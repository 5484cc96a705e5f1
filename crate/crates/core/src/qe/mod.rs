//! Quantifier elimination and decisions for linear arithmetic over the
//! rationals, with strict and non-strict inequalities.

pub mod asymptotic;
mod fm;
mod lp;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linarith::{AffineExpr, Assignment, Cell, Formula, Var, DEFAULT_MAX_CELLS};
use crate::ovskit::{LinearMap, SemilinearSet};

pub use asymptotic::{eventually, holds_from_one, holds_on_line, holds_on_open_ray, Limit, Ray};
pub use fm::{eliminate as eliminate_cell, sample_point};
pub use search::{
    eliminate_exists, eliminate_forall, equivalent, feasible_cells, find_point, fresh_vars,
    rename_map, satisfiable, simplify, valid,
};

/// Limits on a single decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Cells visited while expanding a formula.
    pub max_cells: usize,
    /// Atoms in a single cell during projection.
    pub max_atoms: usize,
    /// Drop implied atoms with exact LP checks once a cell grows large.
    pub semantic_pruning: bool,
    /// Cell size above which semantic pruning kicks in.
    pub prune_threshold: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cells: DEFAULT_MAX_CELLS,
            max_atoms: 10_000,
            semantic_pruning: true,
            prune_threshold: 12,
        }
    }
}

/// Whether a cell is nonempty over the rationals.
pub fn cell_feasible(cell: &Cell) -> bool {
    lp::cell_feasible(cell)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Quantifier blocks (outermost first) over a quantifier-free matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrenexFormula {
    blocks: Vec<(Quantifier, Vec<Var>)>,
    matrix: Formula,
}

impl PrenexFormula {
    /// Rejects a variable bound twice.
    pub fn new(blocks: Vec<(Quantifier, Vec<Var>)>, matrix: Formula) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (_, vs) in &blocks {
            for v in vs {
                if !seen.insert(*v) {
                    return Err(Error::VariableCapture(*v));
                }
            }
        }
        let blocks = blocks.into_iter().filter(|(_, vs)| !vs.is_empty()).collect();
        Ok(PrenexFormula { blocks, matrix })
    }

    pub fn exists(vars: Vec<Var>, matrix: Formula) -> Self {
        Self::new(vec![(Quantifier::Exists, vars)], matrix).expect("single block")
    }

    pub fn forall(vars: Vec<Var>, matrix: Formula) -> Self {
        Self::new(vec![(Quantifier::Forall, vars)], matrix).expect("single block")
    }

    pub fn blocks(&self) -> &[(Quantifier, Vec<Var>)] {
        &self.blocks
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn bound_vars(&self) -> BTreeSet<Var> {
        self.blocks.iter().flat_map(|(_, vs)| vs.iter().copied()).collect()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let bound = self.bound_vars();
        self.matrix.free_vars().difference(&bound).copied().collect()
    }

    /// Eliminates the blocks from index `from` inward.
    fn eliminate_from(&self, from: usize, budget: &Budget) -> Result<Formula> {
        let mut f = self.matrix.clone();
        for (q, vs) in self.blocks[from..].iter().rev() {
            let vs: BTreeSet<Var> = vs.iter().copied().collect();
            f = match q {
                Quantifier::Exists => eliminate_exists(&f, &vs, budget)?,
                Quantifier::Forall => eliminate_forall(&f, &vs, budget)?,
            };
        }
        Ok(f)
    }

    /// An equivalent quantifier-free formula over the free variables.
    pub fn eliminate(&self, budget: &Budget) -> Result<Formula> {
        self.eliminate_from(0, budget)
    }
}

impl fmt::Display for PrenexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, vs) in &self.blocks {
            let names: Vec<String> = vs.iter().map(Var::to_string).collect();
            let sym = match q {
                Quantifier::Exists => "exists",
                Quantifier::Forall => "forall",
            };
            write!(f, "{sym} {}. ", names.join(", "))?;
        }
        write!(f, "{}", self.matrix)
    }
}

/// A satisfying assignment for the leading existential block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Assignment,
}

fn require_sentence(s: &PrenexFormula) -> Result<()> {
    match s.free_vars().into_iter().next() {
        Some(v) => Err(Error::UnboundVariable(v)),
        None => Ok(()),
    }
}

/// The truth value of a sentence.
pub fn decide(sentence: &PrenexFormula, budget: &Budget) -> Result<bool> {
    require_sentence(sentence)?;
    let Some((q, _)) = sentence.blocks.first() else {
        return satisfiable(&sentence.matrix, budget);
    };
    let body = sentence.eliminate_from(1, budget)?;
    match q {
        Quantifier::Exists => satisfiable(&body, budget),
        Quantifier::Forall => valid(&body, budget),
    }
}

/// For a sentence `∃ v. ψ`, a canonical assignment of `v` making `ψ`
/// (with its inner blocks decided) true; `None` when the sentence is false.
pub fn find_witness(sentence: &PrenexFormula, budget: &Budget) -> Result<Option<Witness>> {
    require_sentence(sentence)?;
    let (q, vs) = match sentence.blocks.first() {
        Some((q, vs)) => (*q, vs.clone()),
        None => (Quantifier::Exists, Vec::new()),
    };
    if q != Quantifier::Exists {
        return Err(Error::NotQuantifierFree);
    }
    let body = if sentence.blocks.is_empty() {
        sentence.matrix.clone()
    } else {
        sentence.eliminate_from(1, budget)?
    };
    Ok(find_point(&body, &vs, budget)?.map(|assignment| Witness { assignment }))
}

/// The image `{y : ∃x ∈ set, y = Mx}` as a semilinear set.
pub fn project(set: &SemilinearSet, map: &LinearMap, budget: &Budget) -> Result<SemilinearSet> {
    if map.domain_dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.domain_dim(),
            found: set.dim(),
        });
    }
    let m = map.codomain_dim();
    let n = set.dim();
    // Source coordinates live in the block m..m+n.
    let src: Vec<Var> = (0..n).map(|j| Var::coord(m + j)).collect();
    let moved = set
        .formula()
        .rename(&rename_map(&SemilinearSet::coords(n), &src));
    let mut parts = vec![moved];
    for i in 0..m {
        let image = AffineExpr::linear(
            (0..n).map(|j| (src[j], map.matrix().get(i, j).clone())),
        );
        parts.push(Formula::eq(AffineExpr::var(Var::coord(i)) - image));
    }
    let vars: BTreeSet<Var> = src.into_iter().collect();
    let f = eliminate_exists(&Formula::and(parts), &vars, budget)?;
    SemilinearSet::new(m, simplify(&f, budget)?)
}
