//! Exact rational scalars, affine expressions, atoms and quantifier-free
//! formulas over them.

mod atom;
mod dnf;
mod expr;
mod formula;
pub mod parse;
pub mod rational;

pub use atom::{Atom, Rel};
pub use dnf::{dnf_cells, to_dnf, Cell, Dnf, DEFAULT_MAX_CELLS};
pub use expr::{assignment, AffineExpr, Assignment, Var};
pub use formula::Formula;
pub use parse::parse_formula;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
