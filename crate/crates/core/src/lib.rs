//! Exact decision procedures for finite-dimensional ordered vector spaces
//! over the rationals whose positive cone is semilinear (a boolean
//! combination of strict and non-strict linear inequalities).
//!
//! The layers, bottom up:
//!
//! - [`linarith`]: rationals, affine expressions, atoms, formulas.
//! - [`qe`]: quantifier elimination and decisions with witnesses.
//! - [`ovskit`]: order-theoretic predicates and constructions.
//! - [`archkit`]: Archimedeanization and its universal property.
//! - [`corpus`]: standard cones and an oracle layer for non-semilinear ones.
//! - [`cli`]: a small scripting language with text and JSON-lines reports.

pub mod archkit;
pub mod cli;
pub mod corpus;
mod error;
pub mod linalg;
pub mod linarith;
pub mod ovskit;
pub mod qe;

pub use error::{BudgetKind, Error, Result};
