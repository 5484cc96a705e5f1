//! Ordered vector spaces `(ℚⁿ, V₊)` with a semilinear positive set: order
//! predicates, infinitesimals, the D-wedge, uniform closure, quotients and
//! lattice checks, each reduced to linear quantifier elimination.

pub(crate) mod encode;
mod lattice;
mod quotient;
mod set;
mod space;
mod verdict;

pub use quotient::QuotientPresentation;
pub use set::{LinearMap, SemilinearSet, Subspace};
pub use space::{extract_basis, subspace_verdict, wedge_verdict, OVSpace, Settings};
pub use verdict::{Evidence, OrderUnit, Verdict};
