//! Standard cones, the lexicographic examples, finite truncations, and an
//! exact-oracle layer for cones that are not semilinear.

mod cones;
mod oracle;

pub use cones::{
    by_name, closed_orthant, full_wedge, generated_wedge, generated_wedge_with, half_open_cone,
    halfspace_wedge, lex_cone, lex_pair_product, open_orthant_cone, standard, wedges,
    zero_cone, CorpusEntry,
};
pub use oracle::{
    falsify, poly_nonneg_cone_deg2, poly_pos_cone_deg2, OracleCone, Property, Refutation,
    SAMPLE_N,
};
