// Randomized properties of the arithmetic and elimination layers.

mod common;

use std::collections::BTreeSet;

use num_traits::Zero;
use ovskit::corpus::{closed_orthant, half_open_cone, lex_cone, open_orthant_cone};
use ovskit::linalg::Matrix;
use ovskit::linarith::{
    format_rational, parse_formula, parse_rational, rat, to_dnf, AffineExpr, Assignment, Formula,
    Rational, Var, DEFAULT_MAX_CELLS,
};
use ovskit::ovskit::LinearMap;
use ovskit::qe::{self, Budget, PrenexFormula};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn formula_from(seed: u64, vars: usize, atoms: usize) -> Formula {
    random_formula(&mut ChaCha8Rng::seed_from_u64(seed), vars, atoms)
}

fn point(vals: &[(i64, i64)]) -> Assignment {
    vals.iter()
        .enumerate()
        .map(|(i, &(n, d))| (Var::coord(i), rat(n, d)))
        .collect()
}

/// Moves `p` onto the boundary of some atom of `f` by solving for the
/// first variable with a nonzero coefficient.
fn onto_boundary(f: &Formula, p: &Assignment, pick: usize) -> Assignment {
    let atoms = f.atoms();
    if atoms.is_empty() {
        return p.clone();
    }
    let a = &atoms[pick % atoms.len()];
    let Some((v, c)) = a.expr().leading() else {
        return p.clone();
    };
    let mut q = p.clone();
    q.insert(v, Rational::zero());
    let rest = affine_value(a.expr(), &q);
    q.insert(v, -rest / c);
    q
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, 1i64..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dnf_preserves_truth(seed in any::<u64>(), vals in prop::collection::vec(small_rational(), 3), pick in 0usize..8) {
        let f = formula_from(seed, 3, 6);
        let d = to_dnf(&f, DEFAULT_MAX_CELLS).unwrap();
        let p = point(&vals);
        for q in [p.clone(), onto_boundary(&f, &p, pick)] {
            prop_assert_eq!(truth(&d, &q), truth(&f, &q));
            prop_assert_eq!(f.eval(&q).unwrap(), truth(&f, &q));
        }
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>(), vals in prop::collection::vec(small_rational(), 3),
                          coeffs in prop::collection::vec(-3i64..=3, 4)) {
        let f = formula_from(seed, 3, 5);
        let mut e = AffineExpr::constant(rat(coeffs[3], 1));
        for (i, &c) in coeffs[..3].iter().enumerate() {
            e.add_term(Var::coord(i), rat(c, 1));
        }
        let p = point(&vals);
        let v = Var::coord(0);
        let mut extended = p.clone();
        extended.insert(v, affine_value(&e, &p));
        prop_assert_eq!(truth(&f.substitute(v, &e), &p), truth(&f, &extended));
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..=10_000, d in 1i64..=500) {
        let q = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&q)), Some(q));
    }

    #[test]
    fn elimination_is_sound(seed in any::<u64>(), vals in prop::collection::vec(small_rational(), 3), pick in 0usize..8) {
        let f = formula_from(seed, 3, 6);
        let y = Var::coord(2);
        let g = qe::eliminate_exists(&f, &BTreeSet::from([y]), &Budget::default()).unwrap();
        prop_assert!(!vars_of(&g).contains(&y));
        let p = point(&vals);
        let q = onto_boundary(&f, &p, pick);
        for mut r in [p, q] {
            r.remove(&y);
            prop_assert_eq!(truth(&g, &r), exists_one(&f, &r, y));
        }
    }

    #[test]
    fn witnesses_satisfy_the_matrix(seed in any::<u64>()) {
        let f = formula_from(seed, 3, 6);
        let vars: Vec<Var> = (0..3).map(Var::coord).collect();
        let s = PrenexFormula::exists(vars, f.clone());
        let b = Budget::default();
        match qe::find_witness(&s, &b).unwrap() {
            Some(w) => {
                let mut p = w.assignment.clone();
                for i in 0..3 {
                    p.entry(Var::coord(i)).or_insert_with(Rational::zero);
                }
                prop_assert!(truth(&f, &p));
            }
            None => prop_assert!(!qe::satisfiable(&f, &b).unwrap()),
        }
    }

    #[test]
    fn printed_formulas_reparse(seed in any::<u64>()) {
        let f = formula_from(seed, 3, 6);
        let g = parse_formula(&f.to_string()).unwrap();
        prop_assert!(qe::equivalent(&f, &g, &Budget::default()).unwrap(), "{} vs {}", f, g);
    }
}

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> LinearMap {
    let rows: Vec<Vec<Rational>> = (0..rows)
        .map(|i| entries[i * cols..(i + 1) * cols].iter().map(|&c| rat(c, 1)).collect())
        .collect();
    LinearMap::new(Matrix::from_rows(rows, cols).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_is_functorial(which in 0usize..4, a in prop::collection::vec(-2i64..=2, 4),
                                b in prop::collection::vec(-2i64..=2, 2)) {
        let space = [closed_orthant(2), lex_cone(2), half_open_cone(2), open_orthant_cone(2)][which].clone();
        let bud = Budget::default();
        let a = int_matrix(2, 2, &a);
        let b = int_matrix(1, 2, &b);
        let s = space.positive();
        let two_step = qe::project(&qe::project(s, &a, &bud).unwrap(), &b, &bud).unwrap();
        let direct = qe::project(s, &b.compose(&a).unwrap(), &bud).unwrap();
        prop_assert!(two_step.equivalent(&direct, &bud).unwrap());
    }
}
