// Module invariants over the corpus.

mod common;

use num_traits::Zero;
use ovskit::archkit::{archimedeanize, order_isomorphic};
use ovskit::corpus::{self, closed_orthant, falsify, lex_cone, CorpusEntry, OracleCone, Property};
use ovskit::linarith::{assignment, int, AffineExpr, Assignment, Rational};
use ovskit::ovskit::{wedge_verdict, OVSpace, SemilinearSet};
use ovskit::qe::{self, Ray};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn same_dim_pairs(spaces: &[CorpusEntry]) -> Vec<(&CorpusEntry, &CorpusEntry)> {
    let mut out = Vec::new();
    for (i, a) in spaces.iter().enumerate() {
        for b in &spaces[i + 1..] {
            if a.space.dim() == b.space.dim() {
                out.push((a, b));
            }
        }
    }
    out
}

#[test]
fn subcones_of_almost_archimedean_cones_are_almost_archimedean() {
    let spaces = all_spaces();
    let mut checked = 0;
    for (a, b) in same_dim_pairs(&spaces) {
        for (small, big) in [(a, b), (b, a)] {
            let budget = big.space.budget();
            if big.space.is_almost_archimedean().unwrap()
                && small.space.positive().is_subset(big.space.positive(), budget).unwrap()
            {
                assert!(
                    small.space.is_almost_archimedean().unwrap(),
                    "{} inside {}",
                    small.name,
                    big.name
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 5, "only {checked} nested pairs");
}

#[test]
fn intersections_keep_the_archimedean_properties() {
    let spaces = all_spaces();
    let mut checked = 0;
    for (a, b) in same_dim_pairs(&spaces) {
        let meet = a.space.derived(a.space.positive().intersection(b.space.positive()).unwrap());
        if a.space.is_archimedean().unwrap() && b.space.is_archimedean().unwrap() {
            assert!(meet.is_archimedean().unwrap(), "{} ∩ {}", a.name, b.name);
            checked += 1;
        }
        if a.space.is_almost_archimedean().unwrap() && b.space.is_almost_archimedean().unwrap() {
            assert!(meet.is_almost_archimedean().unwrap(), "{} ∩ {}", a.name, b.name);
            checked += 1;
        }
    }
    assert!(checked >= 5);
}

#[test]
fn d_wedge_postconditions() {
    for entry in all_spaces() {
        let v = &entry.space;
        let d = v.d_wedge().unwrap();
        assert!(v.positive().is_subset(&d, v.budget()).unwrap(), "{}", entry.name);
        assert!(wedge_verdict(&d, v.budget()).unwrap().holds, "{}", entry.name);
        let sym = d.intersection(&d.negated()).unwrap();
        assert!(sym.equivalent(&v.infinitesimal_set().unwrap(), v.budget()).unwrap());
    }
}

#[test]
fn infinitesimals_form_an_order_ideal_for_both_orders() {
    for entry in all_spaces() {
        let v = &entry.space;
        let n = v.infinitesimal_set().unwrap();
        assert!(v.is_order_ideal(&n).unwrap(), "{} in V", entry.name);
        assert!(v.d_space().unwrap().is_order_ideal(&n).unwrap(), "{} in D", entry.name);
    }
}

#[test]
fn lower_bound_form_agrees_with_the_archimedean_check() {
    for entry in all_spaces() {
        let v = &entry.space;
        assert_eq!(
            v.archimedean_lower_bound_verdict().unwrap().holds,
            v.is_archimedean().unwrap(),
            "{}",
            entry.name
        );
    }
}

#[test]
fn archimedeanization_is_idempotent_with_nested_steps() {
    for entry in corpus::standard() {
        let r = archimedeanize(&entry.space).unwrap();
        let mut prev = 0;
        for s in &r.steps {
            assert!(s.pulled_back_ideal.dim() > prev, "{}: chain not increasing", entry.name);
            prev = s.pulled_back_ideal.dim();
            assert!(s.map.verify());
        }
        assert!(r.steps.len() <= entry.space.dim());
        // Finite-dimensional corpus spaces settle after one quotient.
        assert!(r.stabilization_depth <= 1, "{}", entry.name);
        let kernel = r.composite.kernel();
        match r.steps.last() {
            Some(s) => assert!(kernel.same_span(&s.pulled_back_ideal), "{}", entry.name),
            None => assert!(kernel.is_zero()),
        }
        let again = archimedeanize(&r.final_space).unwrap();
        assert_eq!(again.stabilization_depth, 0, "{}", entry.name);
        assert!(again
            .final_space
            .positive()
            .equivalent(r.final_space.positive(), r.final_space.budget())
            .unwrap());
    }
}

#[test]
fn quotients_do_not_depend_on_the_complement() {
    let v = corpus::lex_pair_product(2);
    let (_, ideal) = v.infinitesimals().unwrap();
    let (standard, _) = v.quotient(&ideal).unwrap();
    let other = vec![ints(&[1, 1, 0, 0]), ints(&[0, 2, 1, 3])];
    let (custom, pres) = v.quotient_with_complement(&ideal, other).unwrap();
    assert!(pres.verify());
    let iso = order_isomorphic(&standard, &custom).unwrap();
    assert!(iso.found(), "{} vs {}", standard.positive(), custom.positive());

    let k2 = lex_cone(2);
    let (_, ideal) = k2.infinitesimals().unwrap();
    let (a, _) = k2.quotient(&ideal).unwrap();
    let (b, _) = k2.quotient_with_complement(&ideal, vec![ints(&[2, 5])]).unwrap();
    assert!(order_isomorphic(&a, &b).unwrap().found());
}

#[test]
fn riesz_spaces_stay_riesz_after_the_quotient() {
    let mut checked = 0;
    for entry in corpus::standard() {
        let v = &entry.space;
        if v.dim() > 4 || !v.is_riesz().unwrap() {
            continue;
        }
        let (_, ideal) = v.infinitesimals().unwrap();
        let (q, pres) = v.quotient(&ideal).unwrap();
        let d = qe::project(&v.d_wedge().unwrap(), &pres.projection, v.budget()).unwrap();
        assert!(q.derived(d).is_riesz().unwrap(), "{}", entry.name);
        checked += 1;
    }
    assert!(checked >= 3, "only {checked} Riesz spaces");
}

#[test]
fn riesz_translation_reduction_matches_all_pairs() {
    for v in [closed_orthant(2), lex_cone(2), corpus::open_orthant_cone(2), corpus::half_open_cone(2)] {
        assert_eq!(v.is_riesz().unwrap(), v.riesz_all_pairs().unwrap(), "{}", v.positive());
    }
}

fn consts(p: &[Rational]) -> Vec<AffineExpr> {
    p.iter().map(|c| AffineExpr::constant(c.clone())).collect()
}

#[test]
fn ray_encoding_implies_integer_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut held = 0;
    for entry in all_spaces() {
        let v = &entry.space;
        let n = v.dim();
        let coords = SemilinearSet::coords(n);
        let k = v.positive().formula();
        for _ in 0..40 {
            let x: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-2..=2))).collect();
            let y: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-2..=2))).collect();
            let ray = Ray::new(&coords, consts(&x), consts(&negated(&y)));
            let enc = qe::holds_from_one(k, &ray);
            if !truth(&enc, &Assignment::new()) {
                continue;
            }
            held += 1;
            for m in 1..=1000 {
                let p = combine(&x, &int(m), &y);
                assert!(truth(k, &assignment(&p)), "{}: x={x:?} y={y:?} n={m}", entry.name);
            }
        }
    }
    assert!(held >= 50, "encoding held only {held} times");
}

#[test]
fn oracle_wrappers_agree_with_exact_decisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for entry in all_spaces() {
        let v = &entry.space;
        let oracle = OracleCone::from_space(&entry.name, v);
        for _ in 0..50 {
            let p = oracle.sample(&mut rng);
            assert_eq!(oracle.contains(&p), truth(v.positive().formula(), &assignment(&p)));
        }
        if v.dim() > 4 {
            continue;
        }
        // A sampled refutation is sound evidence against the exact verdict.
        if let Some(r) = falsify(&oracle, &Property::Archimedean, 200, 0) {
            assert!(!v.is_archimedean().unwrap(), "{}: {r}", entry.name);
        }
        if let Some(r) = falsify(&oracle, &Property::AlmostArchimedean, 200, 0) {
            assert!(!v.is_almost_archimedean().unwrap(), "{}: {r}", entry.name);
        }
        let zero = vec![Rational::zero(); v.dim()];
        if let Some(r) = falsify(&oracle, &Property::Element(zero.clone()), 200, 0) {
            assert!(!v.is_archimedean_element(&zero).unwrap(), "{}: {r}", entry.name);
        }
    }
}

#[test]
fn lex_plane_refutations_are_found_by_sampling() {
    let oracle = OracleCone::from_space("lex_cone 2", &lex_cone(2));
    let r = falsify(&oracle, &Property::AlmostArchimedean, 500, 0).expect("a line in the cone");
    assert!(r.y.iter().any(|c| !c.is_zero()));
}

#[test]
fn dimension_zero_is_vacuous() {
    let v = OVSpace::new(SemilinearSet::full(0));
    assert!(v.is_cone().unwrap());
    assert!(v.is_archimedean().unwrap());
    assert!(v.is_almost_archimedean().unwrap());
}
