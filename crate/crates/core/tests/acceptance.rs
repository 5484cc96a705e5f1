// One pass/fail line per acceptance criterion. Runs without the test
// harness so the table is always printed: `cargo test --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use ovskit::archkit::{archimedeanize, factor_through, is_positive_map, ArchResult};
use ovskit::cli::{run_text, Options, EXIT_OK};
use ovskit::corpus::{
    closed_orthant, falsify, generated_wedge, half_open_cone, lex_cone, lex_pair_product,
    open_orthant_cone, poly_pos_cone_deg2, Property,
};
use ovskit::linalg::Matrix;
use ovskit::linarith::{assignment, int, AffineExpr, Formula, Rational, Var};
use ovskit::ovskit::{LinearMap, OVSpace, SemilinearSet};
use ovskit::qe::{self, Budget, PrenexFormula, Quantifier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

/// Number, title, time bound in seconds, check.
type Criterion = (usize, &'static str, Option<u64>, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| format!("{err:?}"))
}

fn budget() -> Budget {
    Budget::default()
}

/// `x − t·y` with `t` a fresh variable after the coordinates.
fn line_exprs(x: &[Rational], y: &[Rational], t: Var) -> Vec<AffineExpr> {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let mut ex = AffineExpr::constant(a.clone());
            ex.add_term(t, -b.clone());
            ex
        })
        .collect()
}

/// Checks a line witness: `x − ty ∈ K` for every rational `t`, sampled on
/// integers and decided exactly, with `y ≠ 0`.
fn validate_line(space: &OVSpace, x: &[Rational], y: &[Rational]) -> Result<(), String> {
    ensure!(y.iter().any(|c| !c.is_zero()), "line direction is zero");
    let k = space.positive().formula();
    for n in -1000..=1000 {
        let p = combine(x, &int(n), y);
        ensure!(truth(k, &assignment(&p)), "x - {n}y not positive");
    }
    let t = Var::coord(space.dim());
    let off_line = space.positive().at(&line_exprs(x, y, t)).negate();
    ensure!(!e(qe::satisfiable(&off_line, &budget()))?, "line leaves the cone");
    Ok(())
}

fn c1_example_one() -> Outcome {
    let mut lines = Vec::new();
    for (name, k) in [("K1", half_open_cone(2)), ("K2", lex_cone(2))] {
        ensure!(e(k.is_cone())?, "{name} is not a cone");
        let v = e(k.almost_archimedean_verdict())?;
        ensure!(!v.holds, "{name} reported almost Archimedean");
        let w = v.witness.ok_or("missing witness")?;
        let (x, y) = (w.get("x").ok_or("no x")?, w.get("y").ok_or("no y")?);
        validate_line(&k, x, y)?;
        lines.push(format!("{name}: {w}"));
    }
    Ok(lines.join("; "))
}

fn c2_archimedeanize_k2() -> Outcome {
    let target = e(SemilinearSet::parse(1, "x1 >= 0"))?;
    for (name, k) in [("K2", lex_cone(2)), ("K1", half_open_cone(2))] {
        let r = e(archimedeanize(&k))?;
        ensure!(r.stabilization_depth == 1, "{name} depth {}", r.stabilization_depth);
        ensure!(r.final_space.dim() == 1, "{name} final dim {}", r.final_space.dim());
        ensure!(
            e(r.final_space.positive().equivalent(&target, &budget()))?,
            "{name} final set {}",
            r.final_space.positive()
        );
        ensure!(e(r.final_space.is_archimedean())?, "{name} final not Archimedean");
    }
    Ok("depth 1, final {x1 >= 0} for K2 and K1".into())
}

/// `−S` built from the formula, not the library helper.
fn reflected(s: &SemilinearSet) -> Result<SemilinearSet, String> {
    let n = s.dim();
    let neg: Vec<AffineExpr> = (0..n)
        .map(|i| AffineExpr::term(Var::coord(i), int(-1)))
        .collect();
    e(SemilinearSet::new(n, s.at(&neg)))
}

fn c3_n_and_d() -> Outcome {
    let b = budget();
    let k2 = lex_cone(2);
    let n = e(k2.infinitesimal_set())?;
    ensure!(e(n.equivalent(&e(SemilinearSet::parse(2, "x1 = 0"))?, &b))?, "N(K2) = {n}");
    let d = e(k2.d_wedge())?;
    ensure!(e(d.equivalent(&e(SemilinearSet::parse(2, "x1 >= 0"))?, &b))?, "D(K2) = {d}");
    let spaces = all_spaces();
    for entry in &spaces {
        let v = &entry.space;
        let d = e(v.d_wedge())?;
        let sym = e(d.intersection(&reflected(&d)?))?;
        ensure!(
            e(sym.equivalent(&e(v.infinitesimal_set())?, &b))?,
            "D ∩ -D differs from N on {}",
            entry.name
        );
    }
    Ok(format!("N(K2) = {{x1 = 0}}, D(K2) = {{x1 >= 0}}, D ∩ -D = N on {} spaces", spaces.len()))
}

fn c4_almost_equivalences() -> Outcome {
    let b = budget();
    let spaces = all_spaces();
    ensure!(spaces.len() >= 12, "corpus has {} spaces", spaces.len());
    let mut dims = std::collections::BTreeSet::new();
    let mut almost = 0;
    for entry in &spaces {
        let v = &entry.space;
        dims.insert(v.dim());
        let origin = SemilinearSet::origin(v.dim());
        let a = e(v.is_almost_archimedean())?;
        let (nset, nbasis) = e(v.infinitesimals())?;
        let trivial = nbasis.is_zero();
        let closed = e(v.is_uniformly_closed(&origin))?;
        ensure!(
            a == trivial && trivial == closed,
            "{}: almost {a}, N trivial {trivial}, origin closed {closed}",
            entry.name
        );
        let closure = e(v.uniform_closure(&origin))?;
        ensure!(e(closure.equivalent(&nset, &b))?, "{}: closure of 0 is not N", entry.name);
        almost += a as usize;
    }
    ensure!(dims.contains(&1) && dims.contains(&6), "dims {dims:?}");
    Ok(format!("{} spaces, dims {dims:?}, {almost} almost Archimedean", spaces.len()))
}

fn c5_d_and_quotients() -> Outcome {
    let mut almost = 0;
    let spaces = all_spaces();
    for entry in &spaces {
        let v = &entry.space;
        let b = v.budget();
        if e(v.is_almost_archimedean())? {
            almost += 1;
            ensure!(e(e(v.d_space())?.is_archimedean())?, "{}: (V, D) not Archimedean", entry.name);
        }
        let (_, ideal) = e(v.infinitesimals())?;
        let (q, pres) = e(v.quotient(&ideal))?;
        let pd = e(qe::project(&e(v.d_wedge())?, &pres.projection, b))?;
        let qd = q.derived(pd);
        let arch = e(qd.is_archimedean())?;
        let alm = e(q.is_almost_archimedean())?;
        ensure!(arch == alm, "{}: quotient Archimedean {arch}, almost {alm}", entry.name);
    }
    Ok(format!("{almost} almost Archimedean spaces; biconditional on {} quotients", spaces.len()))
}

fn rows_of(m: &Matrix) -> Vec<Vec<Rational>> {
    m.rows().to_vec()
}

fn check_triple(name: &str, r: &ArchResult, phi: &LinearMap, u: &OVSpace) -> Result<(), String> {
    let v = &r.source;
    ensure!(e(u.is_archimedean())?, "{name}: target not Archimedean");
    ensure!(e(is_positive_map(phi, v, u))?, "{name}: map not positive");
    let tilde = e(factor_through(r, phi, u))?;
    let p = rows_of(r.composite.matrix());
    let prod = mat_mul(&rows_of(tilde.matrix()), &p, r.final_space.dim(), v.dim());
    ensure!(prod == rows_of(phi.matrix()), "{name}: tilde ∘ p differs from phi");
    ensure!(e(is_positive_map(&tilde, &r.final_space, u))?, "{name}: tilde not positive");
    ensure!(rank(&p, v.dim()) == r.final_space.dim(), "{name}: projection not surjective");
    Ok(())
}

fn c6_universal_property() -> Outcome {
    let mut count = 0;
    for entry in ovskit::corpus::standard() {
        let r = e(archimedeanize(&entry.space))?;
        let m = r.final_space.dim();
        let n = entry.space.dim();
        check_triple(&entry.name, &r, &r.composite, &r.final_space)?;
        check_triple(&entry.name, &r, &LinearMap::zero(1, n), &closed_orthant(1))?;
        count += 2;
        if m > 0 && e(r.final_space.is_generating())? && entry.name.starts_with("closed_orthant") {
            // The coordinate sum is positive into the half line.
            let sum = LinearMap::new(e(Matrix::from_rows(vec![vec![int(1); n]], n))?);
            check_triple(&entry.name, &r, &sum, &closed_orthant(1))?;
            count += 1;
        }
    }
    let r = e(archimedeanize(&lex_cone(2)))?;
    let phi = LinearMap::new(Matrix::from_i64(&[&[1, 0], &[2, 0]]));
    check_triple("lex_cone 2", &r, &phi, &closed_orthant(2))?;
    count += 1;
    ensure!(count >= 10, "only {count} triples");
    Ok(format!("{count} triples factor uniquely"))
}

fn c7_polynomial_witness() -> Outcome {
    let k = poly_pos_cone_deg2();
    let r = falsify(&k, &Property::Archimedean, 100, 0).ok_or("no refutation")?;
    ensure!(r.x == ints(&[0, 0, 1]) && r.y == ints(&[-1, 0, 0]), "witness {r}");
    // 1 + n t²: leading coefficient n > 0 and discriminant −4n < 0.
    for n in 1..=1000i64 {
        let (a, bb, c) = (int(n), int(0), int(1));
        let disc = &bb * &bb - int(4) * &a * &c;
        ensure!(a.is_positive() && disc.is_negative(), "1 + {n} t^2 fails");
        let p = combine(&r.x, &int(n), &r.y);
        ensure!(p == vec![a, bb, c], "oracle point for n = {n}");
    }
    // −y = t² has a double root, so it is not strictly positive.
    let neg_y = negated(&r.y);
    let disc = &neg_y[1] * &neg_y[1] - int(4) * &neg_y[0] * &neg_y[2];
    ensure!(disc.is_zero() && !k.contains(&neg_y), "t^2 accepted");
    Ok(format!("x = 1, y = -t^2 ({r})"))
}

fn c8_open_orthants() -> Outcome {
    let mut out = Vec::new();
    for n in 2..=4 {
        let v = open_orthant_cone(n);
        ensure!(e(v.is_almost_archimedean())?, "dim {n}: not almost Archimedean");
        let verdict = e(v.archimedean_verdict())?;
        ensure!(!verdict.holds, "dim {n}: reported Archimedean");
        let w = verdict.witness.ok_or("missing witness")?;
        let (x, y) = (w.get("x").ok_or("no x")?, w.get("y").ok_or("no y")?);
        let k = v.positive().formula();
        ensure!(truth(k, &assignment(x)), "dim {n}: x not positive");
        for m in 1..=1000 {
            ensure!(truth(k, &assignment(&combine(x, &int(m), y))), "dim {n}: x - {m}y");
        }
        let t = Var::coord(n);
        let f = Formula::and([
            Formula::ge(AffineExpr::term(t, int(1)) + AffineExpr::constant(int(-1))),
            v.positive().at(&line_exprs(x, y, t)).negate(),
        ]);
        ensure!(!e(qe::satisfiable(&f, &budget()))?, "dim {n}: ray leaves the cone");
        ensure!(!truth(k, &assignment(&negated(y))), "dim {n}: -y positive");
        out.push(format!("n={n}: {w}"));
    }
    Ok(out.join("; "))
}

fn c9_lex_pairs() -> Outcome {
    for m in 1..=3 {
        let v = lex_pair_product(m);
        let b = v.budget();
        let expect_n = e(SemilinearSet::new(
            2 * m,
            Formula::and((0..m).map(|k| Formula::eq(AffineExpr::var(Var::coord(2 * k))))),
        ))?;
        ensure!(e(e(v.infinitesimal_set())?.equivalent(&expect_n, b))?, "m={m}: N wrong");
        let r = e(archimedeanize(&v))?;
        ensure!(r.stabilization_depth == 1, "m={m}: depth {}", r.stabilization_depth);
        let orth = closed_orthant(m);
        ensure!(e(r.final_space.positive().equivalent(orth.positive(), b))?, "m={m}: final");
        ensure!(e(r.projected.positive().equivalent(orth.positive(), b))?, "m={m}: quotient");
    }
    Ok("m = 1..3: N = first coordinates zero, quotient = orthant, depth 1".into())
}

fn grid_size(free: usize) -> usize {
    match free {
        1 => 1000,
        2 => 32,
        _ => 10,
    }
}

fn negate_prenex(s: &PrenexFormula) -> Result<PrenexFormula, String> {
    let blocks = s
        .blocks()
        .iter()
        .map(|(q, vs)| {
            let q = match q {
                Quantifier::Exists => Quantifier::Forall,
                Quantifier::Forall => Quantifier::Exists,
            };
            (q, vs.clone())
        })
        .collect();
    e(PrenexFormula::new(blocks, s.matrix().negate()))
}

fn vec_sum(a: &[AffineExpr], b: &[AffineExpr], sign: i64) -> Vec<AffineExpr> {
    a.iter()
        .zip(b)
        .map(|(p, q)| p.clone() + q.scale(&int(sign)))
        .collect()
}

/// Sentences about a space with the API predicate they should agree with.
fn corpus_sentences(v: &OVSpace) -> Result<Vec<(&'static str, PrenexFormula, bool)>, String> {
    let n = v.dim();
    let block = |k: usize| -> Vec<Var> { (k * n..(k + 1) * n).map(Var::coord).collect() };
    let ex = |vs: &[Var]| -> Vec<AffineExpr> { vs.iter().map(|&x| AffineExpr::var(x)).collect() };
    let (x, y, z) = (block(0), block(1), block(2));
    let (xe, ye, ze) = (ex(&x), ex(&y), ex(&z));
    let k = |p: &[AffineExpr]| v.positive().at(p);
    let nonzero = |p: &[AffineExpr]| Formula::or(p.iter().map(|c| Formula::ne(c.clone())));
    let xy: Vec<Var> = x.iter().chain(&y).copied().collect();
    let wedge = e(v.is_wedge())?;
    Ok(vec![
        (
            "additive",
            PrenexFormula::forall(
                xy.clone(),
                Formula::implies(Formula::and([k(&xe), k(&ye)]), k(&vec_sum(&xe, &ye, 1))),
            ),
            wedge,
        ),
        (
            "pointed",
            PrenexFormula::forall(
                x.clone(),
                Formula::implies(
                    Formula::and([k(&xe), k(&negated_exprs(&xe))]),
                    nonzero(&xe).negate(),
                ),
            ),
            e(v.is_cone())?,
        ),
        (
            "nontrivial",
            PrenexFormula::exists(x.clone(), Formula::and([k(&xe), nonzero(&xe)])),
            !e(v.positive().equivalent(&SemilinearSet::origin(n), v.budget()))?,
        ),
        (
            "generating",
            e(PrenexFormula::new(
                vec![(Quantifier::Forall, z.clone()), (Quantifier::Exists, xy)],
                Formula::and([
                    k(&xe),
                    k(&ye),
                    Formula::and(
                        vec_sum(&ze, &vec_sum(&xe, &ye, -1), -1)
                            .into_iter()
                            .map(Formula::eq),
                    ),
                ]),
            ))?,
            e(v.is_generating())?,
        ),
    ])
}

fn negated_exprs(p: &[AffineExpr]) -> Vec<AffineExpr> {
    p.iter().map(|c| c.scale(&int(-1))).collect()
}

fn c10_engine() -> Outcome {
    let b = budget();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let values: Vec<Vec<Rational>> = (1..=3).map(|f| grid_values(grid_size(f))).collect();
    let mut points = 0usize;
    for i in 0..500 {
        let n = rng.gen_range(2..=4usize);
        let f = random_formula(&mut rng, n, 8);
        let k = if n >= 3 && rng.gen_bool(0.5) { 2 } else { 1 };
        let elim: Vec<Var> = (n - k..n).map(Var::coord).collect();
        let free: Vec<Var> = (0..n - k).map(Var::coord).collect();
        let g = e(qe::eliminate_exists(&f, &elim.iter().copied().collect(), &b))?;
        ensure!(
            vars_of(&g).iter().all(|v| free.contains(v)),
            "instance {i}: bound variable survives in {g}"
        );
        let grid = grid(&free, &values[free.len() - 1]);
        ensure!(grid.len() >= 1000, "instance {i}: grid of {}", grid.len());
        for p in &grid {
            let expected = match elim.as_slice() {
                [y] => exists_one(&f, p, *y),
                [y1, y2] => exists_two(&f, p, *y1, *y2),
                _ => unreachable!(),
            };
            ensure!(truth(&g, p) == expected, "instance {i}: {f} vs {g} at {p:?}");
        }
        points += grid.len();
    }
    let mut sentences = 0;
    for entry in all_spaces() {
        for (label, s, api) in corpus_sentences(&entry.space)? {
            let yes = e(qe::decide(&s, &b))?;
            let no = e(qe::decide(&negate_prenex(&s)?, &b))?;
            ensure!(yes != no, "{} {label}: duality fails", entry.name);
            ensure!(yes == api, "{} {label}: sentence {yes}, predicate {api}", entry.name);
            sentences += 1;
        }
    }
    Ok(format!("500 eliminations over {points} grid points; duality on {sentences} sentences"))
}

fn small_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-3..=3))).collect()
}

fn c11_elements() -> Outcome {
    let spaces = all_spaces();
    for entry in &spaces {
        let zero = vec![Rational::zero(); entry.space.dim()];
        ensure!(e(entry.space.is_archimedean_element(&zero))?, "{}: 0 not Archimedean", entry.name);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut triples = 0;
    let hered: Vec<OVSpace> = vec![
        closed_orthant(2),
        closed_orthant(3),
        lex_cone(2),
        open_orthant_cone(2),
        e(generated_wedge(2, &[ints(&[1, 1]), ints(&[1, -1])]))?,
    ];
    let mut attempts = 0;
    while triples < 60 && attempts < 20_000 {
        attempts += 1;
        let v = &hered[attempts % hered.len()];
        let n = v.dim();
        let x = small_points(&mut rng, n);
        let z = small_points(&mut rng, n);
        let zero = vec![Rational::zero(); n];
        if !e(v.leq(&zero, &z))? || !e(v.leq(&z, &x))? || !e(v.is_archimedean_element(&x))? {
            continue;
        }
        ensure!(e(v.is_archimedean_element(&z))?, "z = {z:?} under x = {x:?}");
        triples += 1;
    }
    ensure!(triples >= 50, "only {triples} triples");
    let unit_spaces: Vec<(&str, OVSpace, Vec<Rational>)> = vec![
        ("closed_orthant 2", closed_orthant(2), ints(&[1, 1])),
        ("closed_orthant 3", closed_orthant(3), ints(&[1, 1, 1])),
        (
            "hull (1,1) (1,-1)",
            e(generated_wedge(2, &[ints(&[1, 1]), ints(&[1, -1])]))?,
            ints(&[1, 0]),
        ),
        (
            "hull (1,0,0) (1,1,0) (1,1,1)",
            e(generated_wedge(3, &[ints(&[1, 0, 0]), ints(&[1, 1, 0]), ints(&[1, 1, 1])]))?,
            ints(&[3, 2, 1]),
        ),
    ];
    let mut checked = 0;
    for (name, v, unit) in &unit_spaces {
        ensure!(e(v.is_archimedean())? && e(v.is_order_unit(unit))?, "{name}: no Archimedean unit");
        for _ in 0..200 {
            let x = small_points(&mut rng, v.dim());
            if e(v.contains(&x))? {
                ensure!(e(v.is_archimedean_element(&x))?, "{name}: {x:?} not Archimedean");
                checked += 1;
            }
        }
    }
    Ok(format!("0 on {} spaces; {triples} heredity triples; {checked} positives under units", spaces.len()))
}

const SCRIPT: &str = include_str!("../examples/scripts/corpus.ovs");

fn c12_determinism() -> Outcome {
    let opts = Options::default();
    let a = run_text(SCRIPT, &opts);
    let b = run_text(SCRIPT, &opts);
    ensure!(a.exit_code == EXIT_OK, "exit code {}", a.exit_code);
    ensure!(a.structured() == b.structured(), "in-process reports differ");
    let bin = env!("CARGO_BIN_EXE_ovskit");
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scripts/corpus.ovs");
    let mut outs = Vec::new();
    for _ in 0..2 {
        let o = e(std::process::Command::new(bin)
            .args(["--file", path, "--format", "structured", "--seed", "0"])
            .output())?;
        ensure!(o.status.code() == Some(EXIT_OK), "binary exit {:?}", o.status.code());
        outs.push(o.stdout);
    }
    ensure!(outs[0] == outs[1], "binary reports differ");
    ensure!(outs[0] == a.structured().into_bytes(), "binary and library reports differ");
    Ok(format!("{} records, byte-identical", a.records.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "two-dimensional cones", Some(1), c1_example_one),
        (2, "archimedeanization of the lex plane", Some(5), c2_archimedeanize_k2),
        (3, "infinitesimals and the D-wedge", None, c3_n_and_d),
        (4, "almost Archimedean equivalences", Some(60), c4_almost_equivalences),
        (5, "D-wedge and quotients", None, c5_d_and_quotients),
        (6, "universal property", None, c6_universal_property),
        (7, "polynomial witness", Some(1), c7_polynomial_witness),
        (8, "open orthants", None, c8_open_orthants),
        (9, "lex pair truncations", None, c9_lex_pairs),
        (10, "elimination engine", Some(120), c10_engine),
        (11, "element-level suite", None, c11_elements),
        (12, "determinism", None, c12_determinism),
    ];
    let mut failed = Vec::new();
    for (id, title, bound, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match (result, bound) {
            (Ok(msg), Some(s)) if took > Duration::from_secs(s) => {
                Err(format!("{msg}; took longer than {s} s"))
            }
            (r, _) => r,
        };
        match &result {
            Ok(msg) => println!("criterion {id:>2} PASS {title} ({took:.2?}) {msg}"),
            Err(msg) => {
                println!("criterion {id:>2} FAIL {title} ({took:.2?}) {msg}");
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
