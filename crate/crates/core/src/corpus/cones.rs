use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::linarith::{AffineExpr, Formula, Rational, Var};
use crate::ovskit::{LinearMap, OVSpace, SemilinearSet, Settings};
use crate::qe;

fn x(i: usize) -> AffineExpr {
    AffineExpr::var(Var::coord(i))
}

fn space(dim: usize, f: Formula) -> OVSpace {
    OVSpace::new(SemilinearSet::new(dim, f).expect("formula within dimension"))
}

fn all_zero(range: std::ops::Range<usize>) -> Formula {
    Formula::and(range.map(|i| Formula::eq(x(i))))
}

/// `{x : xᵢ ≥ 0 for all i}`.
pub fn closed_orthant(n: usize) -> OVSpace {
    space(n, Formula::and((0..n).map(|i| Formula::ge(x(i)))))
}

/// `{x : xᵢ > 0 for all i} ∪ {0}`: bounded functions on an `n`-point set
/// ordered by `f < g` iff `min(g − f) > 0`.
pub fn open_orthant_cone(n: usize) -> OVSpace {
    space(
        n,
        Formula::or([
            Formula::and((0..n).map(|i| Formula::gt(x(i)))),
            all_zero(0..n),
        ]),
    )
}

/// `{x : x₁ > 0} ∪ {0}`.
pub fn half_open_cone(n: usize) -> OVSpace {
    if n == 0 {
        return zero_cone(0);
    }
    space(n, Formula::or([Formula::gt(x(0)), all_zero(0..n)]))
}

fn lex_formula(coords: &[usize]) -> Formula {
    match coords {
        [] => Formula::True,
        [last] => Formula::ge(x(*last)),
        [first, rest @ ..] => Formula::or([
            Formula::gt(x(*first)),
            Formula::and([Formula::eq(x(*first)), lex_formula(rest)]),
        ]),
    }
}

/// Vectors whose first nonzero coordinate is positive, and 0.
pub fn lex_cone(n: usize) -> OVSpace {
    let coords: Vec<usize> = (0..n).collect();
    space(n, lex_formula(&coords))
}

/// `m` independent lexicographic planes in dimension `2m`; coordinates
/// `(x₁, x₂)` form the first plane, `(x₃, x₄)` the second, and so on.
pub fn lex_pair_product(m: usize) -> OVSpace {
    space(
        2 * m,
        Formula::and((0..m).map(|k| lex_formula(&[2 * k, 2 * k + 1]))),
    )
}

/// `{x : c·x ≥ 0}`.
pub fn halfspace_wedge(c: &[Rational]) -> OVSpace {
    let form = AffineExpr::linear(c.iter().enumerate().map(|(i, ci)| (Var::coord(i), ci.clone())));
    space(c.len(), Formula::ge(form))
}

/// The whole space.
pub fn full_wedge(n: usize) -> OVSpace {
    space(n, Formula::True)
}

/// `{0}`.
pub fn zero_cone(n: usize) -> OVSpace {
    space(n, all_zero(0..n))
}

/// The closed convex cone generated by `generators` in dimension `dim`.
pub fn generated_wedge(dim: usize, generators: &[Vec<Rational>]) -> Result<OVSpace> {
    generated_wedge_with(dim, generators, &Settings::default())
}

pub fn generated_wedge_with(
    dim: usize,
    generators: &[Vec<Rational>],
    settings: &Settings,
) -> Result<OVSpace> {
    for g in generators {
        if g.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.len(),
            });
        }
    }
    let k = generators.len();
    let weights = SemilinearSet::new(k, Formula::and((0..k).map(|i| Formula::ge(x(i)))))?;
    let map = LinearMap::new(Matrix::from_columns(generators, dim)?);
    let positive = qe::project(&weights, &map, &settings.budget)?;
    Ok(OVSpace::with_settings(positive, settings.clone()))
}

/// A named corpus space.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub space: OVSpace,
}

fn entry(name: &str, space: OVSpace) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        space,
    }
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| Rational::from_integer(c.into())).collect()
}

/// The standard corpus of spaces used by the property suites.
pub fn standard() -> Vec<CorpusEntry> {
    vec![
        entry("closed_orthant 1", closed_orthant(1)),
        entry("closed_orthant 2", closed_orthant(2)),
        entry("closed_orthant 3", closed_orthant(3)),
        entry("closed_orthant 6", closed_orthant(6)),
        entry("lex_cone 2", lex_cone(2)),
        entry("lex_cone 3", lex_cone(3)),
        entry("half_open_cone 2", half_open_cone(2)),
        entry("open_orthant_cone 2", open_orthant_cone(2)),
        entry("open_orthant_cone 3", open_orthant_cone(3)),
        entry("open_orthant_cone 4", open_orthant_cone(4)),
        entry("lex_pair_product 2", lex_pair_product(2)),
        entry("lex_pair_product 3", lex_pair_product(3)),
        entry(
            "hull (1,1) (1,-1)",
            generated_wedge(2, &[ints(&[1, 1]), ints(&[1, -1])]).expect("small hull"),
        ),
        entry(
            "hull (1,0,0) (1,1,0) (1,1,1)",
            generated_wedge(3, &[ints(&[1, 0, 0]), ints(&[1, 1, 0]), ints(&[1, 1, 1])])
                .expect("small hull"),
        ),
        entry("zero_cone 2", zero_cone(2)),
    ]
}

/// Wedges that are not cones; predicates apply, Archimedeanization does not.
pub fn wedges() -> Vec<CorpusEntry> {
    vec![
        entry("halfspace_wedge (1,1)", halfspace_wedge(&ints(&[1, 1]))),
        entry("full_wedge 1", full_wedge(1)),
    ]
}

/// Looks up a constructor by name with integer arguments.
pub fn by_name(name: &str, args: &[Rational]) -> Result<OVSpace> {
    let nat = |i: usize| -> Result<usize> {
        let a = args.get(i).ok_or_else(|| bad(name, "missing argument"))?;
        if !a.is_integer() || a < &Rational::default() {
            return Err(bad(name, "expected a natural number"));
        }
        a.to_integer()
            .try_into()
            .map_err(|_| bad(name, "argument too large"))
    };
    let one_arg = || -> Result<()> {
        if args.len() != 1 {
            return Err(bad(name, "expected one argument"));
        }
        Ok(())
    };
    Ok(match name {
        "closed_orthant" => {
            one_arg()?;
            closed_orthant(nat(0)?)
        }
        "open_orthant_cone" => {
            one_arg()?;
            open_orthant_cone(nat(0)?)
        }
        "half_open_cone" => {
            one_arg()?;
            half_open_cone(nat(0)?)
        }
        "lex_cone" => {
            one_arg()?;
            lex_cone(nat(0)?)
        }
        "lex_pair_product" => {
            one_arg()?;
            lex_pair_product(nat(0)?)
        }
        "full_wedge" => {
            one_arg()?;
            full_wedge(nat(0)?)
        }
        "zero_cone" => {
            one_arg()?;
            zero_cone(nat(0)?)
        }
        "halfspace_wedge" => halfspace_wedge(args),
        _ => return Err(bad(name, "unknown corpus entry")),
    })
}

fn bad(name: &str, msg: &str) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: format!("{name}: {msg}"),
    }
}
