use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::format_vector;
use crate::linarith::Rational;
use crate::ovskit::OVSpace;

type Member = Arc<dyn Fn(&[Rational]) -> bool + Send + Sync>;

/// A cone known only through an exact membership test.
#[derive(Clone)]
pub struct OracleCone {
    dim: usize,
    name: String,
    member: Member,
    /// Candidate `(x, y)` pairs tried before any generic candidates.
    seeds: Vec<(Vec<Rational>, Vec<Rational>)>,
}

impl fmt::Debug for OracleCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleCone")
            .field("dim", &self.dim)
            .field("name", &self.name)
            .finish()
    }
}

impl OracleCone {
    pub fn new(
        dim: usize,
        name: &str,
        member: impl Fn(&[Rational]) -> bool + Send + Sync + 'static,
    ) -> Self {
        OracleCone {
            dim,
            name: name.to_string(),
            member: Arc::new(member),
            seeds: Vec::new(),
        }
    }

    /// Wraps the positive set of a semilinear space.
    pub fn from_space(name: &str, space: &OVSpace) -> Self {
        let set = space.positive().clone();
        Self::new(space.dim(), name, move |p| set.contains(p).unwrap_or(false))
    }

    pub fn with_seed(mut self, x: Vec<Rational>, y: Vec<Rational>) -> Self {
        self.seeds.push((x, y));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim && (self.member)(p)
    }

    /// A pseudo-random point with small integer coordinates.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<Rational> {
        (0..self.dim)
            .map(|_| Rational::from_integer(rng.gen_range(-3i64..=3).into()))
            .collect()
    }
}

fn discriminant(p: &[Rational]) -> Rational {
    let (a, b, c) = (&p[0], &p[1], &p[2]);
    b * b - Rational::from_integer(4.into()) * a * c
}

/// Coefficients `(a, b, c)` of `a·t² + b·t + c` that are strictly positive
/// on the whole line, together with the zero polynomial.
pub fn poly_pos_cone_deg2() -> OracleCone {
    let one = |k: i64| Rational::from_integer(k.into());
    OracleCone::new(3, "poly_pos_deg2", |p| {
        let (a, b, c) = (&p[0], &p[1], &p[2]);
        (a.is_positive() && discriminant(p).is_negative())
            || (a.is_zero() && b.is_zero() && c.is_positive())
            || (a.is_zero() && b.is_zero() && c.is_zero())
    })
    // x ≡ 1, y = −t²
    .with_seed(vec![one(0), one(0), one(1)], vec![one(-1), one(0), one(0)])
}

/// Coefficients of degree-2 polynomials that are nonnegative everywhere.
pub fn poly_nonneg_cone_deg2() -> OracleCone {
    OracleCone::new(3, "poly_nonneg_deg2", |p| {
        let (a, b, c) = (&p[0], &p[1], &p[2]);
        (a.is_positive() && !discriminant(p).is_positive())
            || (a.is_zero() && b.is_zero() && !c.is_negative())
    })
}

/// Property refuted by [`falsify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    /// `x − ny ∈ K` for `n ≥ 1` forces `−y ∈ K`.
    Archimedean,
    /// `x − ny ∈ K` for all integers `n` forces `y = 0`.
    AlmostArchimedean,
    /// `x + ny ∈ K` for `n ≥ 1` forces `y ∈ K`.
    Element(Vec<Rational>),
}

/// A sampled refutation: every listed `n` satisfied the hypothesis and
/// the conclusion failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub checked: Vec<i64>,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.checked.iter().min().copied().unwrap_or(0);
        let hi = self.checked.iter().max().copied().unwrap_or(0);
        write!(
            f,
            "x = {}, y = {}, n in {lo}..={hi}",
            format_vector(&self.x),
            format_vector(&self.y)
        )
    }
}

/// Largest `|n|` checked by [`falsify`].
pub const SAMPLE_N: i64 = 1000;

fn lin(x: &[Rational], n: i64, y: &[Rational]) -> Vec<Rational> {
    let n = Rational::from_integer(n.into());
    x.iter().zip(y).map(|(a, b)| a + &n * b).collect()
}

fn unit(dim: usize, i: usize, sign: i64) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::from_integer(sign.into());
    v
}

fn try_pair(oracle: &OracleCone, property: &Property, x: &[Rational], y: &[Rational]) -> Option<Refutation> {
    let (ns, sign): (Vec<i64>, i64) = match property {
        Property::Archimedean => {
            let neg_y: Vec<Rational> = y.iter().map(|c| -c).collect();
            if oracle.contains(&neg_y) {
                return None;
            }
            ((1..=SAMPLE_N).collect(), -1)
        }
        Property::AlmostArchimedean => {
            if y.iter().all(Zero::is_zero) {
                return None;
            }
            ((-SAMPLE_N..=SAMPLE_N).collect(), -1)
        }
        Property::Element(_) => {
            if oracle.contains(y) {
                return None;
            }
            ((1..=SAMPLE_N).collect(), 1)
        }
    };
    for &n in &ns {
        if !oracle.contains(&lin(x, sign * n, y)) {
            return None;
        }
    }
    Some(Refutation {
        x: x.to_vec(),
        y: y.to_vec(),
        checked: ns,
    })
}

/// Searches for a counterexample: seeded pairs first, then unit-vector
/// pairs, then random small-integer pairs, `budget` pairs in total.
/// Never certifies that the property holds.
pub fn falsify(oracle: &OracleCone, property: &Property, budget: usize, seed: u64) -> Option<Refutation> {
    let d = oracle.dim();
    let mut xs: Vec<Vec<Rational>> = Vec::new();
    let mut pairs: Vec<(Vec<Rational>, Vec<Rational>)> = oracle.seeds.clone();
    let mut ys: Vec<Vec<Rational>> = Vec::new();
    for i in 0..d {
        ys.push(unit(d, i, 1));
        ys.push(unit(d, i, -1));
    }
    match property {
        Property::Element(x) => xs.push(x.clone()),
        _ => {
            xs.extend((0..d).map(|i| unit(d, i, 1)));
            xs.push(vec![Rational::from_integer(1.into()); d]);
        }
    }
    for x in &xs {
        for y in &ys {
            pairs.push((x.clone(), y.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = 0;
    let mut idx = 0;
    while tried < budget {
        let (x, y) = if idx < pairs.len() {
            idx += 1;
            pairs[idx - 1].clone()
        } else {
            let x = match property {
                Property::Element(x) => x.clone(),
                _ => oracle.sample(&mut rng),
            };
            (x, oracle.sample(&mut rng))
        };
        tried += 1;
        if x.len() != d || y.len() != d {
            continue;
        }
        if let Some(r) = try_pair(oracle, property, &x, &y) {
            return Some(r);
        }
    }
    None
}
