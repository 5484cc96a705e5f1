use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::encode::{self, add, consts, exprs, from_one, neg, nonzero, on_line, read, sub, Vars};
use super::{Evidence, OrderUnit, SemilinearSet, Subspace, Verdict};
use crate::error::{Error, Result};
use crate::linarith::{AffineExpr, Formula, Rational, Var};
use crate::qe::{self, Budget, Limit, Ray};

/// Limits shared by every decision made on a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub budget: Budget,
    /// Largest dimension for supremum and Riesz checks.
    pub lattice_dim_max: usize,
    /// Largest dimension for order-isomorphism searches.
    pub iso_dim_max: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            budget: Budget::default(),
            lattice_dim_max: 4,
            iso_dim_max: 3,
        }
    }
}

/// `ℚⁿ` with a distinguished positive set.
#[derive(Debug, Clone)]
pub struct OVSpace {
    positive: SemilinearSet,
    settings: Settings,
    wedge: OnceLock<bool>,
    cone: OnceLock<bool>,
    generating: OnceLock<bool>,
    infinitesimal_set: OnceLock<SemilinearSet>,
    d_set: OnceLock<SemilinearSet>,
}

fn check_dim(expected: usize, v: &[Rational]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

fn witness_point(f: &Formula, order: &[Var], b: &Budget) -> Result<Option<crate::linarith::Assignment>> {
    qe::find_point(f, order, b)
}

/// Decides closure under addition and nonnegative scaling.
pub fn wedge_verdict(s: &SemilinearSet, b: &Budget) -> Result<Verdict> {
    let n = s.dim();
    if !s.contains(&vec![Rational::zero(); n])? {
        // r = 0 maps any member to the missing origin.
        let coords = SemilinearSet::coords(n);
        let mut ev = Evidence::new();
        if let Some(p) = witness_point(s.formula(), &coords, b)? {
            ev = ev.with("x", read(&p, &coords));
        }
        return Ok(Verdict::no(ev.with("r", vec![Rational::zero()])));
    }
    let mut vars = Vars::new(n);
    let x = vars.block();
    let y = vars.block();
    let (xe, ye) = (exprs(&x), exprs(&y));
    let f = Formula::and([s.at(&xe), s.at(&ye), s.at(&add(&xe, &ye)).negate()]);
    let order: Vec<Var> = x.iter().chain(&y).copied().collect();
    if let Some(p) = witness_point(&f, &order, b)? {
        return Ok(Verdict::no(
            Evidence::new().with("x", read(&p, &x)).with("y", read(&p, &y)),
        ));
    }
    // s > 0, x ∈ S, x/s ∉ S
    let sv = vars.scalar();
    let f = Formula::and([
        Formula::gt(AffineExpr::var(sv)),
        s.at(&xe),
        s.at(&xe).scale_constants(sv).negate(),
    ]);
    let mut order = x.clone();
    order.push(sv);
    if let Some(p) = witness_point(&f, &order, b)? {
        let r = Rational::one() / &p[&sv];
        return Ok(Verdict::no(
            Evidence::new().with("x", read(&p, &x)).with("r", vec![r]),
        ));
    }
    Ok(Verdict::yes())
}

/// Decides whether `s` is a linear subspace.
pub fn subspace_verdict(s: &SemilinearSet, b: &Budget) -> Result<Verdict> {
    let w = wedge_verdict(s, b)?;
    if !w.holds {
        return Ok(w);
    }
    let coords = SemilinearSet::coords(s.dim());
    let f = Formula::and([s.formula().clone(), s.negated().formula().negate()]);
    if let Some(p) = witness_point(&f, &coords, b)? {
        let x = read(&p, &coords);
        let r = vec![-Rational::one()];
        return Ok(Verdict::no(Evidence::new().with("x", x).with("r", r)));
    }
    Ok(Verdict::yes())
}

/// Spans a subspace from a semilinear set known to be one, checking the
/// result against the set.
pub fn extract_basis(s: &SemilinearSet, b: &Budget) -> Result<Subspace> {
    let n = s.dim();
    let coords = SemilinearSet::coords(n);
    let mut found: Vec<Vec<Rational>> = Vec::new();
    'grow: loop {
        let span = Subspace::from_spanning(n, &found);
        for c in span.annihilator() {
            let form = AffineExpr::linear(
                coords
                    .iter()
                    .copied()
                    .zip(c)
                    .filter(|(_, x)| !x.is_zero()),
            );
            let f = Formula::and([s.formula().clone(), Formula::ne(form)]);
            if let Some(p) = witness_point(&f, &coords, b)? {
                found.push(read(&p, &coords));
                continue 'grow;
            }
        }
        break;
    }
    let span = Subspace::from_spanning(n, &found);
    if !s.equivalent(&span.to_set(), b)? {
        return Err(Error::NotASubspace);
    }
    Ok(span)
}

impl OVSpace {
    pub fn new(positive: SemilinearSet) -> Self {
        Self::with_settings(positive, Settings::default())
    }

    pub fn with_settings(positive: SemilinearSet, settings: Settings) -> Self {
        OVSpace {
            positive,
            settings,
            wedge: OnceLock::new(),
            cone: OnceLock::new(),
            generating: OnceLock::new(),
            infinitesimal_set: OnceLock::new(),
            d_set: OnceLock::new(),
        }
    }

    /// Parses the positive set from the textual formula syntax.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        Ok(Self::new(SemilinearSet::parse(dim, text)?))
    }

    /// A space with the same settings and another positive set.
    pub fn derived(&self, positive: SemilinearSet) -> Self {
        Self::with_settings(positive, self.settings.clone())
    }

    pub fn dim(&self) -> usize {
        self.positive.dim()
    }

    pub fn positive(&self) -> &SemilinearSet {
        &self.positive
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn budget(&self) -> &Budget {
        &self.settings.budget
    }

    pub fn set_settings(&mut self, settings: Settings) {
        self.settings = settings;
    }

    /// Cached flags: `None` when not yet computed.
    pub fn known_flags(&self) -> (Option<bool>, Option<bool>, Option<bool>) {
        (
            self.wedge.get().copied(),
            self.cone.get().copied(),
            self.generating.get().copied(),
        )
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        self.positive.contains(x)
    }

    fn k(&self, p: &[AffineExpr]) -> Formula {
        self.positive.at(p)
    }

    pub fn wedge_verdict(&self) -> Result<Verdict> {
        let v = wedge_verdict(&self.positive, self.budget())?;
        let _ = self.wedge.set(v.holds);
        Ok(v)
    }

    pub fn is_wedge(&self) -> Result<bool> {
        if let Some(w) = self.wedge.get() {
            return Ok(*w);
        }
        Ok(self.wedge_verdict()?.holds)
    }

    pub(crate) fn require_wedge(&self) -> Result<()> {
        if self.is_wedge()? {
            Ok(())
        } else {
            Err(Error::NotAWedge)
        }
    }

    pub fn cone_verdict(&self) -> Result<Verdict> {
        let w = self.wedge_verdict()?;
        if !w.holds {
            let _ = self.cone.set(false);
            return Ok(w);
        }
        let n = self.dim();
        let coords = SemilinearSet::coords(n);
        let x = exprs(&coords);
        let f = Formula::and([self.k(&x), self.k(&neg(&x)), nonzero(&x)]);
        let v = match witness_point(&f, &coords, self.budget())? {
            Some(p) => Verdict::no(Evidence::new().with("x", read(&p, &coords))),
            None => Verdict::yes(),
        };
        let _ = self.cone.set(v.holds);
        Ok(v)
    }

    pub fn is_cone(&self) -> Result<bool> {
        if let Some(c) = self.cone.get() {
            return Ok(*c);
        }
        Ok(self.cone_verdict()?.holds)
    }

    /// `V₊ − V₊ = V`.
    pub fn generating_verdict(&self) -> Result<Verdict> {
        let n = self.dim();
        let mut vars = Vars::new(n);
        let v = vars.block();
        let a = vars.block();
        let (ve, ae) = (exprs(&v), exprs(&a));
        let inner = Formula::and([self.k(&ae), self.k(&sub(&ae, &ve))]);
        let reach = qe::eliminate_exists(&inner, &a.iter().copied().collect(), self.budget())?;
        let out = match witness_point(&reach.negate(), &v, self.budget())? {
            Some(p) => Verdict::no(Evidence::new().with("v", read(&p, &v))),
            None => Verdict::yes(),
        };
        let _ = self.generating.set(out.holds);
        Ok(out)
    }

    pub fn is_generating(&self) -> Result<bool> {
        if let Some(g) = self.generating.get() {
            return Ok(*g);
        }
        Ok(self.generating_verdict()?.holds)
    }

    /// `x ≤ y`.
    pub fn leq(&self, x: &[Rational], y: &[Rational]) -> Result<bool> {
        check_dim(self.dim(), x)?;
        check_dim(self.dim(), y)?;
        let d: Vec<Rational> = y.iter().zip(x).map(|(a, b)| a - b).collect();
        self.contains(&d)
    }

    /// `a ≤ z ≤ b`.
    pub fn order_interval_member(&self, z: &[Rational], a: &[Rational], b: &[Rational]) -> Result<bool> {
        Ok(self.leq(a, z)? && self.leq(z, b)?)
    }

    /// Every `x` lies below some multiple of `e`.
    pub fn order_unit(&self, e: &[Rational]) -> Result<OrderUnit> {
        check_dim(self.dim(), e)?;
        if !self.contains(e)? {
            return Ok(OrderUnit::NotPositive);
        }
        self.require_wedge()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let x = vars.block();
        let t = vars.scalar();
        let te: Vec<AffineExpr> = e.iter().map(|c| AffineExpr::term(t, c.clone())).collect();
        let inner = Formula::and([
            Formula::ge(AffineExpr::var(t)),
            self.k(&sub(&te, &exprs(&x))),
        ]);
        let dominated = qe::eliminate_exists(&inner, &[t].into_iter().collect(), self.budget())?;
        Ok(match witness_point(&dominated.negate(), &x, self.budget())? {
            Some(p) => OrderUnit::NotUnit(Evidence::new().with("x", read(&p, &x))),
            None => OrderUnit::Unit,
        })
    }

    pub fn is_order_unit(&self, e: &[Rational]) -> Result<bool> {
        Ok(self.order_unit(e)? == OrderUnit::Unit)
    }

    /// `a, b ∈ A` and `a ≤ z ≤ b` imply `z ∈ A`.
    pub fn order_convex_verdict(&self, a_set: &SemilinearSet) -> Result<Verdict> {
        check_dim(self.dim(), &vec![Rational::zero(); a_set.dim()])?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let a = vars.block();
        let b = vars.block();
        let z = vars.block();
        let (ae, be, ze) = (exprs(&a), exprs(&b), exprs(&z));
        let f = Formula::and([
            a_set.at(&ae),
            a_set.at(&be),
            self.k(&sub(&ze, &ae)),
            self.k(&sub(&be, &ze)),
            a_set.at(&ze).negate(),
        ]);
        let order: Vec<Var> = a.iter().chain(&b).chain(&z).copied().collect();
        Ok(match witness_point(&f, &order, self.budget())? {
            Some(p) => Verdict::no(
                Evidence::new()
                    .with("a", read(&p, &a))
                    .with("b", read(&p, &b))
                    .with("z", read(&p, &z)),
            ),
            None => Verdict::yes(),
        })
    }

    pub fn is_order_convex(&self, a_set: &SemilinearSet) -> Result<bool> {
        Ok(self.order_convex_verdict(a_set)?.holds)
    }

    /// An order convex linear subspace.
    pub fn order_ideal_verdict(&self, a_set: &SemilinearSet) -> Result<Verdict> {
        let s = subspace_verdict(a_set, self.budget())?;
        if !s.holds {
            return Ok(s);
        }
        self.order_convex_verdict(a_set)
    }

    pub fn is_order_ideal(&self, a_set: &SemilinearSet) -> Result<bool> {
        Ok(self.order_ideal_verdict(a_set)?.holds)
    }

    /// `x ∈ V₊` and `x − ny ∈ V₊` for all `n ≥ 1` force `−y ∈ V₊`.
    pub fn archimedean_verdict(&self) -> Result<Verdict> {
        self.require_wedge()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let x = vars.block();
        let y = vars.block();
        let (xe, ye) = (exprs(&x), exprs(&y));
        let f = Formula::and([
            self.k(&xe),
            from_one(&self.positive, &xe, &neg(&ye)),
            self.k(&neg(&ye)).negate(),
        ]);
        let order: Vec<Var> = x.iter().chain(&y).copied().collect();
        Ok(match witness_point(&f, &order, self.budget())? {
            Some(p) => Verdict::no(Evidence::new().with("x", read(&p, &x)).with("y", read(&p, &y))),
            None => Verdict::yes(),
        })
    }

    pub fn is_archimedean(&self) -> Result<bool> {
        Ok(self.archimedean_verdict()?.holds)
    }

    /// The Archimedean property in lower-bound form: for `y ∈ V₊`, if
    /// `ty` bounds `z` from above for every `t ≥ 1`, then `z ≤ 0`. After
    /// dividing by `t` this reads `sy − z ∈ V₊` for all `s ∈ (0, 1]`,
    /// which is decided through the behavior as `s → 0⁺`.
    pub fn archimedean_lower_bound_verdict(&self) -> Result<Verdict> {
        self.require_wedge()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let y = vars.block();
        let z = vars.block();
        let (ye, ze) = (exprs(&y), exprs(&z));
        let ray = encode::ray(&self.positive, neg(&ze), ye.clone());
        let f = Formula::and([
            self.k(&ye),
            self.k(&sub(&ye, &ze)),
            qe::eventually(self.positive.formula(), &ray, Limit::NearZero),
            self.k(&neg(&ze)).negate(),
        ]);
        let order: Vec<Var> = y.iter().chain(&z).copied().collect();
        Ok(match witness_point(&f, &order, self.budget())? {
            Some(p) => Verdict::no(Evidence::new().with("y", read(&p, &y)).with("z", read(&p, &z))),
            None => Verdict::yes(),
        })
    }

    /// `x − ny ∈ V₊` for all integers `n` forces `y = 0`, decided both via
    /// integer translates and via lines in `V₊`; the two must agree.
    pub fn almost_archimedean_verdict(&self) -> Result<Verdict> {
        self.require_wedge()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let x = vars.block();
        let y = vars.block();
        let (xe, ye) = (exprs(&x), exprs(&y));
        let translates = Formula::and([
            self.k(&xe),
            from_one(&self.positive, &xe, &neg(&ye)),
            from_one(&self.positive, &xe, &ye),
            nonzero(&ye),
        ]);
        let line = Formula::and([on_line(&self.positive, &xe, &ye), nonzero(&ye)]);
        let b = self.budget();
        let by_translates = qe::satisfiable(&translates, b)?;
        let order: Vec<Var> = x.iter().chain(&y).copied().collect();
        let witness = witness_point(&line, &order, b)?;
        if by_translates != witness.is_some() {
            return Err(Error::EncodingDisagreement);
        }
        Ok(match witness {
            Some(p) => Verdict::no(Evidence::new().with("x", read(&p, &x)).with("y", read(&p, &y))),
            None => Verdict::yes(),
        })
    }

    pub fn is_almost_archimedean(&self) -> Result<bool> {
        Ok(self.almost_archimedean_verdict()?.holds)
    }

    fn require_positive(&self, x: &[Rational]) -> Result<()> {
        check_dim(self.dim(), x)?;
        if !self.contains(x)? {
            return Err(Error::NotPositiveElement);
        }
        self.require_wedge()
    }

    /// `x + ny ∈ V₊` for all `n ≥ 1` forces `y ∈ V₊`.
    pub fn archimedean_element_verdict(&self, x: &[Rational]) -> Result<Verdict> {
        self.require_positive(x)?;
        let coords = SemilinearSet::coords(self.dim());
        let ye = exprs(&coords);
        let f = Formula::and([
            from_one(&self.positive, &consts(x), &ye),
            self.k(&ye).negate(),
        ]);
        Ok(match witness_point(&f, &coords, self.budget())? {
            Some(p) => Verdict::no(Evidence::new().with("y", read(&p, &coords))),
            None => Verdict::yes(),
        })
    }

    pub fn is_archimedean_element(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.archimedean_element_verdict(x)?.holds)
    }

    /// `x + ny ∈ V₊` for all integers `n` forces `y = 0`.
    pub fn almost_archimedean_element_verdict(&self, x: &[Rational]) -> Result<Verdict> {
        self.require_positive(x)?;
        let coords = SemilinearSet::coords(self.dim());
        let ye = exprs(&coords);
        let f = Formula::and([on_line(&self.positive, &consts(x), &ye), nonzero(&ye)]);
        Ok(match witness_point(&f, &coords, self.budget())? {
            Some(p) => Verdict::no(Evidence::new().with("y", read(&p, &coords))),
            None => Verdict::yes(),
        })
    }

    pub fn is_almost_archimedean_element(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.almost_archimedean_element_verdict(x)?.holds)
    }

    /// The infinitely small elements: `x` with `−y ≤ nx ≤ y` for some `y`
    /// and all `n ≥ 1`.
    pub fn infinitesimal_set(&self) -> Result<SemilinearSet> {
        if let Some(s) = self.infinitesimal_set.get() {
            return Ok(s.clone());
        }
        self.require_wedge()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let x = vars.block();
        let y = vars.block();
        let (xe, ye) = (exprs(&x), exprs(&y));
        let f = Formula::and([
            from_one(&self.positive, &ye, &neg(&xe)),
            from_one(&self.positive, &ye, &xe),
        ]);
        let b = self.budget();
        let g = qe::eliminate_exists(&f, &y.iter().copied().collect(), b)?;
        let s = SemilinearSet::new(n, qe::simplify(&g, b)?)?;
        let _ = self.infinitesimal_set.set(s.clone());
        Ok(s)
    }

    /// The infinitesimals as a set and as a subspace with a basis.
    pub fn infinitesimals(&self) -> Result<(SemilinearSet, Subspace)> {
        let s = self.infinitesimal_set()?;
        let basis = extract_basis(&s, self.budget())?;
        Ok((s, basis))
    }

    /// `x` such that `nx + ξ ∈ V₊` for all `n ≥ 1` and some `ξ ∈ V₊`.
    /// Checks that it contains `V₊` and that `D ∩ −D` is the set of
    /// infinitesimals.
    pub fn d_wedge(&self) -> Result<SemilinearSet> {
        if let Some(s) = self.d_set.get() {
            return Ok(s.clone());
        }
        self.require_wedge()?;
        let n = self.dim();
        let mut vars = Vars::new(n);
        let x = vars.block();
        let xi = vars.block();
        let (xe, xie) = (exprs(&x), exprs(&xi));
        let f = Formula::and([self.k(&xie), from_one(&self.positive, &xie, &xe)]);
        let b = self.budget();
        let g = qe::eliminate_exists(&f, &xi.iter().copied().collect(), b)?;
        let d = SemilinearSet::new(n, qe::simplify(&g, b)?)?;
        if !self.positive.is_subset(&d, b)? {
            return Err(Error::PostconditionFailed("positive set not contained in D".into()));
        }
        let sym = d.intersection(&d.negated())?;
        if !sym.equivalent(&self.infinitesimal_set()?, b)? {
            return Err(Error::PostconditionFailed(
                "D ∩ −D differs from the infinitesimals".into(),
            ));
        }
        let _ = self.d_set.set(d.clone());
        Ok(d)
    }

    /// The space ordered by its D-wedge.
    pub fn d_space(&self) -> Result<OVSpace> {
        Ok(self.derived(self.d_wedge()?))
    }

    /// Points that are uniform limits of members of `A`:
    /// `∃u ∈ V₊ ∀ε > 0 ∃a ∈ A: −εu ≤ x − a ≤ εu`.
    pub fn uniform_closure(&self, a_set: &SemilinearSet) -> Result<SemilinearSet> {
        self.require_wedge()?;
        check_dim(self.dim(), &vec![Rational::zero(); a_set.dim()])?;
        let n = self.dim();
        let b = self.budget();
        let mut vars = Vars::new(n);
        let x = vars.block();
        let w = vars.block();
        let a = vars.block();
        let u = vars.block();
        let (xe, we, ae, ue) = (exprs(&x), exprs(&w), exprs(&a), exprs(&u));
        let diff = sub(&xe, &ae);
        let near = Formula::and([
            a_set.at(&ae),
            self.k(&sub(&we, &diff)),
            self.k(&add(&we, &diff)),
        ]);
        let near = qe::eliminate_exists(&near, &a.iter().copied().collect(), b)?;
        // w := ε·u; the condition is monotone in ε because u ∈ V₊.
        let zero = vec![AffineExpr::zero(); n];
        let ray = Ray::new(&w, zero, ue.clone());
        let f = Formula::and([self.k(&ue), qe::eventually(&near, &ray, Limit::NearZero)]);
        let g = qe::eliminate_exists(&f, &u.iter().copied().collect(), b)?;
        SemilinearSet::new(n, qe::simplify(&g, b)?)
    }

    pub fn uniform_closure_member(&self, a_set: &SemilinearSet, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim(), x)?;
        self.uniform_closure(a_set)?.contains(x)
    }

    /// Every uniform limit of members of `A` lies in `A`.
    pub fn uniformly_closed_verdict(&self, a_set: &SemilinearSet) -> Result<Verdict> {
        let c = self.uniform_closure(a_set)?;
        let coords = SemilinearSet::coords(self.dim());
        let f = Formula::and([c.formula().clone(), a_set.formula().negate()]);
        Ok(match witness_point(&f, &coords, self.budget())? {
            Some(p) => Verdict::no(Evidence::new().with("x", read(&p, &coords))),
            None => Verdict::yes(),
        })
    }

    pub fn is_uniformly_closed(&self, a_set: &SemilinearSet) -> Result<bool> {
        Ok(self.uniformly_closed_verdict(a_set)?.holds)
    }
}
