//! Archimedeanization: quotient by the infinitesimals until none remain,
//! then order the result by its D-wedge. Includes the factorization of
//! positive maps into Archimedean spaces through the result.

mod iso;

use crate::error::{Error, Result};
use crate::linarith::Formula;
use crate::ovskit::{encode, Evidence, LinearMap, OVSpace, QuotientPresentation, SemilinearSet, Subspace, Verdict};
use crate::qe;

pub use iso::{order_isomorphic, IsoSearch};

/// One quotient stage.
#[derive(Debug, Clone)]
pub struct ArchStep {
    pub index: usize,
    /// The infinitesimals of the previous stage, in its coordinates.
    pub ideal: Subspace,
    /// Kernel of the composite projection up to and including this stage.
    pub pulled_back_ideal: Subspace,
    pub map: QuotientPresentation,
    /// The quotient ordered by the projected positive set.
    pub space: OVSpace,
}

#[derive(Debug, Clone)]
pub struct ArchResult {
    pub source: OVSpace,
    pub steps: Vec<ArchStep>,
    /// Product of the stage projections.
    pub composite: LinearMap,
    /// Last quotient with the projected positive set.
    pub projected: OVSpace,
    /// Last quotient ordered by its D-wedge.
    pub final_space: OVSpace,
    pub stabilization_depth: usize,
}

impl ArchResult {
    /// A right inverse of the composite built from the stage complements.
    pub fn section(&self) -> LinearMap {
        let mut s = LinearMap::identity(self.final_space.dim());
        for step in self.steps.iter().rev() {
            s = step.map.section().compose(&s).expect("stage dimensions chain");
        }
        s
    }
}

/// Quotients by infinitesimals until they vanish (at most `dim V` times),
/// then takes the D-wedge of the last quotient and checks that the result
/// is Archimedean.
pub fn archimedeanize(v: &OVSpace) -> Result<ArchResult> {
    if !v.is_cone()? {
        return Err(Error::NotACone);
    }
    let mut cur = v.clone();
    let mut composite = LinearMap::identity(v.dim());
    let mut steps: Vec<ArchStep> = Vec::new();
    loop {
        let (_, n) = cur.infinitesimals()?;
        if n.is_zero() {
            break;
        }
        if steps.len() >= v.dim() {
            return Err(Error::InternalInvariantViolation(
                "infinitesimals did not stabilize within the dimension bound".into(),
            ));
        }
        let (q, pres) = cur.quotient(&n)?;
        composite = pres.projection.compose(&composite)?;
        let pulled_back = composite.kernel();
        if let Some(prev) = steps.last() {
            if !(prev.pulled_back_ideal.is_subspace_of(&pulled_back)
                && pulled_back.dim() > prev.pulled_back_ideal.dim())
            {
                return Err(Error::InternalInvariantViolation("ideal chain not increasing".into()));
            }
        }
        steps.push(ArchStep {
            index: steps.len() + 1,
            ideal: n,
            pulled_back_ideal: pulled_back,
            map: pres,
            space: q.clone(),
        });
        cur = q;
    }
    let final_space = cur.d_space()?;
    if !final_space.is_archimedean()? {
        return Err(Error::InternalInvariantViolation(
            "D-wedge of the stabilized quotient is not Archimedean".into(),
        ));
    }
    Ok(ArchResult {
        source: v.clone(),
        stabilization_depth: steps.len(),
        steps,
        composite,
        projected: cur,
        final_space,
    })
}

fn check_shape(phi: &LinearMap, v: &OVSpace, u: &OVSpace) -> Result<()> {
    if phi.domain_dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: phi.domain_dim(),
        });
    }
    if phi.codomain_dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: phi.codomain_dim(),
        });
    }
    Ok(())
}

/// `φ(V₊) ⊆ U₊`, with a positive `x` mapped outside `U₊` on failure.
pub fn positive_map_verdict(phi: &LinearMap, v: &OVSpace, u: &OVSpace) -> Result<Verdict> {
    check_shape(phi, v, u)?;
    let coords = SemilinearSet::coords(v.dim());
    let x = encode::exprs(&coords);
    let f = Formula::and([v.positive().at(&x), u.positive().at(&phi.apply_exprs(&x)).negate()]);
    Ok(match qe::find_point(&f, &coords, v.budget())? {
        Some(p) => Verdict::no(Evidence::new().with("x", encode::read(&p, &coords))),
        None => Verdict::yes(),
    })
}

pub fn is_positive_map(phi: &LinearMap, v: &OVSpace, u: &OVSpace) -> Result<bool> {
    Ok(positive_map_verdict(phi, v, u)?.holds)
}

/// The unique `φ̃` with `φ̃ ∘ p_V = φ`, for a positive `φ` into an
/// Archimedean space; checked to be positive for the final D-wedge.
pub fn factor_through(res: &ArchResult, phi: &LinearMap, u: &OVSpace) -> Result<LinearMap> {
    check_shape(phi, &res.source, u)?;
    if !u.is_archimedean()? {
        return Err(Error::TargetNotArchimedean);
    }
    if !is_positive_map(phi, &res.source, u)? {
        return Err(Error::MapNotPositive);
    }
    let kernel = res.composite.kernel();
    for b in kernel.basis() {
        if phi.apply(b)?.iter().any(|c| !num_traits::Zero::is_zero(c)) {
            return Err(Error::KernelConditionFailed);
        }
    }
    let tilde = phi.compose(&res.section())?;
    if tilde.compose(&res.composite)? != *phi {
        return Err(Error::KernelConditionFailed);
    }
    if !is_positive_map(&tilde, &res.final_space, u)? {
        return Err(Error::InternalInvariantViolation(
            "factor map is not positive for the D-wedge".into(),
        ));
    }
    // p_V is onto, so any ψ with ψ ∘ p_V = φ agrees with φ̃.
    if !res.composite.is_surjective() {
        return Err(Error::InternalInvariantViolation("quotient map is not onto".into()));
    }
    Ok(tilde)
}
