//! Restriction of a cosymplectic action to symplectic leaves.

use crate::cosymplectic::CosymplecticStructure;
use crate::error::{Error, Result};
use crate::exterior::{ChartRef, SmoothMap};
use crate::report::{Checks, Status};
use crate::submanifold::{check_leaf, LeafSpec};
use crate::symbolic::SamplePolicy;

use super::ActionPresentation;

/// The restricted action S_G ₛ×ᵨ S → S on an explicit chart A_S, with its
/// inclusion into A and the factored arrow, point and action maps.
#[derive(Clone, Debug)]
pub struct LeafRestriction {
    pub leaf_m: LeafSpec,
    pub leaf_g: LeafSpec,
    pub chart: ChartRef,
    pub iota: SmoothMap,
    pub arrow: SmoothMap,
    pub point: SmoothMap,
    pub phi: SmoothMap,
}

impl LeafRestriction {
    pub fn validate(&self, a: &ActionPresentation) -> Result<()> {
        let ok = self.iota.source().as_ref() == self.chart.as_ref()
            && self.iota.target().as_ref() == a.pairs.chart.as_ref()
            && self.arrow.source().as_ref() == self.chart.as_ref()
            && self.arrow.target().as_ref() == self.leaf_g.chart().as_ref()
            && self.point.source().as_ref() == self.chart.as_ref()
            && self.point.target().as_ref() == self.leaf_m.chart().as_ref()
            && self.phi.source().as_ref() == self.chart.as_ref()
            && self.phi.target().as_ref() == self.leaf_m.chart().as_ref()
            && self.leaf_m.embedding.ambient().as_ref() == a.module.as_ref()
            && self.leaf_g.embedding.ambient().as_ref() == a.groupoid.arrows.as_ref();
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(
                format!("{}.leaf_restriction", a.name),
                "factored maps do not match the leaf and action charts",
            ))
        }
    }
}

/// Leaf invariants, commutation of the factored maps, and the Lagrangian
/// property of the restricted graph in S_G×S×S with ω_{S_G} + ω_S − ω_S.
pub fn check_leaf_restriction(
    a: &ActionPresentation,
    cg: &CosymplecticStructure,
    cm: &CosymplecticStructure,
    r: &LeafRestriction,
    policy: &SamplePolicy,
) -> Result<Checks> {
    r.validate(a)?;
    let mut c = Checks::new();
    c.extend("leaf_m", check_leaf(&r.leaf_m, cm.eta(), cm.omega(), policy)?);
    c.extend("leaf_g", check_leaf(&r.leaf_g, cg.eta(), cg.omega(), policy)?);
    let (im, ig) = (&r.leaf_m.embedding.map, &r.leaf_g.embedding.map);
    let p = &a.pairs;
    c.verdict(
        "commutes_arrow",
        "ι_G∘arrow = pr_G∘ι",
        &ig.compose(&r.arrow)?.difference_test(&p.pr_g.compose(&r.iota)?, policy)?,
    );
    c.verdict(
        "commutes_point",
        "ι_S∘point = pr_M∘ι",
        &im.compose(&r.point)?.difference_test(&p.pr_m.compose(&r.iota)?, policy)?,
    );
    c.verdict(
        "commutes_action",
        "ι_S∘Φ_S = Φ∘ι",
        &im.compose(&r.phi)?.difference_test(&p.phi.compose(&r.iota)?, policy)?,
    );
    let residual = r
        .leaf_g
        .omega_leaf
        .pullback(&r.arrow)?
        .add(&r.leaf_m.omega_leaf.pullback(&r.point)?)?
        .sub(&r.leaf_m.omega_leaf.pullback(&r.phi)?)?;
    c.verdict("lagrangian", "Γ_S*(ω_{S_G} + ω_S − ω_S) = 0", &residual.zero_test(policy));
    let (dg, ds, da) = (r.leaf_g.chart().dim(), r.leaf_m.chart().dim(), r.chart.dim());
    let anchor = "2 dim Γ_S = dim S_G + 2 dim S";
    if 2 * da == dg + 2 * ds {
        c.pass("lagrangian_dimension", anchor, Status::Proved, format!("2·{da} = {dg} + 2·{ds}"));
    } else {
        c.fail("lagrangian_dimension", anchor, format!("2·{da} ≠ {dg} + 2·{ds}"));
    }
    let propagation = cm
        .eta()
        .pullback(&p.phi)?
        .sub(&cg.eta().pullback(&p.pr_g)?)?
        .sub(&cm.eta().pullback(&p.pr_m)?)?;
    c.verdict("legendrian_propagation", "Φ*η = pr_G*η_G + pr_M*η", &propagation.zero_test(policy));
    Ok(c)
}
