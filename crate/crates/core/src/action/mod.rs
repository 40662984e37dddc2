//! Groupoid actions on manifolds and their cosymplectic conditions.

pub mod graph;
pub mod leaf;
pub mod momentum;

use crate::cosymplectic::CosymplecticStructure;
use crate::error::{Error, Result};
use crate::exterior::{Chart, ChartRef, SmoothMap};
use crate::groupoid::GroupoidPresentation;
use crate::report::{Checks, Entry};
use crate::residual::{self, concat, coordinates};
use crate::symbolic::{aggregate, Expr, SamplePolicy};

pub use graph::{action_graph, iso_graph, multiplication_graph, GraphStructure};
pub use leaf::{check_leaf_restriction, LeafRestriction};
pub use momentum::{check_albert_momentum, reeb_flow_extension, MomentumMapSpec, ReebFlowActionSpec};

/// The fibered product G₁ ₛ×ᵨ M as an explicit chart A with pr_G, pr_M and
/// the action Φ, and optionally a map from the `l.`(G₁)/`r.`(M) product into A.
#[derive(Clone, Debug)]
pub struct ActionPairs {
    pub chart: ChartRef,
    pub pr_g: SmoothMap,
    pub pr_m: SmoothMap,
    pub phi: SmoothMap,
    pub pairing: Option<SmoothMap>,
}

/// Points (g, h, x) with (g, h) composable and s(h) = ρ(x).
#[derive(Clone, Debug)]
pub struct ActionTriples {
    pub chart: ChartRef,
    pub first: SmoothMap,
    pub second: SmoothMap,
    pub point: SmoothMap,
}

#[derive(Clone, Debug)]
pub struct ActionPresentation {
    pub name: String,
    pub groupoid: GroupoidPresentation,
    pub module: ChartRef,
    pub rho: SmoothMap,
    pub pairs: ActionPairs,
    pub triples: Option<ActionTriples>,
    pub free: bool,
    pub proper: bool,
}

pub fn action_pairing_chart(arrows: &ChartRef, module: &ChartRef) -> Result<ChartRef> {
    Ok(Chart::product(
        &format!("{}x{}", arrows.name(), module.name()),
        &[("l.", arrows), ("r.", module)],
    )?)
}

fn expect(what: &str, map: &SmoothMap, source: &Chart, target: &Chart) -> Result<()> {
    if map.source().as_ref() != source || map.target().as_ref() != target {
        return Err(Error::invalid(
            what,
            format!(
                "expected a map {} -> {}, got {} -> {}",
                source.name(),
                target.name(),
                map.source().name(),
                map.target().name()
            ),
        ));
    }
    Ok(())
}

impl ActionPresentation {
    pub fn validate(&self) -> Result<()> {
        let g = &self.groupoid;
        let n = &self.name;
        expect(&format!("{n}.rho"), &self.rho, &self.module, &g.objects)?;
        let a = &self.pairs;
        expect(&format!("{n}.pairs.pr_g"), &a.pr_g, &a.chart, &g.arrows)?;
        expect(&format!("{n}.pairs.pr_m"), &a.pr_m, &a.chart, &self.module)?;
        expect(&format!("{n}.pairs.phi"), &a.phi, &a.chart, &self.module)?;
        if let Some(p) = &a.pairing {
            let chart = action_pairing_chart(&g.arrows, &self.module)?;
            expect(&format!("{n}.pairs.pairing"), p, &chart, &a.chart)?;
        }
        if let Some(t) = &self.triples {
            expect(&format!("{n}.triples.first"), &t.first, &t.chart, &g.arrows)?;
            expect(&format!("{n}.triples.second"), &t.second, &t.chart, &g.arrows)?;
            expect(&format!("{n}.triples.point"), &t.point, &t.chart, &self.module)?;
        }
        Ok(())
    }

    /// The point of A over (g, x), via the pairing map.
    pub fn pair(&self, g: &[Expr], x: &[Expr]) -> Result<Option<Vec<Expr>>> {
        match &self.pairs.pairing {
            Some(p) => Ok(Some(p.apply(&concat(g, x))?)),
            None => Ok(None),
        }
    }

    /// g·x for s(g) = ρ(x).
    pub fn act(&self, g: &[Expr], x: &[Expr]) -> Result<Option<Vec<Expr>>> {
        match self.pair(g, x)? {
            Some(a) => Ok(Some(self.pairs.phi.apply(&a)?)),
            None => Ok(None),
        }
    }
}

/// Anchor, unit and compatibility laws of a left action, plus the
/// fibered-product identity.
pub fn check_action_axioms(a: &ActionPresentation, policy: &SamplePolicy) -> Result<Checks> {
    a.validate()?;
    let g = &a.groupoid;
    let p = &a.pairs;
    let mut c = Checks::new();
    c.verdict(
        "fibered",
        "s∘pr_G = ρ∘pr_M",
        &g.s.compose(&p.pr_g)?.difference_test(&a.rho.compose(&p.pr_m)?, policy)?,
    );
    c.verdict(
        "anchor",
        "ρ(gx) = t(g)",
        &a.rho.compose(&p.phi)?.difference_test(&g.t.compose(&p.pr_g)?, policy)?,
    );

    let x = coordinates(&a.module);
    let unit = g.u.apply(&a.rho.apply(&x)?)?;
    match a.pair(&unit, &x)? {
        None => c.skip("unit", "Φ(1_ρ(x), x) = x", "no pairing map for the action"),
        Some(pt) => {
            let agg = residual::labelled("pr_g", &g.arrows, &p.pr_g.apply(&pt)?, &unit, &a.module, policy)
                .combine(residual::labelled("pr_m", &a.module, &p.pr_m.apply(&pt)?, &x, &a.module, policy))
                .combine(residual::labelled("phi", &a.module, &p.phi.apply(&pt)?, &x, &a.module, policy));
            c.verdict("unit", "Φ(1_ρ(x), x) = x", &agg);
        }
    }

    let anchor = "Φ(g, Φ(h, x)) = Φ(gh, x)";
    match (&a.triples, &p.pairing, &g.pairs.pairing) {
        (Some(t), Some(_), Some(_)) => {
            let v = coordinates(&t.chart);
            let (gg, h, xx) = (t.first.apply(&v)?, t.second.apply(&v)?, t.point.apply(&v)?);
            let composable = residual::labelled("gh", &g.objects, &g.s.apply(&gg)?, &g.t.apply(&h)?, &t.chart, policy)
                .combine(residual::labelled(
                    "hx",
                    &g.objects,
                    &g.s.apply(&h)?,
                    &a.rho.apply(&xx)?,
                    &t.chart,
                    policy,
                ));
            let hx = a.act(&h, &xx)?.expect("pairing present");
            let lhs = a.act(&gg, &hx)?.expect("pairing present");
            let gh = g.multiply(&gg, &h)?.expect("pairing present");
            let rhs = a.act(&gh, &xx)?.expect("pairing present");
            c.verdict(
                "compatibility",
                anchor,
                &composable.combine(residual::labelled("phi", &a.module, &lhs, &rhs, &t.chart, policy)),
            );
        }
        (None, _, _) => {
            c.push(
                Entry::new(
                    "compatibility",
                    anchor,
                    crate::report::Status::Skipped,
                    "no triple parameterizer; compatibility attested",
                )
                .with_attestation(format!("action_compatible:{}", a.name)),
            );
        }
        _ => c.skip("compatibility", anchor, "missing pairing map"),
    }
    c.attest("free", "action is free", &format!("free:{}", a.name), a.free);
    c.attest("proper", "action is proper", &format!("proper:{}", a.name), a.proper);
    Ok(c)
}

/// dρ(R) = 0 and the LL property of the twisted action graph.
pub fn check_cosymplectic_action(
    a: &ActionPresentation,
    cg: &CosymplecticStructure,
    cm: &CosymplecticStructure,
    policy: &SamplePolicy,
) -> Result<Checks> {
    a.validate()?;
    cm.chart().require_same(&a.module)?;
    cg.chart().require_same(&a.groupoid.arrows)?;
    let mut c = Checks::new();
    let r = cm.reeb();
    let drho: Vec<Expr> = a.rho.components().iter().map(|f| r.apply(f)).collect();
    c.verdict(
        "anchor_reeb",
        "dρ(R) = 0",
        &aggregate(
            drho.iter().enumerate().map(|(i, e)| (a.groupoid.objects.coord(i).to_string(), e)),
            a.module.coords(),
            policy,
        ),
    );
    let graph = action_graph(a, cg, cm, &Expr::one())?;
    c.extend("graph", graph.checks(policy)?);
    Ok(c)
}

/// 𝒢 acting on G₁ by multiplication, with ρ = t, A = P and Φ = m.
pub fn self_action(g: &GroupoidPresentation) -> Result<ActionPresentation> {
    g.validate()?;
    let pairing = match &g.pairs.pairing {
        Some(p) => {
            let chart = action_pairing_chart(&g.arrows, &g.arrows)?;
            Some(SmoothMap::new(&chart, &g.pairs.chart, p.components().to_vec())?)
        }
        None => None,
    };
    let out = ActionPresentation {
        name: format!("{}.self", g.name),
        groupoid: g.clone(),
        module: g.arrows.clone(),
        rho: g.t.clone(),
        pairs: ActionPairs {
            chart: g.pairs.chart.clone(),
            pr_g: g.pairs.pr1.clone(),
            pr_m: g.pairs.pr2.clone(),
            phi: g.pairs.m.clone(),
            pairing,
        },
        triples: g.triples.as_ref().map(|t| ActionTriples {
            chart: t.chart.clone(),
            first: t.first.clone(),
            second: t.second.clone(),
            point: t.third.clone(),
        }),
        free: true,
        proper: true,
    };
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{cotangent_groupoid, trivial_central_extension};

    #[test]
    fn self_action_of_extension_is_cosymplectic() {
        let policy = SamplePolicy::default();
        let ext = trivial_central_extension(&cotangent_groupoid(1, &policy).unwrap()).unwrap();
        let act = self_action(&ext).unwrap();
        let ax = check_action_axioms(&act, &policy).unwrap();
        assert!(ax.passed(), "{:?}", ax.first_failure());
        let c = CosymplecticStructure::new(
            "ext",
            ext.eta.clone().unwrap(),
            ext.omega.clone().unwrap(),
            &policy,
        )
        .unwrap();
        let res = check_cosymplectic_action(&act, &c, &c, &policy).unwrap();
        assert!(res.passed(), "{:?}", res.first_failure());
    }
}
