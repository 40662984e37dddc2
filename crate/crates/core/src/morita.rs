//! Equivalence bimodules between cosymplectic groupoids and their
//! restriction to symplectic leaves.

use crate::action::{check_cosymplectic_action, check_leaf_restriction, self_action, ActionPresentation, LeafRestriction};
use crate::cosymplectic::CosymplecticStructure;
use crate::error::{Error, Result};
use crate::exterior::{ChartRef, SmoothMap};
use crate::groupoid::GroupoidPresentation;
use crate::report::{Checks, Entry, Status};
use crate::residual::{self, coordinates, jacobian_along, rank_entry};
use crate::submanifold::LeafSpec;
use crate::symbolic::{aggregate, Expr, SamplePolicy};

/// Points (g, x, h) with s(g) = ρ(x) and x·h defined.
#[derive(Clone, Debug)]
pub struct BiActionChart {
    pub chart: ChartRef,
    pub left: SmoothMap,
    pub point: SmoothMap,
    pub right: SmoothMap,
}

/// A section of one anchor and a connector into the other groupoid:
/// `ρ∘section = id` and `section(ρ(x))·connector(x) = x` (mirrored for σ).
#[derive(Clone, Debug)]
pub struct InverseWitness {
    pub section: SmoothMap,
    pub connector: SmoothMap,
}

/// 𝒢 acting on the left with anchor ρ, ℋ on the right with anchor σ. The
/// right action is presented as a left action of ℋ^op.
#[derive(Clone, Debug)]
pub struct MoritaManifest {
    pub name: String,
    pub cg: CosymplecticStructure,
    pub ch: CosymplecticStructure,
    pub cm: CosymplecticStructure,
    pub left: ActionPresentation,
    pub right: ActionPresentation,
    pub biaction: Option<BiActionChart>,
    pub left_witness: Option<InverseWitness>,
    pub right_witness: Option<InverseWitness>,
    pub attest_surjective: bool,
}

fn expect(what: &str, map: &SmoothMap, source: &ChartRef, target: &ChartRef) -> Result<()> {
    if map.source().as_ref() != source.as_ref() || map.target().as_ref() != target.as_ref() {
        return Err(Error::invalid(what, format!("expected a map {} -> {}", source.name(), target.name())));
    }
    Ok(())
}

impl MoritaManifest {
    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        let m = self.cm.chart();
        if self.left.module.as_ref() != m.as_ref() || self.right.module.as_ref() != m.as_ref() {
            return Err(Error::invalid(&self.name, "both actions must act on the bimodule chart"));
        }
        let n = &self.name;
        if let Some(b) = &self.biaction {
            expect(&format!("{n}.biaction.left"), &b.left, &b.chart, &self.left.groupoid.arrows)?;
            expect(&format!("{n}.biaction.point"), &b.point, &b.chart, m)?;
            expect(&format!("{n}.biaction.right"), &b.right, &b.chart, &self.right.groupoid.arrows)?;
        }
        for (side, w, own, other) in [
            ("left_witness", &self.left_witness, &self.left, &self.right),
            ("right_witness", &self.right_witness, &self.right, &self.left),
        ] {
            if let Some(w) = w {
                expect(&format!("{n}.{side}.section"), &w.section, &own.groupoid.objects, m)?;
                expect(&format!("{n}.{side}.connector"), &w.connector, m, &other.groupoid.arrows)?;
            }
        }
        Ok(())
    }

    fn act_left(&self, g: &[Expr], x: &[Expr]) -> Result<Vec<Expr>> {
        self.left
            .act(g, x)?
            .ok_or_else(|| Error::Missing(format!("pairing map of {}", self.left.name)))
    }

    fn act_right(&self, x: &[Expr], h: &[Expr]) -> Result<Vec<Expr>> {
        self.right
            .act(h, x)?
            .ok_or_else(|| Error::Missing(format!("pairing map of {}", self.right.name)))
    }
}

fn anchor_rank(id: &str, anchor: &str, rho: &SmoothMap, policy: &SamplePolicy) -> Entry {
    rank_entry(id, anchor, &rho.jacobian(), rho.source(), rho.target().dim(), policy)
}

/// Induced map M/ℋ → G₀ (or 𝒢\M → H₀) is a bijection, witnessed by a
/// section and a connector; skipped and attested otherwise.
fn induced_checks(
    c: &mut Checks,
    id: &str,
    m: &MoritaManifest,
    own: &ActionPresentation,
    other: &ActionPresentation,
    witness: Option<&InverseWitness>,
    policy: &SamplePolicy,
) -> Result<()> {
    let anchor = "induced map on orbit space is a diffeomorphism";
    let Some(w) = witness else {
        c.push(
            Entry::new(id, anchor, Status::Skipped, "no inverse witness; attested")
                .with_attestation(format!("induced_diffeo:{}.{id}", m.name)),
        );
        return Ok(());
    };
    let objects = &own.groupoid.objects;
    c.verdict(
        &format!("{id}.section"),
        "anchor∘section = id",
        &own.rho.compose(&w.section)?.difference_test(&SmoothMap::identity(objects), policy)?,
    );
    let mc = m.cm.chart();
    let x = coordinates(mc);
    let base = w.section.apply(&own.rho.apply(&x)?)?;
    let conn = w.connector.apply(&x)?;
    c.verdict(
        &format!("{id}.composable"),
        "s(connector(x)) = anchor(section(anchor x))",
        &residual::vectors(
            &other.groupoid.objects,
            &other.groupoid.s.apply(&conn)?,
            &other.rho.apply(&base)?,
            mc,
            policy,
        ),
    );
    let back = other
        .act(&conn, &base)?
        .ok_or_else(|| Error::Missing(format!("pairing map of {}", other.name)))?;
    c.verdict(
        &format!("{id}.round_trip"),
        "connector(x) moves section(anchor x) to x",
        &residual::vectors(mc, &back, &x, mc, policy),
    );
    Ok(())
}

/// Submersion ranks, commutation, orbit constancy, attestations and, when
/// witnesses are given, the induced bijections.
pub fn check_morita_conditions(m: &MoritaManifest, policy: &SamplePolicy) -> Result<Checks> {
    m.validate()?;
    let b = m
        .biaction
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("bi-action parameterizer for {}", m.name)))?;
    let mut c = Checks::new();
    c.extend("left", check_cosymplectic_action(&m.left, &m.cg, &m.cm, policy)?);
    c.extend("right", check_cosymplectic_action(&m.right, &m.ch, &m.cm, policy)?);
    let (rho, sigma) = (&m.left.rho, &m.right.rho);
    c.push(anchor_rank("rho_submersion", "ρ is a submersion", rho, policy));
    c.push(anchor_rank("sigma_submersion", "σ is a submersion", sigma, policy));
    c.attest("rho_surjective", "ρ is surjective", &format!("surjective:{}.rho", m.name), m.attest_surjective);
    c.attest("sigma_surjective", "σ is surjective", &format!("surjective:{}.sigma", m.name), m.attest_surjective);

    let v = coordinates(&b.chart);
    let (g, x, h) = (b.left.apply(&v)?, b.point.apply(&v)?, b.right.apply(&v)?);
    let fibered = residual::labelled(
        "left",
        &m.left.groupoid.objects,
        &m.left.groupoid.s.apply(&g)?,
        &rho.apply(&x)?,
        &b.chart,
        policy,
    )
    .combine(residual::labelled(
        "right",
        &m.right.groupoid.objects,
        &m.right.groupoid.s.apply(&h)?,
        &sigma.apply(&x)?,
        &b.chart,
        policy,
    ));
    c.verdict("biaction_fibered", "s(g) = ρ(x), s(h) = σ(x) on the bi-action chart", &fibered);
    let lhs = m.act_left(&g, &m.act_right(&x, &h)?)?;
    let rhs = m.act_right(&m.act_left(&g, &x)?, &h)?;
    c.verdict(
        "commutation",
        "g(xh) = (gx)h",
        &residual::vectors(m.cm.chart(), &lhs, &rhs, &b.chart, policy),
    );

    let pl = &m.left.pairs;
    let pr = &m.right.pairs;
    c.verdict(
        "orbit_rho",
        "ρ(xh) = ρ(x)",
        &rho.compose(&pr.phi)?.difference_test(&rho.compose(&pr.pr_m)?, policy)?,
    );
    c.verdict(
        "orbit_sigma",
        "σ(gx) = σ(x)",
        &sigma.compose(&pl.phi)?.difference_test(&sigma.compose(&pl.pr_m)?, policy)?,
    );
    for (side, a) in [("left", &m.left), ("right", &m.right)] {
        c.attest(&format!("free_{side}"), "action is free", &format!("free:{}", a.name), a.free);
        c.attest(&format!("proper_{side}"), "action is proper", &format!("proper:{}", a.name), a.proper);
    }
    induced_checks(&mut c, "induced_rho", m, &m.left, &m.right, m.left_witness.as_ref(), policy)?;
    induced_checks(&mut c, "induced_sigma", m, &m.right, &m.left, m.right_witness.as_ref(), policy)?;
    Ok(c)
}

/// Points (g, x, h) of the leaf bi-action with the factored results in S:
/// x, gx, xh and g(xh).
#[derive(Clone, Debug)]
pub struct LeafBiAction {
    pub chart: ChartRef,
    pub iota: SmoothMap,
    pub point: SmoothMap,
    pub left: SmoothMap,
    pub right: SmoothMap,
    pub both: SmoothMap,
}

#[derive(Clone, Debug)]
pub struct LeafBimoduleSpec {
    pub leaf: LeafSpec,
    pub left: LeafRestriction,
    pub right: LeafRestriction,
    pub biaction: LeafBiAction,
    /// gx ∈ S implies g in the groupoid leaf, and the mirror statement.
    pub attest_orbit_closure: bool,
}

/// dρ(R), dσ(R), leaf restrictions on both sides, submersion ranks of the
/// restricted anchors, and commutation and orbit constancy inside S.
pub fn check_leaf_bimodule(m: &MoritaManifest, l: &LeafBimoduleSpec, policy: &SamplePolicy) -> Result<Checks> {
    m.validate()?;
    let mut c = Checks::new();
    let r = m.cm.reeb();
    let mc = m.cm.chart();
    for (id, anchor, map) in [("reeb_rho", "dρ(R) = 0", &m.left.rho), ("reeb_sigma", "dσ(R) = 0", &m.right.rho)] {
        let d: Vec<Expr> = map.components().iter().map(|f| r.apply(f)).collect();
        c.verdict(
            id,
            anchor,
            &aggregate(
                d.iter().enumerate().map(|(i, e)| (map.target().coord(i).to_string(), e)),
                mc.coords(),
                policy,
            ),
        );
    }
    c.extend("left", check_leaf_restriction(&m.left, &m.cg, &m.cm, &l.left, policy)?);
    c.extend("right", check_leaf_restriction(&m.right, &m.ch, &m.cm, &l.right, policy)?);
    let iota_s = &l.leaf.embedding.map;
    let s = l.leaf.chart();
    for (id, anchor, map) in [
        ("rho_submersion", "ρ|_S is a submersion", &m.left.rho),
        ("sigma_submersion", "σ|_S is a submersion", &m.right.rho),
    ] {
        c.push(rank_entry(id, anchor, &jacobian_along(map, iota_s)?, s, map.target().dim(), policy));
    }

    let b = &l.biaction;
    let full = m
        .biaction
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("bi-action parameterizer for {}", m.name)))?;
    expect("leaf biaction iota", &b.iota, &b.chart, &full.chart)?;
    for (k, map) in [("point", &b.point), ("left", &b.left), ("right", &b.right), ("both", &b.both)] {
        expect(&format!("leaf biaction {k}"), map, &b.chart, s)?;
    }
    let v = coordinates(&full.chart);
    let (g, x, h) = (full.left.apply(&v)?, full.point.apply(&v)?, full.right.apply(&v)?);
    let gx = m.act_left(&g, &x)?;
    let xh = m.act_right(&x, &h)?;
    let gxh = m.act_left(&g, &xh)?;
    let gx_h = m.act_right(&gx, &h)?;
    let on_b = |comps: &[Expr]| -> Result<Vec<Expr>> {
        Ok(SmoothMap::new(&full.chart, mc, comps.to_vec())?.compose(&b.iota)?.components().to_vec())
    };
    let into_m = |f: &SmoothMap| -> Result<Vec<Expr>> { Ok(iota_s.compose(f)?.components().to_vec()) };
    let mut factored = residual::labelled("point", mc, &into_m(&b.point)?, &on_b(&x)?, &b.chart, policy);
    for (k, f, target) in [("left", &b.left, &gx), ("right", &b.right, &xh), ("both", &b.both, &gxh)] {
        factored = factored.combine(residual::labelled(k, mc, &into_m(f)?, &on_b(target)?, &b.chart, policy));
    }
    c.verdict("factored", "x, gx, xh, g(xh) stay in S", &factored);
    c.verdict(
        "commutation",
        "g(xh) = (gx)h in S",
        &residual::vectors(mc, &into_m(&b.both)?, &on_b(&gx_h)?, &b.chart, policy),
    );
    let rho_s = m.left.rho.compose(iota_s)?;
    let sigma_s = m.right.rho.compose(iota_s)?;
    c.verdict(
        "orbit_rho",
        "ρ(xh) = ρ(x) in S",
        &rho_s.compose(&b.right)?.difference_test(&rho_s.compose(&b.point)?, policy)?,
    );
    c.verdict(
        "orbit_sigma",
        "σ(gx) = σ(x) in S",
        &sigma_s.compose(&b.left)?.difference_test(&sigma_s.compose(&b.point)?, policy)?,
    );
    c.attest(
        "restricted_surjective",
        "ρ|_S and σ|_S are surjective",
        &format!("surjective:{}.leaf", m.name),
        m.attest_surjective,
    );
    c.attest(
        "orbit_closure",
        "gx ∈ S implies g ∈ S_G, and the mirror statement",
        &format!("orbit_closure:{}", l.leaf.name),
        l.attest_orbit_closure,
    );
    c.push(
        Entry::new("induced_diffeo", "restricted induced maps are diffeomorphisms", Status::Skipped, "attested")
            .with_attestation(format!("induced_diffeo:{}.leaf", m.name)),
    );
    Ok(c)
}

/// G₁ as a bimodule over 𝒢 with ρ = t, σ = s, acting by multiplication on
/// both sides. Bi-action points are composable triples; the witnesses are
/// the unit section and the identity connector.
pub fn self_bimodule(g: &GroupoidPresentation, c: &CosymplecticStructure) -> Result<MoritaManifest> {
    c.chart().require_same(&g.arrows)?;
    let left = self_action(g)?;
    let right = self_action(&g.opposite()?)?;
    let tr = g
        .triples
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("composable triples of {}", g.name)))?;
    let biaction = BiActionChart {
        chart: tr.chart.clone(),
        left: tr.first.clone(),
        point: tr.second.clone(),
        right: tr.third.clone(),
    };
    let witness = InverseWitness {
        section: g.u.clone(),
        connector: SmoothMap::identity(&g.arrows),
    };
    Ok(MoritaManifest {
        name: format!("{}.bimodule", g.name),
        cg: c.clone(),
        ch: c.clone(),
        cm: c.clone(),
        left,
        right,
        biaction: Some(biaction),
        left_witness: Some(witness.clone()),
        right_witness: Some(witness),
        attest_surjective: true,
    })
}

/// The {t = 0} leaf of a trivial central extension as a bimodule leaf of
/// [`self_bimodule`]. Leaf maps are the base groupoid maps with the
/// t-coordinate dropped.
pub fn self_bimodule_leaf(g: &GroupoidPresentation, m: &MoritaManifest) -> Result<LeafBimoduleSpec> {
    let gl = g
        .leaf
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("leaf of {}", g.name)))?;
    let lp = gl
        .pairs
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("leaf pairs of {}", g.name)))?;
    let leaf = gl.leaf.clone();
    let s = leaf.chart().clone();
    let drop_t = |f: &SmoothMap, inner: &SmoothMap| -> Result<SmoothMap> {
        let comps = f.compose(inner)?.components()[..s.dim()].to_vec();
        Ok(SmoothMap::new(inner.source(), &s, comps)?)
    };
    let restriction = |a: &ActionPresentation| -> Result<LeafRestriction> {
        Ok(LeafRestriction {
            leaf_m: leaf.clone(),
            leaf_g: leaf.clone(),
            chart: lp.chart.clone(),
            iota: lp.iota.clone(),
            arrow: drop_t(&a.pairs.pr_g, &lp.iota)?,
            point: drop_t(&a.pairs.pr_m, &lp.iota)?,
            phi: lp.m.clone(),
        })
    };
    let full = m
        .biaction
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("bi-action parameterizer for {}", m.name)))?;
    // Leaf triples: the full triples chart with t1 = t2 = t3 = 0.
    let base: Vec<String> = full
        .chart
        .coords()
        .iter()
        .filter(|c| !matches!(&***c, "t1" | "t2" | "t3"))
        .map(|c| c.to_string())
        .collect();
    let chart = crate::exterior::Chart::new(&format!("{}.leaf_triples", g.name), &base)?;
    let iota = SmoothMap::new(
        &chart,
        &full.chart,
        full.chart
            .coords()
            .iter()
            .map(|c| if base.iter().any(|b| b == &**c) { Expr::var(c) } else { Expr::zero() })
            .collect(),
    )?;
    let v = coordinates(&chart);
    let at = |map: &SmoothMap| -> Result<Vec<Expr>> { Ok(map.compose(&iota)?.apply(&v)?) };
    let (gg, x, h) = (at(&full.left)?, at(&full.point)?, at(&full.right)?);
    let gx = m.act_left(&gg, &x)?;
    let xh = m.act_right(&x, &h)?;
    let gxh = m.act_left(&gg, &xh)?;
    let leaf_map = |comps: Vec<Expr>| -> Result<SmoothMap> {
        Ok(SmoothMap::new(&chart, &s, comps[..s.dim()].to_vec())?)
    };
    Ok(LeafBimoduleSpec {
        left: restriction(&m.left)?,
        right: restriction(&m.right)?,
        biaction: LeafBiAction {
            point: leaf_map(x)?,
            left: leaf_map(gx)?,
            right: leaf_map(xh)?,
            both: leaf_map(gxh)?,
            iota,
            chart,
        },
        leaf,
        attest_orbit_closure: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn self_bimodule_of_extension_passes() {
        let policy = SamplePolicy::default();
        for n in [1, 2] {
            let (g, c) = fixtures::extension(n, &policy).unwrap();
            let m = self_bimodule(&g, &c).unwrap();
            let res = check_morita_conditions(&m, &policy).unwrap();
            assert!(res.passed(), "n={n}: {:?}", res.first_failure());
            assert_eq!(res.find("commutation").unwrap().status, Status::Proved);
            let leaf = self_bimodule_leaf(&g, &m).unwrap();
            let lres = check_leaf_bimodule(&m, &leaf, &policy).unwrap();
            assert!(lres.passed(), "n={n}: {:?}", lres.first_failure());
        }
    }

    #[test]
    fn sigma_moved_along_an_orbit_breaks_constancy() {
        let policy = SamplePolicy::default();
        let (g, c) = fixtures::extension(1, &policy).unwrap();
        let mut m = self_bimodule(&g, &c).unwrap();
        m.right.rho = m.right.rho.with_component("xi", Expr::var("xi") + Expr::var("g")).unwrap();
        let res = check_morita_conditions(&m, &policy).unwrap();
        let e = res.find("orbit_sigma").unwrap();
        assert_eq!(e.status, Status::Failed);
        assert!(e.witness.is_some());
    }

    #[test]
    fn missing_biaction_is_an_error() {
        let policy = SamplePolicy::default();
        let (g, c) = fixtures::extension(1, &policy).unwrap();
        let mut m = self_bimodule(&g, &c).unwrap();
        m.biaction = None;
        assert!(matches!(check_morita_conditions(&m, &policy), Err(Error::Missing(_))));
    }
}
