//! Turning a [`ManifestDoc`] into validated objects.

use std::collections::BTreeMap;

use crate::action::{
    reeb_flow_extension, ActionPairs, ActionPresentation, ActionTriples, LeafRestriction, MomentumMapSpec,
    ReebFlowActionSpec,
};
use crate::cosymplectic::CosymplecticStructure;
use crate::error::{Error, Result};
use crate::exterior::{Chart, ChartRef, DifferentialForm, SmoothMap, VectorField};
use crate::group::{Group, GroupAction};
use crate::groupoid::{GroupoidLeaf, GroupoidPresentation, LeafPairs, PairChart, TripleChart};
use crate::morita::{BiActionChart, InverseWitness, LeafBiAction, LeafBimoduleSpec, MoritaManifest};
use crate::reduction::{LeafReductionSpec, ReductionGeometry, ReductionManifest};
use crate::submanifold::{EmbeddingSpec, LeafSpec};
use crate::symbolic::{parse, Expr, SamplePolicy};

use super::doc::*;

/// A validated structure, or the reason it is not cosymplectic.
pub type Structure = std::result::Result<CosymplecticStructure, String>;

#[derive(Clone, Debug)]
pub struct StructureEntry {
    pub eta: DifferentialForm,
    pub omega: DifferentialForm,
    pub attest_nonvanishing: bool,
    pub structure: Structure,
}

#[derive(Clone, Debug)]
pub struct GroupoidEntry {
    pub groupoid: GroupoidPresentation,
    /// Present when both forms are given.
    pub structure: Option<Structure>,
}

#[derive(Clone, Debug)]
pub struct ActionEntry {
    pub action: ActionPresentation,
    /// Defaults to the named groupoid.
    pub structure_g: String,
    pub structure_m: Option<String>,
    pub leaf: Option<LeafRestriction>,
}

#[derive(Clone, Debug)]
pub struct MomentumEntry {
    pub spec: ReebFlowActionSpec,
    pub structure: String,
    pub extension: ActionPresentation,
}

#[derive(Clone, Debug)]
pub enum Route {
    Momentum(String),
    Action(String),
}

#[derive(Clone, Debug)]
pub struct ReductionEntry {
    pub route: Route,
    pub geometry: ReductionGeometry,
    pub leaf: Option<LeafReductionSpec>,
    pub candidates: Vec<(DifferentialForm, DifferentialForm)>,
}

#[derive(Clone, Debug)]
pub struct MoritaEntry {
    /// Fails only when a referenced structure is not cosymplectic.
    pub manifest: std::result::Result<MoritaManifest, String>,
    pub leaf: Option<LeafBimoduleSpec>,
}

/// A fully resolved manifest together with the document it came from.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub doc: ManifestDoc,
    pub policy: SamplePolicy,
    pub charts: BTreeMap<String, ChartRef>,
    pub structures: BTreeMap<String, StructureEntry>,
    pub products: BTreeMap<String, (String, String)>,
    pub groups: BTreeMap<String, Group>,
    pub group_actions: BTreeMap<String, GroupAction>,
    pub groupoids: BTreeMap<String, GroupoidEntry>,
    pub actions: BTreeMap<String, ActionEntry>,
    pub momentum: BTreeMap<String, MomentumEntry>,
    pub reductions: BTreeMap<String, ReductionEntry>,
    pub morita: BTreeMap<String, MoritaEntry>,
}

fn unresolved(kind: &str, name: &str) -> Error {
    Error::Unresolved {
        kind: kind.to_string(),
        name: name.to_string(),
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| unresolved(kind, name))
}

fn expr(s: &str, ctx: &str) -> Result<Expr> {
    parse(s).map_err(|e| Error::invalid(ctx, format!("cannot parse `{s}`: {e}")))
}

/// Components of `table` in the order of `chart`'s coordinates; every
/// coordinate must appear exactly once.
fn ordered(table: &Table, chart: &Chart, ctx: &str) -> Result<Vec<Expr>> {
    if let Some(k) = table.keys().find(|k| chart.index_of(k).is_none()) {
        return Err(Error::invalid(ctx, format!("unknown coordinate `{k}` of {}", chart.name())));
    }
    chart
        .coords()
        .iter()
        .map(|c| {
            let s = table
                .get(&**c)
                .ok_or_else(|| Error::invalid(ctx, format!("no expression for coordinate `{c}`")))?;
            expr(s, &format!("{ctx}.{c}"))
        })
        .collect()
}

fn leaf_embedding(name: &str, map: SmoothMap, attested: bool) -> EmbeddingSpec {
    EmbeddingSpec::new(name, map, attested)
}

pub(crate) struct Resolver<'a> {
    doc: &'a ManifestDoc,
    policy: &'a SamplePolicy,
    m: Manifest,
}

impl<'a> Resolver<'a> {
    fn chart(&self, name: &str) -> Result<ChartRef> {
        lookup(&self.m.charts, "chart", name).cloned()
    }

    fn map(&self, d: &MapDoc, ctx: &str) -> Result<SmoothMap> {
        let source = self.chart(&d.source)?;
        let target = self.chart(&d.target)?;
        let comps = ordered(&d.components, &target, ctx)?;
        SmoothMap::new(&source, &target, comps).map_err(|e| Error::invalid(ctx, e.to_string()))
    }

    fn form(&self, d: &FormDoc, chart: &ChartRef, ctx: &str) -> Result<DifferentialForm> {
        let mut out = DifferentialForm::zero(chart, d.degree);
        for (index, coef) in &d.terms {
            let names: Vec<&str> = index.split_whitespace().collect();
            if names.len() != d.degree {
                return Err(Error::invalid(
                    ctx,
                    format!("index `{index}` has {} entries in a {}-form", names.len(), d.degree),
                ));
            }
            let mut positions = Vec::with_capacity(names.len());
            for n in &names {
                let i = chart.index_of(n).ok_or_else(|| {
                    Error::invalid(
                        ctx,
                        format!("unknown coordinate `{n}` in index `{index}` (chart {})", chart.name()),
                    )
                })?;
                positions.push(i);
            }
            let c = expr(coef, &format!("{ctx}[{index}]"))?;
            if let Some(v) = c.free_vars().iter().find(|v| chart.index_of(v).is_none()) {
                return Err(Error::invalid(
                    format!("{ctx}[{index}]"),
                    format!("coefficient uses `{v}`, which is not a coordinate of {}", chart.name()),
                ));
            }
            out.add_term_positions(positions, c);
        }
        Ok(out)
    }

    fn field(&self, t: &Table, chart: &ChartRef, ctx: &str) -> Result<VectorField> {
        let mut table = Vec::new();
        for (k, v) in t {
            if chart.index_of(k).is_none() {
                return Err(Error::invalid(ctx, format!("unknown coordinate `{k}` of {}", chart.name())));
            }
            table.push((k.clone(), expr(v, &format!("{ctx}.{k}"))?));
        }
        VectorField::from_table(chart, &table).map_err(|e| Error::invalid(ctx, e.to_string()))
    }

    fn structure(&self, name: &str) -> Result<&Structure> {
        if let Some(s) = self.m.structures.get(name) {
            return Ok(&s.structure);
        }
        match self.m.groupoids.get(name).and_then(|g| g.structure.as_ref()) {
            Some(s) => Ok(s),
            None => Err(unresolved("structure", name)),
        }
    }

    fn leaf(&self, d: &LeafDoc, ctx: &str) -> Result<LeafSpec> {
        let map = self.map(&d.map, &format!("{ctx}.map"))?;
        let omega_leaf = self.form(&d.omega, map.source(), &format!("{ctx}.omega"))?;
        let leaf = LeafSpec {
            name: d.name.clone(),
            embedding: leaf_embedding(&d.name, map, d.attest_injective),
            omega_leaf,
        };
        leaf.validate()?;
        Ok(leaf)
    }

    fn restriction(&self, d: &RestrictionDoc, action: &ActionPresentation, ctx: &str) -> Result<LeafRestriction> {
        let r = LeafRestriction {
            leaf_m: self.leaf(&d.leaf_m, &format!("{ctx}.leaf_m"))?,
            leaf_g: self.leaf(&d.leaf_g, &format!("{ctx}.leaf_g"))?,
            chart: self.chart(&d.chart)?,
            iota: self.map(&d.iota, &format!("{ctx}.iota"))?,
            arrow: self.map(&d.arrow, &format!("{ctx}.arrow"))?,
            point: self.map(&d.point, &format!("{ctx}.point"))?,
            phi: self.map(&d.phi, &format!("{ctx}.phi"))?,
        };
        r.validate(action)?;
        Ok(r)
    }

    fn geometry(&self, d: &GeometryDoc, ctx: &str) -> Result<ReductionGeometry> {
        let level_map = self.map(&d.level.map, &format!("{ctx}.level"))?;
        let l = level_map.source().clone();
        let isotropy = lookup(&self.m.group_actions, "group action", &d.isotropy)?.clone();
        let generators = d
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| self.field(g, &l, &format!("{ctx}.generators[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReductionGeometry {
            xi: d
                .xi
                .iter()
                .enumerate()
                .map(|(i, x)| expr(x, &format!("{ctx}.xi[{i}]")))
                .collect::<Result<_>>()?,
            attest_regular: d.attest_regular,
            level: EmbeddingSpec::new(&d.level.name, level_map, d.level.attest_injective),
            isotropy,
            generators,
            quotient: self.chart(&d.quotient)?,
            p: self.map(&d.p, &format!("{ctx}.p"))?,
            sigma: self.map(&d.sigma, &format!("{ctx}.sigma"))?,
        })
    }

    fn charts(&mut self) -> Result<()> {
        for (name, c) in &self.doc.charts {
            let chart = Chart::with_periodic(name, &c.coords, &c.periodic)
                .map_err(|e| Error::invalid(format!("charts.{name}"), e.to_string()))?;
            self.m.charts.insert(name.clone(), chart);
        }
        Ok(())
    }

    fn structures(&mut self) -> Result<()> {
        for (name, s) in &self.doc.structures {
            let ctx = format!("structures.{name}");
            let chart = self.chart(&s.chart)?;
            let eta = self.form(&s.eta, &chart, &format!("{ctx}.eta"))?;
            let omega = self.form(&s.omega, &chart, &format!("{ctx}.omega"))?;
            if eta.degree() != 1 || omega.degree() != 2 {
                return Err(Error::invalid(ctx, "η must be a 1-form and ω a 2-form"));
            }
            let structure = CosymplecticStructure::new(name, eta.clone(), omega.clone(), self.policy)
                .map(|c| c.with_attested_nonvanishing(s.attest_nonvanishing))
                .map_err(|e| e.to_string());
            self.m.structures.insert(
                name.clone(),
                StructureEntry {
                    eta,
                    omega,
                    attest_nonvanishing: s.attest_nonvanishing,
                    structure,
                },
            );
        }
        for (name, p) in &self.doc.products {
            for side in [&p.left, &p.right] {
                lookup(&self.m.structures, "structure", side)?;
            }
            self.m.products.insert(name.clone(), (p.left.clone(), p.right.clone()));
        }
        Ok(())
    }

    fn groups(&mut self) -> Result<()> {
        for (name, g) in &self.doc.groups {
            let ctx = format!("groups.{name}");
            let chart = self.chart(&g.chart)?;
            let group = Group::new(
                name,
                &chart,
                ordered(&g.mult, &chart, &format!("{ctx}.mult"))?,
                ordered(&g.unit, &chart, &format!("{ctx}.unit"))?,
                ordered(&g.inverse, &chart, &format!("{ctx}.inverse"))?,
            )
            .map_err(|e| Error::invalid(&ctx, e.to_string()))?;
            self.m.groups.insert(name.clone(), group);
        }
        for (name, a) in &self.doc.group_actions {
            let ctx = format!("group_actions.{name}");
            let group = lookup(&self.m.groups, "group", &a.group)?;
            let space = self.chart(&a.space)?;
            let comps = ordered(&a.components, &space, &ctx)?;
            let action = GroupAction::new(name, group, &space, comps).map_err(|e| Error::invalid(&ctx, e.to_string()))?;
            self.m.group_actions.insert(name.clone(), action);
        }
        Ok(())
    }

    fn groupoids(&mut self) -> Result<()> {
        for (name, g) in &self.doc.groupoids {
            let ctx = format!("groupoids.{name}");
            let arrows = self.chart(&g.arrows)?;
            let map = |d: &MapDoc, k: &str| self.map(d, &format!("{ctx}.{k}"));
            let form = |d: &Option<FormDoc>, k: &str| -> Result<Option<DifferentialForm>> {
                d.as_ref().map(|f| self.form(f, &arrows, &format!("{ctx}.{k}"))).transpose()
            };
            let leaf = match &g.leaf {
                Some(l) => Some(GroupoidLeaf {
                    leaf: self.leaf(&l.leaf, &format!("{ctx}.leaf"))?,
                    unit: map(&l.unit, "leaf.unit")?,
                    pairs: match &l.pairs {
                        Some(p) => Some(LeafPairs {
                            chart: self.chart(&p.chart)?,
                            iota: map(&p.iota, "leaf.pairs.iota")?,
                            m: map(&p.m, "leaf.pairs.m")?,
                        }),
                        None => None,
                    },
                }),
                None => None,
            };
            let groupoid = GroupoidPresentation {
                name: name.clone(),
                objects: self.chart(&g.objects)?,
                arrows: arrows.clone(),
                s: map(&g.s, "s")?,
                t: map(&g.t, "t")?,
                u: map(&g.u, "u")?,
                inv: map(&g.inv, "inv")?,
                pairs: PairChart {
                    chart: self.chart(&g.pairs.chart)?,
                    pr1: map(&g.pairs.pr1, "pairs.pr1")?,
                    pr2: map(&g.pairs.pr2, "pairs.pr2")?,
                    m: map(&g.pairs.m, "pairs.m")?,
                    pairing: g.pairs.pairing.as_ref().map(|p| map(p, "pairs.pairing")).transpose()?,
                },
                triples: match &g.triples {
                    Some(t) => Some(TripleChart {
                        chart: self.chart(&t.chart)?,
                        first: map(&t.first, "triples.first")?,
                        second: map(&t.second, "triples.second")?,
                        third: map(&t.third, "triples.third")?,
                    }),
                    None => None,
                },
                eta: form(&g.eta, "eta")?,
                omega: form(&g.omega, "omega")?,
                leaf,
            };
            groupoid.validate()?;
            let structure = match (&groupoid.eta, &groupoid.omega) {
                (Some(e), Some(w)) => Some(
                    CosymplecticStructure::new(name, e.clone(), w.clone(), self.policy).map_err(|e| e.to_string()),
                ),
                _ => None,
            };
            self.m.groupoids.insert(name.clone(), GroupoidEntry { groupoid, structure });
        }
        Ok(())
    }

    fn actions(&mut self) -> Result<()> {
        for (name, a) in &self.doc.actions {
            let ctx = format!("actions.{name}");
            let base = &lookup(&self.m.groupoids, "groupoid", &a.groupoid)?.groupoid;
            let groupoid = if a.opposite { base.opposite()? } else { base.clone() };
            for s in [&a.structure_g, &a.structure_m].into_iter().flatten() {
                self.structure(s)?;
            }
            let map = |d: &MapDoc, k: &str| self.map(d, &format!("{ctx}.{k}"));
            let action = ActionPresentation {
                name: name.clone(),
                groupoid,
                module: self.chart(&a.module)?,
                rho: map(&a.rho, "rho")?,
                pairs: ActionPairs {
                    chart: self.chart(&a.pairs.chart)?,
                    pr_g: map(&a.pairs.pr_g, "pairs.pr_g")?,
                    pr_m: map(&a.pairs.pr_m, "pairs.pr_m")?,
                    phi: map(&a.pairs.phi, "pairs.phi")?,
                    pairing: a.pairs.pairing.as_ref().map(|p| map(p, "pairs.pairing")).transpose()?,
                },
                triples: match &a.triples {
                    Some(t) => Some(ActionTriples {
                        chart: self.chart(&t.chart)?,
                        first: map(&t.first, "triples.first")?,
                        second: map(&t.second, "triples.second")?,
                        point: map(&t.point, "triples.point")?,
                    }),
                    None => None,
                },
                free: a.free,
                proper: a.proper,
            };
            action.validate()?;
            let leaf = a
                .leaf
                .as_ref()
                .map(|l| self.restriction(l, &action, &format!("{ctx}.leaf")))
                .transpose()?;
            self.m.actions.insert(
                name.clone(),
                ActionEntry {
                    action,
                    structure_g: a.structure_g.clone().unwrap_or_else(|| a.groupoid.clone()),
                    structure_m: a.structure_m.clone(),
                    leaf,
                },
            );
        }
        Ok(())
    }

    fn momentum(&mut self) -> Result<()> {
        for (name, d) in &self.doc.momentum {
            let ctx = format!("momentum.{name}");
            let action = lookup(&self.m.group_actions, "group action", &d.action)?.clone();
            let coadjoint = lookup(&self.m.group_actions, "group action", &d.coadjoint)?.clone();
            self.structure(&d.structure)?;
            let generators = d
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| self.field(g, &action.space, &format!("{ctx}.generators[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let spec = ReebFlowActionSpec {
                momentum: MomentumMapSpec {
                    name: name.clone(),
                    action,
                    generators,
                    mu: self.map(&d.mu, &format!("{ctx}.mu"))?,
                    coadjoint: coadjoint.clone(),
                },
                flow: self.map(&d.flow, &format!("{ctx}.flow"))?,
                groupoid_omega: self.form(&d.groupoid_omega, &coadjoint.source, &format!("{ctx}.groupoid_omega"))?,
                window: d.window.clone(),
                free: d.free,
                proper: d.proper,
            };
            spec.momentum.validate()?;
            let extension = reeb_flow_extension(&spec, self.policy)?;
            self.m.momentum.insert(
                name.clone(),
                MomentumEntry {
                    spec,
                    structure: d.structure.clone(),
                    extension,
                },
            );
        }
        Ok(())
    }

    /// The acting groupoid action and its module structure for a reduction
    /// route.
    fn route_action(&self, route: &Route) -> Result<(ActionPresentation, String)> {
        match route {
            Route::Momentum(n) => {
                let e = lookup(&self.m.momentum, "momentum map", n)?;
                Ok((e.extension.clone(), e.structure.clone()))
            }
            Route::Action(n) => {
                let e = lookup(&self.m.actions, "action", n)?;
                let sm = e
                    .structure_m
                    .clone()
                    .ok_or_else(|| Error::invalid(format!("actions.{n}"), "reduction needs `structure_m`"))?;
                Ok((e.action.clone(), sm))
            }
        }
    }

    fn reductions(&mut self) -> Result<()> {
        for (name, d) in &self.doc.reductions {
            let ctx = format!("reductions.{name}");
            let route = match (&d.momentum, &d.action) {
                (Some(m), None) => Route::Momentum(m.clone()),
                (None, Some(a)) => Route::Action(a.clone()),
                _ => return Err(Error::invalid(ctx, "exactly one of `momentum` and `action` must be set")),
            };
            let (action, sm) = self.route_action(&route)?;
            let geometry = self.geometry(&d.geometry, &format!("{ctx}.geometry"))?;
            geometry.validate(name, &action.module, &action.groupoid.objects)?;
            let leaf = match &d.leaf {
                Some(l) => {
                    let lctx = format!("{ctx}.leaf");
                    let leaf = self.leaf(&l.leaf, &format!("{lctx}.leaf"))?;
                    let geo = self.geometry(&l.geometry, &format!("{lctx}.geometry"))?;
                    geo.validate(&leaf.name, leaf.chart(), &action.groupoid.objects)?;
                    let quotient_leaf = self.map(&l.quotient_leaf, &format!("{lctx}.quotient_leaf"))?;
                    if quotient_leaf.source().as_ref() != geo.quotient.as_ref()
                        || quotient_leaf.target().as_ref() != geometry.quotient.as_ref()
                    {
                        return Err(Error::invalid(lctx, "quotient_leaf must map the leaf quotient into the quotient"));
                    }
                    let restriction = l
                        .restriction
                        .as_ref()
                        .map(|r| self.restriction(r, &action, &format!("{lctx}.restriction")))
                        .transpose()?;
                    Some(LeafReductionSpec {
                        leaf,
                        geometry: geo,
                        quotient_leaf,
                        restriction,
                    })
                }
                None => None,
            };
            let candidates = d
                .candidates
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let q = &geometry.quotient;
                    Ok((
                        self.form(&c.eta, q, &format!("{ctx}.candidates[{i}].eta"))?,
                        self.form(&c.omega, q, &format!("{ctx}.candidates[{i}].omega"))?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            self.structure(&sm)?;
            self.m.reductions.insert(
                name.clone(),
                ReductionEntry {
                    route,
                    geometry,
                    leaf,
                    candidates,
                },
            );
        }
        Ok(())
    }

    fn morita(&mut self) -> Result<()> {
        for (name, d) in &self.doc.morita {
            let ctx = format!("morita.{name}");
            let left = lookup(&self.m.actions, "action", &d.left)?;
            let right = lookup(&self.m.actions, "action", &d.right)?;
            let map = |m: &MapDoc, k: &str| self.map(m, &format!("{ctx}.{k}"));
            let biaction = match &d.biaction {
                Some(b) => Some(BiActionChart {
                    chart: self.chart(&b.chart)?,
                    left: map(&b.left, "biaction.left")?,
                    point: map(&b.point, "biaction.point")?,
                    right: map(&b.right, "biaction.right")?,
                }),
                None => None,
            };
            let witness = |w: &Option<WitnessDoc>, k: &str| -> Result<Option<InverseWitness>> {
                w.as_ref()
                    .map(|w| {
                        Ok(InverseWitness {
                            section: map(&w.section, &format!("{k}.section"))?,
                            connector: map(&w.connector, &format!("{k}.connector"))?,
                        })
                    })
                    .transpose()
            };
            let left_witness = witness(&d.left_witness, "left_witness")?;
            let right_witness = witness(&d.right_witness, "right_witness")?;
            let structures = (
                self.structure(&left.structure_g)?,
                self.structure(&right.structure_g)?,
                self.structure(&d.structure_m)?,
            );
            let manifest = match structures {
                (Ok(cg), Ok(ch), Ok(cm)) => {
                    let m = MoritaManifest {
                        name: name.clone(),
                        cg: cg.clone(),
                        ch: ch.clone(),
                        cm: cm.clone(),
                        left: left.action.clone(),
                        right: right.action.clone(),
                        biaction,
                        left_witness,
                        right_witness,
                        attest_surjective: d.attest_surjective,
                    };
                    m.validate()?;
                    Ok(m)
                }
                (a, b, c) => Err([a, b, c]
                    .into_iter()
                    .filter_map(|s| s.as_ref().err().cloned())
                    .collect::<Vec<_>>()
                    .join("; ")),
            };
            let leaf = match &d.leaf {
                Some(l) => {
                    let lctx = format!("{ctx}.leaf");
                    let restriction = |e: &ActionEntry, side: &str| -> Result<LeafRestriction> {
                        e.leaf
                            .clone()
                            .ok_or_else(|| Error::invalid(&lctx, format!("{side} action `{}` has no leaf", e.action.name)))
                    };
                    let b = &l.biaction;
                    Some(LeafBimoduleSpec {
                        leaf: self.leaf(&l.leaf, &format!("{lctx}.leaf"))?,
                        left: restriction(left, "left")?,
                        right: restriction(right, "right")?,
                        biaction: LeafBiAction {
                            chart: self.chart(&b.chart)?,
                            iota: map(&b.iota, "leaf.biaction.iota")?,
                            point: map(&b.point, "leaf.biaction.point")?,
                            left: map(&b.left, "leaf.biaction.left")?,
                            right: map(&b.right, "leaf.biaction.right")?,
                            both: map(&b.both, "leaf.biaction.both")?,
                        },
                        attest_orbit_closure: l.attest_orbit_closure,
                    })
                }
                None => None,
            };
            self.m.morita.insert(name.clone(), MoritaEntry { manifest, leaf });
        }
        Ok(())
    }
}

impl Manifest {
    /// Resolves every reference and validates every structural invariant.
    pub fn resolve(doc: ManifestDoc, policy: &SamplePolicy) -> Result<Manifest> {
        if doc.version != MANIFEST_VERSION {
            return Err(Error::invalid("manifest", format!("unsupported version {}", doc.version)));
        }
        let empty = Manifest {
            doc: doc.clone(),
            policy: policy.clone(),
            charts: BTreeMap::new(),
            structures: BTreeMap::new(),
            products: BTreeMap::new(),
            groups: BTreeMap::new(),
            group_actions: BTreeMap::new(),
            groupoids: BTreeMap::new(),
            actions: BTreeMap::new(),
            momentum: BTreeMap::new(),
            reductions: BTreeMap::new(),
            morita: BTreeMap::new(),
        };
        let mut r = Resolver {
            doc: &doc,
            policy,
            m: empty,
        };
        r.charts()?;
        r.structures()?;
        r.groups()?;
        r.groupoids()?;
        r.actions()?;
        r.momentum()?;
        r.reductions()?;
        r.morita()?;
        Ok(r.m)
    }

    /// A named structure, looked up among structures and then groupoids.
    pub fn structure(&self, name: &str) -> Result<&Structure> {
        if let Some(s) = self.structures.get(name) {
            return Ok(&s.structure);
        }
        match self.groupoids.get(name).and_then(|g| g.structure.as_ref()) {
            Some(s) => Ok(s),
            None => Err(unresolved("structure", name)),
        }
    }

    /// The action, module structure and groupoid structure of a reduction.
    pub fn reduction_parts(&self, e: &ReductionEntry) -> Result<(ActionPresentation, &Structure, &Structure)> {
        match &e.route {
            Route::Momentum(n) => {
                let m = lookup(&self.momentum, "momentum map", n)?;
                let cm = self.structure(&m.structure)?;
                Ok((m.extension.clone(), cm, cm))
            }
            Route::Action(n) => {
                let a = lookup(&self.actions, "action", n)?;
                let sm = a.structure_m.as_deref().ok_or_else(|| unresolved("structure", "structure_m"))?;
                Ok((a.action.clone(), self.structure(sm)?, self.structure(&a.structure_g)?))
            }
        }
    }
}

/// Builds the groupoid-route manifest for an action-route reduction.
pub fn reduction_manifest(
    name: &str,
    action: ActionPresentation,
    cg: &CosymplecticStructure,
    cm: &CosymplecticStructure,
    geometry: &ReductionGeometry,
) -> ReductionManifest {
    ReductionManifest {
        name: name.to_string(),
        action,
        cg: cg.clone(),
        cm: cm.clone(),
        geometry: geometry.clone(),
    }
}
