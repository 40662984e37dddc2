//! Writing constructed objects back into a [`ManifestDoc`].

use std::collections::BTreeMap;

use crate::action::{ActionPresentation, LeafRestriction, ReebFlowActionSpec};
use crate::cosymplectic::CosymplecticStructure;
use crate::error::{Error, Result};
use crate::exterior::{ChartRef, DifferentialForm, SmoothMap, VectorField};
use crate::group::{Group, GroupAction};
use crate::groupoid::GroupoidPresentation;
use crate::morita::{LeafBimoduleSpec, MoritaManifest};
use crate::reduction::{LeafReductionSpec, ReductionGeometry};
use crate::submanifold::LeafSpec;
use crate::symbolic::Expr;

use super::doc::*;
use super::resolve::Route;

fn insert<T: PartialEq>(map: &mut BTreeMap<String, T>, kind: &str, key: &str, value: T) -> Result<String> {
    match map.get(key) {
        Some(existing) if *existing != value => Err(Error::invalid(
            format!("{kind}.{key}"),
            "two different objects share this name",
        )),
        Some(_) => Ok(key.to_string()),
        None => {
            map.insert(key.to_string(), value);
            Ok(key.to_string())
        }
    }
}

fn keyed(names: &[std::sync::Arc<str>], exprs: &[Expr]) -> Table {
    names.iter().zip(exprs).map(|(k, e)| (k.to_string(), e.to_string())).collect()
}

fn field_table(v: &VectorField) -> Table {
    v.to_table()
        .into_iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(k, e)| (k, e.to_string()))
        .collect()
}

pub fn form_doc(f: &DifferentialForm) -> FormDoc {
    FormDoc {
        degree: f.degree(),
        terms: f
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| (f.index_names(idx).join(" "), c.to_string()))
            .collect(),
    }
}

/// Accumulates named objects, registering every chart they mention.
#[derive(Debug, Default)]
pub struct Exporter {
    doc: ManifestDoc,
}

impl Exporter {
    pub fn new() -> Self {
        Exporter::default()
    }

    pub fn finish(self) -> ManifestDoc {
        self.doc
    }

    pub fn policy(&mut self, p: PolicyDoc) {
        self.doc.policy = Some(p);
    }

    pub fn chart(&mut self, c: &ChartRef) -> Result<String> {
        let doc = ChartDoc {
            coords: c.coords().iter().map(|s| s.to_string()).collect(),
            periodic: (0..c.dim()).filter(|i| c.is_periodic(*i)).map(|i| c.coord(i).to_string()).collect(),
        };
        insert(&mut self.doc.charts, "charts", c.name(), doc)
    }

    pub fn map(&mut self, m: &SmoothMap) -> Result<MapDoc> {
        Ok(MapDoc {
            source: self.chart(m.source())?,
            target: self.chart(m.target())?,
            components: keyed(m.target().coords(), m.components()),
        })
    }

    /// A pair (η, ω) whether or not it is cosymplectic.
    pub fn forms(&mut self, name: &str, eta: &DifferentialForm, omega: &DifferentialForm, attest: bool) -> Result<String> {
        let doc = StructureDoc {
            chart: self.chart(eta.chart())?,
            eta: form_doc(eta),
            omega: form_doc(omega),
            attest_nonvanishing: attest,
        };
        insert(&mut self.doc.structures, "structures", name, doc)
    }

    pub fn structure(&mut self, c: &CosymplecticStructure) -> Result<String> {
        self.forms(c.name(), c.eta(), c.omega(), c.attested_nonvanishing())
    }

    pub fn product(&mut self, name: &str, left: &CosymplecticStructure, right: &CosymplecticStructure) -> Result<String> {
        let doc = ProductDoc {
            left: self.structure(left)?,
            right: self.structure(right)?,
        };
        insert(&mut self.doc.products, "products", name, doc)
    }

    pub fn group(&mut self, g: &Group) -> Result<String> {
        let names = g.chart.coords();
        let doc = GroupDoc {
            chart: self.chart(&g.chart)?,
            mult: keyed(names, g.mult.components()),
            unit: keyed(names, &g.unit),
            inverse: keyed(names, g.inverse.components()),
        };
        insert(&mut self.doc.groups, "groups", &g.name, doc)
    }

    pub fn group_action(&mut self, a: &GroupAction) -> Result<String> {
        let doc = GroupActionDoc {
            group: self.group(&a.group)?,
            space: self.chart(&a.space)?,
            components: keyed(a.space.coords(), a.map.components()),
        };
        insert(&mut self.doc.group_actions, "group_actions", &a.name, doc)
    }

    fn leaf(&mut self, l: &LeafSpec) -> Result<LeafDoc> {
        Ok(LeafDoc {
            name: l.name.clone(),
            map: self.map(&l.embedding.map)?,
            attest_injective: l.embedding.attested_injective,
            omega: form_doc(&l.omega_leaf),
        })
    }

    pub fn groupoid(&mut self, g: &GroupoidPresentation) -> Result<String> {
        let p = &g.pairs;
        let doc = GroupoidDoc {
            objects: self.chart(&g.objects)?,
            arrows: self.chart(&g.arrows)?,
            s: self.map(&g.s)?,
            t: self.map(&g.t)?,
            u: self.map(&g.u)?,
            inv: self.map(&g.inv)?,
            pairs: PairsDoc {
                chart: self.chart(&p.chart)?,
                pr1: self.map(&p.pr1)?,
                pr2: self.map(&p.pr2)?,
                m: self.map(&p.m)?,
                pairing: p.pairing.as_ref().map(|m| self.map(m)).transpose()?,
            },
            triples: match &g.triples {
                Some(t) => Some(TriplesDoc {
                    chart: self.chart(&t.chart)?,
                    first: self.map(&t.first)?,
                    second: self.map(&t.second)?,
                    third: self.map(&t.third)?,
                }),
                None => None,
            },
            eta: g.eta.as_ref().map(form_doc),
            omega: g.omega.as_ref().map(form_doc),
            leaf: match &g.leaf {
                Some(l) => Some(GroupoidLeafDoc {
                    leaf: self.leaf(&l.leaf)?,
                    unit: self.map(&l.unit)?,
                    pairs: match &l.pairs {
                        Some(lp) => Some(LeafPairsDoc {
                            chart: self.chart(&lp.chart)?,
                            iota: self.map(&lp.iota)?,
                            m: self.map(&lp.m)?,
                        }),
                        None => None,
                    },
                }),
                None => None,
            },
        };
        insert(&mut self.doc.groupoids, "groupoids", &g.name, doc)
    }

    fn restriction(&mut self, r: &LeafRestriction) -> Result<RestrictionDoc> {
        Ok(RestrictionDoc {
            leaf_m: self.leaf(&r.leaf_m)?,
            leaf_g: self.leaf(&r.leaf_g)?,
            chart: self.chart(&r.chart)?,
            iota: self.map(&r.iota)?,
            arrow: self.map(&r.arrow)?,
            point: self.map(&r.point)?,
            phi: self.map(&r.phi)?,
        })
    }

    /// `groupoid` names the registered groupoid; with `opposite` the action
    /// goes through its opposite.
    #[allow(clippy::too_many_arguments)]
    pub fn action(
        &mut self,
        name: &str,
        a: &ActionPresentation,
        groupoid: &str,
        opposite: bool,
        structure_g: Option<&str>,
        structure_m: Option<&str>,
        leaf: Option<&LeafRestriction>,
    ) -> Result<String> {
        let p = &a.pairs;
        let doc = ActionDoc {
            groupoid: groupoid.to_string(),
            opposite,
            module: self.chart(&a.module)?,
            structure_g: structure_g.map(str::to_string),
            structure_m: structure_m.map(str::to_string),
            rho: self.map(&a.rho)?,
            pairs: ActionPairsDoc {
                chart: self.chart(&p.chart)?,
                pr_g: self.map(&p.pr_g)?,
                pr_m: self.map(&p.pr_m)?,
                phi: self.map(&p.phi)?,
                pairing: p.pairing.as_ref().map(|m| self.map(m)).transpose()?,
            },
            triples: match &a.triples {
                Some(t) => Some(ActionTriplesDoc {
                    chart: self.chart(&t.chart)?,
                    first: self.map(&t.first)?,
                    second: self.map(&t.second)?,
                    point: self.map(&t.point)?,
                }),
                None => None,
            },
            free: a.free,
            proper: a.proper,
            leaf: leaf.map(|r| self.restriction(r)).transpose()?,
        };
        insert(&mut self.doc.actions, "actions", name, doc)
    }

    pub fn momentum(&mut self, spec: &ReebFlowActionSpec, structure: &str) -> Result<String> {
        let mm = &spec.momentum;
        let doc = MomentumDoc {
            action: self.group_action(&mm.action)?,
            coadjoint: self.group_action(&mm.coadjoint)?,
            structure: structure.to_string(),
            generators: mm.generators.iter().map(field_table).collect(),
            mu: self.map(&mm.mu)?,
            flow: self.map(&spec.flow)?,
            groupoid_omega: form_doc(&spec.groupoid_omega),
            window: spec.window.clone(),
            free: spec.free,
            proper: spec.proper,
        };
        insert(&mut self.doc.momentum, "momentum", &mm.name, doc)
    }

    fn geometry(&mut self, g: &ReductionGeometry) -> Result<GeometryDoc> {
        Ok(GeometryDoc {
            xi: g.xi.iter().map(|x| x.to_string()).collect(),
            attest_regular: g.attest_regular,
            level: LevelDoc {
                name: g.level.name.clone(),
                map: self.map(&g.level.map)?,
                attest_injective: g.level.attested_injective,
            },
            isotropy: self.group_action(&g.isotropy)?,
            generators: g.generators.iter().map(field_table).collect(),
            quotient: self.chart(&g.quotient)?,
            p: self.map(&g.p)?,
            sigma: self.map(&g.sigma)?,
        })
    }

    pub fn reduction(
        &mut self,
        name: &str,
        route: &Route,
        geometry: &ReductionGeometry,
        leaf: Option<&LeafReductionSpec>,
        candidates: &[(DifferentialForm, DifferentialForm)],
    ) -> Result<String> {
        let (momentum, action) = match route {
            Route::Momentum(m) => (Some(m.clone()), None),
            Route::Action(a) => (None, Some(a.clone())),
        };
        let doc = ReductionDoc {
            momentum,
            action,
            geometry: self.geometry(geometry)?,
            leaf: match leaf {
                Some(l) => Some(LeafReductionDoc {
                    leaf: self.leaf(&l.leaf)?,
                    geometry: self.geometry(&l.geometry)?,
                    quotient_leaf: self.map(&l.quotient_leaf)?,
                    restriction: l.restriction.as_ref().map(|r| self.restriction(r)).transpose()?,
                }),
                None => None,
            },
            candidates: candidates
                .iter()
                .map(|(e, w)| CandidateDoc {
                    eta: form_doc(e),
                    omega: form_doc(w),
                })
                .collect(),
        };
        insert(&mut self.doc.reductions, "reductions", name, doc)
    }

    /// The actions must already be registered as `left` and `right`, the
    /// latter with `opposite` set; their `leaf` entries carry the leaf
    /// restrictions used by `leaf`.
    pub fn morita(
        &mut self,
        m: &MoritaManifest,
        left: &str,
        right: &str,
        structure_m: &str,
        leaf: Option<&LeafBimoduleSpec>,
    ) -> Result<String> {
        let doc = MoritaDoc {
            left: left.to_string(),
            right: right.to_string(),
            structure_m: structure_m.to_string(),
            biaction: match &m.biaction {
                Some(b) => Some(BiActionDoc {
                    chart: self.chart(&b.chart)?,
                    left: self.map(&b.left)?,
                    point: self.map(&b.point)?,
                    right: self.map(&b.right)?,
                }),
                None => None,
            },
            left_witness: match &m.left_witness {
                Some(w) => Some(WitnessDoc {
                    section: self.map(&w.section)?,
                    connector: self.map(&w.connector)?,
                }),
                None => None,
            },
            right_witness: match &m.right_witness {
                Some(w) => Some(WitnessDoc {
                    section: self.map(&w.section)?,
                    connector: self.map(&w.connector)?,
                }),
                None => None,
            },
            attest_surjective: m.attest_surjective,
            leaf: match leaf {
                Some(l) => {
                    let b = &l.biaction;
                    Some(LeafBimoduleDoc {
                        leaf: self.leaf(&l.leaf)?,
                        biaction: LeafBiActionDoc {
                            chart: self.chart(&b.chart)?,
                            iota: self.map(&b.iota)?,
                            point: self.map(&b.point)?,
                            left: self.map(&b.left)?,
                            right: self.map(&b.right)?,
                            both: self.map(&b.both)?,
                        },
                        attest_orbit_closure: l.attest_orbit_closure,
                    })
                }
                None => None,
            },
        };
        insert(&mut self.doc.morita, "morita", &m.name, doc)
    }
}
