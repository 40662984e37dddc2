//! Lie groupoids in coordinates: axioms, action groupoids, trivial central
//! extensions and multiplicativity of forms on the arrow space.

use crate::cosymplectic::{check_cosymplectic, check_symplectic};
use crate::error::{Error, Result};
use crate::exterior::{Chart, ChartRef, DifferentialForm, SmoothMap};
use crate::group::{Group, GroupAction};
use crate::report::{Checks, Status};
use crate::residual::{self, concat, coordinates};
use crate::submanifold::{EmbeddingSpec, LeafSpec};
use crate::symbolic::{Aggregate, Expr, SamplePolicy};

/// Composable pairs: a chart P with pr₁, pr₂, m: P → G₁, and optionally a
/// map from the `l.`/`r.` product of G₁ with itself into P that picks the
/// point over a composable pair.
#[derive(Clone, Debug)]
pub struct PairChart {
    pub chart: ChartRef,
    pub pr1: SmoothMap,
    pub pr2: SmoothMap,
    pub m: SmoothMap,
    pub pairing: Option<SmoothMap>,
}

/// Composable triples (a, b, c) with s(a) = t(b), s(b) = t(c).
#[derive(Clone, Debug)]
pub struct TripleChart {
    pub chart: ChartRef,
    pub first: SmoothMap,
    pub second: SmoothMap,
    pub third: SmoothMap,
}

/// The leaf through the units, with the factorizations that make it a
/// subgroupoid: ι∘û = u and ι∘m_S = m∘ι_P.
#[derive(Clone, Debug)]
pub struct GroupoidLeaf {
    pub leaf: LeafSpec,
    pub unit: SmoothMap,
    pub pairs: Option<LeafPairs>,
}

#[derive(Clone, Debug)]
pub struct LeafPairs {
    pub chart: ChartRef,
    pub iota: SmoothMap,
    pub m: SmoothMap,
}

#[derive(Clone, Debug)]
pub struct GroupoidPresentation {
    pub name: String,
    pub objects: ChartRef,
    pub arrows: ChartRef,
    pub s: SmoothMap,
    pub t: SmoothMap,
    pub u: SmoothMap,
    pub inv: SmoothMap,
    pub pairs: PairChart,
    pub triples: Option<TripleChart>,
    pub eta: Option<DifferentialForm>,
    pub omega: Option<DifferentialForm>,
    pub leaf: Option<GroupoidLeaf>,
}

pub fn pairing_chart(arrows: &ChartRef) -> Result<ChartRef> {
    Ok(Chart::product(
        &format!("{}^2", arrows.name()),
        &[("l.", arrows), ("r.", arrows)],
    )?)
}

fn expect_map(what: &str, map: &SmoothMap, source: &Chart, target: &Chart) -> Result<()> {
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

impl GroupoidPresentation {
    /// Checks that every structure map has the right source and target.
    pub fn validate(&self) -> Result<()> {
        let (g0, g1) = (&self.objects, &self.arrows);
        let n = &self.name;
        expect_map(&format!("{n}.s"), &self.s, g1, g0)?;
        expect_map(&format!("{n}.t"), &self.t, g1, g0)?;
        expect_map(&format!("{n}.u"), &self.u, g0, g1)?;
        expect_map(&format!("{n}.inv"), &self.inv, g1, g1)?;
        let p = &self.pairs;
        expect_map(&format!("{n}.pairs.pr1"), &p.pr1, &p.chart, g1)?;
        expect_map(&format!("{n}.pairs.pr2"), &p.pr2, &p.chart, g1)?;
        expect_map(&format!("{n}.pairs.m"), &p.m, &p.chart, g1)?;
        if let Some(pairing) = &p.pairing {
            let chart = pairing_chart(g1)?;
            expect_map(&format!("{n}.pairs.pairing"), pairing, &chart, &p.chart)?;
        }
        if let Some(tr) = &self.triples {
            for (k, map) in [("first", &tr.first), ("second", &tr.second), ("third", &tr.third)] {
                expect_map(&format!("{n}.triples.{k}"), map, &tr.chart, g1)?;
            }
        }
        for (k, form, degree) in [("eta", &self.eta, 1), ("omega", &self.omega, 2)] {
            if let Some(f) = form {
                if f.chart().as_ref() != g1.as_ref() || f.degree() != degree {
                    return Err(Error::invalid(
                        format!("{n}.{k}"),
                        format!("expected a {degree}-form on {}", g1.name()),
                    ));
                }
            }
        }
        if let Some(leaf) = &self.leaf {
            let e = &leaf.leaf.embedding.map;
            if e.target().as_ref() != g1.as_ref() {
                return Err(Error::invalid(format!("{n}.leaf"), "leaf must embed into the arrow chart"));
            }
            expect_map(&format!("{n}.leaf.unit"), &leaf.unit, g0, e.source())?;
            if let Some(lp) = &leaf.pairs {
                expect_map(&format!("{n}.leaf.pairs.iota"), &lp.iota, &lp.chart, &p.chart)?;
                expect_map(&format!("{n}.leaf.pairs.m"), &lp.m, &lp.chart, e.source())?;
            }
        }
        Ok(())
    }

    pub fn with_forms(mut self, eta: Option<DifferentialForm>, omega: Option<DifferentialForm>) -> Result<Self> {
        self.eta = eta;
        self.omega = omega;
        self.validate()?;
        Ok(self)
    }

    /// The point of P over the composable pair (a, b), via the pairing map.
    fn pair(&self, a: &[Expr], b: &[Expr]) -> Result<Option<Vec<Expr>>> {
        match &self.pairs.pairing {
            Some(p) => Ok(Some(p.apply(&concat(a, b))?)),
            None => Ok(None),
        }
    }

    /// m(a·b) for composable (a, b), given as arrow coordinates.
    pub fn multiply(&self, a: &[Expr], b: &[Expr]) -> Result<Option<Vec<Expr>>> {
        match self.pair(a, b)? {
            Some(p) => Ok(Some(self.pairs.m.apply(&p)?)),
            None => Ok(None),
        }
    }

    /// Same groupoid with arrows reversed: s and t, pr₁ and pr₂, and the
    /// order of triples swapped. Right actions are left actions of this.
    pub fn opposite(&self) -> Result<Self> {
        let g1 = &self.arrows;
        let pairing = match &self.pairs.pairing {
            Some(p) => {
                let swap = |v: &str| {
                    v.strip_prefix("l.")
                        .map(|r| format!("r.{r}"))
                        .or_else(|| v.strip_prefix("r.").map(|l| format!("l.{l}")))
                };
                let comps = p.components().iter().map(|c| c.rename(&swap)).collect();
                Some(SmoothMap::new(p.source(), p.target(), comps)?)
            }
            None => None,
        };
        let out = GroupoidPresentation {
            name: format!("{}^op", self.name),
            objects: self.objects.clone(),
            arrows: g1.clone(),
            s: self.t.clone(),
            t: self.s.clone(),
            u: self.u.clone(),
            inv: self.inv.clone(),
            pairs: PairChart {
                chart: self.pairs.chart.clone(),
                pr1: self.pairs.pr2.clone(),
                pr2: self.pairs.pr1.clone(),
                m: self.pairs.m.clone(),
                pairing,
            },
            triples: self.triples.as_ref().map(|t| TripleChart {
                chart: t.chart.clone(),
                first: t.third.clone(),
                second: t.second.clone(),
                third: t.first.clone(),
            }),
            eta: self.eta.clone(),
            omega: self.omega.clone(),
            leaf: None,
        };
        out.validate()?;
        Ok(out)
    }

    /// Adds the leaf {t = 0} produced by [`trivial_central_extension`].
    pub fn with_leaf(mut self, leaf: GroupoidLeaf) -> Result<Self> {
        self.leaf = Some(leaf);
        self.validate()?;
        Ok(self)
    }
}

type Law<'a> = (&'a str, &'a str, &'a [Expr], &'a [Expr], &'a [Expr]);

/// Structure-map identities, unit, inverse and associativity laws.
pub fn check_groupoid_axioms(g: &GroupoidPresentation, policy: &SamplePolicy) -> Result<Checks> {
    g.validate()?;
    let mut c = Checks::new();
    let (g0, g1) = (&g.objects, &g.arrows);
    let p = &g.pairs;
    let diff = |a: &SmoothMap, b: &SmoothMap| -> Result<Aggregate> { Ok(a.difference_test(b, policy)?) };

    c.verdict("composable", "s∘pr₁ = t∘pr₂", &diff(&g.s.compose(&p.pr1)?, &g.t.compose(&p.pr2)?)?);
    let id0 = SmoothMap::identity(g0);
    c.verdict("unit_source", "s∘u = id", &diff(&g.s.compose(&g.u)?, &id0)?);
    c.verdict("unit_target", "t∘u = id", &diff(&g.t.compose(&g.u)?, &id0)?);
    c.verdict("mult_source", "s∘m = s∘pr₂", &diff(&g.s.compose(&p.m)?, &g.s.compose(&p.pr2)?)?);
    c.verdict("mult_target", "t∘m = t∘pr₁", &diff(&g.t.compose(&p.m)?, &g.t.compose(&p.pr1)?)?);
    c.verdict("inverse_source", "s∘inv = t", &diff(&g.s.compose(&g.inv)?, &g.t)?);
    c.verdict("inverse_target", "t∘inv = s", &diff(&g.t.compose(&g.inv)?, &g.s)?);
    c.verdict(
        "inverse_involution",
        "inv∘inv = id",
        &diff(&g.inv.compose(&g.inv)?, &SmoothMap::identity(g1))?,
    );

    let x = coordinates(g1);
    let unit_of = |m: &SmoothMap| -> Result<Vec<Expr>> { Ok(g.u.apply(&m.apply(&x)?)?) };
    let ut = unit_of(&g.t)?;
    let us = unit_of(&g.s)?;
    let inv = g.inv.apply(&x)?;
    // (id, anchor, left factor, right factor, expected product)
    let laws: [Law; 4] = [
        ("unit_left", "m(u(t(g)), g) = g", &ut, &x, &x),
        ("unit_right", "m(g, u(s(g))) = g", &x, &us, &x),
        ("inverse_left", "m(g, inv(g)) = u(t(g))", &x, &inv, &ut),
        ("inverse_right", "m(inv(g), g) = u(s(g))", &inv, &x, &us),
    ];
    let attestation = format!("pairs_surjective:{}", g.name);
    for (id, anchor, a, b, expected) in laws {
        match g.pair(a, b)? {
            None => c.skip(id, anchor, "no pairing map for composable pairs"),
            Some(pt) => {
                let agg = residual::labelled("pr1", g1, &p.pr1.apply(&pt)?, a, g1, policy)
                    .combine(residual::labelled("pr2", g1, &p.pr2.apply(&pt)?, b, g1, policy))
                    .combine(residual::labelled("m", g1, &p.m.apply(&pt)?, expected, g1, policy));
                let mut e = crate::report::Entry::from_aggregate(id, anchor, &agg);
                if e.passed() {
                    e = e.with_attestation(attestation.clone());
                }
                c.push(e);
            }
        }
    }

    match (&g.triples, &p.pairing) {
        (Some(tr), Some(_)) => {
            let dom = &tr.chart;
            let v = coordinates(dom);
            let (a, b, cc) = (tr.first.apply(&v)?, tr.second.apply(&v)?, tr.third.apply(&v)?);
            let composable = residual::labelled("ab", g0, &g.s.apply(&a)?, &g.t.apply(&b)?, dom, policy)
                .combine(residual::labelled("bc", g0, &g.s.apply(&b)?, &g.t.apply(&cc)?, dom, policy));
            let ab = g.multiply(&a, &b)?.expect("pairing present");
            let bc = g.multiply(&b, &cc)?.expect("pairing present");
            let lhs = g.multiply(&ab, &cc)?.expect("pairing present");
            let rhs = g.multiply(&a, &bc)?.expect("pairing present");
            let agg = composable.combine(residual::labelled("m", g1, &lhs, &rhs, dom, policy));
            c.verdict("associativity", "(ab)c = a(bc)", &agg)
        }
        (None, _) => c.push(
            crate::report::Entry::new(
                "associativity",
                "(ab)c = a(bc)",
                Status::Skipped,
                "no triple parameterizer; associativity attested",
            )
            .with_attestation(format!("associative:{}", g.name)),
        ),
        (Some(_), None) => {
            c.skip("associativity", "(ab)c = a(bc)", "no pairing map for composable pairs");
            true
        }
    };
    Ok(c)
}

/// The action groupoid G×X ⇉ X with s(g,ξ) = ξ, t(g,ξ) = gξ and
/// (g, hξ)(h, ξ) = (gh, ξ); composable pairs are parameterized by G×G×X.
pub fn action_groupoid(name: &str, action: &GroupAction, policy: &SamplePolicy) -> Result<GroupoidPresentation> {
    let gc = action.group.chart.clone();
    for check in [action.group.checks(policy)?, action.checks(policy)?] {
        if let Some(f) = check.first_failure() {
            return Err(Error::invalid(&action.name, format!("{} failed: {}", f.id, f.detail)));
        }
    }
    let x_chart = action.space.clone();
    let arrows = action.source.clone();
    let group = &action.group;
    let pick = |prefix: &str| -> Vec<Expr> { gc.coords().iter().map(|c| Expr::var(&format!("{prefix}{c}"))).collect() };
    let g = coordinates(&gc);
    let x = coordinates(&x_chart);

    let s = SmoothMap::new(&arrows, &x_chart, x.clone())?;
    let t = SmoothMap::new(&arrows, &x_chart, action.act(&g, &x)?)?;
    let u = SmoothMap::new(&x_chart, &arrows, concat(&group.unit, &x))?;
    let inv = SmoothMap::new(&arrows, &arrows, concat(&group.invert(&g)?, &action.act(&g, &x)?))?;

    let p_chart = Chart::product(
        &format!("{name}.pairs"),
        &[("g1.", &gc), ("g2.", &gc), ("", &x_chart)],
    )?;
    let (g1, g2) = (pick("g1."), pick("g2."));
    let pr1 = SmoothMap::new(&p_chart, &arrows, concat(&g1, &action.act(&g2, &x)?))?;
    let pr2 = SmoothMap::new(&p_chart, &arrows, concat(&g2, &x))?;
    let m = SmoothMap::new(&p_chart, &arrows, concat(&group.multiply(&g1, &g2)?, &x))?;
    let pairing_src = pairing_chart(&arrows)?;
    let pairing = SmoothMap::new(
        &pairing_src,
        &p_chart,
        concat(
            &concat(&pick("l."), &pick("r.")),
            &x_chart.coords().iter().map(|c| Expr::var(&format!("r.{c}"))).collect::<Vec<_>>(),
        ),
    )?;

    let t_chart = Chart::product(
        &format!("{name}.triples"),
        &[("g1.", &gc), ("g2.", &gc), ("g3.", &gc), ("", &x_chart)],
    )?;
    let g3 = pick("g3.");
    let x3 = x.clone();
    let x2 = action.act(&g3, &x3)?;
    let x1 = action.act(&g2, &x2)?;
    let triples = TripleChart {
        first: SmoothMap::new(&t_chart, &arrows, concat(&g1, &x1))?,
        second: SmoothMap::new(&t_chart, &arrows, concat(&g2, &x2))?,
        third: SmoothMap::new(&t_chart, &arrows, concat(&g3, &x3))?,
        chart: t_chart,
    };

    let out = GroupoidPresentation {
        name: name.to_string(),
        objects: x_chart,
        arrows,
        s,
        t,
        u,
        inv,
        pairs: PairChart {
            chart: p_chart,
            pr1,
            pr2,
            m,
            pairing: Some(pairing),
        },
        triples: Some(triples),
        eta: None,
        omega: None,
        leaf: None,
    };
    out.validate()?;
    Ok(out)
}

/// T*ℝⁿ ≅ ℝⁿ×ℝⁿ ⇉ ℝⁿ with ω = Σ dξᵢ∧dgᵢ: the action groupoid of the trivial
/// coadjoint action of the abelian group ℝⁿ.
pub fn cotangent_groupoid(n: usize, policy: &SamplePolicy) -> Result<GroupoidPresentation> {
    let (gs, xs): (Vec<String>, Vec<String>) = if n == 1 {
        (vec!["g".into()], vec!["xi".into()])
    } else {
        ((1..=n).map(|i| format!("g{i}")).collect(), (1..=n).map(|i| format!("xi{i}")).collect())
    };
    let name = format!("TR{n}");
    let group = Group::additive(&format!("R{n}"), &Chart::new(&format!("R{n}.g"), &gs)?)?;
    let dual = Chart::new(&format!("R{n}.dual"), &xs)?;
    let action = GroupAction::trivial("coadjoint", &group, &dual)?;
    let g = action_groupoid(&name, &action, policy)?;
    let mut omega = DifferentialForm::zero(&g.arrows, 2);
    for (gi, xi) in gs.iter().zip(&xs) {
        omega = omega.add(&DifferentialForm::d_coord(&g.arrows, xi)?.wedge(&DifferentialForm::d_coord(&g.arrows, gi)?)?)?;
    }
    g.with_forms(None, Some(omega))
}

/// (G₁×ℝ ⇉ G₀, dt, pr*ω): m adds the t-coordinates, u puts t = 0 and inv
/// negates t. The leaf {t = 0} is attached with its factorizations.
pub fn trivial_central_extension(sg: &GroupoidPresentation) -> Result<GroupoidPresentation> {
    let omega = sg
        .omega
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("symplectic form on {}", sg.name)))?;
    let name = format!("{}xR", sg.name);
    let line = Chart::line("R", "t")?;
    let arrows = Chart::product(&format!("{name}.arrows"), &[("", &sg.arrows), ("", &line)])?;
    let lift = |map: &SmoothMap, source: &ChartRef, target: &ChartRef, extra: Option<Expr>| -> Result<SmoothMap> {
        let mut comps = map.components().to_vec();
        comps.extend(extra);
        Ok(SmoothMap::new(source, target, comps)?)
    };
    let t = Expr::var("t");
    let s_ext = lift(&sg.s, &arrows, &sg.objects, None)?;
    let t_ext = lift(&sg.t, &arrows, &sg.objects, None)?;
    let u_ext = lift(&sg.u, &sg.objects, &arrows, Some(Expr::zero()))?;
    let inv_ext = lift(&sg.inv, &arrows, &arrows, Some(-t.clone()))?;

    let two = Chart::new("R2", &["t1", "t2"])?;
    let p_chart = Chart::product(&format!("{name}.pairs"), &[("", &sg.pairs.chart), ("", &two)])?;
    let (t1, t2) = (Expr::var("t1"), Expr::var("t2"));
    let pairs = PairChart {
        pr1: lift(&sg.pairs.pr1, &p_chart, &arrows, Some(t1.clone()))?,
        pr2: lift(&sg.pairs.pr2, &p_chart, &arrows, Some(t2.clone()))?,
        m: lift(&sg.pairs.m, &p_chart, &arrows, Some(&t1 + &t2))?,
        pairing: match &sg.pairs.pairing {
            Some(pm) => {
                let mut comps = pm.components().to_vec();
                comps.push(Expr::var("l.t"));
                comps.push(Expr::var("r.t"));
                Some(SmoothMap::new(&pairing_chart(&arrows)?, &p_chart, comps)?)
            }
            None => None,
        },
        chart: p_chart.clone(),
    };
    let triples = match &sg.triples {
        Some(tr) => {
            let three = Chart::new("R3", &["t1", "t2", "t3"])?;
            let chart = Chart::product(&format!("{name}.triples"), &[("", &tr.chart), ("", &three)])?;
            Some(TripleChart {
                first: lift(&tr.first, &chart, &arrows, Some(Expr::var("t1")))?,
                second: lift(&tr.second, &chart, &arrows, Some(Expr::var("t2")))?,
                third: lift(&tr.third, &chart, &arrows, Some(Expr::var("t3")))?,
                chart,
            })
        }
        None => None,
    };
    let project = SmoothMap::projection(&arrows, &sg.arrows, "")?;
    let eta = DifferentialForm::d_coord(&arrows, "t")?;
    let omega_ext = omega.pullback(&project)?;

    let leaf_map = SmoothMap::new(&sg.arrows, &arrows, concat(&coordinates(&sg.arrows), &[Expr::zero()]))?;
    let leaf_pairs_iota = SmoothMap::new(
        &sg.pairs.chart,
        &p_chart,
        concat(&coordinates(&sg.pairs.chart), &[Expr::zero(), Expr::zero()]),
    )?;
    let leaf = GroupoidLeaf {
        leaf: LeafSpec {
            name: format!("{name}.units_leaf"),
            embedding: EmbeddingSpec::new(&format!("{name}.t0"), leaf_map, true),
            omega_leaf: omega.clone(),
        },
        unit: sg.u.clone(),
        pairs: Some(LeafPairs {
            chart: sg.pairs.chart.clone(),
            iota: leaf_pairs_iota,
            m: sg.pairs.m.clone(),
        }),
    };
    let out = GroupoidPresentation {
        name,
        objects: sg.objects.clone(),
        arrows,
        s: s_ext,
        t: t_ext,
        u: u_ext,
        inv: inv_ext,
        pairs,
        triples,
        eta: Some(eta),
        omega: Some(omega_ext),
        leaf: Some(leaf),
    };
    out.validate()?;
    Ok(out)
}

/// Verdicts for m*α − pr₁*α − pr₂*α, plus validation of the forms.
#[derive(Clone, Debug)]
pub struct MultiplicativeReport {
    pub validation: Checks,
    pub eta: Option<Aggregate>,
    pub omega: Aggregate,
    /// (dim G₁, dim G₀) when η is present.
    pub dimension: Option<(usize, usize)>,
}

impl MultiplicativeReport {
    pub fn dimension_ok(&self) -> bool {
        self.dimension.is_none_or(|(g1, g0)| g1 == 2 * g0 + 1)
    }

    pub fn passed(&self) -> bool {
        self.validation.passed()
            && self.eta.as_ref().is_none_or(Aggregate::is_zero_class)
            && self.omega.is_zero_class()
            && self.dimension_ok()
    }

    pub fn checks(&self) -> Checks {
        let mut c = self.validation.clone();
        if let Some(eta) = &self.eta {
            c.verdict("multiplicative_eta", "m*η = pr₁*η + pr₂*η", eta);
        }
        c.verdict("multiplicative_omega", "m*ω = pr₁*ω + pr₂*ω", &self.omega);
        if let Some((g1, g0)) = self.dimension {
            let anchor = "dim G₁ = 2 dim G₀ + 1";
            if g1 == 2 * g0 + 1 {
                c.pass("dimension", anchor, Status::Proved, format!("{g1} = 2·{g0} + 1"));
            } else {
                c.fail("dimension", anchor, format!("{g1} ≠ 2·{g0} + 1"));
            }
        }
        c
    }
}

fn multiplicativity_residual(g: &GroupoidPresentation, form: &DifferentialForm, policy: &SamplePolicy) -> Result<Aggregate> {
    let p = &g.pairs;
    let lhs = form.pullback(&p.m)?;
    let rhs = form.pullback(&p.pr1)?.add(&form.pullback(&p.pr2)?)?;
    Ok(lhs.sub(&rhs)?.zero_test(policy))
}

pub fn check_multiplicative(g: &GroupoidPresentation, policy: &SamplePolicy) -> Result<MultiplicativeReport> {
    g.validate()?;
    let omega = g
        .omega
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("ω on the arrows of {}", g.name)))?;
    let validation = match &g.eta {
        Some(eta) => check_cosymplectic(eta, omega, policy)?.checks(None),
        None => check_symplectic(omega, policy)?.checks(),
    };
    let eta = match &g.eta {
        Some(eta) => Some(multiplicativity_residual(g, eta, policy)?),
        None => None,
    };
    Ok(MultiplicativeReport {
        validation,
        eta,
        omega: multiplicativity_residual(g, omega, policy)?,
        dimension: g.eta.as_ref().map(|_| (g.arrows.dim(), g.objects.dim())),
    })
}

/// inv*η = −η and inv*ω = −ω, reported for information only.
pub fn inverse_antimultiplicativity(g: &GroupoidPresentation, policy: &SamplePolicy) -> Result<Checks> {
    let mut c = Checks::new();
    for (id, anchor, form) in [
        ("inverse_eta", "inv*η = −η", &g.eta),
        ("inverse_omega", "inv*ω = −ω", &g.omega),
    ] {
        if let Some(f) = form {
            let agg = f.pullback(&g.inv)?.add(f)?.zero_test(policy);
            let detail = match &agg.verdict {
                v if v.is_zero_class() => format!("holds ({})", if v.is_exact() { "exact" } else { "numeric" }),
                _ => format!("fails in {}", agg.offender.as_deref().unwrap_or("?")),
            };
            c.info(id, anchor, detail);
        }
    }
    Ok(c)
}

/// Leaf invariants plus the subgroupoid factorizations.
pub fn check_groupoid_leaf(g: &GroupoidPresentation, policy: &SamplePolicy) -> Result<Checks> {
    let leaf = g
        .leaf
        .as_ref()
        .ok_or_else(|| Error::Missing(format!("leaf of {}", g.name)))?;
    let (eta, omega) = match (&g.eta, &g.omega) {
        (Some(e), Some(o)) => (e, o),
        _ => return Err(Error::Missing(format!("cosymplectic pair on {}", g.name))),
    };
    let mut c = crate::submanifold::check_leaf(&leaf.leaf, eta, omega, policy)?;
    let iota = &leaf.leaf.embedding.map;
    c.verdict(
        "unit_factorization",
        "ι∘û = u",
        &iota.compose(&leaf.unit)?.difference_test(&g.u, policy)?,
    );
    match &leaf.pairs {
        Some(lp) => {
            c.verdict(
                "mult_factorization",
                "ι∘m_S = m∘ι_P",
                &iota.compose(&lp.m)?.difference_test(&g.pairs.m.compose(&lp.iota)?, policy)?,
            );
        }
        None => c.skip("mult_factorization", "ι∘m_S = m∘ι_P", "no factored multiplication supplied"),
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cotangent_extension_is_multiplicative() {
        let policy = SamplePolicy::default();
        let tr = cotangent_groupoid(1, &policy).unwrap();
        assert!(check_groupoid_axioms(&tr, &policy).unwrap().passed());
        let ext = trivial_central_extension(&tr).unwrap();
        let axioms = check_groupoid_axioms(&ext, &policy).unwrap();
        assert!(axioms.passed(), "{:?}", axioms.first_failure());
        let report = check_multiplicative(&ext, &policy).unwrap();
        assert!(report.passed());
        assert!(report.eta.as_ref().unwrap().verdict.is_exact());
        assert_eq!(report.dimension, Some((3, 1)));
        assert!(check_groupoid_leaf(&ext, &policy).unwrap().passed());
    }

    #[test]
    fn opposite_groupoid_satisfies_axioms() {
        let policy = SamplePolicy::default();
        let tr = cotangent_groupoid(2, &policy).unwrap();
        let ext = trivial_central_extension(&tr).unwrap();
        let op = ext.opposite().unwrap();
        let c = check_groupoid_axioms(&op, &policy).unwrap();
        assert!(c.passed(), "{:?}", c.first_failure());
    }
}
