//! Twisted product structures and the graphs that are LL submanifolds in them.

use crate::cosymplectic::{check_almost, CosymplecticStructure, VolumeCheck};
use crate::error::Result;
use crate::exterior::{Chart, ChartRef, DifferentialForm, SmoothMap};
use crate::groupoid::GroupoidPresentation;
use crate::report::Checks;
use crate::residual::{concat, coordinates};
use crate::submanifold::{check_ll_submanifold, EmbeddingSpec};
use crate::symbolic::{Expr, SamplePolicy};

use super::ActionPresentation;

/// An ambient pair (η̃, ω̃) on a product chart and an embedded graph.
#[derive(Clone, Debug)]
pub struct GraphStructure {
    pub chart: ChartRef,
    pub eta: DifferentialForm,
    pub omega: DifferentialForm,
    pub embedding: EmbeddingSpec,
}

impl GraphStructure {
    /// Ambient nondegeneracy and closedness, then the LL conditions.
    pub fn checks(&self, policy: &SamplePolicy) -> Result<Checks> {
        let mut c = Checks::new();
        let volume: VolumeCheck = check_almost(&self.eta, &self.omega, policy)?;
        c.push(volume.entry("ambient_volume", "η̃∧ω̃ⁿ nonvanishing", None));
        c.verdict("ambient_closed_eta", "dη̃ = 0", &self.eta.d().zero_test(policy));
        c.verdict("ambient_closed_omega", "dω̃ = 0", &self.omega.d().zero_test(policy));
        c.extend("", check_ll_submanifold(&self.embedding, &self.eta, &self.omega, policy)?);
        Ok(c)
    }

    pub fn ll_passed(&self, policy: &SamplePolicy) -> Result<bool> {
        Ok(check_ll_submanifold(&self.embedding, &self.eta, &self.omega, policy)?.passed())
    }
}

fn pull(form: &DifferentialForm, chart: &ChartRef, prefix: &str) -> Result<DifferentialForm> {
    let pr = SmoothMap::projection(chart, form.chart(), prefix)?;
    Ok(form.pullback(&pr)?)
}

fn dcoord(chart: &ChartRef, name: &str) -> Result<DifferentialForm> {
    Ok(DifferentialForm::d_coord(chart, name)?)
}

/// Graph {(x, f(x), c)} in M₁×M₂×ℝ with η = η₁ − η₂, ω = ω₁ − ω₂ + η₁∧dt.
pub fn iso_graph(
    c1: &CosymplecticStructure,
    c2: &CosymplecticStructure,
    f: &SmoothMap,
    pin: &Expr,
) -> Result<GraphStructure> {
    c1.chart().require_same(f.source())?;
    c2.chart().require_same(f.target())?;
    let line = Chart::line("R", "t")?;
    let chart = Chart::product(
        &format!("{}x{}xR", c1.chart().name(), c2.chart().name()),
        &[("m1.", c1.chart()), ("m2.", c2.chart()), ("", &line)],
    )?;
    let eta1 = pull(c1.eta(), &chart, "m1.")?;
    let eta = eta1.sub(&pull(c2.eta(), &chart, "m2.")?)?;
    let omega = pull(c1.omega(), &chart, "m1.")?
        .sub(&pull(c2.omega(), &chart, "m2.")?)?
        .add(&eta1.wedge(&dcoord(&chart, "t")?)?)?;
    let comps = concat(&concat(&coordinates(c1.chart()), f.components()), std::slice::from_ref(pin));
    let map = SmoothMap::new(c1.chart(), &chart, comps)?;
    Ok(GraphStructure {
        chart,
        eta,
        omega,
        embedding: EmbeddingSpec::new(&format!("graph({})", f.source().name()), map, true),
    })
}

/// Graph {(g, h, c, gh, c)} of the multiplication in G₁×G₁×ℝ×G₁×ℝ with
/// η̃ = η₁ + η₂ − η₃ and ω̃ = ω₁ + ω₂ + η₁∧dt₁ − ω₃ + (η₁ + η₂)∧dt₂.
pub fn multiplication_graph(
    g: &GroupoidPresentation,
    c: &CosymplecticStructure,
    pin: &Expr,
) -> Result<GraphStructure> {
    g.validate()?;
    c.chart().require_same(&g.arrows)?;
    let g1 = &g.arrows;
    let (l1, l2) = (Chart::line("R", "t1")?, Chart::line("R", "t2")?);
    let chart = Chart::product(
        &format!("{}.mult_ambient", g.name),
        &[("g1.", g1), ("g2.", g1), ("", &l1), ("g3.", g1), ("", &l2)],
    )?;
    let (e1, e2, e3) = (
        pull(c.eta(), &chart, "g1.")?,
        pull(c.eta(), &chart, "g2.")?,
        pull(c.eta(), &chart, "g3.")?,
    );
    let (w1, w2, w3) = (
        pull(c.omega(), &chart, "g1.")?,
        pull(c.omega(), &chart, "g2.")?,
        pull(c.omega(), &chart, "g3.")?,
    );
    let eta = e1.add(&e2)?.sub(&e3)?;
    let omega = w1
        .add(&w2)?
        .add(&e1.wedge(&dcoord(&chart, "t1")?)?)?
        .sub(&w3)?
        .add(&e1.add(&e2)?.wedge(&dcoord(&chart, "t2")?)?)?;
    let p = &g.pairs;
    let mut comps = p.pr1.components().to_vec();
    comps.extend_from_slice(p.pr2.components());
    comps.push(pin.clone());
    comps.extend_from_slice(p.m.components());
    comps.push(pin.clone());
    let map = SmoothMap::new(&p.chart, &chart, comps)?;
    Ok(GraphStructure {
        chart,
        eta,
        omega,
        embedding: EmbeddingSpec::new(&format!("{}.mult_graph", g.name), map, true),
    })
}

/// Graph {(g, x, c, gx, c)} of an action in G₁×M×ℝ×M×ℝ with
/// η̃ = η_G + η₁ − η₂ and ω̃ = ω_G + ω₁ + η_G∧dt₁ − ω₂ + (η_G + η₁)∧dt₂.
pub fn action_graph(
    a: &ActionPresentation,
    cg: &CosymplecticStructure,
    cm: &CosymplecticStructure,
    pin: &Expr,
) -> Result<GraphStructure> {
    a.validate()?;
    cg.chart().require_same(&a.groupoid.arrows)?;
    cm.chart().require_same(&a.module)?;
    let (l1, l2) = (Chart::line("R", "t1")?, Chart::line("R", "t2")?);
    let chart = Chart::product(
        &format!("{}.action_ambient", a.name),
        &[("g.", cg.chart()), ("m1.", cm.chart()), ("", &l1), ("m2.", cm.chart()), ("", &l2)],
    )?;
    let eg = pull(cg.eta(), &chart, "g.")?;
    let e1 = pull(cm.eta(), &chart, "m1.")?;
    let e2 = pull(cm.eta(), &chart, "m2.")?;
    let eta = eg.add(&e1)?.sub(&e2)?;
    let omega = pull(cg.omega(), &chart, "g.")?
        .add(&pull(cm.omega(), &chart, "m1.")?)?
        .add(&eg.wedge(&dcoord(&chart, "t1")?)?)?
        .sub(&pull(cm.omega(), &chart, "m2.")?)?
        .add(&eg.add(&e1)?.wedge(&dcoord(&chart, "t2")?)?)?;
    let p = &a.pairs;
    let mut comps = p.pr_g.components().to_vec();
    comps.extend_from_slice(p.pr_m.components());
    comps.push(pin.clone());
    comps.extend_from_slice(p.phi.components());
    comps.push(pin.clone());
    let map = SmoothMap::new(&p.chart, &chart, comps)?;
    Ok(GraphStructure {
        chart,
        eta,
        omega,
        embedding: EmbeddingSpec::new(&format!("{}.graph", a.name), map, true),
    })
}
