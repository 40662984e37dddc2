//! Albert momentum maps for group actions, and the action of the extended
//! coadjoint groupoid G×g*×ℝ through the Reeb flow.

use crate::cosymplectic::CosymplecticStructure;
use crate::error::{Error, Result};
use crate::exterior::{Chart, DifferentialForm, SmoothMap, VectorField};
use crate::group::GroupAction;
use crate::groupoid::{action_groupoid, trivial_central_extension, GroupoidPresentation};
use crate::report::Checks;
use crate::residual::{self, concat, coordinates};
use crate::symbolic::{aggregate, Expr, SamplePolicy};

use super::{action_pairing_chart, ActionPairs, ActionPresentation, ActionTriples};

/// A Hamiltonian group action: generators Aᵢ* for the coordinate directions
/// of the group chart at the unit, μ: M → g*, and the coadjoint action.
#[derive(Clone, Debug)]
pub struct MomentumMapSpec {
    pub name: String,
    pub action: GroupAction,
    pub generators: Vec<VectorField>,
    pub mu: SmoothMap,
    pub coadjoint: GroupAction,
}

impl MomentumMapSpec {
    pub fn validate(&self) -> Result<()> {
        let k = self.action.group.dim();
        let ok = self.generators.len() == k
            && self.generators.iter().all(|v| v.chart().as_ref() == self.action.space.as_ref())
            && self.mu.source().as_ref() == self.action.space.as_ref()
            && self.mu.target().as_ref() == self.coadjoint.space.as_ref()
            && self.coadjoint.space.dim() == k
            && self.coadjoint.group.chart.as_ref() == self.action.group.chart.as_ref();
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(&self.name, "generators, μ and coadjoint action do not fit the group"))
        }
    }
}

/// Invariance of (η, ω), generator check, equivariance, the Hamiltonian
/// condition for each generator (with the opposite orientation as INFO),
/// and dμᴬ(R) = 0.
pub fn check_albert_momentum(spec: &MomentumMapSpec, cm: &CosymplecticStructure, policy: &SamplePolicy) -> Result<Checks> {
    spec.validate()?;
    cm.chart().require_same(&spec.action.space)?;
    let mut c = Checks::new();
    let act = &spec.action;
    let ag = act.at_symbolic_element()?;
    c.verdict("invariance_eta", "a_g*η = η", &cm.eta().pullback(&ag)?.sub(cm.eta())?.zero_test(policy));
    c.verdict("invariance_omega", "a_g*ω = ω", &cm.omega().pullback(&ag)?.sub(cm.omega())?.zero_test(policy));
    for (i, field) in spec.generators.iter().enumerate() {
        c.push(act.generator_entry(
            &format!("generator.{}", act.group.chart.coord(i)),
            "A* = d/dε a(exp εA, x)",
            i,
            field,
            policy,
        )?);
    }
    let g = coordinates(&act.group.chart);
    let x = coordinates(&act.space);
    let lhs = spec.mu.apply(&act.act(&g, &x)?)?;
    let rhs = spec.coadjoint.act(&g, &spec.mu.apply(&x)?)?;
    c.verdict(
        "equivariance",
        "μ(gx) = Ad*_g μ(x)",
        &residual::vectors(&spec.coadjoint.space, &lhs, &rhs, &act.source, policy),
    );
    for (i, field) in spec.generators.iter().enumerate() {
        let name = act.group.chart.coord(i);
        let mu_i = &spec.mu.components()[i];
        let xf = cm.hamiltonian_field(mu_i)?;
        c.verdict(
            &format!("hamiltonian.{name}"),
            "A* = X_{μᴬ}",
            &field.sub(&xf)?.zero_test(policy),
        );
        let opposite = field.add(&xf)?.zero_test(policy);
        c.info(
            &format!("hamiltonian_opposite.{name}"),
            "A* = −X_{μᴬ}",
            if opposite.is_zero_class() {
                "opposite orientation holds".to_string()
            } else {
                format!("opposite orientation fails in {}", opposite.offender.as_deref().unwrap_or("?"))
            },
        );
        let r_mu = cm.reeb().apply(mu_i);
        c.verdict(
            &format!("reeb.{name}"),
            "dμᴬ(R) = 0",
            &aggregate([(name.to_string(), &r_mu)], cm.chart().coords(), policy),
        );
    }
    Ok(c)
}

/// Hamiltonian data plus the Reeb flow φ on ℝ×M (first coordinate `tau`) and
/// the symplectic form of the coadjoint action groupoid G×g*.
#[derive(Clone, Debug)]
pub struct ReebFlowActionSpec {
    pub momentum: MomentumMapSpec,
    pub flow: SmoothMap,
    pub groupoid_omega: DifferentialForm,
    /// Where the flow is defined when it is not global; recorded, not checked.
    pub window: Option<String>,
    pub free: bool,
    pub proper: bool,
}

impl ReebFlowActionSpec {
    /// φ(0, ·) = id and ∂φ/∂τ = R∘φ.
    pub fn flow_checks(&self, cm: &CosymplecticStructure, policy: &SamplePolicy) -> Result<Checks> {
        let m = &self.momentum.action.space;
        cm.chart().require_same(m)?;
        let src = self.flow.source();
        if src.dim() != m.dim() + 1 || src.coord(0) != "tau" || self.flow.target().as_ref() != m.as_ref() {
            return Err(Error::invalid(&self.momentum.name, "flow must map (tau, M) to M"));
        }
        let mut c = Checks::new();
        let x = coordinates(m);
        let at0 = self.flow.apply(&concat(&[Expr::zero()], &x))?;
        c.verdict("flow_initial", "φ(0, x) = x", &residual::vectors(m, &at0, &x, m, policy));
        let dtau: Vec<Expr> = self.flow.components().iter().map(|f| f.diff("tau")).collect();
        let along = SmoothMap::new(src, m, self.flow.components().to_vec())?;
        let r_phi: Vec<Expr> = cm
            .reeb()
            .components()
            .iter()
            .map(|r| Ok(along.pull_function(r)?))
            .collect::<Result<_>>()?;
        c.verdict("flow_equation", "∂φ/∂τ = R∘φ", &residual::vectors(m, &dtau, &r_phi, src, policy));
        c.attest(
            "flow_window",
            "flow defined on the working window",
            &format!("flow_window:{}", self.momentum.name),
            true,
        );
        Ok(c)
    }
}

/// (g, ξ, t)·x := φ_t(gx) for the trivial extension of G×g* ⇉ g*, with
/// ρ = μ. Returns the action together with its groupoid.
pub fn reeb_flow_extension(spec: &ReebFlowActionSpec, policy: &SamplePolicy) -> Result<ActionPresentation> {
    let mm = &spec.momentum;
    mm.validate()?;
    let base = action_groupoid(&format!("{}.coadjoint", mm.name), &mm.coadjoint, policy)?
        .with_forms(None, Some(spec.groupoid_omega.clone()))?;
    let ext: GroupoidPresentation = trivial_central_extension(&base)?;
    let gc = &mm.action.group.chart;
    let m = &mm.action.space;
    let line = Chart::line("R", "t")?;
    let a_chart = Chart::product(
        &format!("{}.pairs", mm.name),
        &[("g.", gc), ("g.", &line), ("x.", m)],
    )?;
    let pick = |prefix: &str, chart: &Chart| -> Vec<Expr> {
        chart.coords().iter().map(|c| Expr::var(&format!("{prefix}{c}"))).collect()
    };
    let g = pick("g.", gc);
    let x = pick("x.", m);
    let tg = Expr::var("g.t");
    let mu_x = mm.mu.apply(&x)?;
    let pr_g = SmoothMap::new(&a_chart, &ext.arrows, concat(&concat(&g, &mu_x), std::slice::from_ref(&tg)))?;
    let pr_m = SmoothMap::new(&a_chart, m, x.clone())?;
    let gx = mm.action.act(&g, &x)?;
    let phi = SmoothMap::new(&a_chart, m, spec.flow.apply(&concat(&[tg], &gx))?)?;

    let pairing_src = action_pairing_chart(&ext.arrows, m)?;
    let pairing = SmoothMap::new(
        &pairing_src,
        &a_chart,
        concat(&concat(&pick("l.", gc), &[Expr::var("l.t")]), &pick("r.", m)),
    )?;

    let t_chart = Chart::product(
        &format!("{}.triples", mm.name),
        &[("g1.", gc), ("g1.", &line), ("g2.", gc), ("g2.", &line), ("x.", m)],
    )?;
    let (g1, g2) = (pick("g1.", gc), pick("g2.", gc));
    let xi2 = mm.coadjoint.act(&g2, &mu_x)?;
    let triples = ActionTriples {
        first: SmoothMap::new(&t_chart, &ext.arrows, concat(&concat(&g1, &xi2), &[Expr::var("g1.t")]))?,
        second: SmoothMap::new(&t_chart, &ext.arrows, concat(&concat(&g2, &mu_x), &[Expr::var("g2.t")]))?,
        point: SmoothMap::new(&t_chart, m, x.clone())?,
        chart: t_chart,
    };
    let out = ActionPresentation {
        name: format!("{}.reeb_flow", mm.name),
        module: m.clone(),
        rho: mm.mu.clone(),
        pairs: ActionPairs {
            chart: a_chart,
            pr_g,
            pr_m,
            phi,
            pairing: Some(pairing),
        },
        triples: Some(triples),
        groupoid: ext,
        free: spec.free,
        proper: spec.proper,
    };
    out.validate()?;
    Ok(out)
}
