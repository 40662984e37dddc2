//! Certified reduction at a regular value of the anchor: the quotient is
//! supplied as (L, ι, p, σ, generators) and every defining identity of the
//! reduced structure is checked on it.

use std::collections::BTreeMap;

use serde_json::json;

use crate::action::{
    check_action_axioms, check_albert_momentum, check_cosymplectic_action, check_leaf_restriction,
    reeb_flow_extension, ActionPresentation, LeafRestriction, ReebFlowActionSpec,
};
use crate::cosymplectic::{check_cosymplectic, check_symplectic, CosymplecticStructure};
use crate::error::{Error, Result};
use crate::exterior::{ChartRef, DifferentialForm, SmoothMap, VectorField};
use crate::group::GroupAction;
use crate::report::{Checks, Status};
use crate::residual::{self, jacobian_along, rank_entry};
use crate::submanifold::{EmbeddingSpec, LeafSpec};
use crate::symbolic::linalg;
use crate::symbolic::{aggregate, Aggregate, Expr, SamplePolicy};

/// Level set, isotropy action and quotient data for one reduction.
#[derive(Clone, Debug)]
pub struct ReductionGeometry {
    pub xi: Vec<Expr>,
    pub attest_regular: bool,
    pub level: EmbeddingSpec,
    pub isotropy: GroupAction,
    /// One field on L per isotropy group coordinate.
    pub generators: Vec<VectorField>,
    pub quotient: ChartRef,
    pub p: SmoothMap,
    pub sigma: SmoothMap,
}

impl ReductionGeometry {
    pub fn level_chart(&self) -> &ChartRef {
        self.level.source()
    }

    /// Shape checks against the manifold M ⊃ L and the anchor target.
    pub fn validate(&self, name: &str, ambient: &ChartRef, objects: &ChartRef) -> Result<()> {
        let l = self.level_chart();
        let fail = |reason: String| Err(Error::invalid(name, reason));
        if self.level.ambient().as_ref() != ambient.as_ref() {
            return fail(format!("level set must embed into {}", ambient.name()));
        }
        if self.xi.len() != objects.dim() {
            return fail(format!("ξ has {} entries, {} has dimension {}", self.xi.len(), objects.name(), objects.dim()));
        }
        if let Some(x) = self.xi.iter().find(|x| !x.is_constant()) {
            return fail(format!("ξ entry `{x}` is not constant"));
        }
        if self.isotropy.space.as_ref() != l.as_ref() {
            return fail("isotropy action must act on the level chart".into());
        }
        if self.generators.len() != self.isotropy.group.dim() {
            return fail(format!(
                "{} generators for an isotropy group of dimension {}",
                self.generators.len(),
                self.isotropy.group.dim()
            ));
        }
        if self.generators.iter().any(|v| v.chart().as_ref() != l.as_ref()) {
            return fail("generators must live on the level chart".into());
        }
        if self.p.source().as_ref() != l.as_ref() || self.p.target().as_ref() != self.quotient.as_ref() {
            return fail("p must map the level chart to the quotient chart".into());
        }
        if self.sigma.source().as_ref() != self.quotient.as_ref() || self.sigma.target().as_ref() != l.as_ref() {
            return fail("σ must map the quotient chart to the level chart".into());
        }
        Ok(())
    }

    /// σ*p*α − α, which vanishes for every form α on Q when p∘σ = id.
    pub fn section_round_trip(&self, alpha: &DifferentialForm, policy: &SamplePolicy) -> Result<Aggregate> {
        Ok(alpha.pullback(&self.p)?.pullback(&self.sigma)?.sub(alpha)?.zero_test(policy))
    }
}

#[derive(Clone, Debug)]
pub struct ReductionManifest {
    pub name: String,
    pub action: ActionPresentation,
    pub cg: CosymplecticStructure,
    pub cm: CosymplecticStructure,
    pub geometry: ReductionGeometry,
}

#[derive(Clone, Debug)]
pub struct ReducedStructure {
    pub chart: ChartRef,
    pub eta: DifferentialForm,
    pub omega: DifferentialForm,
    pub reeb: Option<VectorField>,
    /// Verdict class of every check that went into the result.
    pub provenance: Vec<(String, Status)>,
}

impl ReducedStructure {
    pub fn to_json(&self) -> serde_json::Value {
        let provenance: BTreeMap<&str, &str> =
            self.provenance.iter().map(|(k, s)| (k.as_str(), s.label())).collect();
        json!({
            "chart": self.chart.name(),
            "coords": self.chart.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "eta": self.eta.to_string(),
            "omega": self.omega.to_string(),
            "reeb": self.reeb.as_ref().map(|r| r.to_string()),
            "provenance": provenance,
        })
    }

    /// Zero tests of the differences to another reduced structure.
    pub fn compare(&self, other: &ReducedStructure, policy: &SamplePolicy) -> Result<Aggregate> {
        self.chart.require_same(&other.chart)?;
        let mut agg = self.eta.sub(&other.eta)?.zero_test(policy);
        agg = agg.combine(self.omega.sub(&other.omega)?.zero_test(policy));
        if let (Some(a), Some(b)) = (&self.reeb, &other.reeb) {
            agg = agg.combine(a.sub(b)?.zero_test(policy));
        }
        Ok(agg)
    }
}

#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub checks: Checks,
    pub reduced: Option<ReducedStructure>,
    pub failed_stage: Option<String>,
}

impl ReductionOutcome {
    pub fn passed(&self) -> bool {
        self.checks.passed() && self.reduced.is_some()
    }

    pub fn artifacts(&self, key: &str) -> BTreeMap<String, serde_json::Value> {
        let mut out = BTreeMap::new();
        if let Some(r) = &self.reduced {
            out.insert(key.to_string(), r.to_json());
        }
        out
    }
}

const STAGES: [&str; 5] = ["manifest", "basic", "construct", "defining", "quotient"];

/// Runs the stages in order; after the first failing stage the rest are
/// recorded as skipped.
struct StageRunner {
    checks: Checks,
    failed: Option<String>,
}

impl StageRunner {
    fn new() -> Self {
        StageRunner {
            checks: Checks::new(),
            failed: None,
        }
    }

    fn run(&mut self, stage: &str, f: impl FnOnce() -> Result<Checks>) {
        if let Some(prev) = &self.failed {
            let reason = format!("stage {prev} failed");
            self.checks.skip(stage, "stage prerequisite", reason);
            return;
        }
        let c = match f() {
            Ok(c) => c,
            Err(e) => {
                let mut c = Checks::new();
                c.fail("error", "stage evaluation", e.to_string());
                c
            }
        };
        if !c.passed() {
            self.failed = Some(stage.to_string());
        }
        self.checks.extend(stage, c);
    }

    fn ok(&self) -> bool {
        self.failed.is_none()
    }
}

/// Forms on the level set that the quotient must reproduce. `eta` is absent
/// for the symplectic (leaf) variant.
struct Target<'a> {
    name: &'a str,
    anchor: &'a SmoothMap,
    eta: Option<&'a DifferentialForm>,
    omega: &'a DifferentialForm,
}

fn manifest_stage(t: &Target, geo: &ReductionGeometry, policy: &SamplePolicy) -> Result<Checks> {
    let mut c = Checks::new();
    let l = geo.level_chart();
    let iota = &geo.level.map;
    let level = t.anchor.compose(iota)?;
    c.verdict(
        "level",
        "ρ∘ι = ξ",
        &residual::vectors(t.anchor.target(), level.components(), &geo.xi, l, policy),
    );
    c.push(rank_entry(
        "regular",
        "rank dρ = dim G₀ along ρ⁻¹(ξ)",
        &jacobian_along(t.anchor, iota)?,
        l,
        t.anchor.target().dim(),
        policy,
    ));
    c.attest("regular_attested", "ξ is a regular value", &format!("regular:{}", t.name), geo.attest_regular);
    c.extend("level", geo.level.immersion_checks(policy));
    c.verdict(
        "section",
        "p∘σ = id_Q",
        &geo.p.compose(&geo.sigma)?.difference_test(&SmoothMap::identity(&geo.quotient), policy)?,
    );
    c.push(rank_entry("submersion", "rank dp = dim Q", &geo.p.jacobian(), l, geo.quotient.dim(), policy));
    let (dl, dq, k) = (l.dim(), geo.quotient.dim(), geo.generators.len());
    let anchor = "dim L − dim Q = k";
    if dl == dq + k {
        c.pass("dimension", anchor, Status::Proved, format!("{dl} − {dq} = {k}"));
    } else {
        c.fail("dimension", anchor, format!("{dl} − {dq} ≠ {k}"));
    }
    let want_odd = t.eta.is_some();
    let parity = if want_odd { "odd" } else { "even" };
    if (dq % 2 == 1) == want_odd {
        c.pass("quotient_parity", "dim Q parity", Status::Proved, format!("{dq} is {parity}"));
    } else {
        c.fail("quotient_parity", "dim Q parity", format!("{dq} is not {parity}"));
    }
    c.extend("isotropy_group", geo.isotropy.group.checks(policy)?);
    c.extend("isotropy", geo.isotropy.checks(policy)?);
    let gc = &geo.isotropy.group.chart;
    for (i, v) in geo.generators.iter().enumerate() {
        c.push(geo.isotropy.generator_entry(
            &format!("generator.{}", gc.coord(i)),
            "V = d/dε a(exp εA, x)",
            i,
            v,
            policy,
        )?);
    }
    let mut vertical = Aggregate::exact();
    for (i, v) in geo.generators.iter().enumerate() {
        let pushed = geo.p.push_vector(v)?;
        vertical = vertical.combine(residual::labelled(
            gc.coord(i),
            &geo.quotient,
            &pushed,
            &vec![Expr::zero(); pushed.len()],
            l,
            policy,
        ));
    }
    c.verdict("vertical", "dp(Vᵢ) = 0", &vertical);
    let gens: Vec<Vec<Expr>> = geo.generators.iter().map(|v| v.components().to_vec()).collect();
    c.push(rank_entry("vertical_rank", "span{Vᵢ} = Ker dp", &gens, l, k, policy));
    Ok(c)
}

fn restricted(t: &Target, geo: &ReductionGeometry) -> Result<(Option<DifferentialForm>, DifferentialForm)> {
    let iota = &geo.level.map;
    let eta = t.eta.map(|e| e.pullback(iota)).transpose()?;
    Ok((eta, t.omega.pullback(iota)?))
}

fn basic_stage(t: &Target, geo: &ReductionGeometry, policy: &SamplePolicy) -> Result<Checks> {
    let mut c = Checks::new();
    let (eta_l, omega_l) = restricted(t, geo)?;
    let gc = &geo.isotropy.group.chart;
    for (i, v) in geo.generators.iter().enumerate() {
        let a = gc.coord(i);
        if let Some(e) = &eta_l {
            c.verdict(&format!("horizontal_eta.{a}"), "i_V ι*η = 0", &e.interior(v)?.zero_test(policy));
        }
        c.verdict(&format!("horizontal_omega.{a}"), "i_V ι*ω = 0", &omega_l.interior(v)?.zero_test(policy));
    }
    let h = geo.isotropy.at_symbolic_element()?;
    if let Some(e) = &eta_l {
        c.verdict("invariant_eta", "h*ι*η = ι*η", &e.pullback(&h)?.sub(e)?.zero_test(policy));
    }
    c.verdict("invariant_omega", "h*ι*ω = ι*ω", &omega_l.pullback(&h)?.sub(&omega_l)?.zero_test(policy));
    Ok(c)
}

fn constructed(t: &Target, geo: &ReductionGeometry) -> Result<(Option<DifferentialForm>, DifferentialForm)> {
    let (eta_l, omega_l) = restricted(t, geo)?;
    let eta = eta_l.map(|e| e.pullback(&geo.sigma)).transpose()?;
    Ok((eta, omega_l.pullback(&geo.sigma)?))
}

/// p*η' = ι*η and p*ω' = ι*ω for a candidate pair on Q.
pub fn defining_checks(
    geo: &ReductionGeometry,
    eta: Option<(&DifferentialForm, &DifferentialForm)>,
    omega: (&DifferentialForm, &DifferentialForm),
    policy: &SamplePolicy,
) -> Result<Checks> {
    let mut c = Checks::new();
    let iota = &geo.level.map;
    if let Some((candidate, ambient)) = eta {
        let r = candidate.pullback(&geo.p)?.sub(&ambient.pullback(iota)?)?;
        c.verdict("eta", "p*η^ξ = ι*η", &r.zero_test(policy));
    }
    let (candidate, ambient) = omega;
    let r = candidate.pullback(&geo.p)?.sub(&ambient.pullback(iota)?)?;
    c.verdict("omega", "p*ω^ξ = ι*ω", &r.zero_test(policy));
    Ok(c)
}

fn quotient_stage(eta: Option<&DifferentialForm>, omega: &DifferentialForm, policy: &SamplePolicy) -> Result<Checks> {
    Ok(match eta {
        Some(e) => check_cosymplectic(e, omega, policy)?.checks(None),
        None => check_symplectic(omega, policy)?.checks(),
    })
}

fn provenance(c: &Checks) -> Vec<(String, Status)> {
    c.entries
        .iter()
        .filter(|e| e.status != Status::Info)
        .map(|e| (e.id.clone(), e.status))
        .collect()
}

fn run_stages(t: &Target, geo: &ReductionGeometry, policy: &SamplePolicy) -> (StageRunner, Option<(Option<DifferentialForm>, DifferentialForm)>) {
    let mut run = StageRunner::new();
    run.run(STAGES[0], || manifest_stage(t, geo, policy));
    run.run(STAGES[1], || basic_stage(t, geo, policy));
    let mut forms = None;
    run.run(STAGES[2], || {
        let (eta, omega) = constructed(t, geo)?;
        let mut c = Checks::new();
        if let Some(e) = &eta {
            c.info("eta", "η^ξ = σ*ι*η", e.to_string());
        }
        c.info("omega", "ω^ξ = σ*ι*ω", omega.to_string());
        forms = Some((eta, omega));
        Ok(c)
    });
    run.run(STAGES[3], || {
        let (eta, omega) = forms.as_ref().expect("construct stage ran");
        defining_checks(geo, t.eta.zip(eta.as_ref()).map(|(a, e)| (e, a)), (omega, t.omega), policy)
    });
    run.run(STAGES[4], || {
        let (eta, omega) = forms.as_ref().expect("construct stage ran");
        quotient_stage(eta.as_ref(), omega, policy)
    });
    let ok = run.ok();
    (run, if ok { forms } else { None })
}

/// Solves dι(R_L) = R∘ι on L and returns R^ξ = dp(R_L)∘σ. Fails when R is
/// not tangent to the level set.
pub fn descend_reeb(geo: &ReductionGeometry, r: &VectorField, policy: &SamplePolicy) -> Result<VectorField> {
    let iota = &geo.level.map;
    r.chart().require_same(iota.target())?;
    let l = geo.level_chart();
    let jac = iota.jacobian();
    let rhs: Vec<Vec<Expr>> = r
        .components()
        .iter()
        .map(|c| Ok(vec![iota.pull_function(c)?]))
        .collect::<Result<_>>()?;
    let sol = linalg::solve(&jac, &rhs, policy)
        .map_err(|e| Error::linalg("lifting R to the level set", e))?;
    let r_l = VectorField::new(l, sol.into_iter().map(|mut row| row.remove(0)).collect())?;
    let pushed = geo.p.push_vector(&r_l)?;
    let comps = pushed
        .iter()
        .map(|c| Ok(geo.sigma.pull_function(c)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(VectorField::new(&geo.quotient, comps)?)
}

/// η^ξ(R^ξ) = 1, i_{R^ξ}ω^ξ = 0 and invariance of both forms under R^ξ.
pub fn reeb_checks(
    eta: &DifferentialForm,
    omega: &DifferentialForm,
    r: &VectorField,
    policy: &SamplePolicy,
) -> Result<Checks> {
    let mut c = Checks::new();
    let one = &eta.apply(r)? - &Expr::one();
    c.verdict("normalized", "η^ξ(R^ξ) = 1", &aggregate([("η(R)".to_string(), &one)], r.chart().coords(), policy));
    c.verdict("kernel", "i_{R^ξ}ω^ξ = 0", &omega.interior(r)?.zero_test(policy));
    c.verdict("lie_eta", "L_{R^ξ}η^ξ = 0", &eta.lie_derivative(r)?.zero_test(policy));
    c.verdict("lie_omega", "L_{R^ξ}ω^ξ = 0", &omega.lie_derivative(r)?.zero_test(policy));
    Ok(c)
}

fn reduce_with_reeb(
    name: &str,
    anchor: &SmoothMap,
    cm: &CosymplecticStructure,
    geo: &ReductionGeometry,
    policy: &SamplePolicy,
) -> (Checks, Option<ReducedStructure>, Option<String>) {
    let t = Target {
        name,
        anchor,
        eta: Some(cm.eta()),
        omega: cm.omega(),
    };
    let (mut run, forms) = run_stages(&t, geo, policy);
    let mut reeb = None;
    run.run("reeb", || {
        let (eta, omega) = forms.as_ref().expect("stages passed");
        let eta = eta.as_ref().expect("cosymplectic target");
        let mut c = Checks::new();
        match descend_reeb(geo, cm.reeb(), policy) {
            Ok(r) => {
                c.pass("tangent", "dι(R_L) = R∘ι solvable", Status::Proved, "R is tangent to the level set");
                c.extend("", reeb_checks(eta, omega, &r, policy)?);
                c.info("field", "R^ξ = dp(R_L)", r.to_string());
                reeb = Some(r);
            }
            Err(e) => {
                c.fail("tangent", "dι(R_L) = R∘ι solvable", e.to_string());
            }
        }
        Ok(c)
    });
    let failed = run.failed.clone();
    let reduced = match (forms, failed.is_none()) {
        (Some((Some(eta), omega)), true) => Some(ReducedStructure {
            chart: geo.quotient.clone(),
            eta,
            omega,
            reeb,
            provenance: provenance(&run.checks),
        }),
        _ => None,
    };
    (run.checks, reduced, failed)
}

/// The action must pass its axioms and the cosymplectic action check before
/// any stage runs.
pub fn verify_reduction(m: &ReductionManifest, policy: &SamplePolicy) -> Result<ReductionOutcome> {
    let a = &m.action;
    a.validate()?;
    m.cm.chart().require_same(&a.module)?;
    m.geometry.validate(&m.name, &a.module, &a.groupoid.objects)?;
    let mut pre = StageRunner::new();
    pre.run("action", || {
        let mut c = check_action_axioms(a, policy)?;
        c.extend("", check_cosymplectic_action(a, &m.cg, &m.cm, policy)?);
        Ok(c)
    });
    let mut checks = pre.checks;
    if let Some(stage) = pre.failed {
        for s in STAGES.iter().chain(["reeb"].iter()) {
            checks.skip(s, "stage prerequisite", "stage action failed");
        }
        return Ok(ReductionOutcome {
            checks,
            reduced: None,
            failed_stage: Some(stage),
        });
    }
    let (c, reduced, failed) = reduce_with_reeb(&m.name, &a.rho, &m.cm, &m.geometry, policy);
    checks.extend("", c);
    Ok(ReductionOutcome {
        checks,
        reduced,
        failed_stage: failed,
    })
}

/// A second candidate (η', ω') on Q: the defining identities and equality
/// with the reduced structure.
pub fn check_candidate(
    geo: &ReductionGeometry,
    cm: &CosymplecticStructure,
    reduced: &ReducedStructure,
    eta: &DifferentialForm,
    omega: &DifferentialForm,
    policy: &SamplePolicy,
) -> Result<Checks> {
    let mut c = defining_checks(geo, Some((eta, cm.eta())), (omega, cm.omega()), policy)?;
    c.verdict("unique_eta", "η' = η^ξ", &eta.sub(&reduced.eta)?.zero_test(policy));
    c.verdict("unique_omega", "ω' = ω^ξ", &omega.sub(&reduced.omega)?.zero_test(policy));
    Ok(c)
}

/// The groupoid-side manifest for Hamiltonian group data: the Reeb flow
/// action of the extended coadjoint groupoid.
pub fn albert_manifest(
    spec: &ReebFlowActionSpec,
    cm: &CosymplecticStructure,
    geo: &ReductionGeometry,
    policy: &SamplePolicy,
) -> Result<ReductionManifest> {
    let action = reeb_flow_extension(spec, policy)?;
    let g = &action.groupoid;
    let (eta_g, omega_g) = match (&g.eta, &g.omega) {
        (Some(e), Some(w)) => (e.clone(), w.clone()),
        _ => return Err(Error::Missing(format!("cosymplectic forms on {}", g.name))),
    };
    let cg = CosymplecticStructure::new(&g.name, eta_g, omega_g, policy)?;
    Ok(ReductionManifest {
        name: action.name.clone(),
        action,
        cg,
        cm: cm.clone(),
        geometry: geo.clone(),
    })
}

/// Group route and groupoid route for a Hamiltonian group action, gated on
/// the momentum map and flow checks, with the two results compared.
pub fn verify_albert_reduction(
    spec: &ReebFlowActionSpec,
    cm: &CosymplecticStructure,
    geo: &ReductionGeometry,
    policy: &SamplePolicy,
) -> Result<ReductionOutcome> {
    let mm = &spec.momentum;
    let mut gate = StageRunner::new();
    gate.run("momentum", || check_albert_momentum(mm, cm, policy));
    gate.run("flow", || spec.flow_checks(cm, policy));
    let mut checks = gate.checks;
    if let Some(stage) = gate.failed {
        for s in ["group", "groupoid", "cross_path"] {
            checks.skip(s, "route prerequisite", format!("stage {stage} failed"));
        }
        return Ok(ReductionOutcome {
            checks,
            reduced: None,
            failed_stage: Some(stage),
        });
    }
    geo.validate(&mm.name, &mm.action.space, &mm.coadjoint.space)?;
    let (group_checks, group, group_failed) = reduce_with_reeb(&mm.name, &mm.mu, cm, geo, policy);
    checks.extend("group", group_checks);

    let manifest = albert_manifest(spec, cm, geo, policy)?;
    let outcome = verify_reduction(&manifest, policy)?;
    checks.extend("groupoid", outcome.checks);
    let anchor = "group route = groupoid route";
    match (&group, &outcome.reduced) {
        (Some(a), Some(b)) => {
            checks.verdict("cross_path", anchor, &a.compare(b, policy)?);
        }
        _ => checks.skip("cross_path", anchor, "a route did not produce a reduced structure"),
    }
    let failed = group_failed.map(|s| format!("group.{s}")).or(outcome.failed_stage.map(|s| format!("groupoid.{s}")));
    let reduced = if checks.passed() { outcome.reduced } else { None };
    Ok(ReductionOutcome {
        checks,
        reduced,
        failed_stage: failed,
    })
}

/// Reduction of one symplectic leaf S ⊂ M: the level set L_S ⊂ S with its
/// own isotropy data, and the embedding of the reduced leaf into Q.
#[derive(Clone, Debug)]
pub struct LeafReductionSpec {
    pub leaf: LeafSpec,
    pub geometry: ReductionGeometry,
    pub quotient_leaf: SmoothMap,
    pub restriction: Option<LeafRestriction>,
}

/// Stages with η omitted and ω_S in place of ω, then ω_S^ξ = j*ω^ξ and
/// j*η^ξ = 0 for the quotient leaf embedding j.
pub fn verify_leaf_reduction(
    m: &ReductionManifest,
    spec: &LeafReductionSpec,
    reduced: &ReducedStructure,
    policy: &SamplePolicy,
) -> Result<Checks> {
    let leaf = &spec.leaf;
    leaf.validate()?;
    let a = &m.action;
    leaf.embedding.ambient().require_same(&a.module)?;
    let anchor = a.rho.compose(&leaf.embedding.map)?;
    let geo = &spec.geometry;
    geo.validate(&leaf.name, leaf.chart(), &a.groupoid.objects)?;
    let j = &spec.quotient_leaf;
    if j.source().as_ref() != geo.quotient.as_ref() || j.target().as_ref() != reduced.chart.as_ref() {
        return Err(Error::invalid(&leaf.name, "quotient leaf must embed the leaf quotient into Q"));
    }
    let mut pre = StageRunner::new();
    pre.run("restriction", || match &spec.restriction {
        Some(r) => check_leaf_restriction(a, &m.cg, &m.cm, r, policy),
        None => {
            let mut c = Checks::new();
            c.extend("", crate::submanifold::check_leaf(leaf, m.cm.eta(), m.cm.omega(), policy)?);
            c.skip("action", "restricted action", "no factored restriction supplied");
            Ok(c)
        }
    });
    let mut checks = pre.checks;
    if pre.failed.is_some() {
        for s in STAGES.iter().chain(["leaf"].iter()) {
            checks.skip(s, "stage prerequisite", "stage restriction failed");
        }
        return Ok(checks);
    }
    let t = Target {
        name: &leaf.name,
        anchor: &anchor,
        eta: None,
        omega: &leaf.omega_leaf,
    };
    let (mut run, forms) = run_stages(&t, geo, policy);
    run.run("leaf", || {
        let (_, omega_s) = forms.as_ref().expect("stages passed");
        let mut c = Checks::new();
        c.verdict(
            "form",
            "ω_S^ξ = j*ω^ξ",
            &omega_s.sub(&reduced.omega.pullback(j)?)?.zero_test(policy),
        );
        c.verdict("kernel", "j*η^ξ = 0", &reduced.eta.pullback(j)?.zero_test(policy));
        c.push(rank_entry("immersion", "rank dj = dim Q_S", &j.jacobian(), j.source(), j.source().dim(), policy));
        Ok(c)
    });
    checks.extend("", run.checks);
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rotation_reduces_to_standard_three_space() {
        let policy = SamplePolicy::default();
        let f = fixtures::rotation(&policy).unwrap();
        let out = verify_albert_reduction(&f.spec, &f.cm, &f.geometry, &policy).unwrap();
        assert!(out.passed(), "{:?}", out.checks.first_failure());
        let r = out.reduced.unwrap();
        let q = &r.chart;
        assert!(r.eta.sub(&DifferentialForm::d_coord(q, "z").unwrap()).unwrap().is_exact_zero());
        let expected = DifferentialForm::parse(q, 2, &[("x2 y2", "1")]).unwrap();
        assert!(r.omega.sub(&expected).unwrap().zero_test(&policy).is_zero_class());
        let dz = VectorField::coordinate(q, "z").unwrap();
        assert!(r.reeb.as_ref().unwrap().sub(&dz).unwrap().zero_test(&policy).is_zero_class());

        let m = albert_manifest(&f.spec, &f.cm, &f.geometry, &policy).unwrap();
        let leaf = verify_leaf_reduction(&m, &f.leaf, &r, &policy).unwrap();
        assert!(leaf.passed(), "{:?}", leaf.first_failure());
        assert_eq!(leaf.find("leaf.form").unwrap().status, Status::Proved);
    }

    #[test]
    fn trivial_group_reduction_is_the_identity() {
        let policy = SamplePolicy::default();
        let (cm, spec) = fixtures::translation_flow(&policy).unwrap();
        let geo = fixtures::identity_geometry(&cm).unwrap();
        let out = verify_albert_reduction(&spec, &cm, &geo, &policy).unwrap();
        assert!(out.passed(), "{:?}", out.checks.first_failure());
        let r = out.reduced.unwrap();
        assert!(r.eta.sub(cm.eta()).unwrap().is_exact_zero());
        assert!(r.omega.sub(cm.omega()).unwrap().is_exact_zero());
        assert!(r.reeb.unwrap().sub(cm.reeb()).unwrap().zero_test(&policy).is_zero_class());
    }

    #[test]
    fn scaled_leaf_form_is_rejected() {
        let policy = SamplePolicy::default();
        let f = fixtures::rotation(&policy).unwrap();
        let out = verify_albert_reduction(&f.spec, &f.cm, &f.geometry, &policy).unwrap();
        let m = albert_manifest(&f.spec, &f.cm, &f.geometry, &policy).unwrap();
        let mut spec = f.leaf.clone();
        spec.leaf.omega_leaf = spec.leaf.omega_leaf.scale(&Expr::int(2));
        spec.restriction = None;
        let c = verify_leaf_reduction(&m, &spec, out.reduced.as_ref().unwrap(), &policy).unwrap();
        assert!(!c.passed());
        let e = c.first_failure().unwrap();
        assert!(e.witness.is_some(), "{e:?}");
    }

    #[test]
    fn tilted_level_set_is_not_tangent_to_reeb() {
        let policy = SamplePolicy::default();
        let f = fixtures::rotation(&policy).unwrap();
        let geo = fixtures::rotation_tilted_level(&policy).unwrap();
        let err = descend_reeb(&geo, f.cm.reeb(), &policy).unwrap_err();
        assert!(matches!(err, Error::Linalg { .. }), "{err}");
    }

    #[test]
    fn broken_section_fails_in_manifest_stage() {
        let policy = SamplePolicy::default();
        let f = fixtures::rotation(&policy).unwrap();
        let mut geo = f.geometry.clone();
        geo.sigma = geo.sigma.with_component("x2", Expr::var("x2") + Expr::one()).unwrap();
        let out = verify_albert_reduction(&f.spec, &f.cm, &geo, &policy).unwrap();
        assert!(!out.passed());
        assert_eq!(out.failed_stage.as_deref(), Some("group.manifest"));
        let e = out.checks.find("group.manifest.section").unwrap();
        assert_eq!(e.status, Status::Failed);
        assert!(e.witness.is_some());
    }
}
