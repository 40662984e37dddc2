//! Worked examples in explicit coordinates, shared by the gallery and tests.

use crate::action::{
    LeafRestriction, MomentumMapSpec, ReebFlowActionSpec,
};
use crate::cosymplectic::{product_structure, CosymplecticStructure, ProductStructure};
use crate::error::Result;
use crate::exterior::{Chart, ChartRef, DifferentialForm, SmoothMap, VectorField};
use crate::group::{Group, GroupAction};
use crate::groupoid::{cotangent_groupoid, trivial_central_extension, GroupoidPresentation};
use crate::reduction::{LeafReductionSpec, ReductionGeometry};
use crate::residual::coordinates;
use crate::submanifold::{EmbeddingSpec, LeafSpec};
use crate::symbolic::{parse, Expr, SamplePolicy};

fn e(s: &str) -> Expr {
    parse(s).expect("fixture expression parses")
}

fn es(list: &[&str]) -> Vec<Expr> {
    list.iter().map(|s| e(s)).collect()
}

/// ℝ³ with η = dz, ω = dx∧dy.
pub fn std3(policy: &SamplePolicy) -> Result<CosymplecticStructure> {
    let m = Chart::new("R3", &["x", "y", "z"])?;
    CosymplecticStructure::parse("std3", &m, &[("z", "1")], &[("x y", "1")], policy)
}

/// ℝ⁵ with η = dz, ω = dx₁∧dy₁ + dx₂∧dy₂.
pub fn std5(policy: &SamplePolicy) -> Result<CosymplecticStructure> {
    let m = Chart::new("R5", &["x1", "y1", "x2", "y2", "z"])?;
    CosymplecticStructure::parse("std5", &m, &[("z", "1")], &[("x1 y1", "1"), ("x2 y2", "1")], policy)
}

/// ℝ³ with η = dz, ω = dx∧dy + dx∧dz; its Reeb field is −∂y + ∂z.
pub fn skew3(policy: &SamplePolicy) -> Result<CosymplecticStructure> {
    let m = Chart::new("R3", &["x", "y", "z"])?;
    CosymplecticStructure::parse("skew3", &m, &[("z", "1")], &[("x y", "1"), ("x z", "1")], policy)
}

/// std3 × std3 × ℝ.
pub fn product(policy: &SamplePolicy) -> Result<ProductStructure> {
    product_structure(&std3(policy)?, &std3(policy)?, policy)
}

/// The trivial central extension of T*ℝⁿ and its cosymplectic structure.
pub fn extension(n: usize, policy: &SamplePolicy) -> Result<(GroupoidPresentation, CosymplecticStructure)> {
    let g = trivial_central_extension(&cotangent_groupoid(n, policy)?)?;
    let c = groupoid_structure(&g, policy)?;
    Ok((g, c))
}

pub fn groupoid_structure(g: &GroupoidPresentation, policy: &SamplePolicy) -> Result<CosymplecticStructure> {
    let eta = g.eta.clone().ok_or_else(|| crate::Error::Missing(format!("η on {}", g.name)))?;
    let omega = g.omega.clone().ok_or_else(|| crate::Error::Missing(format!("ω on {}", g.name)))?;
    CosymplecticStructure::new(&g.name, eta, omega, policy)
}

/// Hamiltonian data and reduction geometry for the circle rotating (x₁, y₁)
/// clockwise in std5 with μ = (x₁² + y₁²)/2, reduced at ξ = 1/2.
#[derive(Clone, Debug)]
pub struct RotationFixture {
    pub cm: CosymplecticStructure,
    pub spec: ReebFlowActionSpec,
    pub geometry: ReductionGeometry,
    pub leaf: LeafReductionSpec,
}

fn circle(name: &str, coord: &str) -> Result<Group> {
    let chart = Chart::with_periodic(name, &[coord], &[coord])?;
    Group::additive(name, &chart)
}

fn rotation_spec(cm: &CosymplecticStructure, speed: &str) -> Result<ReebFlowActionSpec> {
    let m = cm.chart();
    let s1 = circle("S1", "theta")?;
    let action = GroupAction::new(
        "rotation",
        &s1,
        m,
        es(&["cos(theta)*x1 + sin(theta)*y1", "-sin(theta)*x1 + cos(theta)*y1", "x2", "y2", "z"]),
    )?;
    let dual = Chart::new("S1.dual", &["xi"])?;
    let coadjoint = GroupAction::trivial("coadjoint", &s1, &dual)?;
    let generator = VectorField::new(m, es(&["y1", "-x1", "0", "0", "0"]))?;
    let mu = SmoothMap::new(m, &dual, es(&["(x1^2 + y1^2)/2"]))?;
    let tau = Chart::line("R", "tau")?;
    let flow_src = Chart::product("RxR5", &[("", &tau), ("", m)])?;
    let flow = SmoothMap::new(&flow_src, m, es(&["x1", "y1", "x2", "y2", &format!("z + {speed}*tau")]))?;
    let arrows = crate::group::action_source(&s1, &dual)?;
    let groupoid_omega = DifferentialForm::parse(&arrows, 2, &[("theta xi", "1")])?;
    Ok(ReebFlowActionSpec {
        momentum: MomentumMapSpec {
            name: "rotation".into(),
            action,
            generators: vec![generator],
            mu,
            coadjoint,
        },
        flow,
        groupoid_omega,
        window: None,
        free: true,
        proper: true,
    })
}

/// The rotation Hamiltonian data with the Reeb flow at a given speed
/// (1 is the true flow).
pub fn rotation_with_speed(speed: &str, policy: &SamplePolicy) -> Result<ReebFlowActionSpec> {
    rotation_spec(&std5(policy)?, speed)
}

fn level_isotropy(name: &str, l: &ChartRef, others: &[&str]) -> Result<(GroupAction, VectorField)> {
    let iso = circle("S1.iso", "alpha")?;
    let mut comps = vec![e("theta - alpha")];
    comps.extend(others.iter().map(|c| Expr::var(c)));
    let action = GroupAction::new(name, &iso, l, comps)?;
    let mut gen = vec![e("-1")];
    gen.extend(others.iter().map(|_| Expr::zero()));
    Ok((action, VectorField::new(l, gen)?))
}

pub fn rotation(policy: &SamplePolicy) -> Result<RotationFixture> {
    let cm = std5(policy)?;
    let spec = rotation_spec(&cm, "1")?;
    let m = cm.chart();

    let l = Chart::with_periodic("L", &["theta", "x2", "y2", "z"], &["theta"])?;
    let iota = SmoothMap::new(&l, m, es(&["cos(theta)", "sin(theta)", "x2", "y2", "z"]))?;
    let q = Chart::new("Q", &["x2", "y2", "z"])?;
    let (isotropy, generator) = level_isotropy("isotropy", &l, &["x2", "y2", "z"])?;
    let geometry = ReductionGeometry {
        xi: vec![Expr::frac(1, 2)],
        attest_regular: true,
        level: EmbeddingSpec::new("rotation.level", iota, true),
        isotropy,
        generators: vec![generator],
        p: SmoothMap::new(&l, &q, es(&["x2", "y2", "z"]))?,
        sigma: SmoothMap::new(&q, &l, es(&["0", "x2", "y2", "z"]))?,
        quotient: q.clone(),
    };
    let leaf = rotation_leaf(&cm, &spec, &q, policy)?;
    Ok(RotationFixture {
        cm,
        spec,
        geometry,
        leaf,
    })
}

/// The leaf {z = 0} with level set (θ, x₂, y₂) and quotient (x₂, y₂).
fn rotation_leaf(
    cm: &CosymplecticStructure,
    spec: &ReebFlowActionSpec,
    q: &ChartRef,
    policy: &SamplePolicy,
) -> Result<LeafReductionSpec> {
    let m = cm.chart();
    let s = Chart::new("S", &["x1", "y1", "x2", "y2"])?;
    let leaf = LeafSpec {
        name: "rotation.leaf".into(),
        embedding: EmbeddingSpec::new("rotation.leaf", SmoothMap::new(&s, m, es(&["x1", "y1", "x2", "y2", "0"]))?, true),
        omega_leaf: DifferentialForm::parse(&s, 2, &[("x1 y1", "1"), ("x2 y2", "1")])?,
    };
    let ls = Chart::with_periodic("L_S", &["theta", "x2", "y2"], &["theta"])?;
    let qs = Chart::new("Q_S", &["x2", "y2"])?;
    let (isotropy, generator) = level_isotropy("isotropy.leaf", &ls, &["x2", "y2"])?;
    let geometry = ReductionGeometry {
        xi: vec![Expr::frac(1, 2)],
        attest_regular: true,
        level: EmbeddingSpec::new("rotation.leaf.level", SmoothMap::new(&ls, &s, es(&["cos(theta)", "sin(theta)", "x2", "y2"]))?, true),
        isotropy,
        generators: vec![generator],
        p: SmoothMap::new(&ls, &qs, es(&["x2", "y2"]))?,
        sigma: SmoothMap::new(&qs, &ls, es(&["0", "x2", "y2"]))?,
        quotient: qs.clone(),
    };
    let quotient_leaf = SmoothMap::new(&qs, q, es(&["x2", "y2", "0"]))?;
    let restriction = rotation_restriction(spec, &leaf, policy)?;
    Ok(LeafReductionSpec {
        leaf,
        geometry,
        quotient_leaf,
        restriction: Some(restriction),
    })
}

/// The action restricted to the leaf {t = 0} of the groupoid and {z = 0} of M.
fn rotation_restriction(spec: &ReebFlowActionSpec, leaf_m: &LeafSpec, policy: &SamplePolicy) -> Result<LeafRestriction> {
    let action = crate::action::reeb_flow_extension(spec, policy)?;
    let leaf_g = action
        .groupoid
        .leaf
        .as_ref()
        .ok_or_else(|| crate::Error::Missing("leaf of the extension groupoid".into()))?
        .leaf
        .clone();
    let a_s = Chart::with_periodic("A_S", &["theta", "x1", "y1", "x2", "y2"], &["theta"])?;
    let rot = ["cos(theta)*x1 + sin(theta)*y1", "-sin(theta)*x1 + cos(theta)*y1", "x2", "y2"];
    Ok(LeafRestriction {
        iota: SmoothMap::new(&a_s, &action.pairs.chart, es(&["theta", "0", "x1", "y1", "x2", "y2", "0"]))?,
        arrow: SmoothMap::new(&a_s, leaf_g.chart(), es(&["theta", "(x1^2 + y1^2)/2"]))?,
        point: SmoothMap::new(&a_s, leaf_m.chart(), es(&["x1", "y1", "x2", "y2"]))?,
        phi: SmoothMap::new(&a_s, leaf_m.chart(), es(&rot))?,
        chart: a_s,
        leaf_m: leaf_m.clone(),
        leaf_g,
    })
}

/// The level set {μ + z = 1/2}, parameterized by (θ, x₂, y₂, s); R = ∂z is
/// not tangent to it.
pub fn rotation_tilted_level(policy: &SamplePolicy) -> Result<ReductionGeometry> {
    let cm = std5(policy)?;
    let l = Chart::with_periodic("L", &["theta", "x2", "y2", "s"], &["theta"])?;
    let iota = SmoothMap::new(
        &l,
        cm.chart(),
        es(&["s*cos(theta)", "s*sin(theta)", "x2", "y2", "1/2 - s^2/2"]),
    )?;
    let q = Chart::new("Q", &["x2", "y2", "s"])?;
    let (isotropy, generator) = level_isotropy("isotropy.tilted", &l, &["x2", "y2", "s"])?;
    Ok(ReductionGeometry {
        xi: vec![Expr::frac(1, 2)],
        attest_regular: true,
        level: EmbeddingSpec::new("rotation.tilted", iota, true),
        isotropy,
        generators: vec![generator],
        p: SmoothMap::new(&l, &q, es(&["x2", "y2", "s"]))?,
        sigma: SmoothMap::new(&q, &l, es(&["0", "x2", "y2", "s"]))?,
        quotient: q,
    })
}

/// The trivial group acting trivially on std3 with the Reeb flow z + τ; the
/// extension is ℝ ⇉ pt with η = dt, ω = 0.
pub fn translation_flow(policy: &SamplePolicy) -> Result<(CosymplecticStructure, ReebFlowActionSpec)> {
    let cm = std3(policy)?;
    let m = cm.chart();
    let pt = Group::trivial("pt")?;
    let dual = Chart::new("pt.dual", &[] as &[&str])?;
    let action = GroupAction::trivial("trivial", &pt, m)?;
    let coadjoint = GroupAction::trivial("coadjoint", &pt, &dual)?;
    let tau = Chart::line("R", "tau")?;
    let flow_src = Chart::product("RxR3", &[("", &tau), ("", m)])?;
    let flow = SmoothMap::new(&flow_src, m, es(&["x", "y", "z + tau"]))?;
    let arrows = crate::group::action_source(&pt, &dual)?;
    let spec = ReebFlowActionSpec {
        momentum: MomentumMapSpec {
            name: "translation".into(),
            action,
            generators: vec![],
            mu: SmoothMap::new(m, &dual, vec![])?,
            coadjoint,
        },
        flow,
        groupoid_omega: DifferentialForm::zero(&arrows, 2),
        window: None,
        free: true,
        proper: true,
    };
    Ok((cm, spec))
}

/// Reduction by the trivial group: L = Q = M, ι = p = σ = id.
pub fn identity_geometry(cm: &CosymplecticStructure) -> Result<ReductionGeometry> {
    let m = cm.chart();
    let iso = Group::trivial("iso")?;
    Ok(ReductionGeometry {
        xi: vec![],
        attest_regular: true,
        level: EmbeddingSpec::new("identity.level", SmoothMap::identity(m), true),
        isotropy: GroupAction::trivial("isotropy", &iso, m)?,
        generators: vec![],
        quotient: m.clone(),
        p: SmoothMap::identity(m),
        sigma: SmoothMap::new(m, m, coordinates(m))?,
    })
}

/// ℝ ⇉ pt with η = dt and ω = 0: the extension of the trivial group.
pub fn point_groupoid(policy: &SamplePolicy) -> Result<(GroupoidPresentation, CosymplecticStructure)> {
    let pt = Group::trivial("pt")?;
    let dual = Chart::new("pt.dual", &[] as &[&str])?;
    let coadjoint = GroupAction::trivial("coadjoint", &pt, &dual)?;
    let base = crate::groupoid::action_groupoid("pt", &coadjoint, policy)?;
    let omega = DifferentialForm::zero(&base.arrows, 2);
    let g = trivial_central_extension(&base.with_forms(None, Some(omega))?)?;
    let c = groupoid_structure(&g, policy)?;
    Ok((g, c))
}
