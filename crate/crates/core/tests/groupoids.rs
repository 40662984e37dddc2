use cosym::action::{check_action_axioms, check_cosymplectic_action, multiplication_graph, self_action};
use cosym::fixtures;
use cosym::groupoid::{check_groupoid_axioms, check_multiplicative, inverse_antimultiplicativity};
use cosym::report::Status;
use cosym::symbolic::{parse, Expr, SamplePolicy};
use proptest::prelude::*;

fn policy() -> SamplePolicy {
    SamplePolicy::default()
}

#[test]
fn extensions_are_cosymplectic_groupoids() {
    for n in [1, 2] {
        let (g, c) = fixtures::extension(n, &policy()).unwrap();
        let ax = check_groupoid_axioms(&g, &policy()).unwrap();
        assert!(ax.passed(), "n={n}: {:?}", ax.first_failure());
        let mult = check_multiplicative(&g, &policy()).unwrap().checks();
        assert!(mult.passed(), "n={n}: {:?}", mult.first_failure());
        assert_eq!(mult.find("dimension").unwrap().status, Status::Proved);
        let graph = multiplication_graph(&g, &c, &Expr::one()).unwrap();
        // dim G₁ = 2n + 1 and Γ sits in G₁³ × ℝ².
        assert_eq!(graph.chart.dim(), 3 * (2 * n + 1) + 2);
        let gc = graph.checks(&policy()).unwrap();
        assert!(gc.passed(), "n={n}: {:?}", gc.first_failure());
    }
}

#[test]
fn graph_verdicts_do_not_depend_on_the_pin() {
    let p = policy();
    let (g, c) = fixtures::extension(1, &p).unwrap();
    let (mut bad, _) = fixtures::extension(1, &p).unwrap();
    bad.eta = Some(cosym::exterior::DifferentialForm::parse(&bad.arrows, 1, &[("t", "1"), ("xi", "xi")]).unwrap());
    let bad_c = fixtures::groupoid_structure(&bad, &p).unwrap();
    for (g, c) in [(&g, &c), (&bad, &bad_c)] {
        let verdicts = |pin: &str| -> Vec<(String, bool)> {
            let graph = multiplication_graph(g, c, &parse(pin).unwrap()).unwrap();
            graph.checks(&p).unwrap().entries.into_iter().map(|e| (e.id.clone(), e.passed())).collect()
        };
        assert_eq!(verdicts("1"), verdicts("-5/2"));
    }
}

#[test]
fn inverse_reverses_the_forms() {
    let (g, _) = fixtures::extension(1, &policy()).unwrap();
    let c = inverse_antimultiplicativity(&g, &policy()).unwrap();
    assert!(!c.entries.is_empty());
    assert!(c.entries.iter().all(|e| e.status == Status::Info));
}

#[test]
fn opposite_groupoid_satisfies_the_axioms() {
    let (g, _) = fixtures::extension(1, &policy()).unwrap();
    let op = g.opposite().unwrap();
    let ax = check_groupoid_axioms(&op, &policy()).unwrap();
    assert!(ax.passed(), "{:?}", ax.first_failure());
    assert_eq!(op.s, g.t);
}

#[test]
fn point_groupoid_acts_on_itself() {
    let (g, c) = fixtures::point_groupoid(&policy()).unwrap();
    let a = self_action(&g).unwrap();
    assert!(check_action_axioms(&a, &policy()).unwrap().passed());
    let r = check_cosymplectic_action(&a, &c, &c, &policy()).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Twisting the t-multiplication by the cocycle k·g₁g₂ keeps a groupoid
    /// but breaks multiplicativity of dt unless k = 0, and the graph test
    /// agrees.
    #[test]
    fn cocycle_twist_is_detected(k in -3i64..=3) {
        let p = policy();
        let (mut g, c) = fixtures::extension(1, &p).unwrap();
        g.pairs.m = g.pairs.m.with_component("t", parse(&format!("t1 + t2 + ({k})*g1.g*g2.g")).unwrap()).unwrap();
        g.inv = g.inv.with_component("t", parse(&format!("-t + ({k})*g^2")).unwrap()).unwrap();
        let ax = check_groupoid_axioms(&g, &p).unwrap();
        prop_assert!(ax.passed());
        let mult = check_multiplicative(&g, &p).unwrap().checks();
        let eta_ok = mult.find("multiplicative_eta").unwrap().passed();
        prop_assert_eq!(eta_ok, k == 0);
        let graph = multiplication_graph(&g, &c, &Expr::one()).unwrap().checks(&p).unwrap();
        prop_assert_eq!(graph.find("legendrian").unwrap().passed(), eta_ok);
    }

    /// ω + k·dg∧dt is multiplicative only for k = 0.
    #[test]
    fn omega_perturbation_is_detected(k in -3i64..=3) {
        let p = policy();
        let (mut g, _) = fixtures::extension(1, &p).unwrap();
        let extra = cosym::exterior::DifferentialForm::parse(&g.arrows, 2, &[("g t", &k.to_string())]).unwrap();
        g.omega = Some(g.omega.as_ref().unwrap().add(&extra).unwrap());
        let c = fixtures::groupoid_structure(&g, &p).unwrap();
        let mult = check_multiplicative(&g, &p).unwrap().checks();
        let ok = mult.find("multiplicative_omega").unwrap().passed();
        prop_assert_eq!(ok, k == 0);
        let graph = multiplication_graph(&g, &c, &Expr::one()).unwrap().checks(&p).unwrap();
        prop_assert_eq!(graph.find("lagrangian").unwrap().passed(), ok);
    }
}
