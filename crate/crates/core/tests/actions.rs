use cosym::action::{check_albert_momentum, check_cosymplectic_action, reeb_flow_extension, self_action};
use cosym::fixtures;
use cosym::report::Status;
use cosym::symbolic::SamplePolicy;
use proptest::prelude::*;

fn policy() -> SamplePolicy {
    SamplePolicy::default()
}

#[test]
fn rotation_momentum_map_is_albert() {
    let p = policy();
    let f = fixtures::rotation(&p).unwrap();
    let c = check_albert_momentum(&f.spec.momentum, &f.cm, &p).unwrap();
    assert!(c.passed(), "{:?}", c.first_failure());
    let flow = f.spec.flow_checks(&f.cm, &p).unwrap();
    assert_eq!(flow.find("flow_equation").unwrap().status, Status::Proved);
    assert_eq!(flow.find("flow_window").unwrap().status, Status::Attested);
}

#[test]
fn reeb_flow_extension_is_a_cosymplectic_action() {
    let p = policy();
    let f = fixtures::rotation(&p).unwrap();
    let a = reeb_flow_extension(&f.spec, &p).unwrap();
    let g = &a.groupoid;
    let cg = cosym::cosymplectic::CosymplecticStructure::new(
        &g.name,
        g.eta.clone().unwrap(),
        g.omega.clone().unwrap(),
        &p,
    )
    .unwrap();
    // dim A = dim G₁ + dim M − dim G₀.
    assert_eq!(a.pairs.chart.dim(), g.arrows.dim() + f.cm.chart().dim() - g.objects.dim());
    let c = check_cosymplectic_action(&a, &cg, &f.cm, &p).unwrap();
    assert!(c.passed(), "{:?}", c.first_failure());
}

#[test]
fn translation_flow_of_the_trivial_group() {
    let p = policy();
    let (cm, spec) = fixtures::translation_flow(&p).unwrap();
    assert!(check_albert_momentum(&spec.momentum, &cm, &p).unwrap().passed());
    assert!(spec.flow_checks(&cm, &p).unwrap().passed());
}

#[test]
fn self_action_rejects_a_foreign_module_structure() {
    let p = policy();
    let (g, c) = fixtures::extension(1, &p).unwrap();
    let a = self_action(&g).unwrap();
    let other = fixtures::std3(&p).unwrap();
    assert!(check_cosymplectic_action(&a, &c, &other, &p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(7))]

    /// The flow z + k·τ solves the Reeb equation only at k = 1.
    #[test]
    fn only_unit_speed_is_the_reeb_flow(k in -3i64..=3) {
        let p = policy();
        let cm = fixtures::std5(&p).unwrap();
        let spec = fixtures::rotation_with_speed(&k.to_string(), &p).unwrap();
        let flow = spec.flow_checks(&cm, &p).unwrap();
        prop_assert_eq!(flow.find("flow_initial").unwrap().status, Status::Proved);
        prop_assert_eq!(flow.find("flow_equation").unwrap().passed(), k == 1);
    }
}
