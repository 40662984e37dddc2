use cosym::fixtures;
use cosym::morita::{check_leaf_bimodule, check_morita_conditions, self_bimodule, self_bimodule_leaf};
use cosym::report::Status;
use cosym::symbolic::{Expr, SamplePolicy};

#[test]
fn point_groupoid_is_morita_equivalent_to_itself() {
    let p = SamplePolicy::default();
    let (g, c) = fixtures::point_groupoid(&p).unwrap();
    let m = self_bimodule(&g, &c).unwrap();
    let r = check_morita_conditions(&m, &p).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure());
}

#[test]
fn leaf_conditions_see_the_reeb_field() {
    let p = SamplePolicy::default();
    let (g, c) = fixtures::extension(2, &p).unwrap();
    let m = self_bimodule(&g, &c).unwrap();
    let leaf = self_bimodule_leaf(&g, &m).unwrap();
    let r = check_leaf_bimodule(&m, &leaf, &p).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure());
    assert_eq!(r.find("reeb_rho").unwrap().status, Status::Proved);
    assert_eq!(r.find("reeb_sigma").unwrap().status, Status::Proved);
}

#[test]
fn anchor_depending_on_t_breaks_reeb_invariance() {
    let p = SamplePolicy::default();
    let (g, c) = fixtures::extension(1, &p).unwrap();
    let mut m = self_bimodule(&g, &c).unwrap();
    m.left.rho = m.left.rho.with_component("xi", Expr::var("xi") + Expr::var("t")).unwrap();
    let r = check_morita_conditions(&m, &p).unwrap();
    assert!(!r.passed());
    assert_eq!(r.find("left.anchor_reeb").unwrap().status, Status::Failed);
}
