use cosym::exterior::{DifferentialForm, VectorField};
use cosym::fixtures;
use cosym::reduction::{check_candidate, verify_albert_reduction, verify_leaf_reduction, albert_manifest};
use cosym::report::Status;
use cosym::symbolic::SamplePolicy;
use cosym::testdata;

fn policy() -> SamplePolicy {
    SamplePolicy::default()
}

#[test]
fn rotation_reduces_to_std3() {
    let p = policy();
    let f = fixtures::rotation(&p).unwrap();
    let out = verify_albert_reduction(&f.spec, &f.cm, &f.geometry, &p).unwrap();
    assert!(out.passed(), "{:?}", out.checks.first_failure());
    let r = out.reduced.unwrap();
    let q = &f.geometry.quotient;
    assert_eq!(r.eta, DifferentialForm::parse(q, 1, &[("z", "1")]).unwrap());
    assert_eq!(r.omega, DifferentialForm::parse(q, 2, &[("x2 y2", "1")]).unwrap());
    assert_eq!(r.reeb.unwrap(), VectorField::coordinate(q, "z").unwrap());
    assert_eq!(out.checks.find("cross_path").unwrap().status, Status::Proved);
}

#[test]
fn perturbed_candidate_fails_the_defining_identity() {
    let p = policy();
    let f = fixtures::rotation(&p).unwrap();
    let r = verify_albert_reduction(&f.spec, &f.cm, &f.geometry, &p).unwrap().reduced.unwrap();
    let q = &f.geometry.quotient;
    for (deg, terms) in [(1, vec![("x2", "1")]), (1, vec![("y2", "x2")]), (1, vec![("z", "z")])] {
        let alpha = DifferentialForm::parse(q, deg, &terms).unwrap();
        let eta = r.eta.add(&alpha).unwrap();
        let c = check_candidate(&f.geometry, &f.cm, &r, &eta, &r.omega, &p).unwrap();
        let e = c.find("eta").unwrap();
        assert_eq!(e.status, Status::Failed, "{alpha}");
        assert!(e.witness.is_some());
        assert_eq!(c.find("omega").unwrap().status, Status::Proved);
    }
}

#[test]
fn level_set_off_the_momentum_level_fails_the_first_stage() {
    let p = policy();
    let f = fixtures::rotation(&p).unwrap();
    let geo = fixtures::rotation_tilted_level(&p).unwrap();
    let out = verify_albert_reduction(&f.spec, &f.cm, &geo, &p).unwrap();
    assert!(!out.passed());
    assert!(out.reduced.is_none());
    assert_eq!(out.failed_stage.as_deref(), Some("group.manifest"));
    assert_eq!(out.checks.find("group.basic").unwrap().status, Status::Skipped);
}

#[test]
fn section_round_trip_on_random_forms() {
    let p = policy();
    let f = fixtures::rotation(&p).unwrap();
    let q = &f.geometry.quotient;
    let mut rng = testdata::rng(11);
    for i in 0..20 {
        let alpha = testdata::random_form(&mut rng, q, i % 4);
        let agg = f.geometry.section_round_trip(&alpha, &p).unwrap();
        assert!(agg.is_zero_class(), "{alpha}");
    }
}

#[test]
fn leaf_reduces_to_the_plane() {
    let p = policy();
    let f = fixtures::rotation(&p).unwrap();
    let out = verify_albert_reduction(&f.spec, &f.cm, &f.geometry, &p).unwrap();
    let reduced = out.reduced.unwrap();
    let m = albert_manifest(&f.spec, &f.cm, &f.geometry, &p).unwrap();
    let c = verify_leaf_reduction(&m, &f.leaf, &reduced, &p).unwrap();
    assert!(c.passed(), "{:?}", c.first_failure());
}

#[test]
fn trivial_group_reduction_is_the_identity() {
    let p = policy();
    let (cm, spec) = fixtures::translation_flow(&p).unwrap();
    let geo = fixtures::identity_geometry(&cm).unwrap();
    let out = verify_albert_reduction(&spec, &cm, &geo, &p).unwrap();
    assert!(out.passed(), "{:?}", out.checks.first_failure());
    let r = out.reduced.unwrap();
    assert_eq!(&r.eta, cm.eta());
    assert_eq!(&r.omega, cm.omega());
}
