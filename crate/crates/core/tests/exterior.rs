mod common;

use cosym::exterior::{Chart, ChartRef, DifferentialForm, SmoothMap, VectorField};
use cosym::symbolic::{parse, SamplePolicy, ZeroVerdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r3() -> ChartRef {
    Chart::new("R3", &["x", "y", "z"]).unwrap()
}

fn form(chart: &ChartRef, degree: usize, terms: &[(&str, &str)]) -> DifferentialForm {
    DifferentialForm::parse(chart, degree, terms).unwrap()
}

#[test]
fn wedge_examples() {
    let m = r3();
    let dx = DifferentialForm::d_coord(&m, "x").unwrap();
    let dy = DifferentialForm::d_coord(&m, "y").unwrap();
    assert_eq!(dx.wedge(&dy).unwrap(), form(&m, 2, &[("x y", "1")]));
    assert!(dx.wedge(&dx).unwrap().is_exact_zero());

    let r5 = Chart::new("R5", &["x1", "y1", "x2", "y2", "z"]).unwrap();
    let w = form(&r5, 2, &[("x1 y1", "1"), ("x2 y2", "1")]);
    assert_eq!(w.wedge(&w).unwrap(), form(&r5, 4, &[("x1 y1 x2 y2", "2")]));
    // Degree beyond the dimension is the zero form.
    let vol = form(&m, 3, &[("x y z", "1")]);
    assert!(vol.wedge(&dx).unwrap().is_exact_zero());
}

#[test]
fn wedge_sign_from_insertion_order() {
    let m = r3();
    assert_eq!(form(&m, 2, &[("y x", "1")]), form(&m, 2, &[("x y", "-1")]));
    assert_eq!(form(&m, 3, &[("z x y", "1")]), form(&m, 3, &[("x y z", "1")]));
    assert!(form(&m, 2, &[("x x", "5")]).is_exact_zero());
}

#[test]
fn exterior_derivative_examples() {
    let m = r3();
    assert_eq!(form(&m, 1, &[("y", "x")]).d(), form(&m, 2, &[("x y", "1")]));
    let f = DifferentialForm::function(&m, parse("x^2*y + sin(z)").unwrap());
    assert!(f.d().d().is_exact_zero());
    assert!(form(&m, 2, &[("x y", "1"), ("x z", "1")]).d().is_exact_zero());
}

#[test]
fn interior_examples() {
    let m = r3();
    let w = form(&m, 2, &[("x y", "1")]);
    let dx = VectorField::coordinate(&m, "x").unwrap();
    let dz = VectorField::coordinate(&m, "z").unwrap();
    assert_eq!(w.interior(&dx).unwrap(), form(&m, 1, &[("y", "1")]));
    assert!(w.interior(&dz).unwrap().is_exact_zero());
    let rot = VectorField::from_table(&m, &[("x", parse("y").unwrap()), ("y", parse("-x").unwrap())]).unwrap();
    assert_eq!(w.interior(&rot).unwrap(), form(&m, 1, &[("y", "y"), ("x", "x")]));
}

#[test]
fn pullback_examples() {
    let line = Chart::new("R", &["u"]).unwrap();
    let plane = Chart::new("R2", &["x", "y"]).unwrap();
    let f = SmoothMap::parse(&line, &plane, &[("x", "u"), ("y", "u^2")]).unwrap();
    let dy = DifferentialForm::d_coord(&plane, "y").unwrap();
    assert_eq!(dy.pullback(&f).unwrap(), form(&line, 1, &[("u", "2*u")]));

    let circle = Chart::new("S1", &["th"]).unwrap();
    let g = SmoothMap::parse(&circle, &plane, &[("x", "cos(th)"), ("y", "sin(th)")]).unwrap();
    let a = form(&plane, 1, &[("y", "x"), ("x", "-y")]);
    let pulled = a.pullback(&g).unwrap();
    let residual = pulled.sub(&form(&circle, 1, &[("th", "1")])).unwrap();
    // cos² + sin² − 1 is only visible to the sampling tier.
    assert!(matches!(
        residual.zero_test(&SamplePolicy::default()).verdict,
        ZeroVerdict::NumericZero { .. }
    ));
    // Independent oracle: the coefficient at sample angles.
    let coeff = pulled.coefficient(&[0]);
    for th in [0.1, 1.3, -2.0] {
        let v = coeff.eval(&|n: &str| (n == "th").then_some(th)).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    let m = r3();
    let w = form(&m, 2, &[("x y", "z"), ("y z", "x^2")]);
    assert_eq!(w.pullback(&SmoothMap::identity(&m)).unwrap(), w);
}

#[test]
fn lie_derivative_examples() {
    let m = r3();
    let dz = VectorField::coordinate(&m, "z").unwrap();
    let dx = VectorField::coordinate(&m, "x").unwrap();
    assert!(form(&m, 1, &[("z", "1")]).lie_derivative(&dz).unwrap().is_exact_zero());
    assert_eq!(
        form(&m, 1, &[("y", "x")]).lie_derivative(&dx).unwrap(),
        form(&m, 1, &[("y", "1")])
    );
    assert!(form(&m, 2, &[("x y", "1")]).lie_derivative(&dz).unwrap().is_exact_zero());
}

#[test]
fn form_zero_test_tiers() {
    let m = Chart::new("R2", &["x", "y"]).unwrap();
    let p = SamplePolicy::default();
    assert!(DifferentialForm::zero(&m, 2).zero_test(&p).verdict.is_exact());
    let trig = form(&m, 1, &[("x", "sin(x)^2 + cos(x)^2 - 1")]);
    assert!(matches!(trig.zero_test(&p).verdict, ZeroVerdict::NumericZero { .. }));
    let area = form(&m, 2, &[("x y", "1")]);
    let agg = area.zero_test(&p);
    assert!(!agg.is_zero_class());
    assert_eq!(agg.offender.as_deref(), Some("dx^dy"));
}

#[test]
fn errors_name_the_problem() {
    let m = r3();
    let err = DifferentialForm::parse(&m, 1, &[("w", "1")]).unwrap_err();
    assert!(err.to_string().contains("`w`"));
    let other = Chart::new("R2", &["x", "y"]).unwrap();
    let a = DifferentialForm::d_coord(&m, "x").unwrap();
    let b = DifferentialForm::d_coord(&other, "x").unwrap();
    assert!(a.wedge(&b).is_err());
    assert!(SmoothMap::parse(&other, &m, &[("x", "x"), ("y", "z"), ("z", "1")]).is_err());
}

fn chart_of_dim(n: usize) -> ChartRef {
    let names = common::coords("x", n);
    Chart::new("M", &names).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), dim in 1usize..=5, deg in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = chart_of_dim(dim);
        let a = common::random_form(&mut rng, &m, deg.min(dim));
        prop_assert!(a.d().d().is_exact_zero());
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>(), dim in 1usize..=5, p in 0usize..=2, q in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = chart_of_dim(dim);
        let a = common::random_form(&mut rng, &m, p.min(dim));
        let b = common::random_form(&mut rng, &m, q.min(dim));
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let sign = if (a.degree() * b.degree()) % 2 == 1 { ba.neg() } else { ba };
        prop_assert!(ab.sub(&sign).unwrap().is_exact_zero());
    }

    #[test]
    fn pullback_is_functorial(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=3, l in 1usize..=3, deg in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a_chart = Chart::new("A", &common::coords("a", n)).unwrap();
        let b_chart = Chart::new("B", &common::coords("b", k)).unwrap();
        let c_chart = Chart::new("C", &common::coords("c", l)).unwrap();
        let g = common::random_map(&mut rng, &a_chart, &b_chart);
        let f = common::random_map(&mut rng, &b_chart, &c_chart);
        let w = common::random_form(&mut rng, &c_chart, deg.min(l));
        let lhs = w.pullback(&f.compose(&g).unwrap()).unwrap();
        let rhs = w.pullback(&f).unwrap().pullback(&g).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_exact_zero());
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>(), n in 1usize..=4, k in 1usize..=4, deg in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a_chart = Chart::new("A", &common::coords("a", n)).unwrap();
        let b_chart = Chart::new("B", &common::coords("b", k)).unwrap();
        let f = common::random_map(&mut rng, &a_chart, &b_chart);
        let w = common::random_form(&mut rng, &b_chart, deg.min(k));
        let lhs = w.d().pullback(&f).unwrap();
        let rhs = w.pullback(&f).unwrap().d();
        prop_assert!(lhs.sub(&rhs).unwrap().is_exact_zero());
    }

    #[test]
    fn lie_derivative_is_a_derivation(seed in any::<u64>(), dim in 1usize..=4, p in 0usize..=2, q in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = chart_of_dim(dim);
        let x = common::random_field(&mut rng, &m);
        let a = common::random_form(&mut rng, &m, p.min(dim));
        let b = common::random_form(&mut rng, &m, q.min(dim));
        let lhs = a.wedge(&b).unwrap().lie_derivative(&x).unwrap();
        let rhs = a.lie_derivative(&x).unwrap().wedge(&b).unwrap()
            .add(&a.wedge(&b.lie_derivative(&x).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_exact_zero());
    }
}
