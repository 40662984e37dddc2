mod common;

use cosym::symbolic::{
    differentiate, is_zero, parse, parse_ast, simplify, Expr, SamplePolicy, SymbolicError, ZeroVerdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn differentiate_requires_declared_variable() {
    let e = parse("x^2*y").unwrap();
    assert_eq!(differentiate(&e, "x", &["x", "y"]).unwrap(), parse("2*x*y").unwrap());
    assert_eq!(
        differentiate(&e, "w", &["x", "y"]),
        Err(SymbolicError::UnknownVariable("w".into()))
    );
}

#[test]
fn eval_examples() {
    let e = parse("x^2 + y").unwrap();
    let v = e.eval(&|n: &str| match n {
        "x" => Some(2.0),
        "y" => Some(1.0),
        _ => None,
    });
    assert_eq!(v, Ok(5.0));
    assert_eq!(parse("sin(0)").unwrap().eval(&|_: &str| None), Ok(0.0));
    assert!(parse("sqrt(x)").unwrap().eval(&|_: &str| Some(-1.0)).is_err());
}

#[test]
fn witness_is_checked_against_direct_evaluation() {
    let e = parse("x*y - 1").unwrap();
    let policy = SamplePolicy::default().with_seed(99);
    let ZeroVerdict::NonZero { point, value } = is_zero(&e, &policy) else {
        panic!("expected a witness");
    };
    let lookup = |n: &str| point.iter().find(|(k, _)| k == n).map(|(_, v)| *v);
    let direct = lookup("x").unwrap() * lookup("y").unwrap() - 1.0;
    assert!((direct - value).abs() < 1e-12);
    assert!(direct.abs() > policy.tolerance());
}

#[test]
fn verdicts_are_deterministic() {
    let e = parse("x*y*z - sin(x)").unwrap();
    let p = SamplePolicy::default();
    assert_eq!(is_zero(&e, &p), is_zero(&e, &p));
}

#[test]
fn simplify_reports_domain_caveats() {
    let s = simplify(&parse_ast("(x^2 - 1)/(x - 1)").unwrap()).unwrap();
    assert_eq!(s.expr, parse("x + 1").unwrap());
    assert_eq!(s.domain_caveats, vec![parse("x - 1").unwrap()]);
    assert!(matches!(
        simplify(&parse_ast("y/(x - x)").unwrap()),
        Err(SymbolicError::DivisionByZero)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_rule(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = ["x", "y", "z"];
        let f = common::random_poly(&mut rng, &vars, 3, 4);
        let g = common::random_poly(&mut rng, &vars, 3, 4);
        let lhs = (&f * &g).diff("x");
        let rhs = &(&f.diff("x") * &g) + &(&f * &g.diff("x"));
        prop_assert!(is_zero(&(&lhs - &rhs), &SamplePolicy::default()).is_exact());
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = ["x", "y"];
        let f = common::random_poly(&mut rng, &vars, 3, 3);
        let g = common::random_poly(&mut rng, &vars, 2, 3);
        prop_assume!(!g.is_zero());
        let e = f.checked_div(&g).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(parse(&again.to_string()).unwrap(), again);
    }

    #[test]
    fn field_operations_cancel(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = ["x", "y"];
        let f = common::random_poly(&mut rng, &vars, 2, 3);
        let g = common::random_poly(&mut rng, &vars, 2, 3);
        prop_assume!(!g.is_zero());
        let q = f.checked_div(&g).unwrap();
        prop_assert_eq!(&q * &g, f.clone());
        prop_assert!((&(&q + &Expr::one()) - &q).is_one());
    }
}
