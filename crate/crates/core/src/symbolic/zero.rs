//! Two-tier zero testing: exact canonical form first, then sampling.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expr::Expr;

pub const DEFAULT_SAMPLES: usize = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x5eed;
const MAX_RETRIES: usize = 16;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PolicyError {
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
    #[error("sampling box [{0}, {1}] must be finite with lower < upper")]
    Box(f64, f64),
}

/// How numeric zero tests draw their sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePolicy {
    samples: usize,
    tolerance: f64,
    seed: u64,
    lower: f64,
    upper: f64,
    boxes: BTreeMap<String, (f64, f64)>,
}

impl Default for SamplePolicy {
    fn default() -> Self {
        SamplePolicy {
            samples: DEFAULT_SAMPLES,
            tolerance: DEFAULT_TOLERANCE,
            seed: DEFAULT_SEED,
            lower: -2.0,
            upper: 2.0,
            boxes: BTreeMap::new(),
        }
    }
}

fn check_box(lo: f64, hi: f64) -> Result<(), PolicyError> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(PolicyError::Box(lo, hi))
    }
}

impl SamplePolicy {
    pub fn new(samples: usize, tolerance: f64, seed: u64) -> Result<Self, PolicyError> {
        if samples == 0 {
            return Err(PolicyError::NoSamples);
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(PolicyError::Tolerance(tolerance));
        }
        Ok(SamplePolicy {
            samples,
            tolerance,
            seed,
            ..SamplePolicy::default()
        })
    }

    pub fn with_box(mut self, lower: f64, upper: f64) -> Result<Self, PolicyError> {
        check_box(lower, upper)?;
        self.lower = lower;
        self.upper = upper;
        Ok(self)
    }

    pub fn with_var_box(mut self, var: &str, lower: f64, upper: f64) -> Result<Self, PolicyError> {
        check_box(lower, upper)?;
        self.boxes.insert(var.to_string(), (lower, upper));
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self, PolicyError> {
        if samples == 0 {
            return Err(PolicyError::NoSamples);
        }
        self.samples = samples;
        Ok(self)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn default_box(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn range_for(&self, var: &str) -> (f64, f64) {
        self.boxes
            .get(var)
            .copied()
            .unwrap_or((self.lower, self.upper))
    }

    /// Deterministic stream of points over `vars`.
    pub fn sampler<'a>(&'a self, vars: &'a [Arc<str>]) -> Sampler<'a> {
        Sampler {
            policy: self,
            vars,
            rng: ChaCha8Rng::seed_from_u64(self.seed),
        }
    }

    /// Tolerance test with an allowance for floating-point cancellation.
    pub fn within_tolerance(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.tolerance + 64.0 * f64::EPSILON * scale
    }
}

pub struct Sampler<'a> {
    policy: &'a SamplePolicy,
    vars: &'a [Arc<str>],
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    pub fn next_point(&mut self) -> Point {
        let values = self
            .vars
            .iter()
            .map(|v| {
                let (lo, hi) = self.policy.range_for(v);
                self.rng.random_range(lo..hi)
            })
            .collect();
        Point {
            vars: self.vars.to_vec(),
            values,
        }
    }
}

/// An assignment of floats to named variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub vars: Vec<Arc<str>>,
    pub values: Vec<f64>,
}

impl Point {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.vars
            .iter()
            .position(|v| &**v == name)
            .map(|i| self.values[i])
    }

    pub fn lookup(&self) -> impl Fn(&str) -> Option<f64> + '_ {
        move |name| self.get(name)
    }

    pub fn to_pairs(&self) -> Vec<(String, f64)> {
        self.vars
            .iter()
            .zip(&self.values)
            .map(|(v, x)| (v.to_string(), *x))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ZeroVerdict {
    ExactZero,
    NumericZero { max_abs: f64 },
    NonZero { point: Vec<(String, f64)>, value: f64 },
}

impl ZeroVerdict {
    pub fn is_zero_class(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ZeroVerdict::ExactZero)
    }

    fn rank(&self) -> u8 {
        match self {
            ZeroVerdict::ExactZero => 0,
            ZeroVerdict::NumericZero { .. } => 1,
            ZeroVerdict::NonZero { .. } => 2,
        }
    }

    /// Weakest verdict wins; numeric magnitudes accumulate as a maximum.
    pub fn combine(self, other: ZeroVerdict) -> ZeroVerdict {
        match (&self, &other) {
            (ZeroVerdict::NumericZero { max_abs: a }, ZeroVerdict::NumericZero { max_abs: b }) => {
                ZeroVerdict::NumericZero { max_abs: a.max(*b) }
            }
            _ if other.rank() > self.rank() => other,
            _ => self,
        }
    }
}

/// Zero test over the expression's own free variables.
pub fn is_zero(e: &Expr, policy: &SamplePolicy) -> ZeroVerdict {
    let vars: Vec<Arc<str>> = e.free_vars().into_iter().collect();
    is_zero_over(e, &vars, policy)
}

/// Zero test sampling the given variables (which must cover the free ones).
pub fn is_zero_over(e: &Expr, vars: &[Arc<str>], policy: &SamplePolicy) -> ZeroVerdict {
    if e.is_zero() {
        return ZeroVerdict::ExactZero;
    }
    if let Some(q) = e.as_rational() {
        let value = super::expr::to_f64(&q);
        return if policy.within_tolerance(value, 0.0) {
            ZeroVerdict::NumericZero {
                max_abs: value.abs(),
            }
        } else {
            ZeroVerdict::NonZero {
                point: Vec::new(),
                value,
            }
        };
    }
    let mut sampler = policy.sampler(vars);
    let mut max_abs: f64 = 0.0;
    let mut evaluated = 0usize;
    let mut last = None;
    for _ in 0..policy.samples() {
        for _ in 0..MAX_RETRIES {
            let p = sampler.next_point();
            let res = e.eval_detailed(&p.lookup());
            match res {
                Ok(ev) if !ev.near_pole => {
                    evaluated += 1;
                    if !policy.within_tolerance(ev.value, ev.scale) && recheck(e, &p, policy) {
                        return ZeroVerdict::NonZero {
                            point: p.to_pairs(),
                            value: ev.value,
                        };
                    }
                    max_abs = max_abs.max(ev.value.abs());
                    break;
                }
                _ => last = Some(p),
            }
        }
    }
    if evaluated == 0 {
        return ZeroVerdict::NonZero {
            point: last.map(|p| p.to_pairs()).unwrap_or_default(),
            value: f64::INFINITY,
        };
    }
    ZeroVerdict::NumericZero { max_abs }
}

// A second evaluation guards against a transient near-cancellation verdict:
// the value must stay above tolerance at nearby points too.
fn recheck(e: &Expr, p: &Point, policy: &SamplePolicy) -> bool {
    let shifted = Point {
        vars: p.vars.clone(),
        values: p.values.iter().map(|v| v + 1e-7 * (1.0 + v.abs())).collect(),
    };
    let res = e.eval_detailed(&shifted.lookup());
    match res {
        Ok(ev) => !policy.within_tolerance(ev.value, ev.scale),
        Err(_) => true,
    }
}

/// Outcome of testing a labelled family of expressions.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub verdict: ZeroVerdict,
    /// Label of the first offending entry, for NONZERO.
    pub offender: Option<String>,
}

impl Aggregate {
    pub fn exact() -> Self {
        Aggregate {
            verdict: ZeroVerdict::ExactZero,
            offender: None,
        }
    }

    pub fn is_zero_class(&self) -> bool {
        self.verdict.is_zero_class()
    }

    pub fn combine(self, other: Aggregate) -> Aggregate {
        if !self.verdict.is_zero_class() {
            return self;
        }
        if !other.verdict.is_zero_class() {
            return other;
        }
        Aggregate {
            verdict: self.verdict.combine(other.verdict),
            offender: None,
        }
    }
}

/// Tests every entry; stops at the first nonzero one.
pub fn aggregate<'a, I>(entries: I, vars: &[Arc<str>], policy: &SamplePolicy) -> Aggregate
where
    I: IntoIterator<Item = (String, &'a Expr)>,
{
    let mut acc = Aggregate::exact();
    for (label, e) in entries {
        let mut all_vars: Vec<Arc<str>> = vars.to_vec();
        for v in e.free_vars() {
            if !all_vars.contains(&v) {
                all_vars.push(v);
            }
        }
        let verdict = is_zero_over(e, &all_vars, policy);
        if !verdict.is_zero_class() {
            return Aggregate {
                verdict,
                offender: Some(label),
            };
        }
        acc.verdict = acc.verdict.combine(verdict);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse;

    #[test]
    fn tiers() {
        let p = SamplePolicy::default();
        assert!(is_zero(&parse("(x+y)^2 - x^2 - 2*x*y - y^2").unwrap(), &p).is_exact());
        assert!(matches!(
            is_zero(&parse("sin(x)^2 + cos(x)^2 - 1").unwrap(), &p),
            ZeroVerdict::NumericZero { .. }
        ));
        match is_zero(&parse("x*y - 1").unwrap(), &p) {
            ZeroVerdict::NonZero { point, value } => {
                let x = point.iter().find(|(n, _)| n == "x").unwrap().1;
                let y = point.iter().find(|(n, _)| n == "y").unwrap().1;
                assert!((x * y - 1.0 - value).abs() < 1e-12);
                assert!(value.abs() > p.tolerance());
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn poles_are_resampled() {
        let p = SamplePolicy::default();
        let e = parse("sin(x)/x - sin(x)/x").unwrap();
        assert!(e.is_zero());
        let e = parse("(sin(x)^2 + cos(x)^2 - 1)/(x - 1)").unwrap();
        assert!(is_zero(&e, &p).is_zero_class());
    }

    #[test]
    fn policy_validation() {
        assert_eq!(SamplePolicy::new(0, 1e-9, 1), Err(PolicyError::NoSamples));
        assert!(SamplePolicy::new(8, 0.0, 1).is_err());
        assert!(SamplePolicy::default().with_box(1.0, 1.0).is_err());
        assert!(SamplePolicy::default().with_box(f64::NEG_INFINITY, 0.0).is_err());
    }

    #[test]
    fn combine_prefers_weakest() {
        let a = ZeroVerdict::ExactZero;
        let b = ZeroVerdict::NumericZero { max_abs: 1e-12 };
        assert_eq!(a.clone().combine(b.clone()), b);
        let c = ZeroVerdict::NonZero {
            point: vec![],
            value: 1.0,
        };
        assert_eq!(b.combine(c.clone()), c);
    }
}
