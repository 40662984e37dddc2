//! Seeded random polynomials, forms and fields for identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{ChartRef, DifferentialForm, SmoothMap, VectorField};
use crate::symbolic::Expr;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial with small integer coefficients and total degree ≤ `max_deg`.
pub fn random_poly<R: Rng>(rng: &mut R, vars: &[&str], max_deg: u32, terms: usize) -> Expr {
    let mut acc = Expr::zero();
    for _ in 0..terms {
        let c = rng.random_range(-3i64..=3);
        if c == 0 {
            continue;
        }
        let mut t = Expr::int(c);
        let mut budget = max_deg;
        for v in vars {
            if budget == 0 {
                break;
            }
            let e = rng.random_range(0..=budget.min(2));
            budget -= e;
            if e > 0 {
                t = t * Expr::var(v).pow(e as i32).expect("positive power");
            }
        }
        acc = acc + t;
    }
    acc
}

fn names(chart: &ChartRef) -> Vec<&str> {
    chart.coords().iter().map(|c| &**c).collect()
}

pub fn random_function<R: Rng>(rng: &mut R, chart: &ChartRef, max_deg: u32) -> Expr {
    random_poly(rng, &names(chart), max_deg, 4)
}

pub fn random_form<R: Rng>(rng: &mut R, chart: &ChartRef, degree: usize) -> DifferentialForm {
    let vars = names(chart);
    let mut form = DifferentialForm::zero(chart, degree);
    let n = chart.dim();
    for _ in 0..3 {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in (1..idx.len()).rev() {
            let j = rng.random_range(0..=i);
            idx.swap(i, j);
        }
        idx.truncate(degree);
        if idx.len() < degree {
            continue;
        }
        let c = random_poly(rng, &vars, 2, 3);
        form.add_term_positions(idx, c);
    }
    form
}

pub fn random_field<R: Rng>(rng: &mut R, chart: &ChartRef) -> VectorField {
    let vars = names(chart);
    let comps = (0..chart.dim()).map(|_| random_poly(rng, &vars, 2, 2)).collect();
    VectorField::new(chart, comps).expect("components match the chart")
}

pub fn random_map<R: Rng>(rng: &mut R, source: &ChartRef, target: &ChartRef) -> SmoothMap {
    let vars = names(source);
    let comps = (0..target.dim()).map(|_| random_poly(rng, &vars, 2, 3)).collect();
    SmoothMap::new(source, target, comps).expect("components use source coordinates")
}
