//! Exact linear algebra over the expression field, and numeric rank.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::expr::{EvalError, Expr};
use super::zero::{aggregate, Point, SamplePolicy, ZeroVerdict};
use super::SymbolicError;

pub type Matrix = Vec<Vec<Expr>>;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("no certified pivot in column {column}")]
    Singular { column: usize },
    #[error("row {row} of the overdetermined system is inconsistent")]
    Inconsistent { row: usize, verdict: ZeroVerdict },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Points at which symbolic pivots must be visibly nonzero.
#[derive(Clone, Debug)]
pub struct PivotCertifier {
    points: Vec<Point>,
    tolerance: f64,
}

const CERTIFY_POINTS: usize = 8;

impl PivotCertifier {
    pub fn new(vars: &[Arc<str>], policy: &SamplePolicy) -> Self {
        let mut sampler = policy.sampler(vars);
        let points = (0..CERTIFY_POINTS.min(policy.samples()).max(1))
            .map(|_| sampler.next_point())
            .collect();
        PivotCertifier {
            points,
            tolerance: policy.tolerance(),
        }
    }

    pub fn certifies(&self, e: &Expr) -> bool {
        if e.is_zero() {
            return false;
        }
        if e.is_constant() {
            return true;
        }
        self.points.iter().all(|p| match e.eval(&p.lookup()) {
            Ok(v) => v.abs() > self.tolerance,
            Err(_) => false,
        })
    }
}

fn matrix_vars(a: &Matrix, b: &Matrix) -> Vec<Arc<str>> {
    let mut vars = std::collections::BTreeSet::new();
    for row in a.iter().chain(b.iter()) {
        for e in row {
            vars.extend(e.free_vars());
        }
    }
    vars.into_iter().collect()
}

/// Solves `a · x = b` for `x`, where `a` is m×n with m ≥ n and full column
/// rank. Surplus equations must reduce to zero-class residuals.
pub fn solve(a: &Matrix, b: &Matrix, policy: &SamplePolicy) -> Result<Matrix, LinalgError> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if b.len() != m {
        return Err(LinalgError::Shape(format!("{m} rows but {} right-hand sides", b.len())));
    }
    if m < n {
        return Err(LinalgError::Shape(format!("{m} equations for {n} unknowns")));
    }
    let k = b.first().map_or(0, Vec::len);
    let vars = matrix_vars(a, b);
    let cert = PivotCertifier::new(&vars, policy);
    let mut rows: Vec<Vec<Expr>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            if ra.len() != n || rb.len() != k {
                return Err(LinalgError::Shape("ragged matrix".into()));
            }
            Ok(ra.iter().chain(rb).cloned().collect())
        })
        .collect::<Result<_, _>>()?;

    for col in 0..n {
        let pivot_row = (col..m)
            .filter(|&r| cert.certifies(&rows[r][col]))
            .min_by_key(|&r| {
                let e = &rows[r][col];
                (!e.is_constant(), e.term_count(), r)
            })
            .ok_or(LinalgError::Singular { column: col })?;
        rows.swap(col, pivot_row);
        let pivot = rows[col][col].clone();
        if !pivot.is_one() {
            let inv = pivot.recip()?;
            for e in rows[col].iter_mut().skip(col) {
                *e = &*e * &inv;
            }
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for j in col..n + k {
                if pivot_row[j].is_zero() {
                    continue;
                }
                row[j] = &row[j] - &(&factor * &pivot_row[j]);
            }
        }
    }
    for (r, row) in rows.iter().enumerate().skip(n) {
        let agg = aggregate(
            row[n..].iter().enumerate().map(|(j, e)| (j.to_string(), e)),
            &vars,
            policy,
        );
        if !agg.is_zero_class() {
            return Err(LinalgError::Inconsistent {
                row: r,
                verdict: agg.verdict,
            });
        }
    }
    Ok(rows.into_iter().take(n).map(|row| row[n..].to_vec()).collect())
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect()
}

pub fn invert(a: &Matrix, policy: &SamplePolicy) -> Result<Matrix, LinalgError> {
    if a.iter().any(|r| r.len() != a.len()) {
        return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
    }
    solve(a, &identity(a.len()), policy)
}

pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(a: &Matrix, v: &[Expr]) -> Vec<Expr> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn evaluate(a: &Matrix, p: &Point) -> Result<Vec<Vec<f64>>, EvalError> {
    a.iter()
        .map(|row| row.iter().map(|e| e.eval(&p.lookup())).collect())
        .collect()
}

/// Rank by singular values, relative to the largest one.
pub fn numeric_rank(rows: &[Vec<f64>]) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if m == 0 || n == 0 {
        return 0;
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let mat = DMatrix::from_row_slice(m, n, &flat);
    let sv = mat.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    let cutoff = max * 1e-9 * m.max(n) as f64;
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Ranks of `a` at every sample point of the policy that avoids poles.
pub fn ranks_at_samples(
    a: &Matrix,
    vars: &[Arc<str>],
    policy: &SamplePolicy,
) -> Vec<(Point, usize)> {
    let mut sampler = policy.sampler(vars);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < policy.samples() && attempts < policy.samples() * 16 {
        attempts += 1;
        let p = sampler.next_point();
        if let Ok(m) = evaluate(a, &p) {
            let r = numeric_rank(&m);
            out.push((p, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse;

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn inverse_of_symbolic_matrix() {
        let p = SamplePolicy::default();
        let a = vec![vec![e("x"), e("1")], vec![e("0"), e("y")]];
        let inv = invert(&a, &p).unwrap();
        assert_eq!(inv[0][0], e("1/x"));
        assert_eq!(inv[0][1], e("-1/(x*y)"));
        assert_eq!(inv[1][1], e("1/y"));
    }

    #[test]
    fn singular_and_inconsistent() {
        let p = SamplePolicy::default();
        let a = vec![vec![e("x"), e("2*x")], vec![e("1"), e("2")]];
        assert!(matches!(invert(&a, &p), Err(LinalgError::Singular { .. })));
        let a = vec![vec![e("1")], vec![e("1")]];
        let b = vec![vec![e("1")], vec![e("2")]];
        assert!(matches!(solve(&a, &b, &p), Err(LinalgError::Inconsistent { .. })));
        let b = vec![vec![e("z")], vec![e("z")]];
        assert_eq!(solve(&a, &b, &p).unwrap(), vec![vec![e("z")]]);
    }

    #[test]
    fn rank_by_svd() {
        assert_eq!(numeric_rank(&[vec![1.0, 2.0], vec![2.0, 4.0]]), 1);
        assert_eq!(numeric_rank(&[vec![0.0, 1.0], vec![-1.0, 0.0]]), 2);
        assert_eq!(numeric_rank(&[vec![0.0, 0.0]]), 0);
    }
}
