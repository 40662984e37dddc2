//! Small helpers shared by the checkers: componentwise residuals and rank tests.

use crate::exterior::{Chart, SmoothMap};
use crate::report::{Entry, Status};
use crate::symbolic::linalg::{ranks_at_samples, Matrix};
use crate::symbolic::{aggregate, Aggregate, Expr, SamplePolicy};

/// Zero test of `lhs − rhs`, labelled by the coordinates of `target`,
/// sampled over the coordinates of `domain`.
pub fn vectors(target: &Chart, lhs: &[Expr], rhs: &[Expr], domain: &Chart, policy: &SamplePolicy) -> Aggregate {
    let diffs: Vec<Expr> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    aggregate(
        diffs.iter().enumerate().map(|(i, d)| (target.coord(i).to_string(), d)),
        domain.coords(),
        policy,
    )
}

/// Same as [`vectors`] with a label prefix, for combining several residuals.
pub fn labelled(
    prefix: &str,
    target: &Chart,
    lhs: &[Expr],
    rhs: &[Expr],
    domain: &Chart,
    policy: &SamplePolicy,
) -> Aggregate {
    let mut agg = vectors(target, lhs, rhs, domain, policy);
    if let Some(o) = agg.offender.take() {
        agg.offender = Some(format!("{prefix}.{o}"));
    }
    agg
}

pub fn concat(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    a.iter().chain(b).cloned().collect()
}

pub fn coordinates(chart: &Chart) -> Vec<Expr> {
    chart.coords().iter().map(|c| Expr::var(c)).collect()
}

/// Entry asserting that `matrix` has rank `expected` at every sample point.
pub fn rank_entry(
    id: &str,
    anchor: &str,
    matrix: &Matrix,
    domain: &Chart,
    expected: usize,
    policy: &SamplePolicy,
) -> Entry {
    if expected == 0 || matrix.is_empty() {
        let ok = expected == 0;
        return Entry::new(
            id,
            anchor,
            if ok { Status::Proved } else { Status::Failed },
            format!("rank 0, expected {expected}"),
        );
    }
    let ranks = ranks_at_samples(matrix, domain.coords(), policy);
    if ranks.is_empty() {
        return Entry::new(id, anchor, Status::Failed, "no pole-free sample point");
    }
    match ranks.iter().find(|(_, r)| *r != expected) {
        None => Entry::new(
            id,
            anchor,
            Status::Numeric,
            format!("rank {expected} at {} samples", ranks.len()),
        ),
        Some((p, r)) => Entry {
            witness: Some(crate::report::Witness {
                component: Some("rank".into()),
                point: p.to_pairs(),
                value: *r as f64,
            }),
            ..Entry::new(id, anchor, Status::Failed, format!("rank {r}, expected {expected}"))
        },
    }
}

/// Jacobian of a map with its rows pulled back along `along`, as functions on
/// the source of `along`.
pub fn jacobian_along(f: &SmoothMap, along: &SmoothMap) -> crate::Result<Matrix> {
    f.jacobian()
        .iter()
        .map(|row| row.iter().map(|e| Ok(along.pull_function(e)?)).collect())
        .collect()
}
