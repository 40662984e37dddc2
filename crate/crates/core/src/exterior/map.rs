use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::symbolic::{aggregate, Aggregate, Expr, SamplePolicy};

use super::chart::ChartRef;
use super::field::VectorField;
use super::ExteriorError;

/// A map between charts given by one expression per target coordinate.
///
/// Components may also mention declared parameters: symbols that are held
/// fixed, such as a group element acting by a diffeomorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothMap {
    source: ChartRef,
    target: ChartRef,
    comps: Vec<Expr>,
    params: Vec<Arc<str>>,
}

impl SmoothMap {
    pub fn new(source: &ChartRef, target: &ChartRef, comps: Vec<Expr>) -> Result<Self, ExteriorError> {
        SmoothMap::with_parameters(source, target, comps, &[] as &[&str])
    }

    pub fn with_parameters<S: AsRef<str>>(
        source: &ChartRef,
        target: &ChartRef,
        comps: Vec<Expr>,
        params: &[S],
    ) -> Result<Self, ExteriorError> {
        if comps.len() != target.dim() {
            return Err(ExteriorError::Arity {
                what: format!("map {} -> {}", source.name(), target.name()),
                expected: target.dim(),
                found: comps.len(),
            });
        }
        let params: Vec<Arc<str>> = params.iter().map(|p| Arc::from(p.as_ref())).collect();
        for (i, c) in comps.iter().enumerate() {
            for v in c.free_vars() {
                if source.index_of(&v).is_none() && !params.contains(&v) {
                    return Err(ExteriorError::FreeVariable {
                        map: format!("{} -> {}", source.name(), target.name()),
                        component: target.coord(i).to_string(),
                        var: v.to_string(),
                    });
                }
            }
        }
        Ok(SmoothMap {
            source: source.clone(),
            target: target.clone(),
            comps,
            params,
        })
    }

    /// Components keyed by target coordinate name; every coordinate required.
    pub fn from_table<S: AsRef<str>>(
        source: &ChartRef,
        target: &ChartRef,
        table: &[(S, Expr)],
    ) -> Result<Self, ExteriorError> {
        let mut comps: Vec<Option<Expr>> = vec![None; target.dim()];
        for (name, e) in table {
            let i = target.require_index(name.as_ref())?;
            if comps[i].replace(e.clone()).is_some() {
                return Err(ExteriorError::DuplicateCoordinate {
                    chart: target.name().to_string(),
                    coord: name.as_ref().to_string(),
                });
            }
        }
        let comps = comps
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| ExteriorError::MissingComponent {
                    map: format!("{} -> {}", source.name(), target.name()),
                    component: target.coord(i).to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SmoothMap::new(source, target, comps)
    }

    /// Components parsed from text.
    pub fn parse<S: AsRef<str>>(
        source: &ChartRef,
        target: &ChartRef,
        table: &[(S, &str)],
    ) -> Result<Self, ExteriorError> {
        let parsed = table
            .iter()
            .map(|(k, v)| Ok((k.as_ref().to_string(), crate::symbolic::parse(v)?)))
            .collect::<Result<Vec<_>, ExteriorError>>()?;
        SmoothMap::from_table(source, target, &parsed)
    }

    pub fn identity(chart: &ChartRef) -> Self {
        SmoothMap {
            source: chart.clone(),
            target: chart.clone(),
            comps: chart.coords().iter().map(|c| Expr::var(c)).collect(),
            params: Vec::new(),
        }
    }

    /// Reads target coordinate `c` from source coordinate `prefix + c`.
    pub fn projection(source: &ChartRef, target: &ChartRef, prefix: &str) -> Result<Self, ExteriorError> {
        let comps = target
            .coords()
            .iter()
            .map(|c| {
                let name = format!("{prefix}{c}");
                source.require_index(&name)?;
                Ok(Expr::var(&name))
            })
            .collect::<Result<Vec<_>, ExteriorError>>()?;
        SmoothMap::new(source, target, comps)
    }

    pub fn source(&self) -> &ChartRef {
        &self.source
    }

    pub fn target(&self) -> &ChartRef {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn parameters(&self) -> &[Arc<str>] {
        &self.params
    }

    pub fn component(&self, name: &str) -> Result<&Expr, ExteriorError> {
        Ok(&self.comps[self.target.require_index(name)?])
    }

    /// Replaces one component; used by the mutation harness and by tests.
    pub fn with_component(&self, name: &str, e: Expr) -> Result<Self, ExteriorError> {
        let i = self.target.require_index(name)?;
        let mut comps = self.comps.clone();
        comps[i] = e;
        SmoothMap::with_parameters(&self.source, &self.target, comps, &self.params)
    }

    /// f ∘ F for a function f written in target coordinates.
    pub fn pull_function(&self, f: &Expr) -> Result<Expr, ExteriorError> {
        if f.is_constant() {
            return Ok(f.clone());
        }
        Ok(f.subst(&|v: &str| self.target.index_of(v).map(|i| self.comps[i].clone()))?)
    }

    /// Components evaluated at symbolic source values given positionally.
    pub fn apply(&self, args: &[Expr]) -> Result<Vec<Expr>, ExteriorError> {
        if args.len() != self.source.dim() {
            return Err(ExteriorError::Arity {
                what: format!("arguments of {} -> {}", self.source.name(), self.target.name()),
                expected: self.source.dim(),
                found: args.len(),
            });
        }
        let lookup = |v: &str| self.source.index_of(v).map(|i| args[i].clone());
        self.comps
            .iter()
            .map(|c| Ok(c.subst(&lookup)?))
            .collect()
    }

    /// Builds the map whose components are the given expressions on `source`.
    pub fn from_exprs(source: &ChartRef, target: &ChartRef, comps: Vec<Expr>) -> Result<Self, ExteriorError> {
        SmoothMap::new(source, target, comps)
    }

    /// Coordinate expressions of the source chart, in order.
    pub fn coordinate_exprs(chart: &ChartRef) -> Vec<Expr> {
        chart.coords().iter().map(|c| Expr::var(c)).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap, ExteriorError> {
        self.source.require_same(&inner.target)?;
        let comps = self
            .comps
            .iter()
            .map(|c| inner.pull_function(c))
            .collect::<Result<Vec<_>, _>>()?;
        let mut params: BTreeSet<Arc<str>> = self.params.iter().cloned().collect();
        params.extend(inner.params.iter().cloned());
        let params: Vec<Arc<str>> = params.into_iter().collect();
        SmoothMap::with_parameters(&inner.source, &self.target, comps, &params)
    }

    /// Jacobian rows: one per target coordinate.
    pub fn jacobian(&self) -> Vec<Vec<Expr>> {
        self.comps
            .iter()
            .map(|c| {
                let vars = c.free_vars();
                self.source
                    .coords()
                    .iter()
                    .map(|s| if vars.contains(s) { c.diff(s) } else { Expr::zero() })
                    .collect()
            })
            .collect()
    }

    /// dF(X), as target components expressed on the source.
    pub fn push_vector(&self, x: &VectorField) -> Result<Vec<Expr>, ExteriorError> {
        self.source.require_same(x.chart())?;
        Ok(self.comps.iter().map(|c| x.apply(c)).collect())
    }

    /// Componentwise zero test of `self − other`.
    pub fn difference_test(&self, other: &SmoothMap, policy: &SamplePolicy) -> Result<Aggregate, ExteriorError> {
        self.source.require_same(&other.source)?;
        self.target.require_same(&other.target)?;
        let diffs: Vec<Expr> = self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect();
        Ok(aggregate(
            diffs
                .iter()
                .enumerate()
                .map(|(i, d)| (self.target.coord(i).to_string(), d)),
            self.source.coords(),
            policy,
        ))
    }

    pub fn to_table(&self) -> Vec<(String, Expr)> {
        self.comps
            .iter()
            .enumerate()
            .map(|(i, c)| (self.target.coord(i).to_string(), c.clone()))
            .collect()
    }
}

impl fmt::Display for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: (", self.source.name(), self.target.name())?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str(")")
    }
}
