use std::fmt;

use crate::symbolic::{aggregate, Aggregate, Expr, SamplePolicy};

use super::chart::ChartRef;
use super::ExteriorError;

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    chart: ChartRef,
    comps: Vec<Expr>,
}

impl VectorField {
    pub fn new(chart: &ChartRef, comps: Vec<Expr>) -> Result<Self, ExteriorError> {
        if comps.len() != chart.dim() {
            return Err(ExteriorError::Arity {
                what: format!("vector field on {}", chart.name()),
                expected: chart.dim(),
                found: comps.len(),
            });
        }
        Ok(VectorField {
            chart: chart.clone(),
            comps,
        })
    }

    pub fn zero(chart: &ChartRef) -> Self {
        VectorField {
            chart: chart.clone(),
            comps: vec![Expr::zero(); chart.dim()],
        }
    }

    /// The coordinate field `∂/∂name`.
    pub fn coordinate(chart: &ChartRef, name: &str) -> Result<Self, ExteriorError> {
        let i = chart.require_index(name)?;
        let mut v = VectorField::zero(chart);
        v.comps[i] = Expr::one();
        Ok(v)
    }

    /// Components given by coordinate name; missing entries are zero.
    pub fn from_table<S: AsRef<str>>(
        chart: &ChartRef,
        table: &[(S, Expr)],
    ) -> Result<Self, ExteriorError> {
        let mut v = VectorField::zero(chart);
        for (name, e) in table {
            let i = chart.require_index(name.as_ref())?;
            v.comps[i] = &v.comps[i] + e;
        }
        Ok(v)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn component(&self, name: &str) -> Result<&Expr, ExteriorError> {
        Ok(&self.comps[self.chart.require_index(name)?])
    }

    /// Directional derivative X(f).
    pub fn apply(&self, f: &Expr) -> Expr {
        let vars = f.free_vars();
        self.comps
            .iter()
            .enumerate()
            .filter(|(i, c)| !c.is_zero() && vars.contains(&self.chart.coords()[*i]))
            .map(|(i, c)| c * &f.diff(self.chart.coord(i)))
            .sum()
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField, ExteriorError> {
        self.chart.require_same(&other.chart)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField, ExteriorError> {
        self.chart.require_same(&other.chart)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, f: &Expr) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| -c).collect(),
        }
    }

    /// Lie bracket [X, Y].
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField, ExteriorError> {
        self.chart.require_same(&other.chart)?;
        let comps = (0..self.comps.len())
            .map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i]))
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            comps,
        })
    }

    pub fn zero_test(&self, policy: &SamplePolicy) -> Aggregate {
        aggregate(
            self.comps
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("d/d{}", self.chart.coord(i)), c)),
            self.chart.coords(),
            policy,
        )
    }

    pub fn to_table(&self) -> Vec<(String, Expr)> {
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.chart.coord(i).to_string(), c.clone()))
            .collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let d = format!("d/d{}", self.chart.coord(i));
            if c.is_one() {
                f.write_str(&d)?;
            } else if (-c).is_one() {
                write!(f, "-{d}")?;
            } else {
                write!(f, "({c})*{d}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
