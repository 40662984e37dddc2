use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::symbolic::{aggregate, Aggregate, Expr, SamplePolicy};

use super::chart::ChartRef;
use super::field::VectorField;
use super::map::SmoothMap;
use super::ExteriorError;

/// Strictly increasing coordinate positions.
pub type Index = SmallVec<[u16; 4]>;

/// A k-form stored sparsely over increasing multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm {
    chart: ChartRef,
    degree: usize,
    terms: BTreeMap<Index, Expr>,
}

fn accumulate(terms: &mut BTreeMap<Index, Expr>, idx: Index, c: Expr) {
    if c.is_zero() {
        return;
    }
    match terms.entry(idx) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Sorts positions, returning the permutation sign, or `None` on a repeat.
fn normalize(mut idx: Vec<usize>) -> Option<(Index, bool)> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((idx.into_iter().map(|i| i as u16).collect(), negative))
}

impl DifferentialForm {
    pub fn zero(chart: &ChartRef, degree: usize) -> Self {
        DifferentialForm {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(chart: &ChartRef, f: Expr) -> Self {
        let mut out = DifferentialForm::zero(chart, 0);
        accumulate(&mut out.terms, Index::new(), f);
        out
    }

    /// The coordinate differential `d name`.
    pub fn d_coord(chart: &ChartRef, name: &str) -> Result<Self, ExteriorError> {
        let i = chart.require_index(name)?;
        let mut out = DifferentialForm::zero(chart, 1);
        out.terms.insert(SmallVec::from_slice(&[i as u16]), Expr::one());
        Ok(out)
    }

    /// Builds a form from `(coordinate names, coefficient)` terms in any order.
    pub fn from_terms<S: AsRef<str>>(
        chart: &ChartRef,
        degree: usize,
        terms: &[(Vec<S>, Expr)],
    ) -> Result<Self, ExteriorError> {
        let mut out = DifferentialForm::zero(chart, degree);
        for (names, c) in terms {
            if names.len() != degree {
                return Err(ExteriorError::Degree(format!(
                    "term of length {} in a {degree}-form",
                    names.len()
                )));
            }
            let idx = names
                .iter()
                .map(|n| chart.require_index(n.as_ref()))
                .collect::<Result<Vec<_>, _>>()?;
            out.add_term_positions(idx, c.clone());
        }
        Ok(out)
    }

    /// Terms written as `("x y", "coeff")` pairs; convenient in tests and fixtures.
    pub fn parse(chart: &ChartRef, degree: usize, terms: &[(&str, &str)]) -> Result<Self, ExteriorError> {
        let parsed = terms
            .iter()
            .map(|(idx, c)| {
                Ok((
                    idx.split_whitespace().map(str::to_string).collect::<Vec<_>>(),
                    crate::symbolic::parse(c)?,
                ))
            })
            .collect::<Result<Vec<_>, ExteriorError>>()?;
        DifferentialForm::from_terms(chart, degree, &parsed)
    }

    pub fn add_term_positions(&mut self, idx: Vec<usize>, c: Expr) {
        if let Some((idx, negative)) = normalize(idx) {
            accumulate(&mut self.terms, idx, if negative { -c } else { c });
        }
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &Expr)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at positions in any order, with the permutation sign.
    pub fn coefficient(&self, positions: &[usize]) -> Expr {
        match normalize(positions.to_vec()) {
            None => Expr::zero(),
            Some((idx, negative)) => {
                let c = self.terms.get(&idx).cloned().unwrap_or_else(Expr::zero);
                if negative {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn coefficient_named(&self, names: &[&str]) -> Result<Expr, ExteriorError> {
        let idx = names
            .iter()
            .map(|n| self.chart.require_index(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.coefficient(&idx))
    }

    /// Scalar of a 0-form.
    pub fn as_function(&self) -> Expr {
        if self.degree != 0 {
            return Expr::zero();
        }
        self.terms.get(&Index::new()).cloned().unwrap_or_else(Expr::zero)
    }

    /// Dense coefficient vector of a 1-form.
    pub fn covector(&self) -> Vec<Expr> {
        (0..self.chart.dim()).map(|i| self.coefficient(&[i])).collect()
    }

    /// Dense antisymmetric matrix Ω with Ω_ij = coefficient of dx_i∧dx_j.
    pub fn matrix(&self) -> Vec<Vec<Expr>> {
        let n = self.chart.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.coefficient(&[i, j])).collect())
            .collect()
    }

    fn same_shape(&self, other: &Self) -> Result<(), ExteriorError> {
        self.chart.require_same(&other.chart)?;
        if self.degree != other.degree {
            return Err(ExteriorError::Degree(format!(
                "cannot add a {}-form and a {}-form",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            accumulate(&mut out.terms, k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DifferentialForm {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn scale(&self, f: &Expr) -> Self {
        let mut out = DifferentialForm::zero(&self.chart, self.degree);
        for (k, v) in &self.terms {
            accumulate(&mut out.terms, k.clone(), v * f);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.chart.require_same(&other.chart)?;
        let mut out = DifferentialForm::zero(&self.chart, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.iter().any(|i| b.contains(i)) {
                    continue;
                }
                let inversions: usize = a
                    .iter()
                    .map(|i| b.iter().filter(|j| *j < i).count())
                    .sum();
                let mut idx: Index = a.iter().chain(b.iter()).copied().collect();
                idx.sort_unstable();
                let c = ca * cb;
                accumulate(&mut out.terms, idx, if inversions % 2 == 1 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// k-fold wedge power; the 0th power is the constant function 1.
    pub fn power(&self, k: usize) -> Result<Self, ExteriorError> {
        let mut out = DifferentialForm::function(&self.chart, Expr::one());
        for _ in 0..k {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = DifferentialForm::zero(&self.chart, self.degree + 1);
        for (idx, f) in &self.terms {
            let vars = f.free_vars();
            for (j, name) in self.chart.coords().iter().enumerate() {
                let j16 = j as u16;
                if idx.contains(&j16) || !vars.contains(name) {
                    continue;
                }
                let df = f.diff(name);
                let before = idx.iter().filter(|i| **i < j16).count();
                let mut new_idx = idx.clone();
                new_idx.insert(before, j16);
                accumulate(&mut out.terms, new_idx, if before % 2 == 1 { -df } else { df });
            }
        }
        out
    }

    /// Interior product i_X.
    pub fn interior(&self, x: &VectorField) -> Result<Self, ExteriorError> {
        self.chart.require_same(x.chart())?;
        if self.degree == 0 {
            return Ok(DifferentialForm::zero(&self.chart, 0));
        }
        let xs = x.components();
        let mut out = DifferentialForm::zero(&self.chart, self.degree - 1);
        for (idx, f) in &self.terms {
            for (p, i) in idx.iter().enumerate() {
                let xi = &xs[*i as usize];
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(p);
                let c = xi * f;
                accumulate(&mut out.terms, rest, if p % 2 == 1 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Value of a 1-form on a vector field.
    pub fn apply(&self, x: &VectorField) -> Result<Expr, ExteriorError> {
        if self.degree != 1 {
            return Err(ExteriorError::Degree("evaluation needs a 1-form".into()));
        }
        Ok(self.interior(x)?.as_function())
    }

    /// L_X = i_X d + d i_X.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Self, ExteriorError> {
        let a = self.d().interior(x)?;
        if self.degree == 0 {
            return Ok(a);
        }
        a.add(&self.interior(x)?.d())
    }

    /// F*a, for a form living on the target chart of F.
    pub fn pullback(&self, f: &SmoothMap) -> Result<Self, ExteriorError> {
        f.target().require_same(&self.chart)?;
        let src = f.source();
        let mut out = DifferentialForm::zero(src, self.degree);
        if self.terms.is_empty() {
            return Ok(out);
        }
        let mut rows: BTreeMap<u16, Vec<(u16, Expr)>> = BTreeMap::new();
        for idx in self.terms.keys() {
            for &i in idx {
                rows.entry(i).or_insert_with(|| {
                    let c = &f.components()[i as usize];
                    let vars = c.free_vars();
                    src.coords()
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| vars.contains(*s))
                        .map(|(j, s)| (j as u16, c.diff(s)))
                        .filter(|(_, e)| !e.is_zero())
                        .collect()
                });
            }
        }
        for (idx, coeff) in &self.terms {
            let pulled = f.pull_function(coeff)?;
            if pulled.is_zero() {
                continue;
            }
            let mut minors: BTreeMap<Index, Expr> = BTreeMap::new();
            minors.insert(Index::new(), Expr::one());
            for i in idx {
                let row = &rows[i];
                let mut next = BTreeMap::new();
                for (acc_idx, v) in &minors {
                    for (j, dj) in row {
                        if acc_idx.contains(j) {
                            continue;
                        }
                        let larger = acc_idx.iter().filter(|k| *k > j).count();
                        let pos = acc_idx.len() - larger;
                        let mut new_idx = acc_idx.clone();
                        new_idx.insert(pos, *j);
                        let c = v * dj;
                        accumulate(&mut next, new_idx, if larger % 2 == 1 { -c } else { c });
                    }
                }
                minors = next;
                if minors.is_empty() {
                    break;
                }
            }
            for (j, m) in minors {
                accumulate(&mut out.terms, j, &pulled * &m);
            }
        }
        Ok(out)
    }

    /// Coefficient-wise zero test; NONZERO names the offending index.
    pub fn zero_test(&self, policy: &SamplePolicy) -> Aggregate {
        aggregate(
            self.terms.iter().map(|(k, v)| (self.index_label(k), v)),
            self.chart.coords(),
            policy,
        )
    }

    pub fn index_label(&self, idx: &[u16]) -> String {
        if idx.is_empty() {
            return "1".to_string();
        }
        idx.iter()
            .map(|i| format!("d{}", self.chart.coord(*i as usize)))
            .collect::<Vec<_>>()
            .join("^")
    }

    pub fn index_names(&self, idx: &[u16]) -> Vec<String> {
        idx.iter()
            .map(|i| self.chart.coord(*i as usize).to_string())
            .collect()
    }

    /// Same coefficients on another chart with identical coordinates.
    pub fn on_chart(&self, chart: &ChartRef) -> Result<Self, ExteriorError> {
        self.chart.require_same(chart)?;
        Ok(DifferentialForm {
            chart: chart.clone(),
            degree: self.degree,
            terms: self.terms.clone(),
        })
    }

    pub fn map_coefficients<F>(&self, mut f: F) -> Result<Self, ExteriorError>
    where
        F: FnMut(&Expr) -> Result<Expr, ExteriorError>,
    {
        let mut out = DifferentialForm::zero(&self.chart, self.degree);
        for (k, v) in &self.terms {
            accumulate(&mut out.terms, k.clone(), f(v)?);
        }
        Ok(out)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let label = self.index_label(idx);
            if idx.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&label)?;
            } else if (-c).is_one() {
                write!(f, "-{label}")?;
            } else {
                write!(f, "({c})*{label}")?;
            }
        }
        Ok(())
    }
}
