//! Lie groups and group actions given by coordinate formulas.

use crate::error::{Error, Result};
use crate::exterior::{Chart, ChartRef, SmoothMap, VectorField};
use crate::report::{Checks, Entry, Status, Witness};
use crate::residual::{self, concat, coordinates};
use crate::symbolic::{Expr, SamplePolicy};

/// A group law on a chart: multiplication on the `g1.`/`g2.` pair chart,
/// a constant unit, and an inverse map.
#[derive(Clone, Debug)]
pub struct Group {
    pub name: String,
    pub chart: ChartRef,
    pub pairs: ChartRef,
    pub mult: SmoothMap,
    pub unit: Vec<Expr>,
    pub inverse: SmoothMap,
}

pub fn pair_chart(chart: &ChartRef) -> Result<ChartRef> {
    Ok(Chart::product(
        &format!("{}^2", chart.name()),
        &[("g1.", chart), ("g2.", chart)],
    )?)
}

fn triple_chart(chart: &ChartRef) -> Result<ChartRef> {
    Ok(Chart::product(
        &format!("{}^3", chart.name()),
        &[("g1.", chart), ("g2.", chart), ("g3.", chart)],
    )?)
}

impl Group {
    pub fn new(name: &str, chart: &ChartRef, mult: Vec<Expr>, unit: Vec<Expr>, inverse: Vec<Expr>) -> Result<Self> {
        let pairs = pair_chart(chart)?;
        if unit.len() != chart.dim() {
            return Err(Error::invalid(name, format!("unit has {} entries, chart has {}", unit.len(), chart.dim())));
        }
        if let Some(u) = unit.iter().find(|u| !u.is_constant()) {
            return Err(Error::invalid(name, format!("unit entry `{u}` is not constant")));
        }
        Ok(Group {
            name: name.to_string(),
            mult: SmoothMap::new(&pairs, chart, mult)?,
            inverse: SmoothMap::new(chart, chart, inverse)?,
            chart: chart.clone(),
            pairs,
            unit,
        })
    }

    /// Vector addition on the given coordinates (also used for tori).
    pub fn additive(name: &str, chart: &ChartRef) -> Result<Self> {
        let mult = chart
            .coords()
            .iter()
            .map(|c| &Expr::var(&format!("g1.{c}")) + &Expr::var(&format!("g2.{c}")))
            .collect();
        let inverse = chart.coords().iter().map(|c| -Expr::var(c)).collect();
        Group::new(name, chart, mult, vec![Expr::zero(); chart.dim()], inverse)
    }

    /// The one-element group on a 0-dimensional chart.
    pub fn trivial(name: &str) -> Result<Self> {
        let chart = Chart::new(&format!("{name}.pt"), &[] as &[&str])?;
        Group::additive(name, &chart)
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn multiply(&self, a: &[Expr], b: &[Expr]) -> Result<Vec<Expr>> {
        Ok(self.mult.apply(&concat(a, b))?)
    }

    pub fn invert(&self, a: &[Expr]) -> Result<Vec<Expr>> {
        Ok(self.inverse.apply(a)?)
    }

    /// Unit, inverse and associativity laws.
    pub fn checks(&self, policy: &SamplePolicy) -> Result<Checks> {
        let mut c = Checks::new();
        let g = coordinates(&self.chart);
        let left = self.multiply(&self.unit, &g)?;
        let right = self.multiply(&g, &self.unit)?;
        c.verdict(
            "unit",
            "e·g = g = g·e",
            &residual::labelled("left", &self.chart, &left, &g, &self.chart, policy).combine(residual::labelled(
                "right",
                &self.chart,
                &right,
                &g,
                &self.chart,
                policy,
            )),
        );
        let inv = self.invert(&g)?;
        let a = self.multiply(&g, &inv)?;
        let b = self.multiply(&inv, &g)?;
        c.verdict(
            "inverse",
            "g·g⁻¹ = e = g⁻¹·g",
            &residual::labelled("right", &self.chart, &a, &self.unit, &self.chart, policy).combine(
                residual::labelled("left", &self.chart, &b, &self.unit, &self.chart, policy),
            ),
        );
        let triples = triple_chart(&self.chart)?;
        let pick = |p: &str| -> Vec<Expr> {
            self.chart.coords().iter().map(|c| Expr::var(&format!("{p}{c}"))).collect()
        };
        let (g1, g2, g3) = (pick("g1."), pick("g2."), pick("g3."));
        let lhs = self.multiply(&self.multiply(&g1, &g2)?, &g3)?;
        let rhs = self.multiply(&g1, &self.multiply(&g2, &g3)?)?;
        c.verdict(
            "associativity",
            "(gh)k = g(hk)",
            &residual::vectors(&self.chart, &lhs, &rhs, &triples, policy),
        );
        Ok(c)
    }
}

/// A left action `a: G×X → X`; the source chart lists the group coordinates
/// followed by the space coordinates, unprefixed.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub name: String,
    pub group: Group,
    pub space: ChartRef,
    pub source: ChartRef,
    pub map: SmoothMap,
}

pub fn action_source(group: &Group, space: &ChartRef) -> Result<ChartRef> {
    Ok(Chart::product(
        &format!("{}x{}", group.chart.name(), space.name()),
        &[("", &group.chart), ("", space)],
    )?)
}

impl GroupAction {
    pub fn new(name: &str, group: &Group, space: &ChartRef, comps: Vec<Expr>) -> Result<Self> {
        let source = action_source(group, space)?;
        Ok(GroupAction {
            name: name.to_string(),
            map: SmoothMap::new(&source, space, comps)?,
            group: group.clone(),
            space: space.clone(),
            source,
        })
    }

    pub fn trivial(name: &str, group: &Group, space: &ChartRef) -> Result<Self> {
        GroupAction::new(name, group, space, coordinates(space))
    }

    pub fn act(&self, g: &[Expr], x: &[Expr]) -> Result<Vec<Expr>> {
        Ok(self.map.apply(&concat(g, x))?)
    }

    /// The diffeomorphism `x ↦ g·x` with the group coordinates as parameters.
    pub fn at_symbolic_element(&self) -> Result<SmoothMap> {
        let g = coordinates(&self.group.chart);
        let comps = self.act(&g, &coordinates(&self.space))?;
        Ok(SmoothMap::with_parameters(
            &self.space,
            &self.space,
            comps,
            self.group.chart.coords(),
        )?)
    }

    /// a(e, x) = x and a(g, a(h, x)) = a(gh, x).
    pub fn checks(&self, policy: &SamplePolicy) -> Result<Checks> {
        let mut c = Checks::new();
        let x = coordinates(&self.space);
        let ex = self.act(&self.group.unit, &x)?;
        c.verdict(
            "unit",
            "a(e, x) = x",
            &residual::vectors(&self.space, &ex, &x, &self.space, policy),
        );
        let chart = Chart::product(
            &format!("{}^2x{}", self.group.chart.name(), self.space.name()),
            &[("g1.", &self.group.chart), ("g2.", &self.group.chart), ("", &self.space)],
        )?;
        let pick = |p: &str| -> Vec<Expr> {
            self.group.chart.coords().iter().map(|c| Expr::var(&format!("{p}{c}"))).collect()
        };
        let (g1, g2) = (pick("g1."), pick("g2."));
        let lhs = self.act(&g1, &self.act(&g2, &x)?)?;
        let rhs = self.act(&self.group.multiply(&g1, &g2)?, &x)?;
        c.verdict(
            "compatibility",
            "a(g, a(h, x)) = a(gh, x)",
            &residual::vectors(&self.space, &lhs, &rhs, &chart, policy),
        );
        Ok(c)
    }

    /// Central finite difference of `a(e + εA, x)` in the direction of the
    /// group coordinate `index`, compared against `field` at sample points.
    pub fn generator_entry(&self, id: &str, anchor: &str, index: usize, field: &VectorField, policy: &SamplePolicy) -> Result<Entry> {
        self.space.require_same(field.chart())?;
        let h = 1e-5;
        let x = coordinates(&self.space);
        let shifted = |sign: i64| -> Result<Vec<Expr>> {
            let mut g = self.group.unit.clone();
            g[index] = &g[index] + &Expr::frac(sign, 100_000);
            self.act(&g, &x)
        };
        let plus = shifted(1)?;
        let minus = shifted(-1)?;
        let mut sampler = policy.sampler(self.space.coords());
        let mut max_err: f64 = 0.0;
        let mut evaluated = 0;
        for _ in 0..policy.samples() * 4 {
            if evaluated >= policy.samples() {
                break;
            }
            let p = sampler.next_point();
            let look = p.lookup();
            let mut ok = true;
            let mut worst: Option<(usize, f64)> = None;
            for i in 0..self.space.dim() {
                let (Ok(a), Ok(b), Ok(v)) = (plus[i].eval(&look), minus[i].eval(&look), field.components()[i].eval(&look))
                else {
                    ok = false;
                    break;
                };
                let fd = (a - b) / (2.0 * h);
                let err = (fd - v).abs() / (1.0 + v.abs());
                if worst.is_none_or(|(_, w)| err > w) {
                    worst = Some((i, err));
                }
            }
            if !ok {
                continue;
            }
            evaluated += 1;
            if let Some((i, err)) = worst {
                if err > FD_TOLERANCE {
                    return Ok(Entry {
                        witness: Some(Witness {
                            component: Some(self.space.coord(i).to_string()),
                            point: p.to_pairs(),
                            value: err,
                        }),
                        ..Entry::new(id, anchor, Status::Failed, "generator differs from the finite difference")
                    });
                }
                max_err = max_err.max(err);
            }
        }
        if evaluated == 0 {
            return Ok(Entry::new(id, anchor, Status::Failed, "no pole-free sample point"));
        }
        Ok(Entry::new(
            id,
            anchor,
            Status::Numeric,
            format!("central difference agrees at {evaluated} samples, max rel. error {max_err:.1e}"),
        ))
    }
}

/// Truncation error of a central difference with step 1e-5 is ~1e-10·f'''.
const FD_TOLERANCE: f64 = 1e-6;


#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse;

    #[test]
    fn additive_group_and_rotation_action() {
        let circle = Chart::with_periodic("S1", &["theta"], &["theta"]).unwrap();
        let g = Group::additive("S1", &circle).unwrap();
        let c = g.checks(&SamplePolicy::default()).unwrap();
        assert!(c.passed());
        let plane = Chart::new("R2", &["x", "y"]).unwrap();
        let act = GroupAction::new(
            "rot",
            &g,
            &plane,
            vec![
                parse("cos(theta)*x + sin(theta)*y").unwrap(),
                parse("-sin(theta)*x + cos(theta)*y").unwrap(),
            ],
        )
        .unwrap();
        assert!(act.checks(&SamplePolicy::default()).unwrap().passed());
        let gen = VectorField::new(&plane, vec![parse("y").unwrap(), parse("-x").unwrap()]).unwrap();
        let e = act.generator_entry("gen", "", 0, &gen, &SamplePolicy::default()).unwrap();
        assert_eq!(e.status, Status::Numeric);
        let e = act.generator_entry("gen", "", 0, &gen.neg(), &SamplePolicy::default()).unwrap();
        assert_eq!(e.status, Status::Failed);
    }

    #[test]
    fn broken_action_fails_compatibility() {
        let line = Chart::new("R", &["g"]).unwrap();
        let g = Group::additive("R", &line).unwrap();
        let x = Chart::new("X", &["x"]).unwrap();
        let act = GroupAction::new("bad", &g, &x, vec![parse("x + 2*g").unwrap()]).unwrap();
        assert!(act.checks(&SamplePolicy::default()).unwrap().passed());
        let act = GroupAction::new("bad", &g, &x, vec![parse("x + g^2").unwrap()]).unwrap();
        let c = act.checks(&SamplePolicy::default()).unwrap();
        assert_eq!(c.find("compatibility").unwrap().status, Status::Failed);
    }
}
