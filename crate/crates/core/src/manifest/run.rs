//! Running the checks a manifest selects and assembling the report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::action::{
    check_action_axioms, check_albert_momentum, check_cosymplectic_action, check_leaf_restriction, multiplication_graph,
    self_action,
};
use crate::cosymplectic::{calculus_checks, check_cosymplectic, product_structure, CosymplecticStructure};
use crate::error::{Error, Result};
use crate::groupoid::{check_groupoid_axioms, check_groupoid_leaf, check_multiplicative, inverse_antimultiplicativity};
use crate::morita::{check_leaf_bimodule, check_morita_conditions};
use crate::reduction::{
    albert_manifest, check_candidate, verify_albert_reduction, verify_leaf_reduction, verify_reduction, ReductionOutcome,
};
use crate::report::{Checks, Entry, Report, Status};
use crate::symbolic::{Aggregate, Expr, SamplePolicy};
use crate::testdata;

use super::resolve::{reduction_manifest, Manifest, ReductionEntry, Route, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selection {
    Structure,
    Groupoid,
    Action,
    Reduction,
    Morita,
}

impl Selection {
    pub const ALL: [Selection; 5] = [
        Selection::Structure,
        Selection::Groupoid,
        Selection::Action,
        Selection::Reduction,
        Selection::Morita,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Selection::Structure => "structure",
            Selection::Groupoid => "groupoid",
            Selection::Action => "action",
            Selection::Reduction => "reduction",
            Selection::Morita => "morita",
        }
    }

    /// A comma-separated list; `all` selects everything.
    pub fn parse_list(s: &str) -> Result<Vec<Selection>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Selection::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        Ok(out)
    }
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Selection::ALL
            .into_iter()
            .find(|sel| sel.label() == s)
            .ok_or_else(|| Error::Other(format!("unknown selection `{s}`")))
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Reeb, ♯∘♭, Hamiltonian and Jacobi identities on seeded random data:
/// 5 fields, 5 functions and 20 triples of degree ≤ 3.
pub fn calculus_suite(c: &CosymplecticStructure, policy: &SamplePolicy) -> Result<Checks> {
    let mut rng = testdata::rng(policy.seed());
    let chart = c.chart();
    let fields: Vec<_> = (0..5).map(|_| testdata::random_field(&mut rng, chart)).collect();
    let functions: Vec<_> = (0..5).map(|_| testdata::random_function(&mut rng, chart, 3)).collect();
    let triples: Vec<_> = (0..20)
        .map(|_| {
            (
                testdata::random_function(&mut rng, chart, 3),
                testdata::random_function(&mut rng, chart, 3),
                testdata::random_function(&mut rng, chart, 3),
            )
        })
        .collect();
    calculus_checks(c, &fields, &functions, &triples, policy)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

struct Run<'a> {
    m: &'a Manifest,
    policy: &'a SamplePolicy,
    checks: Checks,
    artifacts: BTreeMap<String, Value>,
}

impl<'a> Run<'a> {
    /// Runs `f`, recording an error as a failed entry.
    fn section(&mut self, prefix: &str, f: impl FnOnce(&mut Self) -> Result<Checks>) {
        match f(self) {
            Ok(c) => self.checks.extend(prefix, c),
            Err(e) => {
                self.checks
                    .push(Entry::new(format!("{prefix}.error"), "check could run", Status::Failed, e.to_string()));
            }
        }
    }

    /// A structure the section depends on; a non-cosymplectic dependency is
    /// itself a failure of the section.
    fn dependency<'s>(c: &mut Checks, what: &str, s: &'s Structure) -> Option<&'s CosymplecticStructure> {
        match s {
            Ok(cs) => Some(cs),
            Err(reason) => {
                c.fail(
                    "dependency",
                    "dependencies are cosymplectic",
                    format!("{what} is not usable: {reason}"),
                );
                None
            }
        }
    }

    fn structures(&mut self) {
        let m = self.m;
        for (name, s) in &m.structures {
            self.section(&format!("structure.{name}"), |run| {
                let mut c = Checks::new();
                let v = check_cosymplectic(&s.eta, &s.omega, run.policy)?;
                let attestation = s.attest_nonvanishing.then(|| format!("nonvanishing:{name}"));
                c.extend("validation", v.checks(attestation.as_deref()));
                if let Ok(cs) = &s.structure {
                    c.extend("calculus", calculus_suite(cs, run.policy)?);
                    run.artifacts.insert(format!("structure.{name}.reeb"), json!(cs.reeb().to_string()));
                }
                Ok(c)
            });
        }
        for (name, (l, r)) in &m.products {
            self.section(&format!("product.{name}"), |run| {
                let mut c = Checks::new();
                let (Some(cl), Some(cr)) = (
                    Run::dependency(&mut c, l, m.structure(l)?),
                    Run::dependency(&mut c, r, m.structure(r)?),
                ) else {
                    return Ok(c);
                };
                let ps = product_structure(cl, cr, run.policy)?;
                c.extend("validation", ps.structure.validation().checks(None));
                c.extend("calculus", calculus_suite(&ps.structure, run.policy)?);
                let (n, k) = (ps.n1, ps.n2);
                let sum = n + k + 1;
                let multinomial = factorial(sum) / (factorial(n) * factorial(k));
                c.info(
                    "volume_ratio",
                    "η∧ω^{n+m+1} = c·ω₁ⁿ∧ω₂ᵐ∧η₂∧η₁∧dt",
                    format!(
                        "c = {}; n+m+1 = {sum}; (n+m+1)!/(n!m!) = {multinomial}",
                        ps.volume_ratio
                    ),
                );
                run.artifacts.insert(
                    format!("product.{name}.volume"),
                    json!({
                        "ratio": ps.volume_ratio.to_string(),
                        "n": n,
                        "m": k,
                        "n_plus_m_plus_1": sum,
                        "multinomial": multinomial,
                    }),
                );
                Ok(c)
            });
        }
    }

    fn groupoids(&mut self) {
        let m = self.m;
        for (name, e) in &m.groupoids {
            self.section(&format!("groupoid.{name}"), |run| {
                let g = &e.groupoid;
                let policy = run.policy;
                let mut c = Checks::new();
                c.extend("axioms", check_groupoid_axioms(g, policy)?);
                if g.omega.is_some() {
                    c.extend("multiplicative", check_multiplicative(g, policy)?.checks());
                    c.extend("inverse", inverse_antimultiplicativity(g, policy)?);
                }
                match &e.structure {
                    Some(Ok(cs)) => {
                        let graph = multiplication_graph(g, cs, &Expr::one())?;
                        let (dp, dg) = (g.pairs.chart.dim(), g.arrows.dim());
                        let anchor = "2·dim Γ + 1 = 3·dim G₁ + 2";
                        if 2 * dp + 1 == 3 * dg + 2 && graph.chart.dim() == 3 * dg + 2 {
                            c.pass("graph.dimension_identity", anchor, Status::Proved, format!("2·{dp} + 1 = 3·{dg} + 2"));
                        } else {
                            c.fail("graph.dimension_identity", anchor, format!("2·{dp} + 1 ≠ 3·{dg} + 2"));
                        }
                        c.extend("graph", graph.checks(policy)?);
                        let sa = self_action(g)?;
                        c.extend("self_action.axioms", check_action_axioms(&sa, policy)?);
                        c.extend("self_action", check_cosymplectic_action(&sa, cs, cs, policy)?);
                    }
                    Some(Err(reason)) => {
                        c.fail("structure", "(η, ω) on the arrows is cosymplectic", reason.clone());
                    }
                    None => {}
                }
                if g.leaf.is_some() {
                    c.extend("leaf", check_groupoid_leaf(g, policy)?);
                }
                Ok(c)
            });
        }
    }

    fn actions(&mut self) {
        let m = self.m;
        for (name, g) in &m.groups {
            self.section(&format!("group.{name}"), |run| g.checks(run.policy));
        }
        for (name, a) in &m.group_actions {
            self.section(&format!("group_action.{name}"), |run| a.checks(run.policy));
        }
        for (name, e) in &m.actions {
            self.section(&format!("action.{name}"), |run| {
                let policy = run.policy;
                let mut c = Checks::new();
                c.extend("axioms", check_action_axioms(&e.action, policy)?);
                let Some(sm) = &e.structure_m else {
                    c.skip("cosymplectic", "dρ(R) = 0 and graph LL", "no module structure given");
                    return Ok(c);
                };
                let cg = Run::dependency(&mut c, &e.structure_g, m.structure(&e.structure_g)?).cloned();
                let cm = Run::dependency(&mut c, sm, m.structure(sm)?).cloned();
                if let (Some(cg), Some(cm)) = (cg, cm) {
                    c.extend("cosymplectic", check_cosymplectic_action(&e.action, &cg, &cm, policy)?);
                    if let Some(r) = &e.leaf {
                        c.extend("leaf", check_leaf_restriction(&e.action, &cg, &cm, r, policy)?);
                    }
                }
                Ok(c)
            });
        }
        for (name, e) in &m.momentum {
            self.section(&format!("momentum.{name}"), |run| {
                let policy = run.policy;
                let mut c = Checks::new();
                let Some(cm) = Run::dependency(&mut c, &e.structure, m.structure(&e.structure)?) else {
                    return Ok(c);
                };
                let albert = check_albert_momentum(&e.spec.momentum, cm, policy)?;
                let flow = e.spec.flow_checks(cm, policy)?;
                let gate = albert.passed() && flow.passed();
                c.extend("albert", albert);
                c.extend("flow", flow);
                let ext = &e.extension;
                if !gate {
                    c.skip("extension", "Reeb flow action is cosymplectic", "momentum or flow checks failed");
                    return Ok(c);
                }
                c.extend("extension.axioms", check_action_axioms(ext, policy)?);
                let g = &ext.groupoid;
                match (&g.eta, &g.omega) {
                    (Some(eta), Some(omega)) => {
                        let cg = CosymplecticStructure::new(&g.name, eta.clone(), omega.clone(), policy)?;
                        c.extend("extension", check_cosymplectic_action(ext, &cg, cm, policy)?);
                    }
                    _ => return Err(Error::Missing(format!("cosymplectic forms on {}", g.name))),
                }
                Ok(c)
            });
        }
    }

    fn reduction(&mut self, name: &str, e: &ReductionEntry) -> Result<Checks> {
        let m = self.m;
        let policy = self.policy;
        let key = format!("reduction.{name}");
        let mut c = Checks::new();
        let (action, cm, cg) = m.reduction_parts(e)?;
        let (Some(cm), Some(cg)) = (
            Run::dependency(&mut c, "module structure", cm),
            Run::dependency(&mut c, "groupoid structure", cg),
        ) else {
            return Ok(c);
        };
        let (outcome, manifest): (ReductionOutcome, _) = match &e.route {
            Route::Momentum(n) => {
                let spec = &m.momentum[n].spec;
                (verify_albert_reduction(spec, cm, &e.geometry, policy)?, albert_manifest(spec, cm, &e.geometry, policy)?)
            }
            Route::Action(_) => {
                let rm = reduction_manifest(name, action, cg, cm, &e.geometry);
                (verify_reduction(&rm, policy)?, rm)
            }
        };
        self.artifacts.extend(outcome.artifacts(&key));
        c.extend("", outcome.checks);
        let mut rng = testdata::rng(policy.seed());
        let mut round_trip = Aggregate::exact();
        let q = &e.geometry.quotient;
        for i in 0..20 {
            let alpha = testdata::random_form(&mut rng, q, 1 + i % q.dim().clamp(1, 2));
            round_trip = round_trip.combine(e.geometry.section_round_trip(&alpha, policy)?);
        }
        c.verdict("section_round_trip", "σ*p*α = α on 20 random forms", &round_trip);
        let Some(reduced) = &outcome.reduced else {
            if e.leaf.is_some() {
                c.skip("leaf", "leaf reduction", "no reduced structure");
            }
            for i in 0..e.candidates.len() {
                c.skip(&format!("candidate.{i}"), "candidate structure", "no reduced structure");
            }
            return Ok(c);
        };
        if let Some(leaf) = &e.leaf {
            c.extend("leaf", verify_leaf_reduction(&manifest, leaf, reduced, policy)?);
        }
        for (i, (eta, omega)) in e.candidates.iter().enumerate() {
            c.extend(
                &format!("candidate.{i}"),
                check_candidate(&e.geometry, cm, reduced, eta, omega, policy)?,
            );
        }
        Ok(c)
    }

    fn reductions(&mut self) {
        let m = self.m;
        for (name, e) in &m.reductions {
            self.section(&format!("reduction.{name}"), |run| run.reduction(name, e));
        }
    }

    fn morita(&mut self) {
        let m = self.m;
        for (name, e) in &m.morita {
            self.section(&format!("morita.{name}"), |run| {
                let mut c = Checks::new();
                let mm = match &e.manifest {
                    Ok(mm) => mm,
                    Err(reason) => {
                        c.fail("dependency", "dependencies are cosymplectic", reason.clone());
                        return Ok(c);
                    }
                };
                c.extend("", check_morita_conditions(mm, run.policy)?);
                if let Some(leaf) = &e.leaf {
                    c.extend("leaf", check_leaf_bimodule(mm, leaf, run.policy)?);
                }
                Ok(c)
            });
        }
    }
}

/// Runs the selected check families in dependency order. Failures, including
/// errors raised by a checker, become report entries.
pub fn run_checks(m: &Manifest, selection: &[Selection], policy: &SamplePolicy) -> Report {
    let mut chosen = selection.to_vec();
    chosen.sort();
    chosen.dedup();
    let mut run = Run {
        m,
        policy,
        checks: Checks::new(),
        artifacts: BTreeMap::new(),
    };
    for s in chosen {
        match s {
            Selection::Structure => run.structures(),
            Selection::Groupoid => run.groupoids(),
            Selection::Action => run.actions(),
            Selection::Reduction => run.reductions(),
            Selection::Morita => run.morita(),
        }
    }
    Report::new(run.checks, run.artifacts)
}
