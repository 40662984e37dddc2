//! Exit gate: one line per acceptance criterion.

use std::time::{Duration, Instant};

use cosym::action::{check_cosymplectic_action, self_action};
use cosym::cosymplectic::CosymplecticStructure;
use cosym::exterior::{Chart, ChartRef, DifferentialForm, VectorField};
use cosym::fixtures;
use cosym::gallery;
use cosym::groupoid::{check_multiplicative, GroupoidPresentation};
use cosym::manifest::{calculus_suite, PolicyDoc};
use cosym::reduction::{check_candidate, verify_albert_reduction};
use cosym::report::{Report, Status};
use cosym::symbolic::SamplePolicy;
use cosym::testdata;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn policy() -> SamplePolicy {
    SamplePolicy::default()
}

fn chart(prefix: &str, n: usize) -> ChartRef {
    let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    Chart::new(prefix, &names).unwrap()
}

fn exterior_laws() -> Outcome {
    let start = Instant::now();
    let mut rng = testdata::rng(2024);
    let n = 1000;
    let mut failures = [0usize; 4];
    for _ in 0..n {
        let dim = rng.random_range(1..=5);
        let m = chart("x", dim);
        let p = rng.random_range(0..=2usize).min(dim);
        let q = rng.random_range(0..=2usize).min(dim);
        let a = testdata::random_form(&mut rng, &m, p);
        let b = testdata::random_form(&mut rng, &m, q);
        if !a.d().d().is_exact_zero() {
            failures[0] += 1;
        }
        let ba = b.wedge(&a).map_err(err)?;
        let ba = if p * q % 2 == 1 { ba.neg() } else { ba };
        if !a.wedge(&b).map_err(err)?.sub(&ba).map_err(err)?.is_exact_zero() {
            failures[1] += 1;
        }
        let (k, l) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let (ca, cb) = (chart("a", k), chart("b", l));
        let g = testdata::random_map(&mut rng, &ca, &cb);
        let f = testdata::random_map(&mut rng, &cb, &m);
        let w = testdata::random_form(&mut rng, &m, p);
        let lhs = w.pullback(&f.compose(&g).map_err(err)?).map_err(err)?;
        let rhs = w.pullback(&f).map_err(err)?.pullback(&g).map_err(err)?;
        if !lhs.sub(&rhs).map_err(err)?.is_exact_zero() {
            failures[2] += 1;
        }
        let lhs = w.d().pullback(&f).map_err(err)?;
        let rhs = w.pullback(&f).map_err(err)?.d();
        if !lhs.sub(&rhs).map_err(err)?.is_exact_zero() {
            failures[3] += 1;
        }
    }
    let t = start.elapsed();
    ensure(failures == [0; 4], format!("non-exact residuals {failures:?}"))?;
    ensure(t < Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!("{n} instances of each law exact, {:.2} s", t.as_secs_f64()))
}

/// Values of a constant form's coefficient matrix.
fn constant(e: &cosym::symbolic::Expr) -> f64 {
    e.eval(&|_: &str| Some(0.3)).unwrap()
}

/// ♭ as a matrix: ♭(X)_j = Σ_i X^i (ω_ij + η_i η_j).
fn flat_matrix(c: &CosymplecticStructure) -> DMatrix<f64> {
    let n = c.chart().dim();
    DMatrix::from_fn(n, n, |j, i| {
        let w = match i.cmp(&j) {
            std::cmp::Ordering::Less => constant(&c.omega().coefficient(&[i, j])),
            std::cmp::Ordering::Greater => -constant(&c.omega().coefficient(&[j, i])),
            std::cmp::Ordering::Equal => 0.0,
        };
        w + constant(&c.eta().coefficient(&[i])) * constant(&c.eta().coefficient(&[j]))
    })
}

fn calculus() -> Outcome {
    let p = policy();
    let product = fixtures::product(&p).map_err(err)?.structure;
    let structures = [
        fixtures::std3(&p).map_err(err)?,
        fixtures::std5(&p).map_err(err)?,
        fixtures::skew3(&p).map_err(err)?,
        product,
    ];
    let ids = [
        "reeb.contraction",
        "reeb.normalization",
        "sharp_flat",
        "hamiltonian.characterization",
        "hamiltonian.horizontal",
        "hamiltonian.poisson",
        "poisson.jacobi",
    ];
    for c in &structures {
        let checks = calculus_suite(c, &p).map_err(err)?;
        if let Some(f) = checks.first_failure() {
            return Err(format!("{}: {} {}", c.name(), f.id, f.detail));
        }
        for id in ids {
            let e = checks.find(id).ok_or(format!("{}: no {id}", c.name()))?;
            ensure(e.status == Status::Proved || e.status == Status::Numeric, format!("{}: {id}", c.name()))?;
        }
    }
    let skew = &structures[2];
    let expected = VectorField::new(skew.chart(), vec![0.into(), (-1).into(), 1.into()]).map_err(err)?;
    ensure(skew.reeb() == &expected, format!("skew3 Reeb is {}", skew.reeb()))?;
    // Oracle: R = ♭⁻¹(η) by a numeric solve.
    let eta = DVector::from_fn(3, |i, _| constant(&skew.eta().coefficient(&[i])));
    let r = flat_matrix(skew).lu().solve(&eta).ok_or("♭ is singular")?;
    ensure((r - DVector::from_vec(vec![0.0, -1.0, 1.0])).norm() < 1e-12, "numeric Reeb differs")?;
    Ok(format!("4 structures; skew3 Reeb = {}", skew.reeb()))
}

fn product_volume() -> Outcome {
    let p = policy();
    let ps = fixtures::product(&p).map_err(err)?;
    ensure(ps.structure.validation().passed(), "product volume vanishes")?;
    let c = ps.volume_ratio.as_rational().ok_or(format!("ratio {} is not constant", ps.volume_ratio))?;
    let c = cosym::symbolic::expr::to_f64(&c);
    // Oracle: |coefficient of η∧ω³| = 3!·√det ♭ against a unit reference volume.
    let oracle = 6.0 * flat_matrix(&ps.structure).determinant().abs().sqrt();
    ensure((c.abs() - oracle).abs() < 1e-9, format!("ratio {c}, oracle |c| = {oracle}"))?;
    let report = gallery::find("product").map_err(err)?.run(&PolicyDoc::default()).map_err(err)?;
    ensure(report.passed(), "product gallery entry fails")?;
    Ok(format!(
        "c = {}; n+m+1 = 3 ({}); multinomial 6 ({}); informational",
        ps.volume_ratio,
        if c == 3.0 { "agrees" } else { "differs" },
        if c == 6.0 { "agrees" } else { "differs" }
    ))
}

fn find<'r>(r: &'r Report, id: &str) -> Result<&'r cosym::report::Entry, String> {
    r.entry(id).ok_or(format!("no entry {id}"))
}

fn multiplicative_vs_graph() -> Outcome {
    let none = PolicyDoc::default();
    for (name, g) in [("extension_tr1", "TR1xR"), ("extension_tr2", "TR2xR")] {
        let r = gallery::find(name).map_err(err)?.run(&none).map_err(err)?;
        ensure(r.passed(), format!("{name} fails"))?;
        let dim = find(&r, &format!("groupoid.{g}.graph.dimension_identity"))?;
        ensure(dim.status == Status::Proved, format!("{name}: dimension identity"))?;
    }
    let mutants = gallery::entries().iter().filter(|e| e.name.starts_with("mutant_")).collect::<Vec<_>>();
    ensure(mutants.len() == 5, format!("{} mutants", mutants.len()))?;
    for m in &mutants {
        let r = m.run(&none).map_err(err)?;
        let g = if m.name.contains("tr2") { "TR2xR" } else { "TR1xR" };
        let failed = |kind: &str| {
            r.entries
                .iter()
                .filter(|e| e.id.starts_with(&format!("groupoid.{g}.{kind}.")) && e.status == Status::Failed)
                .all(|e| e.witness.is_some())
                && r.entries
                    .iter()
                    .any(|e| e.id.starts_with(&format!("groupoid.{g}.{kind}.")) && e.status == Status::Failed)
        };
        ensure(failed("multiplicative"), format!("{}: multiplicativity not refuted with a witness", m.name))?;
        ensure(failed("graph"), format!("{}: graph LL not refuted with a witness", m.name))?;
    }
    Ok("TR1, TR2 pass both; 5 mutants fail both with witnesses; 2·dim Γ + 1 = 3·dim G₁ + 2".into())
}

fn flagship() -> Outcome {
    let start = Instant::now();
    let p = policy();
    let f = fixtures::rotation(&p).map_err(err)?;
    let out = verify_albert_reduction(&f.spec, &f.cm, &f.geometry, &p).map_err(err)?;
    if let Some(e) = out.checks.first_failure() {
        return Err(format!("{}: {}", e.id, e.detail));
    }
    let r = out.reduced.ok_or("no reduced structure")?;
    let q = &f.geometry.quotient;
    ensure(r.eta == DifferentialForm::parse(q, 1, &[("z", "1")]).map_err(err)?, format!("η^ξ = {}", r.eta))?;
    ensure(r.omega == DifferentialForm::parse(q, 2, &[("x2 y2", "1")]).map_err(err)?, format!("ω^ξ = {}", r.omega))?;
    let reeb = r.reeb.as_ref().ok_or("no reduced Reeb field")?;
    ensure(reeb == &VectorField::coordinate(q, "z").map_err(err)?, format!("R^ξ = {reeb}"))?;
    for id in [
        "groupoid.defining.eta",
        "groupoid.defining.omega",
        "groupoid.quotient.volume",
        "groupoid.quotient.closed_eta",
        "groupoid.quotient.closed_omega",
        "group.defining.eta",
        "group.defining.omega",
        "cross_path",
    ] {
        let e = out.checks.find(id).ok_or(format!("no {id}"))?;
        ensure(e.status == Status::Proved || e.status == Status::Numeric, format!("{id} is {:?}", e.status))?;
    }
    let report = gallery::find("rotation").map_err(err)?.run(&PolicyDoc::default()).map_err(err)?;
    ensure(report.passed(), "rotation gallery entry fails")?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!("η^ξ = {}, ω^ξ = {}, R^ξ = {reeb}; routes agree; {:.2} s", r.eta, r.omega, t.as_secs_f64()))
}

fn uniqueness() -> Outcome {
    let p = policy();
    let f = fixtures::rotation(&p).map_err(err)?;
    let r = verify_albert_reduction(&f.spec, &f.cm, &f.geometry, &p)
        .map_err(err)?
        .reduced
        .ok_or("no reduced structure")?;
    let q = &f.geometry.quotient;
    let shipped: [&[(&str, &str)]; 5] = [
        &[("x2", "1")],
        &[("y2", "1")],
        &[("z", "1")],
        &[("y2", "x2")],
        &[("x2", "z^2"), ("z", "y2")],
    ];
    for terms in shipped {
        let alpha = DifferentialForm::parse(q, 1, terms).map_err(err)?;
        let eta = r.eta.add(&alpha).map_err(err)?;
        let c = check_candidate(&f.geometry, &f.cm, &r, &eta, &r.omega, &p).map_err(err)?;
        let e = c.find("eta").ok_or("no defining entry")?;
        ensure(e.status == Status::Failed && e.witness.is_some(), format!("perturbation {alpha} not refuted"))?;
    }
    let mut rng = testdata::rng(p.seed());
    for i in 0..20 {
        let alpha = testdata::random_form(&mut rng, q, i % 4);
        let agg = f.geometry.section_round_trip(&alpha, &p).map_err(err)?;
        ensure(agg.is_zero_class(), format!("σ*p*α ≠ α for {alpha}"))?;
    }
    Ok("5 perturbations of η^ξ refuted at the defining stage; σ*p*α = α on 20 random forms".into())
}

fn groupoid_structure(g: &GroupoidPresentation, p: &SamplePolicy) -> Option<CosymplecticStructure> {
    fixtures::groupoid_structure(g, p).ok()
}

fn fixtures_section() -> Outcome {
    let p = policy();
    let none = PolicyDoc::default();
    let (mut cosymplectic, mut refuted) = (0, 0);
    for entry in gallery::entries() {
        let m = entry.manifest(&none).map_err(err)?;
        let groupoids = m
            .groupoids
            .values()
            .map(|e| e.groupoid.clone())
            .chain(m.momentum.values().map(|e| e.extension.groupoid.clone()));
        for g in groupoids {
            let Some(c) = groupoid_structure(&g, &p) else { continue };
            let multiplicative = check_multiplicative(&g, &p).map_err(err)?.checks().passed();
            let a = self_action(&g).map_err(err)?;
            let passed = check_cosymplectic_action(&a, &c, &c, &p).map_err(err)?.passed();
            ensure(passed == multiplicative, format!("{}: self action {passed}, multiplicative {multiplicative}", g.name))?;
            if passed {
                cosymplectic += 1;
            } else {
                refuted += 1;
            }
        }
    }
    let ok = gallery::find("reeb_flow").map_err(err)?.run(&none).map_err(err)?;
    ensure(ok.passed(), "reeb_flow fails")?;
    ensure(find(&ok, "momentum.rotation.flow.flow_equation")?.status == Status::Proved, "flow equation")?;
    let bad = gallery::find("reeb_flow_double").map_err(err)?.run(&none).map_err(err)?;
    let failed: Vec<&str> = bad.entries.iter().filter(|e| e.status == Status::Failed).map(|e| e.id.as_str()).collect();
    ensure(
        failed == ["momentum.rotation.flow.flow_equation"],
        format!("doubled speed fails at {failed:?}"),
    )?;
    Ok(format!(
        "self action cosymplectic on {cosymplectic} groupoids, refuted on {refuted} non-multiplicative ones; doubled flow fails only at flow_equation"
    ))
}

fn morita() -> Outcome {
    let none = PolicyDoc::default();
    let r = gallery::find("self_bimodule").map_err(err)?.run(&none).map_err(err)?;
    if let Some(e) = r.entries.iter().find(|e| !e.passed()) {
        return Err(format!("{}: {}", e.id, e.detail));
    }
    let base = "morita.TR1xR.bimodule";
    for id in [
        "biaction_fibered",
        "commutation",
        "orbit_rho",
        "orbit_sigma",
        "induced_rho.round_trip",
        "induced_sigma.round_trip",
        "leaf.commutation",
        "leaf.reeb_rho",
        "leaf.reeb_sigma",
    ] {
        let e = find(&r, &format!("{base}.{id}"))?;
        ensure(e.status == Status::Proved, format!("{id} is {:?}", e.status))?;
    }
    let proved = r.entries.iter().filter(|e| e.status == Status::Proved).count();
    let pt = gallery::find("morita_point").map_err(err)?.run(&none).map_err(err)?;
    ensure(pt.passed(), "point bimodule fails")?;
    Ok(format!("{proved} proved conditions; leaf dρ(R) = dσ(R) = 0"))
}

fn determinism() -> Outcome {
    let none = PolicyDoc::default();
    let start = Instant::now();
    let first: Vec<Report> = gallery::entries().iter().map(|e| e.run(&none)).collect::<Result<_, _>>().map_err(err)?;
    let t = start.elapsed();
    let mut consumed = 0;
    for (e, r) in gallery::entries().iter().zip(&first) {
        let again = e.run(&none).map_err(err)?;
        ensure(r.to_json(false) == again.to_json(false), format!("{}: reports differ", e.name))?;
        ensure(e.mismatches(r).is_empty(), format!("{:?}", e.mismatches(r)))?;
        for entry in r.entries.iter().filter(|x| x.passed()) {
            if entry.status == Status::Attested {
                ensure(!entry.attestations.is_empty(), format!("{} attested without a name", entry.id))?;
            }
            for a in &entry.attestations {
                let listed = r
                    .attestations
                    .iter()
                    .any(|l| &l.attestation == a && l.consumed_by.contains(&entry.id));
                ensure(listed, format!("{}: {a} missing from the ledger", entry.id))?;
                consumed += 1;
            }
        }
    }
    ensure(t < Duration::from_secs(60), format!("gallery took {t:?}"))?;
    Ok(format!(
        "{} entries byte-identical; {consumed} attestation uses in ledgers; gallery {:.2} s",
        first.len(),
        t.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exterior calculus laws", exterior_laws),
        ("cosymplectic calculus suite", calculus),
        ("product volume", product_volume),
        ("multiplicative forms vs graph LL", multiplicative_vs_graph),
        ("flagship reduction", flagship),
        ("uniqueness and section round trip", uniqueness),
        ("self actions and Reeb flow extension", fixtures_section),
        ("Morita reflexivity", morita),
        ("determinism and attestation ledger", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
