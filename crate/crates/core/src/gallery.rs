//! Named worked examples, each exported as a manifest with the outcome its
//! checks are expected to produce.

use crate::action::self_action;
use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::fixtures;
use crate::groupoid::GroupoidPresentation;
use crate::manifest::{self, Exporter, Manifest, ManifestDoc, PolicyDoc, Route, Selection};
use crate::morita::{self_bimodule, self_bimodule_leaf};
use crate::report::{Report, Status};
use crate::symbolic::{parse, Expr, SamplePolicy};

use Selection::*;
use Status::*;

type Build = fn(&SamplePolicy) -> Result<ManifestDoc>;

/// A gallery example: how to build its manifest, which check families to run
/// and what the report must contain.
#[derive(Clone, Copy)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub selection: &'static [Selection],
    pub expect_pass: bool,
    /// Entries whose status is pinned.
    pub expected: &'static [(&'static str, Status)],
    build: Build,
}

impl std::fmt::Debug for GalleryEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GalleryEntry").field("name", &self.name).finish_non_exhaustive()
    }
}

impl GalleryEntry {
    pub fn build(&self) -> Result<ManifestDoc> {
        (self.build)(&SamplePolicy::default())
    }

    /// Builds, serializes and re-reads the manifest, then resolves it.
    pub fn manifest(&self, overrides: &PolicyDoc) -> Result<Manifest> {
        manifest::load_str(&self.build()?.to_json(), overrides)
    }

    pub fn run(&self, overrides: &PolicyDoc) -> Result<Report> {
        self.run_doc(self.build()?, overrides)
    }

    pub fn run_doc(&self, doc: ManifestDoc, overrides: &PolicyDoc) -> Result<Report> {
        let policy = manifest::effective_policy(&doc, overrides)?;
        let m = Manifest::resolve(doc, &policy)?;
        Ok(manifest::run_checks(&m, self.selection, &policy))
    }

    /// Mismatches between a report and the pinned expectations.
    pub fn mismatches(&self, report: &Report) -> Vec<String> {
        let mut out = Vec::new();
        if report.passed() != self.expect_pass {
            let first = report.entries.iter().find(|e| !e.passed()).map(|e| e.id.as_str());
            out.push(format!(
                "{}: expected overall {}, got {} (first failure {:?})",
                self.name,
                if self.expect_pass { "pass" } else { "fail" },
                if report.passed() { "pass" } else { "fail" },
                first
            ));
        }
        for (id, status) in self.expected {
            match report.entry(id) {
                Some(e) if e.status == *status => {}
                Some(e) => out.push(format!("{}: {id} is {:?}, expected {status:?}", self.name, e.status)),
                None => out.push(format!("{}: no entry {id}", self.name)),
            }
        }
        out
    }
}

pub fn entries() -> &'static [GalleryEntry] {
    GALLERY
}

pub fn find(name: &str) -> Result<&'static GalleryEntry> {
    GALLERY
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Unresolved {
            kind: "gallery entry".into(),
            name: name.into(),
        })
}

fn e(s: &str) -> Expr {
    parse(s).expect("gallery expression parses")
}

fn std3(p: &SamplePolicy) -> Result<ManifestDoc> {
    let mut x = Exporter::new();
    x.structure(&fixtures::std3(p)?)?;
    Ok(x.finish())
}

fn std5(p: &SamplePolicy) -> Result<ManifestDoc> {
    let mut x = Exporter::new();
    x.structure(&fixtures::std5(p)?)?;
    Ok(x.finish())
}

fn skew3(p: &SamplePolicy) -> Result<ManifestDoc> {
    let mut x = Exporter::new();
    x.structure(&fixtures::skew3(p)?)?;
    Ok(x.finish())
}

fn degenerate3(p: &SamplePolicy) -> Result<ManifestDoc> {
    let c = fixtures::std3(p)?;
    let omega = DifferentialForm::parse(c.chart(), 2, &[("x y", "x")])?;
    let mut x = Exporter::new();
    x.forms("degenerate3", c.eta(), &omega, false)?;
    Ok(x.finish())
}

fn product(p: &SamplePolicy) -> Result<ManifestDoc> {
    let s = fixtures::std3(p)?;
    let mut x = Exporter::new();
    x.product("std3xstd3", &s, &s)?;
    Ok(x.finish())
}

fn groupoid_doc(g: &GroupoidPresentation) -> Result<ManifestDoc> {
    let mut x = Exporter::new();
    x.groupoid(g)?;
    Ok(x.finish())
}

fn extension_tr1(p: &SamplePolicy) -> Result<ManifestDoc> {
    groupoid_doc(&fixtures::extension(1, p)?.0)
}

fn extension_tr2(p: &SamplePolicy) -> Result<ManifestDoc> {
    groupoid_doc(&fixtures::extension(2, p)?.0)
}

fn add_omega(g: &mut GroupoidPresentation, terms: &[(&str, &str)]) -> Result<()> {
    let extra = DifferentialForm::parse(&g.arrows, 2, terms)?;
    let omega = g.omega.as_ref().ok_or_else(|| Error::Missing("ω".into()))?;
    g.omega = Some(omega.add(&extra)?);
    Ok(())
}

fn mutant_omega_dg_dt(p: &SamplePolicy) -> Result<ManifestDoc> {
    let (mut g, _) = fixtures::extension(1, p)?;
    add_omega(&mut g, &[("g t", "1")])?;
    groupoid_doc(&g)
}

fn mutant_eta_xi_dxi(p: &SamplePolicy) -> Result<ManifestDoc> {
    let (mut g, _) = fixtures::extension(1, p)?;
    g.eta = Some(DifferentialForm::parse(&g.arrows, 1, &[("t", "1"), ("xi", "xi")])?);
    groupoid_doc(&g)
}

fn mutant_omega_g_dg_dt(p: &SamplePolicy) -> Result<ManifestDoc> {
    let (mut g, _) = fixtures::extension(1, p)?;
    add_omega(&mut g, &[("g t", "g")])?;
    groupoid_doc(&g)
}

/// Multiplication twisted by the cocycle g₁g₂ on the t-coordinate.
fn mutant_cocycle(p: &SamplePolicy) -> Result<ManifestDoc> {
    let (mut g, _) = fixtures::extension(1, p)?;
    g.pairs.m = g.pairs.m.with_component("t", e("t1 + t2 + g1.g*g2.g"))?;
    g.inv = g.inv.with_component("t", e("-t + g^2"))?;
    groupoid_doc(&g)
}

fn mutant_tr2_omega(p: &SamplePolicy) -> Result<ManifestDoc> {
    let (mut g, _) = fixtures::extension(2, p)?;
    add_omega(&mut g, &[("g1 t", "1")])?;
    groupoid_doc(&g)
}

fn self_action_doc(p: &SamplePolicy) -> Result<ManifestDoc> {
    let (g, _) = fixtures::extension(1, p)?;
    let mut x = Exporter::new();
    let name = x.groupoid(&g)?;
    x.action(&format!("{name}.self"), &self_action(&g)?, &name, false, None, Some(&name), None)?;
    Ok(x.finish())
}

fn translation_action(p: &SamplePolicy) -> Result<ManifestDoc> {
    let (cm, spec) = fixtures::translation_flow(p)?;
    let mut x = Exporter::new();
    let s = x.structure(&cm)?;
    let mname = x.momentum(&spec, &s)?;
    x.reduction("translation", &Route::Momentum(mname), &fixtures::identity_geometry(&cm)?, None, &[])?;
    Ok(x.finish())
}

fn reeb_flow_with(speed: &str, p: &SamplePolicy) -> Result<ManifestDoc> {
    let cm = fixtures::std5(p)?;
    let spec = fixtures::rotation_with_speed(speed, p)?;
    let mut x = Exporter::new();
    let s = x.structure(&cm)?;
    x.momentum(&spec, &s)?;
    Ok(x.finish())
}

fn reeb_flow(p: &SamplePolicy) -> Result<ManifestDoc> {
    reeb_flow_with("1", p)
}

fn reeb_flow_double(p: &SamplePolicy) -> Result<ManifestDoc> {
    reeb_flow_with("2", p)
}

/// Both reduction routes for the rotation, with the {z = 0} leaf and the
/// expected reduced structure as a candidate.
fn rotation(p: &SamplePolicy) -> Result<ManifestDoc> {
    let f = fixtures::rotation(p)?;
    let ext = crate::action::reeb_flow_extension(&f.spec, p)?;
    let mut x = Exporter::new();
    let s = x.structure(&f.cm)?;
    let mname = x.momentum(&f.spec, &s)?;
    let gname = x.groupoid(&ext.groupoid)?;
    let aname = x.action(
        "rotation.extension",
        &ext,
        &gname,
        false,
        None,
        Some(&s),
        f.leaf.restriction.as_ref(),
    )?;
    let q = &f.geometry.quotient;
    let candidate = (
        DifferentialForm::parse(q, 1, &[("z", "1")])?,
        DifferentialForm::parse(q, 2, &[("x2 y2", "1")])?,
    );
    let candidates = [candidate];
    x.reduction("albert", &Route::Momentum(mname), &f.geometry, Some(&f.leaf), &candidates)?;
    x.reduction("groupoid", &Route::Action(aname), &f.geometry, Some(&f.leaf), &candidates)?;
    Ok(x.finish())
}

/// The rotation reduced along a level set that the Reeb field leaves.
fn rotation_tilted(p: &SamplePolicy) -> Result<ManifestDoc> {
    let f = fixtures::rotation(p)?;
    let mut x = Exporter::new();
    let s = x.structure(&f.cm)?;
    let mname = x.momentum(&f.spec, &s)?;
    x.reduction("tilted", &Route::Momentum(mname), &fixtures::rotation_tilted_level(p)?, None, &[])?;
    Ok(x.finish())
}

fn bimodule(g: &GroupoidPresentation, p: &SamplePolicy, with_leaf: bool) -> Result<ManifestDoc> {
    let c = fixtures::groupoid_structure(g, p)?;
    let m = self_bimodule(g, &c)?;
    let leaf = if with_leaf { Some(self_bimodule_leaf(g, &m)?) } else { None };
    let mut x = Exporter::new();
    let gname = x.groupoid(g)?;
    let left = x.action(
        &format!("{gname}.left"),
        &m.left,
        &gname,
        false,
        None,
        Some(&gname),
        leaf.as_ref().map(|l| &l.left),
    )?;
    let right = x.action(
        &format!("{gname}.right"),
        &m.right,
        &gname,
        true,
        Some(&gname),
        Some(&gname),
        leaf.as_ref().map(|l| &l.right),
    )?;
    x.morita(&m, &left, &right, &gname, leaf.as_ref())?;
    Ok(x.finish())
}

fn self_bimodule_doc(p: &SamplePolicy) -> Result<ManifestDoc> {
    bimodule(&fixtures::extension(1, p)?.0, p, true)
}

fn morita_point(p: &SamplePolicy) -> Result<ManifestDoc> {
    bimodule(&fixtures::point_groupoid(p)?.0, p, false)
}

static GALLERY: &[GalleryEntry] = &[
    GalleryEntry {
        name: "std3",
        description: "ℝ³ with η = dz, ω = dx∧dy",
        selection: &[Structure],
        expect_pass: true,
        expected: &[("structure.std3.validation.volume", Proved)],
        build: std3,
    },
    GalleryEntry {
        name: "std5",
        description: "ℝ⁵ with η = dz, ω = dx₁∧dy₁ + dx₂∧dy₂",
        selection: &[Structure],
        expect_pass: true,
        expected: &[("structure.std5.validation.volume", Proved)],
        build: std5,
    },
    GalleryEntry {
        name: "skew3",
        description: "ℝ³ with η = dz, ω = dx∧dy + dx∧dz",
        selection: &[Structure],
        expect_pass: true,
        expected: &[("structure.skew3.validation.volume", Proved)],
        build: skew3,
    },
    GalleryEntry {
        name: "degenerate3",
        description: "ℝ³ with η = dz, ω = x dx∧dy, degenerate along x = 0",
        selection: &[Structure],
        expect_pass: false,
        expected: &[("structure.degenerate3.validation.volume", Failed)],
        build: degenerate3,
    },
    GalleryEntry {
        name: "product",
        description: "std3 × std3 × ℝ",
        selection: &[Structure],
        expect_pass: true,
        expected: &[("product.std3xstd3.volume_ratio", Info)],
        build: product,
    },
    GalleryEntry {
        name: "extension_tr1",
        description: "trivial central extension of T*ℝ",
        selection: &[Groupoid],
        expect_pass: true,
        expected: &[
            ("groupoid.TR1xR.multiplicative.multiplicative_eta", Proved),
            ("groupoid.TR1xR.multiplicative.multiplicative_omega", Proved),
            ("groupoid.TR1xR.graph.dimension_identity", Proved),
            ("groupoid.TR1xR.graph.legendrian", Proved),
            ("groupoid.TR1xR.graph.lagrangian", Proved),
        ],
        build: extension_tr1,
    },
    GalleryEntry {
        name: "extension_tr2",
        description: "trivial central extension of T*ℝ²",
        selection: &[Groupoid],
        expect_pass: true,
        expected: &[
            ("groupoid.TR2xR.multiplicative.multiplicative_eta", Proved),
            ("groupoid.TR2xR.multiplicative.multiplicative_omega", Proved),
            ("groupoid.TR2xR.graph.dimension_identity", Proved),
            ("groupoid.TR2xR.graph.legendrian", Proved),
            ("groupoid.TR2xR.graph.lagrangian", Proved),
        ],
        build: extension_tr2,
    },
    GalleryEntry {
        name: "mutant_omega_dg_dt",
        description: "extension of T*ℝ with ω + dg∧dt",
        selection: &[Groupoid],
        expect_pass: false,
        expected: &[
            ("groupoid.TR1xR.multiplicative.multiplicative_omega", Failed),
            ("groupoid.TR1xR.graph.lagrangian", Failed),
        ],
        build: mutant_omega_dg_dt,
    },
    GalleryEntry {
        name: "mutant_eta_xi_dxi",
        description: "extension of T*ℝ with η = dt + ξ dξ",
        selection: &[Groupoid],
        expect_pass: false,
        expected: &[
            ("groupoid.TR1xR.multiplicative.multiplicative_eta", Failed),
            ("groupoid.TR1xR.graph.legendrian", Failed),
        ],
        build: mutant_eta_xi_dxi,
    },
    GalleryEntry {
        name: "mutant_omega_g_dg_dt",
        description: "extension of T*ℝ with ω + g dg∧dt",
        selection: &[Groupoid],
        expect_pass: false,
        expected: &[
            ("groupoid.TR1xR.multiplicative.multiplicative_omega", Failed),
            ("groupoid.TR1xR.graph.lagrangian", Failed),
        ],
        build: mutant_omega_g_dg_dt,
    },
    GalleryEntry {
        name: "mutant_cocycle",
        description: "extension of T*ℝ with t-multiplication twisted by g₁g₂",
        selection: &[Groupoid],
        expect_pass: false,
        expected: &[
            ("groupoid.TR1xR.multiplicative.multiplicative_eta", Failed),
            ("groupoid.TR1xR.graph.legendrian", Failed),
        ],
        build: mutant_cocycle,
    },
    GalleryEntry {
        name: "mutant_tr2_omega",
        description: "extension of T*ℝ² with ω + dg₁∧dt",
        selection: &[Groupoid],
        expect_pass: false,
        expected: &[
            ("groupoid.TR2xR.multiplicative.multiplicative_omega", Failed),
            ("groupoid.TR2xR.graph.lagrangian", Failed),
        ],
        build: mutant_tr2_omega,
    },
    GalleryEntry {
        name: "self_action",
        description: "the extension of T*ℝ acting on its arrows by multiplication",
        selection: &[Groupoid, Action],
        expect_pass: true,
        expected: &[("action.TR1xR.self.cosymplectic.anchor_reeb", Proved)],
        build: self_action_doc,
    },
    GalleryEntry {
        name: "translation_action",
        description: "the trivial group on std3 with Reeb flow z + τ, reduced by the identity",
        selection: &[Action, Reduction],
        expect_pass: true,
        expected: &[("momentum.translation.flow.flow_equation", Proved)],
        build: translation_action,
    },
    GalleryEntry {
        name: "reeb_flow",
        description: "the rotation of std5 extended by its Reeb flow",
        selection: &[Action],
        expect_pass: true,
        expected: &[
            ("momentum.rotation.flow.flow_equation", Proved),
            ("momentum.rotation.extension.anchor_reeb", Proved),
        ],
        build: reeb_flow,
    },
    GalleryEntry {
        name: "reeb_flow_double",
        description: "the rotation of std5 with the Reeb flow run at twice its speed",
        selection: &[Action],
        expect_pass: false,
        expected: &[
            ("momentum.rotation.flow.flow_initial", Proved),
            ("momentum.rotation.flow.flow_equation", Failed),
            ("momentum.rotation.extension", Skipped),
        ],
        build: reeb_flow_double,
    },
    GalleryEntry {
        name: "rotation",
        description: "std5 reduced by the circle rotating (x₁, y₁) at level ξ = 1/2",
        selection: &[Action, Reduction],
        expect_pass: true,
        expected: &[
            ("reduction.albert.candidate.0.eta", Proved),
            ("reduction.albert.candidate.0.omega", Proved),
            ("reduction.groupoid.candidate.0.eta", Proved),
            ("reduction.groupoid.candidate.0.omega", Proved),
        ],
        build: rotation,
    },
    GalleryEntry {
        name: "rotation_tilted",
        description: "the rotation reduced along {μ + z = 1/2}, which is not a level set of μ",
        selection: &[Reduction],
        expect_pass: false,
        expected: &[("reduction.tilted.group.manifest.level", Failed)],
        build: rotation_tilted,
    },
    GalleryEntry {
        name: "self_bimodule",
        description: "the extension of T*ℝ as a bimodule over itself, with its {t = 0} leaf",
        selection: &[Morita],
        expect_pass: true,
        expected: &[("morita.TR1xR.bimodule.commutation", Proved)],
        build: self_bimodule_doc,
    },
    GalleryEntry {
        name: "morita_point",
        description: "ℝ ⇉ pt as a bimodule over itself",
        selection: &[Morita],
        expect_pass: true,
        expected: &[("morita.ptxR.bimodule.commutation", Proved)],
        build: morita_point,
    },
];
