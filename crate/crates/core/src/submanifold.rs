//! Embedded submanifolds: LL (Lagrangian–Legendrian) submanifolds and
//! symplectic leaves.

use crate::cosymplectic::check_symplectic;
use crate::error::{Error, Result};
use crate::exterior::{ChartRef, DifferentialForm, SmoothMap};
use crate::report::{Checks, Status};
use crate::residual::rank_entry;
use crate::symbolic::SamplePolicy;

#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    pub name: String,
    pub map: SmoothMap,
    /// Injectivity is global and therefore attested, never checked.
    pub attested_injective: bool,
}

impl EmbeddingSpec {
    pub fn new(name: &str, map: SmoothMap, attested_injective: bool) -> Self {
        EmbeddingSpec {
            name: name.to_string(),
            map,
            attested_injective,
        }
    }

    pub fn source(&self) -> &ChartRef {
        self.map.source()
    }

    pub fn ambient(&self) -> &ChartRef {
        self.map.target()
    }

    /// rank dι = dim N at sample points, and the injectivity attestation.
    pub fn immersion_checks(&self, policy: &SamplePolicy) -> Checks {
        let mut c = Checks::new();
        c.push(rank_entry(
            "immersion",
            "rank dι = dim N",
            &self.map.jacobian(),
            self.source(),
            self.source().dim(),
            policy,
        ));
        c.attest(
            "injective",
            "ι is injective",
            &format!("injective:{}", self.name),
            self.attested_injective,
        );
        c
    }
}

fn require_ambient(e: &EmbeddingSpec, eta: &DifferentialForm, omega: &DifferentialForm) -> Result<()> {
    e.ambient().require_same(eta.chart())?;
    e.ambient().require_same(omega.chart())?;
    Ok(())
}

/// ι*η = 0, ι*ω = 0 and dim M = 2 dim N + 1.
pub fn check_ll_submanifold(
    e: &EmbeddingSpec,
    eta: &DifferentialForm,
    omega: &DifferentialForm,
    policy: &SamplePolicy,
) -> Result<Checks> {
    require_ambient(e, eta, omega)?;
    let mut c = Checks::new();
    c.verdict("legendrian", "ι*η = 0", &eta.pullback(&e.map)?.zero_test(policy));
    c.verdict("lagrangian", "ι*ω = 0", &omega.pullback(&e.map)?.zero_test(policy));
    let (m, n) = (e.ambient().dim(), e.source().dim());
    let anchor = "dim M = 2 dim N + 1";
    if m == 2 * n + 1 {
        c.pass("dimension", anchor, Status::Proved, format!("{m} = 2·{n} + 1"));
    } else {
        c.fail("dimension", anchor, format!("{m} ≠ 2·{n} + 1"));
    }
    c.extend("", e.immersion_checks(policy));
    Ok(c)
}

/// A symplectic leaf S ⊂ M given by an embedding and its form ω_S.
#[derive(Clone, Debug)]
pub struct LeafSpec {
    pub name: String,
    pub embedding: EmbeddingSpec,
    pub omega_leaf: DifferentialForm,
}

impl LeafSpec {
    pub fn chart(&self) -> &ChartRef {
        self.embedding.source()
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega_leaf.chart().as_ref() != self.chart().as_ref() || self.omega_leaf.degree() != 2 {
            return Err(Error::invalid(&self.name, "leaf form must be a 2-form on the leaf chart"));
        }
        Ok(())
    }
}

/// ι*η = 0, ι*ω = ω_S, ω_S symplectic, ι an immersion.
pub fn check_leaf(
    leaf: &LeafSpec,
    eta: &DifferentialForm,
    omega: &DifferentialForm,
    policy: &SamplePolicy,
) -> Result<Checks> {
    leaf.validate()?;
    require_ambient(&leaf.embedding, eta, omega)?;
    let iota = &leaf.embedding.map;
    let mut c = Checks::new();
    c.verdict("leaf_kernel", "ι*η = 0", &eta.pullback(iota)?.zero_test(policy));
    c.verdict(
        "leaf_form",
        "ι*ω = ω_S",
        &omega.pullback(iota)?.sub(&leaf.omega_leaf)?.zero_test(policy),
    );
    c.extend("leaf_symplectic", check_symplectic(&leaf.omega_leaf, policy)?.checks());
    c.extend("", leaf.embedding.immersion_checks(policy));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Chart;

    fn std3() -> (ChartRef, DifferentialForm, DifferentialForm) {
        let m = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let eta = DifferentialForm::parse(&m, 1, &[("z", "1")]).unwrap();
        let omega = DifferentialForm::parse(&m, 2, &[("x y", "1")]).unwrap();
        (m, eta, omega)
    }

    #[test]
    fn axis_lines() {
        let (m, eta, omega) = std3();
        let n = Chart::new("N", &["u"]).unwrap();
        let p = SamplePolicy::default();
        let x_axis = EmbeddingSpec::new("x", SmoothMap::parse(&n, &m, &[("x", "u"), ("y", "0"), ("z", "0")]).unwrap(), true);
        assert!(check_ll_submanifold(&x_axis, &eta, &omega, &p).unwrap().passed());
        let z_axis = EmbeddingSpec::new("z", SmoothMap::parse(&n, &m, &[("x", "0"), ("y", "0"), ("z", "u")]).unwrap(), true);
        let c = check_ll_submanifold(&z_axis, &eta, &omega, &p).unwrap();
        assert_eq!(c.find("legendrian").unwrap().status, Status::Failed);
        let pt = Chart::new("pt", &[] as &[&str]).unwrap();
        let point = EmbeddingSpec::new("pt", SmoothMap::parse(&pt, &m, &[("x", "0"), ("y", "0"), ("z", "0")]).unwrap(), true);
        let c = check_ll_submanifold(&point, &eta, &omega, &p).unwrap();
        assert_eq!(c.find("dimension").unwrap().status, Status::Failed);
        assert_eq!(c.find("legendrian").unwrap().status, Status::Proved);
    }

    #[test]
    fn horizontal_plane_is_a_leaf() {
        let (m, eta, omega) = std3();
        let s = Chart::new("S", &["a", "b"]).unwrap();
        let iota = SmoothMap::parse(&s, &m, &[("x", "a"), ("y", "b"), ("z", "1")]).unwrap();
        let leaf = LeafSpec {
            name: "z1".into(),
            embedding: EmbeddingSpec::new("z1", iota, true),
            omega_leaf: DifferentialForm::parse(&s, 2, &[("a b", "1")]).unwrap(),
        };
        let c = check_leaf(&leaf, &eta, &omega, &SamplePolicy::default()).unwrap();
        assert!(c.passed(), "{:?}", c.first_failure());
        let scaled = LeafSpec {
            omega_leaf: leaf.omega_leaf.scale(&crate::symbolic::Expr::int(2)),
            ..leaf
        };
        let c = check_leaf(&scaled, &eta, &omega, &SamplePolicy::default()).unwrap();
        assert_eq!(c.find("leaf_form").unwrap().status, Status::Failed);
    }
}
