//! Cosymplectic structures: validation, Reeb field, ♭/♯, Hamiltonian
//! fields, the induced Poisson bivector, and products.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{Chart, ChartRef, DifferentialForm, SmoothMap, VectorField};
use crate::report::{Checks, Entry, Status, Witness};
use crate::symbolic::linalg::{self, Matrix};
use crate::symbolic::{Aggregate, Expr, Point, SamplePolicy};

/// Outcome of the nonvanishing test for the top coefficient of η∧ωⁿ.
#[derive(Clone, Debug, PartialEq)]
pub enum VolumeStatus {
    /// Nonzero constant: nonvanishing everywhere.
    Constant(f64),
    /// Nonvanishing at every sample; `witness` is the largest observed value.
    Sampled { witness: Point, value: f64, min_abs: f64 },
    IdenticallyZero,
    /// A sample, or a root located between samples of opposite sign.
    Vanishes { point: Point, value: f64 },
    /// No sample point avoided the poles of the coefficient.
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct VolumeCheck {
    pub coefficient: Expr,
    pub status: VolumeStatus,
}

impl VolumeCheck {
    pub fn passed(&self) -> bool {
        matches!(self.status, VolumeStatus::Constant(_) | VolumeStatus::Sampled { .. })
    }

    pub fn entry(&self, id: &str, anchor: &str, attestation: Option<&str>) -> Entry {
        match &self.status {
            VolumeStatus::Constant(c) => Entry::new(id, anchor, Status::Proved, format!("constant top coefficient {c}")),
            VolumeStatus::Sampled { value, min_abs, .. } => {
                let e = Entry::new(
                    id,
                    anchor,
                    Status::Numeric,
                    format!(
                        "top coefficient {} nonvanishing at all samples (min |c| = {min_abs:.3e}, max {value:.3e})",
                        self.coefficient
                    ),
                );
                match attestation {
                    Some(a) => e.with_attestation(a),
                    None => e,
                }
            }
            VolumeStatus::IdenticallyZero => {
                Entry::new(id, anchor, Status::Failed, "top coefficient is identically zero")
            }
            VolumeStatus::Vanishes { point, value } => Entry {
                witness: Some(Witness {
                    component: Some("top coefficient".into()),
                    point: point.to_pairs(),
                    value: *value,
                }),
                ..Entry::new(
                    id,
                    anchor,
                    Status::Failed,
                    format!("top coefficient {} vanishes", self.coefficient),
                )
            },
            VolumeStatus::Undetermined => {
                Entry::new(id, anchor, Status::Failed, "no pole-free sample point for the top coefficient")
            }
        }
    }
}

fn top_coefficient(form: &DifferentialForm) -> Expr {
    let n = form.chart().dim();
    form.coefficient(&(0..n).collect::<Vec<_>>())
}

/// Nonvanishing test of a scalar function on the chart.
pub fn nonvanishing(c: &Expr, vars: &[Arc<str>], policy: &SamplePolicy) -> VolumeStatus {
    if c.is_zero() {
        return VolumeStatus::IdenticallyZero;
    }
    if let Some(q) = c.as_rational() {
        return VolumeStatus::Constant(crate::symbolic::expr::to_f64(&q));
    }
    let mut sampler = policy.sampler(vars);
    let mut samples: Vec<(Point, f64)> = Vec::new();
    for _ in 0..policy.samples() * 4 {
        if samples.len() >= policy.samples() {
            break;
        }
        let p = sampler.next_point();
        let res = c.eval_detailed(&p.lookup());
        if let Ok(ev) = res {
            if ev.near_pole {
                continue;
            }
            if ev.value.abs() <= policy.tolerance() {
                return VolumeStatus::Vanishes { point: p, value: ev.value };
            }
            samples.push((p, ev.value));
        }
    }
    if samples.is_empty() {
        return VolumeStatus::Undetermined;
    }
    // A continuous coefficient that changes sign must vanish in between.
    let continuous = c.denom().is_constant() && !c.to_string().contains("sqrt");
    if continuous {
        if let Some(neg) = samples.iter().find(|(_, v)| *v < 0.0) {
            if let Some(pos) = samples.iter().find(|(_, v)| *v > 0.0) {
                return bisect_root(c, &neg.0, &pos.0, policy);
            }
        }
    }
    let min_abs = samples.iter().map(|(_, v)| v.abs()).fold(f64::INFINITY, f64::min);
    let (witness, value) = samples
        .into_iter()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("nonempty");
    VolumeStatus::Sampled { witness, value, min_abs }
}

fn bisect_root(c: &Expr, neg: &Point, pos: &Point, policy: &SamplePolicy) -> VolumeStatus {
    let mut lo = neg.values.clone();
    let mut hi = pos.values.clone();
    let at = |vals: &[f64]| Point {
        vars: neg.vars.clone(),
        values: vals.to_vec(),
    };
    let mut mid_point = at(&lo);
    let mut mid_value = f64::NAN;
    for _ in 0..200 {
        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        mid_point = at(&mid);
        mid_value = c.eval(&mid_point.lookup()).unwrap_or(f64::NAN);
        if !mid_value.is_finite() || mid_value.abs() <= policy.tolerance() {
            break;
        }
        if mid_value < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    VolumeStatus::Vanishes {
        point: mid_point,
        value: mid_value,
    }
}

#[derive(Clone, Debug)]
pub struct CosymplecticCheck {
    pub n: usize,
    pub volume: VolumeCheck,
    pub closed_eta: Aggregate,
    pub closed_omega: Aggregate,
}

impl CosymplecticCheck {
    pub fn passed(&self) -> bool {
        self.volume.passed() && self.closed_eta.is_zero_class() && self.closed_omega.is_zero_class()
    }

    pub fn checks(&self, attestation: Option<&str>) -> Checks {
        let mut c = Checks::new();
        c.push(self.volume.entry("volume", "η∧ωⁿ nonvanishing", attestation));
        c.verdict("closed_eta", "dη = 0", &self.closed_eta);
        c.verdict("closed_omega", "dω = 0", &self.closed_omega);
        c
    }

    pub fn failure_summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.volume.passed() {
            parts.push(format!("volume {:?}", self.volume.status));
        }
        if !self.closed_eta.is_zero_class() {
            parts.push("dη ≠ 0".to_string());
        }
        if !self.closed_omega.is_zero_class() {
            parts.push("dω ≠ 0".to_string());
        }
        parts.join("; ")
    }
}

fn odd_dimension(eta: &DifferentialForm, omega: &DifferentialForm) -> Result<usize> {
    eta.chart().require_same(omega.chart())?;
    if eta.degree() != 1 || omega.degree() != 2 {
        return Err(Error::invalid(
            eta.chart().name(),
            format!("expected a 1-form and a 2-form, got degrees {} and {}", eta.degree(), omega.degree()),
        ));
    }
    let dim = eta.chart().dim();
    if dim.is_multiple_of(2) {
        return Err(Error::invalid(eta.chart().name(), format!("dimension {dim} is even")));
    }
    Ok((dim - 1) / 2)
}

/// Nondegeneracy only: the top coefficient of η∧ωⁿ.
pub fn check_almost(eta: &DifferentialForm, omega: &DifferentialForm, policy: &SamplePolicy) -> Result<VolumeCheck> {
    let n = odd_dimension(eta, omega)?;
    let vol = eta.wedge(&omega.power(n)?)?;
    let coefficient = top_coefficient(&vol);
    let status = nonvanishing(&coefficient, eta.chart().coords(), policy);
    Ok(VolumeCheck { coefficient, status })
}

pub fn check_cosymplectic(
    eta: &DifferentialForm,
    omega: &DifferentialForm,
    policy: &SamplePolicy,
) -> Result<CosymplecticCheck> {
    let n = odd_dimension(eta, omega)?;
    Ok(CosymplecticCheck {
        n,
        volume: check_almost(eta, omega, policy)?,
        closed_eta: eta.d().zero_test(policy),
        closed_omega: omega.d().zero_test(policy),
    })
}

/// Closedness and nondegeneracy of a 2-form on an even-dimensional chart.
#[derive(Clone, Debug)]
pub struct SymplecticCheck {
    pub k: usize,
    pub volume: VolumeCheck,
    pub closed: Aggregate,
}

impl SymplecticCheck {
    pub fn passed(&self) -> bool {
        self.volume.passed() && self.closed.is_zero_class()
    }

    pub fn checks(&self) -> Checks {
        let mut c = Checks::new();
        c.push(self.volume.entry("volume", "ωᵏ nonvanishing", None));
        c.verdict("closed_omega", "dω = 0", &self.closed);
        c
    }
}

pub fn check_symplectic(omega: &DifferentialForm, policy: &SamplePolicy) -> Result<SymplecticCheck> {
    let dim = omega.chart().dim();
    if omega.degree() != 2 {
        return Err(Error::invalid(omega.chart().name(), "expected a 2-form"));
    }
    if dim % 2 == 1 {
        return Err(Error::invalid(omega.chart().name(), format!("dimension {dim} is odd")));
    }
    let k = dim / 2;
    let coefficient = top_coefficient(&omega.power(k)?);
    let status = nonvanishing(&coefficient, omega.chart().coords(), policy);
    Ok(SymplecticCheck {
        k,
        volume: VolumeCheck { coefficient, status },
        closed: omega.d().zero_test(policy),
    })
}

/// A validated cosymplectic structure with ♭, ♯ and R cached.
#[derive(Clone, Debug)]
pub struct CosymplecticStructure {
    name: String,
    eta: DifferentialForm,
    omega: DifferentialForm,
    n: usize,
    attested: bool,
    validation: CosymplecticCheck,
    flat: Matrix,
    sharp: Matrix,
    reeb: VectorField,
}

impl CosymplecticStructure {
    pub fn new(
        name: &str,
        eta: DifferentialForm,
        omega: DifferentialForm,
        policy: &SamplePolicy,
    ) -> Result<Self> {
        let validation = check_cosymplectic(&eta, &omega, policy)?;
        if !validation.passed() {
            return Err(Error::NotCosymplectic(name.to_string(), validation.failure_summary()));
        }
        let e = eta.covector();
        let w = omega.matrix();
        let dim = eta.chart().dim();
        let flat: Matrix = (0..dim)
            .map(|i| (0..dim).map(|j| &w[i][j] + &(&e[i] * &e[j])).collect())
            .collect();
        let sharp = linalg::invert(&linalg::transpose(&flat), policy)
            .map_err(|err| Error::linalg(format!("inverting ♭ of {name}"), err))?;
        let reeb = VectorField::new(eta.chart(), linalg::mat_vec(&sharp, &e))?;
        Ok(CosymplecticStructure {
            name: name.to_string(),
            n: validation.n,
            eta,
            omega,
            attested: false,
            validation,
            flat,
            sharp,
            reeb,
        })
    }

    /// Parses forms given as `("x y", "coeff")` term lists.
    pub fn parse(
        name: &str,
        chart: &ChartRef,
        eta: &[(&str, &str)],
        omega: &[(&str, &str)],
        policy: &SamplePolicy,
    ) -> Result<Self> {
        CosymplecticStructure::new(
            name,
            DifferentialForm::parse(chart, 1, eta)?,
            DifferentialForm::parse(chart, 2, omega)?,
            policy,
        )
    }

    pub fn with_attested_nonvanishing(mut self, attested: bool) -> Self {
        self.attested = attested;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &ChartRef {
        self.eta.chart()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> &DifferentialForm {
        &self.eta
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn reeb(&self) -> &VectorField {
        &self.reeb
    }

    pub fn attested_nonvanishing(&self) -> bool {
        self.attested
    }

    pub fn validation(&self) -> &CosymplecticCheck {
        &self.validation
    }

    pub fn nonvanishing_attestation(&self) -> Option<String> {
        self.attested.then(|| format!("nonvanishing:{}", self.name))
    }

    /// ♭(X) = i_X ω + η(X) η.
    pub fn flat(&self, x: &VectorField) -> Result<DifferentialForm> {
        self.chart().require_same(x.chart())?;
        let xs = x.components();
        let dim = self.chart().dim();
        let mut out = DifferentialForm::zero(self.chart(), 1);
        for j in 0..dim {
            let c: Expr = (0..dim).map(|i| &xs[i] * &self.flat[i][j]).sum();
            out.add_term_positions(vec![j], c);
        }
        Ok(out)
    }

    pub fn sharp(&self, alpha: &DifferentialForm) -> Result<VectorField> {
        self.chart().require_same(alpha.chart())?;
        if alpha.degree() != 1 {
            return Err(Error::invalid("sharp", "argument must be a 1-form"));
        }
        Ok(VectorField::new(
            self.chart(),
            linalg::mat_vec(&self.sharp, &alpha.covector()),
        )?)
    }

    /// X_f = ♯(df − R(f) η).
    pub fn hamiltonian_field(&self, f: &Expr) -> Result<VectorField> {
        let df = DifferentialForm::function(self.chart(), f.clone()).d();
        let rf = self.reeb.apply(f);
        self.sharp(&df.sub(&self.eta.scale(&rf))?)
    }

    /// ω(X,−) − (df − R(f)η) and η(X) for a candidate Hamiltonian field.
    pub fn hamiltonian_residuals(&self, f: &Expr, x: &VectorField, policy: &SamplePolicy) -> Result<(Aggregate, Aggregate)> {
        let df = DifferentialForm::function(self.chart(), f.clone()).d();
        let rf = self.reeb.apply(f);
        let target = df.sub(&self.eta.scale(&rf))?;
        let lhs = self.omega.interior(x)?;
        let characterization = lhs.sub(&target)?.zero_test(policy);
        let eta_x = DifferentialForm::function(self.chart(), self.eta.apply(x)?);
        Ok((characterization, eta_x.zero_test(policy)))
    }

    /// π^{ij} = π(dx_i, dx_j) = ω(♯dx_j, ♯dx_i).
    pub fn poisson(&self) -> PoissonBivector {
        let dim = self.chart().dim();
        let w = self.omega.matrix();
        let col = |j: usize| -> Vec<&Expr> { (0..dim).map(|a| &self.sharp[a][j]).collect() };
        let omega_of = |u: &[&Expr], v: &[&Expr]| -> Expr {
            let mut acc = Expr::zero();
            for a in 0..dim {
                if u[a].is_zero() {
                    continue;
                }
                for b in 0..dim {
                    if w[a][b].is_zero() || v[b].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(u[a] * &w[a][b]) * v[b]);
                }
            }
            acc
        };
        let mut coeffs = BTreeMap::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let c = omega_of(&col(j), &col(i));
                if !c.is_zero() {
                    coeffs.insert((i, j), c);
                }
            }
        }
        PoissonBivector {
            chart: self.chart().clone(),
            coeffs,
        }
    }

    /// {f, g} = π(df, dg).
    pub fn poisson_bracket(&self, f: &Expr, g: &Expr) -> Expr {
        self.poisson().bracket(f, g)
    }

    /// Reeb identities and invariance.
    pub fn reeb_checks(&self, policy: &SamplePolicy) -> Result<Checks> {
        let mut c = Checks::new();
        let r = &self.reeb;
        c.verdict("reeb.contraction", "i_R ω = 0", &self.omega.interior(r)?.zero_test(policy));
        let eta_r = DifferentialForm::function(self.chart(), &self.eta.apply(r)? - &Expr::one());
        c.verdict("reeb.normalization", "η(R) = 1", &eta_r.zero_test(policy));
        c.verdict("reeb.lie_eta", "L_R η = 0", &self.eta.lie_derivative(r)?.zero_test(policy));
        c.verdict("reeb.lie_omega", "L_R ω = 0", &self.omega.lie_derivative(r)?.zero_test(policy));
        Ok(c)
    }
}

/// Bivector stored over increasing coordinate pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonBivector {
    chart: ChartRef,
    coeffs: BTreeMap<(usize, usize), Expr>,
}

impl PoissonBivector {
    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Expr {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => Expr::zero(),
            Ordering::Less => self.coeffs.get(&(i, j)).cloned().unwrap_or_default(),
            Ordering::Greater => -self.coeffs.get(&(j, i)).cloned().unwrap_or_default(),
        }
    }

    pub fn matrix(&self) -> Matrix {
        let n = self.chart.dim();
        (0..n).map(|i| (0..n).map(|j| self.coefficient(i, j)).collect()).collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Expr)> {
        self.coeffs.iter()
    }

    pub fn bracket(&self, f: &Expr, g: &Expr) -> Expr {
        let coords = self.chart.coords();
        let df: Vec<Expr> = coords.iter().map(|c| f.diff(c)).collect();
        let dg: Vec<Expr> = coords.iter().map(|c| g.diff(c)).collect();
        let mut acc = Expr::zero();
        for ((i, j), p) in &self.coeffs {
            let t = &(&df[*i] * &dg[*j]) - &(&df[*j] * &dg[*i]);
            if !t.is_zero() {
                acc = &acc + &(p * &t);
            }
        }
        acc
    }

    /// π^♯(α) = π(α, −).
    pub fn sharp(&self, alpha: &DifferentialForm) -> Result<VectorField> {
        self.chart.require_same(alpha.chart())?;
        let a = alpha.covector();
        let n = self.chart.dim();
        let comps = (0..n)
            .map(|j| (0..n).map(|i| &a[i] * &self.coefficient(i, j)).sum())
            .collect();
        Ok(VectorField::new(&self.chart, comps)?)
    }

    /// Rank of the coefficient matrix at each sample point.
    pub fn ranks(&self, policy: &SamplePolicy) -> Vec<usize> {
        linalg::ranks_at_samples(&self.matrix(), self.chart.coords(), policy)
            .into_iter()
            .map(|(_, r)| r)
            .collect()
    }
}

impl std::fmt::Display for PoissonBivector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, ((i, j), c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*d/d{}^d/d{}", self.chart.coord(*i), self.chart.coord(*j))?;
        }
        Ok(())
    }
}

/// Product M₁×M₂×ℝ with η = η₁+η₂ and ω = ω₁+ω₂+η₁∧dt.
#[derive(Clone, Debug)]
pub struct ProductStructure {
    pub structure: CosymplecticStructure,
    pub pr1: SmoothMap,
    pub pr2: SmoothMap,
    /// Ratio of the top coefficients of η∧ω^{n+m+1} and ω₁ⁿ∧ω₂ᵐ∧η₂∧η₁∧dt.
    pub volume_ratio: Expr,
    pub n1: usize,
    pub n2: usize,
}

pub fn product_structure(
    c1: &CosymplecticStructure,
    c2: &CosymplecticStructure,
    policy: &SamplePolicy,
) -> Result<ProductStructure> {
    let line = Chart::line("R", "t")?;
    let chart = Chart::product(
        &format!("{}x{}xR", c1.chart().name(), c2.chart().name()),
        &[("m1.", c1.chart()), ("m2.", c2.chart()), ("", &line)],
    )?;
    let pr1 = SmoothMap::projection(&chart, c1.chart(), "m1.")?;
    let pr2 = SmoothMap::projection(&chart, c2.chart(), "m2.")?;
    let eta1 = c1.eta().pullback(&pr1)?;
    let eta2 = c2.eta().pullback(&pr2)?;
    let omega1 = c1.omega().pullback(&pr1)?;
    let omega2 = c2.omega().pullback(&pr2)?;
    let dt = DifferentialForm::d_coord(&chart, "t")?;
    let eta = eta1.add(&eta2)?;
    let omega = omega1.add(&omega2)?.add(&eta1.wedge(&dt)?)?;
    let structure = CosymplecticStructure::new(
        &format!("{}x{}", c1.name(), c2.name()),
        eta.clone(),
        omega.clone(),
        policy,
    )?;
    let n = c1.n() + c2.n() + 1;
    let lhs = eta.wedge(&omega.power(n)?)?;
    let rhs = omega1
        .power(c1.n())?
        .wedge(&omega2.power(c2.n())?)?
        .wedge(&eta2)?
        .wedge(&eta1)?
        .wedge(&dt)?;
    let volume_ratio = top_coefficient(&lhs).checked_div(&top_coefficient(&rhs))?;
    Ok(ProductStructure {
        structure,
        pr1,
        pr2,
        volume_ratio,
        n1: c1.n(),
        n2: c2.n(),
    })
}

/// Checks the Reeb, ♯∘♭, Hamiltonian, π^♯ and Jacobi identities on given test data.
pub fn calculus_checks(
    c: &CosymplecticStructure,
    fields: &[VectorField],
    functions: &[Expr],
    triples: &[(Expr, Expr, Expr)],
    policy: &SamplePolicy,
) -> Result<Checks> {
    let mut out = c.reeb_checks(policy)?;
    let mut agg = Aggregate::exact();
    for x in fields {
        let back = c.sharp(&c.flat(x)?)?;
        agg = agg.combine(back.sub(x)?.zero_test(policy));
    }
    out.verdict("sharp_flat", "♯∘♭ = id", &agg);

    let pi = c.poisson();
    let (mut charac, mut eta_x, mut conserved, mut via_pi) =
        (Aggregate::exact(), Aggregate::exact(), Aggregate::exact(), Aggregate::exact());
    for f in functions {
        let x = c.hamiltonian_field(f)?;
        let (a, b) = c.hamiltonian_residuals(f, &x, policy)?;
        charac = charac.combine(a);
        eta_x = eta_x.combine(b);
        let df = DifferentialForm::function(c.chart(), f.clone()).d();
        conserved = conserved.combine(DifferentialForm::function(c.chart(), df.apply(&x)?).zero_test(policy));
        via_pi = via_pi.combine(pi.sharp(&df)?.sub(&x)?.zero_test(policy));
    }
    out.verdict("hamiltonian.characterization", "ω(X_f,−) = df − R(f)η", &charac);
    out.verdict("hamiltonian.horizontal", "η(X_f) = 0", &eta_x);
    out.verdict("hamiltonian.conserved", "df(X_f) = 0", &conserved);
    out.verdict("hamiltonian.poisson", "X_f = π^♯(df)", &via_pi);

    let mut jacobi = Aggregate::exact();
    for (f, g, h) in triples {
        let a = pi.bracket(&pi.bracket(f, g), h);
        let b = pi.bracket(&pi.bracket(g, h), f);
        let d = pi.bracket(&pi.bracket(h, f), g);
        let sum = &(&a + &b) + &d;
        jacobi = jacobi.combine(DifferentialForm::function(c.chart(), sum).zero_test(policy));
    }
    out.verdict("poisson.jacobi", "{{f,g},h} + cyclic = 0", &jacobi);

    let ranks = pi.ranks(policy);
    let expected = 2 * c.n();
    match ranks.iter().find(|r| **r != expected) {
        None => out.pass(
            "poisson.corank",
            "rank π = 2n",
            Status::Numeric,
            format!("rank {expected} at {} samples", ranks.len()),
        ),
        Some(r) => out.fail("poisson.corank", "rank π = 2n", format!("rank {r} ≠ {expected} at a sample")),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse;

    fn std3() -> CosymplecticStructure {
        let m = Chart::new("R3", &["x", "y", "z"]).unwrap();
        CosymplecticStructure::parse("std3", &m, &[("z", "1")], &[("x y", "1")], &SamplePolicy::default()).unwrap()
    }

    #[test]
    fn standard_reeb_and_flat() {
        let c = std3();
        let m = c.chart().clone();
        assert_eq!(c.reeb(), &VectorField::coordinate(&m, "z").unwrap());
        let dx = VectorField::coordinate(&m, "x").unwrap();
        assert_eq!(c.flat(&dx).unwrap(), DifferentialForm::d_coord(&m, "y").unwrap());
        let sx = c.sharp(&DifferentialForm::d_coord(&m, "x").unwrap()).unwrap();
        assert_eq!(sx, VectorField::coordinate(&m, "y").unwrap().neg());
    }

    #[test]
    fn hamiltonian_examples() {
        let c = std3();
        let m = c.chart().clone();
        let xf = c.hamiltonian_field(&parse("x").unwrap()).unwrap();
        assert_eq!(xf, VectorField::coordinate(&m, "y").unwrap().neg());
        assert_eq!(c.hamiltonian_field(&parse("z").unwrap()).unwrap(), VectorField::zero(&m));
    }

    #[test]
    fn volume_sign_change_is_found() {
        let m = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let eta = DifferentialForm::parse(&m, 1, &[("z", "1")]).unwrap();
        let omega = DifferentialForm::parse(&m, 2, &[("x y", "x")]).unwrap();
        let check = check_cosymplectic(&eta, &omega, &SamplePolicy::default()).unwrap();
        match check.volume.status {
            VolumeStatus::Vanishes { point, value } => {
                assert!(value.abs() <= 1e-9);
                assert!(point.get("x").unwrap().abs() <= 1e-9);
            }
            other => panic!("expected vanishing, got {other:?}"),
        }
    }

    #[test]
    fn even_dimension_rejected() {
        let m = Chart::new("R2", &["x", "y"]).unwrap();
        let eta = DifferentialForm::parse(&m, 1, &[("x", "1")]).unwrap();
        let omega = DifferentialForm::parse(&m, 2, &[("x y", "1")]).unwrap();
        assert!(check_cosymplectic(&eta, &omega, &SamplePolicy::default()).is_err());
    }
}
