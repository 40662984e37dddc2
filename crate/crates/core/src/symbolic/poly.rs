//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! The indeterminates are [`Atom`]s: coordinate variables or opaque
//! transcendental applications such as `sin(u)`. Distinct atoms are treated as
//! algebraically independent, so every identity proved at this level is a
//! genuine identity of the underlying functions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::expr::Expr;

pub type Rational = BigRational;

/// Transcendental functions admitted as opaque atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Var(Arc<str>),
    Apply(Func, Expr),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Var(name) => f.write_str(name),
            Atom::Apply(func, arg) => write!(f, "{}({})", func.name(), arg),
        }
    }
}

/// Product of atom powers, sorted by atom with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[(Atom, u32); 2]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn atom(atom: Atom, exp: u32) -> Self {
        if exp == 0 {
            return Monomial::one();
        }
        let mut v = SmallVec::new();
        v.push((atom, exp));
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.0
            .iter()
            .find(|(a, _)| a == atom)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.0[i..].iter().cloned());
        out.extend(other.0[j..].iter().cloned());
        Monomial(out)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for (a, ea) in &self.0 {
            if j < other.0.len() && &other.0[j].0 == a {
                let eb = other.0[j].1;
                if eb > *ea {
                    return None;
                }
                if ea > &eb {
                    out.push((a.clone(), ea - eb));
                }
                j += 1;
            } else {
                if j < other.0.len() && other.0[j].0 < *a {
                    return None;
                }
                out.push((a.clone(), *ea));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for (a, ea) in &self.0 {
            let eb = other.degree_in(a);
            if eb > 0 {
                out.push((a.clone(), (*ea).min(eb)));
            }
        }
        Monomial(out)
    }

    /// Drops `atom` entirely.
    pub fn without(&self, atom: &Atom) -> Monomial {
        Monomial(self.0.iter().filter(|(a, _)| a != atom).cloned().collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (atom, exp)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *exp == 1 {
                write!(f, "{atom}")?;
            } else {
                write!(f, "{atom}^{exp}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn atom(atom: Atom) -> Self {
        Poly::monomial(Monomial::atom(atom, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.get(&Monomial::one()),
            _ => None,
        }
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.as_constant().is_some()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of the largest monomial in the internal order.
    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in m.factors() {
                out.insert(a.clone());
            }
        }
        out
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(atom))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * k))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c * k))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to an atom.
    pub fn partial(&self, atom: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(atom);
            if e == 0 {
                continue;
            }
            let rest = m.without(atom).mul(&Monomial::atom(atom.clone(), e - 1));
            out.add_term(rest, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Scalar making the leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Coefficients with respect to `atom`, keyed by degree.
    pub fn coeffs_in(&self, atom: &Atom) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.degree_in(atom);
            let rest = if e == 0 { m.clone() } else { m.without(atom) };
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    fn coeff_of_degree(&self, atom: &Atom, degree: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.degree_in(atom) == degree {
                out.add_term(m.without(atom), c.clone());
            }
        }
        out
    }

    /// Smallest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if divisor.len() == 1 {
            let (dm, dc) = divisor.terms.iter().next().unwrap();
            let inv = dc.recip();
            let mut out = Poly::zero();
            for (m, c) in &self.terms {
                out.add_term(m.div(dm)?, c * &inv);
            }
            return Some(out);
        }
        let main = divisor.atoms().into_iter().next_back()?;
        let db = divisor.degree_in(&main);
        let lb = divisor.coeff_of_degree(&main, db);
        let mut rem = self.clone();
        let mut quotient = Poly::zero();
        while !rem.is_zero() {
            let dr = rem.degree_in(&main);
            if dr < db {
                return None;
            }
            let lr = rem.coeff_of_degree(&main, dr);
            let c = lr.div_exact(&lb)?;
            let shift = Monomial::atom(main.clone(), dr - db);
            let term = c.mul_monomial(&shift, &Rational::one());
            rem.sub_assign(&term.mul(divisor));
            quotient.add_assign(&term);
        }
        Some(quotient)
    }

    /// Monic greatest common divisor over the rationals.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        if a.len() == 1 || b.len() == 1 {
            let g = a.monomial_content().gcd(&b.monomial_content());
            return Poly::monomial(g, Rational::one());
        }
        let atoms_a = a.atoms();
        let atoms_b = b.atoms();
        let Some(main) = atoms_a.intersection(&atoms_b).last().cloned() else {
            return Poly::one();
        };
        let ca = a.content_in(&main);
        let cb = b.content_in(&main);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let c = Poly::gcd(&ca, &cb);
        let (mut f, mut g) = if pa.degree_in(&main) >= pb.degree_in(&main) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        while !g.is_zero() {
            if g.degree_in(&main) == 0 {
                f = Poly::one();
                break;
            }
            let r = f.pseudo_remainder(&g, &main);
            f = g;
            g = if r.is_zero() {
                r
            } else {
                r.primitive_part(&main)
            };
        }
        let h = if f.degree_in(&main) == 0 {
            Poly::one()
        } else {
            f.primitive_part(&main)
        };
        c.mul(&h).monic()
    }

    /// Gcd of the coefficients when viewed as a polynomial in `atom`.
    pub fn content_in(&self, atom: &Atom) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(atom).into_values() {
            g = Poly::gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self, atom: &Atom) -> Poly {
        let c = self.content_in(atom);
        self.div_exact(&c).expect("content divides").monic()
    }

    fn pseudo_remainder(&self, divisor: &Poly, atom: &Atom) -> Poly {
        let dg = divisor.degree_in(atom);
        let lg = divisor.coeff_of_degree(atom, dg);
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(atom);
            if dr < dg {
                break;
            }
            let lr = r.coeff_of_degree(atom, dr);
            let shift = Monomial::atom(atom.clone(), dr - dg);
            let sub = divisor.mul(&lr).mul_monomial(&shift, &Rational::one());
            r = r.mul(&lg).sub(&sub);
        }
        r
    }

    /// Evaluates with every atom mapped to a float; `None` when an atom is missing.
    pub(crate) fn eval_f64(&self, atom_values: &BTreeMap<&Atom, f64>) -> Option<(f64, f64)> {
        let mut value = 0.0;
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for (a, e) in m.factors() {
                t *= atom_values.get(a)?.powi(*e as i32);
            }
            value += t;
            scale += t.abs();
        }
        Some((value, scale))
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of floats for huge components.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest monomials first reads more naturally.
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> Poly {
        Poly::atom(Atom::Var(Arc::from(name)))
    }

    fn int(k: i64) -> Poly {
        Poly::constant(Rational::from_integer(BigInt::from(k)))
    }

    #[test]
    fn gcd_of_expanded_products() {
        let x = var("x");
        let y = var("y");
        let common = x.add(&y).mul(&x.sub(&int(1)));
        let a = common.mul(&x.add(&int(3)));
        let b = common.mul(&y.sub(&int(2))).mul(&y);
        assert_eq!(Poly::gcd(&a, &b), common.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let x = var("x");
        let y = var("y");
        let a = x.mul(&x).add(&y);
        let b = x.add(&y.mul(&y));
        assert!(Poly::gcd(&a, &b).is_one());
    }

    #[test]
    fn exact_division_detects_non_divisors() {
        let x = var("x");
        let y = var("y");
        let p = x.add(&y).pow(3);
        assert_eq!(p.div_exact(&x.add(&y)).unwrap(), x.add(&y).pow(2));
        assert!(p.div_exact(&x.sub(&y)).is_none());
    }

    #[test]
    fn monomial_division() {
        let m = Monomial::atom(Atom::Var(Arc::from("x")), 3);
        let d = Monomial::atom(Atom::Var(Arc::from("x")), 1);
        assert_eq!(m.div(&d).unwrap().degree_in(&Atom::Var(Arc::from("x"))), 2);
        assert!(d.div(&m).is_none());
        let y = Monomial::atom(Atom::Var(Arc::from("y")), 1);
        assert!(m.div(&y).is_none());
    }
}
