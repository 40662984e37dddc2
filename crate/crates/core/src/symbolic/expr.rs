//! Canonical scalar expressions.
//!
//! An [`Expr`] is a reduced fraction of two [`Poly`]s whose denominator has
//! leading coefficient 1. Because the representation is canonical, structural
//! equality is mathematical equality on the rational tier.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{rational_to_f64, Atom, Func, Poly, Rational};
use super::SymbolicError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Fraction>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Fraction {
    num: Poly,
    den: Poly,
}

/// Numeric evaluation result with bookkeeping used by the zero tester.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: f64,
    /// Sum of absolute term magnitudes; bounds accumulated rounding error.
    pub scale: f64,
    /// Some denominator was tiny compared with its own terms.
    pub near_pole: bool,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("pole: {0}")]
    Pole(String),
}

const NEAR_POLE_RATIO: f64 = 1e-10;

impl Expr {
    fn from_parts_unchecked(num: Poly, den: Poly) -> Expr {
        Expr(Arc::new(Fraction { num, den }))
    }

    pub fn from_poly(p: Poly) -> Expr {
        Expr::from_parts_unchecked(p, Poly::one())
    }

    /// Builds `num / den` in canonical form.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Expr, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        if let Some(c) = den.as_constant() {
            return Ok(Expr::from_poly(num.scale(&c.recip())));
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient().expect("nonzero").clone();
        if lc.is_one() {
            Ok(Expr::from_parts_unchecked(num, den))
        } else {
            let inv = lc.recip();
            Ok(Expr::from_parts_unchecked(num.scale(&inv), den.scale(&inv)))
        }
    }

    pub fn zero() -> Expr {
        Expr::from_poly(Poly::zero())
    }

    pub fn one() -> Expr {
        Expr::from_poly(Poly::one())
    }

    pub fn int(k: i64) -> Expr {
        Expr::rational(Rational::from_integer(BigInt::from(k)))
    }

    pub fn frac(p: i64, q: i64) -> Expr {
        Expr::rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rational(q: Rational) -> Expr {
        Expr::from_poly(Poly::constant(q))
    }

    pub fn var(name: &str) -> Expr {
        Expr::from_poly(Poly::atom(Atom::Var(Arc::from(name))))
    }

    pub fn numer(&self) -> &Poly {
        &self.0.num
    }

    pub fn denom(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    /// The value if this is a constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.0.den.is_one() {
            return None;
        }
        if self.0.num.is_zero() {
            return Some(Rational::zero());
        }
        self.0.num.as_constant().cloned()
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    /// No sin/cos/exp/sqrt anywhere.
    pub fn is_rational_function(&self) -> bool {
        let only_vars = |p: &Poly| p.atoms().iter().all(|a| matches!(a, Atom::Var(_)));
        only_vars(&self.0.num) && only_vars(&self.0.den)
    }

    /// Number of stored terms; a rough size measure.
    pub fn term_count(&self) -> usize {
        self.0.num.len() + self.0.den.len()
    }

    pub fn free_vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        for p in [&self.0.num, &self.0.den] {
            for atom in p.atoms() {
                match atom {
                    Atom::Var(name) => {
                        out.insert(name);
                    }
                    Atom::Apply(_, arg) => arg.collect_vars(out),
                }
            }
        }
    }

    pub fn depends_on(&self, var: &str) -> bool {
        self.free_vars().iter().any(|v| &**v == var)
    }

    pub fn recip(&self) -> Result<Expr, SymbolicError> {
        Expr::from_fraction(self.0.den.clone(), self.0.num.clone())
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr, SymbolicError> {
        if other.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        if let Some(c) = other.as_rational() {
            return Ok(self.scale(&c.recip()));
        }
        self.mul_fraction(&other.0.den, &other.0.num)
    }

    pub fn scale(&self, k: &Rational) -> Expr {
        if k.is_zero() {
            return Expr::zero();
        }
        Expr::from_parts_unchecked(self.0.num.scale(k), self.0.den.clone())
    }

    pub fn pow(&self, exp: i32) -> Result<Expr, SymbolicError> {
        if exp >= 0 {
            let e = exp as u32;
            let num = self.0.num.pow(e);
            let den = self.0.den.pow(e);
            // Powers of coprime polynomials stay coprime; only rescale.
            let lc = den.leading_coefficient().expect("nonzero").clone();
            if lc.is_one() {
                Ok(Expr::from_parts_unchecked(num, den))
            } else {
                let inv = lc.recip();
                Ok(Expr::from_parts_unchecked(num.scale(&inv), den.scale(&inv)))
            }
        } else {
            self.recip()?.pow(-exp)
        }
    }

    fn mul_fraction(&self, num: &Poly, den: &Poly) -> Result<Expr, SymbolicError> {
        // Cross-cancel before multiplying to keep the gcd work small.
        let g1 = Poly::gcd(&self.0.num, den);
        let g2 = Poly::gcd(num, &self.0.den);
        let a = self.0.num.div_exact(&g1).expect("gcd divides");
        let d = den.div_exact(&g1).expect("gcd divides");
        let c = num.div_exact(&g2).expect("gcd divides");
        let b = self.0.den.div_exact(&g2).expect("gcd divides");
        let num = a.mul(&c);
        let den = b.mul(&d);
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        let lc = den.leading_coefficient().expect("nonzero").clone();
        let inv = lc.recip();
        Ok(Expr::from_parts_unchecked(num.scale(&inv), den.scale(&inv)))
    }

    fn add_impl(&self, other: &Expr, negate: bool) -> Expr {
        let rhs_num = if negate {
            other.0.num.neg()
        } else {
            other.0.num.clone()
        };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Expr::from_parts_unchecked(rhs_num, other.0.den.clone());
        }
        if self.0.den == other.0.den {
            let num = self.0.num.add(&rhs_num);
            if self.0.den.is_one() {
                return Expr::from_poly(num);
            }
            return Expr::from_fraction(num, self.0.den.clone()).expect("nonzero denominator");
        }
        if other.0.den.is_one() {
            let num = self.0.num.add(&rhs_num.mul(&self.0.den));
            // gcd(num, den) = gcd(self.num, den) = 1 already.
            return Expr::from_parts_unchecked(num, self.0.den.clone());
        }
        if self.0.den.is_one() {
            let num = self.0.num.mul(&other.0.den).add(&rhs_num);
            return Expr::from_parts_unchecked(num, other.0.den.clone());
        }
        let g = Poly::gcd(&self.0.den, &other.0.den);
        let b1 = self.0.den.div_exact(&g).expect("gcd divides");
        let b2 = other.0.den.div_exact(&g).expect("gcd divides");
        let num = self.0.num.mul(&b2).add(&rhs_num.mul(&b1));
        let den = b1.mul(&other.0.den);
        Expr::from_fraction(num, den).expect("nonzero denominator")
    }

    pub fn apply(func: Func, arg: &Expr) -> Result<Expr, SymbolicError> {
        if let Some(q) = arg.as_rational() {
            if q.is_zero() {
                return Ok(match func {
                    Func::Sin | Func::Sqrt => Expr::zero(),
                    Func::Cos | Func::Exp => Expr::one(),
                });
            }
            if func == Func::Sqrt {
                if q.is_negative() {
                    return Err(SymbolicError::Domain(format!("sqrt({arg}) of a negative constant")));
                }
                let (n, d) = (q.numer(), q.denom());
                let (rn, rd) = (n.sqrt(), d.sqrt());
                if &(&rn * &rn) == n && &(&rd * &rd) == d {
                    return Ok(Expr::rational(Rational::new(rn, rd)));
                }
            }
        }
        // Odd/even symmetry keyed on the sign of the canonical leading term.
        let negative = arg
            .0
            .num
            .leading_coefficient()
            .is_some_and(|c| c.is_negative());
        match (func, negative) {
            (Func::Sin, true) => {
                let a = Expr::from_poly(Poly::atom(Atom::Apply(Func::Sin, -arg)));
                Ok(-a)
            }
            (Func::Cos, true) => Ok(Expr::from_poly(Poly::atom(Atom::Apply(Func::Cos, -arg)))),
            _ => Ok(Expr::from_poly(Poly::atom(Atom::Apply(func, arg.clone())))),
        }
    }

    pub fn sin(&self) -> Expr {
        Expr::apply(Func::Sin, self).expect("sin is total")
    }

    pub fn cos(&self) -> Expr {
        Expr::apply(Func::Cos, self).expect("cos is total")
    }

    pub fn exp(&self) -> Expr {
        Expr::apply(Func::Exp, self).expect("exp is total")
    }

    pub fn sqrt(&self) -> Result<Expr, SymbolicError> {
        Expr::apply(Func::Sqrt, self)
    }

    /// Partial derivative; variables that do not occur give zero.
    pub fn diff(&self, var: &str) -> Expr {
        let dn = diff_poly(&self.0.num, var);
        if self.0.den.is_one() {
            return dn;
        }
        let dd = diff_poly(&self.0.den, var);
        if dn.is_zero() && dd.is_zero() {
            return Expr::zero();
        }
        let n = Expr::from_poly(self.0.num.clone());
        let d = Expr::from_poly(self.0.den.clone());
        let top = &(&dn * &d) - &(&n * &dd);
        top.checked_div(&(&d * &d))
            .expect("denominator of a canonical fraction is nonzero")
    }

    /// Simultaneous substitution of variables; unmapped variables stay.
    pub fn subst<F>(&self, f: &F) -> Result<Expr, SymbolicError>
    where
        F: Fn(&str) -> Option<Expr>,
    {
        let mut cache: BTreeMap<Atom, Expr> = BTreeMap::new();
        let num = eval_poly_expr(&self.0.num, f, &mut cache)?;
        if self.0.den.is_one() {
            return Ok(num);
        }
        let den = eval_poly_expr(&self.0.den, f, &mut cache)?;
        num.checked_div(&den)
    }

    pub fn subst_map(&self, map: &BTreeMap<String, Expr>) -> Result<Expr, SymbolicError> {
        self.subst(&|v: &str| map.get(v).cloned())
    }

    pub fn rename(&self, f: &dyn Fn(&str) -> Option<String>) -> Expr {
        self.subst(&|v: &str| f(v).map(|n| Expr::var(&n)))
            .expect("renaming cannot create poles")
    }

    pub fn eval<F>(&self, point: &F) -> Result<f64, EvalError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        self.eval_detailed(point).map(|e| e.value)
    }

    pub fn eval_detailed<F>(&self, point: &F) -> Result<Evaluation, EvalError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        let mut near_pole = false;
        let (value, scale) = self.eval_inner(point, &mut near_pole)?;
        Ok(Evaluation {
            value,
            scale,
            near_pole,
        })
    }

    fn eval_inner<F>(&self, point: &F, near_pole: &mut bool) -> Result<(f64, f64), EvalError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        let mut values: BTreeMap<&Atom, f64> = BTreeMap::new();
        let atoms_num = self.0.num.atoms();
        let atoms_den = self.0.den.atoms();
        let mut owned: Vec<(Atom, f64)> = Vec::new();
        for atom in atoms_num.union(&atoms_den) {
            owned.push((atom.clone(), eval_atom(atom, point, near_pole)?));
        }
        for (a, v) in &owned {
            values.insert(a, *v);
        }
        let (n, ns) = self.0.num.eval_f64(&values).expect("all atoms valued");
        if self.0.den.is_one() {
            if !n.is_finite() {
                return Err(EvalError::Pole(format!("non-finite value of {self}")));
            }
            return Ok((n, ns));
        }
        let (d, ds) = self.0.den.eval_f64(&values).expect("all atoms valued");
        if d == 0.0 || !d.is_finite() {
            return Err(EvalError::Pole(format!("denominator {} vanishes", self.0.den)));
        }
        if d.abs() <= NEAR_POLE_RATIO * ds {
            *near_pole = true;
        }
        let value = n / d;
        if !value.is_finite() {
            return Err(EvalError::Pole(format!("non-finite value of {self}")));
        }
        // Relative error of the quotient is bounded by the sum of relative errors.
        let scale = ns / d.abs() + value.abs() * ds / d.abs();
        Ok((value, scale))
    }
}

fn eval_atom<F>(atom: &Atom, point: &F, near_pole: &mut bool) -> Result<f64, EvalError>
where
    F: Fn(&str) -> Option<f64>,
{
    match atom {
        Atom::Var(name) => point(name).ok_or_else(|| EvalError::Unbound(name.to_string())),
        Atom::Apply(func, arg) => {
            let (u, _) = arg.eval_inner(point, near_pole)?;
            let v = match func {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Exp => u.exp(),
                Func::Sqrt => {
                    if u < 0.0 {
                        return Err(EvalError::Pole(format!("sqrt of negative value {u}")));
                    }
                    u.sqrt()
                }
            };
            if !v.is_finite() {
                return Err(EvalError::Pole(format!("{func:?} overflow")));
            }
            Ok(v)
        }
    }
}

fn diff_atom(atom: &Atom, var: &str) -> Expr {
    match atom {
        Atom::Var(name) => {
            if &**name == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Apply(func, arg) => {
            let du = arg.diff(var);
            if du.is_zero() {
                return Expr::zero();
            }
            let outer = match func {
                Func::Sin => arg.cos(),
                Func::Cos => -arg.sin(),
                Func::Exp => arg.exp(),
                Func::Sqrt => {
                    let s = Expr::from_poly(Poly::atom(atom.clone()));
                    s.scale(&Rational::from_integer(BigInt::from(2)))
                        .recip()
                        .expect("sqrt atom is a nonzero polynomial")
                }
            };
            &outer * &du
        }
    }
}

fn diff_poly(p: &Poly, var: &str) -> Expr {
    let mut poly_part = Poly::zero();
    let mut rest = Expr::zero();
    for atom in p.atoms() {
        let da = diff_atom(&atom, var);
        if da.is_zero() {
            continue;
        }
        let partial = p.partial(&atom);
        if da.is_polynomial() {
            poly_part.add_assign(&partial.mul(da.numer()));
        } else {
            rest = &rest + &(&Expr::from_poly(partial) * &da);
        }
    }
    &rest + &Expr::from_poly(poly_part)
}

/// Evaluates a polynomial after substituting its atoms, using one common
/// denominator so only a single gcd is needed at the end.
fn eval_poly_expr<F>(
    p: &Poly,
    f: &F,
    cache: &mut BTreeMap<Atom, Expr>,
) -> Result<Expr, SymbolicError>
where
    F: Fn(&str) -> Option<Expr>,
{
    let atoms = p.atoms();
    let mut values: BTreeMap<Atom, Expr> = BTreeMap::new();
    let mut unchanged = true;
    for atom in &atoms {
        let v = match cache.get(atom) {
            Some(v) => v.clone(),
            None => {
                let v = subst_atom(atom, f)?;
                cache.insert(atom.clone(), v.clone());
                v
            }
        };
        if !(v.is_polynomial() && v.numer() == &Poly::atom(atom.clone())) {
            unchanged = false;
        }
        values.insert(atom.clone(), v);
    }
    if unchanged {
        return Ok(Expr::from_poly(p.clone()));
    }
    let max_deg: BTreeMap<&Atom, u32> = atoms.iter().map(|a| (a, p.degree_in(a))).collect();
    let mut num_pows: BTreeMap<&Atom, Vec<Poly>> = BTreeMap::new();
    let mut den_pows: BTreeMap<&Atom, Vec<Poly>> = BTreeMap::new();
    for atom in &atoms {
        let v = &values[atom];
        let m = max_deg[atom] as usize;
        let mut np = Vec::with_capacity(m + 1);
        let mut dp = Vec::with_capacity(m + 1);
        np.push(Poly::one());
        dp.push(Poly::one());
        for k in 1..=m {
            np.push(np[k - 1].mul(v.numer()));
            if v.is_polynomial() {
                dp.push(Poly::one());
            } else {
                dp.push(dp[k - 1].mul(v.denom()));
            }
        }
        num_pows.insert(atom, np);
        den_pows.insert(atom, dp);
    }
    let mut total = Poly::zero();
    for (m, c) in p.terms() {
        let mut term = Poly::constant(c.clone());
        for atom in &atoms {
            let e = m.degree_in(atom) as usize;
            let full = max_deg[atom] as usize;
            if e > 0 {
                term = term.mul(&num_pows[atom][e]);
            }
            if full > e {
                term = term.mul(&den_pows[atom][full - e]);
            }
        }
        total.add_assign(&term);
    }
    let mut den = Poly::one();
    for atom in &atoms {
        let full = max_deg[atom] as usize;
        den = den.mul(&den_pows[atom][full]);
    }
    Expr::from_fraction(total, den)
}

fn subst_atom<F>(atom: &Atom, f: &F) -> Result<Expr, SymbolicError>
where
    F: Fn(&str) -> Option<Expr>,
{
    match atom {
        Atom::Var(name) => Ok(f(name).unwrap_or_else(|| Expr::from_poly(Poly::atom(atom.clone())))),
        Atom::Apply(func, arg) => {
            let new_arg = arg.subst(f)?;
            Expr::apply(*func, &new_arg)
        }
    }
}

impl From<i64> for Expr {
    fn from(k: i64) -> Expr {
        Expr::int(k)
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = rhs.as_rational() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_rational() {
            return rhs.scale(&c);
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return Expr::from_poly(self.0.num.mul(&rhs.0.num));
        }
        self.mul_fraction(&rhs.0.num, &rhs.0.den)
            .expect("product of nonzero denominators is nonzero")
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::from_parts_unchecked(self.0.num.neg(), self.0.den.clone())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &'a Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Expr> for &'a Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

fn needs_parens_as_denominator(p: &Poly) -> bool {
    if p.len() != 1 {
        return true;
    }
    let (m, c) = p.terms().next().expect("one term");
    !c.is_one() || m.factors().len() != 1
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.den.is_one() {
            return write!(f, "{}", self.0.num);
        }
        if self.0.num.len() > 1 {
            write!(f, "({})", self.0.num)?;
        } else {
            write!(f, "{}", self.0.num)?;
        }
        if needs_parens_as_denominator(&self.0.den) {
            write!(f, "/({})", self.0.den)
        } else {
            write!(f, "/{}", self.0.den)
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Evaluates a constant rational as a float.
pub fn to_f64(q: &Rational) -> f64 {
    rational_to_f64(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::var("x")
    }
    fn y() -> Expr {
        Expr::var("y")
    }

    #[test]
    fn binomial_identity_cancels_exactly() {
        let e = (&x() + &y()).pow(2).unwrap()
            - x().pow(2).unwrap()
            - Expr::int(2) * x() * y()
            - y().pow(2).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn fractions_reduce() {
        let e = x().checked_div(&x()).unwrap();
        assert!(e.is_one());
        let num = x().pow(2).unwrap() - y().pow(2).unwrap();
        let e = num.checked_div(&(&x() - &y())).unwrap();
        assert_eq!(e, &x() + &y());
    }

    #[test]
    fn fraction_sum_is_canonical() {
        let a = Expr::one().checked_div(&x()).unwrap();
        let b = Expr::one().checked_div(&y()).unwrap();
        let lhs = &a + &b;
        let rhs = (&x() + &y()).checked_div(&(&x() * &y())).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_rules() {
        let e = x().pow(2).unwrap() * y();
        assert_eq!(e.diff("x"), Expr::int(2) * x() * y());
        assert!(Expr::int(7).diff("x").is_zero());
        let s = (x() * y()).sin();
        assert_eq!(s.diff("x"), y() * (x() * y()).cos());
    }

    #[test]
    fn quotient_derivative() {
        let e = Expr::one().checked_div(&x()).unwrap();
        let expect = -Expr::one().checked_div(&x().pow(2).unwrap()).unwrap();
        assert_eq!(e.diff("x"), expect);
    }

    #[test]
    fn special_values_fold() {
        assert!(Expr::zero().sin().is_zero());
        assert!(Expr::zero().cos().is_one());
        assert_eq!(Expr::frac(9, 4).sqrt().unwrap(), Expr::frac(3, 2));
        assert_eq!((-x()).sin(), -x().sin());
        assert_eq!((-x()).cos(), x().cos());
    }

    #[test]
    fn evaluation_and_poles() {
        let e = x().pow(2).unwrap() + y();
        let v = e
            .eval(&|n: &str| match n {
                "x" => Some(2.0),
                "y" => Some(1.0),
                _ => None,
            })
            .unwrap();
        assert_eq!(v, 5.0);
        let r = Expr::one().checked_div(&x()).unwrap();
        assert!(matches!(
            r.eval(&|_: &str| Some(0.0)),
            Err(EvalError::Pole(_))
        ));
    }

    #[test]
    fn substitution_through_atoms() {
        let e = x().sin() * y();
        let out = e
            .subst(&|n: &str| (n == "x").then(Expr::zero))
            .unwrap();
        assert!(out.is_zero());
        let t = Expr::var("t");
        let circ = (x().pow(2).unwrap() + y().pow(2).unwrap())
            .subst(&|n: &str| match n {
                "x" => Some(t.cos()),
                "y" => Some(t.sin()),
                _ => None,
            })
            .unwrap();
        assert_eq!(circ, t.cos().pow(2).unwrap() + t.sin().pow(2).unwrap());
    }

    #[test]
    fn substitution_into_fractions() {
        let e = Expr::one().checked_div(&(&x() + &y())).unwrap();
        let out = e
            .subst(&|n: &str| (n == "y").then(|| -x()))
            .unwrap_err();
        assert_eq!(out, SymbolicError::DivisionByZero);
    }
}
