//! Text grammar for expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := primary ('^' unary)?
//! primary := number | ident | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must simplify to integer constants. Decimal literals are read
//! exactly (`0.5` is `1/2`).

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::expr::Expr;
use super::poly::{Func, Rational};
use super::SymbolicError;

/// Expression tree as written, before canonicalization.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(Rational),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Box<Ast>),
    Call(Func, Box<Ast>),
}

/// Canonical form plus the denominators that were divided out.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub expr: Expr,
    /// Non-constant expressions assumed nonzero during simplification.
    pub domain_caveats: Vec<Expr>,
}

pub fn parse_ast(input: &str) -> Result<Ast, SymbolicError> {
    let mut p = Parser {
        src: input,
        chars: input.char_indices().collect(),
        pos: 0,
    };
    let ast = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(ast)
}

pub fn parse(input: &str) -> Result<Expr, SymbolicError> {
    Ok(simplify(&parse_ast(input)?)?.expr)
}

pub fn simplify(ast: &Ast) -> Result<Simplified, SymbolicError> {
    let mut caveats = BTreeSet::new();
    let expr = lower(ast, &mut caveats)?;
    Ok(Simplified {
        expr,
        domain_caveats: caveats.into_iter().collect(),
    })
}

fn lower(ast: &Ast, caveats: &mut BTreeSet<Expr>) -> Result<Expr, SymbolicError> {
    Ok(match ast {
        Ast::Num(q) => Expr::rational(q.clone()),
        Ast::Var(name) => Expr::var(name),
        Ast::Neg(a) => -lower(a, caveats)?,
        Ast::Add(a, b) => lower(a, caveats)? + lower(b, caveats)?,
        Ast::Sub(a, b) => lower(a, caveats)? - lower(b, caveats)?,
        Ast::Mul(a, b) => lower(a, caveats)? * lower(b, caveats)?,
        Ast::Div(a, b) => {
            let num = lower(a, caveats)?;
            let den = lower(b, caveats)?;
            if !den.is_constant() {
                caveats.insert(den.clone());
            }
            num.checked_div(&den)?
        }
        Ast::Pow(a, b) => {
            let base = lower(a, caveats)?;
            let exp = lower(b, caveats)?;
            let q = exp
                .as_rational()
                .filter(|q| q.is_integer())
                .ok_or_else(|| SymbolicError::Parse {
                    message: format!("exponent `{exp}` is not an integer constant"),
                    offset: 0,
                })?;
            let k: i32 = q
                .numer()
                .try_into()
                .map_err(|_| SymbolicError::Parse {
                    message: format!("exponent {q} out of range"),
                    offset: 0,
                })?;
            if k < 0 && !base.is_constant() {
                caveats.insert(base.clone());
            }
            base.pow(k)?
        }
        Ast::Call(func, arg) => Expr::apply(*func, &lower(arg, caveats)?)?,
    })
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or(self.src.len())
    }

    fn error(&self, message: &str) -> SymbolicError {
        SymbolicError::Parse {
            message: message.to_string(),
            offset: self.offset(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast, SymbolicError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, SymbolicError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, SymbolicError> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, SymbolicError> {
        let base = self.primary()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Ast::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast, SymbolicError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len() {
                    let c = self.chars[self.pos].1;
                    if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
                if let Some(func) = Func::from_name(&name) {
                    if self.eat('(') {
                        let arg = self.expr()?;
                        if !self.eat(')') {
                            return Err(self.error("expected `)` after function argument"));
                        }
                        return Ok(Ast::Call(func, Box::new(arg)));
                    }
                    return Err(self.error(&format!("`{name}` must be applied to an argument")));
                }
                Ok(Ast::Var(name))
            }
            Some(c) => Err(self.error(&format!("unexpected character `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Ast, SymbolicError> {
        let start = self.pos;
        let mut seen_dot = false;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos].1;
            if c.is_ascii_digit() {
                self.pos += 1;
            } else if c == '.' && !seen_dot {
                seen_dot = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        let text: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        let (int_part, frac_part) = match text.split_once('.') {
            Some((a, b)) => (a, b),
            None => (text.as_str(), ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| self.error("malformed number"))?;
        let mut denom = BigInt::one();
        for _ in 0..frac_part.len() {
            denom *= 10;
        }
        let q = Rational::new(numer, denom);
        Ok(Ast::Num(if q.is_zero() { Rational::zero() } else { q }))
    }
}

impl FromStr for Expr {
    type Err = SymbolicError;
    fn from_str(s: &str) -> Result<Expr, SymbolicError> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_literals() {
        assert_eq!(parse("1 + 2*3^2").unwrap(), Expr::int(19));
        assert_eq!(parse("-2^2").unwrap(), Expr::int(-4));
        assert_eq!(parse("0.25").unwrap(), Expr::frac(1, 4));
        assert_eq!(parse("3/6").unwrap(), Expr::frac(1, 2));
        assert_eq!(parse("2^-1").unwrap(), Expr::frac(1, 2));
    }

    #[test]
    fn dotted_identifiers() {
        let e = parse("g1.x * m2.y").unwrap();
        let vars: Vec<String> = e.free_vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(vars, vec!["g1.x", "m2.y"]);
    }

    #[test]
    fn cancellation_records_caveat() {
        let s = simplify(&parse_ast("x/x").unwrap()).unwrap();
        assert!(s.expr.is_one());
        assert_eq!(s.domain_caveats, vec![Expr::var("x")]);
    }

    #[test]
    fn transcendental_atoms_stay_opaque() {
        let e = parse("sin(x)*sin(x)").unwrap();
        assert_eq!(e.to_string(), "sin(x)^2");
        assert!(!parse("sin(x)^2 + cos(x)^2 - 1").unwrap().is_zero());
    }

    #[test]
    fn errors_carry_offsets() {
        match parse("x + * y") {
            Err(SymbolicError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("1/(x-x)"), Err(SymbolicError::DivisionByZero)));
        assert!(parse("x^y").is_err());
        assert!(parse("sin").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "(x + y)^3/(x*y - 1)",
            "-3/7*x^2*y + sin(x*y)/z",
            "sqrt(x^2 + 1) - exp(-y)",
            "1/(2*x)",
            "cos(t)*m1.x - 1/2",
        ] {
            let e = parse(s).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s} printed as {e}");
        }
    }
}
