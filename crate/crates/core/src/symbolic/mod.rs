//! Exact scalar expressions, parsing, and zero testing.

pub mod expr;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod zero;

pub use expr::{EvalError, Evaluation, Expr};
pub use parse::{parse, parse_ast, simplify, Ast, Simplified};
pub use poly::{Atom, Func, Poly, Rational};
pub use zero::{aggregate, is_zero, is_zero_over, Aggregate, Point, SamplePolicy, ZeroVerdict};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SymbolicError {
    #[error("division by an identically zero expression")]
    DivisionByZero,
    #[error("parse error at offset {offset}: {message}")]
    Parse { message: String, offset: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Partial derivative with respect to a declared variable.
pub fn differentiate<S: AsRef<str>>(
    e: &Expr,
    var: &str,
    declared: &[S],
) -> Result<Expr, SymbolicError> {
    if !declared.iter().any(|d| d.as_ref() == var) {
        return Err(SymbolicError::UnknownVariable(var.to_string()));
    }
    Ok(e.diff(var))
}
