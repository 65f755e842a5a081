//! Exact polynomial arithmetic over rational-complex coefficients.
//!
//! - [`RationalComplex`]: exact scalar field `Q(i)`
//! - [`Poly1`]: dense univariate polynomials (coefficients of functions of a Hamiltonian)
//! - [`PolyN`]: sparse multivariate polynomials in graded-lex order (Poisson brackets, potentials)
//! - [`parse_poly`] / [`parse_poly_with`]: the expression grammar used by algebra-definition files
//!
//! Symbolic work stays exact; conversion to `Complex64` happens only when a polynomial is
//! evaluated numerically ([`Poly1::eval_matrix`], [`PolyN::eval_c64`]).

mod parse;
mod poly1;
mod polyn;
mod scalar;

use std::fmt;

use thiserror::Error;

pub(crate) use parse::{parse_expr, ExprRing, Resolver};
pub use parse::{parse_poly, parse_poly_with, parse_scalar};
pub use poly1::Poly1;
pub use polyn::{Monomial, PolyN};
pub use scalar::RationalComplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier '{name}' at offset {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("'{0}' is reserved for the imaginary unit")]
    ReservedName(String),
    #[error("variable index {index} out of range for {nvars} variables")]
    VarIndex { index: usize, nvars: usize },
    #[error("variable-count mismatch: {left} vs {right}")]
    VarCount { left: usize, right: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
}

/// Shared term printer: `coeff * name^e * ...`, joined with ` + ` / ` - `.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (RationalComplex, Vec<(&'a str, u32)>)>,
) -> fmt::Result {
    let mut first = true;
    for (c, powers) in terms {
        let negative = c.prints_negative();
        let c = if negative { -c } else { c };
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else if negative {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        let mut need_star = false;
        if !c.is_one() || powers.is_empty() {
            write!(f, "{c}")?;
            need_star = true;
        }
        for (name, e) in powers {
            if need_star {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            need_star = true;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
