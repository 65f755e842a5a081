//! Numeric evaluation of noncommutative identities on an [`OperatorRep`].
//!
//! ```text
//! relation := expr ('=' expr)?
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | base ('^' integer)?
//! base     := number | 'i' | name | '(' expr ')'
//!           | '[' expr ',' expr ']' ('_' base)?      commutator, or q-commutator with '_q'
//!           | '{' expr ',' expr '}'                  anticommutator
//! ```
//!
//! Names resolve to operators first, then to scalar parameters (the representation's
//! metadata, overridden by explicit `params`). Scalars act as multiples of the identity.
//! The q-commutator is `[X,Y]_q = q^{1/2}XY − q^{−1/2}YX` with the principal square root.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{OperatorRep, RepError};
use crate::linalg::{c, frobenius, identity, relative, CMatrix};

#[derive(Clone, Debug)]
enum Val {
    Scalar(Complex64),
    Mat(CMatrix),
}

impl Val {
    fn into_mat(self, d: usize) -> CMatrix {
        match self {
            Val::Scalar(z) => identity(d) * z,
            Val::Mat(m) => m,
        }
    }

    fn add(self, other: Val, d: usize) -> Val {
        match (self, other) {
            (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a + b),
            (a, b) => Val::Mat(a.into_mat(d) + b.into_mat(d)),
        }
    }

    fn neg(self) -> Val {
        match self {
            Val::Scalar(a) => Val::Scalar(-a),
            Val::Mat(m) => Val::Mat(-m),
        }
    }

    fn mul(self, other: Val) -> Val {
        match (self, other) {
            (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a * b),
            (Val::Scalar(a), Val::Mat(m)) | (Val::Mat(m), Val::Scalar(a)) => Val::Mat(m * a),
            (Val::Mat(a), Val::Mat(b)) => Val::Mat(a * b),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    dim: usize,
    ops: &'a BTreeMap<String, CMatrix>,
    scalars: &'a BTreeMap<String, Complex64>,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, RepError> {
        Err(RepError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|ch: char| ch.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), RepError> {
        if self.eat(ch) {
            Ok(())
        } else {
            self.err(format!("expected '{ch}'"))
        }
    }

    fn expr(&mut self) -> Result<Val, RepError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?, self.dim);
            } else if self.eat('-') {
                acc = acc.add(self.term()?.neg(), self.dim);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Val, RepError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(self.factor()?);
            } else if self.eat('/') {
                match self.factor()? {
                    Val::Scalar(z) if z != c(0.0, 0.0) => acc = acc.mul(Val::Scalar(z.inv())),
                    Val::Scalar(_) => return self.err("division by zero"),
                    Val::Mat(_) => return self.err("division by an operator"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Val, RepError> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while self.text[self.pos..].starts_with(|ch: char| ch.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: u32 = match self.text[start..self.pos].parse() {
                Ok(e) => e,
                Err(_) => return self.err("expected a nonnegative integer exponent"),
            };
            return Ok(match base {
                Val::Scalar(z) => Val::Scalar(z.powu(e)),
                Val::Mat(m) => Val::Mat((0..e).fold(identity(self.dim), |acc, _| acc * &m)),
            });
        }
        Ok(base)
    }

    fn pair(&mut self, close: char) -> Result<(CMatrix, CMatrix), RepError> {
        let a = self.expr()?.into_mat(self.dim);
        self.expect(',')?;
        let b = self.expr()?.into_mat(self.dim);
        self.expect(close)?;
        Ok((a, b))
    }

    fn base(&mut self) -> Result<Val, RepError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('[') => {
                self.pos += 1;
                let (a, b) = self.pair(']')?;
                if self.eat('_') {
                    let q = match self.base()? {
                        Val::Scalar(q) if q != c(0.0, 0.0) => q,
                        _ => return self.err("q-commutator parameter must be a nonzero scalar"),
                    };
                    let r = q.sqrt();
                    Ok(Val::Mat(&a * &b * r - &b * &a * r.inv()))
                } else {
                    Ok(Val::Mat(&a * &b - &b * &a))
                }
            }
            Some('{') => {
                self.pos += 1;
                let (a, b) = self.pair('}')?;
                Ok(Val::Mat(&a * &b + &b * &a))
            }
            Some(ch) if ch.is_ascii_digit() || ch == '.' => {
                let start = self.pos;
                while self.text[self.pos..].starts_with(|ch: char| ch.is_ascii_digit() || ch == '.') {
                    self.pos += 1;
                }
                match self.text[start..self.pos].parse::<f64>() {
                    Ok(v) => Ok(Val::Scalar(c(v, 0.0))),
                    Err(_) => self.err("malformed number"),
                }
            }
            Some(ch) if ch.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.text[self.pos..].starts_with(|ch: char| ch.is_ascii_alphanumeric() || ch == '_') {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                if let Some(m) = self.ops.get(name) {
                    Ok(Val::Mat(m.clone()))
                } else if let Some(z) = self.scalars.get(name) {
                    Ok(Val::Scalar(*z))
                } else if name == "i" {
                    Ok(Val::Scalar(c(0.0, 1.0)))
                } else {
                    Err(RepError::UnboundName(name.to_string()))
                }
            }
            Some(ch) => self.err(format!("unexpected character '{ch}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn scalars(rep: &OperatorRep, params: &BTreeMap<String, Complex64>) -> BTreeMap<String, Complex64> {
    let mut all = rep.metadata().clone();
    all.extend(params.iter().map(|(k, v)| (k.clone(), *v)));
    all
}

fn parse_side(text: &str, offset: usize, rep: &OperatorRep, scalars: &BTreeMap<String, Complex64>) -> Result<CMatrix, RepError> {
    let mut p = Parser { text, pos: 0, dim: rep.dim(), ops: rep.ops(), scalars };
    let v = p.expr().map_err(|e| match e {
        RepError::Syntax { pos, msg } => RepError::Syntax { pos: pos + offset, msg },
        other => other,
    })?;
    if p.peek().is_some() {
        return Err(RepError::Syntax { pos: p.pos + offset, msg: "trailing input".into() });
    }
    Ok(v.into_mat(rep.dim()))
}

/// Evaluates an expression (no `=`) to a matrix.
pub fn evaluate(text: &str, rep: &OperatorRep, params: &BTreeMap<String, Complex64>) -> Result<CMatrix, RepError> {
    parse_side(text, 0, rep, &scalars(rep, params))
}

/// `‖LHS − RHS‖_F / max(‖LHS‖_F, ‖RHS‖_F)` for `"LHS = RHS"` (or `"LHS"`, meaning `= 0`),
/// absolute when both sides vanish.
pub fn relation_residual(
    relation: &str,
    rep: &OperatorRep,
    params: &BTreeMap<String, Complex64>,
) -> Result<f64, RepError> {
    let scalars = scalars(rep, params);
    let (lhs, rhs) = match relation.split_once('=') {
        Some((l, r)) => (parse_side(l, 0, rep, &scalars)?, parse_side(r, l.len() + 1, rep, &scalars)?),
        None => {
            let l = parse_side(relation, 0, rep, &scalars)?;
            let zero = CMatrix::zeros(rep.dim(), rep.dim());
            (l, zero)
        }
    };
    Ok(relative(frobenius(&(&lhs - &rhs)), frobenius(&lhs).max(frobenius(&rhs))))
}
