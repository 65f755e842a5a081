//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' exponent)?
//! base   := name | number | 'i' | '(' expr ')'
//! ```
//!
//! Numbers are integers or finite decimals; `p/q` is a division of constants. Division
//! is only allowed by nonzero constants. Named parameters are substituted as constants.
//! An exponent may also be a name (`q^s`, `q^-s`): this refers to a variable literally
//! named `q^s` / `q^-s`, which lets difference-operator stencils carry `q^s` as a primitive.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{PolyError, PolyN, RationalComplex};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let int_part = &text[start..i];
            let mut value = if int_part.is_empty() {
                BigRational::zero()
            } else {
                BigRational::from_integer(int_part.parse::<BigInt>().expect("digits"))
            };
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                let fs = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let frac = &text[fs..i];
                if !frac.is_empty() {
                    let num: BigInt = frac.parse().expect("digits");
                    let den = num_traits::pow(BigInt::from(10), frac.len());
                    value += BigRational::new(num, den);
                }
            }
            out.push((start, Tok::Num(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(PolyError::Syntax { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

/// Arithmetic needed by the parser; implemented by commutative and noncommutative polynomials.
pub(crate) trait ExprRing: Clone {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &RationalComplex) -> Self;
    /// `Some(c)` when the element is the constant `c`.
    fn as_constant(&self) -> Option<RationalComplex>;
    fn pow(&self, e: u32) -> Self {
        (0..e).fold(self.constant_like(RationalComplex::one()), |acc, _| acc.mul(self))
    }
    /// The constant `c` in the same ambient ring as `self`.
    fn constant_like(&self, c: RationalComplex) -> Self;
}

/// Name resolution: `var` is consulted first, then the imaginary unit `i`.
pub(crate) struct Resolver<'a, R> {
    pub var: &'a dyn Fn(&str) -> Option<R>,
    pub constant: &'a dyn Fn(RationalComplex) -> R,
}

struct Parser<'a, R> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    resolver: &'a Resolver<'a, R>,
}

impl<R: ExprRing> Parser<'_, R> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<R, PolyError> {
        let negate = if self.eat_op('-') {
            true
        } else {
            self.eat_op('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat_op('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat_op('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<R, PolyError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat_op('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.offset();
                self.pos += 1;
                let d = self.factor()?;
                match d.as_constant().and_then(|c| c.inv()) {
                    Some(inv) => acc = acc.scale(&inv),
                    None => {
                        return Err(PolyError::Syntax {
                            pos: at,
                            msg: "division is only allowed by a nonzero constant".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<R, PolyError> {
        if self.eat_op('-') {
            return Ok(self.factor()?.neg());
        }
        if let Some(Tok::Ident(name)) = self.peek().cloned() {
            // `name ^ ident` is looked up before evaluating `name` on its own.
            if let Some(v) = self.symbolic_power(&name) {
                return Ok(v);
            }
        }
        let base = self.base()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) if n.is_integer() && n >= &BigRational::zero() => {
                let e: u32 = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| PolyError::Syntax { pos: self.offset(), msg: "exponent too large".into() })?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => self.syntax("expected a nonnegative integer exponent"),
        }
    }

    /// Recognises `name ^ ident`, `name ^ -ident` and `name ^ (-ident)` when the
    /// combined spelling resolves as a variable; consumes the tokens on success.
    fn symbolic_power(&mut self, name: &str) -> Option<R> {
        let rest: Vec<&Tok> = self.toks[self.pos..].iter().map(|(_, t)| t).take(6).collect();
        let (spelled, used) = match rest.as_slice() {
            [_, Tok::Op('^'), Tok::Op('('), Tok::Op('-'), Tok::Ident(e), Tok::Op(')'), ..] => {
                (format!("{name}^-{e}"), 6)
            }
            [_, Tok::Op('^'), Tok::Op('-'), Tok::Ident(e), ..] => (format!("{name}^-{e}"), 4),
            [_, Tok::Op('^'), Tok::Ident(e), ..] => (format!("{name}^{e}"), 3),
            _ => return None,
        };
        let v = (self.resolver.var)(&spelled)?;
        self.pos += used;
        Some(v)
    }

    fn lookup(&self, name: &str, at: usize) -> Result<R, PolyError> {
        if let Some(v) = (self.resolver.var)(name) {
            return Ok(v);
        }
        if name == "i" {
            return Ok((self.resolver.constant)(RationalComplex::i()));
        }
        Err(PolyError::UnknownIdentifier { name: name.to_string(), pos: at })
    }

    fn base(&mut self) -> Result<R, PolyError> {
        let at = self.offset();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok((self.resolver.constant)(RationalComplex::real(n)))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                self.lookup(&name, at)
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return self.syntax("expected ')'");
                }
                Ok(e)
            }
            Some(_) => self.syntax("expected a number, name or '('"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

/// Parses `text` in any [`ExprRing`] with the given name resolution.
pub(crate) fn parse_expr<R: ExprRing>(text: &str, resolver: &Resolver<'_, R>) -> Result<R, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), resolver };
    if p.peek().is_none() {
        return p.syntax("empty expression");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.syntax("unexpected trailing input");
    }
    Ok(out)
}

impl ExprRing for PolyN {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &RationalComplex) -> Self {
        PolyN::scale(self, c)
    }
    fn as_constant(&self) -> Option<RationalComplex> {
        (self.total_degree().unwrap_or(0) == 0).then(|| self.constant_term())
    }
    fn pow(&self, e: u32) -> Self {
        PolyN::pow(self, e)
    }
    fn constant_like(&self, c: RationalComplex) -> Self {
        PolyN::constant(self.nvars(), c)
    }
}

/// Parses `text` into an expanded polynomial over `vars`.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<PolyN, PolyError> {
    parse_poly_with(text, vars, &BTreeMap::new())
}

/// Like [`parse_poly`], substituting the named `params` as constants.
pub fn parse_poly_with(
    text: &str,
    vars: &[&str],
    params: &BTreeMap<String, RationalComplex>,
) -> Result<PolyN, PolyError> {
    if let Some(v) = vars.iter().find(|v| **v == "i") {
        return Err(PolyError::ReservedName(v.to_string()));
    }
    let n = vars.len();
    let var = |name: &str| {
        if let Some(i) = vars.iter().position(|v| *v == name) {
            return Some(PolyN::var(n, i));
        }
        params.get(name).map(|c| PolyN::constant(n, c.clone()))
    };
    let constant = |c: RationalComplex| PolyN::constant(n, c);
    parse_expr(text, &Resolver { var: &var, constant: &constant })
}

/// Parses a constant expression (no variables) such as `1/2`, `-0.25` or `2 - i/3`.
pub fn parse_scalar(
    text: &str,
    params: &BTreeMap<String, RationalComplex>,
) -> Result<RationalComplex, PolyError> {
    Ok(parse_poly_with(text, &[], params)?.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_expansion() {
        let a = parse_poly("a", &["a"]).unwrap();
        assert_eq!(a, PolyN::var(1, 0));
        let sq = parse_poly("(x+y)^2", &["x", "y"]).unwrap();
        let expect = PolyN::from_terms(
            2,
            [
                (vec![2, 0], RationalComplex::one()),
                (vec![1, 1], RationalComplex::from_int(2)),
                (vec![0, 2], RationalComplex::one()),
            ],
        );
        assert_eq!(sq, expect);
        let lit = parse_poly("2*x*y - 1", &["x", "y"]).unwrap();
        assert_eq!(
            lit,
            PolyN::from_terms(
                2,
                [(vec![1, 1], RationalComplex::from_int(2)), (vec![0, 0], RationalComplex::from_int(-1))]
            )
        );
    }

    #[test]
    fn literals_and_units() {
        let p = parse_scalar("0.25 - 3/4", &BTreeMap::new()).unwrap();
        assert_eq!(p, RationalComplex::from_ratio(-1, 2));
        let z = parse_scalar("i*i", &BTreeMap::new()).unwrap();
        assert_eq!(z, RationalComplex::from_int(-1));
        assert_eq!(parse_scalar(".5", &BTreeMap::new()).unwrap(), RationalComplex::from_ratio(1, 2));
    }

    #[test]
    fn parameters_substitute() {
        let mut params = BTreeMap::new();
        params.insert("q".to_string(), RationalComplex::from_ratio(1, 2));
        let p = parse_poly_with("q*x - (1-q)", &["x"], &params).unwrap();
        assert_eq!(p, parse_poly("x/2 - 1/2", &["x"]).unwrap());
    }

    #[test]
    fn symbolic_power_variables() {
        let vars = ["s", "q^s", "q^-s"];
        let p = parse_poly("q^s + q^(-s) + 2*q^-s*s", &vars).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.coeff(&[0, 1, 0]), RationalComplex::one());
        assert_eq!(p.coeff(&[1, 0, 1]), RationalComplex::from_int(2));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x + * y", &["x", "y"]) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_poly("x + w", &["x"]) {
            Err(PolyError::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "w");
                assert_eq!(pos, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly("x / y", &["x", "y"]).is_err());
        assert!(parse_poly("x / 0", &["x"]).is_err());
        assert!(parse_poly("(x", &["x"]).is_err());
        assert!(parse_poly("", &["x"]).is_err());
        assert!(parse_poly("x^y", &["x", "y"]).is_err());
        assert!(matches!(parse_poly("i", &["i"]), Err(PolyError::ReservedName(_))));
    }

    #[test]
    fn printing_then_parsing_is_a_fixed_point() {
        let vars = ["x", "y", "z"];
        for text in ["(1+2*i)*x*y - i*z^3/7 + 3/2", "-x^2 - y", "-i*x + (2-i)", "0"] {
            let p = parse_poly(text, &vars).unwrap();
            let printed = p.display_with(&vars).to_string();
            let back = parse_poly(&printed, &vars).unwrap();
            assert_eq!(p, back, "{text} -> {printed}");
            assert_eq!(printed, back.display_with(&vars).to_string());
        }
    }
}
