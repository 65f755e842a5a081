use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{PolyError, RationalComplex};

/// Univariate polynomial with exact coefficients; `coeffs[k]` multiplies `x^k`.
///
/// The zero polynomial is the empty coefficient vector and has no degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly1 {
    coeffs: Vec<RationalComplex>,
}

impl Poly1 {
    pub fn new(mut coeffs: Vec<RationalComplex>) -> Self {
        while coeffs.last().is_some_and(RationalComplex::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(RationalComplex::one())
    }

    pub fn constant(c: RationalComplex) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::monomial(RationalComplex::one(), 1)
    }

    pub fn monomial(c: RationalComplex, k: usize) -> Self {
        let mut v = vec![RationalComplex::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| RationalComplex::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[RationalComplex] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> RationalComplex {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial (negative infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &RationalComplex) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![RationalComplex::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self { coeffs: v }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &RationalComplex::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &RationalComplex) -> RationalComplex {
        self.coeffs.iter().rev().fold(RationalComplex::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
    }

    /// Horner evaluation `p(M)` in double precision.
    pub fn eval_matrix(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, PolyError> {
        if !m.is_square() {
            return Err(PolyError::NonSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let n = m.nrows();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc * m;
            let c = c.to_c64();
            for k in 0..n {
                acc[(k, k)] += c;
            }
        }
        Ok(acc)
    }

    /// Renders the polynomial in the expression grammar using `var` as the indeterminate.
    pub fn display_with<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        Poly1Display { p: self, var }
    }
}

struct Poly1Display<'a> {
    p: &'a Poly1,
    var: &'a str,
}

impl fmt::Display for Poly1Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .p
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), if k == 0 { vec![] } else { vec![(self.var, k as u32)] }));
        super::write_terms(f, terms)
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with("x").fmt(f)
    }
}

impl Add<&Poly1> for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly1> for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly1::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul<&Poly1> for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        if self.is_zero() || rhs.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![RationalComplex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly1::new(out)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1 { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly1 {
            type Output = Poly1;
            fn $m(self, rhs: Poly1) -> Poly1 { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Poly1> for Poly1 {
            type Output = Poly1;
            fn $m(self, rhs: &Poly1) -> Poly1 { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_matrix(rows: usize, data: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(rows, rows, data.iter().map(|&x| c(x, 0.0)))
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Poly1::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly1::from_ints(&[0, 0]).degree(), None);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn eval_matrix_examples() {
        let nil = real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
        let sq = Poly1::monomial(RationalComplex::one(), 2).eval_matrix(&nil).unwrap();
        assert_eq!(sq, DMatrix::zeros(2, 2));

        let id = DMatrix::<Complex64>::identity(2, 2);
        let p = Poly1::from_ints(&[1, 1]).eval_matrix(&id).unwrap();
        assert_eq!(p, id.scale(2.0));

        let m = real_matrix(2, &[1.0, 2.0, 3.0, 4.0]);
        let p = Poly1::from_ints(&[0, 2]).eval_matrix(&m).unwrap();
        assert_eq!(p, real_matrix(2, &[2.0, 4.0, 6.0, 8.0]));

        let k = Poly1::from_ints(&[5]).eval_matrix(&m).unwrap();
        assert_eq!(k, id.scale(5.0));
    }

    #[test]
    fn eval_matrix_rejects_non_square() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(Poly1::x().eval_matrix(&m), Err(PolyError::NonSquare { .. })));
    }

    #[test]
    fn display_in_named_variable() {
        let p = Poly1::new(vec![
            RationalComplex::from_int(-1),
            RationalComplex::zero(),
            RationalComplex::from_ratio(1, 2),
        ]);
        assert_eq!(p.display_with("H").to_string(), "1/2*H^2 - 1");
        assert_eq!(Poly1::zero().to_string(), "0");
    }
}
