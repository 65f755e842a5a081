use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Poly1, PolyError, RationalComplex};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over [`RationalComplex`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyN {
    nvars: usize,
    terms: BTreeMap<Monomial, RationalComplex>,
}

impl PolyN {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: RationalComplex) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, RationalComplex::one())
    }

    /// The coordinate polynomial `x_i`. Panics if `i >= nvars`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), RationalComplex::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, RationalComplex)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RationalComplex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> RationalComplex {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> RationalComplex {
        self.coeff(&vec![0; self.nvars])
    }

    /// Largest total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    fn add_term(&mut self, m: Monomial, c: RationalComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &RationalComplex) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VarIndex { index: i, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, c * &RationalComplex::from_int(e as i64));
        }
        Ok(out)
    }

    /// Maximum over terms of the summed exponents of the variables in `subset`.
    ///
    /// Zero for the zero polynomial and for constants.
    pub fn degree_profile(&self, subset: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| subset.iter().map(|&i| m.0.get(i).copied().unwrap_or(0)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in the single variable `x_i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.degree_profile(&[i])
    }

    pub fn eval_c64(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.to_c64(), |acc, (&e, &x)| acc * x.powu(e))
            })
            .sum()
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let z: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.eval_c64(&z).re
    }

    /// Exact evaluation at a rational-complex point.
    pub fn eval(&self, point: &[RationalComplex]) -> RationalComplex {
        let mut acc = RationalComplex::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, x) in m.0.iter().zip(point) {
                if e > 0 {
                    t = &t * &x.powi(e as i32).expect("nonnegative exponent");
                }
            }
            acc += &t;
        }
        acc
    }

    /// Restricts to terms free of every variable except `x_keep` and returns them as a [`Poly1`].
    ///
    /// Returns `None` when some term involves another variable.
    pub fn as_univariate(&self, keep: usize) -> Option<Poly1> {
        let mut cs = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != keep && e != 0) {
                return None;
            }
            let k = m.0[keep] as usize;
            if cs.len() <= k {
                cs.resize(k + 1, RationalComplex::zero());
            }
            cs[k] = c.clone();
        }
        Some(Poly1::new(cs))
    }

    /// Embeds a univariate polynomial as a polynomial in `x_var`.
    pub fn from_univariate(p: &Poly1, nvars: usize, var: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Splits `self` as `sum_k x_i^k * c_k` where the `c_k` do not involve `x_i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<PolyN> {
        let mut out: Vec<PolyN> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            while out.len() <= k {
                out.push(PolyN::zero(self.nvars));
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            out[k].add_term(rest, c.clone());
        }
        out
    }

    /// `p(a₁x₁ + b₁, …, a_N x_N + b_N)`.
    pub fn compose_affine(&self, scale: &[RationalComplex], shift: &[RationalComplex]) -> PolyN {
        let n = self.nvars;
        let images: Vec<PolyN> = (0..n)
            .map(|i| &PolyN::var(n, i).scale(&scale[i]) + &PolyN::constant(n, shift[i].clone()))
            .collect();
        let mut out = PolyN::zero(n);
        for (m, c) in &self.terms {
            let mut t = PolyN::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Renders with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        PolyNDisplay { p: self, names }
    }

    pub(crate) fn check_same_vars(&self, other: &PolyN) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCount { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }
}

struct PolyNDisplay<'a> {
    p: &'a PolyN,
    names: &'a [&'a str],
}

impl fmt::Display for PolyNDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.p.terms.iter().rev().map(|(m, c)| {
            let powers = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (self.names[i], e))
                .collect::<Vec<_>>();
            (c.clone(), powers)
        });
        super::write_terms(f, terms)
    }
}

impl fmt::Display for PolyN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let out = self.display_with(&refs).fmt(f);
        out
    }
}

impl Add<&PolyN> for &PolyN {
    type Output = PolyN;
    fn add(self, rhs: &PolyN) -> PolyN {
        assert_eq!(self.nvars, rhs.nvars, "variable-count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&PolyN> for &PolyN {
    type Output = PolyN;
    fn sub(self, rhs: &PolyN) -> PolyN {
        assert_eq!(self.nvars, rhs.nvars, "variable-count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&PolyN> for &PolyN {
    type Output = PolyN;
    fn mul(self, rhs: &PolyN) -> PolyN {
        assert_eq!(self.nvars, rhs.nvars, "variable-count mismatch");
        let mut out = PolyN::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), a * b);
            }
        }
        out
    }
}

impl Neg for &PolyN {
    type Output = PolyN;
    fn neg(self) -> PolyN {
        PolyN {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for PolyN {
            type Output = PolyN;
            fn $m(self, rhs: PolyN) -> PolyN { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);
