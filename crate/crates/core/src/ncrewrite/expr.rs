use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{parse_expr, ExprRing, Poly1, PolyError, RationalComplex, Resolver};

/// A word in the free monoid on generator names.
pub type Word = Vec<String>;

/// Noncommutative polynomial: linear combination of words with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NcExpression {
    terms: BTreeMap<Word, RationalComplex>,
}

impl NcExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: RationalComplex) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn one() -> Self {
        Self::scalar(RationalComplex::one())
    }

    pub fn generator(name: &str) -> Self {
        Self::term(vec![name.to_string()], RationalComplex::one())
    }

    pub fn term(word: Word, c: RationalComplex) -> Self {
        let mut e = Self::zero();
        e.add_term(word, c);
        e
    }

    /// `c * w1 w2 ... wk` from string slices.
    pub fn word(word: &[&str], c: RationalComplex) -> Self {
        Self::term(word.iter().map(|s| s.to_string()).collect(), c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, RationalComplex)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, word: Word, c: RationalComplex) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RationalComplex)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[&str]) -> RationalComplex {
        let w: Word = word.iter().map(|s| s.to_string()).collect();
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &RationalComplex) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, a)| (w.clone(), a * c)))
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Concatenation product (no reordering).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, a) in &self.terms {
            for (wb, b) in &other.terms {
                let mut w = wa.clone();
                w.extend(wb.iter().cloned());
                out.add_term(w, a * b);
            }
        }
        out
    }

    /// Every generator name that occurs.
    pub fn generators(&self) -> std::collections::BTreeSet<&str> {
        self.terms.keys().flatten().map(String::as_str).collect()
    }

    /// Groups words as `h^k · rest` with `rest` not starting with `h`, returning
    /// `rest ↦ Σ_k c_k x^k`. For a normal-ordered expression in which `h` is the
    /// smallest generator this reads off the coefficient polynomials in `h`.
    pub fn split_leading_powers(&self, h: &str) -> BTreeMap<Word, Poly1> {
        let mut acc: BTreeMap<Word, Vec<RationalComplex>> = BTreeMap::new();
        for (w, c) in &self.terms {
            let k = w.iter().take_while(|g| *g == h).count();
            let rest = w[k..].to_vec();
            let cs = acc.entry(rest).or_default();
            if cs.len() <= k {
                cs.resize(k + 1, RationalComplex::zero());
            }
            cs[k] = c.clone();
        }
        acc.into_iter().map(|(w, cs)| (w, Poly1::new(cs))).collect()
    }

    /// Parses the polynomial grammar with noncommutative `*` over `generators`;
    /// `params` are substituted as scalars.
    pub fn parse(
        text: &str,
        generators: &[&str],
        params: &BTreeMap<String, RationalComplex>,
    ) -> Result<Self, PolyError> {
        let var = |name: &str| {
            if generators.contains(&name) {
                return Some(NcExpression::generator(name));
            }
            params.get(name).map(|c| NcExpression::scalar(c.clone()))
        };
        let constant = NcExpression::scalar;
        parse_expr(text, &Resolver { var: &var, constant: &constant })
    }
}

impl ExprRing for NcExpression {
    fn add(&self, other: &Self) -> Self {
        NcExpression::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        NcExpression::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        NcExpression::mul(self, other)
    }
    fn neg(&self) -> Self {
        NcExpression::neg(self)
    }
    fn scale(&self, c: &RationalComplex) -> Self {
        NcExpression::scale(self, c)
    }
    fn as_constant(&self) -> Option<RationalComplex> {
        match self.terms.iter().next() {
            None => Some(RationalComplex::zero()),
            Some((w, c)) if self.terms.len() == 1 && w.is_empty() => Some(c.clone()),
            _ => None,
        }
    }
    fn constant_like(&self, c: RationalComplex) -> Self {
        NcExpression::scalar(c)
    }
}

impl fmt::Display for NcExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Longest words first, then lexicographic.
        let mut words: Vec<_> = self.terms.iter().collect();
        words.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        let terms = words.into_iter().map(|(w, c)| {
            let mut powers: Vec<(&str, u32)> = Vec::new();
            for g in w {
                match powers.last_mut() {
                    Some((name, e)) if *name == g.as_str() => *e += 1,
                    _ => powers.push((g.as_str(), 1)),
                }
            }
            (c.clone(), powers)
        });
        crate::poly::write_terms(f, terms)
    }
}
