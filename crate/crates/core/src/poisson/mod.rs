//! Polynomial Poisson structures.
//!
//! A [`PoissonStructure`] stores `{x_i, x_k}` for `i < k` and extends to all polynomials by
//! antisymmetry and the Leibniz rule ([`bracket_fn`]). On top of it:
//!
//! - [`jacobi_defect`] / [`curl_test_3`]: the Jacobi identity, cyclic-sum and `F · rot F` forms
//! - [`nambu_from_potential`]: `{y,z} = Q_x`, `{z,x} = Q_y`, `{x,y} = Q_z`
//! - [`quasi_linear_decompose`]: `{x_k, x_j} = Σ′ F_s(x_j) x_s + Φ(x_j)`
//! - [`classify_canonical_30`]: the three-generator case analysis
//! - [`classical_flow_series`] and the [`ode_oracle`] it is checked against

mod classical;
mod classify;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::poly::{parse_poly_with, PolyError, PolyN, RationalComplex};

pub use classical::{
    classical_ad_action, classical_flow_series, ode_oracle, quasi_linear_decompose, QuasiLinearDecomposition,
};
pub use classify::{
    affine_transform, classify_canonical_20, classify_canonical_30, verify_affine, CaseLabel, Canonical20Form,
    Canonical30Form, TwoVarKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoissonError {
    #[error("expected {expected} variables, found {found}")]
    VarCount { expected: usize, found: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("bracket of a variable with itself ({0})")]
    DiagonalBracket(usize),
    #[error("duplicate variable name '{0}'")]
    DuplicateVariable(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("bracket {{x_{0}, x_j}} is not linear in the non-Hamiltonian variables")]
    NotQuasiLinear(usize),
    #[error("affine scale factor for variable {0} is zero")]
    SingularTransform(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `{x_i, x_k} = h_ik(x)` for `i < k`; the other orientation is the negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    vars: Vec<String>,
    brackets: BTreeMap<(usize, usize), PolyN>,
}

impl PoissonStructure {
    /// All brackets zero.
    pub fn new(vars: &[&str]) -> Result<Self, PoissonError> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(PoissonError::DuplicateVariable(v.to_string()));
            }
            if *v == "i" {
                return Err(PolyError::ReservedName(v.to_string()).into());
            }
        }
        Ok(Self { vars: vars.iter().map(|s| s.to_string()).collect(), brackets: BTreeMap::new() })
    }

    /// Variables `x1..xN`.
    pub fn with_default_names(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::new(&refs).expect("distinct names")
    }

    /// Sets `{x_i, x_k} = p` (and hence `{x_k, x_i} = −p`).
    pub fn with_bracket(mut self, i: usize, k: usize, p: PolyN) -> Result<Self, PoissonError> {
        self.set_bracket(i, k, p)?;
        Ok(self)
    }

    pub fn set_bracket(&mut self, i: usize, k: usize, p: PolyN) -> Result<(), PoissonError> {
        let n = self.nvars();
        for idx in [i, k] {
            if idx >= n {
                return Err(PoissonError::IndexOutOfRange { index: idx, nvars: n });
            }
        }
        if i == k {
            return Err(PoissonError::DiagonalBracket(i));
        }
        if p.nvars() != n {
            return Err(PoissonError::VarCount { expected: n, found: p.nvars() });
        }
        let (key, value) = if i < k { ((i, k), p) } else { ((k, i), -&p) };
        if value.is_zero() {
            self.brackets.remove(&key);
        } else {
            self.brackets.insert(key, value);
        }
        Ok(())
    }

    /// Parses brackets given as `("x", "y", "alpha*x*y - 1")`.
    pub fn parse(
        vars: &[&str],
        brackets: &[(&str, &str, &str)],
        params: &BTreeMap<String, RationalComplex>,
    ) -> Result<Self, PoissonError> {
        let mut s = Self::new(vars)?;
        for (a, b, text) in brackets {
            let i = s.index_of(a).ok_or_else(|| PoissonError::UnknownVariable(a.to_string()))?;
            let k = s.index_of(b).ok_or_else(|| PoissonError::UnknownVariable(b.to_string()))?;
            let p = parse_poly_with(text, vars, params)?;
            s.set_bracket(i, k, p)?;
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// `{x_i, x_k}`.
    pub fn bracket(&self, i: usize, k: usize) -> PolyN {
        let n = self.nvars();
        match i.cmp(&k) {
            std::cmp::Ordering::Less => self.brackets.get(&(i, k)).cloned().unwrap_or_else(|| PolyN::zero(n)),
            std::cmp::Ordering::Greater => -&self.bracket(k, i),
            std::cmp::Ordering::Equal => PolyN::zero(n),
        }
    }

    /// The stored nonzero brackets `(i, k, {x_i, x_k})` with `i < k`.
    pub fn brackets(&self) -> impl Iterator<Item = (usize, usize, &PolyN)> {
        self.brackets.iter().map(|(&(i, k), p)| (i, k, p))
    }

    /// `{x_i, x_k}` rendered with the structure's variable names.
    pub fn bracket_string(&self, i: usize, k: usize) -> String {
        let names = self.var_refs();
        let shown = self.bracket(i, k).display_with(&names).to_string();
        shown
    }
}

/// `{f, g} = Σ_{i<k} (∂_i f ∂_k g − ∂_k f ∂_i g) {x_i, x_k}`.
pub fn bracket_fn(f: &PolyN, g: &PolyN, s: &PoissonStructure) -> Result<PolyN, PoissonError> {
    let n = s.nvars();
    let probe = PolyN::zero(n);
    probe.check_same_vars(f)?;
    probe.check_same_vars(g)?;
    let df: Vec<PolyN> = (0..n).map(|i| f.partial(i)).collect::<Result<_, _>>()?;
    let dg: Vec<PolyN> = (0..n).map(|i| g.partial(i)).collect::<Result<_, _>>()?;
    let mut out = PolyN::zero(n);
    for (i, k, h) in s.brackets() {
        let jac = &(&df[i] * &dg[k]) - &(&df[k] * &dg[i]);
        if !jac.is_zero() {
            out = &out + &(&jac * h);
        }
    }
    Ok(out)
}

/// `{{x_i,x_k},x_j} + {{x_k,x_j},x_i} + {{x_j,x_i},x_k}` for every triple `i < k < j`.
///
/// Empty for `N < 3`, where the identity is vacuous.
pub fn jacobi_defect(s: &PoissonStructure) -> BTreeMap<(usize, usize, usize), PolyN> {
    let n = s.nvars();
    let x = |i| PolyN::var(n, i);
    let br = |f: &PolyN, g: &PolyN| bracket_fn(f, g, s).expect("same variable count");
    let mut out = BTreeMap::new();
    for i in 0..n {
        for k in i + 1..n {
            for j in k + 1..n {
                let defect = &(&br(&s.bracket(i, k), &x(j)) + &br(&s.bracket(k, j), &x(i)))
                    + &br(&s.bracket(j, i), &x(k));
                out.insert((i, k, j), defect);
            }
        }
    }
    out
}

/// Whether every Jacobi defect vanishes identically.
pub fn satisfies_jacobi(s: &PoissonStructure) -> bool {
    jacobi_defect(s).values().all(PolyN::is_zero)
}

/// `F · rot F` with `F = ({y,z}, {z,x}, {x,y})`; zero iff Jacobi holds.
pub fn curl_test_3(s: &PoissonStructure) -> Result<PolyN, PoissonError> {
    if s.nvars() != 3 {
        return Err(PoissonError::VarCount { expected: 3, found: s.nvars() });
    }
    let f = [s.bracket(1, 2), s.bracket(2, 0), s.bracket(0, 1)];
    let d = |p: &PolyN, i: usize| p.partial(i).expect("index in range");
    let rot = [&d(&f[2], 1) - &d(&f[1], 2), &d(&f[0], 2) - &d(&f[2], 0), &d(&f[1], 0) - &d(&f[0], 1)];
    Ok(f.iter().zip(&rot).fold(PolyN::zero(3), |acc, (a, b)| &acc + &(a * b)))
}

/// The Nambu structure `{y,z} = Q_x`, `{z,x} = Q_y`, `{x,y} = Q_z`, with Casimir `Q`.
pub fn nambu_from_potential(q: &PolyN) -> Result<PoissonStructure, PoissonError> {
    if q.nvars() != 3 {
        return Err(PoissonError::VarCount { expected: 3, found: q.nvars() });
    }
    PoissonStructure::new(&["x", "y", "z"])?
        .with_bracket(1, 2, q.partial(0)?)?
        .with_bracket(2, 0, q.partial(1)?)?
        .with_bracket(0, 1, q.partial(2)?)
}
