//! Askey–Wilson grids and second-order difference operators on them.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{stencil_matrix, OperatorRep, RepError};
use crate::linalg::{c, least_squares, CMatrix, CVector, DEFAULT_RCOND};
use crate::poly::{parse_poly_with, PolyN, RationalComplex};

/// A lattice `x(s)`.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    /// `c₁qˢ + c₂q⁻ˢ + c₀`.
    QQuadratic { q: Complex64, c0: Complex64, c1: Complex64, c2: Complex64 },
    /// `c₂s² + c₁s + c₀`.
    Quadratic { c0: Complex64, c1: Complex64, c2: Complex64 },
    /// `c₁s + c₀`.
    Linear { c0: Complex64, c1: Complex64 },
    /// Explicit values.
    Custom(Vec<Complex64>),
}

impl GridSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GridSpec::QQuadratic { .. } => "q_quadratic",
            GridSpec::Quadratic { .. } => "quadratic",
            GridSpec::Linear { .. } => "linear",
            GridSpec::Custom(_) => "custom",
        }
    }

    pub fn value(&self, s: usize) -> Complex64 {
        let sf = s as f64;
        match self {
            GridSpec::QQuadratic { q, c0, c1, c2 } => c1 * q.powi(s as i32) + c2 * q.powi(-(s as i32)) + c0,
            GridSpec::Quadratic { c0, c1, c2 } => c2 * sf * sf + c1 * sf + c0,
            GridSpec::Linear { c0, c1 } => c1 * sf + c0,
            GridSpec::Custom(v) => v.get(s).copied().unwrap_or(c(f64::NAN, 0.0)),
        }
    }

    /// `x(0), …, x(n−1)`.
    pub fn values(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|s| self.value(s)).collect()
    }
}

/// Rejects grids with `x(s) = x(s+1)` or `x(s) = x(s+2)`.
pub fn check_nondegenerate(x: &[Complex64]) -> Result<(), RepError> {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for s in 0..x.len() {
        for step in [1, 2] {
            if s + step < x.len() && (x[s] - x[s + step]).norm() <= 1e-14 * scale {
                return Err(RepError::DegenerateGrid(s));
            }
        }
    }
    Ok(())
}

/// Least-squares `(η, ζ)` in `x(s+1) + x(s−1) + ηx(s) + ζ = 0` over all interior `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridFit {
    pub eta: Complex64,
    pub zeta: Complex64,
    /// RMS of the recurrence defect.
    pub residual: f64,
}

pub fn aw_grid_check(x: &[Complex64]) -> Result<GridFit, RepError> {
    if x.len() < 5 {
        return Err(RepError::GridTooShort(x.len()));
    }
    check_nondegenerate(x)?;
    let m = x.len() - 2;
    let a = CMatrix::from_fn(m, 2, |r, col| if col == 0 { x[r + 1] } else { c(1.0, 0.0) });
    let b = CVector::from_fn(m, |r, _| -(x[r + 2] + x[r]));
    let ls = least_squares(&a, &b, DEFAULT_RCOND);
    Ok(GridFit { eta: ls.solution[0], zeta: ls.solution[1], residual: ls.residual / (m as f64).sqrt() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridVerdict {
    QQuadratic,
    Quadratic,
    Linear,
    NotAskeyWilson,
}

impl fmt::Display for GridVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridVerdict::QQuadratic => "q-quadratic",
            GridVerdict::Quadratic => "quadratic",
            GridVerdict::Linear => "linear (degenerate AW)",
            GridVerdict::NotAskeyWilson => "not an Askey-Wilson grid",
        })
    }
}

/// Names the grid family from a fit: `η ≠ −2` is q-quadratic, `η = −2` with `ζ ≠ 0`
/// quadratic, `η = −2, ζ = 0` linear.
pub fn grid_verdict(fit: &GridFit, tol: f64) -> GridVerdict {
    if fit.residual > tol {
        GridVerdict::NotAskeyWilson
    } else if (fit.eta + 2.0).norm() > tol.sqrt() {
        GridVerdict::QQuadratic
    } else if fit.zeta.norm() > tol.sqrt() {
        GridVerdict::Quadratic
    } else {
        GridVerdict::Linear
    }
}

/// `H = A(s)T⁺ + C(s)T⁻ + B(s)` on `s = 0..d−1` with `X = diag(x(s))`.
///
/// `A, B, C` are polynomials in `s`, `q^s` and `q^-s` (the latter two need the parameter `q`).
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceOp {
    pub d: usize,
    pub a: PolyN,
    pub b: PolyN,
    pub c: PolyN,
    pub grid: GridSpec,
    pub q: Option<Complex64>,
}

pub const STENCIL_VARS: [&str; 3] = ["s", "q^s", "q^-s"];

impl DifferenceOp {
    pub fn parse(
        d: usize,
        a: &str,
        b: &str,
        c: &str,
        grid: GridSpec,
        params: &BTreeMap<String, RationalComplex>,
    ) -> Result<Self, RepError> {
        if d < 3 {
            return Err(RepError::InvalidParameter(format!("dimension must be at least 3, got {d}")));
        }
        let p = |t: &str| parse_poly_with(t, &STENCIL_VARS, params);
        let (a, b, c) = (p(a)?, p(b)?, p(c)?);
        let q = params.get("q").map(RationalComplex::to_c64);
        let uses_q = [&a, &b, &c].iter().any(|poly| poly.degree_in(1) > 0 || poly.degree_in(2) > 0);
        if uses_q && q.is_none_or(|q| q == c64(0.0)) {
            return Err(RepError::InvalidParameter("stencil uses q^s but no nonzero q is given".into()));
        }
        Ok(DifferenceOp { d, a, b, c, grid, q })
    }

    /// Matrices `H` and `X`; the default pair is `(H, X)`.
    pub fn rep(&self) -> Result<OperatorRep, RepError> {
        let q = self.q.unwrap_or(c64(1.0));
        let point = |s: usize| [c64(s as f64), q.powi(s as i32), q.powi(-(s as i32))];
        let h = stencil_matrix(self.d, |s| {
            let pt = point(s);
            [self.a.eval_c64(&pt), self.b.eval_c64(&pt), self.c.eval_c64(&pt)]
        });
        let xs = self.grid.values(self.d);
        if xs.iter().any(|z| !z.is_finite()) {
            return Err(RepError::InvalidParameter(format!("grid has fewer than {} values", self.d)));
        }
        let x = CMatrix::from_diagonal(&CVector::from_vec(xs));
        let mut rep = OperatorRep::new(self.d).with_op("H", h)?.with_op("X", x)?;
        if let Some(q) = self.q {
            rep = rep.with_meta("q", q);
        }
        rep.with_pair("H", "X")
    }
}

fn c64(x: f64) -> Complex64 {
    c(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::{detect_closure, rep_krawtchouk, DEFAULT_BOUNDS};

    fn real(v: impl IntoIterator<Item = f64>) -> Vec<Complex64> {
        v.into_iter().map(c64).collect()
    }

    #[test]
    fn q_grid() {
        let fit = aw_grid_check(&real((0..10).map(|s| 0.5f64.powi(s)))).unwrap();
        assert!((fit.eta - c64(-2.5)).norm() < 1e-12);
        assert!(fit.zeta.norm() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert_eq!(grid_verdict(&fit, 1e-10), GridVerdict::QQuadratic);
    }

    #[test]
    fn quadratic_linear_and_cubic() {
        let fit = aw_grid_check(&real((0..10).map(|s| (s * s) as f64))).unwrap();
        assert!((fit.eta - c64(-2.0)).norm() < 1e-12 && (fit.zeta - c64(-2.0)).norm() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert_eq!(grid_verdict(&fit, 1e-10), GridVerdict::Quadratic);
        let fit = aw_grid_check(&real((0..10).map(|s| 3.0 * s as f64 - 1.0))).unwrap();
        assert_eq!(grid_verdict(&fit, 1e-10), GridVerdict::Linear);
        let fit = aw_grid_check(&real((0..10).map(|s| (s * s * s) as f64))).unwrap();
        assert!(fit.residual > 1e-2);
        assert_eq!(grid_verdict(&fit, 1e-10), GridVerdict::NotAskeyWilson);
    }

    #[test]
    fn every_spec_family_is_annihilated() {
        let specs = [
            GridSpec::QQuadratic { q: c64(0.5), c0: c64(1.0), c1: c64(2.0), c2: c64(-0.5) },
            GridSpec::QQuadratic { q: c(0.3, 0.8), c0: c64(0.0), c1: c64(1.0), c2: c64(1.0) },
            GridSpec::Quadratic { c0: c64(1.0), c1: c64(3.0), c2: c64(0.25) },
            GridSpec::Linear { c0: c64(4.0), c1: c64(-1.5) },
        ];
        for spec in specs {
            let fit = aw_grid_check(&spec.values(12)).unwrap();
            assert!(fit.residual < 1e-12, "{}: {}", spec.kind(), fit.residual);
        }
    }

    #[test]
    fn degenerate_and_short_grids() {
        assert_eq!(aw_grid_check(&real([0.0, 1.0, 2.0, 3.0])), Err(RepError::GridTooShort(4)));
        assert_eq!(aw_grid_check(&real([0.0, 1.0, 0.0, 2.0, 3.0])), Err(RepError::DegenerateGrid(0)));
        // Symmetric q-grid with c₁ = c₂ and q = −1 repeats with period 2.
        let spec = GridSpec::QQuadratic { q: c64(-1.0), c0: c64(0.0), c1: c64(1.0), c2: c64(0.0) };
        assert!(matches!(aw_grid_check(&spec.values(6)), Err(RepError::DegenerateGrid(_))));
    }

    #[test]
    fn custom_stencil_reproduces_krawtchouk() {
        let mut params = BTreeMap::new();
        params.insert("p".to_string(), RationalComplex::from_ratio(1, 3));
        let op = DifferenceOp::parse(
            12,
            "p*(11 - s)",
            "-p*(11 - s) - (1 - p)*s",
            "(1 - p)*s",
            GridSpec::Linear { c0: c64(0.0), c1: c64(1.0) },
            &params,
        )
        .unwrap();
        let rep = op.rep().unwrap();
        let k = rep_krawtchouk(12, 1.0 / 3.0).unwrap();
        assert!(crate::linalg::max_abs(&(rep.op("H").unwrap() - k.op("H").unwrap())) < 1e-14);
        let (h, x) = rep.pair().unwrap();
        assert!(detect_closure(h, x, DEFAULT_BOUNDS).unwrap().residual < 1e-10);
    }

    #[test]
    fn q_stencil_needs_q() {
        let grid = GridSpec::Linear { c0: c64(0.0), c1: c64(1.0) };
        assert!(DifferenceOp::parse(5, "q^s", "0", "1", grid.clone(), &BTreeMap::new()).is_err());
        let mut params = BTreeMap::new();
        params.insert("q".to_string(), RationalComplex::from_ratio(1, 2));
        let op = DifferenceOp::parse(5, "q^s + q^-s", "0", "1", grid, &params).unwrap();
        let h = op.rep().unwrap().op("H").unwrap().clone();
        assert!((h[(2, 3)] - c64(0.25 + 4.0)).norm() < 1e-14);
    }
}
