//! Concrete matrix representations and data-driven detection.
//!
//! - [`rep_q_oscillator`], [`rep_pauli_dg`], [`rep_krawtchouk`], [`DifferenceOp`]: named
//!   matrices in an [`OperatorRep`]
//! - [`relation_residual`]: evaluates an identity such as `[A0,[A0,[A0,A1]]] = omega^2*[A0,A1]`
//!   on a representation
//! - [`detect_closure`] / [`detect_dual_closure`]: least-squares fit of
//!   `ad²_H X ≈ W₁(H)X + W₂(H)Y + W₀(H)` with `Y = [H, X]`
//! - [`fit_tridiagonal_constants`]: the five constants of the tridiagonal relations
//! - [`aw_grid_check`]: recognizes grids with `x(s+1) + x(s−1) + ηx(s) + ζ = 0`

mod detect;
mod grid;
mod relation;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{c, CMatrix};
use crate::poly::{PolyError, RationalComplex};

pub use detect::{
    detect_closure, detect_dual_closure, fit_tridiagonal_constants, ClosureFit, TridiagonalFit, DEFAULT_BOUNDS,
};
pub use grid::{aw_grid_check, grid_verdict, DifferenceOp, GridFit, GridSpec, GridVerdict, STENCIL_VARS};
pub use relation::{evaluate, relation_residual};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix dimension mismatch: expected {expected}x{expected}, found {rows}x{cols}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },
    #[error("unbound name '{0}'")]
    UnboundName(String),
    #[error("relation syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("grid is degenerate at s = {0}")]
    DegenerateGrid(usize),
    #[error("grid needs at least 5 points, found {0}")]
    GridTooShort(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Named square matrices realizing an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorRep {
    dim: usize,
    ops: BTreeMap<String, CMatrix>,
    metadata: BTreeMap<String, Complex64>,
    /// Default `(H, X)` pair for closure detection.
    pair: Option<(String, String)>,
    /// Leading columns on which infinite-dimensional identities are trusted.
    verified_cols: usize,
}

impl OperatorRep {
    pub fn new(dim: usize) -> Self {
        OperatorRep { dim, ops: BTreeMap::new(), metadata: BTreeMap::new(), pair: None, verified_cols: dim }
    }

    pub fn with_op(mut self, name: &str, m: CMatrix) -> Result<Self, RepError> {
        self.insert(name, m)?;
        Ok(self)
    }

    pub fn insert(&mut self, name: &str, m: CMatrix) -> Result<(), RepError> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(RepError::DimensionMismatch { expected: self.dim, rows: m.nrows(), cols: m.ncols() });
        }
        self.ops.insert(name.to_string(), m);
        Ok(())
    }

    pub fn with_meta(mut self, key: &str, value: Complex64) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    /// Sets the default `(H, X)` pair; both names must be bound.
    pub fn with_pair(mut self, h: &str, x: &str) -> Result<Self, RepError> {
        for name in [h, x] {
            if !self.ops.contains_key(name) {
                return Err(RepError::UnboundName(name.to_string()));
            }
        }
        self.pair = Some((h.to_string(), x.to_string()));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &BTreeMap<String, CMatrix> {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Result<&CMatrix, RepError> {
        self.ops.get(name).ok_or_else(|| RepError::UnboundName(name.to_string()))
    }

    pub fn metadata(&self) -> &BTreeMap<String, Complex64> {
        &self.metadata
    }

    /// The default `(H, X)` matrices.
    pub fn pair(&self) -> Option<(&CMatrix, &CMatrix)> {
        self.pair.as_ref().map(|(h, x)| (&self.ops[h], &self.ops[x]))
    }

    /// Restricts oracle comparisons to the first `cols` columns.
    pub fn with_verified_cols(mut self, cols: usize) -> Self {
        self.verified_cols = cols.min(self.dim);
        self
    }

    /// Number of leading columns on which flows are compared with oracles; smaller than
    /// `dim` for truncations whose relations fail near the top state.
    pub fn verified_cols(&self) -> usize {
        self.verified_cols
    }

    pub fn pair_names(&self) -> Option<(&str, &str)> {
        self.pair.as_ref().map(|(h, x)| (h.as_str(), x.as_str()))
    }
}

/// `[n]_q = 1 + q + … + qⁿ⁻¹`, exactly.
fn q_number(n: usize, q: &RationalComplex) -> RationalComplex {
    let mut acc = RationalComplex::zero();
    let mut p = RationalComplex::one();
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * q;
    }
    acc
}

/// Truncated Fock space: `Y eₙ = eₙ₊₁`, `X eₙ = [n]_q eₙ₋₁`.
///
/// `XY − qYX = I` holds on `e₀..e_{d−2}`; on the top state it equals `−q[d−1]_q`
/// (the truncation defect). Flows are trusted on the first `d/2` columns, where the defect
/// enters only at order `t^{d/2}`.
pub fn rep_q_oscillator(d: usize, q: &RationalComplex) -> Result<OperatorRep, RepError> {
    if d < 2 {
        return Err(RepError::InvalidParameter(format!("Fock dimension must be at least 2, got {d}")));
    }
    if q.is_one() {
        return Err(RepError::InvalidParameter("q must differ from 1".into()));
    }
    let mut x = CMatrix::zeros(d, d);
    let mut y = CMatrix::zeros(d, d);
    for n in 1..d {
        x[(n - 1, n)] = q_number(n, q).to_c64();
        y[(n, n - 1)] = c(1.0, 0.0);
    }
    OperatorRep::new(d).with_op("X", x)?.with_op("Y", y)?.with_meta("q", q.to_c64()).with_pair("Y", "X").map(|r| r.with_verified_cols(d / 2))
}

/// `A₀ = σx`, `A₁ = σz`, a Dolan–Grady pair with `ω = 2`, together with the tower
/// `A₂ = [A₀,A₁]`, `A₃ = [A₀,A₂]`, `A₄ = [A₁,[A₁,A₀]]`.
pub fn rep_pauli_dg() -> OperatorRep {
    let sx = crate::linalg::real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let sz = crate::linalg::real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let pair = crate::flow::DgPair::new(sx, sz).expect("2x2 Pauli matrices");
    let mut rep = OperatorRep::new(2).with_meta("omega", c(2.0, 0.0));
    for (name, m) in pair.operators() {
        rep.insert(&name, m).expect("2x2 matrices");
    }
    rep.with_pair("A0", "A1").expect("A0 and A1 are bound")
}

/// Matrix of `A(s)T⁺ + C(s)T⁻ + B(s)`: entry `(s, s+1) = A(s)`, `(s, s−1) = C(s)`, `(s, s) = B(s)`.
pub(crate) fn stencil_matrix(d: usize, abc: impl Fn(usize) -> [Complex64; 3]) -> CMatrix {
    let mut h = CMatrix::zeros(d, d);
    for s in 0..d {
        let [a, b, cc] = abc(s);
        if s + 1 < d {
            h[(s, s + 1)] = a;
        }
        if s > 0 {
            h[(s, s - 1)] = cc;
        }
        h[(s, s)] = b;
    }
    h
}

/// Birth–death generator `A(s) = p(d−1−s)`, `C(s) = (1−p)s`, `B = −A − C` with `X = diag(s)`.
pub fn rep_krawtchouk(d: usize, p: f64) -> Result<OperatorRep, RepError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(RepError::InvalidParameter(format!("p must lie in (0, 1), got {p}")));
    }
    if d < 3 {
        return Err(RepError::InvalidParameter(format!("dimension must be at least 3, got {d}")));
    }
    let h = stencil_matrix(d, |s| {
        let a = p * (d - 1 - s) as f64;
        let cc = (1.0 - p) * s as f64;
        [c(a, 0.0), c(-a - cc, 0.0), c(cc, 0.0)]
    });
    let x = CMatrix::from_diagonal(&crate::linalg::CVector::from_fn(d, |s, _| c(s as f64, 0.0)));
    OperatorRep::new(d).with_op("H", h)?.with_op("X", x)?.with_meta("p", c(p, 0.0)).with_pair("H", "X")
}

/// Symmetric tridiagonal `H` with i.i.d. uniform `(0, 1)` entries and `X = diag(s)`;
/// a generic pair that satisfies no closure ansatz.
pub fn rep_random_tridiagonal(d: usize, seed: u64) -> OperatorRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = CMatrix::zeros(d, d);
    for s in 0..d {
        h[(s, s)] = c(rng.random::<f64>(), 0.0);
        if s + 1 < d {
            let v = c(rng.random::<f64>(), 0.0);
            h[(s, s + 1)] = v;
            h[(s + 1, s)] = v;
        }
    }
    let x = CMatrix::from_diagonal(&crate::linalg::CVector::from_fn(d, |s, _| c(s as f64, 0.0)));
    OperatorRep::new(d)
        .with_op("H", h)
        .and_then(|r| r.with_op("X", x))
        .and_then(|r| r.with_pair("H", "X"))
        .expect("square matrices of the declared size")
}
