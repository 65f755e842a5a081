//! Least-squares detection of closure ansätze and tridiagonal constants.
//!
//! All fits vectorize the matrices and solve with the SVD on unit-normalized columns,
//! so a badly scaled basis (high powers of `H`) does not distort the numerical rank.

use num_complex::Complex64;

use super::RepError;
use crate::flow::TridiagonalConstants;
use crate::linalg::{commutator, frobenius, identity, least_squares, relative, vectorize, CMatrix, CVector, DEFAULT_RCOND};

/// Default degree bounds `(deg W₁, deg W₂, deg W₀)`: `W₂` linear, the others quadratic.
pub const DEFAULT_BOUNDS: (usize, usize, usize) = (2, 1, 2);

/// `target ≈ W₁(A)B + W₂(A)Y + W₀(A)`, coefficients in ascending powers of `A`.
///
/// For [`detect_closure`] `A = H`, `B = X`, target `ad²_H X`; for [`detect_dual_closure`]
/// `A = X`, `B = H`, target `[Y, X]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureFit {
    pub w1: Vec<Complex64>,
    pub w2: Vec<Complex64>,
    pub w0: Vec<Complex64>,
    /// `‖target − fit‖_F / ‖target‖_F`; absolute when the target vanishes.
    pub residual: f64,
    pub degree_bounds: (usize, usize, usize),
    /// The basis was numerically rank deficient; the coefficients are the minimum-norm solution.
    pub rank_deficient: bool,
}

fn check_pair(a: &CMatrix, b: &CMatrix) -> Result<(), RepError> {
    let d = a.nrows();
    for m in [a, b] {
        if m.nrows() != d || m.ncols() != d {
            return Err(RepError::DimensionMismatch { expected: d, rows: m.nrows(), cols: m.ncols() });
        }
    }
    Ok(())
}

struct Solved {
    x: CVector,
    residual: f64,
    rank_deficient: bool,
    /// Null space in the original (unnormalized) coordinates.
    null_space: CMatrix,
}

/// `min ‖Σ xⱼ colⱼ − target‖` with columns normalized before the SVD.
fn solve(columns: &[CMatrix], target: &CMatrix) -> Solved {
    let n = columns.len();
    let rows = target.len();
    let norms: Vec<f64> = columns.iter().map(frobenius).collect();
    let mut a = CMatrix::zeros(rows, n);
    for (j, col) in columns.iter().enumerate() {
        if norms[j] > 0.0 {
            a.set_column(j, &(vectorize(col) / Complex64::from(norms[j])));
        }
    }
    let b = vectorize(target);
    let ls = least_squares(&a, &b, DEFAULT_RCOND);
    let unscale = |v: CVector| -> CVector {
        CVector::from_fn(n, |j, _| if norms[j] > 0.0 { v[j] / norms[j] } else { Complex64::from(0.0) })
    };
    let mut null_space = ls.null_space.clone();
    for j in 0..n {
        let s = if norms[j] > 0.0 { 1.0 / norms[j] } else { 1.0 };
        null_space.row_mut(j).scale_mut(s);
    }
    Solved {
        x: unscale(ls.solution.clone()),
        residual: relative(ls.residual, b.norm()),
        rank_deficient: ls.rank_deficient(),
        null_space,
    }
}

fn powers(a: &CMatrix, max: usize) -> Vec<CMatrix> {
    let mut out = vec![identity(a.nrows())];
    for k in 1..=max {
        out.push(&out[k - 1] * a);
    }
    out
}

fn fit_ansatz(a: &CMatrix, b: &CMatrix, y: &CMatrix, target: &CMatrix, bounds: (usize, usize, usize)) -> ClosureFit {
    let (d1, d2, d0) = bounds;
    let pw = powers(a, d1.max(d2).max(d0));
    let mut columns = Vec::new();
    columns.extend((0..=d1).map(|k| &pw[k] * b));
    columns.extend((0..=d2).map(|k| &pw[k] * y));
    columns.extend((0..=d0).map(|k| pw[k].clone()));
    if frobenius(target) == 0.0 {
        let zeros = |k: usize| vec![Complex64::from(0.0); k + 1];
        return ClosureFit {
            w1: zeros(d1),
            w2: zeros(d2),
            w0: zeros(d0),
            residual: 0.0,
            degree_bounds: bounds,
            rank_deficient: false,
        };
    }
    let s = solve(&columns, target);
    let x: Vec<Complex64> = s.x.iter().copied().collect();
    ClosureFit {
        w1: x[..=d1].to_vec(),
        w2: x[d1 + 1..=d1 + 1 + d2].to_vec(),
        w0: x[d1 + 2 + d2..].to_vec(),
        residual: s.residual,
        degree_bounds: bounds,
        rank_deficient: s.rank_deficient,
    }
}

/// Fits `ad²_H X ≈ W₁(H)X + W₂(H)Y + W₀(H)` with `Y = [H, X]` and
/// `bounds = (deg W₁, deg W₂, deg W₀)`.
pub fn detect_closure(h: &CMatrix, x: &CMatrix, bounds: (usize, usize, usize)) -> Result<ClosureFit, RepError> {
    check_pair(h, x)?;
    let y = commutator(h, x);
    let target = commutator(h, &y);
    Ok(fit_ansatz(h, x, &y, &target, bounds))
}

/// Fits `[Y, X] ≈ V₁(X)H + V₂(X)Y + V₀(X)` with `Y = [H, X]`; the fields `w1, w2, w0`
/// hold `V₁, V₂, V₀`.
pub fn detect_dual_closure(h: &CMatrix, x: &CMatrix, bounds: (usize, usize, usize)) -> Result<ClosureFit, RepError> {
    check_pair(h, x)?;
    let y = commutator(h, x);
    let target = commutator(&y, x);
    Ok(fit_ansatz(x, h, &y, &target, bounds))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalFit {
    pub constants: TridiagonalConstants<Complex64>,
    /// Largest relative residual of the two relations at the fitted constants.
    pub residual: f64,
    /// The constants are not determined by the pair; the reported ones are the solution
    /// closest to the Dolan–Grady specialization `β = 2, γ = γ₁ = 0`.
    pub underdetermined: bool,
}

/// Fits `(β, γ, γ₁, α, α₁)` in
/// `[A₀, A₀²A₁ + A₁A₀² − βA₀A₁A₀ − γ{A₀,A₁} − αA₁] = 0` and its mirror
/// (with `γ₁, α₁` and the roles of `A₀, A₁` exchanged), jointly by least squares.
pub fn fit_tridiagonal_constants(a0: &CMatrix, a1: &CMatrix) -> Result<TridiagonalFit, RepError> {
    check_pair(a0, a1)?;
    let d = a0.nrows();
    let zero = CMatrix::zeros(d, d);
    // Each relation contributes rows: target = β·cβ + γ·cγ + α·cα.
    let side = |x: &CMatrix, y: &CMatrix| {
        let target = commutator(x, &(x * x * y + y * x * x));
        let cb = commutator(x, &(x * y * x));
        let cg = commutator(x, &(x * y + y * x));
        let ca = commutator(x, y);
        (target, cb, cg, ca)
    };
    let (t0, b0, g0, al0) = side(a0, a1);
    let (t1, b1, g1, al1) = side(a1, a0);
    let stack = |top: &CMatrix, bottom: &CMatrix| {
        let mut m = CMatrix::zeros(2 * d, d);
        m.rows_mut(0, d).copy_from(top);
        m.rows_mut(d, d).copy_from(bottom);
        m
    };
    let columns = [stack(&b0, &b1), stack(&g0, &zero), stack(&zero, &g1), stack(&al0, &zero), stack(&zero, &al1)];
    let s = solve(&columns, &stack(&t0, &t1));
    let mut x = s.x.clone();
    if s.null_space.ncols() > 0 {
        // Move along the null space towards β = 2, γ = γ₁ = 0.
        let anchor = [Complex64::from(2.0), Complex64::from(0.0), Complex64::from(0.0)];
        let p = s.null_space.rows(0, 3).into_owned();
        let rhs = CVector::from_fn(3, |i, _| anchor[i] - x[i]);
        let z = least_squares(&p, &rhs, DEFAULT_RCOND).solution;
        x += &s.null_space * z;
    }
    let constants = TridiagonalConstants { beta: x[0], gamma: x[1], gamma1: x[2], alpha: x[3], alpha1: x[4] };
    let residual = constants.relation_residual(a0, a1);
    Ok(TridiagonalFit { constants, residual, underdetermined: s.rank_deficient })
}
