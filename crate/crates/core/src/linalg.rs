//! Dense complex matrix helpers shared by the numeric oracles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c(x, 0.0)))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// `ad_h^n x`.
pub fn ad_power(h: &CMatrix, x: &CMatrix, n: usize) -> CMatrix {
    (0..n).fold(x.clone(), |acc, _| commutator(h, &acc))
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖a − b‖_F / ‖b‖_F`, falling back to the absolute norm when `b` vanishes.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    relative(frobenius(&(a - b)), frobenius(b))
}

/// Relative residual with absolute fallback for a zero reference.
pub fn relative(residual: f64, reference: f64) -> f64 {
    if reference > 0.0 {
        residual / reference
    } else {
        residual
    }
}

/// Column-stacking vectorisation.
pub fn vectorize(a: &CMatrix) -> CVector {
    CVector::from_iterator(a.len(), a.iter().copied())
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
}

/// A Haar-ish random unitary from the QR factor of a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    random_matrix(rng, n, 1.0).qr().q()
}

/// Minimum-norm least-squares solution of `a x ≈ b` via the SVD.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub solution: CVector,
    /// Numerical rank, singular values above `rcond · σ_max`.
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Orthonormal basis of the numerical null space (columns).
    pub null_space: CMatrix,
    /// `‖a x − b‖₂`.
    pub residual: f64,
}

impl LeastSquares {
    pub fn rank_deficient(&self) -> bool {
        self.rank < self.solution.len()
    }
}

pub const DEFAULT_RCOND: f64 = 1e-10;

/// Solves `min ‖a x − b‖` returning the minimum-norm minimiser.
///
/// Requires `a.nrows() >= a.ncols()`; callers pad with zero rows otherwise.
pub fn least_squares(a: &CMatrix, b: &CVector, rcond: f64) -> LeastSquares {
    let (m, n) = a.shape();
    let padded;
    let (a, b) = if m < n {
        padded = (a.clone().resize_vertically(n, ZERO), b.clone().resize_vertically(n, ZERO));
        (&padded.0, &padded.1)
    } else {
        (a, b)
    };
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let cut = rcond * smax;
    let mut x = CVector::zeros(n);
    let mut rank = 0;
    let mut null_cols = Vec::new();
    for (k, &s) in sigma.iter().enumerate() {
        let vk = v_t.row(k).adjoint();
        if s > cut && s > 0.0 {
            rank += 1;
            let coef = u.column(k).dotc(b) / s;
            x += vk * coef;
        } else {
            null_cols.push(vk);
        }
    }
    let null_space = if null_cols.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&null_cols)
    };
    let residual = (a * &x - b).norm();
    LeastSquares { solution: x, rank, singular_values: sigma, null_space, residual }
}
