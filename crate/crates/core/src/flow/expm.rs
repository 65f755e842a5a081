//! Matrix exponential by scaling and squaring around a truncated Taylor core.

use num_complex::Complex64;

use super::FlowError;
use crate::linalg::{identity, CMatrix};

/// Norm bound for the scaled matrix handed to the Taylor core.
const THETA: f64 = 0.25;
const MAX_TERMS: usize = 40;
const MAX_SQUARINGS: u32 = 1100;

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(t·M)`.
pub fn matrix_exp(m: &CMatrix, t: f64) -> Result<CMatrix, FlowError> {
    matrix_exp_c(m, Complex64::new(t, 0.0))
}

/// `exp(t·M)` for complex `t`.
pub fn matrix_exp_c(m: &CMatrix, t: Complex64) -> Result<CMatrix, FlowError> {
    if !m.is_square() {
        return Err(FlowError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    let a = m * t;
    let norm = one_norm(&a);
    if !norm.is_finite() || a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(FlowError::Overflow);
    }
    if norm == 0.0 {
        return Ok(identity(n));
    }
    let s = if norm > THETA { (norm / THETA).log2().ceil() as u32 } else { 0 };
    if s > MAX_SQUARINGS {
        return Err(FlowError::Overflow);
    }
    let a = a.unscale(2f64.powi(s as i32));

    // Taylor core; ‖a‖₁ ≤ 1/4 so the remainder after k terms is below 4^-k / k!.
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &a).unscale(k as f64);
        sum += &term;
        if one_norm(&term) <= f64::EPSILON * 1e-3 * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    if sum.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(FlowError::Overflow);
    }
    Ok(sum)
}

/// Ground-truth Heisenberg evolution `exp(tH) · X · exp(−tH)`.
pub fn heisenberg_oracle(h: &CMatrix, x: &CMatrix, t: f64) -> Result<CMatrix, FlowError> {
    if !h.is_square() {
        return Err(FlowError::NonSquare { rows: h.nrows(), cols: h.ncols() });
    }
    if x.shape() != h.shape() {
        return Err(FlowError::DimensionMismatch { expected: h.nrows(), found: x.nrows().max(x.ncols()) });
    }
    let fwd = matrix_exp(h, t)?;
    let back = matrix_exp(h, -t)?;
    Ok(fwd * x * back)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs, real_matrix, rel_diff, I};

    #[test]
    fn zero_and_nilpotent() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(matrix_exp(&z, 1.7).unwrap(), identity(3));
        let n = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = matrix_exp(&n, 0.7).unwrap();
        assert!(max_abs(&(e - (identity(2) + n.scale(0.7)))) < 1e-16);
    }

    #[test]
    fn diagonal_exponential() {
        let d = real_matrix(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let e = matrix_exp(&d, 1.0).unwrap();
        let expect = real_matrix(2, 2, &[1f64.exp(), 0.0, 0.0, 2f64.exp()]);
        assert!(rel_diff(&e, &expect) < 1e-13);
    }

    #[test]
    fn rotation_generator() {
        // exp(t [[0,-1],[1,0]]) = rotation by t, here with ‖tM‖ = 10.
        let j = real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let t = 10.0;
        let e = matrix_exp(&j, t).unwrap();
        let expect = real_matrix(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!(rel_diff(&e, &expect) < 1e-13);
    }

    #[test]
    fn agrees_with_nalgebra_reference() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [3, 6, 9] {
            let m = crate::linalg::random_matrix(&mut rng, n, 1.0);
            let ours = matrix_exp(&m, 1.3).unwrap();
            let reference = (m * c(1.3, 0.0)).exp();
            assert!(rel_diff(&ours, &reference) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn complex_time() {
        let d = real_matrix(1, 1, &[2.0]);
        let e = matrix_exp_c(&d, I * 0.5).unwrap();
        assert!((e[(0, 0)] - c(1f64.cos(), 1f64.sin())).norm() < 1e-15);
    }

    #[test]
    fn overflow_is_reported() {
        let d = real_matrix(1, 1, &[1e300]);
        assert!(matches!(matrix_exp(&d, 1e10), Err(FlowError::Overflow)));
        let nan = real_matrix(1, 1, &[f64::NAN]);
        assert!(matches!(matrix_exp(&nan, 1.0), Err(FlowError::Overflow)));
    }

    #[test]
    fn oracle_examples() {
        let x = real_matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let h = real_matrix(2, 2, &[0.5, 0.0, 0.0, -1.0]);
        assert!(max_abs(&(heisenberg_oracle(&h, &x, 0.0).unwrap() - &x)) == 0.0);
        let t = 0.8;
        let out = heisenberg_oracle(&h, &x, t).unwrap();
        let d = [0.5, -1.0];
        for i in 0..2 {
            for j in 0..2 {
                let expect = (t * (d[i] - d[j])).exp() * x[(i, j)].re;
                assert!((out[(i, j)] - c(expect, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn oracle_pauli() {
        let sx = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let sz = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let sy = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), -I, I, c(0.0, 0.0)]);
        for t in [-0.9, 0.1, 0.45] {
            let out = heisenberg_oracle(&sx, &sz, t).unwrap();
            let expect = sz.scale((2.0 * t).cosh()) - sy.clone() * (I * (2.0 * t).sinh());
            assert!(rel_diff(&out, &expect) < 1e-14);
        }
    }

    #[test]
    fn oracle_dimension_mismatch() {
        let h = identity(2);
        let x = identity(3);
        assert!(matches!(heisenberg_oracle(&h, &x, 0.1), Err(FlowError::DimensionMismatch { .. })));
    }
}
