use super::{matrix_exp, FlowError};
use crate::linalg::{c, identity, CMatrix};
use crate::poly::RationalComplex;

const THETA: f64 = 0.25;
const MAX_TERMS: usize = 40;

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `φ(Y; t) = Σ_{n≥1} tⁿ ωⁿ⁻¹ Yⁿ⁻¹ / n!`, i.e. `∫₀ᵗ e^{ωτY} dτ`, valid for singular `Y`.
///
/// The series is summed at `t / 2ˢ` where it converges fast and then doubled with
/// `φ(2t) = φ(t) + e^{ωtY} φ(t)`.
pub fn qosc_phi(y: &CMatrix, omega: f64, t: f64) -> Result<CMatrix, FlowError> {
    if !y.is_square() {
        return Err(FlowError::NonSquare { rows: y.nrows(), cols: y.ncols() });
    }
    let n = y.nrows();
    let a = y * c(omega * t, 0.0);
    let norm = one_norm(&a);
    if !norm.is_finite() {
        return Err(FlowError::Overflow);
    }
    let s = if norm > THETA { (norm / THETA).log2().ceil() as i32 } else { 0 };
    let ts = t / 2f64.powi(s);
    let a = a.unscale(2f64.powi(s));

    // φ(ts) = ts · Σ_{k≥0} aᵏ/(k+1)!, e^{a} = Σ aᵏ/k!.
    let mut power = identity(n);
    let mut phi = identity(n);
    let mut exp = identity(n);
    let mut fact = 1.0;
    for k in 1..=MAX_TERMS {
        power = &power * &a;
        fact *= k as f64;
        let term = power.unscale(fact);
        exp += &term;
        phi += term.unscale((k + 1) as f64);
        if one_norm(&term) <= 1e-19 * one_norm(&exp) {
            break;
        }
    }
    phi *= c(ts, 0.0);
    for _ in 0..s {
        phi = &phi + &exp * &phi;
        exp = &exp * &exp;
    }
    Ok(phi)
}

/// Closed-form `q`-oscillator flow `e^{tY} X e^{−tY} = e^{ωtY} X − φ(Y; t)`, `ω = 1 − q`.
pub fn qosc_closed_flow(y: &CMatrix, x: &CMatrix, q: &RationalComplex, t: f64) -> Result<CMatrix, FlowError> {
    let omega = (RationalComplex::one() - q).to_c64();
    if omega.norm() == 0.0 {
        return Err(FlowError::ZeroParameter("1 - q"));
    }
    if omega.im != 0.0 {
        // Complex ω: evaluate through the complex-time exponential.
        return closed_flow_complex(y, x, omega, t);
    }
    if x.shape() != y.shape() {
        return Err(FlowError::DimensionMismatch { expected: y.nrows(), found: x.nrows().max(x.ncols()) });
    }
    let e = matrix_exp(y, omega.re * t)?;
    Ok(e * x - qosc_phi(y, omega.re, t)?)
}

fn closed_flow_complex(y: &CMatrix, x: &CMatrix, omega: num_complex::Complex64, t: f64) -> Result<CMatrix, FlowError> {
    // Treat ωY as the generator with unit rate: φ(Y;t) = ∫₀ᵗ e^{τ ωY} dτ.
    let wy = y * omega;
    let e = super::matrix_exp(&wy, t)?;
    Ok(e * x - qosc_phi(&wy, 1.0, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::heisenberg_oracle;
    use crate::linalg::{max_abs, real_matrix};

    #[test]
    fn scalar_phi() {
        let y = real_matrix(1, 1, &[2.0]);
        let phi = qosc_phi(&y, 1.0, 0.5).unwrap();
        assert!((phi[(0, 0)].re - (1f64.exp() - 1.0) / 2.0).abs() < 1e-15);
        // Large argument exercises the doubling.
        let phi = qosc_phi(&y, 1.0, 4.0).unwrap();
        assert!((phi[(0, 0)].re - (8f64.exp() - 1.0) / 2.0).abs() < 1e-12 * 8f64.exp());
    }

    #[test]
    fn singular_y() {
        let y = CMatrix::zeros(2, 2);
        let phi = qosc_phi(&y, 0.5, 1.5).unwrap();
        assert!(max_abs(&(phi - identity(2).scale(1.5))) < 1e-15);
        let nil = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let phi = qosc_phi(&nil, 2.0, 0.5).unwrap();
        // t + ω t²/2 · N
        assert!(max_abs(&(phi - real_matrix(2, 2, &[0.5, 0.25, 0.0, 0.5]))) < 1e-15);
    }

    #[test]
    fn t_zero_is_identity_map() {
        let y = real_matrix(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let x = real_matrix(2, 2, &[0.0, 1.0, 3.0, 0.0]);
        let out = qosc_closed_flow(&y, &x, &RationalComplex::from_ratio(1, 2), 0.0).unwrap();
        assert!(max_abs(&(out - x)) == 0.0);
    }

    #[test]
    fn weyl_like_two_by_two_matches_oracle() {
        // XY − qYX = 1 holds exactly for these 1x1 scalars only when (1−q)xy = 1.
        let q = RationalComplex::from_ratio(1, 2);
        let y = real_matrix(1, 1, &[4.0]);
        let x = real_matrix(1, 1, &[0.5]);
        let out = qosc_closed_flow(&y, &x, &q, 0.7).unwrap();
        let oracle = heisenberg_oracle(&y, &x, 0.7).unwrap();
        assert!(max_abs(&(out - oracle)) < 1e-14);
    }

    #[test]
    fn q_equal_one_rejected() {
        let y = identity(2);
        assert!(matches!(
            qosc_closed_flow(&y, &y, &RationalComplex::one(), 0.1),
            Err(FlowError::ZeroParameter(_))
        ));
    }
}
