use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{matrix_exp, AdAction, Coefficient, FlowError, UNIT};
use crate::linalg::{commutator, frobenius, relative, CMatrix};
use crate::poly::{Poly1, RationalComplex};

/// Which Dolan–Grady generator plays the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DgHamiltonian {
    A0,
    A1,
}

/// A concrete pair `(A₀, A₁)` with extensions `A₂ = [A₀,A₁]`, `A₃ = [A₀,A₂]`,
/// `A₄ = [A₁,[A₁,A₀]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DgPair {
    pub a0: CMatrix,
    pub a1: CMatrix,
}

impl DgPair {
    pub fn new(a0: CMatrix, a1: CMatrix) -> Result<Self, FlowError> {
        if !a0.is_square() {
            return Err(FlowError::NonSquare { rows: a0.nrows(), cols: a0.ncols() });
        }
        if a1.shape() != a0.shape() {
            return Err(FlowError::DimensionMismatch { expected: a0.nrows(), found: a1.nrows().max(a1.ncols()) });
        }
        Ok(Self { a0, a1 })
    }

    pub fn a2(&self) -> CMatrix {
        commutator(&self.a0, &self.a1)
    }

    pub fn a3(&self) -> CMatrix {
        commutator(&self.a0, &self.a2())
    }

    pub fn a4(&self) -> CMatrix {
        commutator(&self.a1, &commutator(&self.a1, &self.a0))
    }

    /// `A0..A4` by name.
    pub fn operators(&self) -> BTreeMap<String, CMatrix> {
        [("A0", self.a0.clone()), ("A1", self.a1.clone()), ("A2", self.a2()), ("A3", self.a3()), ("A4", self.a4())]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }

    /// Largest relative residual of `ad³_{A₀}A₁ = ω²[A₀,A₁]` and `ad³_{A₁}A₀ = ω²[A₁,A₀]`.
    pub fn dg_residual(&self, omega: Complex64) -> f64 {
        let w2 = omega * omega;
        let side = |h: &CMatrix, x: &CMatrix| {
            let lhs = crate::linalg::ad_power(h, x, 3);
            let rhs = commutator(h, x) * w2;
            relative(frobenius(&(&lhs - &rhs)), frobenius(&lhs).max(frobenius(&rhs)))
        };
        side(&self.a0, &self.a1).max(side(&self.a1, &self.a0))
    }

    fn check(&self, omega: Complex64, tol: f64) -> Result<(), FlowError> {
        let residual = self.dg_residual(omega);
        if residual > tol {
            return Err(FlowError::DgViolation { residual, tol });
        }
        Ok(())
    }
}

/// `sinh(w)/w`, stable near zero.
fn sinhc(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        let w2 = w * w;
        1.0 + w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sinh() / w
    }
}

/// `(cosh(w) − 1)/w² = ½ (sinh(w/2)/(w/2))²`.
fn coshm1c(w: Complex64) -> Complex64 {
    let s = sinhc(w * 0.5);
    s * s * 0.5
}

/// Closed-form Dolan–Grady flow of `A₀, A₁, A₂` under `A₀` or `A₁`:
///
/// - `e^{tA₀}A₁e^{−tA₀} = A₁ + sinh(ωt)/ω A₂ + (cosh(ωt) − 1)/ω² A₃`
/// - `e^{tA₀}A₂e^{−tA₀} = cosh(ωt) A₂ + sinh(ωt)/ω A₃`
/// - `e^{tA₁}A₀e^{−tA₁} = A₀ − sinh(ωt)/ω A₂ + (cosh(ωt) − 1)/ω² A₄`
/// - `e^{tA₁}A₂e^{−tA₁} = cosh(ωt) A₂ − sinh(ωt)/ω A₄`
///
/// The relations are checked first; a residual above `tol` is a [`FlowError::DgViolation`].
pub fn dg_closed_flow(
    pair: &DgPair,
    omega: Complex64,
    hamiltonian: DgHamiltonian,
    t: f64,
    tol: f64,
) -> Result<BTreeMap<String, CMatrix>, FlowError> {
    pair.check(omega, tol)?;
    let wt = omega * t;
    let sh = sinhc(wt) * t;
    let cm = coshm1c(wt) * (t * t);
    let ch = wt.cosh();
    let a2 = pair.a2();
    let mut out = BTreeMap::new();
    match hamiltonian {
        DgHamiltonian::A0 => {
            let a3 = pair.a3();
            out.insert("A0".to_string(), pair.a0.clone());
            out.insert("A1".to_string(), &pair.a1 + &a2 * sh + &a3 * cm);
            out.insert("A2".to_string(), &a2 * ch + &a3 * sh);
        }
        DgHamiltonian::A1 => {
            let a4 = pair.a4();
            out.insert("A0".to_string(), &pair.a0 - &a2 * sh + &a4 * cm);
            out.insert("A1".to_string(), pair.a1.clone());
            out.insert("A2".to_string(), &a2 * ch - &a4 * sh);
        }
    }
    Ok(out)
}

/// `‖TW − WT‖_F` with `W = αA₀ + βA₁ + γA₂`, `T = e^{−τA₀}e^{tA₁}`,
/// `α = ωγ coth(ωt/2) · alpha_factor`, `β = −ωγ coth(ωτ/2)`; no relation check.
pub fn onsager_transfer_residual(
    pair: &DgPair,
    omega: Complex64,
    t: f64,
    tau: f64,
    gamma: f64,
    alpha_factor: f64,
) -> Result<f64, FlowError> {
    if t == 0.0 {
        return Err(FlowError::ZeroParameter("t"));
    }
    if tau == 0.0 {
        return Err(FlowError::ZeroParameter("tau"));
    }
    let coth = |z: Complex64| z.cosh() / z.sinh();
    let alpha = omega * gamma * coth(omega * (t / 2.0)) * alpha_factor;
    let beta = -omega * gamma * coth(omega * (tau / 2.0));
    let w = &pair.a0 * alpha + &pair.a1 * beta + pair.a2() * Complex64::new(gamma, 0.0);
    let tm = matrix_exp(&pair.a0, -tau)? * matrix_exp(&pair.a1, t)?;
    Ok(frobenius(&commutator(&tm, &w)))
}

/// Onsager's commutation `TW = WT` on a pair satisfying the Dolan–Grady relations.
pub fn onsager_transfer_check(
    pair: &DgPair,
    omega: Complex64,
    t: f64,
    tau: f64,
    gamma: f64,
    tol: f64,
) -> Result<f64, FlowError> {
    pair.check(omega, tol)?;
    onsager_transfer_residual(pair, omega, t, tau, gamma, 1.0)
}

/// Tridiagonal-algebra constants: the relations
/// `[A₀, A₀²A₁ + A₁A₀² − βA₀A₁A₀ − γ{A₀,A₁} − αA₁] = 0` and the mirror with `γ₁, α₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalConstants<T = RationalComplex> {
    pub beta: T,
    pub gamma: T,
    pub gamma1: T,
    pub alpha: T,
    pub alpha1: T,
}

impl<T: Coefficient> TridiagonalConstants<T> {
    pub fn to_c64(&self) -> TridiagonalConstants<Complex64> {
        TridiagonalConstants {
            beta: self.beta.to_c64(),
            gamma: self.gamma.to_c64(),
            gamma1: self.gamma1.to_c64(),
            alpha: self.alpha.to_c64(),
            alpha1: self.alpha1.to_c64(),
        }
    }

    /// Largest relative residual of the two tridiagonal relations on `(A₀, A₁)`.
    pub fn relation_residual(&self, a0: &CMatrix, a1: &CMatrix) -> f64 {
        let c = self.to_c64();
        let side = |x: &CMatrix, y: &CMatrix, gamma: Complex64, alpha: Complex64| {
            let terms = [
                x * x * y + y * x * x,
                x * y * x * (-c.beta),
                (x * y + y * x) * (-gamma),
                y * (-alpha),
            ];
            let comms: Vec<CMatrix> = terms.iter().map(|m| commutator(x, m)).collect();
            let total = comms.iter().fold(CMatrix::zeros(x.nrows(), x.ncols()), |acc, m| acc + m);
            let scale = comms.iter().map(frobenius).fold(0.0, f64::max);
            relative(frobenius(&total), scale)
        };
        side(a0, a1, c.gamma, c.alpha).max(side(a1, a0, c.gamma1, c.alpha1))
    }
}

/// Dolan–Grady data: plain (`ω`) or generalized polynomials `g₀..g₃`, `f₀..f₃` with
/// `ad³_{A₀}A₁ = g₁A₁ + g₂A₂ + g₃A₃ + g₀` and `ad³_{A₁}A₀ = f₁A₀ + f₂A₂ + f₃A₄ + f₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGSystem {
    pub omega: Option<RationalComplex>,
    /// `g[i]` is `g_i`.
    pub g: [Poly1; 4],
    /// `f[i]` is `f_i`.
    pub f: [Poly1; 4],
}

impl DGSystem {
    /// Ordinary relations: `g₂ = −f₂ = ω²`, all others zero.
    pub fn plain(omega: RationalComplex) -> Self {
        let w2 = &omega * &omega;
        let mut g: [Poly1; 4] = Default::default();
        let mut f: [Poly1; 4] = Default::default();
        g[2] = Poly1::constant(w2.clone());
        f[2] = Poly1::constant(-w2);
        Self { omega: Some(omega), g, f }
    }

    pub fn generalized(g: [Poly1; 4], f: [Poly1; 4]) -> Self {
        Self { omega: None, g, f }
    }

    /// The tridiagonal algebra as a generalized system:
    /// `g₂ = (β−2)x² + 2γx + α`, `g₃ = (2−β)x − γ`, `f₂ = (2−β)x² − 2γ₁x − α₁`, `f₃ = (2−β)x − γ₁`.
    pub fn tridiagonal(c: &TridiagonalConstants) -> Self {
        let two = RationalComplex::from_int(2);
        let b2 = &c.beta - &two;
        let two_minus_b = -b2.clone();
        let mut g: [Poly1; 4] = Default::default();
        let mut f: [Poly1; 4] = Default::default();
        g[2] = Poly1::new(vec![c.alpha.clone(), &two * &c.gamma, b2]);
        g[3] = Poly1::new(vec![-c.gamma.clone(), two_minus_b.clone()]);
        f[2] = Poly1::new(vec![-c.alpha1.clone(), -(&two * &c.gamma1), two_minus_b.clone()]);
        f[3] = Poly1::new(vec![-c.gamma1.clone(), two_minus_b]);
        Self::generalized(g, f)
    }

    /// `ad_{A₀}` on `(A₁, A₂, A₃, 1)` or `ad_{A₁}` on `(A₀, A₂, A₄, 1)`.
    pub fn ad_action(&self, hamiltonian: DgHamiltonian) -> AdAction {
        let (z, one, m1) = (Poly1::zero(), Poly1::one(), -Poly1::one());
        let zero_row = vec![z.clone(); 4];
        let (h, basis, rows) = match hamiltonian {
            DgHamiltonian::A0 => (
                "A0",
                ["A1", "A2", "A3", UNIT],
                vec![
                    vec![z.clone(), one.clone(), z.clone(), z.clone()],
                    vec![z.clone(), z.clone(), one, z.clone()],
                    vec![self.g[1].clone(), self.g[2].clone(), self.g[3].clone(), self.g[0].clone()],
                    zero_row,
                ],
            ),
            DgHamiltonian::A1 => (
                "A1",
                ["A0", "A2", "A4", UNIT],
                vec![
                    vec![z.clone(), m1.clone(), z.clone(), z.clone()],
                    vec![z.clone(), z.clone(), m1, z.clone()],
                    vec![self.f[1].clone(), self.f[2].clone(), self.f[3].clone(), self.f[0].clone()],
                    zero_row,
                ],
            ),
        };
        AdAction::new(h, &basis, rows).expect("valid builtin")
    }
}

/// `(g₁⁽ⁿ⁾, g₂⁽ⁿ⁾, g₃⁽ⁿ⁾, g₀⁽ⁿ⁾)` with `ad^n_{A₀}A₁ = g₁⁽ⁿ⁾A₁ + g₂⁽ⁿ⁾A₂ + g₃⁽ⁿ⁾A₃ + g₀⁽ⁿ⁾`
/// (or the `f` quadruple over `(A₀, A₂, A₄, 1)` for the `A₁` Hamiltonian).
pub fn generalized_dg_ad(system: &DGSystem, hamiltonian: DgHamiltonian, n: usize) -> [Poly1; 4] {
    let row = system.ad_action(hamiltonian).ad_power_row(0, n);
    row.try_into().expect("four basis slots")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{heisenberg_oracle, numeric_flow};
    use crate::linalg::{c, rel_diff, real_matrix, I};

    fn pauli() -> DgPair {
        let sx = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let sz = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        DgPair::new(sx, sz).unwrap()
    }

    fn sigma_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), -I, I, c(0.0, 0.0)])
    }

    fn rc(n: i64) -> RationalComplex {
        RationalComplex::from_int(n)
    }

    #[test]
    fn pauli_facts() {
        let p = pauli();
        assert!(rel_diff(&p.a2(), &(sigma_y() * c(0.0, -2.0))) < 1e-15);
        assert!(rel_diff(&p.a3(), &p.a1.scale(4.0)) < 1e-15);
        assert!(rel_diff(&p.a4(), &p.a0.scale(4.0)) < 1e-15);
        assert!(p.dg_residual(c(2.0, 0.0)) < 1e-14);
        assert!(p.dg_residual(c(1.0, 0.0)) > 0.1);
    }

    #[test]
    fn closed_flow_matches_oracle() {
        let p = pauli();
        let w = c(2.0, 0.0);
        let a0 = dg_closed_flow(&p, w, DgHamiltonian::A0, 0.3, 1e-10).unwrap();
        let expect = p.a1.scale(0.6f64.cosh()) - sigma_y() * (I * 0.6f64.sinh());
        assert!(rel_diff(&a0["A1"], &expect) < 1e-13);
        let a2 = p.a2() * c(0.6f64.cosh(), 0.0) + p.a3() * c(0.6f64.sinh() / 2.0, 0.0);
        assert!(rel_diff(&a0["A2"], &a2) < 1e-13);
        for t in [-0.7, 0.0, 0.3, 0.95] {
            for (ham, h) in [(DgHamiltonian::A0, &p.a0), (DgHamiltonian::A1, &p.a1)] {
                let flow = dg_closed_flow(&p, w, ham, t, 1e-10).unwrap();
                for (name, m) in [("A0", p.a0.clone()), ("A1", p.a1.clone()), ("A2", p.a2())] {
                    let oracle = heisenberg_oracle(h, &m, t).unwrap();
                    assert!(rel_diff(&flow[name], &oracle) < 1e-12, "{ham:?} {name} t={t}");
                }
            }
        }
    }

    #[test]
    fn violation_is_reported() {
        let p = pauli();
        assert!(matches!(
            dg_closed_flow(&p, c(3.0, 0.0), DgHamiltonian::A0, 0.1, 1e-10),
            Err(FlowError::DgViolation { .. })
        ));
    }

    #[test]
    fn onsager_commutation() {
        let p = pauli();
        let w = c(2.0, 0.0);
        assert!(onsager_transfer_check(&p, w, 0.3, 0.3, 1.0, 1e-10).unwrap() < 1e-10);
        assert_eq!(onsager_transfer_check(&p, w, 0.3, 0.5, 0.0, 1e-10).unwrap(), 0.0);
        assert!(onsager_transfer_residual(&p, w, 0.3, 0.5, 1.0, 1.1).unwrap() > 1e-3);
        assert!(matches!(onsager_transfer_check(&p, w, 0.0, 0.5, 1.0, 1e-10), Err(FlowError::ZeroParameter(_))));
    }

    #[test]
    fn generalized_powers() {
        let plain = DGSystem::plain(rc(3));
        for ham in [DgHamiltonian::A0, DgHamiltonian::A1] {
            let one = generalized_dg_ad(&plain, ham, 1);
            let sign = if ham == DgHamiltonian::A0 { 1 } else { -1 };
            assert_eq!(one, [Poly1::zero(), Poly1::from_ints(&[sign]), Poly1::zero(), Poly1::zero()]);
        }
        let three = generalized_dg_ad(&plain, DgHamiltonian::A0, 3);
        assert_eq!(three, [Poly1::zero(), Poly1::from_ints(&[9]), Poly1::zero(), Poly1::zero()]);
        // ad³_{A₁}A₀ = ω²[A₁,A₀] = −ω²A₂
        let three = generalized_dg_ad(&plain, DgHamiltonian::A1, 3);
        assert_eq!(three, [Poly1::zero(), Poly1::from_ints(&[-9]), Poly1::zero(), Poly1::zero()]);
        // ad^{2n+2}_{A₀}A₁ = ω^{2n}A₃, ad^{2n+2}_{A₁}A₀ = ω^{2n}A₄
        let four = generalized_dg_ad(&plain, DgHamiltonian::A0, 4);
        assert_eq!(four[2], Poly1::from_ints(&[9]));
        let four = generalized_dg_ad(&plain, DgHamiltonian::A1, 4);
        assert_eq!(four[2], Poly1::from_ints(&[9]));
    }

    #[test]
    fn tridiagonal_third_power() {
        let tc = TridiagonalConstants {
            beta: RationalComplex::from_ratio(5, 2),
            gamma: rc(3),
            gamma1: rc(-1),
            alpha: rc(7),
            alpha1: rc(2),
        };
        let sys = DGSystem::tridiagonal(&tc);
        let g = generalized_dg_ad(&sys, DgHamiltonian::A0, 3);
        let half = RationalComplex::from_ratio(1, 2);
        // (g₁, g₂, g₃, g₀)
        assert_eq!(g[0], Poly1::zero());
        assert_eq!(g[1], Poly1::new(vec![rc(7), rc(6), half.clone()]));
        assert_eq!(g[2], Poly1::new(vec![rc(-3), -half]));
        assert_eq!(g[3], Poly1::zero());
    }

    #[test]
    fn dg_ad_action_drives_numeric_flow() {
        let p = pauli();
        let ops = p.operators();
        let sys = DGSystem::plain(rc(2));
        for ham in [DgHamiltonian::A0, DgHamiltonian::A1] {
            let action = sys.ad_action(ham);
            let h = if ham == DgHamiltonian::A0 { &p.a0 } else { &p.a1 };
            assert!(action.relation_residual(h, &ops).unwrap() < 1e-14);
            let num = numeric_flow(&action, h, &ops, 0.4).unwrap();
            let closed = dg_closed_flow(&p, c(2.0, 0.0), ham, 0.4, 1e-10).unwrap();
            assert!(rel_diff(&num["A2"], &closed["A2"]) < 1e-12);
        }
    }

    #[test]
    fn pauli_tridiagonal_relations() {
        let p = pauli();
        let tc = TridiagonalConstants { beta: rc(2), gamma: rc(0), gamma1: rc(0), alpha: rc(4), alpha1: rc(4) };
        assert!(tc.relation_residual(&p.a0, &p.a1) < 1e-15);
        let off = TridiagonalConstants { alpha: rc(5), ..tc };
        assert!(off.relation_residual(&p.a0, &p.a1) > 0.1);
    }
}
