use num_complex::Complex64;

use super::{AdAction, Coefficient, FlowError, TridiagonalConstants, UNIT};
use crate::linalg::{anticommutator, commutator, frobenius, identity, relative, CMatrix};
use crate::poly::{Poly1, RationalComplex};

/// `ad_Y^n X = U_n(Y) X + V_n(Y) Z + W_n(Y)` in the Askey–Wilson Z-presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UVWTriple {
    pub n: usize,
    pub u: Poly1,
    pub v: Poly1,
    pub w: Poly1,
}

/// Orders `0..=n` of
/// `U_{n+1} = (1−q)x U_n + q⁻¹ V_n`, `V_{n+1} = −U_n + (1−q⁻¹)x V_n`,
/// `W_{n+1} = −C₃ U_n + C₁ q⁻¹ V_n`, from `U₀ = 1`, `V₀ = W₀ = 0`.
pub fn uvw_recurrence(
    n: usize,
    q: &RationalComplex,
    c1: &RationalComplex,
    c3: &RationalComplex,
) -> Result<Vec<UVWTriple>, FlowError> {
    let qi = q.inv().ok_or(FlowError::ZeroParameter("q"))?;
    let one = RationalComplex::one();
    let a = Poly1::monomial(&one - q, 1);
    let d = Poly1::monomial(&one - &qi, 1);
    let c1qi = c1 * &qi;
    let mut out = vec![UVWTriple { n: 0, u: Poly1::one(), v: Poly1::zero(), w: Poly1::zero() }];
    for k in 0..n {
        let prev = &out[k];
        let u = &a * &prev.u + prev.v.scale(&qi);
        let v = -&prev.u + &d * &prev.v;
        let w = prev.u.scale(&-c3.clone()) + prev.v.scale(&c1qi);
        out.push(UVWTriple { n: k + 1, u, v, w });
    }
    Ok(out)
}

/// Scalar flow coefficients: `X(t) = E₁ X + E₂ Z + E₀` at a fixed eigenvalue `x` of `Y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AwFlow {
    pub e1: Complex64,
    pub e2: Complex64,
    pub e0: Complex64,
}

/// Roots of `ω² + x(2 − q − q⁻¹)(x − ω) + q⁻¹ = 0`.
pub fn characteristic_roots(x: Complex64, q: Complex64) -> (Complex64, Complex64) {
    let (m, delta) = mean_and_half_gap(&System::new(x, q));
    (m + delta, m - delta)
}

/// The constant system `E' = M E` with `M = [[a, b], [c, d]]`.
struct System {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl System {
    fn new(x: Complex64, q: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let qi = one / q;
        Self { a: (one - q) * x, b: qi, c: -one, d: (one - qi) * x }
    }
}

/// Mean `m` of the eigenvalues and half their difference `δ` (`δ² = ((a−d)/2)² + bc`).
fn mean_and_half_gap(s: &System) -> (Complex64, Complex64) {
    let m = (s.a + s.d) * 0.5;
    let h = (s.a - s.d) * 0.5;
    (m, (h * h + s.b * s.c).sqrt())
}

fn expm1(z: Complex64) -> Complex64 {
    let (a, b) = (z.re, z.im);
    let half = (0.5 * b).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

/// `∫₀ᵗ e^{zτ} dτ`.
fn psi(z: Complex64, t: f64) -> Complex64 {
    let zt = z * t;
    if zt.norm() < 1e-5 {
        t * (1.0 + zt / 2.0 + zt * zt / 6.0 + zt * zt * zt / 24.0)
    } else {
        expm1(zt) / z
    }
}

/// `sinh(w)/w`.
fn sinhc(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        let w2 = w * w;
        1.0 + w2 / 6.0 + w2 * w2 / 120.0
    } else {
        w.sinh() / w
    }
}

/// `∫₀ᵗ τᵏ e^{mτ} dτ`.
fn moment(k: usize, m: Complex64, t: f64) -> Complex64 {
    let mt = m * t;
    if mt.norm() <= 1.0 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(t.powi(k as i32 + 1), 0.0); // mⁿ t^{n+k+1} / n!
        for n in 0..40 {
            sum += term / (n + k + 1) as f64;
            term *= mt / (n + 1) as f64;
        }
        sum
    } else {
        let e = (mt).exp();
        let mut j = psi(m, t);
        for i in 1..=k {
            j = (t.powi(i as i32) * e - i as f64 * j) / m;
        }
        j
    }
}

/// Closed-form Askey–Wilson flow coefficients at the eigenvalue `x` of the Hamiltonian `Y`.
///
/// Solves `E₁' = (1−q)x E₁ + q⁻¹E₂`, `E₂' = −E₁ + (1−q⁻¹)x E₂` from `(1, 0)` through the
/// eigen-decomposition, written as `e^{Mt} = e^{mt}[cosh(δt) I + sinh(δt)/δ (M − mI)]`
/// with eigenvalues `m ± δ`; at a double root (`δ → 0`) this is the limiting
/// `e^{mt}(I + t(M − mI))` form. `E₀ = −C₃∫E₁ + C₁q⁻¹∫E₂`.
pub fn aw_closed_flow(
    x: Complex64,
    q: Complex64,
    c1: Complex64,
    c3: Complex64,
    t: f64,
) -> Result<AwFlow, FlowError> {
    if q.norm() == 0.0 {
        return Err(FlowError::ZeroParameter("q"));
    }
    let s = System::new(x, q);
    let (m, delta) = mean_and_half_gap(&s);
    let em = (m * t).exp();
    let sh = t * sinhc(delta * t);
    let ch = (delta * t).cosh();
    let e1 = em * (ch + sh * (s.a - m));
    let e2 = em * sh * s.c;

    // ∫₀ᵗ e^{Mτ} dτ = g0 I + g1 (M − mI).
    let (pp, pm) = (psi(m + delta, t), psi(m - delta, t));
    let g0 = (pp + pm) * 0.5;
    let g1 = if (delta * t).norm() > 1e-2 {
        (pp - pm) / (delta * 2.0)
    } else {
        // τ sinh(δτ)/δ = Σ_j δ^{2j} τ^{2j+1} / (2j+1)!
        let d2 = delta * delta;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut coef = Complex64::new(1.0, 0.0);
        for j in 0..5 {
            sum += coef * moment(2 * j + 1, m, t);
            coef *= d2 / ((2 * j + 2) * (2 * j + 3)) as f64;
        }
        sum
    };
    let int_e1 = g0 + g1 * (s.a - m);
    let int_e2 = g1 * s.c;
    let e0 = -c3 * int_e1 + c1 * s.b * int_e2;
    Ok(AwFlow { e1, e2, e0 })
}

/// Which K-generator plays the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KHamiltonian {
    K1,
    K2,
}

/// Constants of the K-presentation
/// `[K₁,K₂] = K₃`,
/// `[K₂,K₃] = 2ρK₂K₁K₂ + a₁{K₁,K₂} + a₂K₂² + c₁K₁ + dK₂ + g₁`,
/// `[K₃,K₁] = 2ρK₁K₂K₁ + a₂{K₁,K₂} + a₁K₁² + c₂K₂ + dK₁ + g₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct AWKPresentation<T = RationalComplex> {
    pub rho: T,
    pub a1: T,
    pub a2: T,
    pub c1: T,
    pub c2: T,
    pub d: T,
    pub g1: T,
    pub g2: T,
}

impl<T: Coefficient> AWKPresentation<T> {
    /// The `ρ = a₂ = d = 0` specialisation.
    pub fn qj3(a1: T, c1: T, c2: T, g1: T, g2: T) -> Self {
        let z = T::from_int(0);
        Self { rho: z.clone(), a1, a2: z.clone(), c1, c2, d: z, g1, g2 }
    }

    pub fn is_qj3(&self) -> bool {
        let z = T::from_int(0);
        self.rho == z && self.a2 == z && self.d == z
    }

    /// `β = 2(1−ρ)`, `α = −c₂`, `α₁ = −c₁`, `γ = −a₂`, `γ₁ = −a₁` with `A₀ = K₁`, `A₁ = K₂`.
    pub fn tridiagonal(&self) -> TridiagonalConstants<T> {
        TridiagonalConstants {
            beta: T::from_int(2) * (T::from_int(1) - self.rho.clone()),
            gamma: -self.a2.clone(),
            gamma1: -self.a1.clone(),
            alpha: -self.c2.clone(),
            alpha1: -self.c1.clone(),
        }
    }

    pub fn to_c64(&self) -> AWKPresentation<Complex64> {
        AWKPresentation {
            rho: self.rho.to_c64(),
            a1: self.a1.to_c64(),
            a2: self.a2.to_c64(),
            c1: self.c1.to_c64(),
            c2: self.c2.to_c64(),
            d: self.d.to_c64(),
            g1: self.g1.to_c64(),
            g2: self.g2.to_c64(),
        }
    }

    /// Largest relative residual of the two defining relations with `K₃ = [K₁, K₂]`.
    pub fn relation_residual(&self, k1: &CMatrix, k2: &CMatrix) -> f64 {
        let c = self.to_c64();
        let k3 = commutator(k1, k2);
        let id = identity(k1.nrows());
        let anti = anticommutator(k1, k2);
        let check = |lhs: CMatrix, terms: [CMatrix; 6]| {
            let total = terms.iter().fold(lhs.clone(), |acc, m| acc - m);
            let scale = terms.iter().map(frobenius).fold(frobenius(&lhs), f64::max);
            relative(frobenius(&total), scale)
        };
        let second = check(
            commutator(k2, &k3),
            [
                k2 * k1 * k2 * (c.rho * 2.0),
                &anti * c.a1,
                k2 * k2 * c.a2,
                k1 * c.c1,
                k2 * c.d,
                &id * c.g1,
            ],
        );
        let third = check(
            commutator(&k3, k1),
            [
                k1 * k2 * k1 * (c.rho * 2.0),
                &anti * c.a2,
                k1 * k1 * c.a1,
                k2 * c.c2,
                k1 * c.d,
                &id * c.g2,
            ],
        );
        second.max(third)
    }
}

impl AWKPresentation {
    /// `(R₂, R₁, R₀)` with `[K₂,[K₂,K₁]] = R₂(K₂)K₁ + R₁(K₂)K₃ + R₀(K₂)`.
    pub fn r_polys(&self) -> [Poly1; 3] {
        let two = RationalComplex::from_int(2);
        [
            Poly1::new(vec![-self.c1.clone(), -(&two * &self.a1), -(&two * &self.rho)]),
            Poly1::new(vec![-self.a1.clone(), -(&two * &self.rho)]),
            Poly1::new(vec![-self.g1.clone(), -self.d.clone(), -self.a2.clone()]),
        ]
    }

    /// `(S₂, S₁, S₀)` with `[K₁,[K₁,K₂]] = S₂(K₁)K₂ + S₁(K₁)K₃ + S₀(K₁)`.
    pub fn s_polys(&self) -> [Poly1; 3] {
        let two = RationalComplex::from_int(2);
        [
            Poly1::new(vec![-self.c2.clone(), -(&two * &self.a2), -(&two * &self.rho)]),
            Poly1::new(vec![self.a2.clone(), &two * &self.rho]),
            Poly1::new(vec![-self.g2.clone(), -self.d.clone(), -self.a1.clone()]),
        ]
    }

    /// `ad_{K₂}` on `(K₁, K₃, 1)` or `ad_{K₁}` on `(K₂, K₃, 1)`.
    pub fn ad_action(&self, hamiltonian: KHamiltonian) -> AdAction {
        let z = Poly1::zero;
        match hamiltonian {
            KHamiltonian::K2 => {
                let [r2, r1, r0] = self.r_polys();
                // [K₂,K₁] = −K₃ and [K₂,K₃] = −[K₂,[K₂,K₁]].
                let rows = vec![
                    vec![z(), -Poly1::one(), z()],
                    vec![-r2, -r1, -r0],
                    vec![z(), z(), z()],
                ];
                AdAction::new("K2", &["K1", "K3", UNIT], rows).expect("valid builtin")
            }
            KHamiltonian::K1 => {
                let [s2, s1, s0] = self.s_polys();
                let rows = vec![vec![z(), Poly1::one(), z()], vec![s2, s1, s0], vec![z(), z(), z()]];
                AdAction::new("K1", &["K2", "K3", UNIT], rows).expect("valid builtin")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(n: i64, d: i64) -> RationalComplex {
        RationalComplex::from_ratio(n, d)
    }

    fn cx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn k_presentation_basics() {
        let qj3 = AWKPresentation::qj3(rc(1, 2), rc(2, 1), rc(-1, 1), rc(0, 1), rc(3, 1));
        assert!(qj3.is_qj3());
        let tc = qj3.tridiagonal();
        assert_eq!(tc.beta, RationalComplex::from_int(2));
        assert_eq!(tc.gamma1, rc(-1, 2));
        assert_eq!(tc.alpha, RationalComplex::one());
        assert_eq!(tc.alpha1, rc(-2, 1));
        let general = AWKPresentation { rho: rc(1, 4), ..qj3.clone() };
        assert!(!general.is_qj3());
        assert_eq!(general.tridiagonal().beta, rc(3, 2));
        let [_, r1, _] = general.r_polys();
        assert_eq!(r1, Poly1::new(vec![rc(-1, 2), rc(-1, 2)]));
    }

    #[test]
    fn recurrence_first_orders() {
        let (q, c1, c3) = (rc(1, 2), rc(3, 1), rc(-2, 5));
        let uvw = uvw_recurrence(2, &q, &c1, &c3).unwrap();
        assert_eq!(uvw[0].u, Poly1::one());
        assert!(uvw[0].v.is_zero() && uvw[0].w.is_zero());
        assert_eq!(uvw[1].u, Poly1::monomial(rc(1, 2), 1));
        assert_eq!(uvw[1].v, Poly1::from_ints(&[-1]));
        assert_eq!(uvw[1].w, Poly1::constant(rc(2, 5)));
        // U₂ = (1−q)²x² − q⁻¹
        assert_eq!(uvw[2].u, Poly1::new(vec![rc(-2, 1), rc(0, 1), rc(1, 4)]));
        assert!(matches!(uvw_recurrence(1, &RationalComplex::zero(), &c1, &c3), Err(FlowError::ZeroParameter(_))));
    }

    #[test]
    fn degree_law() {
        for q in [rc(1, 2), rc(-3, 7)] {
            let uvw = uvw_recurrence(30, &q, &rc(1, 3), &rc(5, 2)).unwrap();
            for t in &uvw[1..] {
                assert_eq!(t.u.degree(), Some(t.n));
                assert!(t.v.degree().is_none_or(|d| d < t.n));
                assert!(t.w.degree().is_none_or(|d| d < t.n));
            }
        }
    }

    #[test]
    fn roots_solve_characteristic_equation() {
        for (x, q) in [(1.0, 0.5), (-2.0, 3.0), (0.3, -0.7)] {
            let (x, q) = (cx(x), cx(q));
            let (r1, r2) = characteristic_roots(x, q);
            for w in [r1, r2] {
                let val = w * w + x * (2.0 - q - 1.0 / q) * (x - w) + 1.0 / q;
                assert!(val.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn initial_values() {
        let f = aw_closed_flow(cx(0.7), cx(0.5), cx(1.0), cx(2.0), 0.0).unwrap();
        assert_eq!(f, AwFlow { e1: cx(1.0), e2: cx(0.0), e0: cx(0.0) });
    }

    #[test]
    fn harmonic_limit() {
        for t in [-1.3, 0.2, 2.5] {
            let f = aw_closed_flow(cx(0.8), cx(1.0), cx(0.0), cx(0.0), t).unwrap();
            assert!((f.e1 - cx(t.cos())).norm() < 1e-12);
            assert!((f.e2 - cx(-t.sin())).norm() < 1e-12);
        }
    }

    fn series(x: f64, q: RationalComplex, c1: RationalComplex, c3: RationalComplex, t: f64, order: usize) -> AwFlow {
        let uvw = uvw_recurrence(order, &q, &c1, &c3).unwrap();
        let mut out = AwFlow { e1: cx(0.0), e2: cx(0.0), e0: cx(0.0) };
        let mut coef = 1.0;
        for (n, tr) in uvw.iter().enumerate() {
            if n > 0 {
                coef *= t / n as f64;
            }
            out.e1 += tr.u.eval_c64(cx(x)) * coef;
            out.e2 += tr.v.eval_c64(cx(x)) * coef;
            out.e0 += tr.w.eval_c64(cx(x)) * coef;
        }
        out
    }

    fn close(a: AwFlow, b: AwFlow, tol: f64) -> bool {
        (a.e1 - b.e1).norm() < tol && (a.e2 - b.e2).norm() < tol && (a.e0 - b.e0).norm() < tol
    }

    #[test]
    fn matches_series() {
        let (q, c1, c3) = (rc(1, 2), rc(3, 2), rc(-1, 3));
        let closed = aw_closed_flow(cx(1.0), q.to_c64(), c1.to_c64(), c3.to_c64(), 0.1).unwrap();
        let ser = series(1.0, q, c1, c3, 0.1, 20);
        assert!(close(closed, ser, 1e-13), "{closed:?} vs {ser:?}");
    }

    #[test]
    fn confluent_and_near_confluent() {
        // Double root when ((q⁻¹ − q)x/2)² = q⁻¹.
        let q = 0.5f64;
        let x0 = 2.0 / q.sqrt() / (1.0 / q - q);
        let (r1, r2) = characteristic_roots(cx(x0), cx(q));
        assert!((r1 - r2).norm() < 1e-7);
        for x in [x0, x0 + 1e-9, x0 + 1e-5, x0 - 1e-3] {
            let closed = aw_closed_flow(cx(x), cx(q), cx(0.7), cx(-1.1), 0.3).unwrap();
            let ser = series(x, rc(1, 2), rc(7, 10), rc(-11, 10), 0.3, 30);
            assert!(close(closed, ser, 1e-13), "x = {x}: {closed:?} vs {ser:?}");
        }
    }

    #[test]
    fn satisfies_ode() {
        let (x, q, c1, c3) = (cx(0.9), cx(0.4), cx(1.3), cx(-0.6));
        let h = 1e-5;
        for t in [-0.8, 0.25, 1.7] {
            let f = |t| aw_closed_flow(x, q, c1, c3, t).unwrap();
            let (p, m, z) = (f(t + h), f(t - h), f(t));
            let d1 = (p.e1 - m.e1) / (2.0 * h);
            let d2 = (p.e2 - m.e2) / (2.0 * h);
            let d0 = (p.e0 - m.e0) / (2.0 * h);
            assert!((d1 - ((1.0 - q) * x * z.e1 + z.e2 / q)).norm() < 1e-9);
            assert!((d2 - (-z.e1 + (1.0 - 1.0 / q) * x * z.e2)).norm() < 1e-9);
            assert!((d0 - (-c3 * z.e1 + c1 / q * z.e2)).norm() < 1e-9);
        }
    }
}
